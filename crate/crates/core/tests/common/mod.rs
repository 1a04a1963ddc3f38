#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sommerfeld::field::{StripField, DEFAULT_K};
use sommerfeld::green::ComplexPoint2;

type C = Complex64;

pub const FOUR_ANGLES: [f64; 4] = [PI / 7.0, PI / 3.0, 2.0 * PI / 3.0, 5.0 * PI / 6.0];

pub fn basis_point() -> ComplexPoint2 {
    ComplexPoint2::from_real_points([-0.2, 0.6], [0.2, 0.6])
}

pub fn strip4() -> StripField {
    StripField::solve(DEFAULT_K, 1.0, &FOUR_ANGLES, 64).unwrap()
}

/// Continues a solution of Bessel's equation of order zero,
/// `z y'' + y' + z y = 0`, along the arc `|z| = const` from `z0` through the
/// angle `sweep`, by local Taylor series. `y0`, `dy0` are the data at `z0`.
pub fn bessel0_along_arc(z0: C, y0: C, dy0: C, sweep: f64, steps: usize) -> (C, C) {
    let r = z0.norm();
    let t0 = z0.arg();
    let (mut y, mut dy) = (y0, dy0);
    let mut z = z0;
    for i in 1..=steps {
        let next = C::from_polar(r, t0 + sweep * i as f64 / steps as f64);
        let t = next - z;
        // Taylor coefficients c_n about z
        let mut c = vec![y, dy];
        let mut n = 0;
        loop {
            let cm1 = if n == 0 { C::new(0.0, 0.0) } else { c[n - 1] };
            let nf = n as f64;
            let next_c = -((nf + 1.0) * (nf + 1.0) * c[n + 1] + z * c[n] + cm1) / (z * (nf + 2.0) * (nf + 1.0));
            c.push(next_c);
            n += 1;
            if n > 8 && (next_c * t.powu(n as u32 + 1)).norm() < 1e-18 * y.norm().max(1e-300) {
                break;
            }
            if n > 200 {
                break;
            }
        }
        let mut p = C::new(1.0, 0.0);
        let (mut yv, mut dv) = (C::new(0.0, 0.0), C::new(0.0, 0.0));
        for (k, ck) in c.iter().enumerate() {
            yv += ck * p;
            if k + 1 < c.len() {
                dv += c[k + 1] * (k as f64 + 1.0) * p;
            }
            p *= t;
        }
        y = yv;
        dy = dv;
        z = next;
    }
    (y, dy)
}

/// Log-uniform modulus in `[rmin, rmax]`, argument uniform away from the cut.
pub fn random_z(rng: &mut ChaCha8Rng, rmin: f64, rmax: f64) -> C {
    let r = rmin * (rmax / rmin).powf(rng.gen::<f64>());
    let t = rng.gen_range(-0.999 * PI..0.999 * PI);
    C::from_polar(r, t)
}
