//! Complex-argument Bessel and Hankel functions of orders 0 and 1, and the
//! zeroth-order Hankel function on the universal cover of the punctured plane.
//!
//! Power series are used for `|z| <= 12` and the Hankel asymptotic expansion
//! beyond. At the seam both agree to roughly eleven digits.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use errorfunctions::ComplexErrorFunctions;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Switch-over modulus between the power series and the asymptotic expansion.
pub const SERIES_RADIUS: f64 = 12.0;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// J0, J1, Y0, Y1 and the first-kind Hankel functions of orders 0 and 1 at one
/// argument. Computing them together shares the series work.
#[derive(Clone, Copy, Debug)]
pub struct Bessel01 {
    pub j0: Complex64,
    pub j1: Complex64,
    pub y0: Complex64,
    pub y1: Complex64,
    pub h0: Complex64,
    pub h1: Complex64,
}

impl Bessel01 {
    /// Panics on `z == 0` only through the Y functions being infinite; callers
    /// that need Y or H must go through [`Bessel01::eval`].
    pub fn eval(z: Complex64) -> Result<Self> {
        if z.norm() == 0.0 {
            return Err(Error::Domain("Y0/Y1/H(1) are singular at z = 0".into()));
        }
        if z.norm() <= SERIES_RADIUS {
            Ok(series(z))
        } else {
            Ok(asymptotic(z))
        }
    }
}

fn series(z: Complex64) -> Bessel01 {
    let q = z * z * 0.25;
    let neg_q = -q;
    // J0 / Y0 sums
    let mut t0 = Complex64::new(1.0, 0.0);
    let mut j0 = t0;
    let mut s0 = Complex64::new(0.0, 0.0);
    // J1 / Y1 sums (without the leading z/2)
    let mut t1 = Complex64::new(1.0, 0.0);
    let mut j1 = t1;
    // psi(1) + psi(2) = -2 gamma + 1
    let mut s1 = t1 * (1.0 - 2.0 * EULER_GAMMA);
    let mut harmonic = 0.0;
    for m in 1..200 {
        let mf = m as f64;
        harmonic += 1.0 / mf;
        t0 *= neg_q / (mf * mf);
        t1 *= neg_q / (mf * (mf + 1.0));
        j0 += t0;
        s0 += t0 * harmonic;
        j1 += t1;
        let psi_sum = 2.0 * harmonic + 1.0 / (mf + 1.0) - 2.0 * EULER_GAMMA;
        s1 += t1 * psi_sum;
        let tiny = 1e-17;
        if t0.norm() <= tiny * j0.norm().max(s0.norm()).max(1e-300)
            && t1.norm() <= tiny * j1.norm().max(s1.norm()).max(1e-300)
            && mf * mf > q.norm()
        {
            break;
        }
    }
    let half_z = z * 0.5;
    let j1 = half_z * j1;
    let log_half = half_z.ln();
    let y0 = (2.0 / PI) * ((log_half + EULER_GAMMA) * j0 - s0);
    let y1 = -2.0 / (PI * z) + (2.0 / PI) * log_half * j1 - half_z * s1 / PI;
    Bessel01 { j0, j1, y0, y1, h0: j0 + I * y0, h1: j1 + I * y1 }
}

/// Sum of `(+-i)^k a_k(nu) / z^k`, truncated at the smallest term.
fn hankel_asymptotic_sum(nu: f64, z: Complex64, sign: f64) -> Complex64 {
    let mu = 4.0 * nu * nu;
    let step = Complex64::new(0.0, sign) / z;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        let next = term * step * ((mu - odd * odd) / (8.0 * k as f64));
        let size = next.norm();
        if size >= last {
            break;
        }
        term = next;
        sum += term;
        last = size;
        if size < 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

/// H(1) and H(2) of orders 0 and 1 from the Hankel expansions, accurate for
/// `Re z >= 0` only.
fn asymptotic_pair(z: Complex64) -> [Complex64; 4] {
    let pref = (2.0 / (PI * z)).sqrt();
    let phase0 = z - FRAC_PI_4;
    let phase1 = z - FRAC_PI_2 - FRAC_PI_4;
    [
        pref * (I * phase0).exp() * hankel_asymptotic_sum(0.0, z, 1.0),
        pref * (I * phase1).exp() * hankel_asymptotic_sum(1.0, z, 1.0),
        pref * (-I * phase0).exp() * hankel_asymptotic_sum(0.0, z, -1.0),
        pref * (-I * phase1).exp() * hankel_asymptotic_sum(1.0, z, -1.0),
    ]
}

fn asymptotic(z: Complex64) -> Bessel01 {
    if z.re >= 0.0 {
        let [h0, h1, h0b, h1b] = asymptotic_pair(z);
        return Bessel01 {
            j0: (h0 + h0b) * 0.5,
            j1: (h1 + h1b) * 0.5,
            y0: (h0 - h0b) / (2.0 * I),
            y1: (h1 - h1b) / (2.0 * I),
            h0,
            h1,
        };
    }
    // The H(2) expansion misses its Stokes term near arg z = pi; continue
    // from w = -z, with z = w exp(+-i pi) on the principal branch.
    let [h0, h1, h0b, h1b] = asymptotic_pair(-z);
    let (j0w, j1w) = ((h0 + h0b) * 0.5, (h1 + h1b) * 0.5);
    let (y0w, y1w) = ((h0 - h0b) / (2.0 * I), (h1 - h1b) / (2.0 * I));
    let j0 = j0w;
    let j1 = -j1w;
    if z.im >= 0.0 {
        Bessel01 { j0, j1, y0: y0w + 2.0 * I * j0w, y1: -y1w - 2.0 * I * j1w, h0: -h0b, h1: h1b }
    } else {
        Bessel01 {
            j0,
            j1,
            y0: y0w - 2.0 * I * j0w,
            y1: -y1w + 2.0 * I * j1w,
            h0: 2.0 * h0 + h0b,
            h1: -(2.0 * h1 + h1b),
        }
    }
}

/// J0(z). Entire; defined everywhere.
pub fn bessel_j0(z: Complex64) -> Complex64 {
    if z.norm() == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    Bessel01::eval(z).map(|b| b.j0).unwrap_or(Complex64::new(1.0, 0.0))
}

/// J1(z).
pub fn bessel_j1(z: Complex64) -> Complex64 {
    if z.norm() == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    Bessel01::eval(z).map(|b| b.j1).unwrap_or_default()
}

pub fn bessel_y0(z: Complex64) -> Result<Complex64> {
    Bessel01::eval(z).map(|b| b.y0)
}

pub fn bessel_y1(z: Complex64) -> Result<Complex64> {
    Bessel01::eval(z).map(|b| b.y1)
}

/// Principal-branch H0^(1)(z), `arg z` in `(-pi, pi]`.
pub fn hankel1_0(z: Complex64) -> Result<Complex64> {
    Bessel01::eval(z).map(|b| b.h0)
}

/// Principal-branch H1^(1)(z).
pub fn hankel1_1(z: Complex64) -> Result<Complex64> {
    Bessel01::eval(z).map(|b| b.h1)
}

/// A point `z * exp(i m pi)` of the universal cover of `C \ {0}`, with `z` on
/// the principal sheet.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoverArgument {
    pub z: Complex64,
    pub m: i64,
}

impl CoverArgument {
    pub fn new(z: Complex64, m: i64) -> Result<Self> {
        if z.norm() == 0.0 || !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::Domain(format!("cover argument must be finite and nonzero, got {z}")));
        }
        Ok(Self { z, m })
    }

    /// Canonical representative for a modulus and an unbounded argument.
    pub fn from_polar(modulus: f64, total_arg: f64) -> Self {
        let principal = wrap_angle(total_arg);
        let m = ((total_arg - principal) / PI).round() as i64;
        Self { z: Complex64::from_polar(modulus, principal), m }
    }

    pub fn total_arg(&self) -> f64 {
        self.z.arg() + self.m as f64 * PI
    }

    /// The plain complex number `z exp(i m pi)`; loses the sheet.
    pub fn value(&self) -> Complex64 {
        if self.m % 2 == 0 {
            self.z
        } else {
            -self.z
        }
    }
}

/// Wrap an angle into `(-pi, pi]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut t = theta % two_pi;
    if t <= -PI {
        t += two_pi;
    } else if t > PI {
        t -= two_pi;
    }
    t
}

/// H0^(1) continued to `z exp(i m pi)`: `H0(z) - 2 m J0(z)`.
pub fn hankel1_0_cover(a: CoverArgument) -> Result<Complex64> {
    let b = Bessel01::eval(a.z)?;
    Ok(b.h0 - 2.0 * a.m as f64 * b.j0)
}

/// H1^(1) continued to `z exp(i m pi)`: `(-1)^m (H1(z) - 2 m J1(z))`.
pub fn hankel1_1_cover(a: CoverArgument) -> Result<Complex64> {
    let b = Bessel01::eval(a.z)?;
    let v = b.h1 - 2.0 * a.m as f64 * b.j1;
    Ok(if a.m % 2 == 0 { v } else { -v })
}

/// `d/dz H0^(1)(z e^{i m pi})` with respect to the principal `z`:
/// `-(H1(z) - 2 m J1(z))`.
pub fn hankel1_0_cover_dz(a: CoverArgument) -> Result<Complex64> {
    let b = Bessel01::eval(a.z)?;
    Ok(-(b.h1 - 2.0 * a.m as f64 * b.j1))
}

/// `0.5 erfc(-e^{-i pi/4} x)`, equal to `e^{-i pi/4}/sqrt(pi) * int_{-inf}^x e^{i t^2} dt`.
pub fn fresnel_sommerfeld(x: Complex64) -> Complex64 {
    let rot = Complex64::from_polar(1.0, -FRAC_PI_4);
    0.5 * (-(rot * x)).erfc()
}

/// Derivative of [`fresnel_sommerfeld`].
pub fn fresnel_sommerfeld_dx(x: Complex64) -> Complex64 {
    Complex64::from_polar(1.0, -FRAC_PI_4) / PI.sqrt() * (I * x * x).exp()
}
