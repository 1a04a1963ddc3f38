//! Dirichlet strip `|x1| < a, x2 = 0` by a single-layer potential.
//!
//! `u_sc(x) = int G(x, (t, 0)) mu(t) dt` with `G = -(i/4) H0(k rho)` and
//! `mu(t) = phi(t/a) / sqrt(a^2 - t^2)`, `phi = sum c_n T_n`. The kernel is
//! split as `G = J0(k rho) log(rho) / (2 pi) + R(rho^2)` with `R` entire, so
//! for a fixed observation point every smooth factor is a Chebyshev series in
//! `s = t/a` and the singular factors (logarithm and Cauchy kernel) are
//! integrated exactly against the weighted Chebyshev basis.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{incident, reject_branch_point, validate_k, FieldSample, KnownField, WaveParameters};
use crate::error::{Error, Result};
use crate::special::{Bessel01, EULER_GAMMA, SERIES_RADIUS};
use crate::surface::{build_strip_surface, Side, SommerfeldSurface, SurfacePoint};

type C = Complex64;
const ZERO: C = C { re: 0.0, im: 0.0 };

/// Required tail ratio of a converged density.
pub const TAIL_TOLERANCE: f64 = 1e-10;

const CACHE_LIMIT: usize = 400_000;

#[derive(Clone, Debug, PartialEq)]
pub struct StripDensity {
    /// Chebyshev coefficients of `phi(s) = mu(a s) sqrt(a^2 - a^2 s^2)`.
    pub coefficients: Vec<C>,
    pub k: C,
    pub a: f64,
    pub phi_in: f64,
}

impl StripDensity {
    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    /// `|c_{N-1}| / max |c_n|`, taking the larger of the last two so that a
    /// parity-vanishing last coefficient does not fake convergence.
    pub fn tail_ratio(&self) -> f64 {
        let n = self.coefficients.len();
        let max = self.coefficients.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            return 0.0;
        }
        let last = self.coefficients[n - 1].norm().max(if n > 1 { self.coefficients[n - 2].norm() } else { 0.0 });
        last / max
    }

    /// Far-field amplitude `int exp(-i k t cos(phi)) mu(t) dt`.
    pub fn far_field(&self, phi: f64) -> C {
        let m = 2 * self.coefficients.len() + 32;
        let mut sum = ZERO;
        for j in 0..m {
            let th = PI * (j as f64 + 0.5) / m as f64;
            let s = th.cos();
            let mut dens = ZERO;
            for (n, c) in self.coefficients.iter().enumerate() {
                dens += c * (n as f64 * th).cos();
            }
            sum += dens * (-C::i() * self.k * self.a * s * phi.cos()).exp();
        }
        sum * (PI / m as f64)
    }
}

struct ChebTable {
    nodes: Vec<f64>,
    cos: Vec<f64>,
}

fn cheb_table(n: usize) -> &'static ChebTable {
    static TABLES: OnceLock<Vec<ChebTable>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| {
        [32usize, 64, 128, 256]
            .iter()
            .map(|&n| {
                let nodes = (0..n).map(|j| (PI * (j as f64 + 0.5) / n as f64).cos()).collect();
                let mut cos = vec![0.0; n * n];
                for k in 0..n {
                    for j in 0..n {
                        cos[k * n + j] = (PI * (k * (2 * j + 1)) as f64 / (2 * n) as f64).cos();
                    }
                }
                ChebTable { nodes, cos }
            })
            .collect()
    });
    let idx = match n {
        32 => 0,
        64 => 1,
        128 => 2,
        _ => 3,
    };
    &tables[idx]
}

fn dct(t: &ChebTable, vals: &[C]) -> Vec<C> {
    let n = vals.len();
    let mut out = vec![ZERO; n];
    for (k, o) in out.iter_mut().enumerate() {
        let row = &t.cos[k * n..(k + 1) * n];
        let mut s = ZERO;
        for (v, c) in vals.iter().zip(row) {
            s += v * *c;
        }
        *o = s * (2.0 / n as f64);
    }
    out[0] *= 0.5;
    out
}

/// Smooth kernel factors at one value of `rho^2`:
/// `J0(k rho)`, `E = 2 J1(k rho)/(k rho)`, `R`, and `dR/d(rho^2)`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct KernelPieces {
    pub j0: C,
    pub e: C,
    pub r: C,
    pub dr: C,
}

/// Constant term of `R` at `rho = 0`.
pub(crate) fn r0(k: C) -> C {
    C::new(0.0, -0.25) + ((k * 0.5).ln() + EULER_GAMMA) / (2.0 * PI)
}

pub(crate) fn kernel_pieces(k: C, r0: C, rho2: f64) -> KernelPieces {
    let k2 = k * k;
    if k2.norm() * rho2 <= SERIES_RADIUS * SERIES_RADIUS {
        let q = k2 * rho2 * 0.25;
        let mq = -q;
        let mut a = C::new(1.0, 0.0);
        let mut b = C::new(1.0, 0.0);
        let (mut j0, mut e, mut s, mut ds) = (a, a, ZERO, ZERO);
        let mut h = 0.0;
        for m in 1..200 {
            let mf = m as f64;
            h += 1.0 / mf;
            ds += b * h;
            a *= mq / (mf * mf);
            j0 += a;
            e += a / (mf + 1.0);
            s -= a * h;
            b *= mq / ((mf + 1.0) * mf);
            if mf * mf > q.norm() && a.norm() * h < 1e-17 && b.norm() * h < 1e-17 {
                break;
            }
        }
        KernelPieces {
            j0,
            e,
            r: r0 * j0 + s / (2.0 * PI),
            dr: k2 * 0.25 * (-r0 * e + ds / (2.0 * PI)),
        }
    } else {
        let rho = rho2.sqrt();
        let z = k * rho;
        let bes = Bessel01::eval(z).expect("nonzero argument");
        let g = C::new(0.0, -0.25) * bes.h0;
        let e = 2.0 * bes.j1 / z;
        let ln = rho.ln();
        let dg = C::i() * k / (8.0 * rho) * bes.h1;
        KernelPieces {
            j0: bes.j0,
            e,
            r: g - bes.j0 * ln / (2.0 * PI),
            dr: dg - (-(k2 * 0.25) * e * ln + bes.j0 / (2.0 * rho2)) / (2.0 * PI),
        }
    }
}

/// Joukowski preimage `w` with `|w| >= 1` of `z = (w + 1/w)/2`. The sign of
/// the zero imaginary part selects the side of the segment `[-1, 1]`.
pub(crate) fn joukowski(z: C) -> C {
    let w = z + (z - 1.0).sqrt() * (z + 1.0).sqrt();
    if w.norm() < 1.0 {
        1.0 / w
    } else {
        w
    }
}

/// Basis integrals at one observation point for Chebyshev modes `0..n`.
struct BasisIntegrals {
    value: Vec<C>,
    grad: Option<[Vec<C>; 2]>,
}

fn orth(f: &[C], n: usize) -> C {
    match n {
        0 => PI * f[0],
        _ if n < f.len() => 0.5 * PI * f[n],
        _ => ZERO,
    }
}

/// `sum_m f_m (M_{m+n} + M_{|m-n|}) / 2`.
fn product_moment(f: &[C], moments: &[C], n: usize) -> C {
    let mut s = ZERO;
    for (m, fm) in f.iter().enumerate() {
        s += fm * (moments[m + n] + moments[m.abs_diff(n)]);
    }
    0.5 * s
}

fn product_moment_real(f: &[C], moments: &[f64], n: usize) -> C {
    let mut s = ZERO;
    for (m, fm) in f.iter().enumerate() {
        s += fm * (moments[m + n] + moments[m.abs_diff(n)]);
    }
    0.5 * s
}

fn basis_integrals(k: C, a: f64, r0v: C, x: [f64; 2], n: usize, with_grad: bool) -> BasisIntegrals {
    // expansions of the smooth factors in s, refined until their tails vanish
    let mut nq = 32;
    let (t, vals) = loop {
        let t = cheb_table(nq);
        let vals: Vec<KernelPieces> = t
            .nodes
            .iter()
            .map(|&s| {
                let d = x[0] - a * s;
                kernel_pieces(k, r0v, d * d + x[1] * x[1])
            })
            .collect();
        let j0: Vec<C> = vals.iter().map(|p| p.j0).collect();
        let r: Vec<C> = vals.iter().map(|p| p.r).collect();
        let cj = dct(t, &j0);
        let cr = dct(t, &r);
        let tail = |c: &[C]| {
            let max = c.iter().map(|v| v.norm()).fold(1e-300, f64::max);
            c[c.len() - 3..].iter().map(|v| v.norm()).fold(0.0, f64::max) / max
        };
        if nq >= 256 || (tail(&cj) < 1e-13 && tail(&cr) < 1e-13) {
            break (t, (vals, cj, cr));
        }
        nq *= 2;
    };
    let (pieces, cj, cr) = vals;

    let z = C::new(x[0] / a, x[1] / a);
    let w = joukowski(z);
    let winv = 1.0 / w;
    let np = nq + n;
    let mut pow = Vec::with_capacity(np);
    let mut p = C::new(1.0, 0.0);
    for _ in 0..np {
        pow.push(p);
        p *= winv;
    }
    let mut logm = vec![ZERO; np];
    logm[0] = C::new(PI * (w.norm() * 0.5).ln() + PI * a.ln(), 0.0);
    for (q, lm) in logm.iter_mut().enumerate().skip(1) {
        *lm = C::new(-PI / q as f64 * pow[q].re, 0.0);
    }

    let mut value = Vec::with_capacity(n);
    for m in 0..n {
        value.push(product_moment(&cj, &logm, m) / (2.0 * PI) + orth(&cr, m));
    }
    if !with_grad {
        return BasisIntegrals { value, grad: None };
    }

    let sq = (w - winv) * 0.5;
    let mut k1 = vec![0.0; np];
    let mut k2 = vec![0.0; np];
    for q in 0..np {
        let c = PI * pow[q] / sq;
        k1[q] = c.re / a;
        k2[q] = -c.im / a;
    }
    let f1: Vec<C> = t.nodes.iter().zip(&pieces).map(|(&s, p)| (x[0] - a * s) * p.e).collect();
    let g1: Vec<C> = t.nodes.iter().zip(&pieces).map(|(&s, p)| 2.0 * (x[0] - a * s) * p.dr).collect();
    let e: Vec<C> = pieces.iter().map(|p| p.e).collect();
    let dr: Vec<C> = pieces.iter().map(|p| p.dr).collect();
    let (cf1, cg1, ce, cdr) = (dct(t, &f1), dct(t, &g1), dct(t, &e), dct(t, &dr));
    let lead = -(k * k) * 0.5 / (2.0 * PI);
    let mut d1 = Vec::with_capacity(n);
    let mut d2 = Vec::with_capacity(n);
    for m in 0..n {
        d1.push(
            lead * product_moment(&cf1, &logm, m)
                + product_moment_real(&cj, &k1, m) / (2.0 * PI)
                + orth(&cg1, m),
        );
        d2.push(
            lead * x[1] * product_moment(&ce, &logm, m)
                + product_moment_real(&cj, &k2, m) / (2.0 * PI)
                + 2.0 * x[1] * orth(&cdr, m),
        );
    }
    BasisIntegrals { value, grad: Some([d1, d2]) }
}

/// Solve for the densities of several incidence angles with one factorization.
pub fn solve_strip_many(k: C, a: f64, angles: &[f64], n: usize) -> Result<Vec<StripDensity>> {
    validate_k(k)?;
    for &phi_in in angles {
        WaveParameters { k, phi_in, a }.validate()?;
    }
    if n < 8 {
        return Err(Error::InvalidParameter { field: "N", reason: format!("need N >= 8, got {n}") });
    }
    let r0v = r0(k);
    let nodes: Vec<f64> = (0..n).map(|j| (PI * (j as f64 + 0.5) / n as f64).cos()).collect();
    let mut mat = DMatrix::<C>::zeros(n, n);
    for (i, &s) in nodes.iter().enumerate() {
        let b = basis_integrals(k, a, r0v, [a * s, 0.0], n, false);
        for (j, v) in b.value.into_iter().enumerate() {
            mat[(i, j)] = v;
        }
    }
    let lu = mat.lu();
    let mut out = Vec::with_capacity(angles.len());
    for &phi_in in angles {
        let rhs = DVector::from_iterator(n, nodes.iter().map(|&s| -incident(k, phi_in, [a * s, 0.0]).u));
        let sol = lu.solve(&rhs).ok_or(Error::Singular(f64::INFINITY))?;
        let d = StripDensity { coefficients: sol.iter().copied().collect(), k, a, phi_in };
        let tail = d.tail_ratio();
        if !(tail < TAIL_TOLERANCE) {
            return Err(Error::NonConvergence { order: n, tail });
        }
        out.push(d);
    }
    Ok(out)
}

pub fn solve_strip(params: &WaveParameters, n: usize) -> Result<StripDensity> {
    params.validate()?;
    Ok(solve_strip_many(params.k, params.a, &[params.phi_in], n)?.remove(0))
}

/// Total field of the strip on its two-sheeted surface, for several
/// incidence angles at once.
pub struct StripField {
    surface: SommerfeldSurface,
    k: C,
    a: f64,
    r0: C,
    angles: Vec<f64>,
    densities: Vec<StripDensity>,
    cache: Mutex<HashMap<(u64, u64), Vec<FieldSample>>>,
}

impl StripField {
    pub fn solve(k: C, a: f64, angles: &[f64], n: usize) -> Result<Self> {
        let densities = solve_strip_many(k, a, angles, n)?;
        Self::from_densities(densities)
    }

    pub fn from_densities(densities: Vec<StripDensity>) -> Result<Self> {
        let first = densities
            .first()
            .ok_or_else(|| Error::InvalidParameter { field: "densities", reason: "empty".into() })?;
        let (k, a) = (first.k, first.a);
        if densities.iter().any(|d| d.k != k || d.a != a) {
            return Err(Error::InvalidParameter { field: "densities", reason: "mixed k or a".into() });
        }
        Ok(Self {
            surface: build_strip_surface(a)?,
            k,
            a,
            r0: r0(k),
            angles: densities.iter().map(|d| d.phi_in).collect(),
            densities,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn densities(&self) -> &[StripDensity] {
        &self.densities
    }

    pub fn half_length(&self) -> f64 {
        self.a
    }

    /// Scattered field alone on the physical sheet.
    pub fn scattered(&self, x: [f64; 2]) -> Vec<FieldSample> {
        let n = self.densities.iter().map(|d| d.order()).max().unwrap_or(0);
        let b = basis_integrals(self.k, self.a, self.r0, x, n, true);
        let [g1, g2] = b.grad.expect("gradient requested");
        self.densities
            .iter()
            .map(|d| {
                let mut s = FieldSample::default();
                for (i, c) in d.coefficients.iter().enumerate() {
                    s.u += c * b.value[i];
                    s.grad[0] += c * g1[i];
                    s.grad[1] += c * g2[i];
                }
                s
            })
            .collect()
    }

    /// Physical-sheet total field; `x[1]` may be a signed zero on the strip.
    fn physical(&self, x: [f64; 2]) -> Vec<FieldSample> {
        let key = (x[0].to_bits(), x[1].to_bits());
        if let Some(v) = self.cache.lock().expect("cache lock").get(&key) {
            return v.clone();
        }
        let mut out = self.scattered(x);
        for (s, &phi) in out.iter_mut().zip(&self.angles) {
            let inc = incident(self.k, phi, x);
            s.u += inc.u;
            s.grad[0] += inc.grad[0];
            s.grad[1] += inc.grad[1];
        }
        let mut cache = self.cache.lock().expect("cache lock");
        if cache.len() >= CACHE_LIMIT {
            cache.clear();
        }
        cache.insert(key, out.clone());
        out
    }
}

impl KnownField for StripField {
    fn surface(&self) -> &SommerfeldSurface {
        &self.surface
    }

    fn wavenumber(&self) -> C {
        self.k
    }

    fn angles(&self) -> &[f64] {
        &self.angles
    }

    fn sample(&self, p: &SurfacePoint) -> Result<Vec<FieldSample>> {
        reject_branch_point(&self.surface, p)?;
        let on_cut = p.x2 == 0.0 && p.x1.abs() < self.a;
        let mut x2 = p.x2;
        if on_cut {
            x2 = match p.side {
                Side::Left => 0.0,
                Side::Right => -0.0,
                Side::None => {
                    return Err(Error::Precondition(format!("point ({}, 0) on the cut needs a side", p.x1)))
                }
            };
        }
        if p.sheet == 1 {
            return Ok(self.physical([p.x1, x2]));
        }
        // second sheet by odd reflection across the strip line
        Ok(self
            .physical([p.x1, -x2])
            .into_iter()
            .map(|s| FieldSample { u: -s.u, grad: [-s.grad[0], s.grad[1]] })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pieces_match_across_switch() {
        let k = C::new(2.0, 0.02);
        let r0v = r0(k);
        let rho2 = (SERIES_RADIUS / k.norm()).powi(2);
        let a = kernel_pieces(k, r0v, rho2 * (1.0 - 1e-12));
        let b = kernel_pieces(k, r0v, rho2 * (1.0 + 1e-12));
        assert!((a.r - b.r).norm() < 1e-9, "{} {}", a.r, b.r);
        assert!((a.dr - b.dr).norm() < 1e-9, "{} {}", a.dr, b.dr);
        assert!((a.e - b.e).norm() < 1e-10);
    }

    #[test]
    fn pieces_rebuild_the_kernel() {
        let k = C::new(2.0, 0.02);
        let r0v = r0(k);
        for &rho in &[0.05, 0.7, 2.3] {
            let p = kernel_pieces(k, r0v, rho * rho);
            let g = p.j0 * f64::ln(rho) / (2.0 * PI) + p.r;
            let exact = C::new(0.0, -0.25) * crate::special::hankel1_0(k * rho).unwrap();
            assert!((g - exact).norm() < 1e-13 * exact.norm().max(1.0));
            let h = 1e-5;
            let gp = |r: f64| {
                let q = kernel_pieces(k, r0v, r * r);
                q.r
            };
            let fd = (gp((rho * rho + h).sqrt()) - gp((rho * rho - h).sqrt())) / (2.0 * h);
            assert!((fd - p.dr).norm() < 1e-7, "{fd} {}", p.dr);
        }
    }

    #[test]
    fn joukowski_sides() {
        let up = joukowski(C::new(0.3, 0.0));
        let down = joukowski(C::new(0.3, -0.0));
        assert!((up.im - (1.0f64 - 0.09).sqrt()).abs() < 1e-15);
        assert!((down.im + (1.0f64 - 0.09).sqrt()).abs() < 1e-15);
        let far = joukowski(C::new(-3.0, 0.5));
        assert!(far.norm() > 1.0);
        assert!(((far + 1.0 / far) * 0.5 - C::new(-3.0, 0.5)).norm() < 1e-14);
    }

    #[test]
    fn tail_ratio_uses_last_two() {
        let d = StripDensity {
            coefficients: vec![C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(1e-3, 0.0), C::new(0.0, 0.0)],
            k: C::new(1.0, 0.0),
            a: 1.0,
            phi_in: 0.0,
        };
        assert!((d.tail_ratio() - 1e-3).abs() < 1e-18);
    }

    #[test]
    fn low_order_is_flagged() {
        let r = solve_strip(&WaveParameters::default(), 8);
        assert!(matches!(r, Err(Error::NonConvergence { order: 8, .. })));
        assert!(solve_strip(&WaveParameters::default(), 4).is_err());
    }
}
