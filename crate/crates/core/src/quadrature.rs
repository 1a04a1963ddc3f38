//! Quadrature rules and Chebyshev utilities.

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Gauss-Kronrod 7/15 nodes on `[-1, 1]`, listed left to right.
pub fn gk15_nodes() -> [f64; 15] {
    let mut x = [0.0; 15];
    for i in 0..7 {
        x[i] = -XGK[i];
        x[14 - i] = XGK[i];
    }
    x[7] = 0.0;
    x
}

/// Kronrod and Gauss weights aligned with [`gk15_nodes`]. Gauss weights are
/// zero on the Kronrod-only nodes.
pub fn gk15_weights() -> ([f64; 15], [f64; 15]) {
    let mut wk = [0.0; 15];
    let mut wg = [0.0; 15];
    for i in 0..7 {
        wk[i] = WGK[i];
        wk[14 - i] = WGK[i];
        if i % 2 == 1 {
            wg[i] = WG[i / 2];
            wg[14 - i] = WG[i / 2];
        }
    }
    wk[7] = WGK[7];
    wg[7] = WG[3];
    (wk, wg)
}

/// One G7K15 panel: returns (Kronrod estimate, |Kronrod - Gauss|).
pub fn gk15_panel<F>(f: &mut F, a: f64, b: f64) -> Result<(Complex64, f64)>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let nodes = gk15_nodes();
    let (wk, wg) = gk15_weights();
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = Complex64::new(0.0, 0.0);
    let mut g = Complex64::new(0.0, 0.0);
    for i in 0..15 {
        let v = f(c + h * nodes[i])?;
        k += wk[i] * v;
        g += wg[i] * v;
    }
    Ok((k * h, ((k - g) * h).norm()))
}

/// Adaptive G7K15 on `[a, b]`. The panel with the largest error estimate is
/// bisected until the summed estimate is below `max(abs_tol, rel_tol |I|)`.
/// `max_panels` bounds the work.
pub fn adaptive_gk15<F>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64, max_panels: usize) -> Result<Complex64>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let tol = Tolerance { abs: abs_tol, rel: rel_tol, max_panels };
    let (v, _) = adaptive_gk15_vec(|x| Ok(vec![f(x)?]), a, b, 1, tol)?;
    Ok(v[0])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_panels: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs: 1e-11, rel: 1e-11, max_panels: 4000 }
    }
}

struct Panel {
    lo: f64,
    hi: f64,
    val: Vec<Complex64>,
    err: f64,
}

fn gk15_panel_vec<F>(f: &mut F, a: f64, b: f64, dim: usize) -> Result<Panel>
where
    F: FnMut(f64) -> Result<Vec<Complex64>>,
{
    let nodes = gk15_nodes();
    let (wk, wg) = gk15_weights();
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = vec![Complex64::new(0.0, 0.0); dim];
    let mut g = vec![Complex64::new(0.0, 0.0); dim];
    for i in 0..15 {
        let v = f(c + h * nodes[i])?;
        for d in 0..dim {
            k[d] += wk[i] * v[d];
            g[d] += wg[i] * v[d];
        }
    }
    let err = k.iter().zip(&g).map(|(k, g)| ((k - g) * h).norm()).fold(0.0, f64::max);
    Ok(Panel { lo: a, hi: b, val: k.into_iter().map(|v| v * h).collect(), err })
}

/// Subintervals of an adaptive rule.
pub type Panels = Vec<(f64, f64)>;

/// Vector-valued adaptive G7K15. The error is the largest over components.
/// Also returns the final panels so the same rule can be reused.
pub fn adaptive_gk15_vec<F>(mut f: F, a: f64, b: f64, dim: usize, tol: Tolerance) -> Result<(Vec<Complex64>, Panels)>
where
    F: FnMut(f64) -> Result<Vec<Complex64>>,
{
    let first = gk15_panel_vec(&mut f, a, b, dim)?;
    let mut total = first.val.clone();
    let mut total_err = first.err;
    let mut panels = vec![first];
    let norm = |v: &[Complex64]| v.iter().map(|c| c.norm()).fold(0.0, f64::max);
    while total_err > tol.abs.max(tol.rel * norm(&total)) {
        if panels.len() >= tol.max_panels {
            return Err(Error::Quadrature(format!(
                "no convergence on [{a}, {b}] with {} panels, error {total_err:.3e}",
                panels.len()
            )));
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .expect("nonempty");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.lo + p.hi);
        if mid <= p.lo.min(p.hi) || mid >= p.lo.max(p.hi) {
            return Err(Error::Quadrature(format!("panel [{}, {}] cannot be split further", p.lo, p.hi)));
        }
        let p1 = gk15_panel_vec(&mut f, p.lo, mid, dim)?;
        let p2 = gk15_panel_vec(&mut f, mid, p.hi, dim)?;
        for d in 0..dim {
            total[d] += p1.val[d] + p2.val[d] - p.val[d];
        }
        total_err += p1.err + p2.err - p.err;
        panels.push(p1);
        panels.push(p2);
    }
    panels.sort_by(|x, y| x.lo.total_cmp(&y.lo));
    // re-sum in order to shed the drift of the running updates
    let mut sum = vec![Complex64::new(0.0, 0.0); dim];
    for p in &panels {
        for d in 0..dim {
            sum[d] += p.val[d];
        }
    }
    Ok((sum, panels.iter().map(|p| (p.lo, p.hi)).collect()))
}

/// Kronrod sums over a fixed list of panels.
pub fn fixed_gk15_vec<F>(mut f: F, panels: &[(f64, f64)], dim: usize) -> Result<Vec<Complex64>>
where
    F: FnMut(f64) -> Result<Vec<Complex64>>,
{
    let mut sum = vec![Complex64::new(0.0, 0.0); dim];
    for &(lo, hi) in panels {
        let p = gk15_panel_vec(&mut f, lo, hi, dim)?;
        for d in 0..dim {
            sum[d] += p.val[d];
        }
    }
    Ok(sum)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p1 = z;
                p0 = 1.0;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// First-kind Chebyshev points `cos(pi (j + 1/2) / n)`, j = 0..n.
pub fn chebyshev_nodes(n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| (std::f64::consts::PI * (j as f64 + 0.5) / n as f64).cos())
        .collect()
}

/// Chebyshev coefficients of the interpolant through values at
/// [`chebyshev_nodes`].
pub fn chebyshev_coefficients(values: &[Complex64]) -> Vec<Complex64> {
    let n = values.len();
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    for (k, ck) in c.iter_mut().enumerate() {
        let mut s = Complex64::new(0.0, 0.0);
        for (j, v) in values.iter().enumerate() {
            s += v * (std::f64::consts::PI * k as f64 * (j as f64 + 0.5) / n as f64).cos();
        }
        *ck = s * (2.0 / n as f64);
    }
    if n > 0 {
        c[0] *= 0.5;
    }
    c
}

/// Clenshaw evaluation of `sum c_n T_n(x)`.
pub fn chebyshev_eval(c: &[Complex64], x: Complex64) -> Complex64 {
    let mut b1 = Complex64::new(0.0, 0.0);
    let mut b2 = Complex64::new(0.0, 0.0);
    for &ck in c.iter().skip(1).rev() {
        let b0 = ck + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    c.first().copied().unwrap_or_default() + x * b1 - b2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gk_integrates_polynomial_exactly() {
        let mut f = |x: f64| Ok(Complex64::new(x.powi(20) + 3.0 * x.powi(7), x));
        let (v, e) = gk15_panel(&mut f, -1.0, 1.0).unwrap();
        assert!((v.re - 2.0 / 21.0).abs() < 1e-14, "{v}");
        assert!(v.im.abs() < 1e-15);
        assert!(e > 0.0);
        let mut g = |x: f64| Ok(Complex64::new(x.powi(12), 0.0));
        let (_, e) = gk15_panel(&mut g, -1.0, 1.0).unwrap();
        assert!(e < 1e-14);
    }

    #[test]
    fn adaptive_handles_endpoint_sqrt() {
        let v = adaptive_gk15(|x: f64| Ok(Complex64::new(x.sqrt(), 0.0)), 0.0, 1.0, 1e-13, 1e-13, 500).unwrap();
        assert!((v.re - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn legendre_sums() {
        let (x, w) = gauss_legendre(12);
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(22)).sum();
        assert!((m - 2.0 / 23.0).abs() < 1e-14);
    }

    #[test]
    fn chebyshev_roundtrip() {
        let n = 24;
        let xs = chebyshev_nodes(n);
        let vals: Vec<Complex64> = xs.iter().map(|&x| Complex64::new((2.0 * x).exp(), x * x)).collect();
        let c = chebyshev_coefficients(&vals);
        for &x in &[0.3, -0.77, 0.99] {
            let v = chebyshev_eval(&c, Complex64::new(x, 0.0));
            assert!((v - Complex64::new((2.0 * x).exp(), x * x)).norm() < 1e-13);
        }
    }
}
