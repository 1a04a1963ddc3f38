//! Browser bindings: field grids for the strip and the half-plane, and the
//! Hankel function on the cover of the punctured plane.
//!
//! The exported functions are thin wrappers over plain Rust functions that
//! return `Result<_, String>`, so the logic is testable off the browser.

use num_complex::Complex64;
use sommerfeld::field::{HalfPlaneField, KnownField, StripField};
use sommerfeld::special::{hankel1_0_cover, CoverArgument};
use sommerfeld::surface::{Side, SurfacePoint};
use sommerfeld::Error;
use wasm_bindgen::prelude::*;

const MAX_GRID: usize = 400 * 400;

fn js(e: String) -> JsValue {
    JsValue::from_str(&e)
}

/// Samples channel 0 of `field` on a grid, row by row from `y0`, as
/// interleaved `re, im` pairs. Points on a cut take the value from its left
/// side; points on a branch point give NaN.
pub fn sample_grid(
    field: &dyn KnownField,
    bounds: [f64; 4],
    nx: usize,
    ny: usize,
    sheet: usize,
) -> Result<Vec<f64>, String> {
    let [x0, x1, y0, y1] = bounds;
    if nx < 2 || ny < 2 || nx * ny > MAX_GRID {
        return Err(format!("grid {nx} x {ny} out of range"));
    }
    if !(x1 > x0 && y1 > y0) {
        return Err("empty bounding box".into());
    }
    if sheet == 0 || sheet > field.surface().sheets {
        return Err(format!("sheet {sheet} does not exist"));
    }
    let mut out = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        let y = y0 + (y1 - y0) * j as f64 / (ny - 1) as f64;
        for i in 0..nx {
            let x = x0 + (x1 - x0) * i as f64 / (nx - 1) as f64;
            match field.sample(&SurfacePoint::new(x, y, sheet).with_side(Side::Left)) {
                Ok(s) => out.extend([s[0].u.re, s[0].u.im]),
                Err(Error::OnBranchPoint) => out.extend([f64::NAN, f64::NAN]),
                Err(e) => return Err(e.to_string()),
            }
        }
    }
    Ok(out)
}

/// Strip of half-length 1, solved once for one wavenumber and angle.
#[wasm_bindgen]
pub struct StripDemo {
    field: StripField,
}

impl StripDemo {
    pub fn solve(k_re: f64, k_im: f64, phi_in: f64, order: usize) -> Result<StripDemo, String> {
        let field = StripField::solve(Complex64::new(k_re, k_im), 1.0, &[phi_in], order).map_err(|e| e.to_string())?;
        Ok(StripDemo { field })
    }
}

#[wasm_bindgen]
impl StripDemo {
    #[wasm_bindgen(constructor)]
    pub fn new(k_re: f64, k_im: f64, phi_in: f64, order: usize) -> Result<StripDemo, JsValue> {
        Self::solve(k_re, k_im, phi_in, order).map_err(js)
    }

    /// Interleaved `re, im` of the total field on `sheet`.
    #[allow(clippy::too_many_arguments)]
    pub fn grid(&self, x0: f64, x1: f64, y0: f64, y1: f64, nx: usize, ny: usize, sheet: usize) -> Result<Vec<f64>, JsValue> {
        sample_grid(&self.field, [x0, x1, y0, y1], nx, ny, sheet).map_err(js)
    }

    /// Largest relative size of the last Chebyshev coefficients.
    pub fn tail_ratio(&self) -> f64 {
        self.field.densities()[0].tail_ratio()
    }

    /// `|far field|` at `n` equally spaced angles in `[0, 2 pi)`.
    pub fn far_field(&self, n: usize) -> Vec<f64> {
        let d = &self.field.densities()[0];
        (0..n).map(|i| d.far_field(2.0 * std::f64::consts::PI * i as f64 / n as f64).norm()).collect()
    }
}

pub fn halfplane_grid_impl(
    k_re: f64,
    k_im: f64,
    phi_in: f64,
    bounds: [f64; 4],
    nx: usize,
    ny: usize,
    sheet: usize,
) -> Result<Vec<f64>, String> {
    let field = HalfPlaneField::new(Complex64::new(k_re, k_im), &[phi_in]).map_err(|e| e.to_string())?;
    sample_grid(&field, bounds, nx, ny, sheet)
}

/// Exact half-plane field on a grid of one sheet, interleaved `re, im`.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn halfplane_grid(
    k_re: f64,
    k_im: f64,
    phi_in: f64,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    nx: usize,
    ny: usize,
    sheet: usize,
) -> Result<Vec<f64>, JsValue> {
    halfplane_grid_impl(k_re, k_im, phi_in, [x0, x1, y0, y1], nx, ny, sheet).map_err(js)
}

/// `[re, im]` of `H(z, m)` for `m - 1`, `m`, `m + 1`, then the residual
/// `|H(m+1) + H(m-1) - 2 H(m)|`.
pub fn hankel_cover_impl(re: f64, im: f64, m: i32) -> Result<Vec<f64>, String> {
    let z = Complex64::new(re, im);
    let h = |m: i32| {
        CoverArgument::new(z, i64::from(m))
            .and_then(hankel1_0_cover)
            .map_err(|e| e.to_string())
    };
    let (a, b, c) = (h(m - 1)?, h(m)?, h(m + 1)?);
    let residual = (a + c - 2.0 * b).norm();
    Ok(vec![a.re, a.im, b.re, b.im, c.re, c.im, residual])
}

#[wasm_bindgen]
pub fn hankel_cover(re: f64, im: f64, m: i32) -> Result<Vec<f64>, JsValue> {
    hankel_cover_impl(re, im, m).map_err(js)
}
