//! The known field on the surface: incident plus scattered, with gradients,
//! on every sheet.

mod halfplane;
mod strip;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::surface::{SommerfeldSurface, SurfacePoint};

pub use halfplane::{halfplane_exact, HalfPlaneField};
pub use strip::{solve_strip, solve_strip_many, StripDensity, StripField};

pub const DEFAULT_K: Complex64 = Complex64 { re: 2.0, im: 0.02 };
pub const DEFAULT_PHI_IN: f64 = std::f64::consts::FRAC_PI_3;
pub const DEFAULT_ORDER: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaveParameters {
    pub k: Complex64,
    pub phi_in: f64,
    /// Strip half-length; ignored by the half-plane.
    pub a: f64,
}

impl Default for WaveParameters {
    fn default() -> Self {
        Self { k: DEFAULT_K, phi_in: DEFAULT_PHI_IN, a: 1.0 }
    }
}

impl WaveParameters {
    pub fn validate(&self) -> Result<()> {
        validate_k(self.k)?;
        if !self.phi_in.is_finite() {
            return Err(Error::InvalidParameter { field: "phi_in", reason: "must be finite".into() });
        }
        if !(self.a > 0.0 && self.a.is_finite()) {
            return Err(Error::InvalidParameter { field: "a", reason: format!("must be positive, got {}", self.a) });
        }
        Ok(())
    }
}

pub(crate) fn validate_k(k: Complex64) -> Result<()> {
    if !(k.re > 0.0 && k.re.is_finite()) || !(k.im >= 0.0 && k.im.is_finite()) {
        return Err(Error::InvalidParameter { field: "k", reason: format!("need Re k > 0 and Im k >= 0, got {k}") });
    }
    Ok(())
}

/// Field value and gradient at one point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FieldSample {
    pub u: Complex64,
    pub grad: [Complex64; 2],
}

impl FieldSample {
    /// Derivative along the unit vector `n`.
    pub fn normal_derivative(&self, n: [f64; 2]) -> Complex64 {
        self.grad[0] * n[0] + self.grad[1] * n[1]
    }
}

/// Plane wave `exp(-i k (x1 cos phi + x2 sin phi))`: it arrives from the
/// direction `phi`.
pub fn incident(k: Complex64, phi_in: f64, x: [f64; 2]) -> FieldSample {
    let (c, s) = (phi_in.cos(), phi_in.sin());
    let u = (-Complex64::i() * k * (x[0] * c + x[1] * s)).exp();
    let g = -Complex64::i() * k * u;
    FieldSample { u, grad: [g * c, g * s] }
}

/// A field known on a Sommerfeld surface for one or more incidence angles.
pub trait KnownField: Send + Sync {
    fn surface(&self) -> &SommerfeldSurface;
    fn wavenumber(&self) -> Complex64;
    /// Incidence angles, one per channel.
    fn angles(&self) -> &[f64];
    /// Samples for every channel at `p`.
    fn sample(&self, p: &SurfacePoint) -> Result<Vec<FieldSample>>;
}

pub(crate) fn reject_branch_point(surface: &SommerfeldSurface, p: &SurfacePoint) -> Result<()> {
    if surface.near_branch_point(p.project(), surface.branch_guard()).is_some() {
        return Err(Error::OnBranchPoint);
    }
    if p.sheet == 0 || p.sheet > surface.sheets {
        return Err(Error::InvalidParameter { field: "sheet", reason: format!("{} out of range", p.sheet) });
    }
    Ok(())
}
