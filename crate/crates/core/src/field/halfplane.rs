//! Closed-form total field of the Dirichlet half-line `x1 > 0, x2 = 0`.
//!
//! On the angle cover `phi in [0, 4 pi)` the field is
//! `U(r, phi - phi_in) - U(r, phi + phi_in)` with
//! `U(r, psi) = exp(-i k r cos psi) F(sqrt(2 k r) cos(psi / 2))` and `F` the
//! Fresnel-type integral of [`fresnel_sommerfeld`]. Sheet 1 is
//! `phi in [0, 2 pi)`, sheet 2 is `phi in [2 pi, 4 pi)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{reject_branch_point, validate_k, FieldSample, KnownField};
use crate::error::{Error, Result};
use crate::special::{fresnel_sommerfeld, fresnel_sommerfeld_dx};
use crate::surface::{build_halfline_surface, Side, SommerfeldSurface, SurfacePoint};

type C = Complex64;

pub struct HalfPlaneField {
    surface: SommerfeldSurface,
    k: C,
    angles: Vec<f64>,
}

/// `U` with its partial derivatives in `r` and `psi`.
fn wedge_term(k: C, r: f64, psi: f64) -> (C, C, C) {
    let sq = (2.0 * k * r).sqrt();
    let (ch, sh) = ((psi * 0.5).cos(), (psi * 0.5).sin());
    let x = sq * ch;
    let ph = (-C::i() * k * r * psi.cos()).exp();
    let f = fresnel_sommerfeld(x);
    let fp = fresnel_sommerfeld_dx(x);
    let u = ph * f;
    let du_dr = -C::i() * k * psi.cos() * u + ph * fp * x / (2.0 * r);
    let du_dpsi = C::i() * k * r * psi.sin() * u - ph * fp * sq * sh * 0.5;
    (u, du_dr, du_dpsi)
}

impl HalfPlaneField {
    pub fn new(k: C, angles: &[f64]) -> Result<Self> {
        validate_k(k)?;
        if angles.is_empty() || angles.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidParameter { field: "phi_in", reason: "need finite angles".into() });
        }
        Ok(Self { surface: build_halfline_surface(), k, angles: angles.to_vec() })
    }

    /// Angle on the cover for a surface point.
    pub fn cover_angle(p: &SurfacePoint) -> f64 {
        let mut phi = p.x2.atan2(p.x1);
        if phi < 0.0 {
            phi += 2.0 * PI;
        }
        if p.x2 == 0.0 && p.x1 > 0.0 {
            // on the cut: the left side (above) is phi = 0, the right is 2 pi
            phi = if p.side == Side::Right { 2.0 * PI } else { 0.0 };
        }
        phi + 2.0 * PI * (p.sheet - 1) as f64
    }

    pub fn exact(&self, phi_in: f64, p: &SurfacePoint) -> Result<FieldSample> {
        reject_branch_point(&self.surface, p)?;
        Ok(self.at(phi_in, p))
    }

    fn at(&self, phi_in: f64, p: &SurfacePoint) -> FieldSample {
        let r = p.x1.hypot(p.x2);
        let phi = Self::cover_angle(p);
        let (u1, r1, a1) = wedge_term(self.k, r, phi - phi_in);
        let (u2, r2, a2) = wedge_term(self.k, r, phi + phi_in);
        let (du_dr, du_dphi) = (r1 - r2, a1 - a2);
        let (c, s) = (phi.cos(), phi.sin());
        FieldSample {
            u: u1 - u2,
            grad: [c * du_dr - s / r * du_dphi, s * du_dr + c / r * du_dphi],
        }
    }
}

/// Exact half-plane field for one incidence angle.
pub fn halfplane_exact(k: C, phi_in: f64, p: &SurfacePoint) -> Result<FieldSample> {
    HalfPlaneField::new(k, &[phi_in])?.exact(phi_in, p)
}

impl KnownField for HalfPlaneField {
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
        Ok(self.angles.iter().map(|&phi| self.at(phi, p)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cover_angle_windows() {
        let p = SurfacePoint::new(-1.0, -1e-3, 1);
        assert!((HalfPlaneField::cover_angle(&p) - (PI + 1e-3)).abs() < 1e-6);
        let q = SurfacePoint::new(1.0, 0.0, 2).with_side(Side::Right);
        assert!((HalfPlaneField::cover_angle(&q) - 4.0 * PI).abs() < 1e-15);
    }
}
