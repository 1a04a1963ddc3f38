//! Green's-identity continuation of the field to complex points.
//!
//! For `A = (x1, x2)` in C^2 and a real point `x'`,
//! `s^2 = (x1 - x1')^2 + (x2 - x2')^2 = (z' - A1) conj(z' - A2)` where
//! `z' = x1' + i x2'` and `A1`, `A2` are the associated real points written
//! as complex numbers. The kernel `G = -(i/4) H0(k s)` is branched at `A1`
//! and `A2`; its branch along a contour is fixed by the continuous argument
//! `theta` of `s^2`, so `k s` sits at argument `arg k + theta / 2` on the
//! cover of the punctured plane.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::KnownField;
use crate::quadrature::{adaptive_gk15_vec, fixed_gk15_vec, Tolerance};
use crate::special::{bessel_j0, bessel_j1, Bessel01, CoverArgument};
use crate::surface::{segment_point_distance, PathPiece, SommerfeldSurface, SurfacePoint};

type C = Complex64;

/// Smallest admissible `|s|` on a contour.
pub const EPS_SING: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComplexPoint2 {
    pub x1: C,
    pub x2: C,
}

impl ComplexPoint2 {
    pub fn new(x1: C, x2: C) -> Self {
        Self { x1, x2 }
    }

    pub fn real(x1: f64, x2: f64) -> Self {
        Self { x1: C::new(x1, 0.0), x2: C::new(x2, 0.0) }
    }

    /// The unique point whose associated real points are `a1` and `a2`.
    pub fn from_real_points(a1: [f64; 2], a2: [f64; 2]) -> Self {
        Self {
            x1: C::new(0.5 * (a1[0] + a2[0]), 0.5 * (a1[1] - a2[1])),
            x2: C::new(0.5 * (a1[1] + a2[1]), 0.5 * (a2[0] - a1[0])),
        }
    }

    /// `x1 + i x2`.
    pub fn z1(&self) -> C {
        self.x1 + C::i() * self.x2
    }

    /// `x1 - i x2`.
    pub fn z2(&self) -> C {
        self.x1 - C::i() * self.x2
    }

    pub fn associated_real_points(&self) -> ([f64; 2], [f64; 2]) {
        associated_real_points(self)
    }

    /// `A1` and `A2` as complex numbers `X + iY`.
    pub fn associated_complex(&self) -> (C, C) {
        (self.z1(), self.z2().conj())
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.x1.im.abs() <= tol && self.x2.im.abs() <= tol
    }

    pub fn offset(&self, d1: C, d2: C) -> Self {
        Self { x1: self.x1 + d1, x2: self.x2 + d2 }
    }

    /// `s^2` to a real point.
    pub fn s_squared(&self, x: [f64; 2]) -> C {
        let d1 = self.x1 - x[0];
        let d2 = self.x2 - x[1];
        d1 * d1 + d2 * d2
    }
}

/// `A1 = (Re x1 - Im x2, Im x1 + Re x2)`, `A2 = (Re x1 + Im x2, Re x2 - Im x1)`.
pub fn associated_real_points(a: &ComplexPoint2) -> ([f64; 2], [f64; 2]) {
    (
        [a.x1.re - a.x2.im, a.x1.im + a.x2.re],
        [a.x1.re + a.x2.im, a.x2.re - a.x1.im],
    )
}

/// A complex characteristic through a branch point: `L1 = {x1 + i x2 = c}`,
/// `L2 = {x1 - i x2 = c}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TwoLine {
    pub ell: u8,
    pub j: usize,
    pub constant: C,
}

impl TwoLine {
    pub fn through(ell: u8, j: usize, p: [f64; 2]) -> Result<Self> {
        let constant = match ell {
            1 => C::new(p[0], p[1]),
            2 => C::new(p[0], -p[1]),
            _ => return Err(Error::InvalidParameter { field: "ell", reason: format!("{ell}") }),
        };
        Ok(Self { ell, j, constant })
    }

    pub fn distance(&self, a: &ComplexPoint2) -> f64 {
        let v = if self.ell == 1 { a.z1() } else { a.z2() };
        (v - self.constant).norm()
    }

    pub fn contains(&self, a: &ComplexPoint2, tol: f64) -> bool {
        self.distance(a) <= tol
    }
}

/// Every 2-line of the branch set of a surface, ordered `L1^(1), L2^(1), ...`.
pub fn branch_two_lines(surface: &SommerfeldSurface) -> Vec<TwoLine> {
    let mut out = Vec::new();
    for (j, bp) in surface.branch_points.iter().enumerate() {
        for ell in [1, 2] {
            out.push(TwoLine::through(ell, j + 1, bp.pos()).expect("valid ell"));
        }
    }
    out
}

pub fn in_branch_set(surface: &SommerfeldSurface, a: &ComplexPoint2, tol: f64) -> bool {
    branch_two_lines(surface).iter().any(|l| l.contains(a, tol))
}

/// Kernel value and its gradient in the primed coordinates, for the branch
/// with continuous argument `theta` of `s^2`.
pub fn kernel_with_gradient(k: C, a: &ComplexPoint2, x: [f64; 2], theta: f64) -> Result<(C, [C; 2])> {
    let s2 = a.s_squared(x);
    let s_abs = s2.norm().sqrt();
    if s_abs < EPS_SING {
        return Err(Error::SingularKernel(s_abs));
    }
    let cover = CoverArgument::from_polar(k.norm() * s_abs, k.arg() + 0.5 * theta);
    let b = Bessel01::eval(cover.z)?;
    let m = cover.m as f64;
    let h = b.h0 - 2.0 * m * b.j0;
    let dh_dz = -(b.h1 - 2.0 * m * b.j1);
    let dh_dzeta = if cover.m % 2 == 0 { dh_dz } else { -dh_dz };
    let s = cover.value() / k;
    let q = C::new(0.0, -0.25);
    let g = q * h;
    let scale = q * k * dh_dzeta / s;
    Ok((g, [-scale * (a.x1 - x[0]), -scale * (a.x2 - x[1])]))
}

/// `G` on cover sheet `m` over the principal square root of `s^2`.
pub fn kernel_value(k: C, a: &ComplexPoint2, x: [f64; 2], m: i64) -> Result<C> {
    let theta = a.s_squared(x).arg() + 2.0 * PI * m as f64;
    kernel_with_gradient(k, a, x, theta).map(|(g, _)| g)
}

/// Normal derivative of `G` in the primed variables along `n`.
pub fn kernel_normal_derivative(k: C, a: &ComplexPoint2, x: [f64; 2], m: i64, n: [f64; 2]) -> Result<C> {
    let theta = a.s_squared(x).arg() + 2.0 * PI * m as f64;
    kernel_with_gradient(k, a, x, theta).map(|(_, g)| g[0] * n[0] + g[1] * n[1])
}

/// Unit normal to the right of the direction `d`.
pub fn right_normal(d: [f64; 2]) -> [f64; 2] {
    let len = d[0].hypot(d[1]);
    [d[1] / len, -d[0] / len]
}

/// Change of the argument of `s^2` along the straight segment `p -> q`.
pub fn theta_increment(a1: C, a2: C, p: [f64; 2], q: [f64; 2]) -> f64 {
    let zp = C::new(p[0], p[1]);
    let zq = C::new(q[0], q[1]);
    ((zq - a1) / (zp - a1)).arg() - ((zq - a2) / (zp - a2)).arg()
}

/// A closed polyline on the surface together with the branch data of the
/// kernel at one anchor vertex. Sheets and kernel branches elsewhere follow
/// by continuation along the polyline.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchedContour {
    /// Vertices in order; the closing segment back to the first is implicit.
    pub vertices: Vec<[f64; 2]>,
    pub anchor: usize,
    pub anchor_sheet: usize,
    /// Continuous argument of `s^2` at the anchor. When the point `A` moves,
    /// the branch nearest to this value is used.
    pub anchor_theta: f64,
}

impl BranchedContour {
    /// Contour with the usual kernel branch (principal `arg s^2`) at the anchor.
    pub fn new(vertices: Vec<[f64; 2]>, anchor: usize, anchor_sheet: usize, a: &ComplexPoint2) -> Result<Self> {
        if vertices.len() < 3 || anchor >= vertices.len() {
            return Err(Error::Geometry("a contour needs three vertices and a valid anchor".into()));
        }
        let anchor_theta = a.s_squared(vertices[anchor]).arg();
        Ok(Self { vertices, anchor, anchor_sheet, anchor_theta })
    }

    /// Same contour traversed backwards.
    pub fn reversed(&self) -> Self {
        let n = self.vertices.len();
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Self { vertices, anchor: n - 1 - self.anchor, ..self.clone() }
    }

    /// Same projection anchored on another sheet.
    pub fn on_sheet(&self, sheet: usize) -> Self {
        Self { anchor_sheet: sheet, ..self.clone() }
    }

    /// Anchor argument of `s^2` continued to the point `a`.
    pub fn anchor_theta_at(&self, a: &ComplexPoint2) -> f64 {
        let principal = a.s_squared(self.vertices[self.anchor]).arg();
        principal + 2.0 * PI * ((self.anchor_theta - principal) / (2.0 * PI)).round()
    }

    /// The closed polyline starting and ending at the anchor.
    pub fn path(&self) -> Vec<[f64; 2]> {
        let n = self.vertices.len();
        (0..=n).map(|i| self.vertices[(self.anchor + i) % n]).collect()
    }

    /// Sheets and kernel branches along the contour for the point `a`.
    pub fn resolve(&self, surface: &SommerfeldSurface, a: &ComplexPoint2) -> Result<ResolvedContour> {
        let path = self.path();
        let (a1, a2) = a.associated_complex();
        let guard = EPS_SING.max(1e-9 * surface.length_scale);
        let mut thetas = Vec::with_capacity(path.len());
        let mut theta = self.anchor_theta_at(a);
        thetas.push(theta);
        for w in path.windows(2) {
            for (name, z) in [("A1", a1), ("A2", a2)] {
                if segment_point_distance(w[0], w[1], [z.re, z.im]) < guard {
                    return Err(Error::Precondition(format!("contour passes through {name}")));
                }
            }
            theta += theta_increment(a1, a2, w[0], w[1]);
            thetas.push(theta);
        }
        let (pieces, end_sheet) = surface.walk(self.anchor_sheet, &path)?;
        if end_sheet != self.anchor_sheet {
            return Err(Error::Precondition(format!(
                "contour does not close on the surface: sheet {} -> {end_sheet}",
                self.anchor_sheet
            )));
        }
        if (thetas[thetas.len() - 1] - thetas[0]).abs() > 1e-6 {
            return Err(Error::Precondition("kernel branch does not close along the contour".into()));
        }
        Ok(ResolvedContour { path, thetas, pieces, a1, a2 })
    }

    /// Per-vertex surface points and kernel half-windings for `a`, in the
    /// order of [`BranchedContour::path`].
    pub fn vertex_data(&self, surface: &SommerfeldSurface, a: &ComplexPoint2) -> Result<Vec<(SurfacePoint, i64)>> {
        let r = self.resolve(surface, a)?;
        let mut sheet_at = vec![self.anchor_sheet; r.path.len()];
        for p in &r.pieces {
            if p.t1 >= 1.0 {
                sheet_at[p.segment + 1] = p.sheet;
            }
        }
        Ok(r.path
            .iter()
            .zip(&r.thetas)
            .zip(sheet_at)
            .map(|((x, th), sheet)| {
                let principal = a.s_squared(*x).arg();
                (SurfacePoint::new(x[0], x[1], sheet), ((th - principal) / (2.0 * PI)).round() as i64)
            })
            .collect())
    }

    pub fn length(&self) -> f64 {
        let p = self.path();
        p.windows(2).map(|w| (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1])).sum()
    }
}

/// A contour with sheets and kernel branches fixed for one point `A`.
#[derive(Clone, Debug)]
pub struct ResolvedContour {
    pub path: Vec<[f64; 2]>,
    pub thetas: Vec<f64>,
    pub pieces: Vec<PathPiece>,
    a1: C,
    a2: C,
}

/// Panels used on each piece of a resolved contour.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct IntegrationRule {
    pub panels: Vec<Vec<(f64, f64)>>,
}

impl IntegrationRule {
    pub fn node_count(&self) -> usize {
        15 * self.panels.iter().map(|p| p.len()).sum::<usize>()
    }
}

fn piece_integrand<'a>(
    k: C,
    a: &'a ComplexPoint2,
    r: &'a ResolvedContour,
    piece: &'a PathPiece,
    field: &'a dyn KnownField,
) -> impl FnMut(f64) -> Result<Vec<C>> + 'a {
    let p = r.path[piece.segment];
    let q = r.path[piece.segment + 1];
    let d = [q[0] - p[0], q[1] - p[1]];
    let len = d[0].hypot(d[1]);
    let n = right_normal(d);
    let theta_p = r.thetas[piece.segment];
    let (a1, a2) = (r.a1, r.a2);
    move |t: f64| {
        let x = [p[0] + t * d[0], p[1] + t * d[1]];
        let theta = theta_p + theta_increment(a1, a2, p, x);
        let (g, dg) = kernel_with_gradient(k, a, x, theta)?;
        let dgn = dg[0] * n[0] + dg[1] * n[1];
        let samples = field.sample(&SurfacePoint::new(x[0], x[1], piece.sheet))?;
        Ok(samples.iter().map(|s| (dgn * s.u - s.normal_derivative(n) * g) * len).collect())
    }
}

/// Green's integral over a contour for every channel of the field, with
/// adaptive quadrature. Returns the rule it settled on.
pub fn contour_integral_with_rule(
    a: &ComplexPoint2,
    c: &BranchedContour,
    field: &dyn KnownField,
    tol: Tolerance,
) -> Result<(Vec<C>, IntegrationRule)> {
    let r = c.resolve(field.surface(), a)?;
    let dim = field.angles().len();
    let k = field.wavenumber();
    let mut total = vec![C::new(0.0, 0.0); dim];
    let mut rule = IntegrationRule::default();
    for piece in &r.pieces {
        let f = piece_integrand(k, a, &r, piece, field);
        let (v, panels) = adaptive_gk15_vec(f, piece.t0, piece.t1, dim, tol)?;
        for (t, x) in total.iter_mut().zip(v) {
            *t += x;
        }
        rule.panels.push(panels);
    }
    Ok((total, rule))
}

pub fn contour_integral(a: &ComplexPoint2, c: &BranchedContour, field: &dyn KnownField) -> Result<Vec<C>> {
    contour_integral_with_rule(a, c, field, Tolerance::default()).map(|(v, _)| v)
}

/// Green's integral with a frozen rule. The rule must come from the same
/// contour; the point may differ as long as the contour stays admissible.
pub fn contour_integral_fixed(
    a: &ComplexPoint2,
    c: &BranchedContour,
    field: &dyn KnownField,
    rule: &IntegrationRule,
) -> Result<Vec<C>> {
    let r = c.resolve(field.surface(), a)?;
    if r.pieces.len() != rule.panels.len() {
        return Err(Error::Precondition("integration rule does not match the contour".into()));
    }
    let dim = field.angles().len();
    let k = field.wavenumber();
    let mut total = vec![C::new(0.0, 0.0); dim];
    for (piece, panels) in r.pieces.iter().zip(&rule.panels) {
        let f = piece_integrand(k, a, &r, piece, field);
        for (t, x) in total.iter_mut().zip(fixed_gk15_vec(f, panels, dim)?) {
            *t += x;
        }
    }
    Ok(total)
}

/// `|I(c1) - I(c2)| / max(|I(c1)|, |I(c2)|, floor)`, worst over channels.
pub fn deformation_invariance_check(
    a: &ComplexPoint2,
    c1: &BranchedContour,
    c2: &BranchedContour,
    field: &dyn KnownField,
    floor: f64,
) -> Result<f64> {
    let i1 = contour_integral(a, c1, field)?;
    let i2 = contour_integral(a, c2, field)?;
    Ok(i1
        .iter()
        .zip(&i2)
        .map(|(x, y)| (x - y).norm() / x.norm().max(y.norm()).max(floor))
        .fold(0.0, f64::max))
}

/// `J0(k s)` and `k^2 J1(k s)/(k s)`; both even in `s`, so branch free.
fn regular_kernel(k: C, s2: C) -> (C, C) {
    let z = k * s2.sqrt();
    if z.norm() == 0.0 {
        return (C::new(1.0, 0.0), 0.5 * k * k);
    }
    (bessel_j0(z), k * k * bessel_j1(z) / z)
}

/// Double-eight integral based on `A_ell` and the branch point `p`, in the
/// shrunk form. With the turn order `A_ell+, p+, A_ell-, p-` the four strands
/// collapse onto
/// `(i/2) eps int_{A_ell -> p} [dJ0/dn' (u_{s0} - u_{s1}) - J0 d(u_{s0} - u_{s1})/dn'] dl'`
/// with `eps = +1` for `A1` and `-1` for `A2`; `s0` is the sheet at `A_ell` and
/// `s1` the sheet reached after one positive turn about `p`. The lobes at `p`
/// vanish in the limit but the lobes at `A_ell` do not: the kernel there is
/// `log |x' - A_ell| / (4 pi)` to leading order, so each turn leaves half the
/// field value and the pair adds `(u_{s0}(A_ell) - u_{s1}(A_ell)) / 2`.
pub fn double_eight_reduced(
    a: &ComplexPoint2,
    ell: u8,
    j: usize,
    anchor_sheet: usize,
    field: &dyn KnownField,
    tol: Tolerance,
) -> Result<Vec<C>> {
    let surface = field.surface();
    let bp = surface
        .branch_points
        .get(j.wrapping_sub(1))
        .ok_or_else(|| Error::InvalidParameter { field: "j", reason: format!("{j}") })?
        .pos();
    let (a1, a2) = a.associated_real_points();
    let (start, eps) = match ell {
        1 => (a1, 1.0),
        2 => (a2, -1.0),
        _ => return Err(Error::InvalidParameter { field: "ell", reason: format!("{ell}") }),
    };
    let d = [bp[0] - start[0], bp[1] - start[1]];
    let len = d[0].hypot(d[1]);
    let n = right_normal(d);
    // stop short of the branch point itself for the sheet bookkeeping
    let near = [bp[0] - 1e-6 * d[0], bp[1] - 1e-6 * d[1]];
    let (pieces0, end0) = surface.walk(anchor_sheet, &[start, near])?;
    let perm = surface.loop_permutation(j - 1)?;
    let end1 = perm[end0 - 1];
    let (back, start1) = surface.walk(end1, &[near, start])?;
    let sheet_at = |pieces: &[PathPiece], t: f64, reverse: bool| {
        let t = if reverse { 1.0 - t } else { t };
        pieces.iter().find(|p| t >= p.t0 && t <= p.t1).map(|p| p.sheet).unwrap_or(pieces[0].sheet)
    };
    let k = field.wavenumber();
    let dim = field.angles().len();
    // x = p + (start - p) tau^2 puts the square-root endpoint behaviour into
    // a smooth integrand
    let f = |tau: f64| -> Result<Vec<C>> {
        let t = 1.0 - tau * tau;
        let x = [start[0] + t * d[0], start[1] + t * d[1]];
        let s0 = sheet_at(&pieces0, t, false);
        let s1 = sheet_at(&back, t, true);
        let u0 = field.sample(&SurfacePoint::new(x[0], x[1], s0))?;
        let u1 = field.sample(&SurfacePoint::new(x[0], x[1], s1))?;
        let (j0, e) = regular_kernel(k, a.s_squared(x));
        let dj0n = e * ((a.x1 - x[0]) * n[0] + (a.x2 - x[1]) * n[1]);
        let w = -len * 2.0 * tau * 0.5 * eps;
        Ok(u0
            .iter()
            .zip(&u1)
            .map(|(v0, v1)| {
                let du = v1.u - v0.u;
                let dun = v1.normal_derivative(n) - v0.normal_derivative(n);
                C::i() * w * (dj0n * du - j0 * dun)
            })
            .collect())
    };
    let mut total = adaptive_gk15_vec(f, 0.0, 1.0, dim, tol)?.0;
    let v0 = field.sample(&SurfacePoint::new(start[0], start[1], anchor_sheet))?;
    let v1 = field.sample(&SurfacePoint::new(start[0], start[1], start1))?;
    for ((t, x0), x1) in total.iter_mut().zip(&v0).zip(&v1) {
        *t += 0.5 * (x0.u - x1.u);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::hankel1_0;

    #[test]
    fn associated_points_examples() {
        let a = ComplexPoint2::new(C::new(1.0, 2.0), C::new(3.0, 4.0));
        assert_eq!(associated_real_points(&a), ([-3.0, 5.0], [5.0, 1.0]));
        assert_eq!(associated_real_points(&ComplexPoint2::real(1.0, 3.0)), ([1.0, 3.0], [1.0, 3.0]));
        let back = ComplexPoint2::from_real_points([-3.0, 5.0], [5.0, 1.0]);
        assert!((back.x1 - a.x1).norm() < 1e-15 && (back.x2 - a.x2).norm() < 1e-15);
    }

    #[test]
    fn point_on_first_two_line_has_a1_at_edge() {
        // x1 + i x2 = 1 with x1 = 1 + i
        let x1 = C::new(1.0, 1.0);
        let x2 = (C::new(1.0, 0.0) - x1) / C::i();
        let a = ComplexPoint2::new(x1, x2);
        let (a1, _) = a.associated_real_points();
        assert!((a1[0] - 1.0).abs() < 1e-15 && a1[1].abs() < 1e-15);
        assert!(TwoLine::through(1, 1, [1.0, 0.0]).unwrap().contains(&a, 1e-12));
    }

    #[test]
    fn s_squared_factorizes() {
        let a = ComplexPoint2::new(C::new(0.3, -0.2), C::new(0.5, 0.1));
        let (a1, a2) = a.associated_complex();
        let x = [0.7, -0.4];
        let z = C::new(x[0], x[1]);
        assert!((a.s_squared(x) - (z - a1) * (z - a2).conj()).norm() < 1e-15);
    }

    #[test]
    fn real_kernel_is_free_space() {
        let k = C::new(2.0, 0.02);
        let a = ComplexPoint2::real(0.1, 0.2);
        let g = kernel_value(k, &a, [0.6, -0.3], 0).unwrap();
        let r = (0.5f64 * 0.5 + 0.5 * 0.5).sqrt();
        assert!((g - C::new(0.0, -0.25) * hankel1_0(k * r).unwrap()).norm() < 1e-15);
    }

    #[test]
    fn two_sheet_shift_is_j0() {
        let k = C::new(2.0, 0.02);
        let a = ComplexPoint2::new(C::new(0.3, 0.1), C::new(0.2, -0.15));
        let x = [0.9, 0.4];
        let d = kernel_value(k, &a, x, 2).unwrap() - kernel_value(k, &a, x, 0).unwrap();
        let z = k * a.s_squared(x).sqrt();
        assert!((d - C::new(0.0, -0.25) * (-4.0 * bessel_j0(z))).norm() < 1e-13);
    }

    #[test]
    fn gradient_matches_differences() {
        let k = C::new(2.0, 0.02);
        let a = ComplexPoint2::new(C::new(0.3, 0.1), C::new(0.2, -0.15));
        let x = [0.9, 0.4];
        let th = a.s_squared(x).arg() + 2.0 * PI;
        let (_, g) = kernel_with_gradient(k, &a, x, th).unwrap();
        let h = 1e-6;
        for l in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[l] += h;
            xm[l] -= h;
            let tp = th + (a.s_squared(xp) / a.s_squared(x)).arg();
            let tm = th + (a.s_squared(xm) / a.s_squared(x)).arg();
            let fd = (kernel_with_gradient(k, &a, xp, tp).unwrap().0 - kernel_with_gradient(k, &a, xm, tm).unwrap().0)
                / (2.0 * h);
            assert!((fd - g[l]).norm() < 1e-7 * g[l].norm(), "{fd} vs {}", g[l]);
        }
    }

    #[test]
    fn winding_around_a1_is_a_half_turn_of_the_argument() {
        // polyline phase accumulation around A1 only
        let a = ComplexPoint2::from_real_points([0.0, 0.0], [2.0, 0.0]);
        let (a1, a2) = a.associated_complex();
        let n = 40;
        let pts: Vec<[f64; 2]> = (0..=n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                [0.5 * t.cos(), 0.5 * t.sin()]
            })
            .collect();
        let total: f64 = pts.windows(2).map(|w| theta_increment(a1, a2, w[0], w[1])).sum();
        assert!((total - 2.0 * PI).abs() < 1e-12);
        let k = C::new(2.0, 0.02);
        let x = pts[0];
        let th0 = a.s_squared(x).arg();
        let g0 = kernel_with_gradient(k, &a, x, th0).unwrap().0;
        let g1 = kernel_with_gradient(k, &a, x, th0 + total).unwrap().0;
        // k s -> e^{i pi} k s shifts H0 by -2 J0
        let z = k * a.s_squared(x).sqrt();
        assert!((g1 - g0 - C::new(0.0, 0.5) * bessel_j0(z)).norm() < 1e-13);
    }

    #[test]
    fn reversed_contour_keeps_anchor() {
        let a = ComplexPoint2::real(0.0, 0.0);
        let c = BranchedContour::new(vec![[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]], 1, 1, &a).unwrap();
        let r = c.reversed();
        assert_eq!(r.vertices[r.anchor], c.vertices[c.anchor]);
        assert!((r.length() - c.length()).abs() < 1e-15);
    }
}
