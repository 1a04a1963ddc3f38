//! Contours of the continuation basis and their transport along paths in C^2.
//!
//! The strip basis is `W = (g1, g2, g3, g4)`: `g1` is the Green's integral over
//! a loop `Gamma0` around both associated real points, and `g2`, `g3`, `g4` are
//! integrals over the double-eight contours based on `(A1, P1)`, `(A1, P2)` and
//! `(A2, P1)`. Moving `A` along a path drags the contours with the associated
//! points, which continues `W` analytically.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::KnownField;
use crate::green::{contour_integral_with_rule, BranchedContour, ComplexPoint2};
use crate::quadrature::Tolerance;
use crate::surface::{segment_point_distance, SommerfeldSurface};

type C = Complex64;

/// Lobe radius of double-eight contours, in units of the length scale.
pub const LOBE_RADIUS: f64 = 0.03;
const LOBE_SIDES: usize = 12;
const GAMMA0_SIDES: usize = 48;
/// Clearance of `Gamma0` beyond the associated points, in units of the length scale.
pub const GAMMA0_MARGIN: f64 = 0.25;

fn sub(p: [f64; 2], q: [f64; 2]) -> [f64; 2] {
    [p[0] - q[0], p[1] - q[1]]
}

fn norm(p: [f64; 2]) -> f64 {
    p[0].hypot(p[1])
}

fn rotate(v: [f64; 2], t: f64) -> [f64; 2] {
    let (s, c) = t.sin_cos();
    [c * v[0] - s * v[1], s * v[0] + c * v[1]]
}

/// Polygon around `c` starting next to `c + v`, turning `sign` times.
fn lobe(c: [f64; 2], v: [f64; 2], sign: f64, sides: usize) -> Vec<[f64; 2]> {
    (0..sides)
        .map(|i| {
            let w = rotate(v, sign * 2.0 * PI * (i as f64 + 0.5) / sides as f64);
            [c[0] + w[0], c[1] + w[1]]
        })
        .collect()
}

/// Loop on sheet 1 around both associated real points, clear of every cut.
pub fn build_gamma0(surface: &SommerfeldSurface, a: &ComplexPoint2) -> Result<BranchedContour> {
    let (a1, a2) = a.associated_real_points();
    let centre = [0.5 * (a1[0] + a2[0]), 0.5 * (a1[1] + a2[1])];
    let radius = 0.5 * norm(sub(a1, a2)) + GAMMA0_MARGIN * surface.length_scale;
    if let Some(cut) = surface.cuts.iter().find(|c| c.distance(centre) <= radius * 1.02) {
        return Err(Error::Geometry(format!(
            "no admissible loop: the cut {:?} is within {:.3} of the associated points",
            cut.shape,
            cut.distance(centre)
        )));
    }
    let vertices = (0..GAMMA0_SIDES)
        .map(|i| {
            let t = 2.0 * PI * (i as f64 + 0.25) / GAMMA0_SIDES as f64;
            [centre[0] + radius * t.cos(), centre[1] + radius * t.sin()]
        })
        .collect();
    BranchedContour::new(vertices, 0, 1, a)
}

/// Double-eight contour based on `A_ell` and the branch point `P_j`, anchored
/// on `sheet` at the start of its first strand (next to `A_ell`).
///
/// The path turns once positively about `A_ell`, runs to `P_j`, turns
/// positively about it, returns, then repeats both turns negatively. The
/// four strands coincide.
pub fn build_double_eight(
    surface: &SommerfeldSurface,
    a: &ComplexPoint2,
    ell: u8,
    j: usize,
    sheet: usize,
) -> Result<BranchedContour> {
    let (a1, a2) = a.associated_real_points();
    let p = match ell {
        1 => a1,
        2 => a2,
        _ => return Err(Error::InvalidParameter { field: "ell", reason: format!("{ell}") }),
    };
    let q = surface
        .branch_points
        .get(j.wrapping_sub(1))
        .ok_or_else(|| Error::InvalidParameter { field: "j", reason: format!("{j}") })?
        .pos();
    let r = LOBE_RADIUS * surface.length_scale;
    let dist = norm(sub(q, p));
    if dist < 10.0 * r {
        return Err(Error::Pinch(format!("A{ell} is {dist:.3e} from branch point {j}")));
    }
    double_eight_between(a, p, q, r, sheet)
}

/// Double-eight contour based on two real points `p` and `q` with lobes of
/// radius `r`, anchored on `sheet` next to `p`.
pub fn double_eight_between(
    a: &ComplexPoint2,
    p: [f64; 2],
    q: [f64; 2],
    r: f64,
    sheet: usize,
) -> Result<BranchedContour> {
    let dist = norm(sub(q, p));
    if dist < 4.0 * r {
        return Err(Error::Pinch(format!("base points {dist:.3e} apart")));
    }
    let e = [(q[0] - p[0]) / dist, (q[1] - p[1]) / dist];
    let ps = [p[0] + r * e[0], p[1] + r * e[1]];
    let qs = [q[0] - r * e[0], q[1] - r * e[1]];
    let to_p = [r * e[0], r * e[1]];
    let to_q = [-r * e[0], -r * e[1]];
    let mut v = vec![ps];
    v.extend(lobe(p, to_p, 1.0, LOBE_SIDES));
    v.extend([ps, qs]);
    v.extend(lobe(q, to_q, 1.0, LOBE_SIDES));
    v.extend([qs, ps]);
    v.extend(lobe(p, to_p, -1.0, LOBE_SIDES));
    v.extend([ps, qs]);
    v.extend(lobe(q, to_q, -1.0, LOBE_SIDES));
    v.push(qs);
    BranchedContour::new(v, 0, sheet, a)
}

/// Net turning of a closed polyline about `c`, in full turns.
pub fn winding_number(vertices: &[[f64; 2]], c: [f64; 2]) -> f64 {
    let n = vertices.len();
    (0..n)
        .map(|i| {
            let p = sub(vertices[i], c);
            let q = sub(vertices[(i + 1) % n], c);
            (p[0] * q[1] - p[1] * q[0]).atan2(p[0] * q[0] + p[1] * q[1])
        })
        .sum::<f64>()
        / (2.0 * PI)
}

/// The four contours of the strip basis at one point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BasisContours {
    pub a: ComplexPoint2,
    /// `Gamma0`, `dGamma(1,1)`, `dGamma(1,2)`, `dGamma(2,1)`.
    pub contours: Vec<BranchedContour>,
}

/// The double-eight contours that make up the basis, as `(ell, j)`.
pub const BASIS_LOOPS: [(u8, usize); 3] = [(1, 1), (1, 2), (2, 1)];

impl BasisContours {
    pub fn new(surface: &SommerfeldSurface, a: &ComplexPoint2) -> Result<Self> {
        if surface.branch_points.len() != 2 {
            return Err(Error::Precondition("the four-function basis needs a surface with two branch points".into()));
        }
        let mut contours = vec![build_gamma0(surface, a)?];
        for (ell, j) in BASIS_LOOPS {
            contours.push(build_double_eight(surface, a, ell, j, 1)?);
        }
        Ok(Self { a: *a, contours })
    }
}

/// `W = (g1, g2, g3, g4)` for every incidence channel of a field.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BasisVector {
    pub a: ComplexPoint2,
    /// `g[channel]`.
    pub g: Vec<[C; 4]>,
}

impl BasisVector {
    /// Largest entrywise difference relative to the largest `|g1|`.
    pub fn relative_difference(&self, other: &BasisVector) -> f64 {
        let scale = self.g.iter().map(|w| w[0].norm()).fold(0.0, f64::max);
        let diff = self
            .g
            .iter()
            .zip(&other.g)
            .flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).norm()))
            .fold(0.0, f64::max);
        diff / scale
    }
}

/// Integrates every basis contour.
pub fn compute_basis(field: &dyn KnownField, set: &BasisContours, tol: Tolerance) -> Result<BasisVector> {
    let dim = field.angles().len();
    let mut g = vec![[C::new(0.0, 0.0); 4]; dim];
    for (i, c) in set.contours.iter().enumerate() {
        let (v, _) = contour_integral_with_rule(&set.a, c, field, tol)?;
        for (w, x) in g.iter_mut().zip(v) {
            w[i] = x;
        }
    }
    Ok(BasisVector { a: set.a, g })
}

/// Basis at `a` with freshly built contours.
pub fn basis_at(field: &dyn KnownField, a: &ComplexPoint2) -> Result<BasisVector> {
    compute_basis(field, &BasisContours::new(field.surface(), a)?, Tolerance::default())
}

/// Smallest distance from a polyline to a point.
pub fn polyline_distance(vertices: &[[f64; 2]], x: [f64; 2]) -> f64 {
    let n = vertices.len();
    (0..n)
        .map(|i| segment_point_distance(vertices[i], vertices[(i + 1) % n], x))
        .fold(f64::INFINITY, f64::min)
}

/// Geometry of the contour pushing.
///
/// Each step moves the associated points by at most `step` and displaces the
/// plane by `beta(|x - A|) * delta`, where `beta` is 1 inside `inner`, 0
/// outside `outer` and linear between. Points near `A` travel with it, points
/// far away stay, and since `step < outer - inner` the map is a homeomorphism
/// that fixes the branch points: contours are dragged, never cut through.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PushSettings {
    pub inner: f64,
    pub outer: f64,
    pub step: f64,
    /// Longest segment allowed near a moving point.
    pub max_segment: f64,
    /// Smallest distance from a special point kept when merging segments.
    pub clearance: f64,
    /// Longest segment produced by merging.
    pub max_merged: f64,
}

impl PushSettings {
    pub fn for_scale(a: f64) -> Self {
        Self { inner: 0.05 * a, outer: 0.12 * a, step: 0.004 * a, max_segment: 0.01 * a, clearance: 0.02 * a, max_merged: 0.25 * a }
    }
}

fn bump(s: &PushSettings, r: f64) -> f64 {
    ((s.outer - r) / (s.outer - s.inner)).clamp(0.0, 1.0)
}

fn point_in_triangle(p: [f64; 2], a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> bool {
    let cross = |u: [f64; 2], v: [f64; 2], w: [f64; 2]| (v[0] - u[0]) * (w[1] - u[1]) - (v[1] - u[1]) * (w[0] - u[0]);
    let d1 = cross(a, b, p);
    let d2 = cross(b, c, p);
    let d3 = cross(c, a, p);
    let neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
    let pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
    !(neg && pos)
}

/// Moves the associated points from `from` to `to` (one small step) and drags
/// every contour along.
fn push_step(
    surface: &SommerfeldSurface,
    contours: &mut [BranchedContour],
    from: &ComplexPoint2,
    to: &ComplexPoint2,
    s: &PushSettings,
) -> Result<()> {
    let (o1, o2) = from.associated_real_points();
    let (n1, n2) = to.associated_real_points();
    let moves: Vec<([f64; 2], [f64; 2])> =
        [(o1, sub(n1, o1)), (o2, sub(n2, o2))].into_iter().filter(|(_, d)| norm(*d) > 1e-13 * surface.length_scale).collect();
    if moves.is_empty() {
        return Ok(());
    }
    for (c, d) in &moves {
        let reach = s.outer + norm(*d);
        if let Some(j) = surface.branch_points.iter().position(|bp| norm(sub(bp.pos(), *c)) <= reach) {
            return Err(Error::Pinch(format!("a moving associated point came within {reach:.3} of branch point {}", j + 1)));
        }
    }
    // the other associated point must stay outside every moving bump
    let gap = norm(sub(o1, o2));
    let need = if moves.len() == 2 { 2.0 * s.outer + s.step } else { s.outer + s.step };
    if gap <= need {
        return Err(Error::Pinch(format!("A1 and A2 are {gap:.3e} apart")));
    }
    let displace = |x: [f64; 2]| {
        let mut y = x;
        for (c, d) in &moves {
            let b = bump(s, norm(sub(x, *c)));
            y[0] += b * d[0];
            y[1] += b * d[1];
        }
        y
    };
    let specials: Vec<[f64; 2]> =
        [n1, n2].into_iter().chain(surface.branch_points.iter().map(|b| b.pos())).collect();
    for c in contours.iter_mut() {
        let n = c.vertices.len();
        // rotate so the anchor is vertex 0, refine near the moving points
        let mut refined: Vec<[f64; 2]> = Vec::with_capacity(n + 16);
        for i in 0..n {
            let p = c.vertices[(c.anchor + i) % n];
            let q = c.vertices[(c.anchor + i + 1) % n];
            refined.push(p);
            let len = norm(sub(q, p));
            let near = moves
                .iter()
                .any(|(x, d)| segment_point_distance(p, q, *x) < s.outer + norm(*d) + s.max_segment);
            if near && len > s.max_segment {
                let m = (len / s.max_segment).ceil() as usize;
                for t in 1..m {
                    let t = t as f64 / m as f64;
                    refined.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
                }
            }
        }
        let old_anchor = refined[0];
        let moved: Vec<[f64; 2]> = refined.iter().map(|&x| displace(x)).collect();
        let new_anchor = moved[0];
        if new_anchor != old_anchor {
            c.anchor_sheet = surface.transport_sheet(c.anchor_sheet, &[old_anchor, new_anchor])?;
        }
        c.vertices = simplify(moved, &specials, &moves, s);
        c.anchor = 0;
        c.anchor_theta = c.anchor_theta_at(to);
    }
    Ok(())
}

/// Drops vertices whose removal sweeps no special point. Sheets and kernel
/// branches along the contour are unchanged by such a move.
fn simplify(v: Vec<[f64; 2]>, specials: &[[f64; 2]], moves: &[([f64; 2], [f64; 2])], s: &PushSettings) -> Vec<[f64; 2]> {
    let n = v.len();
    let mut out: Vec<[f64; 2]> = Vec::with_capacity(n);
    out.push(v[0]);
    for i in 1..n {
        let prev = *out.last().expect("anchor kept");
        let next = v[(i + 1) % n];
        let cur = v[i];
        let removable = out.len() + (n - i) > 3
            && norm(sub(next, prev)) <= s.max_merged
            && specials.iter().all(|&x| {
                !point_in_triangle(x, prev, cur, next) && segment_point_distance(prev, next, x) >= s.clearance
            })
            && moves.iter().all(|(x, _)| segment_point_distance(prev, next, *x) >= s.outer + s.step + s.max_segment);
        if !removable {
            out.push(cur);
        }
    }
    out
}

/// Drags the contours while `A` follows `path`. The first path point must be
/// the point the contours were built for.
pub fn push_continue(
    surface: &SommerfeldSurface,
    contours: &mut [BranchedContour],
    path: &[ComplexPoint2],
    settings: &PushSettings,
) -> Result<()> {
    for w in path.windows(2) {
        let (o1, o2) = w[0].associated_real_points();
        let (n1, n2) = w[1].associated_real_points();
        let travel = norm(sub(n1, o1)).max(norm(sub(n2, o2)));
        let steps = (travel / settings.step).ceil().max(1.0) as usize;
        let mut prev = w[0];
        for i in 1..=steps {
            let t = i as f64 / steps as f64;
            let next = ComplexPoint2::new(w[0].x1 + (w[1].x1 - w[0].x1) * t, w[0].x2 + (w[1].x2 - w[0].x2) * t);
            push_step(surface, contours, &prev, &next, settings)?;
            prev = next;
        }
    }
    Ok(())
}

impl BasisContours {
    /// Continues the basis contours along `path`, which must start at `self.a`.
    pub fn continue_along(&mut self, surface: &SommerfeldSurface, path: &[ComplexPoint2], settings: &PushSettings) -> Result<()> {
        match path.first() {
            Some(p) if (p.x1 - self.a.x1).norm() + (p.x2 - self.a.x2).norm() < 1e-12 => {}
            _ => return Err(Error::Precondition("path must start at the current point".into())),
        }
        push_continue(surface, &mut self.contours, path, settings)?;
        self.a = *path.last().expect("nonempty path");
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.contours.iter().map(|c| c.vertices.len()).sum()
    }
}

/// Radius of the loops of elementary bypasses, in units of the length scale.
pub const BYPASS_RADIUS: f64 = 0.2;
const BYPASS_SIDES: usize = 96;

/// A closed path in C^2 on which `A_ell` winds once about `P_j` while the
/// other associated point stays put.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BypassPath {
    pub ell: u8,
    pub j: usize,
    /// `+1` when `A_ell` turns counterclockwise.
    pub direction: i8,
    pub points: Vec<ComplexPoint2>,
}

impl BypassPath {
    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        Self { direction: -self.direction, points, ..self.clone() }
    }
}

/// Elementary bypass: `A_ell` runs straight towards `P_j`, circles it once at
/// radius `BYPASS_RADIUS * a` and comes back the same way.
pub fn elementary_bypass(
    surface: &SommerfeldSurface,
    ell: u8,
    j: usize,
    a: &ComplexPoint2,
    direction: i8,
) -> Result<BypassPath> {
    let (a1, a2) = a.associated_real_points();
    let (moving, fixed) = match ell {
        1 => (a1, a2),
        2 => (a2, a1),
        _ => return Err(Error::InvalidParameter { field: "ell", reason: format!("{ell}") }),
    };
    if direction != 1 && direction != -1 {
        return Err(Error::InvalidParameter { field: "direction", reason: format!("{direction}") });
    }
    let c = surface
        .branch_points
        .get(j.wrapping_sub(1))
        .ok_or_else(|| Error::InvalidParameter { field: "j", reason: format!("{j}") })?
        .pos();
    let r = BYPASS_RADIUS * surface.length_scale;
    let d = sub(moving, c);
    let dist = norm(d);
    if dist <= r {
        return Err(Error::Geometry(format!("A{ell} is already within the bypass radius of P{j}")));
    }
    let start_angle = d[1].atan2(d[0]);
    let entry = [c[0] + r * d[0] / dist, c[1] + r * d[1] / dist];
    let point = |x: [f64; 2]| match ell {
        1 => ComplexPoint2::from_real_points(x, fixed),
        _ => ComplexPoint2::from_real_points(fixed, x),
    };
    let mut points = vec![*a, point(entry)];
    for i in 1..=BYPASS_SIDES {
        let t = start_angle + f64::from(direction) * 2.0 * PI * i as f64 / BYPASS_SIDES as f64;
        points.push(point([c[0] + r * t.cos(), c[1] + r * t.sin()]));
    }
    points.push(*a);
    Ok(BypassPath { ell, j, direction, points })
}

/// Closed path on which `A2` circles `A1` once counterclockwise.
pub fn loop_a2_around_a1(a: &ComplexPoint2, sides: usize) -> Vec<ComplexPoint2> {
    let (a1, a2) = a.associated_real_points();
    let d = sub(a2, a1);
    let r = norm(d);
    let t0 = d[1].atan2(d[0]);
    (0..=sides)
        .map(|i| {
            let t = t0 + 2.0 * PI * i as f64 / sides as f64;
            ComplexPoint2::from_real_points(a1, [a1[0] + r * t.cos(), a1[1] + r * t.sin()])
        })
        .collect()
}
