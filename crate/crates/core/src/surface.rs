//! Sommerfeld surfaces: finitely many copies of the plane glued along cuts.
//!
//! Sheets are numbered from 1; sheet 1 is the physical plane. Each cut is an
//! oriented segment or ray. Its left side is the side to the left of the
//! direction vector. Crossing a cut from left to right on sheet `s` lands on
//! sheet `gluing[s - 1]`; crossing right to left applies the inverse.

use serde::Serialize;

use crate::error::{Error, Result};

/// Guard radius around branch points, relative to the surface length scale.
pub const BRANCH_GUARD_REL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BranchPoint {
    pub x1: f64,
    pub x2: f64,
    pub order: u32,
}

impl BranchPoint {
    pub fn pos(&self) -> [f64; 2] {
        [self.x1, self.x2]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CutShape {
    Segment { from: [f64; 2], to: [f64; 2] },
    Ray { from: [f64; 2], dir: [f64; 2] },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cut {
    pub shape: CutShape,
    /// `gluing[s - 1]` is the sheet reached from sheet `s` when crossing
    /// left to right.
    pub gluing: Vec<usize>,
}

impl Cut {
    fn origin_dir(&self) -> ([f64; 2], [f64; 2]) {
        match self.shape {
            CutShape::Segment { from, to } => (from, [to[0] - from[0], to[1] - from[1]]),
            CutShape::Ray { from, dir } => (from, dir),
        }
    }

    /// Signed side value: positive on the left.
    fn side_value(&self, p: [f64; 2]) -> f64 {
        let (o, d) = self.origin_dir();
        let n = (d[0] * d[0] + d[1] * d[1]).sqrt();
        (d[0] * (p[1] - o[1]) - d[1] * (p[0] - o[0])) / n
    }

    /// Whether a point on the supporting line lies strictly inside the cut.
    fn contains_on_line(&self, p: [f64; 2]) -> bool {
        let (o, d) = self.origin_dir();
        let t = ((p[0] - o[0]) * d[0] + (p[1] - o[1]) * d[1]) / (d[0] * d[0] + d[1] * d[1]);
        match self.shape {
            CutShape::Segment { .. } => t > 0.0 && t < 1.0,
            CutShape::Ray { .. } => t > 0.0,
        }
    }

    /// Euclidean distance from `p` to the cut.
    pub fn distance(&self, p: [f64; 2]) -> f64 {
        let (o, d) = self.origin_dir();
        let len2 = d[0] * d[0] + d[1] * d[1];
        let mut t = ((p[0] - o[0]) * d[0] + (p[1] - o[1]) * d[1]) / len2;
        t = match self.shape {
            CutShape::Segment { .. } => t.clamp(0.0, 1.0),
            CutShape::Ray { .. } => t.max(0.0),
        };
        (p[0] - o[0] - t * d[0]).hypot(p[1] - o[1] - t * d[1])
    }

    fn apply(&self, sheet: usize, left_to_right: bool) -> usize {
        if left_to_right {
            self.gluing[sheet - 1]
        } else {
            self.gluing.iter().position(|&s| s == sheet).map(|i| i + 1).unwrap_or(sheet)
        }
    }
}

/// Side flag for a point lying exactly on a cut.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum Side {
    #[default]
    None,
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SurfacePoint {
    pub x1: f64,
    pub x2: f64,
    pub sheet: usize,
    pub side: Side,
}

impl SurfacePoint {
    pub fn new(x1: f64, x2: f64, sheet: usize) -> Self {
        Self { x1, x2, sheet, side: Side::None }
    }

    pub fn with_side(mut self, side: Side) -> Self {
        self.side = side;
        self
    }

    /// Natural projection to the real plane.
    pub fn project(&self) -> [f64; 2] {
        [self.x1, self.x2]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SommerfeldSurface {
    pub sheets: usize,
    pub branch_points: Vec<BranchPoint>,
    pub cuts: Vec<Cut>,
    /// Characteristic length used for the branch-point guard.
    pub length_scale: f64,
}

/// Part `[t0, t1]` of segment `segment` of a polyline, lying on one sheet.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathPiece {
    pub segment: usize,
    pub t0: f64,
    pub t1: f64,
    pub sheet: usize,
}

/// Sheet-crossing event inside one path segment.
struct Crossing {
    t: f64,
    cut: usize,
    left_to_right: bool,
}

impl SommerfeldSurface {
    pub fn new(
        sheets: usize,
        branch_points: Vec<BranchPoint>,
        cuts: Vec<Cut>,
        length_scale: f64,
    ) -> Result<Self> {
        if sheets == 0 {
            return Err(Error::InvalidParameter { field: "sheets", reason: "must be positive".into() });
        }
        for (i, cut) in cuts.iter().enumerate() {
            let mut seen = vec![false; sheets];
            if cut.gluing.len() != sheets {
                return Err(Error::InvalidParameter {
                    field: "gluing",
                    reason: format!("cut {i} has {} entries for {sheets} sheets", cut.gluing.len()),
                });
            }
            for &s in &cut.gluing {
                if s == 0 || s > sheets || seen[s - 1] {
                    return Err(Error::InvalidParameter {
                        field: "gluing",
                        reason: format!("cut {i} is not a permutation"),
                    });
                }
                seen[s - 1] = true;
            }
        }
        let surface = Self { sheets, branch_points, cuts, length_scale };
        for j in 0..surface.branch_points.len() {
            let measured = surface.loop_order(j)?;
            let declared = surface.branch_points[j].order;
            if measured != declared {
                return Err(Error::InvalidParameter {
                    field: "branch_points",
                    reason: format!("point {j} declared order {declared}, gluing gives {measured}"),
                });
            }
        }
        Ok(surface)
    }

    pub fn branch_guard(&self) -> f64 {
        BRANCH_GUARD_REL * self.length_scale
    }

    /// Permutation produced by one positive loop around branch point `j`.
    pub fn loop_permutation(&self, j: usize) -> Result<Vec<usize>> {
        let bp = self.branch_points[j];
        // radius small enough to see no other branch point
        let mut r = self.length_scale * 0.25;
        for (k, other) in self.branch_points.iter().enumerate() {
            if k != j {
                let d = ((other.x1 - bp.x1).powi(2) + (other.x2 - bp.x2).powi(2)).sqrt();
                r = r.min(0.25 * d);
            }
        }
        let n = 64;
        let path: Vec<[f64; 2]> = (0..=n)
            .map(|i| {
                // start at an irrational-looking angle so no vertex sits on a cut
                let th = 0.123 + 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                [bp.x1 + r * th.cos(), bp.x2 + r * th.sin()]
            })
            .collect();
        (1..=self.sheets).map(|s| self.transport_sheet(s, &path)).collect()
    }

    /// Least common multiple of the cycle lengths of the loop permutation.
    pub fn loop_order(&self, j: usize) -> Result<u32> {
        let perm = self.loop_permutation(j)?;
        let mut order = 1u32;
        let mut visited = vec![false; self.sheets];
        for start in 0..self.sheets {
            if visited[start] {
                continue;
            }
            let mut len = 0u32;
            let mut s = start;
            while !visited[s] {
                visited[s] = true;
                s = perm[s] - 1;
                len += 1;
            }
            order = lcm(order, len);
        }
        Ok(order)
    }

    fn check_segment_clear(&self, p: [f64; 2], q: [f64; 2]) -> Result<()> {
        let guard = self.branch_guard();
        for (index, bp) in self.branch_points.iter().enumerate() {
            if segment_point_distance(p, q, bp.pos()) < guard {
                return Err(Error::BranchPointHit { index, guard });
            }
        }
        Ok(())
    }

    fn crossings(&self, p: [f64; 2], q: [f64; 2], signs: &mut [f64]) -> Vec<Crossing> {
        let mut events = Vec::new();
        for (ci, cut) in self.cuts.iter().enumerate() {
            let sq = cut.side_value(q);
            let tol = 1e-14 * self.length_scale;
            if sq.abs() <= tol {
                continue;
            }
            let prev = signs[ci];
            if prev != 0.0 && prev.signum() != sq.signum() {
                let sp = cut.side_value(p);
                let t = if sp.abs() <= tol { 0.0 } else { sp / (sp - sq) };
                let x = [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])];
                if cut.contains_on_line(x) {
                    events.push(Crossing { t, cut: ci, left_to_right: prev > 0.0 });
                }
            }
            signs[ci] = sq.signum();
        }
        events.sort_by(|a, b| a.t.total_cmp(&b.t));
        events
    }

    fn initial_signs(&self, start: [f64; 2], side: Side) -> Vec<f64> {
        self.cuts
            .iter()
            .map(|cut| {
                let s = cut.side_value(start);
                if s.abs() > 1e-14 * self.length_scale {
                    s.signum()
                } else {
                    match side {
                        Side::Left | Side::None => 1.0,
                        Side::Right => -1.0,
                    }
                }
            })
            .collect()
    }

    /// Sheet reached by following `path` from `sheet`. `path[0]` is the start.
    pub fn transport_sheet(&self, sheet: usize, path: &[[f64; 2]]) -> Result<usize> {
        self.transport_sheet_from(sheet, Side::None, path).map(|(s, _)| s)
    }

    fn transport_sheet_from(
        &self,
        sheet: usize,
        side: Side,
        path: &[[f64; 2]],
    ) -> Result<(usize, Vec<f64>)> {
        let mut signs = match path.first() {
            Some(&p) => self.initial_signs(p, side),
            None => return Ok((sheet, vec![])),
        };
        let mut s = sheet;
        for w in path.windows(2) {
            self.check_segment_clear(w[0], w[1])?;
            for ev in self.crossings(w[0], w[1], &mut signs) {
                s = self.cuts[ev.cut].apply(s, ev.left_to_right);
            }
        }
        Ok((s, signs))
    }

    /// Splits every segment of `path` at cut crossings. Each piece carries
    /// the sheet it lies on. Returns the pieces and the final sheet.
    pub fn walk(&self, sheet: usize, path: &[[f64; 2]]) -> Result<(Vec<PathPiece>, usize)> {
        let mut pieces = Vec::new();
        let mut signs = match path.first() {
            Some(&p) => self.initial_signs(p, Side::None),
            None => return Ok((pieces, sheet)),
        };
        let mut s = sheet;
        for (segment, w) in path.windows(2).enumerate() {
            self.check_segment_clear(w[0], w[1])?;
            let mut t0 = 0.0;
            for ev in self.crossings(w[0], w[1], &mut signs) {
                if ev.t > t0 {
                    pieces.push(PathPiece { segment, t0, t1: ev.t, sheet: s });
                }
                t0 = ev.t;
                s = self.cuts[ev.cut].apply(s, ev.left_to_right);
            }
            if t0 < 1.0 {
                pieces.push(PathPiece { segment, t0, t1: 1.0, sheet: s });
            }
        }
        Ok((pieces, s))
    }

    /// Sheet transport of a surface point along a real polyline.
    pub fn transport(&self, start: SurfacePoint, path: &[[f64; 2]]) -> Result<SurfacePoint> {
        if start.sheet == 0 || start.sheet > self.sheets {
            return Err(Error::InvalidParameter { field: "sheet", reason: format!("{}", start.sheet) });
        }
        let mut full = Vec::with_capacity(path.len() + 1);
        full.push(start.project());
        let skip = match path.first() {
            Some(p) if (p[0] - start.x1).abs() + (p[1] - start.x2).abs() == 0.0 => 1,
            _ => 0,
        };
        full.extend_from_slice(&path[skip..]);
        let (sheet, signs) = self.transport_sheet_from(start.sheet, start.side, &full)?;
        let end = *full.last().unwrap_or(&start.project());
        let mut side = Side::None;
        for (ci, cut) in self.cuts.iter().enumerate() {
            if cut.side_value(end).abs() <= 1e-14 * self.length_scale && cut.contains_on_line(end) {
                side = if signs[ci] > 0.0 { Side::Left } else { Side::Right };
            }
        }
        Ok(SurfacePoint { x1: end[0], x2: end[1], sheet, side })
    }

    /// Index of a branch point within `eps` of `p`, if any.
    pub fn near_branch_point(&self, p: [f64; 2], eps: f64) -> Option<usize> {
        self.branch_points
            .iter()
            .position(|bp| ((bp.x1 - p[0]).powi(2) + (bp.x2 - p[1]).powi(2)).sqrt() < eps)
    }
}

/// Two-sheeted surface of the Dirichlet segment `|x1| < a, x2 = 0`.
pub fn build_strip_surface(a: f64) -> Result<SommerfeldSurface> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidParameter { field: "a", reason: format!("must be positive, got {a}") });
    }
    SommerfeldSurface::new(
        2,
        vec![BranchPoint { x1: a, x2: 0.0, order: 2 }, BranchPoint { x1: -a, x2: 0.0, order: 2 }],
        vec![Cut { shape: CutShape::Segment { from: [-a, 0.0], to: [a, 0.0] }, gluing: vec![2, 1] }],
        a,
    )
}

/// Two-sheeted surface of the Dirichlet half-line `x1 > 0, x2 = 0`.
pub fn build_halfline_surface() -> SommerfeldSurface {
    SommerfeldSurface::new(
        2,
        vec![BranchPoint { x1: 0.0, x2: 0.0, order: 2 }],
        vec![Cut { shape: CutShape::Ray { from: [0.0, 0.0], dir: [1.0, 0.0] }, gluing: vec![2, 1] }],
        1.0,
    )
    .expect("half-line surface is well formed")
}

/// Face condition of a straight scatterer face.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Face {
    Dirichlet,
    Neumann,
}

/// Sheet count for an ideal wedge of internal angle `p pi / q` with equal
/// conditions on both faces: the denominator of `q / (2q - p)` in lowest
/// terms. `p = 0` is accepted as the half-plane limit and gives 2.
pub fn wedge_sheet_count(p: u64, q: u64) -> Result<u64> {
    if q == 0 || p >= q {
        return Err(Error::InvalidParameter { field: "p,q", reason: format!("need 0 <= p < q, got p={p}, q={q}") });
    }
    let den = 2 * q - p;
    Ok(den / gcd(q, den))
}

/// Sheet count of a half-plane with the given face conditions.
pub fn halfplane_sheet_count(upper: Face, lower: Face) -> u64 {
    if upper == lower {
        2
    } else {
        4
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a as u64, b as u64) as u32 * b
}

pub(crate) fn segment_point_distance(p: [f64; 2], q: [f64; 2], x: [f64; 2]) -> f64 {
    let d = [q[0] - p[0], q[1] - p[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((x[0] - p[0]) * d[0] + (x[1] - p[1]) * d[1]) / len2).clamp(0.0, 1.0)
    };
    let c = [p[0] + t * d[0] - x[0], p[1] + t * d[1] - x[1]];
    (c[0] * c[0] + c[1] * c[1]).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn circle(c: [f64; 2], r: f64, turns: f64, n: usize) -> Vec<[f64; 2]> {
        (0..=n)
            .map(|i| {
                let th = 0.3 + turns * 2.0 * PI * i as f64 / n as f64;
                [c[0] + r * th.cos(), c[1] + r * th.sin()]
            })
            .collect()
    }

    #[test]
    fn strip_has_two_order_two_points() {
        let s = build_strip_surface(1.0).unwrap();
        assert_eq!(s.sheets, 2);
        assert_eq!(s.branch_points[0].pos(), [1.0, 0.0]);
        assert_eq!(s.branch_points[1].pos(), [-1.0, 0.0]);
        assert_eq!(s.loop_order(0).unwrap(), 2);
        assert_eq!(s.loop_order(1).unwrap(), 2);
        assert!(build_strip_surface(0.0).is_err());
    }

    #[test]
    fn loop_around_edge_flips_then_restores() {
        let s = build_strip_surface(1.0).unwrap();
        let once = circle([1.0, 0.0], 0.2, 1.0, 50);
        let twice = circle([1.0, 0.0], 0.2, 2.0, 100);
        assert_eq!(s.transport_sheet(1, &once).unwrap(), 2);
        assert_eq!(s.transport_sheet(1, &twice).unwrap(), 1);
    }

    #[test]
    fn straight_crossing_of_segment() {
        let s = build_strip_surface(1.0).unwrap();
        let start = SurfacePoint::new(0.0, 0.5, 1);
        let end = s.transport(start, &[[0.0, 0.5], [0.0, -0.5]]).unwrap();
        assert_eq!(end.sheet, 2);
        let back = s.transport(end, &[[0.0, -0.5], [0.0, 0.5]]).unwrap();
        assert_eq!(back.sheet, 1);
        let outside = s.transport(SurfacePoint::new(2.0, 0.5, 1), &[[2.0, -0.5]]).unwrap();
        assert_eq!(outside.sheet, 1);
    }

    #[test]
    fn rectangle_around_both_edges() {
        let s = build_strip_surface(1.0).unwrap();
        let rect = [[-2.0, -1.0], [2.0, -1.0], [2.0, 1.0], [-2.0, 1.0], [-2.0, -1.0]];
        assert_eq!(s.transport_sheet(1, &rect).unwrap(), 1);
        // a rectangle that does cross the segment twice
        let rect2 = [[0.0, -1.0], [0.5, -1.0], [0.5, 1.0], [0.0, 1.0], [0.0, -1.0]];
        assert_eq!(s.transport_sheet(1, &rect2).unwrap(), 1);
    }

    #[test]
    fn branch_point_hit_is_rejected() {
        let s = build_strip_surface(1.0).unwrap();
        let r = s.transport_sheet(1, &[[1.0, 1.0], [1.0, -1.0]]);
        assert!(matches!(r, Err(Error::BranchPointHit { index: 0, .. })));
    }

    #[test]
    fn halfline_surface() {
        let s = build_halfline_surface();
        assert_eq!(s.branch_points.len(), 1);
        assert_eq!(s.sheets, 2);
        assert_eq!(s.transport_sheet(1, &circle([0.0, 0.0], 1.0, 2.0, 80)).unwrap(), 1);
        assert_eq!(s.transport_sheet(1, &circle([0.0, 0.0], 1.0, 1.0, 40)).unwrap(), 2);
        let p = SurfacePoint::new(0.3, -0.7, 2);
        assert_eq!(p.project(), [0.3, -0.7]);
    }

    #[test]
    fn endpoint_on_cut_keeps_side() {
        let s = build_strip_surface(1.0).unwrap();
        let end = s.transport(SurfacePoint::new(0.2, 0.5, 1), &[[0.2, 0.0]]).unwrap();
        assert_eq!(end.sheet, 1);
        // the cut runs from -a to a, so the upper half-plane is its left side
        assert_eq!(end.side, Side::Left);
        let below = s.transport(SurfacePoint::new(0.2, -0.5, 1), &[[0.2, 0.0]]).unwrap();
        assert_eq!(below.side, Side::Right);
    }

    #[test]
    fn wedge_counts() {
        assert_eq!(wedge_sheet_count(0, 1).unwrap(), 2);
        assert_eq!(wedge_sheet_count(1, 2).unwrap(), 3);
        assert_eq!(halfplane_sheet_count(Face::Dirichlet, Face::Neumann), 4);
        assert_eq!(halfplane_sheet_count(Face::Neumann, Face::Neumann), 2);
        assert!(wedge_sheet_count(2, 2).is_err());
        assert!(wedge_sheet_count(3, 2).is_err());
    }
}
