//! Monodromy of the strip basis and the coefficients of the coordinate
//! equations `dV/dx_ell = V Z_ell`.

use nalgebra::{Matrix4, SVD};
use num_complex::Complex64;
use serde::Serialize;

use crate::continuation::{compute_basis, elementary_bypass, BasisContours, BasisVector, PushSettings};
use crate::error::{Error, Result};
use crate::field::KnownField;
use crate::green::{contour_integral_fixed, contour_integral_with_rule, ComplexPoint2, IntegrationRule};
use crate::quadrature::Tolerance;

type C = Complex64;
pub type CMatrix = Matrix4<C>;

/// Largest condition number accepted for `V`.
pub const MAX_CONDITION: f64 = 1e8;

/// Integer 4x4 matrix acting on `W` under an elementary bypass.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MonodromyMatrix {
    pub ell: u8,
    pub j: usize,
    pub entries: [[i64; 4]; 4],
}

pub fn identity4() -> [[i64; 4]; 4] {
    let mut m = [[0; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    m
}

pub fn int_mul(a: &[[i64; 4]; 4], b: &[[i64; 4]; 4]) -> [[i64; 4]; 4] {
    let mut out = [[0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn int_add(a: &[[i64; 4]; 4], b: &[[i64; 4]; 4]) -> [[i64; 4]; 4] {
    let mut out = *a;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] += b[i][j];
        }
    }
    out
}

/// Exact determinant by cofactor expansion.
pub fn int_det(m: &[[i64; 4]; 4]) -> i64 {
    fn det(rows: &[usize], cols: &[usize], m: &[[i64; 4]; 4]) -> i64 {
        if rows.len() == 1 {
            return m[rows[0]][cols[0]];
        }
        let mut s = 0;
        for (c, &col) in cols.iter().enumerate() {
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != col).collect();
            let sign = if c % 2 == 0 { 1 } else { -1 };
            s += sign * m[rows[0]][col] * det(&rows[1..], &rest, m);
        }
        s
    }
    det(&[0, 1, 2, 3], &[0, 1, 2, 3], m)
}

impl MonodromyMatrix {
    pub fn det(&self) -> i64 {
        int_det(&self.entries)
    }

    pub fn to_complex(&self) -> CMatrix {
        CMatrix::from_fn(|i, j| C::new(self.entries[i][j] as f64, 0.0))
    }
}

/// The reference monodromy matrices of the strip basis.
pub fn reference_matrix(ell: u8, j: usize) -> Result<MonodromyMatrix> {
    let entries = match (ell, j) {
        (1, 1) => [[1, -1, 0, 0], [0, -1, 0, 0], [0, -2, 1, 0], [0, 0, 0, 1]],
        (1, 2) => [[1, 0, -1, 0], [0, 1, -2, 0], [0, 0, -1, 0], [0, 0, 0, 1]],
        (2, 1) => [[1, 0, 0, -1], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]],
        (2, 2) => [[1, -1, 1, -1], [0, 1, 0, 0], [0, 0, 1, 0], [0, -2, 2, -1]],
        _ => return Err(Error::InvalidParameter { field: "ell,j", reason: format!("({ell}, {j})") }),
    };
    Ok(MonodromyMatrix { ell, j, entries })
}

/// Product of the matrices of a word of bypasses, in path order.
pub fn word_matrix(word: &[(u8, usize)]) -> Result<[[i64; 4]; 4]> {
    let mut m = identity4();
    for &(ell, j) in word {
        m = int_mul(&m, &reference_matrix(ell, j)?.entries);
    }
    Ok(m)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct IdentityReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Exact integer checks: `M^2 = I`, `M1j M2k = M2k M1j`,
/// `I + M1j M2k = M1j + M2k`, and `det M = -1`.
pub fn verify_matrix_identities() -> IdentityReport {
    let mut r = IdentityReport::default();
    let id = identity4();
    let m = |ell, j| reference_matrix(ell, j).expect("valid index").entries;
    for ell in 1..=2u8 {
        for j in 1..=2 {
            r.checked += 2;
            if int_mul(&m(ell, j), &m(ell, j)) != id {
                r.failures.push(format!("M({ell},{j}) squared is not the identity"));
            }
            if int_det(&m(ell, j)) != -1 {
                r.failures.push(format!("det M({ell},{j}) = {}", int_det(&m(ell, j))));
            }
        }
    }
    for j in 1..=2 {
        for k in 1..=2 {
            r.checked += 2;
            let (a, b) = (m(1, j), m(2, k));
            if int_mul(&a, &b) != int_mul(&b, &a) {
                r.failures.push(format!("M(1,{j}) and M(2,{k}) do not commute"));
            }
            if int_add(&id, &int_mul(&a, &b)) != int_add(&a, &b) {
                r.failures.push(format!("additive crossing fails for M(1,{j}), M(2,{k})"));
            }
        }
    }
    r
}

/// `V` with columns `W` for four incidence angles.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FundamentalMatrix {
    pub a: ComplexPoint2,
    pub angles: Vec<f64>,
    pub v: CMatrix,
}

impl FundamentalMatrix {
    pub fn from_basis(w: &BasisVector, angles: &[f64]) -> Result<Self> {
        if w.g.len() != 4 || angles.len() != 4 {
            return Err(Error::Precondition("the fundamental matrix needs exactly four incidence angles".into()));
        }
        Ok(Self { a: w.a, angles: angles.to_vec(), v: CMatrix::from_fn(|i, ch| w.g[ch][i]) })
    }

    pub fn condition(&self) -> f64 {
        condition_number(&self.v)
    }

    pub fn inverse(&self) -> Result<CMatrix> {
        checked_inverse(&self.v)
    }
}

pub fn condition_number(m: &CMatrix) -> f64 {
    let sv = SVD::new(*m, false, false).singular_values;
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

fn checked_inverse(m: &CMatrix) -> Result<CMatrix> {
    let cond = condition_number(m);
    if !(cond < MAX_CONDITION) {
        return Err(Error::Singular(cond));
    }
    m.try_inverse().ok_or(Error::Singular(cond))
}

/// Continues the basis contours along a word of elementary bypasses, all
/// based at the current point. Directions follow `direction`.
pub fn continue_word(
    field: &dyn KnownField,
    set: &BasisContours,
    word: &[(u8, usize)],
    direction: i8,
    settings: &PushSettings,
) -> Result<BasisContours> {
    let mut out = set.clone();
    for &(ell, j) in word {
        let path = elementary_bypass(field.surface(), ell, j, &out.a, direction)?;
        out.continue_along(field.surface(), &path.points, settings)?;
    }
    Ok(out)
}

/// Measured action of a path on `V`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasuredMonodromy {
    pub numeric: CMatrix,
    pub rounded: [[i64; 4]; 4],
    /// Largest entrywise distance of `numeric` from `rounded`.
    pub residual: f64,
}

pub fn round_matrix(m: &CMatrix) -> ([[i64; 4]; 4], f64) {
    let mut r = [[0; 4]; 4];
    let mut res: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let v = m[(i, j)];
            r[i][j] = v.re.round() as i64;
            res = res.max((v - C::new(r[i][j] as f64, 0.0)).norm());
        }
    }
    (r, res)
}

/// `V_after V_before^-1` for a word of bypasses.
pub fn measure_word(
    field: &dyn KnownField,
    set: &BasisContours,
    before: &FundamentalMatrix,
    word: &[(u8, usize)],
    settings: &PushSettings,
    tol: Tolerance,
) -> Result<MeasuredMonodromy> {
    let after_set = continue_word(field, set, word, 1, settings)?;
    let w = compute_basis(field, &after_set, tol)?;
    let after = FundamentalMatrix::from_basis(&w, field.angles())?;
    let numeric = after.v * before.inverse()?;
    let (rounded, residual) = round_matrix(&numeric);
    Ok(MeasuredMonodromy { numeric, rounded, residual })
}

/// Monodromy of the elementary bypass `sigma_(ell, j)`.
pub fn measure_monodromy(
    field: &dyn KnownField,
    set: &BasisContours,
    ell: u8,
    j: usize,
    settings: &PushSettings,
    tol: Tolerance,
) -> Result<MeasuredMonodromy> {
    let before = FundamentalMatrix::from_basis(&compute_basis(field, set, tol)?, field.angles())?;
    measure_word(field, set, &before, &[(ell, j)], settings, tol)
}

/// Evaluates `V` at shifted points with quadrature rules frozen at the centre,
/// so differences in `A` are smooth in the shift.
pub struct StencilEvaluator<'a> {
    field: &'a dyn KnownField,
    set: BasisContours,
    rules: Vec<IntegrationRule>,
}

impl<'a> StencilEvaluator<'a> {
    pub fn new(field: &'a dyn KnownField, set: &BasisContours, tol: Tolerance) -> Result<Self> {
        let mut rules = Vec::with_capacity(set.contours.len());
        for c in &set.contours {
            rules.push(contour_integral_with_rule(&set.a, c, field, tol)?.1);
        }
        Ok(Self { field, set: set.clone(), rules })
    }

    /// `V` at `a + (d1, d2)`.
    pub fn v_at(&self, d1: C, d2: C) -> Result<CMatrix> {
        let a = self.set.a.offset(d1, d2);
        let dim = self.field.angles().len();
        if dim != 4 {
            return Err(Error::Precondition("the fundamental matrix needs exactly four incidence angles".into()));
        }
        let mut v = CMatrix::zeros();
        for (i, (c, rule)) in self.set.contours.iter().zip(&self.rules).enumerate() {
            let vals = contour_integral_fixed(&a, c, self.field, rule)?;
            for (ch, x) in vals.into_iter().enumerate() {
                v[(i, ch)] = x;
            }
        }
        Ok(v)
    }
}

/// `Z1`, `Z2` and the consistency residual at one point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoordinateEquations {
    pub h: f64,
    pub z1: CMatrix,
    pub z2: CMatrix,
    /// `Z1 Z2 - Z2 Z1 - d2 Z1 + d1 Z2`.
    pub consistency: CMatrix,
    /// `V^-1 (d1 V - V Z1)` from the same stencil; zero up to rounding.
    pub defining_residual: f64,
}

impl CoordinateEquations {
    pub fn consistency_norm(&self) -> f64 {
        frobenius(&self.consistency)
    }
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Central differences of `V` on a 3x3 stencil of real shifts of `x1`, `x2`.
pub fn compute_z(eval: &StencilEvaluator, h: f64) -> Result<CoordinateEquations> {
    let hc = C::new(h, 0.0);
    let zero = C::new(0.0, 0.0);
    let mut v = [[CMatrix::zeros(); 3]; 3];
    for (i, row) in v.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let d1 = hc * (i as f64 - 1.0);
            let d2 = hc * (j as f64 - 1.0);
            *cell = eval.v_at(if i == 1 { zero } else { d1 }, if j == 1 { zero } else { d2 })?;
        }
    }
    let inv = |m: &CMatrix| checked_inverse(m);
    // Z1 at (0, s) and Z2 at (s, 0) for s in {-h, 0, h}
    let z1_at = |j: usize| -> Result<CMatrix> { Ok(inv(&v[1][j])? * (v[2][j] - v[0][j]) * C::new(0.5 / h, 0.0)) };
    let z2_at = |i: usize| -> Result<CMatrix> { Ok(inv(&v[i][1])? * (v[i][2] - v[i][0]) * C::new(0.5 / h, 0.0)) };
    let z1 = z1_at(1)?;
    let z2 = z2_at(1)?;
    let d2z1 = (z1_at(2)? - z1_at(0)?) * C::new(0.5 / h, 0.0);
    let d1z2 = (z2_at(2)? - z2_at(0)?) * C::new(0.5 / h, 0.0);
    let consistency = z1 * z2 - z2 * z1 - d2z1 + d1z2;
    let d1v = (v[2][1] - v[0][1]) * C::new(0.5 / h, 0.0);
    let defining_residual = frobenius(&(inv(&v[1][1])? * (d1v - v[1][1] * z1)));
    Ok(CoordinateEquations { h, z1, z2, consistency, defining_residual })
}
