use std::f64::consts::PI;

use num_complex::Complex64;
use sommerfeld::field::{incident, FieldSample, KnownField, StripField, DEFAULT_K};
use sommerfeld::green::{contour_integral, deformation_invariance_check, BranchedContour, ComplexPoint2};
use sommerfeld::surface::{build_strip_surface, SommerfeldSurface, SurfacePoint};
use sommerfeld::Result;

type C = Complex64;

/// A plane wave living on the strip surface; entire, so its continuation is
/// the formula itself.
struct PlaneWave {
    surface: SommerfeldSurface,
    angles: Vec<f64>,
}

impl PlaneWave {
    fn new(angles: &[f64]) -> Self {
        Self { surface: build_strip_surface(1.0).unwrap(), angles: angles.to_vec() }
    }

    fn at(&self, phi: f64, a: &ComplexPoint2) -> C {
        (-C::i() * DEFAULT_K * (a.x1 * phi.cos() + a.x2 * phi.sin())).exp()
    }
}

impl KnownField for PlaneWave {
    fn surface(&self) -> &SommerfeldSurface {
        &self.surface
    }
    fn wavenumber(&self) -> C {
        DEFAULT_K
    }
    fn angles(&self) -> &[f64] {
        &self.angles
    }
    fn sample(&self, p: &SurfacePoint) -> Result<Vec<FieldSample>> {
        Ok(self.angles.iter().map(|&phi| incident(DEFAULT_K, phi, [p.x1, p.x2])).collect())
    }
}

fn polygon(c: [f64; 2], r: f64, n: usize, phase: f64) -> Vec<[f64; 2]> {
    (0..n)
        .map(|i| {
            let t = phase + 2.0 * PI * i as f64 / n as f64;
            [c[0] + r * t.cos(), c[1] + r * t.sin()]
        })
        .collect()
}

fn contour(c: [f64; 2], r: f64, n: usize, a: &ComplexPoint2) -> BranchedContour {
    BranchedContour::new(polygon(c, r, n, 0.1), 0, 1, a).unwrap()
}

#[test]
fn small_circle_reproduces_the_field() {
    let f = StripField::solve(DEFAULT_K, 1.0, &[PI / 3.0], 64).unwrap();
    for &(x1, x2) in &[(0.2, 0.5), (-0.6, -0.4), (1.6, 0.1)] {
        let a = ComplexPoint2::real(x1, x2);
        let i = contour_integral(&a, &contour([x1, x2], 0.15, 24, &a), &f).unwrap()[0];
        let u = f.sample(&SurfacePoint::new(x1, x2, 1)).unwrap()[0].u;
        assert!((i - u).norm() < 1e-8, "({x1}, {x2}): {i} vs {u}");
    }
}

#[test]
fn exterior_point_gives_zero() {
    let f = StripField::solve(DEFAULT_K, 1.0, &[PI / 3.0], 64).unwrap();
    let a = ComplexPoint2::real(0.2, 0.9);
    let i = contour_integral(&a, &contour([0.2, 0.4], 0.2, 24, &a), &f).unwrap()[0];
    assert!(i.norm() < 1e-9, "{i}");
}

#[test]
fn complex_point_continues_a_plane_wave() {
    let f = PlaneWave::new(&[0.4, 2.2]);
    let a = ComplexPoint2::new(C::new(0.1, 0.15), C::new(0.5, -0.1));
    let c = contour([0.1, 0.5], 0.4, 32, &a);
    let i = contour_integral(&a, &c, &f).unwrap();
    for (v, &phi) in i.iter().zip(&f.angles) {
        let exact = f.at(phi, &a);
        assert!((v - exact).norm() < 1e-9 * exact.norm(), "{v} vs {exact}");
    }
}

#[test]
fn circle_and_square_agree() {
    let f = StripField::solve(DEFAULT_K, 1.0, &[PI / 3.0], 64).unwrap();
    let a = ComplexPoint2::new(C::new(0.0, 0.05), C::new(0.6, -0.03));
    let circle = contour([0.0, 0.6], 0.3, 32, &a);
    let square = BranchedContour::new(vec![[0.35, 0.3], [0.35, 0.9], [-0.35, 0.9], [-0.35, 0.3]], 0, 1, &a).unwrap();
    let d = deformation_invariance_check(&a, &circle, &square, &f, 1e-3).unwrap();
    assert!(d < 1e-9, "{d:e}");
}

#[test]
fn small_imaginary_shift_is_first_order() {
    let f = StripField::solve(DEFAULT_K, 1.0, &[PI / 3.0], 64).unwrap();
    let (x1, x2) = (0.3, 0.6);
    let s = f.sample(&SurfacePoint::new(x1, x2, 1)).unwrap()[0];
    let c = [x1, x2];
    let mut errs = Vec::new();
    for d in [1e-2, 5e-3] {
        let a = ComplexPoint2::new(C::new(x1, d), C::new(x2, -0.5 * d));
        let i = contour_integral(&a, &contour(c, 0.25, 32, &a), &f).unwrap()[0];
        let taylor = s.u + C::i() * d * s.grad[0] - C::i() * 0.5 * d * s.grad[1];
        errs.push((i - taylor).norm());
    }
    // second-order remainder: halving the shift quarters the error
    let ratio = errs[0] / errs[1];
    assert!((ratio - 4.0).abs() < 0.2, "{errs:?}");
}

#[test]
fn orientation_flips_the_sign() {
    let f = StripField::solve(DEFAULT_K, 1.0, &[PI / 3.0], 64).unwrap();
    let a = ComplexPoint2::new(C::new(0.0, 0.05), C::new(0.6, -0.03));
    let c = contour([0.0, 0.6], 0.3, 32, &a);
    let i = contour_integral(&a, &c, &f).unwrap()[0];
    let j = contour_integral(&a, &c.reversed(), &f).unwrap()[0];
    assert!((i + j).norm() < 1e-10 * i.norm());
}

#[test]
fn contour_through_a_branch_of_the_kernel_is_rejected() {
    let f = StripField::solve(DEFAULT_K, 1.0, &[PI / 3.0], 64).unwrap();
    let a = ComplexPoint2::from_real_points([0.3, 0.6], [0.3, 0.9]);
    let c = BranchedContour::new(vec![[0.0, 0.6], [0.6, 0.6], [0.6, 0.8], [0.0, 0.8]], 3, 1, &a).unwrap();
    assert!(contour_integral(&a, &c, &f).is_err());
}
