use std::f64::consts::PI;

use num_complex::Complex64;
use sommerfeld::continuation::{
    basis_at, build_double_eight, build_gamma0, compute_basis, elementary_bypass, loop_a2_around_a1, push_continue,
    BasisContours, PushSettings,
};
use sommerfeld::field::{KnownField, StripField, DEFAULT_K};
use sommerfeld::green::{contour_integral, double_eight_reduced, ComplexPoint2};
use sommerfeld::quadrature::Tolerance;
use sommerfeld::surface::SurfacePoint;
use sommerfeld::Error;

type C = Complex64;

fn field() -> StripField {
    StripField::solve(DEFAULT_K, 1.0, &[PI / 3.0], 64).unwrap()
}

fn basis_point() -> ComplexPoint2 {
    ComplexPoint2::from_real_points([-0.2, 0.6], [0.2, 0.6])
}

#[test]
fn real_anchor_gives_the_field() {
    let f = field();
    let a = ComplexPoint2::real(0.1, 0.7);
    let w = basis_at(&f, &a).unwrap();
    let u = f.sample(&SurfacePoint::new(0.1, 0.7, 1)).unwrap()[0].u;
    assert!((w.g[0][0] - u).norm() < 1e-9 * u.norm());
}

#[test]
fn gamma0_value_is_analytic() {
    // d/d(Im x1) = i d/d(Re x1) and the complex Helmholtz equation
    let f = field();
    let a = ComplexPoint2::new(C::new(0.0, 0.1), C::new(0.6, 0.0));
    let c = build_gamma0(f.surface(), &a).unwrap();
    let g = |d1: C, d2: C| contour_integral(&a.offset(d1, d2), &c, &f).unwrap()[0];
    let h = 1e-3;
    let (re, im) = (C::new(h, 0.0), C::new(0.0, h));
    let zero = C::new(0.0, 0.0);
    let d_re = (g(re, zero) - g(-re, zero)) / (2.0 * h);
    let d_im = (g(im, zero) - g(-im, zero)) / (2.0 * h);
    assert!((d_im - C::i() * d_re).norm() < 1e-5 * d_re.norm(), "{d_im} vs {d_re}");
    let c0 = g(zero, zero);
    let lap = (g(re, zero) + g(-re, zero) + g(zero, re) + g(zero, -re) - 4.0 * c0) / (h * h);
    let k = f.wavenumber();
    assert!((lap + k * k * c0).norm() < 1e-4 * (k * k * c0).norm());
}

#[test]
fn double_eight_on_the_other_sheet_cancels() {
    let f = field();
    let a = basis_point();
    for (ell, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        let c = build_double_eight(f.surface(), &a, ell, j, 1).unwrap();
        let i0 = contour_integral(&a, &c, &f).unwrap()[0];
        let i1 = contour_integral(&a, &c.on_sheet(2), &f).unwrap()[0];
        assert!((i0 + i1).norm() < 1e-9 * i0.norm(), "({ell},{j})");
    }
}

#[test]
fn reduced_form_matches_full_contour() {
    let f = field();
    let a = ComplexPoint2::from_real_points([-0.3, 0.5], [0.25, 0.7]);
    for (ell, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        let c = build_double_eight(f.surface(), &a, ell, j, 1).unwrap();
        let full = contour_integral(&a, &c, &f).unwrap()[0];
        let red = double_eight_reduced(&a, ell, j, 1, &f, Tolerance::default()).unwrap()[0];
        assert!((full - red).norm() < 1e-8 * full.norm(), "({ell},{j}): {full} vs {red}");
    }
}

#[test]
fn bypass_keeps_the_other_point_fixed() {
    let f = field();
    let a = basis_point();
    let (a1, a2) = a.associated_real_points();
    for j in [1, 2] {
        let p1 = elementary_bypass(f.surface(), 1, j, &a, 1).unwrap();
        assert!(p1.points.iter().all(|p| {
            let (_, b2) = p.associated_real_points();
            (b2[0] - a2[0]).abs() + (b2[1] - a2[1]).abs() < 1e-14 && (p.z2() - a.z2()).norm() < 1e-14
        }));
        let p2 = elementary_bypass(f.surface(), 2, j, &a, 1).unwrap();
        assert!(p2.points.iter().all(|p| {
            let (b1, _) = p.associated_real_points();
            (b1[0] - a1[0]).abs() + (b1[1] - a1[1]).abs() < 1e-14 && (p.z1() - a.z1()).norm() < 1e-14
        }));
    }
}

#[test]
fn trivial_path_changes_nothing() {
    let f = field();
    let a = basis_point();
    let set = BasisContours::new(f.surface(), &a).unwrap();
    let mut moved = set.clone();
    push_continue(f.surface(), &mut moved.contours, &[a, a], &PushSettings::for_scale(1.0)).unwrap();
    assert_eq!(moved.contours, set.contours);
}

#[test]
fn distant_path_leaves_values_fixed() {
    // A moves a little; the contours are barely touched and the integrals
    // follow the analytic continuation of the fixed-contour values
    let f = field();
    let a = basis_point();
    let b = a.offset(C::new(0.02, 0.01), C::new(-0.01, 0.0));
    let mut set = BasisContours::new(f.surface(), &a).unwrap();
    set.continue_along(f.surface(), &[a, b], &PushSettings::for_scale(1.0)).unwrap();
    let pushed = compute_basis(&f, &set, Tolerance::default()).unwrap();
    let fresh = basis_at(&f, &b).unwrap();
    assert!(pushed.relative_difference(&fresh) < 1e-8);
}

#[test]
fn bypass_then_reverse_is_the_identity() {
    let f = field();
    let a = basis_point();
    let set = BasisContours::new(f.surface(), &a).unwrap();
    let w0 = compute_basis(&f, &set, Tolerance::default()).unwrap();
    let path = elementary_bypass(f.surface(), 2, 1, &a, 1).unwrap();
    let mut moved = set.clone();
    let s = PushSettings::for_scale(1.0);
    moved.continue_along(f.surface(), &path.points, &s).unwrap();
    moved.continue_along(f.surface(), &path.reversed().points, &s).unwrap();
    let w1 = compute_basis(&f, &moved, Tolerance::default()).unwrap();
    assert!(w0.relative_difference(&w1) < 1e-6);
}

#[test]
fn loop_of_a2_around_a1_is_trivial() {
    let f = field();
    let a = basis_point();
    let mut set = BasisContours::new(f.surface(), &a).unwrap();
    let w0 = compute_basis(&f, &set, Tolerance::default()).unwrap();
    set.continue_along(f.surface(), &loop_a2_around_a1(&a, 96), &PushSettings::for_scale(1.0)).unwrap();
    let w1 = compute_basis(&f, &set, Tolerance::default()).unwrap();
    assert!(w0.relative_difference(&w1) < 1e-6);
}

#[test]
fn pushing_into_a_branch_point_is_a_pinch() {
    let f = field();
    let a = basis_point();
    let mut set = BasisContours::new(f.surface(), &a).unwrap();
    let target = ComplexPoint2::from_real_points([0.95, 0.05], [0.2, 0.6]);
    let r = set.continue_along(f.surface(), &[a, target], &PushSettings::for_scale(1.0));
    assert!(matches!(r, Err(Error::Pinch(_))), "{r:?}");
}
