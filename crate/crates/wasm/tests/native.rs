use std::f64::consts::PI;

use num_complex::Complex64;
use sommerfeld::field::{halfplane_exact, DEFAULT_K};
use sommerfeld::special::{bessel_j0, hankel1_0};
use sommerfeld::surface::SurfacePoint;
use sommerfeld_wasm::{halfplane_grid_impl, hankel_cover_impl, StripDemo};

#[test]
fn halfplane_grid_matches_exact_solution() {
    let g = halfplane_grid_impl(2.0, 0.02, PI / 3.0, [-1.0, 1.0, 0.5, 1.5], 3, 2, 2).unwrap();
    assert_eq!(g.len(), 12);
    // last point: (1, 1.5) on sheet 2
    let want = halfplane_exact(DEFAULT_K, PI / 3.0, &SurfacePoint::new(1.0, 1.5, 2)).unwrap().u;
    assert!((g[10] - want.re).abs() < 1e-14 && (g[11] - want.im).abs() < 1e-14);
}

#[test]
fn branch_point_gives_nan() {
    let g = halfplane_grid_impl(2.0, 0.0, 1.0, [-1.0, 1.0, -1.0, 1.0], 3, 3, 1).unwrap();
    assert!(g[8].is_nan() && g[9].is_nan());
    assert!(g.iter().enumerate().all(|(i, v)| i == 8 || i == 9 || v.is_finite()));
}

#[test]
fn strip_demo_grid_and_far_field() {
    let demo = StripDemo::solve(2.0, 0.02, PI / 3.0, 32).unwrap();
    assert!(demo.tail_ratio() < 1e-8);
    let far = demo.far_field(8);
    assert_eq!(far.len(), 8);
    assert!(far.iter().all(|v| v.is_finite() && *v > 0.0));
    assert!(StripDemo::solve(-1.0, 0.0, 0.0, 32).is_err());
}

#[test]
fn cover_values_satisfy_the_recurrence() {
    let v = hankel_cover_impl(1.3, 0.2, 0).unwrap();
    let z = Complex64::new(1.3, 0.2);
    let h = hankel1_0(z).unwrap();
    assert!((Complex64::new(v[2], v[3]) - h).norm() < 1e-15);
    let hp = h - 2.0 * bessel_j0(z);
    assert!((Complex64::new(v[4], v[5]) - hp).norm() < 1e-14);
    assert!(v[6] < 1e-13);
    assert!(hankel_cover_impl(0.0, 0.0, 1).is_err());
}

#[test]
fn strip_grid_crosses_the_cut() {
    let f = sommerfeld::field::StripField::solve(DEFAULT_K, 1.0, &[PI / 3.0], 32).unwrap();
    // middle row lies on the cut y = 0, |x| < 1; the corners of that row are branch points
    let g = sommerfeld_wasm::sample_grid(&f, [-1.0, 1.0, -1.0, 1.0], 5, 3, 1).unwrap();
    let above = SurfacePoint::new(0.0, 0.0, 1).with_side(sommerfeld::surface::Side::Left);
    use sommerfeld::field::KnownField;
    let want = f.sample(&above).unwrap()[0].u;
    assert!((g[14] - want.re).abs() < 1e-14 && (g[15] - want.im).abs() < 1e-14);
    assert!(g[10].is_nan() && g[18].is_nan());
}
