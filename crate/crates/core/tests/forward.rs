use std::f64::consts::PI;

use dsm::forward_model::{
    discretize, disk_series_farfield, near_to_far, ring_samples, ring_samples_with, scattered_far, scattered_near,
    simpson_ring_integral, solve_lippmann_schwinger, solve_with_refinement, LippmannSchwinger, Material,
    RefinementPolicy, RingRule, ShapeSpec,
};
use dsm::measurement::far_angles;
use dsm::{Dim, Direction, Point, WaveContext};
use num_complex::Complex64;

fn ctx() -> WaveContext {
    WaveContext::unit_wavelength(Dim::Two)
}

fn relative_l2(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (num / den).sqrt()
}

#[test]
fn disk_matches_partial_wave_series() {
    let c = ctx();
    let disk = ShapeSpec::disk(Point::ORIGIN_2D, 0.3, Material::IndexSquared(Complex64::new(1.5, 0.0))).unwrap();
    let grid = discretize(&c, &[disk], 1.0 / 40.0).unwrap();
    let d = Direction::from_angle(0.0);
    let cur = solve_lippmann_schwinger(&c, &grid, &d).unwrap();
    let dirs = far_angles(64).unwrap();
    let num: Vec<_> = dirs
        .iter()
        .map(|x| scattered_far(&c, &grid, &cur, x).unwrap())
        .collect();
    let exact = disk_series_farfield(&c, 0.3, 1.5, &d, &dirs).unwrap();
    let err = relative_l2(&num, &exact);
    eprintln!("disk oracle relative L2 error at h = λ/40: {err:.4e}");
    assert!(err <= 0.02, "{err}");
}

#[test]
fn disk_series_tail_is_negligible() {
    let c = ctx();
    let b = dsm::forward_model::disk_series_coefficients(&c, 0.3, 1.5).unwrap();
    let tail = dsm::forward_model::disk_series_tail(&c, 0.3, 1.5).unwrap();
    assert!(b.len() >= 22);
    assert!(tail < 1e-12, "{tail}");
}

fn example1() -> Vec<ShapeSpec> {
    vec![ShapeSpec::square(Point::ORIGIN_2D, 0.02, Material::Eta(Complex64::new(1.0, 0.0))).unwrap()]
}

#[test]
fn point_scatterer_is_in_born_regime() {
    let c = ctx();
    let grid = discretize(&c, &example1(), 0.02).unwrap();
    let d = Direction::new2(1.0, 1.0).unwrap();
    let cur = solve_lippmann_schwinger(&c, &grid, &d).unwrap();
    let cell = grid.cells()[0];
    let born = cell.eta * dsm::forward_model::incident_plane_wave(&c, &d, &cell.center);
    assert!((cur.values()[0] - born).norm() / cell.eta.norm() <= 0.05);
}

#[test]
fn near_field_approaches_far_field_asymptotics() {
    let c = ctx();
    let sq = ShapeSpec::square(Point::new2(0.2, -0.1), 0.3, Material::Eta(Complex64::new(1.0, 0.0))).unwrap();
    let grid = discretize(&c, &[sq], 0.02).unwrap();
    let d = Direction::new2(1.0, 1.0).unwrap();
    let cur = solve_lippmann_schwinger(&c, &grid, &d).unwrap();
    for t in [0.0, 0.9, 2.2, 4.4] {
        let xhat = Direction::from_angle(t);
        let x = Point::new2(100.0 * t.cos(), 100.0 * t.sin());
        let us = scattered_near(&c, &grid, &cur, &x).unwrap();
        let scaled = us * 10.0 / Complex64::from_polar(1.0, c.k() * 100.0);
        let far = scattered_far(&c, &grid, &cur, &xhat).unwrap();
        assert!((scaled - far).norm() <= 0.01 * far.norm(), "{scaled} vs {far}");
    }
}

#[test]
fn absorbing_limit_shows_cauchy_trend() {
    let c = ctx();
    let d = Direction::new2(1.0, 1.0).unwrap();
    let dirs = far_angles(50).unwrap();
    let fields: Vec<Vec<Complex64>> = [10.0, 50.0, 200.0]
        .iter()
        .map(|&n2| {
            let sq = ShapeSpec::square(Point::ORIGIN_2D, 0.3, Material::IndexSquared(Complex64::new(1.0, n2))).unwrap();
            let grid = discretize(&c, &[sq], 0.02).unwrap();
            let cur = solve_lippmann_schwinger(&c, &grid, &d).unwrap();
            dirs.iter()
                .map(|x| scattered_far(&c, &grid, &cur, x).unwrap())
                .collect()
        })
        .collect();
    let d01 = relative_l2(&fields[0], &fields[1]);
    let d12 = relative_l2(&fields[1], &fields[2]);
    eprintln!("absorbing limit differences: {d01:.4e} {d12:.4e}");
    assert!(d12 < d01);
}

fn max_relative(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm() / y.norm())
        .fold(0.0, f64::max)
}

#[test]
fn kirchhoff_transform_converges_for_example1() {
    let c = ctx();
    let grid = discretize(&c, &example1(), 0.02).unwrap();
    let d = Direction::new2(1.0, 1.0).unwrap();
    let cur = solve_lippmann_schwinger(&c, &grid, &d).unwrap();
    let dirs = far_angles(50).unwrap();
    let direct: Vec<_> = dirs
        .iter()
        .map(|x| scattered_far(&c, &grid, &cur, x).unwrap())
        .collect();
    let via = |ring: &dsm::forward_model::RingSamples, rule| -> Vec<Complex64> {
        dirs.iter().map(|x| near_to_far(&c, ring, x, rule).unwrap()).collect()
    };
    // the 50-interval trapezoid already resolves the integrand on the
    // radius-5 ring; Simpson needs its half-resolution trapezoid resolved too
    let coarse = ring_samples(&c, &grid, &cur).unwrap();
    assert!(max_relative(&via(&coarse, RingRule::Trapezoid), &direct) < 1e-4);
    let fine = ring_samples_with(&c, &grid, &cur, 5.0, 201).unwrap();
    assert!(max_relative(&via(&fine, RingRule::Simpson), &direct) < 1e-6);
    assert!(max_relative(&via(&fine, RingRule::Trapezoid), &direct) < 1e-8);
}

#[test]
fn simpson_is_exact_on_constants_and_cosine() {
    let c = Complex64::new(0.7, -1.3);
    let v = simpson_ring_integral(&[c; 51], 5.0).unwrap();
    assert!((v - c * (10.0 * PI)).norm() < 1e-13);
    let cosine: Vec<_> = (0..51)
        .map(|j| Complex64::new((2.0 * PI * j as f64 / 50.0).cos(), 0.0))
        .collect();
    assert!(simpson_ring_integral(&cosine, 5.0).unwrap().norm() < 1e-14);
}

#[test]
fn refinement_reports_convergence_state() {
    let c = ctx();
    let d = Direction::new2(1.0, 1.0).unwrap();
    let fixed = solve_with_refinement(&c, &example1(), &[d], &RefinementPolicy::fixed(0.02)).unwrap();
    assert!(fixed.converged);
    assert_eq!(fixed.grid.len(), 1);
    let sq = ShapeSpec::square(Point::ORIGIN_2D, 0.3, Material::Eta(Complex64::new(1.0, 0.0))).unwrap();
    let policy = RefinementPolicy {
        max_cells: 1000,
        ..RefinementPolicy::standard(&c)
    };
    let sol = solve_with_refinement(&c, &[sq], &[d], &policy).unwrap();
    assert!(sol.grid.len() <= 1000);
    assert_eq!(sol.currents.len(), 1);
    if !sol.converged {
        assert!(sol.last_change.map_or(true, |v| v >= policy.tolerance));
    }
}

#[test]
fn factorization_is_shared_across_incidents() {
    let c = ctx();
    let sq = ShapeSpec::square(Point::ORIGIN_2D, 0.1, Material::Eta(Complex64::new(1.0, 0.0))).unwrap();
    let grid = discretize(&c, &[sq], 0.02).unwrap();
    let ls = LippmannSchwinger::new(&c, &grid).unwrap();
    let a = ls.solve(&Direction::from_angle(0.0)).unwrap();
    let b = ls.solve(&Direction::from_angle(PI)).unwrap();
    assert_ne!(a, b);
}
