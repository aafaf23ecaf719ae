use std::f64::consts::PI;

use dsm::forward_model::{discretize, Material, ShapeSpec};
use dsm::green_kernel::{farfield_correlation, green, green_farfield, im_green, lemma_constant, scaled_im_green};
use dsm::indicator::{combine_max, indicator_far, indicator_near, superlevel_components, IndicatorGrid, SamplingGrid};
use dsm::measurement::{add_noise, far_angles, near_circle_geometry, FieldSamples, NoiseSpec};
use dsm::special_fn::{bessel_j, bessel_jy_sequences, bessel_y};
use dsm::{ComplexScalar, Dim, Direction, Point, WaveContext};
use num_complex::Complex64;
use proptest::prelude::*;

fn ctx2() -> WaveContext {
    WaveContext::unit_wavelength(Dim::Two)
}

fn point2() -> impl Strategy<Value = Point> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(x, y)| Point::new2(x, y))
}

fn point3() -> impl Strategy<Value = Point> {
    (-1.5..1.5f64, -1.5..1.5f64, -1.5..1.5f64).prop_map(|(x, y, z)| Point::new3(x, y, z))
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-5.0..5.0f64, -5.0..5.0f64).prop_map(|(a, b)| Complex64::new(a, b))
}

fn far_data(values: Vec<Complex64>) -> FieldSamples {
    let dirs = far_angles(values.len()).unwrap();
    FieldSamples::far(dirs, values, Direction::from_angle(PI / 4.0)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bessel_three_term_recurrence(n in 1u32..=20, x in 0.5..50.0f64) {
        let lhs = bessel_j(n - 1, x).unwrap() + bessel_j(n + 1, x).unwrap();
        let rhs = 2.0 * n as f64 / x * bessel_j(n, x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9);
    }

    #[test]
    fn bessel_wronskian(x in 0.5..50.0f64) {
        let (j0, j1) = (bessel_j(0, x).unwrap(), bessel_j(1, x).unwrap());
        let (y0, y1) = (bessel_y(0, x).unwrap(), bessel_y(1, x).unwrap());
        // J0' = -J1, Y0' = -Y1
        let w = -j0 * y1 + j1 * y0;
        prop_assert!((w - 2.0 / (PI * x)).abs() <= 1e-9);
    }

    #[test]
    fn plane_wave_bessel_expansion(kr in 0.0..30.0f64, psi in 0.0..(2.0 * PI)) {
        let m_max = (kr + 40.0).ceil() as usize;
        let (j, _) = bessel_jy_sequences(m_max, kr.max(1e-300)).unwrap();
        // J_{-m} = (-1)^m J_m pairs the orders into cosines
        let mut sum = Complex64::new(j[0], 0.0);
        for (m, jm) in j.iter().enumerate().skip(1) {
            sum += 2.0 * Complex64::i().powi(m as i32) * jm * (m as f64 * psi).cos();
        }
        let exact = Complex64::from_polar(1.0, kr * psi.cos());
        prop_assert!((sum - exact).norm() <= 1e-10);
    }

    #[test]
    fn green_reciprocity_2d(x in point2(), y in point2()) {
        prop_assume!(x.distance(&y) > 1e-6);
        let c = ctx2();
        prop_assert_eq!(green(&c, &x, &y).unwrap(), green(&c, &y, &x).unwrap());
    }

    #[test]
    fn green_reciprocity_3d(x in point3(), y in point3()) {
        prop_assume!(x.distance(&y) > 1e-6);
        let c = WaveContext::unit_wavelength(Dim::Three);
        prop_assert_eq!(green(&c, &x, &y).unwrap(), green(&c, &y, &x).unwrap());
    }

    #[test]
    fn scaled_imaginary_part_is_bounded(x in point2(), y in point2(), u in point3(), v in point3()) {
        prop_assert!(scaled_im_green(&ctx2(), &x, &y).unwrap().abs() <= 1.0);
        let c3 = WaveContext::unit_wavelength(Dim::Three);
        prop_assert!(scaled_im_green(&c3, &u, &v).unwrap().abs() <= 1.0);
    }

    #[test]
    fn correlation_identity_2d(x in point2(), y in point2()) {
        let c = ctx2();
        let lhs = farfield_correlation(&c, &x, &y, 512).unwrap();
        let rhs = lemma_constant(&c) * im_green(&c, &x, &y).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-8);
    }

    #[test]
    fn noise_commutes_with_relabeling(
        vals in prop::collection::vec(complex(), 4..24),
        seed in any::<u64>(),
        eps in 0.0..0.5f64,
        shift in 0usize..24,
    ) {
        let n = vals.len();
        let spec = NoiseSpec::new(eps, seed).unwrap();
        let noisy = add_noise(&far_data(vals.clone()), &spec).unwrap();
        // A permutation of the values keeps the per-index perturbations in place.
        let rotated: Vec<_> = (0..n).map(|j| vals[(j + shift) % n]).collect();
        let noisy_rot = add_noise(&far_data(rotated.clone()), &spec).unwrap();
        let clean = far_data(vals.clone());
        let scale_a = clean.max_abs();
        for j in 0..n {
            let da = (noisy.values()[j] - vals[j]) / scale_a;
            let db = (noisy_rot.values()[j] - rotated[j]) / scale_a;
            prop_assert!((da - db).norm() <= 1e-12);
        }
    }

    #[test]
    fn far_indicator_in_unit_interval(vals in prop::collection::vec(complex(), 8..40), xp in point2()) {
        prop_assume!(vals.iter().any(|v| v.norm() > 1e-3));
        let v = indicator_far(&ctx2(), &far_data(vals), &xp).unwrap();
        prop_assert!((0.0..=1.0).contains(&v));
    }

    #[test]
    fn near_indicator_in_unit_interval(vals in prop::collection::vec(complex(), 8..40), xp in point2()) {
        prop_assume!(vals.iter().any(|v| v.norm() > 1e-3));
        let c = ctx2();
        let pts = near_circle_geometry(&c, 4.0, vals.len()).unwrap();
        let data = FieldSamples::near(4.0, pts, vals, Direction::from_angle(0.0)).unwrap();
        let v = indicator_near(&c, &data, &xp).unwrap();
        prop_assert!((0.0..=1.0).contains(&v));
    }

    #[test]
    fn indicator_scale_invariance(vals in prop::collection::vec(complex(), 8..40), xp in point2(), s in complex()) {
        prop_assume!(vals.iter().any(|v| v.norm() > 1e-3) && s.norm() > 1e-2);
        let c = ctx2();
        let data = far_data(vals.clone());
        let scaled = data.with_values(vals.iter().map(|v| v * s).collect()).unwrap();
        let a = indicator_far(&c, &data, &xp).unwrap();
        let b = indicator_far(&c, &scaled, &xp).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn point_source_far_indicator_is_bessel(z in point2(), r in 0.0..1.0f64, t in 0.0..(2.0 * PI)) {
        let xp = Point::new2(z.x() + r * t.cos(), z.y() + r * t.sin());
        let c = ctx2();
        let dirs = far_angles(50).unwrap();
        let vals: Vec<ComplexScalar> = dirs.iter().map(|d| green_farfield(&c, d, &z).unwrap()).collect();
        let data = FieldSamples::far(dirs, vals, Direction::from_angle(0.0)).unwrap();
        let expect = bessel_j(0, c.k() * r).unwrap().abs();
        prop_assert!((indicator_far(&c, &data, &xp).unwrap() - expect).abs() <= 0.02);
    }

    #[test]
    fn combine_max_dominates(a in prop::collection::vec(0.0..1.0f64, 25), b in prop::collection::vec(0.0..1.0f64, 25)) {
        let g = SamplingGrid::square(0.02, 0.01).unwrap();
        let ga = IndicatorGrid::new(g.clone(), a.clone()).unwrap();
        let gb = IndicatorGrid::new(g, b.clone()).unwrap();
        let m = combine_max(&[ga.clone(), gb]).unwrap();
        for i in 0..25 {
            prop_assert!(m.values()[i] >= a[i] && m.values()[i] >= b[i]);
            prop_assert!(m.values()[i] == a[i] || m.values()[i] == b[i]);
        }
        prop_assert_eq!(combine_max(&[ga.clone(), ga.clone()]).unwrap(), ga);
    }

    #[test]
    fn components_partition_the_superlevel_set(vals in prop::collection::vec(0.0..1.0f64, 49), cutoff in 0.05..1.0f64) {
        let g = SamplingGrid::square(0.03, 0.01).unwrap();
        let grid = IndicatorGrid::new(g, vals.clone()).unwrap();
        let comps = superlevel_components(&grid, cutoff).unwrap();
        let mut seen = vec![0u32; vals.len()];
        for c in &comps {
            for &i in &c.nodes {
                seen[i] += 1;
            }
        }
        for (i, v) in vals.iter().enumerate() {
            prop_assert_eq!(seen[i], u32::from(*v >= cutoff));
        }
        prop_assert!(comps.windows(2).all(|w| w[0].len() >= w[1].len()));
    }

    #[test]
    fn discretization_preserves_square_area(cx in -1.0..1.0f64, cy in -1.0..1.0f64, side in 0.05..0.5f64) {
        let c = ctx2();
        let s = ShapeSpec::square(Point::new2(cx, cy), side, Material::Eta(Complex64::new(1.0, 0.0))).unwrap();
        let grid = discretize(&c, &[s], 0.02).unwrap();
        let area: f64 = grid.cells().iter().map(|cell| cell.area).sum();
        // 8x8 sub-sampling resolves the boundary strip to within one sub-cell per edge cell
        prop_assert!((area - side * side).abs() <= 4.0 * side * 0.02 / 8.0 + 1e-12);
    }
}
