//! Preset scatterer configurations, lengths in wavelengths.
//!
//! Media use `η = 1` unless stated. The sound-soft obstacle of `ex5` is the
//! absorbing medium `n² = 1 + 50i`. The L-shaped crack of `ex7` is two
//! orthogonal bars of length 1 and thickness 0.1 whose center lines meet at
//! the origin, one along the positive x-axis and one along the positive
//! y-axis.

use std::fmt;

use num_complex::Complex64;

use crate::error::{DsmError, Result};
use crate::forward_model::{Material, ShapeSpec};
use crate::green_kernel::{Direction, Point};

/// `n²` standing in for a sound-soft obstacle.
pub const OBSTACLE_INDEX_SQUARED: Complex64 = Complex64::new(1.0, 50.0);

pub const SCENARIO_IDS: [&str; 10] = [
    "ex1",
    "ex2",
    "ex3",
    "ex3-close",
    "ex4",
    "ex5",
    "ex5-contrast",
    "ex6",
    "ex7",
    "ex7-both",
];

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub shapes: Vec<ShapeSpec>,
    pub incidents: Vec<Direction>,
    pub noise_levels: Vec<f64>,
    /// Centers of the separate scatterers a reconstruction should find.
    pub expected_centroids: Vec<Point>,
}

impl Scenario {
    /// Whether `x` lies in any shape of the scenario.
    pub fn support_contains(&self, x: &Point) -> bool {
        self.shapes.iter().any(|s| s.contains(x))
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({} shapes, {} incidents)",
            self.name,
            self.shapes.len(),
            self.incidents.len()
        )
    }
}

/// `(1, 1)/√2`.
pub fn d1() -> Direction {
    Direction::new2(1.0, 1.0).expect("nonzero")
}

/// `(1, -1)/√2`.
pub fn d2() -> Direction {
    Direction::new2(1.0, -1.0).expect("nonzero")
}

fn medium() -> Material {
    Material::Eta(Complex64::new(1.0, 0.0))
}

fn square(x: f64, y: f64, side: f64, m: Material) -> ShapeSpec {
    ShapeSpec::square(Point::new2(x, y), side, m).expect("valid preset")
}

fn bar(x: f64, y: f64, angle: f64) -> ShapeSpec {
    ShapeSpec::bar(Point::new2(x, y), 1.0, 0.1, angle, medium()).expect("valid preset")
}

/// Builds the named preset.
pub fn build(id: &str) -> Result<Scenario> {
    let p = Point::new2;
    let (shapes, incidents, centroids) = match id {
        "ex1" => (vec![square(0.0, 0.0, 0.02, medium())], vec![d1()], vec![p(0.0, 0.0)]),
        "ex2" => (
            vec![square(-0.8, -0.7, 0.3, medium()), square(0.3, 0.8, 0.3, medium())],
            vec![d1()],
            vec![p(-0.8, -0.7), p(0.3, 0.8)],
        ),
        "ex3" => (
            vec![square(-0.25, 0.0, 0.3, medium()), square(0.25, 0.0, 0.3, medium())],
            vec![d1()],
            vec![p(-0.25, 0.0), p(0.25, 0.0)],
        ),
        "ex3-close" => (
            vec![square(-0.1, 0.0, 0.3, medium()), square(0.1, 0.0, 0.3, medium())],
            vec![d1()],
            vec![p(0.0, 0.0)],
        ),
        "ex4" => (
            vec![ShapeSpec::ring_square(Point::ORIGIN_2D, 0.6, 0.4, medium()).expect("valid preset")],
            vec![d1(), d2()],
            vec![p(0.0, 0.0)],
        ),
        "ex5" | "ex5-contrast" => {
            let m = if id == "ex5" {
                medium()
            } else {
                Material::IndexSquared(Complex64::new(10.0, 10.0))
            };
            (
                vec![
                    square(-0.8, -0.7, 0.3, Material::IndexSquared(OBSTACLE_INDEX_SQUARED)),
                    square(0.3, 0.8, 0.3, m),
                ],
                vec![d1()],
                vec![p(-0.8, -0.7), p(0.3, 0.8)],
            )
        }
        "ex6" => (
            vec![bar(0.0, 0.0, 0.0)],
            vec![Direction::from_angle(0.0)],
            vec![p(0.0, 0.0)],
        ),
        "ex7" | "ex7-both" => {
            let incidents = if id == "ex7" { vec![d2()] } else { vec![d1(), d2()] };
            (
                vec![bar(0.45, 0.0, 0.0), bar(0.0, 0.45, std::f64::consts::FRAC_PI_2)],
                incidents,
                vec![p(0.2, 0.2)],
            )
        }
        other => return Err(DsmError::UnknownScenario(other.to_string())),
    };
    Ok(Scenario {
        name: id.to_string(),
        shapes,
        incidents,
        noise_levels: vec![0.0, 0.2],
        expected_centroids: centroids,
    })
}

/// Point membership for a single shape.
pub fn contains(shape: &ShapeSpec, x: &Point) -> bool {
    shape.contains(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward_model::ShapeKind;
    use crate::green_kernel::{Dim, WaveContext};

    #[test]
    fn example1_is_a_small_square_at_origin() {
        let s = build("ex1").unwrap();
        assert_eq!(s.shapes[0].center, Point::ORIGIN_2D);
        assert_eq!(s.shapes[0].kind, ShapeKind::Square { side: 0.02 });
        assert!(contains(&s.shapes[0], &Point::ORIGIN_2D));
    }

    #[test]
    fn two_incidents_for_ring_and_l_crack() {
        let s = build("ex4").unwrap();
        assert_eq!(s.incidents, vec![d1(), d2()]);
        assert!(!contains(&s.shapes[0], &Point::ORIGIN_2D));
        assert_eq!(build("ex7").unwrap().incidents, vec![d2()]);
        assert_eq!(build("ex7-both").unwrap().incidents, vec![d1(), d2()]);
    }

    #[test]
    fn contrast_variant() {
        let s = build("ex5-contrast").unwrap();
        assert_eq!(s.shapes[1].material, Material::IndexSquared(Complex64::new(10.0, 10.0)));
        assert_eq!(s.shapes[0].material, Material::IndexSquared(OBSTACLE_INDEX_SQUARED));
        assert_eq!(
            build("ex5").unwrap().shapes[1].material,
            Material::Eta(Complex64::new(1.0, 0.0))
        );
    }

    #[test]
    fn crack_membership() {
        let s = build("ex6").unwrap();
        assert!(contains(&s.shapes[0], &Point::new2(0.49, 0.0)));
        assert!(!contains(&s.shapes[0], &Point::new2(0.51, 0.0)));
        assert_eq!(s.incidents, vec![Direction::from_angle(0.0)]);
    }

    #[test]
    fn l_crack_total_length() {
        let s = build("ex7").unwrap();
        let total: f64 = s
            .shapes
            .iter()
            .map(|sh| match sh.kind {
                ShapeKind::Bar { length, thickness, .. } => {
                    assert_eq!(thickness, 0.1);
                    length
                }
                _ => panic!("expected bars"),
            })
            .sum();
        assert_eq!(total, 2.0);
        assert!(s.support_contains(&Point::new2(0.9, 0.0)));
        assert!(s.support_contains(&Point::new2(0.0, 0.9)));
        assert!(s.support_contains(&Point::new2(-0.04, -0.04)));
        assert!(!s.support_contains(&Point::new2(0.5, 0.5)));
    }

    #[test]
    fn separations() {
        let c = build("ex3").unwrap();
        assert!((c.shapes[0].center.distance(&c.shapes[1].center) - 0.5).abs() < 1e-15);
        let c = build("ex3-close").unwrap();
        assert!((c.shapes[0].center.distance(&c.shapes[1].center) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn every_preset_fits_the_imaging_setup() {
        let ctx = WaveContext::unit_wavelength(Dim::Two);
        for id in SCENARIO_IDS {
            let s = build(id).unwrap();
            assert!(!s.shapes.is_empty());
            for d in &s.incidents {
                assert!((d.as_point().norm() - 1.0).abs() < 1e-15);
            }
            for sh in &s.shapes {
                let (x0, y0, x1, y1) = sh.bounding_box();
                assert!(x0 >= -2.0 && y0 >= -2.0 && x1 <= 2.0 && y1 <= 2.0, "{id}");
                for (x, y) in [(x0, y0), (x0, y1), (x1, y0), (x1, y1)] {
                    assert!(Point::new2(x, y).norm() < 4.0);
                }
                assert!(sh.material.eta(&ctx).norm() > 0.0);
            }
        }
    }

    #[test]
    fn unknown_id() {
        assert_eq!(build("ex9"), Err(DsmError::UnknownScenario("ex9".into())));
    }
}
