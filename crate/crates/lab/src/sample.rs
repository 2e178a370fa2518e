//! Random points of a model space, for axiom checks.

use std::f64::consts::PI;

use bicombing_core::{BicombedSpace, HyperbolicPlane, Point, Quadruple, Space};
use rand::Rng;

/// Coordinates in `[-2, 2]`, hyperbolic radius below 3, uniform tree edges.
pub fn random_point<R: Rng>(space: &Space, rng: &mut R) -> Point {
    match space {
        Space::Lp(s) => {
            Point::euclidean((0..s.dimension()).map(|_| rng.gen_range(-2.0..=2.0)).collect::<Vec<_>>())
        }
        Space::Hyperbolic(_) => HyperbolicPlane::from_polar(rng.gen_range(0.0..3.0), rng.gen_range(0.0..2.0 * PI)),
        Space::Tree(t) => {
            let edge = rng.gen_range(0..t.edges().len());
            let offset = rng.gen_range(0.0..=t.edges()[edge].length);
            space
                .canonicalize(&Point::Tree { edge, offset })
                .expect("offset lies on the edge")
        }
        Space::Product(s) => Point::product(random_point(s.left(), rng), random_point(s.right(), rng)),
    }
}

pub fn random_quadruples<R: Rng>(space: &Space, count: usize, rng: &mut R) -> Vec<Quadruple> {
    (0..count)
        .map(|_| {
            Quadruple::new(
                random_point(space, rng),
                random_point(space, rng),
                random_point(space, rng),
                random_point(space, rng),
            )
        })
        .collect()
}

/// Whether distances involve transcendental functions.
pub fn is_transcendental(space: &Space) -> bool {
    match space {
        Space::Hyperbolic(_) => true,
        Space::Product(s) => is_transcendental(s.left()) || is_transcendental(s.right()),
        _ => false,
    }
}

/// Axiom tolerance: 1e-9 for exact spaces, 1e-7 otherwise.
pub fn axiom_tolerance(space: &Space) -> f64 {
    if is_transcendental(space) {
        1e-7
    } else {
        1e-9
    }
}
