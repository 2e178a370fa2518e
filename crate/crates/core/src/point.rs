use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

/// A location in one of the model geometries.
///
/// Points carry no reference to their space; every operation takes the
/// space explicitly and rejects points of the wrong variant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Point {
    /// Coordinate vector in a normed space.
    Euclidean(Vec<f64>),
    /// Point on the upper sheet of the hyperboloid `<x,x>_M = -1`.
    Hyperboloid([f64; 3]),
    /// Location `offset` units along `edge`, measured from the edge's tail node.
    Tree { edge: usize, offset: f64 },
    /// Pair of factor points.
    Product(Box<Point>, Box<Point>),
}

impl Point {
    pub fn euclidean(coords: impl Into<Vec<f64>>) -> Self {
        Point::Euclidean(coords.into())
    }

    pub fn product(left: Point, right: Point) -> Self {
        Point::Product(Box::new(left), Box::new(right))
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            Point::Euclidean(_) => "euclidean",
            Point::Hyperboloid(_) => "hyperboloid",
            Point::Tree { .. } => "tree",
            Point::Product(..) => "product",
        }
    }

    fn tag(&self) -> u8 {
        match self {
            Point::Euclidean(_) => 0,
            Point::Hyperboloid(_) => 1,
            Point::Tree { .. } => 2,
            Point::Product(..) => 3,
        }
    }

    /// Total order used wherever a deterministic choice between points is
    /// needed: variant first, then coordinates lexicographically.
    pub fn canonical_cmp(&self, other: &Point) -> Ordering {
        match (self, other) {
            (Point::Euclidean(a), Point::Euclidean(b)) => cmp_slices(a, b),
            (Point::Hyperboloid(a), Point::Hyperboloid(b)) => cmp_slices(a, b),
            (
                Point::Tree { edge: ea, offset: oa },
                Point::Tree { edge: eb, offset: ob },
            ) => ea.cmp(eb).then(oa.total_cmp(ob)),
            (Point::Product(la, ra), Point::Product(lb, rb)) => {
                la.canonical_cmp(lb).then_with(|| ra.canonical_cmp(rb))
            }
            _ => self.tag().cmp(&other.tag()),
        }
    }
}

fn cmp_slices(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}
