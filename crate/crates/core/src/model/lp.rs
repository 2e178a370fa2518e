use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::point::Point;
use crate::space::BicombedSpace;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Exponent {
    Finite(f64),
    Infinite(InfinityTag),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InfinityTag {
    #[serde(rename = "inf")]
    Inf,
}

impl Exponent {
    pub const INFINITY: Exponent = Exponent::Infinite(InfinityTag::Inf);
}

impl std::fmt::Display for Exponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinite(_) => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormedSpaceSpec {
    pub n: usize,
    pub p: Exponent,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Norm {
    One,
    Two,
    General(f64),
    Max,
}

/// `R^n` with an l^p norm and the linear bicombing `x + t (y - x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LpSpace {
    n: usize,
    exponent: Exponent,
    norm: Norm,
}

impl LpSpace {
    pub fn new(spec: &NormedSpaceSpec) -> Result<Self> {
        if spec.n == 0 {
            return Err(invalid("normed space dimension must be at least 1"));
        }
        let norm = match spec.p {
            Exponent::Infinite(_) => Norm::Max,
            Exponent::Finite(p) if !(p >= 1.0) || !p.is_finite() => {
                return Err(invalid(format!("l^p exponent {p} is not a norm (need p >= 1)")))
            }
            Exponent::Finite(p) if p == 1.0 => Norm::One,
            Exponent::Finite(p) if p == 2.0 => Norm::Two,
            Exponent::Finite(p) => Norm::General(p),
        };
        Ok(Self { n: spec.n, exponent: spec.p, norm })
    }

    pub fn euclidean(n: usize) -> Self {
        Self { n, exponent: Exponent::Finite(2.0), norm: Norm::Two }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn exponent(&self) -> Exponent {
        self.exponent
    }

    fn coords<'a>(&self, p: &'a Point) -> &'a [f64] {
        match p {
            Point::Euclidean(c) => c,
            other => panic!("lp space received a {} point", other.variant_name()),
        }
    }
}

impl BicombedSpace for LpSpace {
    fn describe(&self) -> String {
        format!("l^{} space of dimension {}", self.exponent, self.n)
    }

    fn canonicalize(&self, p: &Point) -> Result<Point> {
        match p {
            Point::Euclidean(c) if c.len() == self.n && c.iter().all(|v| v.is_finite()) => {
                Ok(p.clone())
            }
            Point::Euclidean(c) => Err(Error::PointMismatch {
                space: self.describe(),
                reason: format!("expected {} finite coordinates, got {:?}", self.n, c),
            }),
            other => Err(Error::PointMismatch {
                space: self.describe(),
                reason: format!("{} point", other.variant_name()),
            }),
        }
    }

    fn dist(&self, x: &Point, y: &Point) -> f64 {
        let diffs = self.coords(x).iter().zip(self.coords(y)).map(|(a, b)| (a - b).abs());
        match self.norm {
            Norm::One => diffs.sum(),
            Norm::Two => diffs.map(|d| d * d).sum::<f64>().sqrt(),
            Norm::Max => diffs.fold(0.0, f64::max),
            Norm::General(p) => diffs.map(|d| d.powf(p)).sum::<f64>().powf(1.0 / p),
        }
    }

    fn combing(&self, x: &Point, y: &Point, t: f64) -> Point {
        if t == 0.0 || x == y {
            return x.clone();
        }
        if t == 1.0 {
            return y.clone();
        }
        let coords = self
            .coords(x)
            .iter()
            .zip(self.coords(y))
            .map(|(a, b)| a + t * (b - a))
            .collect();
        Point::Euclidean(coords)
    }

    fn chart(&self, p: &Point) -> Option<Vec<f64>> {
        Some(self.coords(p).to_vec())
    }

    fn is_symmetric(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{distance, evaluate_bicombing};

    fn space(n: usize, p: Exponent) -> LpSpace {
        LpSpace::new(&NormedSpaceSpec { n, p }).unwrap()
    }

    #[test]
    fn norms() {
        let o = Point::euclidean([0.0, 0.0]);
        let e2 = space(2, Exponent::Finite(2.0));
        assert_eq!(distance(&e2, &o, &Point::euclidean([3.0, 4.0])).unwrap(), 5.0);
        assert_eq!(
            distance(&e2, &o, &Point::euclidean([1.0, 1.0])).unwrap(),
            std::f64::consts::SQRT_2
        );
        let max = space(2, Exponent::INFINITY);
        assert_eq!(distance(&max, &o, &Point::euclidean([1.0, -2.0])).unwrap(), 2.0);
        let l3 = space(2, Exponent::Finite(3.0));
        let d = distance(&l3, &o, &Point::euclidean([1.0, 1.0])).unwrap();
        assert!((d - 2f64.powf(1.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn linear_interpolation() {
        let l1 = space(3, Exponent::Finite(1.0));
        let m = evaluate_bicombing(
            &l1,
            &Point::euclidean([0.0, 0.0, 0.0]),
            &Point::euclidean([2.0, 0.0, 2.0]),
            0.5,
        )
        .unwrap();
        assert_eq!(m, Point::euclidean([1.0, 0.0, 1.0]));
    }

    #[test]
    fn rejects_sub_unit_exponent() {
        let err = LpSpace::new(&NormedSpaceSpec { n: 2, p: Exponent::Finite(0.5) }).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
        assert!(LpSpace::new(&NormedSpaceSpec { n: 0, p: Exponent::Finite(2.0) }).is_err());
    }

    #[test]
    fn rejects_wrong_dimension() {
        let e2 = LpSpace::euclidean(2);
        assert!(distance(&e2, &Point::euclidean([0.0]), &Point::euclidean([0.0, 1.0])).is_err());
        assert!(distance(&e2, &Point::Hyperboloid([1.0, 0.0, 0.0]), &Point::euclidean([0.0, 1.0])).is_err());
    }

    #[test]
    fn exponent_serde() {
        let spec: NormedSpaceSpec = serde_json::from_str(r#"{"n":2,"p":"inf"}"#).unwrap();
        assert_eq!(spec.p, Exponent::INFINITY);
        let spec: NormedSpaceSpec = serde_json::from_str(r#"{"n":3,"p":1.5}"#).unwrap();
        assert_eq!(spec.p, Exponent::Finite(1.5));
        assert_eq!(serde_json::to_string(&Exponent::INFINITY).unwrap(), r#""inf""#);
    }
}
