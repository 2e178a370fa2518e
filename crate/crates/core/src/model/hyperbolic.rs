use crate::error::{Error, Result};
use crate::point::Point;
use crate::space::BicombedSpace;

const ON_SHEET_TOL: f64 = 1e-9;

/// `-x0 y0 + x1 y1 + x2 y2`
#[inline]
pub fn minkowski(x: &[f64; 3], y: &[f64; 3]) -> f64 {
    -x[0] * y[0] + x[1] * y[1] + x[2] * y[2]
}

/// The hyperbolic plane in the hyperboloid model, with its geodesic bicombing.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct HyperbolicPlane;

impl HyperbolicPlane {
    pub fn new() -> Self {
        HyperbolicPlane
    }

    /// Point at hyperbolic distance `r` from the base point `(1,0,0)` in direction `theta`.
    pub fn from_polar(r: f64, theta: f64) -> Point {
        Point::Hyperboloid([r.cosh(), r.sinh() * theta.cos(), r.sinh() * theta.sin()])
    }

    /// Lifts spatial coordinates `(u, v)` onto the upper sheet.
    pub fn lift(u: f64, v: f64) -> Point {
        Point::Hyperboloid([(1.0 + u * u + v * v).sqrt(), u, v])
    }

    /// Poincare disk coordinates `x_i / (1 + x0)`.
    pub fn to_disk(p: &Point) -> Option<[f64; 2]> {
        match p {
            Point::Hyperboloid(x) => Some([x[1] / (1.0 + x[0]), x[2] / (1.0 + x[0])]),
            _ => None,
        }
    }

    fn coords(p: &Point) -> &[f64; 3] {
        match p {
            Point::Hyperboloid(c) => c,
            other => panic!("hyperbolic plane received a {} point", other.variant_name()),
        }
    }
}

fn normalize(z: [f64; 3]) -> [f64; 3] {
    let s = (-minkowski(&z, &z)).sqrt();
    [z[0] / s, z[1] / s, z[2] / s]
}

impl BicombedSpace for HyperbolicPlane {
    fn describe(&self) -> String {
        "hyperbolic plane (hyperboloid model)".to_string()
    }

    fn canonicalize(&self, p: &Point) -> Result<Point> {
        let mismatch = |reason: String| Error::PointMismatch { space: self.describe(), reason };
        match p {
            Point::Hyperboloid(x) => {
                if !x.iter().all(|v| v.is_finite()) {
                    return Err(mismatch(format!("non-finite coordinates {x:?}")));
                }
                if x[0] <= 0.0 {
                    return Err(mismatch(format!("x0 = {} is not positive", x[0])));
                }
                let defect = (minkowski(x, x) + 1.0).abs();
                if defect > ON_SHEET_TOL {
                    return Err(mismatch(format!("|<x,x>_M + 1| = {defect:e} exceeds {ON_SHEET_TOL:e}")));
                }
                Ok(p.clone())
            }
            other => Err(mismatch(format!("{} point", other.variant_name()))),
        }
    }

    fn dist(&self, x: &Point, y: &Point) -> f64 {
        let (x, y) = (Self::coords(x), Self::coords(y));
        let q = -minkowski(x, y);
        if q >= 2.0 {
            return q.acosh();
        }
        // arccosh loses half the digits near 1; the chord form does not.
        let diff = [x[0] - y[0], x[1] - y[1], x[2] - y[2]];
        let chord_sq = minkowski(&diff, &diff).max(0.0);
        2.0 * (0.5 * chord_sq.sqrt()).asinh()
    }

    fn combing(&self, x: &Point, y: &Point, t: f64) -> Point {
        if t == 0.0 {
            return x.clone();
        }
        if t == 1.0 {
            return y.clone();
        }
        let d = self.dist(x, y);
        if d == 0.0 {
            return x.clone();
        }
        let (xc, yc) = (Self::coords(x), Self::coords(y));
        let s = d.sinh();
        let a = ((1.0 - t) * d).sinh() / s;
        let b = (t * d).sinh() / s;
        let z = [
            a * xc[0] + b * yc[0],
            a * xc[1] + b * yc[1],
            a * xc[2] + b * yc[2],
        ];
        Point::Hyperboloid(normalize(z))
    }

    fn is_symmetric(&self) -> bool {
        true
    }
}
