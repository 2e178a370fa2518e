use crate::error::{Error, Result};
use crate::point::Point;
use crate::space::BicombedSpace;

use super::Space;

/// `A x B` with `d = sqrt(d_A^2 + d_B^2)` and the componentwise bicombing.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductSpace {
    left: Box<Space>,
    right: Box<Space>,
}

impl ProductSpace {
    pub fn new(left: Space, right: Space) -> Self {
        Self { left: Box::new(left), right: Box::new(right) }
    }

    pub fn left(&self) -> &Space {
        &self.left
    }

    pub fn right(&self) -> &Space {
        &self.right
    }

    fn parts(p: &Point) -> (&Point, &Point) {
        match p {
            Point::Product(a, b) => (a, b),
            other => panic!("product space received a {} point", other.variant_name()),
        }
    }
}

impl BicombedSpace for ProductSpace {
    fn describe(&self) -> String {
        format!("product of [{}] and [{}]", self.left.describe(), self.right.describe())
    }

    fn canonicalize(&self, p: &Point) -> Result<Point> {
        match p {
            Point::Product(a, b) => Ok(Point::product(
                self.left.canonicalize(a)?,
                self.right.canonicalize(b)?,
            )),
            other => Err(Error::PointMismatch {
                space: self.describe(),
                reason: format!("{} point", other.variant_name()),
            }),
        }
    }

    fn dist(&self, x: &Point, y: &Point) -> f64 {
        let ((xa, xb), (ya, yb)) = (Self::parts(x), Self::parts(y));
        let da = self.left.dist(xa, ya);
        let db = self.right.dist(xb, yb);
        (da * da + db * db).sqrt()
    }

    fn combing(&self, x: &Point, y: &Point, t: f64) -> Point {
        let ((xa, xb), (ya, yb)) = (Self::parts(x), Self::parts(y));
        Point::product(self.left.combing(xa, ya, t), self.right.combing(xb, yb, t))
    }

    fn chart(&self, p: &Point) -> Option<Vec<f64>> {
        let (a, b) = Self::parts(p);
        let mut c = self.left.chart(a)?;
        c.extend(self.right.chart(b)?);
        Some(c)
    }

    fn is_symmetric(&self) -> bool {
        self.left.is_symmetric() && self.right.is_symmetric()
    }
}
