//! Concrete bicombed spaces: normed spaces with the linear bicombing, the
//! hyperbolic plane and metric trees with their geodesic bicombings, and
//! products of these.

mod hyperbolic;
mod lp;
mod product;
mod tree;

use serde::{Deserialize, Serialize};

pub use hyperbolic::{minkowski, HyperbolicPlane};
pub use lp::{Exponent, InfinityTag, LpSpace, NormedSpaceSpec};
pub use product::ProductSpace;
pub use tree::{MetricTree, MetricTreeSpec, TreeEdge};

use crate::error::Result;
use crate::point::Point;
use crate::space::BicombedSpace;

/// Serializable description of a model space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceSpec {
    Lp(NormedSpaceSpec),
    Hyperbolic,
    Tree(MetricTreeSpec),
    Product { left: Box<SpaceSpec>, right: Box<SpaceSpec> },
}

impl SpaceSpec {
    pub fn build(&self) -> Result<Space> {
        Ok(match self {
            SpaceSpec::Lp(spec) => make_lp_space(spec)?,
            SpaceSpec::Hyperbolic => make_hyperbolic_plane(),
            SpaceSpec::Tree(spec) => make_metric_tree(spec)?,
            SpaceSpec::Product { left, right } => make_product(left.build()?, right.build()?),
        })
    }
}

/// Any of the model spaces.
#[derive(Clone, Debug, PartialEq)]
pub enum Space {
    Lp(LpSpace),
    Hyperbolic(HyperbolicPlane),
    Tree(MetricTree),
    Product(ProductSpace),
}

pub fn make_lp_space(spec: &NormedSpaceSpec) -> Result<Space> {
    LpSpace::new(spec).map(Space::Lp)
}

pub fn make_hyperbolic_plane() -> Space {
    Space::Hyperbolic(HyperbolicPlane)
}

pub fn make_metric_tree(spec: &MetricTreeSpec) -> Result<Space> {
    MetricTree::new(spec).map(Space::Tree)
}

pub fn make_product(left: Space, right: Space) -> Space {
    Space::Product(ProductSpace::new(left, right))
}

impl Space {
    pub fn euclidean(n: usize) -> Self {
        Space::Lp(LpSpace::euclidean(n))
    }

    pub fn as_tree(&self) -> Option<&MetricTree> {
        match self {
            Space::Tree(t) => Some(t),
            _ => None,
        }
    }
}

macro_rules! dispatch {
    ($self:ident, $s:ident => $e:expr) => {
        match $self {
            Space::Lp($s) => $e,
            Space::Hyperbolic($s) => $e,
            Space::Tree($s) => $e,
            Space::Product($s) => $e,
        }
    };
}

impl BicombedSpace for Space {
    fn describe(&self) -> String {
        dispatch!(self, s => s.describe())
    }

    fn canonicalize(&self, p: &Point) -> Result<Point> {
        dispatch!(self, s => s.canonicalize(p))
    }

    #[inline]
    fn dist(&self, x: &Point, y: &Point) -> f64 {
        dispatch!(self, s => s.dist(x, y))
    }

    #[inline]
    fn combing(&self, x: &Point, y: &Point, t: f64) -> Point {
        dispatch!(self, s => s.combing(x, y, t))
    }

    fn chart(&self, p: &Point) -> Option<Vec<f64>> {
        dispatch!(self, s => s.chart(p))
    }

    fn is_symmetric(&self) -> bool {
        dispatch!(self, s => s.is_symmetric())
    }
}
