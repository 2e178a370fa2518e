//! Deterministic instance generators.

use std::f64::consts::PI;

use bicombing_core::{
    Exponent, HyperbolicPlane, MetricTree, MetricTreeSpec, NormedSpaceSpec, Point, SpaceSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, LabResult};
use crate::instance::{ExtremalRule, InstanceFile, NetSource, Params, FORMAT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Kind {
    Square,
    Cube,
    Simplex,
    LpBall,
    Disk,
    HypTriangle,
    TreeLeaves,
    ProductDemo,
    RandomPoints,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct GenOptions {
    /// Net resolution `eps`.
    pub step: Option<f64>,
    pub leaves: Option<usize>,
    pub n: Option<usize>,
    pub dim: Option<usize>,
    pub p: Option<Exponent>,
    /// Hyperbolic triangle side length.
    pub side: Option<f64>,
    pub rng_seed: Option<u64>,
}

fn lp(n: usize, p: Exponent) -> SpaceSpec {
    SpaceSpec::Lp(NormedSpaceSpec { n, p })
}

fn hypercube_corners(dim: usize, lo: f64, hi: f64) -> Vec<Point> {
    (0..1usize << dim)
        .map(|mask| {
            Point::euclidean(
                (0..dim)
                    .map(|d| if mask >> d & 1 == 1 { hi } else { lo })
                    .collect::<Vec<_>>(),
            )
        })
        .collect()
}

fn circle_count(step: f64, radius: f64) -> usize {
    ((2.0 * PI * radius / step).ceil() as usize).max(8)
}

/// Vertices of an equilateral triangle with the given side, centered at the origin.
pub fn hyperbolic_triangle(side: f64) -> Vec<Point> {
    // cosh(side) = cosh^2 r + sinh^2 r / 2 for vertices at radius r, 120 degrees apart
    let r = ((2.0 * side.cosh() + 1.0) / 3.0).sqrt().acosh();
    (0..3)
        .map(|k| HyperbolicPlane::from_polar(r, 2.0 * PI * k as f64 / 3.0))
        .collect()
}

pub fn generate(kind: Kind, opts: &GenOptions) -> LabResult<InstanceFile> {
    let default_step = match kind {
        Kind::Square | Kind::Simplex | Kind::HypTriangle | Kind::TreeLeaves => 0.05,
        _ => 0.1,
    };
    let step = opts.step.unwrap_or(default_step);
    if !(step > 0.0 && step.is_finite()) {
        return Err(LabError::Usage(format!("--step must be positive, got {step}")));
    }
    let positive = |name: &str, v: usize| {
        if v == 0 {
            Err(LabError::Usage(format!("--{name} must be positive")))
        } else {
            Ok(v)
        }
    };
    let mut rule = ExtremalRule::SampleExact;
    let (space, seed) = match kind {
        Kind::Square => (lp(2, Exponent::Finite(2.0)), hypercube_corners(2, 0.0, 1.0)),
        Kind::Cube => (lp(3, Exponent::Finite(2.0)), hypercube_corners(3, 0.0, 1.0)),
        Kind::Simplex => {
            let dim = positive("dim", opts.dim.unwrap_or(2))?;
            let mut seed = vec![Point::euclidean(vec![0.0; dim])];
            for i in 0..dim {
                let mut v = vec![0.0; dim];
                v[i] = 1.0;
                seed.push(Point::euclidean(v));
            }
            (lp(dim, Exponent::Finite(2.0)), seed)
        }
        Kind::LpBall => {
            let p = opts.p.unwrap_or(Exponent::INFINITY);
            let seed = match p {
                Exponent::Infinite(_) => hypercube_corners(2, -1.0, 1.0),
                Exponent::Finite(q) if q == 1.0 => vec![
                    Point::euclidean([1.0, 0.0]),
                    Point::euclidean([0.0, 1.0]),
                    Point::euclidean([-1.0, 0.0]),
                    Point::euclidean([0.0, -1.0]),
                ],
                Exponent::Finite(q) if q > 1.0 => {
                    rule = ExtremalRule::Smooth;
                    let m = circle_count(step, 1.0);
                    (0..m)
                        .map(|k| {
                            let a = 2.0 * PI * k as f64 / m as f64;
                            let (s, c) = a.sin_cos();
                            let norm = (c.abs().powf(q) + s.abs().powf(q)).powf(1.0 / q);
                            Point::euclidean([c / norm, s / norm])
                        })
                        .collect()
                }
                Exponent::Finite(q) => {
                    return Err(LabError::Usage(format!("--p must be at least 1, got {q}")))
                }
            };
            (lp(2, p), seed)
        }
        Kind::Disk => {
            rule = ExtremalRule::Smooth;
            let m = circle_count(step, 1.0);
            let seed = (0..m)
                .map(|k| {
                    let (s, c) = (2.0 * PI * k as f64 / m as f64).sin_cos();
                    Point::euclidean([c, s])
                })
                .collect();
            (lp(2, Exponent::Finite(2.0)), seed)
        }
        Kind::HypTriangle => {
            let side = opts.side.unwrap_or(1.0);
            if !(side > 0.0 && side.is_finite()) {
                return Err(LabError::Usage(format!("--side must be positive, got {side}")));
            }
            (SpaceSpec::Hyperbolic, hyperbolic_triangle(side))
        }
        Kind::TreeLeaves => {
            let leaves = positive("leaves", opts.leaves.unwrap_or(3))?;
            let spec = MetricTreeSpec::star(leaves, 1.0);
            let tree = MetricTree::new(&spec)?;
            let seed = (0..leaves)
                .map(|i| tree.node_point_by_name(&format!("l{i}")))
                .collect::<Result<_, _>>()?;
            (SpaceSpec::Tree(spec), seed)
        }
        Kind::ProductDemo => {
            let spec = MetricTreeSpec::path(&["a", "b"], &[1.0]);
            let tree = MetricTree::new(&spec)?;
            let mut seed = Vec::new();
            for name in ["a", "b"] {
                for h in [0.0, 1.0] {
                    seed.push(Point::product(tree.node_point_by_name(name)?, Point::euclidean([h])));
                }
            }
            let space = SpaceSpec::Product {
                left: Box::new(SpaceSpec::Tree(spec)),
                right: Box::new(lp(1, Exponent::Finite(2.0))),
            };
            (space, seed)
        }
        Kind::RandomPoints => {
            let n = positive("n", opts.n.unwrap_or(20))?;
            let dim = positive("dim", opts.dim.unwrap_or(2))?;
            let mut rng = ChaCha8Rng::seed_from_u64(opts.rng_seed.unwrap_or(0));
            let seed = (0..n)
                .map(|_| Point::euclidean((0..dim).map(|_| rng.gen::<f64>()).collect::<Vec<_>>()))
                .collect();
            (lp(dim, Exponent::Finite(2.0)), seed)
        }
    };
    let mut params = Params::new(step, rule);
    params.rng_seed = opts.rng_seed.unwrap_or(0);
    Ok(InstanceFile { format: FORMAT, space, net: NetSource::Hull, seed, params })
}
