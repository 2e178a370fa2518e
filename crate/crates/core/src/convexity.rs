//! Discretized convexity: point nets, distance to a net, iterated segment
//! closure, convexity checks for nets and functionals, and Hausdorff distance.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::index::NetIndex;
use crate::point::Point;
use crate::space::{grid_param, BicombedSpace};

/// A finite point set standing in for a compact set, at resolution `eps`.
///
/// Stored points are canonical, sorted by [`Point::canonical_cmp`], and
/// pairwise farther apart than `eps / 2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointNet {
    points: Vec<Point>,
    eps: f64,
}

impl PointNet {
    /// Canonicalizes, sorts and thins `points` so that no two survivors are
    /// within `eps / 2`. Earlier points in canonical order win.
    pub fn new<S: BicombedSpace + ?Sized>(space: &S, points: Vec<Point>, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(invalid(format!("net resolution must be positive, got {eps}")));
        }
        if points.is_empty() {
            return Err(Error::Empty("point net"));
        }
        let mut points = points
            .iter()
            .map(|p| space.canonicalize(p))
            .collect::<Result<Vec<_>>>()?;
        points.sort_by(|a, b| a.canonical_cmp(b));
        let mut kept = Vec::with_capacity(points.len());
        let mut index = NetIndex::empty(space, &points, eps / 2.0);
        for p in points {
            if !index.any_within(space, &kept, &p, eps / 2.0) {
                index.insert(space, &p);
                kept.push(p);
            }
        }
        Ok(Self { points: kept, eps })
    }

    fn from_parts(mut points: Vec<Point>, eps: f64) -> Self {
        points.sort_by(|a, b| a.canonical_cmp(b));
        Self { points, eps }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points
            .binary_search_by(|q| q.canonical_cmp(p))
            .is_ok()
    }

    /// Same points at a different resolution. Fails if the new resolution
    /// would violate the separation invariant.
    pub fn with_eps<S: BicombedSpace + ?Sized>(&self, space: &S, eps: f64) -> Result<Self> {
        let net = Self::new(space, self.points.clone(), eps)?;
        if net.len() != self.len() {
            return Err(invalid(format!("points are not {}-separated", eps / 2.0)));
        }
        Ok(net)
    }

    pub fn diameter<S: BicombedSpace + ?Sized>(&self, space: &S) -> f64 {
        let pts = &self.points;
        (0..pts.len())
            .into_par_iter()
            .map(|i| {
                pts[i + 1..]
                    .iter()
                    .map(|q| space.dist(&pts[i], q))
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max)
    }

    pub(crate) fn index<S: BicombedSpace + ?Sized>(&self, space: &S, cell: f64) -> NetIndex {
        NetIndex::build(space, &self.points, cell)
    }
}

/// Ordered pairs `(i, j)` visited by pair scans: `i < j` for symmetric
/// bicombings, all `i != j` otherwise.
pub(crate) fn pair_partners(i: usize, n: usize, symmetric: bool) -> impl Iterator<Item = usize> {
    let start = if symmetric { i + 1 } else { 0 };
    (start..n).filter(move |&j| j != i)
}

/// Distance to a finite set: `min_k d(k, x)`.
pub fn dist_to_net<S: BicombedSpace + ?Sized>(space: &S, net: &PointNet, x: &Point) -> Result<f64> {
    if net.is_empty() {
        return Err(Error::Empty("point net"));
    }
    space.canonicalize(x)?;
    Ok(nearest_linear(space, net.points(), x))
}

pub(crate) fn nearest_linear<S: BicombedSpace + ?Sized>(space: &S, pts: &[Point], x: &Point) -> f64 {
    pts.iter().map(|k| space.dist(k, x)).fold(f64::INFINITY, f64::min)
}

/// Real-valued maps on points used as convex functionals.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvexFunctional {
    DistToPoint(Point),
    DistToNet(PointNet),
    /// `x -> <c, x>`; normed spaces only.
    Linear(Vec<f64>),
    Constant(f64),
    /// `x -> -f(x)`. Not convex in general; used as a negative control.
    Negated(Box<ConvexFunctional>),
}

impl ConvexFunctional {
    pub fn evaluate<S: BicombedSpace + ?Sized>(&self, space: &S, p: &Point) -> Result<f64> {
        Ok(match self {
            ConvexFunctional::DistToPoint(anchor) => space.dist(anchor, p),
            ConvexFunctional::DistToNet(net) => nearest_linear(space, net.points(), p),
            ConvexFunctional::Linear(c) => match p {
                Point::Euclidean(x) if x.len() == c.len() => {
                    c.iter().zip(x).map(|(a, b)| a * b).sum()
                }
                _ => {
                    return Err(invalid(format!(
                        "linear functional of dimension {} applied to a {} point",
                        c.len(),
                        p.variant_name()
                    )))
                }
            },
            ConvexFunctional::Constant(v) => *v,
            ConvexFunctional::Negated(inner) => -inner.evaluate(space, p)?,
        })
    }

    pub fn describe(&self) -> String {
        match self {
            ConvexFunctional::DistToPoint(p) => format!("dist_to_point({p:?})"),
            ConvexFunctional::DistToNet(n) => format!("dist_to_net({} points)", n.len()),
            ConvexFunctional::Linear(c) => format!("linear({c:?})"),
            ConvexFunctional::Constant(v) => format!("constant({v})"),
            ConvexFunctional::Negated(inner) => format!("-{}", inner.describe()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HullClosure {
    pub net: PointNet,
    pub rounds: usize,
    pub converged: bool,
    pub insertions: Vec<usize>,
}

/// Iterated segment closure of `seed`.
///
/// Each round samples `[x,y](k / segment_samples)` for every pair involving
/// a point inserted in the previous round (all pairs in round one) and
/// inserts each sample farther than `eps / 2` from the net. Pairs already
/// closer than `eps` are skipped: every sample then lies within `eps / 2` of
/// an endpoint. Stops after a round with no insertions.
pub fn hull_closure<S: BicombedSpace + ?Sized>(
    space: &S,
    seed: &PointNet,
    segment_samples: usize,
    max_rounds: usize,
) -> Result<HullClosure> {
    if segment_samples < 2 {
        return Err(invalid("hull closure needs at least 2 segment samples"));
    }
    if max_rounds == 0 {
        return Err(invalid("hull closure needs at least one round"));
    }
    let eps = seed.eps();
    let radius = eps / 2.0;
    let symmetric = space.is_symmetric();
    let mut points = seed.points().to_vec();
    let mut index = NetIndex::build(space, &points, radius);
    let mut fresh_from = 0;
    let mut insertions = Vec::new();
    let mut converged = false;

    for _ in 0..max_rounds {
        let n = points.len();
        let snapshot = &points;
        let frozen = &index;
        let candidates: Vec<Vec<Point>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut out = Vec::new();
                for j in pair_partners(i, n, symmetric) {
                    if i.max(j) < fresh_from {
                        continue;
                    }
                    let (x, y) = (&snapshot[i], &snapshot[j]);
                    if space.dist(x, y) <= eps {
                        continue;
                    }
                    for k in 1..segment_samples {
                        let z = space.combing(x, y, grid_param(k, segment_samples));
                        if !frozen.any_within(space, snapshot, &z, radius) {
                            out.push(z);
                        }
                    }
                }
                out
            })
            .collect();
        for z in candidates.into_iter().flatten() {
            if !index.any_within(space, &points, &z, radius) {
                index.insert(space, &z);
                points.push(z);
            }
        }
        let inserted = points.len() - n;
        insertions.push(inserted);
        fresh_from = n;
        if inserted == 0 {
            converged = true;
            break;
        }
    }

    Ok(HullClosure {
        net: PointNet::from_parts(points, eps),
        rounds: insertions.len(),
        converged,
        insertions,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SegmentWitness {
    pub x: Point,
    pub y: Point,
    pub t: f64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<SegmentWitness>,
}

impl Verdict {
    fn from_witness(witness: Option<SegmentWitness>) -> Self {
        Self { holds: witness.is_none(), witness }
    }
}

/// Whether every sampled segment point of every pair lies within `eps` of
/// the net. The witness is the worst sample of the first failing pair.
pub fn is_convex_net<S: BicombedSpace + ?Sized>(
    space: &S,
    net: &PointNet,
    segment_samples: usize,
) -> Result<Verdict> {
    if segment_samples < 1 {
        return Err(invalid("segment sample count must be at least 1"));
    }
    let eps = net.eps();
    let pts = net.points();
    let index = net.index(space, eps);
    let symmetric = space.is_symmetric();
    let n = pts.len();
    let witness = (0..n).into_par_iter().find_map_first(|i| {
        pair_partners(i, n, symmetric).find_map(|j| {
            let (x, y) = (&pts[i], &pts[j]);
            if space.dist(x, y) <= 2.0 * eps {
                return None;
            }
            let mut worst: Option<SegmentWitness> = None;
            for k in 1..segment_samples {
                let t = grid_param(k, segment_samples);
                let z = space.combing(x, y, t);
                if index.any_within(space, pts, &z, eps) {
                    continue;
                }
                let (_, d) = index.nearest(space, pts, &z).expect("net is non-empty");
                if worst.as_ref().map_or(true, |w| d > w.value) {
                    worst = Some(SegmentWitness { x: x.clone(), y: y.clone(), t, value: d });
                }
            }
            worst
        })
    });
    Ok(Verdict::from_witness(witness))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FunctionalCheck {
    pub passed: bool,
    pub max_defect: f64,
    /// `value` is the second-difference defect at `t`.
    pub witness: Option<SegmentWitness>,
}

/// Midpoint-convexity check of `t -> phi([x,y](t))` on the grid `k / grid`
/// for every pair of `domain` points.
pub fn check_convex_functional<S: BicombedSpace + ?Sized>(
    space: &S,
    phi: &ConvexFunctional,
    domain: &PointNet,
    grid: usize,
    tol: f64,
) -> Result<FunctionalCheck> {
    if grid < 2 {
        return Err(invalid("convexity grid must have at least 2 intervals"));
    }
    let pts = domain.points();
    let n = pts.len();
    let symmetric = space.is_symmetric();
    let per_point: Vec<Option<(f64, SegmentWitness)>> = (0..n)
        .into_par_iter()
        .map(|i| -> Result<Option<(f64, SegmentWitness)>> {
            let mut worst: Option<(f64, SegmentWitness)> = None;
            for j in pair_partners(i, n, symmetric) {
                let values = (0..=grid)
                    .map(|k| phi.evaluate(space, &space.combing(&pts[i], &pts[j], grid_param(k, grid))))
                    .collect::<Result<Vec<f64>>>()?;
                for k in 1..grid {
                    let defect = values[k] - 0.5 * (values[k - 1] + values[k + 1]);
                    if defect > worst.as_ref().map_or(0.0, |w| w.0) {
                        worst = Some((
                            defect,
                            SegmentWitness {
                                x: pts[i].clone(),
                                y: pts[j].clone(),
                                t: grid_param(k, grid),
                                value: defect,
                            },
                        ));
                    }
                }
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    let worst = per_point
        .into_iter()
        .flatten()
        .fold(None, |acc: Option<(f64, SegmentWitness)>, w| match acc {
            Some(ref a) if a.0 >= w.0 => acc,
            _ => Some(w),
        });
    let max_defect = worst.as_ref().map_or(0.0, |w| w.0);
    Ok(FunctionalCheck {
        passed: max_defect <= tol,
        max_defect,
        witness: worst.filter(|w| w.0 > tol).map(|w| w.1),
    })
}

/// Largest distance from a point of `from` to the net `to`.
pub fn directed_excess<S: BicombedSpace + ?Sized>(space: &S, from: &PointNet, to: &PointNet) -> f64 {
    let cell = to.eps().max(from.eps());
    let index = to.index(space, cell);
    from.points()
        .par_iter()
        .map(|p| index.nearest(space, to.points(), p).map_or(f64::INFINITY, |(_, d)| d))
        .reduce(|| 0.0, f64::max)
}

pub fn hausdorff<S: BicombedSpace + ?Sized>(space: &S, a: &PointNet, b: &PointNet) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty("point net"));
    }
    Ok(directed_excess(space, a, b).max(directed_excess(space, b, a)))
}
