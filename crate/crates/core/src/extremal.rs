//! Extremal points and extremal subsets of a discretized convex set, the
//! argmax face of a convex functional, and farthest-point descent.
//!
//! "There is some interior parameter `t` with `[x,y](t)` in `E`" is
//! discretized as: some `t = k / (t_grid + 1)`, `1 <= k <= t_grid`, puts
//! `[x,y](t)` closer than `eps` to `E`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convexity::{nearest_linear, pair_partners, ConvexFunctional, PointNet};
use crate::error::{invalid, Error, Result};
use crate::index::NetIndex;
use crate::point::Point;
use crate::space::{grid_param, BicombedSpace};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtremalParams {
    /// Hit radius: a segment passes through `p` if a sample is closer than this.
    pub eps: f64,
    /// Chord endpoints must be farther than this from the tested point.
    pub delta: f64,
    /// Number of interior parameters tested per segment.
    pub t_grid: usize,
    /// Width of the band below the maximum kept by [`argmax_face`].
    pub face_tol: f64,
}

impl ExtremalParams {
    pub fn new(eps: f64, delta: f64, t_grid: usize, face_tol: f64) -> Result<Self> {
        let params = Self { eps, delta, t_grid, face_tol };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(invalid(format!("hit radius must be positive, got {}", self.eps)));
        }
        if !(self.delta >= self.eps && self.delta.is_finite()) {
            return Err(invalid(format!(
                "endpoint exclusion radius {} must be at least the hit radius {}",
                self.delta, self.eps
            )));
        }
        if self.t_grid < 3 {
            return Err(invalid("t_grid must be at least 3"));
        }
        if !(self.face_tol > 0.0 && self.face_tol.is_finite()) {
            return Err(invalid("face tolerance must be positive"));
        }
        Ok(())
    }

    /// Hit radius equal to the net resolution, `delta = sqrt(eps * diam)`,
    /// seven interior parameters, `face_tol = eps / 4`.
    ///
    /// A chord between boundary points at distance `delta` of a smooth
    /// boundary with diameter `diam` sags by about `delta^2 / diam`, so this
    /// `delta` stops nearby boundary chords from hitting their own
    /// neighborhood.
    pub fn for_net(net_eps: f64, diameter: f64) -> Self {
        Self {
            eps: net_eps,
            delta: (net_eps * diameter).sqrt().max(net_eps),
            t_grid: 7,
            face_tol: net_eps / 4.0,
        }
    }

    /// Parameters for nets whose non-extremal points lie exactly on sampled
    /// segments (lattices, hull-closure outputs): a hit radius far below the
    /// net resolution and an interior grid matching `segment_samples`.
    pub fn sample_exact(net_eps: f64, segment_samples: usize) -> Self {
        let hit = net_eps * 1e-6;
        Self {
            eps: hit,
            delta: hit,
            t_grid: segment_samples.saturating_sub(1).max(3),
            face_tol: hit / 4.0,
        }
    }

    fn interior(&self, k: usize) -> f64 {
        grid_param(k, self.t_grid + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChordWitness {
    pub x: Point,
    pub y: Point,
    pub t: f64,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointVerdict {
    pub extremal: bool,
    pub witness: Option<ChordWitness>,
}

/// Points of `face` attaining `max phi` up to `face_tol`.
pub fn argmax_face<S: BicombedSpace + ?Sized>(
    space: &S,
    face: &PointNet,
    phi: &ConvexFunctional,
    face_tol: f64,
) -> Result<PointNet> {
    let values = face
        .points()
        .iter()
        .map(|p| phi.evaluate(space, p))
        .collect::<Result<Vec<f64>>>()?;
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let kept: Vec<Point> = face
        .points()
        .iter()
        .zip(&values)
        .filter(|(_, v)| **v >= max - face_tol)
        .map(|(p, _)| p.clone())
        .collect();
    PointNet::new(space, kept, face.eps())
}

fn chord_through<S: BicombedSpace + ?Sized>(
    space: &S,
    pts: &[Point],
    p: &Point,
    params: &ExtremalParams,
) -> Option<ChordWitness> {
    let hit = params.eps;
    let to_p: Vec<f64> = pts.iter().map(|x| space.dist(x, p)).collect();
    let mut far: Vec<usize> = (0..pts.len()).filter(|&i| to_p[i] > params.delta).collect();
    far.sort_by(|&a, &b| to_p[a].total_cmp(&to_p[b]).then(a.cmp(&b)));
    let symmetric = space.is_symmetric();

    for a in 0..far.len() {
        for b in pair_partners(a, far.len(), symmetric) {
            let (i, j) = (far[a], far[b]);
            let span = space.dist(&pts[i], &pts[j]);
            let slack = 1e-9 * (1.0 + span);
            // d([x,y](t), x) <= t d(x,y) and d([x,y](t), y) <= (1-t) d(x,y)
            // for any convex bicombing, so a hit needs a near-degenerate triangle.
            if span == 0.0 || to_p[i] + to_p[j] > span + 2.0 * hit + slack {
                continue;
            }
            let lo = (to_p[i] - hit) / span - slack;
            let hi = 1.0 - (to_p[j] - hit) / span + slack;
            for k in 1..=params.t_grid {
                let t = params.interior(k);
                if t < lo || t > hi {
                    continue;
                }
                let z = space.combing(&pts[i], &pts[j], t);
                let d = space.dist(&z, p);
                if d < hit {
                    return Some(ChordWitness {
                        x: pts[i].clone(),
                        y: pts[j].clone(),
                        t,
                        distance: d,
                    });
                }
            }
        }
    }
    None
}

/// `p` is extremal unless some chord with both endpoints farther than
/// `delta` from `p` passes within `eps` of it at an interior parameter.
pub fn is_extremal_point<S: BicombedSpace + ?Sized>(
    space: &S,
    net: &PointNet,
    p: &Point,
    params: &ExtremalParams,
) -> Result<PointVerdict> {
    params.validate()?;
    let p = space.canonicalize(p)?;
    let gap = nearest_linear(space, net.points(), &p);
    if gap > params.eps {
        return Err(invalid(format!(
            "point is {gap:e} from the net, farther than the hit radius {:e}",
            params.eps
        )));
    }
    let witness = chord_through(space, net.points(), &p, params);
    Ok(PointVerdict { extremal: witness.is_none(), witness })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtremalPoints {
    pub points: Vec<Point>,
    /// Set when no point survived.
    pub diagnostic: Option<String>,
}

pub fn extremal_points<S: BicombedSpace + ?Sized>(
    space: &S,
    net: &PointNet,
    params: &ExtremalParams,
) -> Result<ExtremalPoints> {
    params.validate()?;
    let pts = net.points();
    let points: Vec<Point> = pts
        .par_iter()
        .filter(|p| chord_through(space, pts, p, params).is_none())
        .cloned()
        .collect();
    let diagnostic = points.is_empty().then(|| {
        format!(
            "no extremal points among {} net points at hit radius {:e}, delta {:e}; \
             the discretization is too coarse, try a smaller eps",
            pts.len(),
            params.eps,
            params.delta
        )
    });
    Ok(ExtremalPoints { points, diagnostic })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SetWitness {
    pub x: Point,
    pub y: Point,
    pub t_enter: f64,
    pub t_exit: f64,
    pub exit_distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SetVerdict {
    pub extremal: bool,
    pub witness: Option<SetWitness>,
}

/// `E` fails to be extremal in `C` when some segment of `C` enters `E`
/// (an interior sample closer than the hit radius) and also leaves it (some
/// sample, endpoints included, farther than `E`'s resolution from `E`).
///
/// As in [`is_extremal_point`], only segments whose endpoints are both
/// farther than `delta` from `E` are tested, so `{p}` gets the same verdict
/// from both predicates.
pub fn is_extremal_set<S: BicombedSpace + ?Sized>(
    space: &S,
    net: &PointNet,
    subset: &PointNet,
    params: &ExtremalParams,
) -> Result<SetVerdict> {
    params.validate()?;
    if subset.is_empty() {
        return Err(Error::Empty("extremal set candidate"));
    }
    let pts = net.points();
    let sub = subset.points();
    let match_radius = net.eps().max(params.eps);
    for e in sub {
        if nearest_linear(space, pts, e) > match_radius {
            return Err(invalid("candidate set is not contained in the net"));
        }
    }
    let hit = params.eps;
    let exit_radius = subset.eps().max(hit);
    let index = NetIndex::build(space, sub, exit_radius);
    let to_set = |z: &Point| index.nearest(space, sub, z).expect("subset is non-empty").1;
    let to_e: Vec<f64> = pts.par_iter().map(|x| to_set(x)).collect();
    let symmetric = space.is_symmetric();
    let g = params.t_grid;

    let witness = (0..pts.len()).into_par_iter().find_map_first(|i| {
        pair_partners(i, pts.len(), symmetric).find_map(|j| {
            let (x, y) = (&pts[i], &pts[j]);
            let span = space.dist(x, y);
            let slack = 1e-9 * (1.0 + span);
            if span == 0.0
                || to_e[i] <= params.delta
                || to_e[j] <= params.delta
                || to_e[i] + to_e[j] > span + 2.0 * hit + slack
            {
                return None;
            }
            let lo = (to_e[i] - hit) / span - slack;
            let hi = 1.0 - (to_e[j] - hit) / span + slack;
            let t_enter = (1..=g).map(|k| params.interior(k)).find(|&t| {
                t >= lo && t <= hi && to_set(&space.combing(x, y, t)) < hit
            })?;
            (0..=g + 1).find_map(|k| {
                let t = grid_param(k, g + 1);
                let d = to_set(&space.combing(x, y, t));
                (d > exit_radius).then(|| SetWitness {
                    x: x.clone(),
                    y: y.clone(),
                    t_enter,
                    t_exit: t,
                    exit_distance: d,
                })
            })
        })
    });
    Ok(SetVerdict { extremal: witness.is_none(), witness })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Descent {
    pub point: Point,
    /// Face sizes, starting with the whole net.
    pub trace: Vec<usize>,
    pub iterations: usize,
    pub converged: bool,
}

fn spread_exceeds<S: BicombedSpace + ?Sized>(space: &S, face: &PointNet, r: f64) -> bool {
    let pts = face.points();
    (0..pts.len())
        .into_par_iter()
        .any(|i| pts[i + 1..].iter().any(|q| space.dist(&pts[i], q) > r))
}

/// Repeatedly replaces the current face by the points farthest from the
/// anchor, re-anchoring at the canonically smallest point of the new face.
/// Stops at a single point or once the face diameter is at most `2 eps`.
pub fn minimal_extremal_descent<S: BicombedSpace + ?Sized>(
    space: &S,
    net: &PointNet,
    start: &Point,
    params: &ExtremalParams,
    max_iters: usize,
) -> Result<Descent> {
    params.validate()?;
    let start = space.canonicalize(start)?;
    let gap = nearest_linear(space, net.points(), &start);
    if gap > params.eps {
        return Err(invalid(format!(
            "descent start is {gap:e} from the net, farther than {:e}",
            params.eps
        )));
    }
    let mut face = net.clone();
    let mut anchor = start;
    let mut trace = vec![face.len()];
    let mut iterations = 0;
    let converged = loop {
        if face.len() == 1 || !spread_exceeds(space, &face, 2.0 * params.eps) {
            break true;
        }
        if iterations == max_iters {
            break false;
        }
        face = argmax_face(space, &face, &ConvexFunctional::DistToPoint(anchor), params.face_tol)?;
        iterations += 1;
        trace.push(face.len());
        anchor = face.points()[0].clone();
    };
    Ok(Descent {
        point: face.points()[0].clone(),
        trace,
        iterations,
        converged,
    })
}
