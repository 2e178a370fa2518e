//! End-to-end checks: every compact convex net is recovered (up to its
//! resolution) as the hull of its extremal points, plus the supporting
//! face, distance-to-set and descent properties.

use std::time::Instant;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::convexity::{
    check_convex_functional, directed_excess, hausdorff, hull_closure, is_convex_net,
    ConvexFunctional, FunctionalCheck, PointNet, SegmentWitness,
};
use crate::error::{invalid, Result};
use crate::extremal::{
    argmax_face, extremal_points, is_extremal_point, is_extremal_set, minimal_extremal_descent,
    ChordWitness, ExtremalParams, SetWitness,
};
use crate::point::Point;
use crate::space::{grid_param, BicombedSpace};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HullConfig {
    pub segment_samples: usize,
    pub max_rounds: usize,
}

impl Default for HullConfig {
    fn default() -> Self {
        Self { segment_samples: 8, max_rounds: 64 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KmConfig {
    pub hull: HullConfig,
    /// Pass when the Hausdorff distance is at most `pass_factor * eps`.
    pub pass_factor: f64,
}

impl Default for KmConfig {
    fn default() -> Self {
        Self { hull: HullConfig::default(), pass_factor: 3.0 }
    }
}

/// Wall-clock seconds per phase. Not serialized, so reports stay reproducible.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PhaseTimings {
    pub convexity: f64,
    pub extremal: f64,
    pub hull: f64,
    pub hausdorff: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KmReport {
    pub space: String,
    pub net_size: usize,
    pub net_is_convex: bool,
    pub extremal_count: usize,
    pub extremal_points: Vec<Point>,
    pub hull_of_extremal: Vec<Point>,
    pub hull_rounds: usize,
    pub hull_converged: bool,
    /// Hausdorff distance between the net and the hull of its extremal points.
    pub hausdorff_c_vs_hull_ext: Option<f64>,
    /// Largest distance from a hull point back to the net.
    pub hull_in_net_excess: Option<f64>,
    pub hull_in_net_holds: bool,
    pub eps: f64,
    pub pass_factor: f64,
    pub pass: bool,
    pub diagnostic: Option<String>,
    #[serde(skip)]
    pub timings: PhaseTimings,
}

pub fn verify_krein_milman<S: BicombedSpace + ?Sized>(
    space: &S,
    net: &PointNet,
    params: &ExtremalParams,
    config: &KmConfig,
) -> Result<KmReport> {
    let eps = net.eps();
    let mut timings = PhaseTimings::default();

    let clock = Instant::now();
    let convex = is_convex_net(space, net, config.hull.segment_samples)?;
    timings.convexity = clock.elapsed().as_secs_f64();

    let clock = Instant::now();
    let ext = extremal_points(space, net, params)?;
    timings.extremal = clock.elapsed().as_secs_f64();

    let mut report = KmReport {
        space: space.describe(),
        net_size: net.len(),
        net_is_convex: convex.holds,
        extremal_count: ext.points.len(),
        extremal_points: ext.points.clone(),
        hull_of_extremal: Vec::new(),
        hull_rounds: 0,
        hull_converged: false,
        hausdorff_c_vs_hull_ext: None,
        hull_in_net_excess: None,
        hull_in_net_holds: false,
        eps,
        pass_factor: config.pass_factor,
        pass: false,
        diagnostic: ext.diagnostic.clone(),
        timings,
    };
    if ext.points.is_empty() {
        return Ok(report);
    }

    let clock = Instant::now();
    let seed = PointNet::new(space, ext.points, eps)?;
    let hull = hull_closure(space, &seed, config.hull.segment_samples, config.hull.max_rounds)?;
    report.timings.hull = clock.elapsed().as_secs_f64();

    let clock = Instant::now();
    let h = hausdorff(space, net, &hull.net)?;
    let excess = directed_excess(space, &hull.net, net);
    report.timings.hausdorff = clock.elapsed().as_secs_f64();

    report.hull_rounds = hull.rounds;
    report.hull_converged = hull.converged;
    report.hausdorff_c_vs_hull_ext = Some(h);
    report.hull_in_net_excess = Some(excess);
    report.hull_in_net_holds = excess <= eps;
    report.pass = h <= config.pass_factor * eps;
    if !convex.holds {
        report.diagnostic = Some("input net is not eps-convex; the verdict is not meaningful".into());
    } else if !hull.converged {
        report.diagnostic = Some(format!(
            "hull of extremal points did not converge in {} rounds",
            config.hull.max_rounds
        ));
    }
    report.hull_of_extremal = hull.net.into_points();
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PaperCheckConfig {
    pub hull: HullConfig,
    pub grid: usize,
    pub convexity_tol: f64,
    pub lipschitz_pairs: usize,
    pub lipschitz_tol: f64,
    /// Size of the random subset whose hull plays the role of `K`.
    pub subset_size: usize,
    /// Largest number of net points used as the domain of convexity checks.
    pub domain_size: usize,
    pub descent_starts: usize,
    pub max_iters: usize,
    pub rng_seed: u64,
}

impl Default for PaperCheckConfig {
    fn default() -> Self {
        Self {
            hull: HullConfig::default(),
            grid: 16,
            convexity_tol: 1e-7,
            lipschitz_pairs: 1000,
            lipschitz_tol: 1e-12,
            subset_size: 3,
            domain_size: 40,
            descent_starts: 5,
            max_iters: 50,
            rng_seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FaceCheck {
    pub functional: String,
    pub convexity: FunctionalCheck,
    /// False when the functional failed its convexity check, so the face
    /// property does not apply.
    pub applicable: bool,
    pub face_size: usize,
    pub face_is_extremal: Option<bool>,
    pub witness: Option<SetWitness>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceToSetCheck {
    pub subset: Vec<Point>,
    pub hull_size: usize,
    pub hull_converged: bool,
    pub pairs: usize,
    pub max_lipschitz_defect: f64,
    pub lipschitz_witness: Option<SegmentWitness>,
    pub lipschitz_holds: bool,
    pub convexity: FunctionalCheck,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DescentCheck {
    pub start: Point,
    pub result: Point,
    pub trace: Vec<usize>,
    pub converged: bool,
    pub strictly_decreasing: bool,
    pub result_is_extremal: bool,
    pub witness: Option<ChordWitness>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PaperChecksReport {
    pub space: String,
    pub faces: Vec<FaceCheck>,
    pub distance_to_set: DistanceToSetCheck,
    pub descents: Vec<DescentCheck>,
    pub pass: bool,
}

/// Evenly spaced points of the net in canonical order.
pub fn canonical_sample(net: &PointNet, count: usize) -> Vec<Point> {
    let n = net.len();
    if count >= n {
        return net.points().to_vec();
    }
    if count == 1 {
        return vec![net.points()[0].clone()];
    }
    (0..count)
        .map(|k| net.points()[k * (n - 1) / (count - 1)].clone())
        .collect()
}

/// Face, distance-to-set and descent checks on one convex net.
pub fn run_paper_checks<S: BicombedSpace + ?Sized>(
    space: &S,
    net: &PointNet,
    suite: &[ConvexFunctional],
    params: &ExtremalParams,
    config: &PaperCheckConfig,
) -> Result<PaperChecksReport> {
    params.validate()?;
    if config.subset_size == 0 || config.descent_starts == 0 {
        return Err(invalid("subset size and descent start count must be positive"));
    }
    let domain = PointNet::new(space, canonical_sample(net, config.domain_size), net.eps())?;

    let mut faces = Vec::with_capacity(suite.len());
    for phi in suite {
        let convexity = check_convex_functional(space, phi, &domain, config.grid, config.convexity_tol)?;
        let mut check = FaceCheck {
            functional: phi.describe(),
            applicable: convexity.passed,
            convexity,
            face_size: 0,
            face_is_extremal: None,
            witness: None,
        };
        if check.applicable {
            let face = argmax_face(space, net, phi, params.face_tol)?;
            let verdict = is_extremal_set(space, net, &face, params)?;
            check.face_size = face.len();
            check.face_is_extremal = Some(verdict.extremal);
            check.witness = verdict.witness;
        }
        faces.push(check);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let picks = sample(&mut rng, net.len(), config.subset_size.min(net.len()));
    let subset: Vec<Point> = picks.iter().map(|i| net.points()[i].clone()).collect();
    let k_seed = PointNet::new(space, subset.clone(), net.eps())?;
    let k_hull = hull_closure(space, &k_seed, config.hull.segment_samples, config.hull.max_rounds)?;
    let d_k = ConvexFunctional::DistToNet(k_hull.net.clone());
    let (pairs, max_defect, lipschitz_witness) = lipschitz_scan(space, net, &d_k, config, &mut rng)?;
    let distance_to_set = DistanceToSetCheck {
        subset,
        hull_size: k_hull.net.len(),
        hull_converged: k_hull.converged,
        pairs,
        max_lipschitz_defect: max_defect,
        lipschitz_holds: max_defect <= config.lipschitz_tol,
        lipschitz_witness,
        convexity: check_convex_functional(space, &d_k, &domain, config.grid, config.convexity_tol)?,
    };

    let mut descents = Vec::new();
    for start in canonical_sample(net, config.descent_starts) {
        let run = minimal_extremal_descent(space, net, &start, params, config.max_iters)?;
        let verdict = is_extremal_point(space, net, &run.point, params)?;
        descents.push(DescentCheck {
            strictly_decreasing: run.trace.windows(2).all(|w| w[1] < w[0]),
            start,
            result: run.point,
            trace: run.trace,
            converged: run.converged,
            result_is_extremal: verdict.extremal,
            witness: verdict.witness,
        });
    }

    let pass = faces
        .iter()
        .all(|f| !f.applicable || f.face_is_extremal == Some(true))
        && distance_to_set.lipschitz_holds
        && distance_to_set.convexity.passed
        && descents
            .iter()
            .all(|d| d.converged && d.strictly_decreasing && d.result_is_extremal);
    Ok(PaperChecksReport {
        space: space.describe(),
        faces,
        distance_to_set,
        descents,
        pass,
    })
}

/// `|f(x) - f(y)| - d(x, y)` over random pairs of net points and points on
/// their segments.
fn lipschitz_scan<S: BicombedSpace + ?Sized>(
    space: &S,
    net: &PointNet,
    f: &ConvexFunctional,
    config: &PaperCheckConfig,
    rng: &mut ChaCha8Rng,
) -> Result<(usize, f64, Option<SegmentWitness>)> {
    use rand::Rng;
    let pts = net.points();
    let mut worst = f64::NEG_INFINITY;
    let mut witness = None;
    for _ in 0..config.lipschitz_pairs {
        let a = &pts[rng.gen_range(0..pts.len())];
        let b = &pts[rng.gen_range(0..pts.len())];
        let t = grid_param(rng.gen_range(0..=config.grid), config.grid);
        let x = space.combing(a, b, t);
        let y = &pts[rng.gen_range(0..pts.len())];
        let defect = (f.evaluate(space, &x)? - f.evaluate(space, y)?).abs() - space.dist(&x, y);
        if defect > worst {
            worst = defect;
            witness = Some(SegmentWitness { x: a.clone(), y: b.clone(), t, value: defect });
        }
    }
    Ok((config.lipschitz_pairs, worst.max(0.0), witness.filter(|_| worst > config.lipschitz_tol)))
}
