//! The space abstraction (a metric together with a bicombing) and a runtime
//! checker for the two bicombing axioms.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::point::Point;

/// A metric space carrying a bicombing `(x, y, t) -> [x,y](t)`.
///
/// `dist` and `combing` are the unchecked evaluators used in hot loops; they
/// assume both arguments already passed [`BicombedSpace::canonicalize`].
/// The free functions [`distance`] and [`evaluate_bicombing`] validate.
pub trait BicombedSpace: Sync {
    fn describe(&self) -> String;

    /// Validates `p` against this space and returns its canonical form.
    fn canonicalize(&self, p: &Point) -> Result<Point>;

    fn dist(&self, x: &Point, y: &Point) -> f64;

    fn combing(&self, x: &Point, y: &Point, t: f64) -> Point;

    /// A map into `(R^k, max-norm)` that is 1-Lipschitz for this metric.
    /// Used to bucket points for range queries; `None` makes the index fall
    /// back to pivot distances.
    fn chart(&self, _p: &Point) -> Option<Vec<f64>> {
        None
    }

    /// `[x,y](t) == [y,x](1-t)` for all inputs. Pair scans visit only one
    /// orientation when this holds.
    fn is_symmetric(&self) -> bool {
        false
    }
}

pub fn distance<S: BicombedSpace + ?Sized>(space: &S, x: &Point, y: &Point) -> Result<f64> {
    space.canonicalize(x)?;
    space.canonicalize(y)?;
    Ok(space.dist(x, y))
}

pub fn evaluate_bicombing<S: BicombedSpace + ?Sized>(
    space: &S,
    x: &Point,
    y: &Point,
    t: f64,
) -> Result<Point> {
    if !(0.0..=1.0).contains(&t) {
        return Err(invalid(format!("bicombing parameter {t} outside [0, 1]")));
    }
    space.canonicalize(x)?;
    space.canonicalize(y)?;
    Ok(space.combing(x, y, t))
}

/// `m + 1` equally spaced points `[x,y](k/m)`, `k = 0..=m`.
pub fn sample_segment<S: BicombedSpace + ?Sized>(
    space: &S,
    x: &Point,
    y: &Point,
    m: usize,
) -> Result<Vec<Point>> {
    if m == 0 {
        return Err(invalid("segment sample count must be at least 1"));
    }
    space.canonicalize(x)?;
    space.canonicalize(y)?;
    Ok(sample_unchecked(space, x, y, m))
}

pub(crate) fn sample_unchecked<S: BicombedSpace + ?Sized>(
    space: &S,
    x: &Point,
    y: &Point,
    m: usize,
) -> Vec<Point> {
    (0..=m)
        .map(|k| space.combing(x, y, grid_param(k, m)))
        .collect()
}

#[inline]
pub(crate) fn grid_param(k: usize, m: usize) -> f64 {
    k as f64 / m as f64
}

/// Two segments `[x,y]` and `[x',y']` whose distance profile is tested.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Quadruple {
    pub x: Point,
    pub y: Point,
    pub x_prime: Point,
    pub y_prime: Point,
}

impl Quadruple {
    pub fn new(x: Point, y: Point, x_prime: Point, y_prime: Point) -> Self {
        Self { x, y, x_prime, y_prime }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomWitness {
    pub quadruple: Quadruple,
    /// The three consecutive grid parameters of the offending second difference.
    pub t: [f64; 3],
    pub defect: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomReport {
    pub pairs_checked: usize,
    pub grid_size: usize,
    pub max_endpoint_error: f64,
    pub max_idempotence_error: f64,
    /// Largest midpoint-convexity defect; positive means a violation.
    pub max_convexity_violation: f64,
    /// `d([x,y](t), [y,x](1-t))`; informational only.
    pub max_symmetry_defect: f64,
    pub worst_witness: Option<AxiomWitness>,
    pub passed: bool,
}

struct QuadOutcome {
    endpoint: f64,
    idempotence: f64,
    symmetry: f64,
    convexity: f64,
    worst_k: usize,
}

fn check_quadruple<S: BicombedSpace + ?Sized>(space: &S, q: &Quadruple, grid: usize) -> QuadOutcome {
    let first = sample_unchecked(space, &q.x, &q.y, grid);
    let second = sample_unchecked(space, &q.x_prime, &q.y_prime, grid);
    let profile: Vec<f64> = first
        .iter()
        .zip(&second)
        .map(|(a, b)| space.dist(a, b))
        .collect();

    let endpoint = [
        space.dist(&first[0], &q.x),
        space.dist(&first[grid], &q.y),
        space.dist(&second[0], &q.x_prime),
        space.dist(&second[grid], &q.y_prime),
    ]
    .into_iter()
    .fold(0.0, f64::max);

    let mut idempotence = 0.0_f64;
    for z in [&q.x, &q.y, &q.x_prime, &q.y_prime] {
        for k in 0..=grid {
            let c = space.combing(z, z, grid_param(k, grid));
            idempotence = idempotence.max(space.dist(&c, z));
        }
    }

    let mut symmetry = 0.0_f64;
    for (k, a) in first.iter().enumerate() {
        let b = space.combing(&q.y, &q.x, grid_param(grid - k, grid));
        symmetry = symmetry.max(space.dist(a, &b));
    }

    let mut convexity = f64::NEG_INFINITY;
    let mut worst_k = 1;
    for k in 1..grid {
        let defect = profile[k] - 0.5 * (profile[k - 1] + profile[k + 1]);
        if defect > convexity {
            convexity = defect;
            worst_k = k;
        }
    }

    QuadOutcome {
        endpoint,
        idempotence,
        symmetry,
        convexity: convexity.max(0.0),
        worst_k,
    }
}

/// Checks both bicombing axioms on the given quadruples.
///
/// Midpoint convexity of `t -> d([x,y](t), [x',y'](t))` is tested through
/// second differences on the uniform grid `k / grid`. Violations are
/// reported, never raised.
pub fn check_axioms<S: BicombedSpace + ?Sized>(
    space: &S,
    quadruples: &[Quadruple],
    grid: usize,
    tol: f64,
) -> Result<AxiomReport> {
    if grid < 2 {
        return Err(invalid("axiom grid must have at least 2 intervals"));
    }
    if !(tol >= 0.0) {
        return Err(invalid("tolerance must be nonnegative"));
    }
    for q in quadruples {
        for p in [&q.x, &q.y, &q.x_prime, &q.y_prime] {
            space.canonicalize(p)?;
        }
    }

    let outcomes: Vec<QuadOutcome> = quadruples
        .par_iter()
        .map(|q| check_quadruple(space, q, grid))
        .collect();

    let mut report = AxiomReport {
        pairs_checked: quadruples.len(),
        grid_size: grid,
        max_endpoint_error: 0.0,
        max_idempotence_error: 0.0,
        max_convexity_violation: 0.0,
        max_symmetry_defect: 0.0,
        worst_witness: None,
        passed: true,
    };
    let mut worst: Option<(usize, usize)> = None;
    for (i, o) in outcomes.iter().enumerate() {
        report.max_endpoint_error = report.max_endpoint_error.max(o.endpoint);
        report.max_idempotence_error = report.max_idempotence_error.max(o.idempotence);
        report.max_symmetry_defect = report.max_symmetry_defect.max(o.symmetry);
        if o.convexity > report.max_convexity_violation {
            report.max_convexity_violation = o.convexity;
            worst = Some((i, o.worst_k));
        }
    }
    report.worst_witness = worst.map(|(i, k)| AxiomWitness {
        quadruple: quadruples[i].clone(),
        t: [
            grid_param(k - 1, grid),
            grid_param(k, grid),
            grid_param(k + 1, grid),
        ],
        defect: outcomes[i].convexity,
    });
    report.passed = report.max_endpoint_error <= tol
        && report.max_idempotence_error <= tol
        && report.max_convexity_violation <= tol;
    Ok(report)
}
