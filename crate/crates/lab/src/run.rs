//! Pipelines behind the subcommands, producing serializable reports.

use bicombing_core::{
    check_axioms, extremal_points, is_convex_net, run_paper_checks, verify_krein_milman,
    ConvexFunctional, KmConfig, PaperCheckConfig, Point, PointNet, Space, SpaceSpec,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{LabError, LabResult};
use crate::instance::{InstanceFile, Params, FORMAT};
use crate::sample::{axiom_tolerance, random_quadruples};

pub const AXIOM_QUADRUPLES: usize = 100;
pub const AXIOM_GRID: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pipeline {
    CheckAxioms,
    Hull,
    Extremal,
    VerifyKm,
    PaperChecks,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub format: u32,
    pub command: Pipeline,
    pub space: SpaceSpec,
    pub params: Params,
    pub pass: bool,
    pub net: Vec<Point>,
    pub extremal: Option<Vec<Point>>,
    pub hull_of_extremal: Option<Vec<Point>>,
    pub result: Value,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de)
            .map_err(|e| {
                let field = e.path().to_string();
                format!("field `{field}`: {}", e.into_inner())
            })
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report section serializes")
}

/// Linear functionals along each coordinate direction and its negative.
fn coordinate_functionals(space: &Space) -> Vec<ConvexFunctional> {
    let Space::Lp(s) = space else { return Vec::new() };
    let n = s.dimension();
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        for sign in [1.0, -1.0] {
            let mut w = vec![0.0; n];
            w[i] = sign;
            out.push(ConvexFunctional::Linear(w));
        }
    }
    out
}

/// Distance to a few canonical net points plus the coordinate functionals.
pub fn functional_suite(space: &Space, net: &PointNet) -> Vec<ConvexFunctional> {
    let mut suite: Vec<ConvexFunctional> = bicombing_core::km::canonical_sample(net, 3)
        .into_iter()
        .map(ConvexFunctional::DistToPoint)
        .collect();
    suite.extend(coordinate_functionals(space));
    suite
}

pub fn run(pipeline: Pipeline, inst: &InstanceFile) -> LabResult<Report> {
    let space = inst.build_space()?;
    let params = &inst.params;
    let mut report = Report {
        format: FORMAT,
        command: pipeline,
        space: inst.space.clone(),
        params: params.clone(),
        pass: false,
        net: Vec::new(),
        extremal: None,
        hull_of_extremal: None,
        result: Value::Null,
    };

    if pipeline == Pipeline::CheckAxioms {
        let mut rng = ChaCha8Rng::seed_from_u64(params.rng_seed);
        let quads = random_quadruples(&space, AXIOM_QUADRUPLES, &mut rng);
        let axioms = check_axioms(&space, &quads, AXIOM_GRID, axiom_tolerance(&space))?;
        report.pass = axioms.passed;
        report.result = to_value(&axioms);
        return Ok(report);
    }

    let (net, closure) = inst.build_net(&space)?;
    report.net = net.points().to_vec();
    match pipeline {
        Pipeline::CheckAxioms => unreachable!("handled above"),
        Pipeline::Hull => {
            let convex = is_convex_net(&space, &net, params.segment_samples)?;
            let converged = closure.as_ref().map_or(true, |c| c.converged);
            report.pass = converged && convex.holds;
            report.result = json!({
                "seed_size": inst.seed.len(),
                "net_size": net.len(),
                "rounds": closure.as_ref().map(|c| c.rounds),
                "insertions": closure.as_ref().map(|c| c.insertions.clone()),
                "converged": converged,
                "convex": to_value(&convex),
            });
        }
        Pipeline::Extremal => {
            let xp = params.extremal_params(&space, &net)?;
            let ext = extremal_points(&space, &net, &xp)?;
            report.pass = !ext.points.is_empty();
            report.result = json!({
                "net_size": net.len(),
                "extremal_params": to_value(&xp),
                "extremal_count": ext.points.len(),
                "diagnostic": ext.diagnostic,
            });
            report.extremal = Some(ext.points);
        }
        Pipeline::VerifyKm => {
            let xp = params.extremal_params(&space, &net)?;
            let config = KmConfig { hull: params.hull_config(), ..KmConfig::default() };
            let km = verify_krein_milman(&space, &net, &xp, &config)?;
            report.pass = km.pass;
            let mut value = to_value(&km);
            if let Value::Object(map) = &mut value {
                map.remove("extremal_points");
                map.remove("hull_of_extremal");
                map.insert("extremal_params".into(), to_value(&xp));
            }
            report.result = value;
            report.extremal = Some(km.extremal_points);
            report.hull_of_extremal = Some(km.hull_of_extremal);
        }
        Pipeline::PaperChecks => {
            let xp = params.extremal_params(&space, &net)?;
            let config = PaperCheckConfig {
                hull: params.hull_config(),
                rng_seed: params.rng_seed,
                ..PaperCheckConfig::default()
            };
            let suite = functional_suite(&space, &net);
            let checks = run_paper_checks(&space, &net, &suite, &xp, &config)?;
            report.pass = checks.pass;
            report.result = to_value(&checks);
        }
    }
    Ok(report)
}

/// Applies command-line overrides to a loaded instance.
pub fn apply_overrides(
    inst: &mut InstanceFile,
    eps: Option<f64>,
    rng_seed: Option<u64>,
    max_rounds: Option<usize>,
) -> LabResult<()> {
    if let Some(eps) = eps {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(LabError::Usage(format!("--eps must be positive, got {eps}")));
        }
        inst.params.eps = eps;
    }
    if let Some(seed) = rng_seed {
        inst.params.rng_seed = seed;
    }
    if let Some(rounds) = max_rounds {
        if rounds == 0 {
            return Err(LabError::Usage("--max-rounds must be positive".into()));
        }
        inst.params.max_rounds = rounds;
    }
    Ok(())
}
