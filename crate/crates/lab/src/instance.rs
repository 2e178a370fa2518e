//! Instance files: a space, seed points and every run parameter.

use std::path::Path;

use bicombing_core::{ExtremalParams, HullConfig, Point, PointNet, Space, SpaceSpec};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, LabResult};

pub const FORMAT: u32 = 1;

/// How the convex net `C` is obtained from the seed points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NetSource {
    /// Hull closure of the seed.
    Hull,
    /// The seed itself, already convex.
    Given,
}

/// Default extremal parameters, before per-field overrides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremalRule {
    /// Tiny hit radius on the closure's own sample grid. For polytope-like nets.
    SampleExact,
    /// Hit radius `eps`, `delta = sqrt(eps * diam)`. For smooth boundaries.
    Smooth,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub eps: f64,
    pub segment_samples: usize,
    pub max_rounds: usize,
    pub rule: ExtremalRule,
    pub hit_radius: Option<f64>,
    pub delta: Option<f64>,
    pub t_grid: Option<usize>,
    pub face_tol: Option<f64>,
    pub rng_seed: u64,
}

impl Params {
    pub fn new(eps: f64, rule: ExtremalRule) -> Self {
        let hull = HullConfig::default();
        Self {
            eps,
            segment_samples: hull.segment_samples,
            max_rounds: hull.max_rounds,
            rule,
            hit_radius: None,
            delta: None,
            t_grid: None,
            face_tol: None,
            rng_seed: 0,
        }
    }

    pub fn hull_config(&self) -> HullConfig {
        HullConfig { segment_samples: self.segment_samples, max_rounds: self.max_rounds }
    }

    /// Rule defaults for `net`, with the explicit fields layered on top.
    pub fn extremal_params(&self, space: &Space, net: &PointNet) -> LabResult<ExtremalParams> {
        let mut params = match self.rule {
            ExtremalRule::SampleExact => ExtremalParams::sample_exact(self.eps, self.segment_samples),
            ExtremalRule::Smooth => ExtremalParams::for_net(self.eps, net.diameter(space)),
        };
        if let Some(v) = self.hit_radius {
            params.eps = v;
        }
        if let Some(v) = self.delta {
            params.delta = v;
        }
        if let Some(v) = self.t_grid {
            params.t_grid = v;
        }
        if let Some(v) = self.face_tol {
            params.face_tol = v;
        }
        params.validate()?;
        Ok(params)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub format: u32,
    pub space: SpaceSpec,
    pub net: NetSource,
    pub seed: Vec<Point>,
    pub params: Params,
}

impl InstanceFile {
    pub fn load(path: &Path) -> LabResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        Self::parse(&text).map_err(|message| LabError::Input { path: path.into(), message })
    }

    /// Parses and validates; errors name the offending field and position.
    pub fn parse(text: &str) -> Result<Self, String> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let inst: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            format!("field `{field}`: {}", e.into_inner())
        })?;
        if inst.format != FORMAT {
            return Err(format!("field `format`: unsupported version {}, expected {FORMAT}", inst.format));
        }
        Ok(inst)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("instance serializes");
        text.push('\n');
        text
    }

    pub fn save(&self, path: &Path) -> LabResult<()> {
        std::fs::write(path, self.to_json()).map_err(|e| LabError::io(path, e))
    }

    pub fn build_space(&self) -> LabResult<Space> {
        Ok(self.space.build()?)
    }

    /// The convex net `C`, plus closure statistics when it was computed.
    pub fn build_net(&self, space: &Space) -> LabResult<(PointNet, Option<bicombing_core::HullClosure>)> {
        if self.seed.is_empty() {
            return Err(LabError::Usage("instance has no seed points".into()));
        }
        let seed = PointNet::new(space, self.seed.clone(), self.params.eps)?;
        match self.net {
            NetSource::Given => Ok((seed, None)),
            NetSource::Hull => {
                let hull = bicombing_core::hull_closure(
                    space,
                    &seed,
                    self.params.segment_samples,
                    self.params.max_rounds,
                )?;
                Ok((hull.net.clone(), Some(hull)))
            }
        }
    }
}
