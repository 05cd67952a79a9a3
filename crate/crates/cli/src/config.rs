use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use hermite_needlets::cutoff::CutoffPair;
use hermite_needlets::frame::{build_frame_with_budget, NeedletFrame, DEFAULT_DELTA};
use hermite_needlets::quadrature::DEFAULT_NODE_BUDGET;
use hermite_needlets::spaces::GridSpec;
use serde::{Deserialize, Serialize};

use crate::spec::CutoffSpec;
use crate::UsageError;

pub const BUDGET_ENV: &str = "NEEDLET_NODE_BUDGET";

/// Settings shared by all commands; read from `--config`, then overridden by
/// `NEEDLET_NODE_BUDGET` and finally by command-line flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub dimension: usize,
    pub delta: f64,
    pub j_max: usize,
    /// `quadratic` or `dual:type_b:U,V`.
    pub cutoff: CutoffSpec,
    /// `null` means largest frame node + 1.
    pub grid_radius: Option<f64>,
    /// Points per unit length; `null` means `4·2^{J_max}`.
    pub grid_resolution: Option<usize>,
    pub node_budget: u64,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dimension: 1,
            delta: DEFAULT_DELTA,
            j_max: 3,
            cutoff: CutoffSpec::Quadratic,
            grid_radius: None,
            grid_resolution: None,
            node_budget: DEFAULT_NODE_BUDGET as u64,
            output_dir: PathBuf::from("."),
        }
    }
}

/// Flag values that replace config entries when present.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub dimension: Option<usize>,
    pub delta: Option<f64>,
    pub j_max: Option<usize>,
    pub cutoff: Option<CutoffSpec>,
    pub grid_radius: Option<f64>,
    pub grid_resolution: Option<usize>,
    pub node_budget: Option<u64>,
    pub output_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>, env_budget: Option<&str>, flags: Overrides) -> Result<Self> {
        let mut config = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading config {}", p.display()))?;
                serde_json::from_str(&text)
                    .map_err(|e| UsageError(format!("config {}: {e}", p.display())))?
            }
            None => RunConfig::default(),
        };
        if let Some(v) = env_budget {
            config.node_budget = v
                .trim()
                .parse()
                .map_err(|_| UsageError(format!("{BUDGET_ENV}={v:?} is not a node count")))?;
        }
        let Overrides {
            dimension,
            delta,
            j_max,
            cutoff,
            grid_radius,
            grid_resolution,
            node_budget,
            output_dir,
        } = flags;
        config.dimension = dimension.unwrap_or(config.dimension);
        config.delta = delta.unwrap_or(config.delta);
        config.j_max = j_max.unwrap_or(config.j_max);
        config.cutoff = cutoff.unwrap_or(config.cutoff);
        config.grid_radius = grid_radius.or(config.grid_radius);
        config.grid_resolution = grid_resolution.or(config.grid_resolution);
        config.node_budget = node_budget.unwrap_or(config.node_budget);
        config.output_dir = output_dir.unwrap_or(config.output_dir);
        Ok(config)
    }

    pub fn pair(&self) -> Result<CutoffPair> {
        Ok(self.cutoff.pair()?)
    }

    pub fn frame(&self) -> Result<NeedletFrame> {
        Ok(build_frame_with_budget(
            self.dimension,
            self.delta,
            self.j_max,
            self.pair()?,
            self.node_budget as u128,
        )?)
    }

    pub fn grid(&self, frame: &NeedletFrame) -> Result<GridSpec> {
        Ok(GridSpec::new(
            self.grid_radius.unwrap_or(frame.max_node() + 1.0),
            self.grid_resolution
                .unwrap_or(GridSpec::required_resolution(frame.j_max())),
        )?)
    }
}
