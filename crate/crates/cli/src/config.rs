use std::path::{Path, PathBuf};

use perturbed_green::asymptotics::{AsymptoticOptions, FormulaId};
use perturbed_green::validation::{ErrorScale, ExpectedOrder, PairFilter, Reference, RowStratum};
use perturbed_green::{DomainSpec, GridPolicy};
use serde::{Deserialize, Serialize};

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Eval,
    Oracle,
    Sweep,
    Rates,
    Report,
}

/// Everything a run can be told. Every field is optional in the file; the
/// command decides which ones it needs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    /// Inline configuration object or a path to a JSON file holding one.
    pub domain: Option<serde_json::Value>,
    pub formula: Option<FormulaId>,
    pub eps: Option<Vec<f64>>,
    pub grid: Option<GridPolicy>,
    pub options: Option<AsymptoticOptions>,
    pub reference: Option<Reference>,
    pub filter: Option<PairFilter>,
    pub scale: Option<ErrorScale>,
    pub estimate_accuracy: Option<bool>,
    pub stratum: Option<RowStratum>,
    pub expected: Option<ExpectedOrder>,
    pub x: Option<Vec<f64>>,
    pub y: Option<Vec<f64>>,
    pub criteria: Option<Vec<u8>>,
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
        // domain files named in a config resolve against the config's directory
        if let Some(serde_json::Value::String(p)) = &cfg.domain {
            let p = Path::new(p);
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    cfg.domain = Some(serde_json::Value::String(
                        dir.join(p).to_string_lossy().into_owned(),
                    ));
                }
            }
        }
        Ok(cfg)
    }

    pub fn domain(&self) -> Result<DomainSpec, Failure> {
        let value = self
            .domain
            .as_ref()
            .ok_or_else(|| Failure::Config("missing domain".into()))?;
        let value = match value {
            serde_json::Value::String(s) => {
                let text = if s.trim_start().starts_with('{') {
                    s.clone()
                } else {
                    std::fs::read_to_string(s)
                        .map_err(|e| Failure::Config(format!("cannot read domain file {s}: {e}")))?
                };
                serde_json::from_str(&text).map_err(|e| Failure::Config(format!("domain: {e}")))?
            }
            v => v.clone(),
        };
        let spec: DomainSpec =
            serde_json::from_value(value).map_err(|e| Failure::Config(format!("domain: {e}")))?;
        spec.validated().map_err(Failure::from)
    }

    pub fn formula(&self) -> Result<FormulaId, Failure> {
        self.formula
            .ok_or_else(|| Failure::Config("missing formula".into()))
    }

    pub fn eps(&self) -> Result<Vec<f64>, Failure> {
        self.eps
            .clone()
            .ok_or_else(|| Failure::Config("missing eps list".into()))
    }

    pub fn grid(&self) -> GridPolicy {
        let mut g = self.grid.clone().unwrap_or_default();
        if let Some(seed) = self.seed {
            g.seed = seed;
        }
        g
    }

    pub fn point(&self, which: &str) -> Result<perturbed_green::Point, Failure> {
        let c = match which {
            "x" => &self.x,
            _ => &self.y,
        };
        let c = c
            .as_ref()
            .ok_or_else(|| Failure::Config(format!("missing {which}")))?;
        perturbed_green::Point::from_slice(c).map_err(Failure::from)
    }
}
