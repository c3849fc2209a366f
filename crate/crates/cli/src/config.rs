//! Optional JSON configuration. Every field may be omitted; flags override.
//!
//! ```json
//! {
//!   "params": { "gamma1": 1, "gamma2": 1, "omega": 2, "dissipation": 1 },
//!   "tolerances": { "eig": 1e-10, "steady": 1e-9, "phase": 1e-8, "arc": 1e-9 },
//!   "output": { "format": "csv", "path": "out.csv" }
//! }
//! ```

use std::path::{Path, PathBuf};

use liouvillian_core::spectra::Tolerances;
use liouvillian_core::sweep::Format;
use liouvillian_core::{Error, Result, TwoLevelParams};
use serde::Deserialize;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub params: PartialParams,
    #[serde(default)]
    pub tolerances: PartialTolerances,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Clone, Copy, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialParams {
    pub gamma1: Option<f64>,
    pub gamma2: Option<f64>,
    pub omega: Option<f64>,
    pub dissipation: Option<f64>,
}

impl PartialParams {
    /// Fields of `self` take precedence over `base`.
    pub fn over(self, base: PartialParams) -> PartialParams {
        PartialParams {
            gamma1: self.gamma1.or(base.gamma1),
            gamma2: self.gamma2.or(base.gamma2),
            omega: self.omega.or(base.omega),
            dissipation: self.dissipation.or(base.dissipation),
        }
    }

    /// Fills missing fields from `defaults` and validates.
    pub fn resolve(self, defaults: TwoLevelParams) -> Result<TwoLevelParams> {
        TwoLevelParams::new(
            self.gamma1.unwrap_or(defaults.gamma1),
            self.gamma2.unwrap_or(defaults.gamma2),
            self.omega.unwrap_or(defaults.omega),
            self.dissipation.unwrap_or(defaults.dissipation),
        )
    }
}

#[derive(Clone, Copy, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialTolerances {
    pub eig: Option<f64>,
    pub steady: Option<f64>,
    pub ep: Option<f64>,
    pub rank: Option<f64>,
    pub phase: Option<f64>,
    pub arc: Option<f64>,
}

impl PartialTolerances {
    pub fn over(self, base: PartialTolerances) -> PartialTolerances {
        PartialTolerances {
            eig: self.eig.or(base.eig),
            steady: self.steady.or(base.steady),
            ep: self.ep.or(base.ep),
            rank: self.rank.or(base.rank),
            phase: self.phase.or(base.phase),
            arc: self.arc.or(base.arc),
        }
    }

    pub fn resolve(self) -> Result<Tolerances> {
        let d = Tolerances::default();
        let t = Tolerances {
            eig: self.eig.unwrap_or(d.eig),
            steady: self.steady.unwrap_or(d.steady),
            ep: self.ep.unwrap_or(d.ep),
            rank: self.rank.unwrap_or(d.rank),
            phase: self.phase.unwrap_or(d.phase),
            arc: self.arc.unwrap_or(d.arc),
        };
        t.validate()?;
        Ok(t)
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub format: Option<Format>,
    pub path: Option<PathBuf>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io { context: format!("reading config {}", path.display()), source: e })?;
        Config::parse(&text).map_err(|e| match e {
            Error::InvalidParams(msg) => Error::InvalidParams(format!("config {}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Config> {
        serde_json::from_str(text).map_err(|e| Error::InvalidParams(e.to_string()))
    }
}
