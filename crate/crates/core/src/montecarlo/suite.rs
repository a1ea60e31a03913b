//! Batch runner for a JSON list of experiments.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::Variant;
use crate::montecarlo::invariance::{verify_invariance, InvarianceKind, Probe};
use crate::montecarlo::moments::{verify_det_moment, verify_gaussian_identity, DetProposal};
use crate::montecarlo::pif::verify_pif;
use crate::montecarlo::quadrature::{verify_density_normalization, QuadratureGrid};
use crate::montecarlo::report::{Report, Thresholds};
use crate::montecarlo::testfn::{TestFnKind, TestFunction};
use crate::montecarlo::RunOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentId {
    Pif,
    #[serde(alias = "gaussian-identity")]
    GaussianIdentity,
    #[serde(alias = "det-moment")]
    DetMoment,
    Normalization,
    Invariance,
}

impl ExperimentId {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentId::Pif => "pif",
            ExperimentId::GaussianIdentity => "gaussian_identity",
            ExperimentId::DetMoment => "det_moment",
            ExperimentId::Normalization => "normalization",
            ExperimentId::Invariance => "invariance",
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "pif" => Ok(ExperimentId::Pif),
            "gaussian_identity" => Ok(ExperimentId::GaussianIdentity),
            "det_moment" => Ok(ExperimentId::DetMoment),
            "normalization" => Ok(ExperimentId::Normalization),
            "invariance" => Ok(ExperimentId::Invariance),
            _ => Err(Error::Config(format!("unknown experiment id `{s}`"))),
        }
    }
}

/// One experiment descriptor. Fields that an experiment does not use are
/// ignored; required ones are checked by [`ExperimentSpec::run`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub id: ExperimentId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub variant: Variant,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub testfn: Option<TestFnKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<InvarianceKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proposal: Option<DetProposal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<Probe>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

fn need<T>(value: Option<T>, field: &str, id: ExperimentId) -> Result<T> {
    value.ok_or_else(|| Error::Config(format!("experiment `{id}` requires `{field}`")))
}

impl ExperimentSpec {
    pub fn new(id: ExperimentId) -> Self {
        Self {
            id,
            n: None,
            k: None,
            r: None,
            samples: None,
            seed: 0,
            variant: Variant::Corrected,
            testfn: None,
            scale: None,
            kind: None,
            proposal: None,
            probe: None,
            step: None,
            p_max: None,
            tol: None,
        }
    }

    pub fn run(&self, opts: &RunOptions) -> Result<Report> {
        let id = self.id;
        match id {
            ExperimentId::Pif => {
                let kind = self.testfn.unwrap_or(TestFnKind::Gaussian);
                let phi = TestFunction::new(kind, self.scale.unwrap_or(1.0))?;
                verify_pif(
                    &phi,
                    need(self.n, "n", id)?,
                    need(self.k, "k", id)?,
                    need(self.samples, "N", id)?,
                    self.seed,
                    self.variant,
                    opts,
                )
            }
            ExperimentId::GaussianIdentity => verify_gaussian_identity(
                need(self.n, "n", id)?,
                need(self.k, "k", id)?,
                need(self.samples, "N", id)?,
                self.seed,
                self.variant,
                self.proposal.unwrap_or_default(),
                opts,
            ),
            ExperimentId::DetMoment => verify_det_moment(
                need(self.k, "k", id)?,
                need(self.r, "r", id)?,
                need(self.samples, "N", id)?,
                self.seed,
                self.variant,
                self.proposal.unwrap_or_default(),
                opts,
            ),
            ExperimentId::Normalization => {
                let n = need(self.n, "n", id)?;
                let k = need(self.k, "k", id)?;
                let base = QuadratureGrid::default_for(n, k)?;
                let grid = QuadratureGrid {
                    p_max: self.p_max.unwrap_or(base.p_max),
                    step: self.step.unwrap_or(base.step),
                    tol: self.tol.unwrap_or(base.tol),
                };
                verify_density_normalization(n, k, Some(grid), opts)
            }
            ExperimentId::Invariance => verify_invariance(
                need(self.kind, "kind", id)?,
                need(self.n, "n", id)?,
                need(self.k, "k", id)?,
                need(self.samples, "N", id)?,
                self.seed,
                self.probe.unwrap_or_default(),
                opts,
            ),
        }
    }
}

/// `{"experiments": [...], "z_max": …, "rel_max": …, "output": …}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub experiments: Vec<ExperimentSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_max: Option<f64>,
    /// File that receives the report array in addition to standard output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SuiteConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("z_max", self.z_max), ("rel_max", self.rel_max)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::Config(format!("{name} must be positive, got {v}")));
                }
            }
        }
        Ok(())
    }

    /// `base` with the config's threshold overrides applied.
    pub fn thresholds(&self, base: Thresholds) -> Thresholds {
        Thresholds {
            z_max: self.z_max.unwrap_or(base.z_max),
            rel_max: self.rel_max.unwrap_or(base.rel_max),
        }
    }
}

/// Runs every experiment in order. The first failing precondition aborts the
/// run; failing verifications are returned as reports with `pass = false`.
pub fn run_suite(config: &SuiteConfig, opts: &RunOptions) -> Result<Vec<Report>> {
    config.validate()?;
    let opts = RunOptions {
        thresholds: config.thresholds(opts.thresholds),
        ..*opts
    };
    config.experiments.iter().map(|e| e.run(&opts)).collect()
}
