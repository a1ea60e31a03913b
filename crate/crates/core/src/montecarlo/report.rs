use serde::{Deserialize, Serialize};

use crate::measures::Variant;
use crate::montecarlo::testfn::TestFnKind;

/// Pass thresholds shared by every experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub z_max: f64,
    pub rel_max: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            z_max: 4.0,
            rel_max: 0.02,
        }
    }
}

impl Thresholds {
    /// `|z| ≤ z_max`, and `relative gap ≤ rel_max` when the reference is
    /// non-zero.
    pub fn judge(&self, z: f64, relative_gap: Option<f64>) -> bool {
        let z_ok = z.abs() <= self.z_max;
        let rel_ok = relative_gap.is_none_or(|g| g <= self.rel_max);
        z_ok && rel_ok
    }
}

/// Experiment parameters echoed into the report. Absent fields do not apply.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub testfn: Option<TestFnKind>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub scale: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub variant: Option<Variant>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub proposal: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub probe: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p_max: Option<f64>,
}

/// One statistic inside a report (a battery entry, one side of a two-sided
/// estimate, a half-step quadrature value…).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub name: String,
    pub estimate: f64,
    pub standard_error: f64,
    pub reference_value: f64,
    pub z_score: Option<f64>,
}

/// Outcome of one verification experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub experiment_id: String,
    pub parameters: Parameters,
    pub estimate: f64,
    pub standard_error: f64,
    pub reference_value: f64,
    pub reference_provenance: String,
    pub z_score: Option<f64>,
    pub relative_gap: Option<f64>,
    pub pass: bool,
    pub sample_count: u64,
    pub master_seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_wall_time_s: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub components: Vec<Component>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

/// z-score of `estimate − reference` against `se`. A zero standard error
/// yields `0` for an exact match and `±∞` otherwise.
pub fn z_score(estimate: f64, reference: f64, se: f64) -> f64 {
    let diff = estimate - reference;
    if se > 0.0 {
        diff / se
    } else if diff.abs() <= 1e-12 * reference.abs().max(f64::MIN_POSITIVE) || diff == 0.0 {
        0.0
    } else {
        diff.signum() * f64::INFINITY
    }
}

pub fn relative_gap(estimate: f64, reference: f64) -> Option<f64> {
    (reference != 0.0).then(|| ((estimate - reference) / reference).abs())
}

impl Report {
    /// Report comparing a Monte Carlo estimate with a reference value.
    #[allow(clippy::too_many_arguments)]
    pub fn compare(
        experiment_id: &str,
        parameters: Parameters,
        estimate: f64,
        standard_error: f64,
        reference_value: f64,
        reference_provenance: &str,
        sample_count: u64,
        master_seed: u64,
        thresholds: &Thresholds,
    ) -> Self {
        let z = z_score(estimate, reference_value, standard_error);
        let gap = relative_gap(estimate, reference_value);
        Self {
            experiment_id: experiment_id.to_string(),
            parameters,
            estimate,
            standard_error,
            reference_value,
            reference_provenance: reference_provenance.to_string(),
            z_score: Some(z),
            relative_gap: gap,
            pass: thresholds.judge(z, gap),
            sample_count,
            master_seed,
            elapsed_wall_time_s: None,
            components: Vec::new(),
            warnings: Vec::new(),
        }
    }
}
