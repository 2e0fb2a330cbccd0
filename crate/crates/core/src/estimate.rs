use serde::{Deserialize, Serialize};

use crate::ppsampler::ProcessModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Quadrature,
    PalmMc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct EstimateMeta {
    pub beta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ProcessModel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fading: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Asymptotic constant `lim θ^{1/β} P(SIR > θ)` with its uncertainty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantEstimate {
    pub value: f64,
    pub std_error: f64,
    pub bracket_low: f64,
    pub bracket_high: f64,
    pub method: Method,
    pub meta: EstimateMeta,
}

impl ConstantEstimate {
    /// `|a − b|` in units of the combined standard error.
    pub fn z_gap(&self, other: &ConstantEstimate) -> f64 {
        let se = self.std_error.hypot(other.std_error);
        (self.value - other.value).abs() / se.max(1e-300)
    }
}
