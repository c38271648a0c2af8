//! Typed command outputs. Every report echoes the fully resolved inputs
//! (significance level, tails, targets) so defaulted values are always
//! visible in the output, and every report round-trips through JSON.

use serde::{Deserialize, Serialize};

use sensan::sensitiveness::MesAtN;
use sensan::{EffectSize, SensitivenessResult, TestSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub spec: TestSpec,
    pub target: EffectSize,
    pub result: SensitivenessResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MesReport {
    pub spec: TestSpec,
    pub result: MesAtN,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosthocReport {
    pub n_actual: u64,
    pub n_min: u64,
    /// 100 * (n_actual / n_min - 1); positive means over-sensitive.
    pub sensitiveness_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerReport {
    pub spec: TestSpec,
    pub population_es: EffectSize,
    /// Target power when solving for N, absent when evaluating at a given N.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub target_power: Option<f64>,
    pub n: u64,
    pub power: f64,
}
