use serde::{Deserialize, Serialize};

use crate::tensor::Point;
use crate::verify::config::{Check, ScenarioConfig};

pub const SCHEMA_VERSION: u32 = 1;

/// Smallest relative residual that counts as a non-trivial obstruction.
pub const WITNESS_FLOOR: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub check: Check,
    pub point_index: usize,
    pub point: Point,
    pub generator_index: usize,
    pub generator_seed: u64,
    pub coupling: f64,
    /// Relative deviation; absent for skipped records.
    pub deviation: Option<f64>,
    pub scale: Option<f64>,
    /// Relative size of the residual (or obstruction) itself.
    pub magnitude: Option<f64>,
    pub expected_nonzero: bool,
    pub verdict: Verdict,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub check: Check,
    pub records: usize,
    pub skipped: usize,
    pub failed: usize,
    pub max_deviation: Option<f64>,
    /// Largest magnitude among records expected to be non-zero.
    pub witness: Option<f64>,
    pub verdict: Verdict,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub checks: Vec<CheckSummary>,
    pub passed: bool,
    pub wall_time_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Versions {
    pub artifact: String,
    pub schema: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Conventions {
    pub signature: String,
    pub riemann: String,
    pub ricci: String,
    pub commutator: String,
    pub jet_order: u8,
    pub scale: String,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            signature: "(+,-,-,-)".into(),
            riemann: "R^r_{smn} = d_m G^r_{ns} - d_n G^r_{ms} + G^r_{ml} G^l_{ns} - G^r_{nl} G^l_{ms}".into(),
            ricci: "R_{sn} = R^r_{srn}".into(),
            commutator: "(D_b D_a - D_a D_b) L_r = R_{bars} L^s".into(),
            jet_order: crate::jet::MAX_ORDER,
            scale: "max |summand| before cancellation".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorInfo {
    pub index: usize,
    pub seed: u64,
}

/// The output of one scenario run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub versions: Versions,
    pub conventions: Conventions,
    /// The config as run, with the sampling region filled in.
    pub config: ScenarioConfig,
    pub chart: String,
    pub generators: Vec<GeneratorInfo>,
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl ResidualReport {
    pub fn passed(&self) -> bool {
        self.summary.passed
    }

    /// `0` when every check passed, `1` otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is always serializable")
    }

    /// The report with the wall-time zeroed, for reproducibility comparisons.
    pub fn without_wall_time(&self) -> ResidualReport {
        let mut r = self.clone();
        r.summary.wall_time_s = 0.0;
        r
    }

    pub fn summary_for(&self, check: Check) -> Option<&CheckSummary> {
        self.summary.checks.iter().find(|c| c.check == check)
    }

    pub fn records_for(&self, check: Check) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(move |r| r.check == check)
    }
}

/// Builds the per-check summary from sorted records.
pub(crate) fn summarize(check: Check, records: &[Record], tolerance: f64, needs_witness: bool) -> CheckSummary {
    let mine: Vec<&Record> = records.iter().filter(|r| r.check == check).collect();
    let skipped = mine.iter().filter(|r| r.verdict == Verdict::Skipped).count();
    let failed = mine.iter().filter(|r| r.verdict == Verdict::Fail).count();
    let max_deviation = nan_aware_max(mine.iter().filter_map(|r| r.deviation));
    let witness = nan_aware_max(mine.iter().filter(|r| r.expected_nonzero).filter_map(|r| r.magnitude));
    let mut notes = Vec::new();
    if mine.len() == skipped {
        notes.push("no record could be evaluated".to_string());
    }
    if failed > 0 {
        notes.push(format!("{failed} record(s) above tolerance {tolerance:e}"));
    }
    if needs_witness && !witness.is_some_and(|w| w >= WITNESS_FLOOR) {
        notes.push(format!("no expected-nonzero residual reached {WITNESS_FLOOR:e}"));
    }
    CheckSummary {
        check,
        records: mine.len(),
        skipped,
        failed,
        max_deviation,
        witness,
        verdict: if notes.is_empty() { Verdict::Pass } else { Verdict::Fail },
        note: (!notes.is_empty()).then(|| notes.join("; ")),
    }
}

fn nan_aware_max(values: impl Iterator<Item = f64>) -> Option<f64> {
    values.fold(None, |m, x| match m {
        None => Some(x),
        Some(m) if m.is_nan() || x.is_nan() => Some(f64::NAN),
        Some(m) => Some(m.max(x)),
    })
}
