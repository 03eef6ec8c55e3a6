//! JSON and text renderings of [`AnalysisReport`]. Field names are part of
//! the command line interface and must stay stable.

use std::fmt::Write as _;

use pseq_core::AnalysisReport;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalanceJson {
    pub kind: String,
    pub exceptional: Option<u32>,
    pub t: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub p: u32,
    #[serde(rename = "N")]
    pub n: usize,
    pub mu: Vec<u64>,
    pub balance: BalanceJson,
    pub period_admissible: bool,
    pub itla: bool,
    pub first_failing_shift: Option<usize>,
    pub sum_mag_sq_is_one: bool,
    pub degenerate: bool,
    /// Only present when the FFT cross-check was requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fft_max_deviation: Option<f64>,
}

impl ReportJson {
    pub fn new(report: &AnalysisReport, fft_max_deviation: Option<f64>) -> Self {
        ReportJson {
            p: report.p,
            n: report.period,
            mu: report.profile.counts().to_vec(),
            balance: BalanceJson {
                kind: report.balance.kind().to_string(),
                exceptional: report.balance.exceptional(),
                t: report.balance.t(),
            },
            period_admissible: report.period_admissible(),
            itla: report.itla,
            first_failing_shift: report.first_failing_shift,
            sum_mag_sq_is_one: report.sum_mag_sq_is_one(),
            degenerate: report.degenerate,
            fft_max_deviation,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// One `key: value` line per JSON field, same content.
    pub fn to_text(&self) -> String {
        fn opt<T: ToString>(v: &Option<T>) -> String {
            v.as_ref().map_or_else(|| "none".to_string(), T::to_string)
        }
        let mu: Vec<String> = self.mu.iter().map(u64::to_string).collect();
        let mut out = String::new();
        let _ = writeln!(out, "p: {}", self.p);
        let _ = writeln!(out, "N: {}", self.n);
        let _ = writeln!(out, "mu: {}", mu.join(","));
        let _ = writeln!(out, "balance.kind: {}", self.balance.kind);
        let _ = writeln!(
            out,
            "balance.exceptional: {}",
            opt(&self.balance.exceptional)
        );
        let _ = writeln!(out, "balance.t: {}", opt(&self.balance.t));
        let _ = writeln!(out, "period_admissible: {}", self.period_admissible);
        let _ = writeln!(out, "itla: {}", self.itla);
        let _ = writeln!(
            out,
            "first_failing_shift: {}",
            opt(&self.first_failing_shift)
        );
        let _ = writeln!(out, "sum_mag_sq_is_one: {}", self.sum_mag_sq_is_one);
        let _ = writeln!(out, "degenerate: {}", self.degenerate);
        if let Some(d) = self.fft_max_deviation {
            let _ = writeln!(out, "fft_max_deviation: {d:e}");
        }
        out
    }
}
