//! Verification reports: per-check status with exact residual summaries.
//!
//! A hard identity failure is always `Fail`; a mismatch against a printed
//! value whose hard identities pass is `Discrepancy` and never downgrades
//! the report.

use serde::Serialize;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Discrepancy,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckEntry {
    pub check: String,
    pub status: CheckStatus,
    /// Max |rational coefficient| of the residual, exact, "0" on pass.
    pub residual_max: String,
    pub details: String,
}

#[derive(Clone, Debug, Serialize, Default)]
pub struct VerificationReport {
    pub label: String,
    pub operator_orders: Vec<(String, usize)>,
    pub checks: Vec<CheckEntry>,
    pub elapsed_ms: u128,
}

impl VerificationReport {
    pub fn new(label: impl Into<String>) -> Self {
        VerificationReport {
            label: label.into(),
            ..Default::default()
        }
    }

    pub fn record_order(&mut self, name: impl Into<String>, order: usize) {
        self.operator_orders.push((name.into(), order));
    }

    pub fn push(
        &mut self,
        check: impl Into<String>,
        status: CheckStatus,
        residual_max: impl Into<String>,
        details: impl Into<String>,
    ) {
        self.checks.push(CheckEntry {
            check: check.into(),
            status,
            residual_max: residual_max.into(),
            details: details.into(),
        });
    }

    pub fn push_exact(&mut self, check: impl Into<String>, ok: bool, residual: String, details: impl Into<String>) {
        self.push(
            check,
            if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            if ok { "0".to_string() } else { residual },
            details,
        );
    }

    /// True iff no hard failure occurred (discrepancies do not count).
    pub fn all_hard_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn merge(&mut self, other: VerificationReport) {
        for (n, o) in other.operator_orders {
            self.operator_orders.push((format!("{}/{}", other.label, n), o));
        }
        for mut c in other.checks {
            c.check = format!("{}/{}", other.label, c.check);
            self.checks.push(c);
        }
        self.elapsed_ms += other.elapsed_ms;
    }

    pub fn summary_lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| {
                format!(
                    "[{}] {} (residual {}){}",
                    match c.status {
                        CheckStatus::Pass => "PASS",
                        CheckStatus::Fail => "FAIL",
                        CheckStatus::Discrepancy => "DISCREPANCY",
                    },
                    c.check,
                    c.residual_max,
                    if c.details.is_empty() {
                        String::new()
                    } else {
                        format!(" - {}", c.details)
                    }
                )
            })
            .collect()
    }
}
