use std::collections::BTreeMap;

use serde::Serialize;

use crate::families::Provenance;

/// One measured residual next to the tolerance it is judged against.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualEntry {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// `[x_lo, x_hi]` over which the residual was measured.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interior: Option<(f64, f64)>,
}

/// Observed order between two grid levels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceEntry {
    pub levels: String,
    pub coarse_error: f64,
    pub fine_error: f64,
    pub observed_order: f64,
    pub declared_order: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub scenario: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
    pub residuals: Vec<ResidualEntry>,
    pub convergence: Vec<ConvergenceEntry>,
    /// Measured quantities that are reported without a pass/fail judgement.
    pub metrics: BTreeMap<String, f64>,
    /// Classifications such as a kernel element or a boundary leak; never failures.
    pub flags: Vec<String>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn new(scenario: impl Into<String>) -> Self {
        Self {
            scenario: scenario.into(),
            provenance: None,
            residuals: Vec::new(),
            convergence: Vec::new(),
            metrics: BTreeMap::new(),
            flags: Vec::new(),
            pass: true,
        }
    }

    pub fn with_provenance(mut self, p: Provenance) -> Self {
        self.provenance = Some(p);
        self
    }

    /// Records `value ≤ tolerance`; NaN fails.
    pub fn residual(&mut self, name: impl Into<String>, value: f64, tolerance: f64, interior: Option<(f64, f64)>) -> bool {
        let pass = value <= tolerance;
        self.pass &= pass;
        self.residuals.push(ResidualEntry { name: name.into(), value, tolerance, pass, interior });
        pass
    }

    /// Records `value ≥ threshold`, for checks that must discriminate.
    pub fn exceeds(&mut self, name: impl Into<String>, value: f64, threshold: f64) -> bool {
        let pass = value >= threshold;
        self.pass &= pass;
        self.residuals.push(ResidualEntry { name: name.into(), value, tolerance: threshold, pass, interior: None });
        pass
    }

    pub fn convergence(&mut self, entry: ConvergenceEntry) {
        self.pass &= entry.pass;
        self.convergence.push(entry);
    }

    pub fn metric(&mut self, name: impl Into<String>, value: f64) {
        self.metrics.insert(name.into(), value);
    }

    pub fn flag(&mut self, flag: impl Into<String>) {
        self.flags.push(flag.into());
    }

    /// Appends another report's entries, prefixing their names.
    pub fn absorb(&mut self, other: VerificationReport) {
        let prefix = other.scenario;
        for mut e in other.residuals {
            e.name = format!("{prefix}/{}", e.name);
            self.pass &= e.pass;
            self.residuals.push(e);
        }
        for mut e in other.convergence {
            e.levels = format!("{prefix}/{}", e.levels);
            self.pass &= e.pass;
            self.convergence.push(e);
        }
        for (k, v) in other.metrics {
            self.metrics.insert(format!("{prefix}/{k}"), v);
        }
        self.flags.extend(other.flags.into_iter().map(|f| format!("{prefix}/{f}")));
    }

    /// Merges reports in scenario order, so concurrent producers give one result.
    pub fn merge(scenario: impl Into<String>, mut reports: Vec<VerificationReport>) -> Self {
        reports.sort_by(|a, b| a.scenario.cmp(&b.scenario));
        let mut out = Self::new(scenario);
        for r in reports {
            out.absorb(r);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).unwrap_or_else(|e| format!("{{\"error\": \"{e}\"}}"))
    }
}
