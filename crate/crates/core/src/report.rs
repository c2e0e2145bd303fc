//! Machine-readable verification reports shared by all campaigns.

use serde::Serialize;
use serde_json::{Map, Value};

/// Report schema version; bumped on incompatible changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Undecided,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseResult {
    pub id: String,
    pub status: Status,
    /// Certified gap to the threshold (positive when passing).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub detail: Value,
}

impl CaseResult {
    pub fn new(id: impl Into<String>, status: Status, margin: Option<f64>) -> Self {
        CaseResult { id: id.into(), status, margin, detail: Value::Null }
    }

    pub fn with_detail(mut self, detail: impl Serialize) -> Self {
        self.detail = serde_json::to_value(detail).unwrap_or(Value::Null);
        self
    }

    /// Pass when `margin > 0` is certified, fail when `fail_certified`,
    /// undecided otherwise.
    pub fn from_margin(id: impl Into<String>, margin: f64, fail_certified: bool) -> Self {
        let status = if margin > 0.0 {
            Status::Pass
        } else if fail_certified {
            Status::Fail
        } else {
            Status::Undecided
        };
        CaseResult::new(id, status, Some(margin))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub campaign: String,
    pub params: Map<String, Value>,
    pub cases: Vec<CaseResult>,
    pub min_margin: Option<f64>,
    /// Ids of failed or undecided cases.
    pub witnesses: Vec<String>,
    pub status: Status,
    /// True only for full-size runs with every case passing.
    pub certifying: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_s: Option<f64>,
}

impl VerificationReport {
    pub fn new(campaign: impl Into<String>) -> Self {
        VerificationReport {
            schema: SCHEMA_VERSION,
            campaign: campaign.into(),
            params: Map::new(),
            cases: Vec::new(),
            min_margin: None,
            witnesses: Vec::new(),
            status: Status::Pass,
            certifying: true,
            wall_clock_s: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.params.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }

    pub fn set_param(&mut self, key: &str, value: impl Serialize) {
        self.params.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    pub fn push(&mut self, case: CaseResult) {
        self.cases.push(case);
        self.refresh();
    }

    pub fn extend(&mut self, cases: impl IntoIterator<Item = CaseResult>) {
        self.cases.extend(cases);
        self.refresh();
    }

    /// Folds another report in as cases prefixed by its campaign id.
    pub fn absorb(&mut self, other: VerificationReport) {
        let prefix = other.campaign.clone();
        for mut c in other.cases {
            c.id = format!("{prefix}/{}", c.id);
            self.cases.push(c);
        }
        self.params.insert(prefix, Value::Object(other.params));
        self.certifying &= other.certifying;
        self.refresh();
    }

    /// Marks a reduced-size run.
    pub fn non_certifying(mut self) -> Self {
        self.certifying = false;
        self
    }

    fn refresh(&mut self) {
        self.min_margin = self.cases.iter().filter_map(|c| c.margin).fold(None, |m, x| Some(m.map_or(x, |m: f64| m.min(x))));
        self.witnesses = self.cases.iter().filter(|c| c.status != Status::Pass).map(|c| c.id.clone()).collect();
        self.status = if self.cases.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else if self.cases.iter().any(|c| c.status == Status::Undecided) {
            Status::Undecided
        } else {
            Status::Pass
        };
        if self.status != Status::Pass {
            self.certifying = false;
        }
    }

    /// 0 for a pass, 1 for a failure, 2 when some case is undecided.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Undecided => 2,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per case plus a summary line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.cases {
            let m = c.margin.map(|m| format!(" margin={m:.3e}")).unwrap_or_default();
            out.push_str(&format!("{:?} {}{}\n", c.status, c.id, m).to_lowercase());
        }
        out.push_str(&format!(
            "{}: {:?}, {} cases, min margin {}, certifying={}\n",
            self.campaign,
            self.status,
            self.cases.len(),
            self.min_margin.map(|m| format!("{m:.3e}")).unwrap_or_else(|| "n/a".into()),
            self.certifying
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_folds_worst_case() {
        let mut r = VerificationReport::new("t");
        r.push(CaseResult::from_margin("a", 0.5, false));
        assert_eq!(r.exit_code(), 0);
        r.push(CaseResult::from_margin("b", -0.1, false));
        assert_eq!(r.exit_code(), 2);
        assert!(!r.certifying);
        r.push(CaseResult::from_margin("c", -0.1, true));
        assert_eq!(r.exit_code(), 1);
        assert_eq!(r.witnesses, vec!["b", "c"]);
        assert_eq!(r.min_margin, Some(-0.1));
    }
}
