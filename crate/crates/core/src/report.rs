//! Structured pass/fail reports shared by the oracle and the suites.

use serde::{Deserialize, Serialize};

use crate::exact::{rat_string, Rational, Surd};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Real(f64),
    Exact(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    pub lhs: Quantity,
    pub rhs: Quantity,
    pub abs_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn real(label: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let err = (lhs - rhs).abs();
        let abs_error = if err.is_nan() { f64::INFINITY } else { err };
        Check {
            label: label.into(),
            lhs: Quantity::Real(lhs),
            rhs: Quantity::Real(rhs),
            abs_error,
            tolerance,
            pass: abs_error <= tolerance,
        }
    }

    /// Relative tolerance scaled by `|rhs|`.
    pub fn relative(label: impl Into<String>, lhs: f64, rhs: f64, rel: f64) -> Self {
        Check::real(label, lhs, rhs, rel * rhs.abs())
    }

    pub fn exact(label: impl Into<String>, lhs: &Surd, rhs: &Surd) -> Self {
        let pass = lhs == rhs;
        let mut abs_error = (lhs - rhs).to_f64().abs();
        if !pass && abs_error == 0.0 {
            abs_error = f64::MIN_POSITIVE;
        }
        Check {
            label: label.into(),
            lhs: Quantity::Exact(lhs.exact_string()),
            rhs: Quantity::Exact(rhs.exact_string()),
            abs_error,
            tolerance: 0.0,
            pass,
        }
    }

    pub fn exact_rational(label: impl Into<String>, lhs: &Rational, rhs: &Rational) -> Self {
        Check::exact(label, &Surd::rational(1, lhs.clone()), &Surd::rational(1, rhs.clone()))
    }

    pub fn exact_int(label: impl Into<String>, lhs: u128, rhs: u128) -> Self {
        let pass = lhs == rhs;
        Check {
            label: label.into(),
            lhs: Quantity::Exact(lhs.to_string()),
            rhs: Quantity::Exact(rhs.to_string()),
            abs_error: (lhs as f64 - rhs as f64).abs().max(if pass { 0.0 } else { 1.0 }),
            tolerance: 0.0,
            pass,
        }
    }

    /// A boolean condition, reported as `1` against `1`.
    pub fn condition(label: impl Into<String>, holds: bool, detail: &Rational) -> Self {
        Check {
            label: label.into(),
            lhs: Quantity::Exact(rat_string(detail)),
            rhs: Quantity::Exact(if holds { rat_string(detail) } else { "condition".into() }),
            abs_error: if holds { 0.0 } else { 1.0 },
            tolerance: 0.0,
            pass: holds,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub overall: bool,
    pub version: String,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| a.label.cmp(&b.label));
        let overall = checks.iter().all(|c| c.pass);
        VerificationReport { suite: suite.into(), checks, overall, version: env!("CARGO_PKG_VERSION").into() }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn merge(suite: impl Into<String>, parts: Vec<VerificationReport>) -> Self {
        VerificationReport::new(suite, parts.into_iter().flat_map(|r| r.checks).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn empty_report_passes() {
        let r = VerificationReport::new("x", vec![]);
        assert!(r.overall);
        assert!(r.checks.is_empty());
    }

    #[test]
    fn pass_iff_within_tolerance() {
        let c = Check::real("a", 1.0, 1.0 + 1e-9, 1e-8);
        assert!(c.pass && c.abs_error <= c.tolerance);
        let c = Check::real("b", f64::NAN, 1.0, 1.0);
        assert!(!c.pass && c.abs_error > c.tolerance);
        let c = Check::exact_rational("c", &rat(1, 3), &rat(1, 3));
        assert!(c.pass && c.abs_error == 0.0);
        let c = Check::exact_rational("d", &rat(1, 3), &rat(1, 4));
        assert!(!c.pass && c.abs_error > 0.0);
    }

    #[test]
    fn labels_sorted_and_json_stable() {
        let r = VerificationReport::new("s", vec![Check::real("b", 0.0, 0.0, 0.0), Check::real("a", 0.0, 0.0, 0.0)]);
        assert_eq!(r.checks[0].label, "a");
        let js = serde_json::to_string(&r).unwrap();
        let back: VerificationReport = serde_json::from_str(&js).unwrap();
        assert_eq!(back, r);
    }
}
