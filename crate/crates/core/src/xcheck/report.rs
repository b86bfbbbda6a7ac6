use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TolerancePolicy {
    /// pass iff `abs_err <= tolerance`
    Absolute,
    /// pass iff `rel_err <= tolerance`
    Relative,
    /// pass iff either error is within tolerance
    Either,
}

/// One comparison between a closed form (`rhs`) and an oracle (`lhs`).
///
/// JSON layout, one object per report:
///
/// ```text
/// { "name": str, "lhs": [re, im], "rhs": [re, im], "abs_err": num,
///   "rel_err": num, "tolerance": num, "policy": "absolute"|"relative"|"either",
///   "passed": bool, "informational": bool, "note": str|null }
/// ```
///
/// Non-finite numbers (a check whose oracle failed) serialize as `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    pub policy: TolerancePolicy,
    pub passed: bool,
    /// Informational reports never affect the suite's exit status.
    pub informational: bool,
    pub note: Option<String>,
}

impl CheckReport {
    pub fn compare(
        name: impl Into<String>,
        lhs: Complex64,
        rhs: Complex64,
        tolerance: f64,
        policy: TolerancePolicy,
    ) -> Self {
        let abs_err = (lhs - rhs).norm();
        let scale = rhs.norm();
        let rel_err = if scale > 0.0 {
            abs_err / scale
        } else if abs_err == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        let passed = match policy {
            TolerancePolicy::Absolute => abs_err <= tolerance,
            TolerancePolicy::Relative => rel_err <= tolerance,
            TolerancePolicy::Either => abs_err <= tolerance || rel_err <= tolerance,
        };
        Self {
            name: name.into(),
            lhs,
            rhs,
            abs_err,
            rel_err,
            tolerance,
            policy,
            passed,
            informational: false,
            note: None,
        }
    }

    pub fn real(
        name: impl Into<String>,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
        policy: TolerancePolicy,
    ) -> Self {
        Self::compare(name, lhs.into(), rhs.into(), tolerance, policy)
    }

    /// A check whose oracle or closed form could not be evaluated.
    pub fn failed(
        name: impl Into<String>,
        tolerance: f64,
        policy: TolerancePolicy,
        reason: impl fmt::Display,
    ) -> Self {
        let nan = Complex64::new(f64::NAN, f64::NAN);
        Self {
            name: name.into(),
            lhs: nan,
            rhs: nan,
            abs_err: f64::NAN,
            rel_err: f64::NAN,
            tolerance,
            policy,
            passed: false,
            informational: false,
            note: Some(reason.to_string()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn informational(mut self) -> Self {
        self.informational = true;
        self
    }

    /// Whether this report should count against the suite.
    pub fn is_failure(&self) -> bool {
        !self.passed && !self.informational
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match (self.passed, self.informational) {
            (true, _) => "PASS",
            (false, true) => "INFO",
            (false, false) => "FAIL",
        };
        write!(
            f,
            "{status} {} lhs={} rhs={} abs_err={:.3e} rel_err={:.3e} tol={:.1e} ({:?})",
            self.name,
            fmt_complex(self.lhs),
            fmt_complex(self.rhs),
            self.abs_err,
            self.rel_err,
            self.tolerance,
            self.policy,
        )?;
        if let Some(note) = &self.note {
            write!(f, " [{note}]")?;
        }
        Ok(())
    }
}

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:.12e}", z.re)
    } else {
        format!("{:.12e}{:+.12e}i", z.re, z.im)
    }
}
