//! Pass/fail record for a single checked inequality or positivity claim.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// How one side of a check was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Quadrature,
    Mc,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Exact => "exact",
            Method::Quadrature => "quadrature",
            Method::Mc => "mc",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodTags {
    pub lhs: Method,
    pub rhs: Method,
}

impl MethodTags {
    pub const EXACT: MethodTags = MethodTags {
        lhs: Method::Exact,
        rhs: Method::Exact,
    };
}

impl fmt::Display for MethodTags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.lhs, self.rhs)
    }
}

/// `lhs <= rhs` checked with `gap = rhs - lhs` and `pass <=> gap >= -tolerance`.
///
/// Positivity certificates use `lhs = 0` and `rhs = ` the smallest eigenvalue
/// (or pairing), so the same invariant applies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub check: String,
    pub params: Value,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub method: MethodTags,
}

impl InequalityReport {
    pub fn new(check: impl Into<String>, params: Value, lhs: f64, rhs: f64, tolerance: f64, method: MethodTags) -> Self {
        Self::with_gap(check, params, lhs, rhs, rhs - lhs, tolerance, method)
    }

    /// Uses a separately computed `gap` (analytically `rhs - lhs`, but summed
    /// without cancellation).
    pub fn with_gap(
        check: impl Into<String>,
        params: Value,
        lhs: f64,
        rhs: f64,
        gap: f64,
        tolerance: f64,
        method: MethodTags,
    ) -> Self {
        InequalityReport {
            check: check.into(),
            params,
            lhs,
            rhs,
            gap,
            tolerance,
            pass: gap >= -tolerance,
            method,
        }
    }

    /// `0 <= value`, e.g. a minimum eigenvalue.
    pub fn nonnegative(check: impl Into<String>, params: Value, value: f64, tolerance: f64, method: MethodTags) -> Self {
        Self::new(check, params, 0.0, value, tolerance, method)
    }

    /// Swaps the two sides. Used to exercise the failure path of the harness.
    pub fn negated(&self) -> Self {
        let method = MethodTags {
            lhs: self.method.rhs,
            rhs: self.method.lhs,
        };
        Self::with_gap(
            self.check.clone(),
            self.params.clone(),
            self.rhs,
            self.lhs,
            -self.gap,
            self.tolerance,
            method,
        )
    }
}
