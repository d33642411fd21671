//! A uniform record for evaluated inequalities.

use serde::{Deserialize, Serialize};

/// Direction of an inequality between the two reported sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    /// The relation asserts `lhs >= rhs`.
    GreaterEq,
    /// The relation asserts `lhs <= rhs`.
    LessEq,
}

/// Outcome of evaluating one inequality.
///
/// `slack` is always oriented so that a non-negative value means the
/// relation holds: `lhs - rhs` for [`Sense::GreaterEq`] and `rhs - lhs` for
/// [`Sense::LessEq`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    pub lhs: f64,
    pub rhs: f64,
    pub sense: Sense,
    pub slack: f64,
    pub saturated: bool,
    pub tol: f64,
    /// Set when one side is undefined (e.g. a vanishing denominator); the
    /// numeric fields are then not meaningful and another check is authoritative.
    #[serde(default)]
    pub indeterminate: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs_se: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs_se: Option<f64>,
}

impl RelationReport {
    pub fn new(lhs: f64, rhs: f64, sense: Sense, tol: f64) -> Self {
        let slack = match sense {
            Sense::GreaterEq => lhs - rhs,
            Sense::LessEq => rhs - lhs,
        };
        Self {
            lhs,
            rhs,
            sense,
            slack,
            saturated: slack.abs() <= tol,
            tol,
            indeterminate: false,
            lhs_se: None,
            rhs_se: None,
        }
    }

    /// Report for a relation whose sides cannot be evaluated.
    pub fn indeterminate(sense: Sense, tol: f64) -> Self {
        Self {
            lhs: f64::NAN,
            rhs: f64::NAN,
            sense,
            slack: f64::NAN,
            saturated: false,
            tol,
            indeterminate: true,
            lhs_se: None,
            rhs_se: None,
        }
    }

    pub fn with_errors(mut self, lhs_se: f64, rhs_se: f64) -> Self {
        self.lhs_se = Some(lhs_se);
        self.rhs_se = Some(rhs_se);
        self
    }

    /// True when the relation holds to within `tol`. Indeterminate reports
    /// neither hold nor fail.
    pub fn holds(&self) -> bool {
        !self.indeterminate && self.slack >= -self.tol
    }

    pub fn violated(&self) -> bool {
        !self.indeterminate && self.slack < -self.tol
    }
}
