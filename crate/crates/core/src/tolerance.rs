//! Numerical tolerances shared by every validated type and report.

use crate::{Error, Result};
use serde::Serialize;

/// Thresholds separating "numerically zero" from "genuinely nonzero".
///
/// The defaults leave double-precision conditioning headroom for the matrix
/// sizes this crate targets (dimensions up to a few tens).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Relative singular/eigenvalue cutoff for rank decisions.
    pub rank_tol: f64,
    /// Seminorm threshold below which two observables count as equal.
    pub eq_tol: f64,
    /// Probability weight below which an outcome counts as unsupported.
    pub prob_tol: f64,
    /// Negative slack permitted before an inequality counts as violated.
    pub ineq_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { rank_tol: 1e-10, eq_tol: 1e-8, prob_tol: 1e-12, ineq_tol: 1e-9 }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("rank_tol", self.rank_tol),
            ("eq_tol", self.eq_tol),
            ("prob_tol", self.prob_tol),
            ("ineq_tol", self.ineq_tol),
        ];
        for (name, value) in fields {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::invalid(
                    "tolerances",
                    alloc::format!("{name} must be strictly positive, got {value}"),
                ));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        Tolerances::default().validate().unwrap();
    }

    #[test]
    fn rejects_nonpositive() {
        let mut tol = Tolerances::default();
        tol.eq_tol = 0.0;
        assert!(tol.validate().is_err());
        tol.eq_tol = f64::NAN;
        assert!(tol.validate().is_err());
    }
}
