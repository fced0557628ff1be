//! State-dependent measurement errors and uncertainty relations.
//!
//! A quantum measurement (a POVM) together with a fixed density state induces
//! an adjoint pair of maps between the *localized* observable spaces: the
//! pullback, taking outcome functions to Hilbert-space operators, and the
//! pushforward, its metric adjoint under the state-induced inner products.
//! Partial inverses of these maps yield two error functionals,
//!
//! * ε  - the contraction of the localized norm under the pushforward, and
//! * ε̃  - the expansion under the partial inverse of the pullback, finite
//!   exactly on observables that are locally representable by the measurement,
//!
//! both of which obey a family of uncertainty relations bounding products of
//! errors from below by commutator and metric-defect terms. This crate builds
//! the whole finite-dimensional machinery (states, POVMs, stochastic channels,
//! quotient charts, partial inverses, error functionals, relation reports) and
//! ships independent brute-force oracles to cross-check every closed form.
//!
//! The crate is `no_std` (with `alloc`); all heavy lifting is dense `f64`
//! linear algebra at desk scale.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

use alloc::string::String;
use core::fmt;

pub mod errors;
pub mod joint;
pub mod localized;
pub mod measurement;
pub mod observable;
pub mod oracle;
pub mod partial_inverse;
pub mod relations;
pub mod state;
pub mod sweep;
pub mod tolerance;

pub use errors::{ErrorValue, ErrorlessVerdict, LocalizedChannel, LocalizedMeasurement};
pub use localized::{ClassicalSpace, QuantumSpace};
pub use measurement::{Povm, PushforwardResult, StochasticChannel};
pub use observable::{ClassObservable, HermObservable};
pub use relations::{RelationReport, Verdict};
pub use state::{DensityState, ProbDist};
pub use tolerance::Tolerances;

/// Errors raised by constructors and shape-checked operations.
///
/// Value-level failures (an observable that is not representable, a relation
/// precondition that does not hold on the given data) are reported through
/// verdicts and sentinels instead, so that reports can still be emitted.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Matrix or Hilbert-space dimensions disagree.
    DimMismatch { expected: usize, found: usize },
    /// Outcome label sets disagree.
    OutcomeMismatch { context: &'static str },
    /// A validated type rejected its input; the message names the invariant.
    Invalid { what: &'static str, message: String },
    /// A vector lies outside the range of the map a partial inverse came from.
    NotInRange { residual: f64 },
    /// The observable is not locally representable by the measurement.
    NotRepresentable { residual: f64 },
    /// A supplied function violates the representative constraint.
    ConstraintViolated { residual: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::OutcomeMismatch { context } => {
                write!(f, "outcome sets do not match in {context}")
            }
            Error::Invalid { what, message } => write!(f, "invalid {what}: {message}"),
            Error::NotInRange { residual } => {
                write!(f, "vector outside map range (relative residual {residual:.3e})")
            }
            Error::NotRepresentable { residual } => {
                write!(f, "observable not locally representable (residual {residual:.3e})")
            }
            Error::ConstraintViolated { residual } => {
                write!(f, "representative constraint violated (residual {residual:.3e})")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(what: &'static str, message: impl Into<String>) -> Self {
        Error::Invalid { what, message: message.into() }
    }
}
