//! Density states and probability distributions, the anchors of localization.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::observable::{ClassObservable, HermObservable};
use crate::tolerance::Tolerances;
use crate::{Error, Result};

/// A Hermitian, positive-semidefinite, unit-trace matrix ρ.
///
/// Construction re-hermitizes the input, clips eigenvalues in
/// `[-rank_tol * λ_max, 0)` to the PSD cone and renormalizes the trace, so
/// that mildly noisy user input is accepted deterministically. Anything
/// worse is rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    dim: usize,
    matrix: DMatrix<Complex64>,
}

impl DensityState {
    pub fn new(matrix: DMatrix<Complex64>, tol: &Tolerances) -> Result<Self> {
        tol.validate()?;
        let (rows, cols) = matrix.shape();
        if rows != cols || rows == 0 {
            return Err(Error::invalid("state", format!("matrix must be square and nonempty, got {rows}x{cols}")));
        }
        let herm_dev = hermitian_deviation(&matrix);
        if herm_dev > tol.eq_tol {
            return Err(Error::invalid("state", format!("matrix is not Hermitian (deviation {herm_dev:.3e})")));
        }
        let herm = (&matrix + matrix.adjoint()).scale(0.5);
        let trace = herm.trace().re;
        if (trace - 1.0).abs() > tol.eq_tol {
            return Err(Error::invalid("state", format!("trace must be 1, got {trace}")));
        }

        let eig = herm.clone().symmetric_eigen();
        let lambda_max = eig.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
        let floor = -tol.rank_tol * lambda_max.max(1.0);
        let lambda_min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if lambda_min < floor {
            return Err(Error::invalid("state", format!("matrix is not positive semidefinite (λ_min = {lambda_min:.3e})")));
        }

        // Clip the tiny negatives and renormalize.
        let clipped: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
        let total: f64 = clipped.iter().sum();
        let v = &eig.eigenvectors;
        let mut rebuilt = DMatrix::<Complex64>::zeros(rows, rows);
        for (k, &l) in clipped.iter().enumerate() {
            if l > 0.0 {
                let col = v.column(k);
                let outer = &col * col.adjoint();
                rebuilt += outer.scale(l / total);
            }
        }
        Ok(DensityState { dim: rows, matrix: rebuilt })
    }

    /// ρ = I/d.
    pub fn maximally_mixed(dim: usize) -> Self {
        let matrix = DMatrix::<Complex64>::identity(dim, dim).scale(1.0 / dim as f64);
        DensityState { dim, matrix }
    }

    /// ρ = |ψ⟩⟨ψ| for a (normalized) ket.
    pub fn pure(ket: &[Complex64]) -> Result<Self> {
        let dim = ket.len();
        if dim == 0 {
            return Err(Error::invalid("state", "empty ket"));
        }
        let norm_sq: f64 = ket.iter().map(|c| c.norm_sqr()).sum();
        if norm_sq <= 0.0 {
            return Err(Error::invalid("state", "zero ket"));
        }
        let v = DVector::from_iterator(dim, ket.iter().cloned()).scale(1.0 / norm_sq.sqrt());
        let matrix = &v * v.adjoint();
        Ok(DensityState { dim, matrix })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// ⟨A⟩_ρ = Tr[Aρ].
    pub fn expect(&self, a: &HermObservable) -> Result<f64> {
        self.check_dim(a.dim())?;
        Ok((a.matrix() * &self.matrix).trace().re)
    }

    /// Tr[ABρ]; the real part is ⟨{A,B}/2⟩_ρ and the imaginary part ⟨[A,B]/2i⟩_ρ.
    pub fn expect_product(&self, a: &HermObservable, b: &HermObservable) -> Result<Complex64> {
        self.check_dim(a.dim())?;
        self.check_dim(b.dim())?;
        Ok((a.matrix() * b.matrix() * &self.matrix).trace())
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if dim != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, found: dim });
        }
        Ok(())
    }
}

/// A probability distribution over a finite set of labelled outcomes.
///
/// Weights in `[-prob_tol, 0)` are clipped to zero and the whole vector is
/// renormalized; a total further than `eq_tol` from 1 is rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbDist {
    outcomes: Vec<String>,
    weights: DVector<f64>,
}

impl ProbDist {
    pub fn new(outcomes: Vec<String>, weights: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        tol.validate()?;
        if outcomes.is_empty() || outcomes.len() != weights.len() {
            return Err(Error::invalid(
                "distribution",
                format!("{} outcomes with {} weights", outcomes.len(), weights.len()),
            ));
        }
        for (label, &w) in outcomes.iter().zip(weights.iter()) {
            if !w.is_finite() || w < -tol.prob_tol {
                return Err(Error::invalid("distribution", format!("weight of outcome {label:?} is {w}")));
            }
        }
        let total: f64 = weights.iter().map(|&w| w.max(0.0)).sum();
        if (total - 1.0).abs() > tol.eq_tol {
            return Err(Error::invalid("distribution", format!("weights sum to {total}, expected 1")));
        }
        let weights = DVector::from_iterator(weights.len(), weights.iter().map(|&w| w.max(0.0) / total));
        Ok(ProbDist { outcomes, weights })
    }

    pub fn uniform(outcomes: Vec<String>) -> Self {
        let n = outcomes.len();
        assert!(n > 0, "uniform distribution needs at least one outcome");
        ProbDist { outcomes, weights: DVector::from_element(n, 1.0 / n as f64) }
    }

    /// Convenience for unlabelled fixtures: outcomes "0", "1", ...
    pub fn from_weights(weights: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        let outcomes = (0..weights.len()).map(|i| i.to_string()).collect();
        ProbDist::new(outcomes, weights, tol)
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn weights(&self) -> &DVector<f64> {
        &self.weights
    }

    pub fn weight(&self, index: usize) -> f64 {
        self.weights[index]
    }

    /// ⟨f⟩_p = Σ_ω f(ω) p(ω).
    pub fn expect(&self, f: &ClassObservable) -> Result<f64> {
        self.check_outcomes(f.outcomes())?;
        Ok(self.weights.dot(f.values()))
    }

    pub(crate) fn check_outcomes(&self, outcomes: &[String]) -> Result<()> {
        if outcomes != self.outcomes.as_slice() {
            return Err(Error::OutcomeMismatch { context: "distribution" });
        }
        Ok(())
    }
}

pub(crate) fn hermitian_deviation(m: &DMatrix<Complex64>) -> f64 {
    (m - m.adjoint()).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observable::pauli_z;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn accepts_maximally_mixed() {
        let rho = DensityState::maximally_mixed(2);
        assert_eq!(rho.dim(), 2);
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = DMatrix::from_row_slice(2, 2, &[
            Complex64::new(0.5, 0.0), Complex64::new(0.3, 0.0),
            Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0),
        ]);
        assert!(DensityState::new(m, &tol()).is_err());
    }

    #[test]
    fn rejects_negative_eigenvalue() {
        let m = DMatrix::from_row_slice(2, 2, &[
            Complex64::new(1.1, 0.0), Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0), Complex64::new(-0.1, 0.0),
        ]);
        assert!(DensityState::new(m, &tol()).is_err());
    }

    #[test]
    fn clips_tiny_negative_and_renormalizes() {
        let eps = 5e-12;
        let m = DMatrix::from_row_slice(2, 2, &[
            Complex64::new(1.0 + eps, 0.0), Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0), Complex64::new(-eps, 0.0),
        ]);
        let rho = DensityState::new(m, &tol()).unwrap();
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-14);
        assert!(rho.matrix()[(1, 1)].re >= 0.0);
    }

    #[test]
    fn expectation_on_eigenstate() {
        let rho = DensityState::pure(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap();
        assert!((rho.expect(&pauli_z()).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn distribution_normalizes_and_checks() {
        let p = ProbDist::from_weights(alloc::vec![0.5, 0.5, 0.0], &tol()).unwrap();
        assert_eq!(p.len(), 3);
        assert!(ProbDist::from_weights(alloc::vec![0.5, 0.6], &tol()).is_err());
        assert!(ProbDist::from_weights(alloc::vec![1.5, -0.5], &tol()).is_err());
    }
}
