//! Quantum (Hermitian matrix) and classical (outcome function) observables.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::state::hermitian_deviation;
use crate::tolerance::Tolerances;
use crate::{Error, Result};

/// A self-adjoint operator on a finite-dimensional Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct HermObservable {
    dim: usize,
    matrix: DMatrix<Complex64>,
}

impl HermObservable {
    pub fn new(matrix: DMatrix<Complex64>, tol: &Tolerances) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols || rows == 0 {
            return Err(Error::invalid(
                "observable",
                format!("matrix must be square and nonempty, got {rows}x{cols}"),
            ));
        }
        let dev = hermitian_deviation(&matrix);
        let scale = matrix.norm().max(1.0);
        if dev > tol.eq_tol * scale {
            return Err(Error::invalid("observable", format!("matrix is not Hermitian (deviation {dev:.3e})")));
        }
        Ok(Self::from_matrix_unchecked((&matrix + matrix.adjoint()).scale(0.5)))
    }

    /// Wraps a matrix that is Hermitian by construction.
    pub(crate) fn from_matrix_unchecked(matrix: DMatrix<Complex64>) -> Self {
        HermObservable { dim: matrix.nrows(), matrix }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_matrix_unchecked(DMatrix::identity(dim, dim))
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_matrix_unchecked(DMatrix::zeros(dim, dim))
    }

    /// Real diagonal matrix.
    pub fn diagonal(entries: &[f64]) -> Self {
        let dim = entries.len();
        Self::from_matrix_unchecked(DMatrix::from_fn(dim, dim, |i, j| {
            if i == j { Complex64::new(entries[i], 0.0) } else { Complex64::new(0.0, 0.0) }
        }))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self::from_matrix_unchecked(self.matrix.scale(t))
    }
}

impl Add for &HermObservable {
    type Output = HermObservable;
    fn add(self, rhs: &HermObservable) -> HermObservable {
        assert_eq!(self.dim, rhs.dim, "observable dimensions differ");
        HermObservable::from_matrix_unchecked(&self.matrix + &rhs.matrix)
    }
}

impl Sub for &HermObservable {
    type Output = HermObservable;
    fn sub(self, rhs: &HermObservable) -> HermObservable {
        assert_eq!(self.dim, rhs.dim, "observable dimensions differ");
        HermObservable::from_matrix_unchecked(&self.matrix - &rhs.matrix)
    }
}

impl Mul<f64> for &HermObservable {
    type Output = HermObservable;
    fn mul(self, t: f64) -> HermObservable {
        self.scaled(t)
    }
}

/// A real function on a finite labelled sample space.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassObservable {
    outcomes: Vec<String>,
    values: DVector<f64>,
}

impl ClassObservable {
    pub fn new(outcomes: Vec<String>, values: Vec<f64>) -> Result<Self> {
        if outcomes.is_empty() || outcomes.len() != values.len() {
            return Err(Error::invalid(
                "classical observable",
                format!("{} outcomes with {} values", outcomes.len(), values.len()),
            ));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid("classical observable", format!("non-finite value {v}")));
        }
        Ok(ClassObservable { values: DVector::from_vec(values.clone()), outcomes })
    }

    /// Convenience for unlabelled fixtures: outcomes "0", "1", ...
    pub fn from_values(values: Vec<f64>) -> Self {
        let outcomes = (0..values.len()).map(|i| i.to_string()).collect();
        ClassObservable { values: DVector::from_vec(values), outcomes }
    }

    pub fn constant(outcomes: Vec<String>, value: f64) -> Self {
        let n = outcomes.len();
        ClassObservable { outcomes, values: DVector::from_element(n, value) }
    }

    pub(crate) fn from_vector(outcomes: Vec<String>, values: DVector<f64>) -> Self {
        ClassObservable { outcomes, values }
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

    pub fn values(&self) -> &DVector<f64> {
        &self.values
    }

    pub fn value(&self, index: usize) -> f64 {
        self.values[index]
    }

    /// Pointwise square, used by value-based error formulas.
    pub fn squared(&self) -> Self {
        ClassObservable {
            outcomes: self.outcomes.clone(),
            values: self.values.map(|v| v * v),
        }
    }

    pub fn scaled(&self, t: f64) -> Self {
        ClassObservable { outcomes: self.outcomes.clone(), values: &self.values * t }
    }

    pub(crate) fn check_outcomes(&self, outcomes: &[String]) -> Result<()> {
        if outcomes != self.outcomes.as_slice() {
            return Err(Error::OutcomeMismatch { context: "classical observable" });
        }
        Ok(())
    }
}

impl Add for &ClassObservable {
    type Output = ClassObservable;
    fn add(self, rhs: &ClassObservable) -> ClassObservable {
        assert_eq!(self.outcomes, rhs.outcomes, "outcome sets differ");
        ClassObservable { outcomes: self.outcomes.clone(), values: &self.values + &rhs.values }
    }
}

impl Sub for &ClassObservable {
    type Output = ClassObservable;
    fn sub(self, rhs: &ClassObservable) -> ClassObservable {
        assert_eq!(self.outcomes, rhs.outcomes, "outcome sets differ");
        ClassObservable { outcomes: self.outcomes.clone(), values: &self.values - &rhs.values }
    }
}

pub fn pauli_x() -> HermObservable {
    HermObservable::from_matrix_unchecked(DMatrix::from_row_slice(2, 2, &[
        Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0),
    ]))
}

pub fn pauli_y() -> HermObservable {
    HermObservable::from_matrix_unchecked(DMatrix::from_row_slice(2, 2, &[
        Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0),
        Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0),
    ]))
}

pub fn pauli_z() -> HermObservable {
    HermObservable::diagonal(&[1.0, -1.0])
}

/// Orthonormal real basis of the Hermitian d×d matrices under Tr[XY]:
/// the diagonal units, then (E_kl + E_lk)/√2 and i(E_kl - E_lk)/√2 for k < l.
pub(crate) fn hermitian_basis(dim: usize) -> Vec<DMatrix<Complex64>> {
    let mut basis = Vec::with_capacity(dim * dim);
    for k in 0..dim {
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        m[(k, k)] = Complex64::new(1.0, 0.0);
        basis.push(m);
    }
    let inv_sqrt2 = core::f64::consts::FRAC_1_SQRT_2;
    for k in 0..dim {
        for l in (k + 1)..dim {
            let mut re = DMatrix::<Complex64>::zeros(dim, dim);
            re[(k, l)] = Complex64::new(inv_sqrt2, 0.0);
            re[(l, k)] = Complex64::new(inv_sqrt2, 0.0);
            basis.push(re);
            let mut im = DMatrix::<Complex64>::zeros(dim, dim);
            im[(k, l)] = Complex64::new(0.0, inv_sqrt2);
            im[(l, k)] = Complex64::new(0.0, -inv_sqrt2);
            basis.push(im);
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermitian_basis_is_orthonormal() {
        for dim in 2..=4 {
            let basis = hermitian_basis(dim);
            assert_eq!(basis.len(), dim * dim);
            for (i, a) in basis.iter().enumerate() {
                for (j, b) in basis.iter().enumerate() {
                    let inner = (a * b).trace().re;
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((inner - expected).abs() < 1e-14, "entry ({i},{j}) = {inner}");
                }
            }
        }
    }

    #[test]
    fn paulis_square_to_identity() {
        for p in [pauli_x(), pauli_y(), pauli_z()] {
            let sq = p.matrix() * p.matrix();
            assert!((sq - DMatrix::<Complex64>::identity(2, 2)).norm() < 1e-15);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = DMatrix::from_row_slice(2, 2, &[
            Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0),
        ]);
        assert!(HermObservable::new(m, &Tolerances::default()).is_err());
    }
}
