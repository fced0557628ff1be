//! State-induced inner products and the localized (quotient) observable spaces.
//!
//! A state ρ defines the seminorm ‖A‖_ρ² = Tr[A†Aρ] on Hermitian matrices and
//! a distribution p defines ‖f‖_p² = Σ f²p on outcome functions. Quotienting
//! by the null directions gives the localized spaces; they are realized here
//! as orthonormal coordinate charts obtained from the eigendecomposition of
//! the Gram form of the seminorm over a fixed basis of the ambient space.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::observable::{hermitian_basis, ClassObservable, HermObservable};
use crate::state::{DensityState, ProbDist};
use crate::tolerance::Tolerances;
use crate::Result;

/// ⟨A,B⟩_ρ = Tr[{A,B}ρ]/2, the inner product dictated by the anti-commutator.
///
/// For Hermitian A, B this equals Re Tr[ABρ].
pub fn quantum_inner(a: &HermObservable, b: &HermObservable, rho: &DensityState) -> Result<f64> {
    Ok(rho.expect_product(a, b)?.re)
}

/// ‖A‖_ρ = √⟨A,A⟩_ρ.
pub fn quantum_norm(a: &HermObservable, rho: &DensityState) -> Result<f64> {
    Ok(quantum_inner(a, a, rho)?.max(0.0).sqrt())
}

/// ⟨f,g⟩_p = Σ_ω f(ω) g(ω) p(ω).
pub fn classical_inner(f: &ClassObservable, g: &ClassObservable, p: &ProbDist) -> Result<f64> {
    p.check_outcomes(f.outcomes())?;
    p.check_outcomes(g.outcomes())?;
    let mut sum = 0.0;
    for i in 0..p.len() {
        sum += f.value(i) * g.value(i) * p.weight(i);
    }
    Ok(sum)
}

/// ‖f‖_p = √⟨f,f⟩_p.
pub fn classical_norm(f: &ClassObservable, p: &ProbDist) -> Result<f64> {
    Ok(classical_inner(f, f, p)?.max(0.0).sqrt())
}

/// σ_ρ(A) = (‖A‖_ρ² - ⟨A⟩_ρ²)^{1/2}.
pub fn quantum_std_dev(a: &HermObservable, rho: &DensityState) -> Result<f64> {
    let norm_sq = quantum_inner(a, a, rho)?;
    let mean = rho.expect(a)?;
    Ok((norm_sq - mean * mean).max(0.0).sqrt())
}

/// σ_p(f) = (‖f‖_p² - ⟨f⟩_p²)^{1/2}.
pub fn classical_std_dev(f: &ClassObservable, p: &ProbDist) -> Result<f64> {
    let norm_sq = classical_inner(f, f, p)?;
    let mean = p.expect(f)?;
    Ok((norm_sq - mean * mean).max(0.0).sqrt())
}

/// A ∼_ρ B ⟺ ‖A - B‖_ρ ≤ eq_tol.
pub fn quantum_equivalent(
    a: &HermObservable,
    b: &HermObservable,
    rho: &DensityState,
    tol: &Tolerances,
) -> Result<bool> {
    Ok(quantum_norm(&(a - b), rho)? <= tol.eq_tol)
}

/// f ∼_p g ⟺ ‖f - g‖_p ≤ eq_tol.
pub fn classical_equivalent(
    f: &ClassObservable,
    g: &ClassObservable,
    p: &ProbDist,
    tol: &Tolerances,
) -> Result<bool> {
    Ok(classical_norm(&(f - g), p)? <= tol.eq_tol)
}

/// Orthonormal chart of the localized quantum observables over a state.
///
/// The basis elements are Hermitian representatives, pairwise orthonormal
/// under ⟨·,·⟩_ρ; coordinates against them capture the full quotient class,
/// so Σ coords² = ‖A‖_ρ² (Parseval on the quotient).
#[derive(Debug, Clone)]
pub struct QuantumSpace {
    anchor: DensityState,
    basis: Vec<HermObservable>,
    tol: Tolerances,
}

impl QuantumSpace {
    pub fn build(anchor: &DensityState, tol: &Tolerances) -> Result<Self> {
        tol.validate()?;
        let dim = anchor.dim();
        let ambient = hermitian_basis(dim);
        let n = ambient.len();
        let rho = anchor.matrix();

        // Gram form of the seminorm over the ambient basis.
        let mut gram = DMatrix::<f64>::zeros(n, n);
        for k in 0..n {
            for l in k..n {
                let val = (&ambient[k] * &ambient[l] * rho).trace().re;
                gram[(k, l)] = val;
                gram[(l, k)] = val;
            }
        }

        let eig = gram.symmetric_eigen();
        let lambda_max = eig.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
        let cutoff = tol.rank_tol * lambda_max;
        let mut basis = Vec::new();
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda <= cutoff {
                continue;
            }
            let coeffs = eig.eigenvectors.column(k);
            let mut rep = DMatrix::<Complex64>::zeros(dim, dim);
            for (j, b) in ambient.iter().enumerate() {
                rep += b.scale(coeffs[j]);
            }
            rep = rep.scale(1.0 / lambda.sqrt());
            let rep = (&rep + rep.adjoint()).scale(0.5);
            basis.push(HermObservable::from_matrix_unchecked(rep));
        }
        Ok(QuantumSpace { anchor: anchor.clone(), basis, tol: *tol })
    }

    pub fn anchor(&self) -> &DensityState {
        &self.anchor
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.anchor.dim() * self.anchor.dim()
    }

    pub fn basis(&self) -> &[HermObservable] {
        &self.basis
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// Coordinates of the class of A in the orthonormal chart.
    pub fn coords(&self, a: &HermObservable) -> Result<DVector<f64>> {
        self.anchor.check_dim(a.dim())?;
        let mut c = DVector::zeros(self.basis.len());
        for (i, e) in self.basis.iter().enumerate() {
            c[i] = quantum_inner(e, a, &self.anchor)?;
        }
        Ok(c)
    }

    /// The representative Σ c_i e_i of a coordinate vector.
    pub fn representative(&self, coords: &DVector<f64>) -> HermObservable {
        assert_eq!(coords.len(), self.basis.len(), "coordinate length mismatch");
        let dim = self.anchor.dim();
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for (i, e) in self.basis.iter().enumerate() {
            m += e.matrix().scale(coords[i]);
        }
        HermObservable::from_matrix_unchecked(m)
    }

    /// Projection of A onto the chart (an equivalent representative).
    pub fn project(&self, a: &HermObservable) -> Result<HermObservable> {
        Ok(self.representative(&self.coords(a)?))
    }
}

/// Orthonormal chart of the localized classical observables over a
/// distribution: scaled indicators of the supported outcomes.
#[derive(Debug, Clone)]
pub struct ClassicalSpace {
    anchor: ProbDist,
    support: Vec<usize>,
    tol: Tolerances,
}

impl ClassicalSpace {
    pub fn build(anchor: &ProbDist, tol: &Tolerances) -> Result<Self> {
        tol.validate()?;
        let support = (0..anchor.len()).filter(|&i| anchor.weight(i) > tol.prob_tol).collect();
        Ok(ClassicalSpace { anchor: anchor.clone(), support, tol: *tol })
    }

    pub fn anchor(&self) -> &ProbDist {
        &self.anchor
    }

    pub fn rank(&self) -> usize {
        self.support.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.anchor.len()
    }

    /// Indices of the supported outcomes, in outcome order.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// Basis element for the i-th supported outcome: indicator/√p.
    pub fn basis_element(&self, i: usize) -> ClassObservable {
        let idx = self.support[i];
        let mut values = DVector::zeros(self.anchor.len());
        values[idx] = 1.0 / self.anchor.weight(idx).sqrt();
        ClassObservable::from_vector(self.anchor.outcomes().to_vec(), values)
    }

    pub fn coords(&self, f: &ClassObservable) -> Result<DVector<f64>> {
        self.anchor.check_outcomes(f.outcomes())?;
        let mut c = DVector::zeros(self.support.len());
        for (i, &idx) in self.support.iter().enumerate() {
            c[i] = f.value(idx) * self.anchor.weight(idx).sqrt();
        }
        Ok(c)
    }

    /// Representative with value 0 on unsupported outcomes.
    pub fn representative(&self, coords: &DVector<f64>) -> ClassObservable {
        assert_eq!(coords.len(), self.support.len(), "coordinate length mismatch");
        let mut values = DVector::zeros(self.anchor.len());
        for (i, &idx) in self.support.iter().enumerate() {
            values[idx] = coords[i] / self.anchor.weight(idx).sqrt();
        }
        ClassObservable::from_vector(self.anchor.outcomes().to_vec(), values)
    }

    pub fn project(&self, f: &ClassObservable) -> Result<ClassObservable> {
        Ok(self.representative(&self.coords(f)?))
    }
}
