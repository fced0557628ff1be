//! Quantum measurements (POVMs) and classical channels with their adjoints,
//! pullbacks, and pushforwards.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::localized::{ClassicalSpace, QuantumSpace};
use crate::observable::{ClassObservable, HermObservable};
use crate::state::{hermitian_deviation, DensityState, ProbDist};
use crate::tolerance::Tolerances;
use crate::{Error, Result};

/// Relative threshold for merging nearly degenerate eigenvalues into one
/// outcome of a projective measurement.
const EIGENVALUE_MERGE_REL: f64 = 1e-8;

/// A positive operator-valued measure: labelled effects E_ω ≥ 0 with Σ E_ω = I.
///
/// Outcomes may optionally carry real values, used by the value-based error
/// comparisons; nothing else depends on them.
#[derive(Debug, Clone)]
pub struct Povm {
    dim: usize,
    outcomes: Vec<String>,
    values: Option<Vec<f64>>,
    effects: Vec<DMatrix<Complex64>>,
}

impl Povm {
    pub fn new(outcomes: Vec<String>, effects: Vec<DMatrix<Complex64>>, tol: &Tolerances) -> Result<Self> {
        tol.validate()?;
        if outcomes.is_empty() || outcomes.len() != effects.len() {
            return Err(Error::invalid(
                "measurement",
                format!("{} outcomes with {} effects", outcomes.len(), effects.len()),
            ));
        }
        let dim = effects[0].nrows();
        let mut sum = DMatrix::<Complex64>::zeros(dim, dim);
        for (label, effect) in outcomes.iter().zip(effects.iter()) {
            if effect.nrows() != dim || effect.ncols() != dim {
                return Err(Error::invalid("measurement", format!("effect {label:?} is not {dim}x{dim}")));
            }
            if hermitian_deviation(effect) > tol.eq_tol {
                return Err(Error::invalid("measurement", format!("effect {label:?} is not Hermitian")));
            }
            let lambda_min = effect
                .clone()
                .symmetric_eigen()
                .eigenvalues
                .iter()
                .cloned()
                .fold(f64::INFINITY, f64::min);
            if lambda_min < -tol.eq_tol {
                return Err(Error::invalid(
                    "measurement",
                    format!("effect {label:?} is not positive semidefinite (λ_min = {lambda_min:.3e})"),
                ));
            }
            sum += effect;
        }
        let dev = (&sum - DMatrix::<Complex64>::identity(dim, dim)).norm();
        if dev > tol.eq_tol * dim as f64 {
            return Err(Error::invalid("measurement", format!("effects sum to identity only within {dev:.3e}")));
        }
        let effects = effects.into_iter().map(|e| (&e + e.adjoint()).scale(0.5)).collect();
        Ok(Povm { dim, outcomes, values: None, effects })
    }

    pub fn with_values(mut self, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.outcomes.len() {
            return Err(Error::invalid("measurement", "value list length differs from outcome count"));
        }
        self.values = Some(values);
        Ok(self)
    }

    /// The projective measurement of a Hermitian observable: outcomes are the
    /// distinct eigenvalues (merged within a relative threshold on the
    /// spectral radius), effects the corresponding spectral projectors.
    pub fn projective(a: &HermObservable) -> Self {
        let dim = a.dim();
        let eig = a.matrix().clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap());
        let radius = eig.eigenvalues.iter().fold(0.0_f64, |m, &l| m.max(l.abs()));
        let merge = EIGENVALUE_MERGE_REL * radius.max(1.0);

        let mut outcomes = Vec::new();
        let mut values = Vec::new();
        let mut effects: Vec<DMatrix<Complex64>> = Vec::new();
        let mut group: Vec<usize> = Vec::new();
        let mut flush = |group: &mut Vec<usize>| {
            if group.is_empty() {
                return;
            }
            let mean: f64 = group.iter().map(|&k| eig.eigenvalues[k]).sum::<f64>() / group.len() as f64;
            let mut proj = DMatrix::<Complex64>::zeros(dim, dim);
            for &k in group.iter() {
                let col = eig.eigenvectors.column(k);
                proj += &col * col.adjoint();
            }
            outcomes.push(format!("{mean}"));
            values.push(mean);
            effects.push((&proj + proj.adjoint()).scale(0.5));
            group.clear();
        };
        for &k in &order {
            if let Some(&last) = group.last() {
                if (eig.eigenvalues[last] - eig.eigenvalues[k]).abs() > merge {
                    flush(&mut group);
                }
            }
            group.push(k);
        }
        flush(&mut group);
        Povm { dim, outcomes, values: Some(values), effects }
    }

    /// The non-informative measurement with fixed output distribution p0:
    /// effects p0(ω)·I, so every state is mapped to p0.
    pub fn trivial(p0: &ProbDist, dim: usize) -> Self {
        let identity = DMatrix::<Complex64>::identity(dim, dim);
        let effects = (0..p0.len()).map(|i| identity.scale(p0.weight(i))).collect();
        Povm { dim, outcomes: p0.outcomes().to_vec(), values: None, effects }
    }

    pub fn dim(&self) -> usize {
        self.dim
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

    pub fn values(&self) -> Option<&[f64]> {
        self.values.as_deref()
    }

    /// The outcome values as a classical observable, when present.
    pub fn value_observable(&self) -> Option<ClassObservable> {
        self.values
            .as_ref()
            .map(|v| ClassObservable::from_vector(self.outcomes.clone(), DVector::from_vec(v.clone())))
    }

    pub fn effects(&self) -> &[DMatrix<Complex64>] {
        &self.effects
    }

    /// p(ω) = Tr[E_ω ρ].
    pub fn apply(&self, rho: &DensityState) -> Result<ProbDist> {
        rho.check_dim(self.dim)?;
        let weights: Vec<f64> = self.effects.iter().map(|e| (e * rho.matrix()).trace().re).collect();
        ProbDist::new(self.outcomes.clone(), weights, &Tolerances::default())
    }

    /// The adjoint M′f = Σ_ω f(ω) E_ω, characterised by ⟨M′f⟩_ρ = ⟨f⟩_{Mρ}.
    pub fn adjoint(&self, f: &ClassObservable) -> Result<HermObservable> {
        f.check_outcomes(&self.outcomes)?;
        let mut m = DMatrix::<Complex64>::zeros(self.dim, self.dim);
        for (i, e) in self.effects.iter().enumerate() {
            m += e.scale(f.value(i));
        }
        Ok(HermObservable::from_matrix_unchecked(m))
    }

    /// The pushforward of A over ρ by the discrete Radon-Nikodym quotient
    /// (M_{*ρ}A)(ω) = Tr[{E_ω, A}ρ] / (2 Tr[E_ω ρ]) on the supported outcomes;
    /// unsupported outcomes carry the value 0 by convention.
    pub fn pushforward(&self, rho: &DensityState, a: &HermObservable) -> Result<PushforwardResult> {
        rho.check_dim(self.dim)?;
        rho.check_dim(a.dim())?;
        let tol = Tolerances::default();
        let mut values = DVector::zeros(self.outcomes.len());
        let mut support = Vec::new();
        for (i, e) in self.effects.iter().enumerate() {
            let p = (e * rho.matrix()).trace().re;
            if p > tol.prob_tol {
                let numer = ((e * a.matrix() + a.matrix() * e) * rho.matrix()).trace().re;
                values[i] = numer / (2.0 * p);
                support.push(i);
            }
        }
        Ok(PushforwardResult {
            values: ClassObservable::from_vector(self.outcomes.clone(), values),
            support,
        })
    }

    /// The pullback of f over ρ: the adjoint M′f projected into the localized
    /// quantum chart over ρ.
    pub fn pullback(&self, space: &QuantumSpace, f: &ClassObservable) -> Result<HermObservable> {
        space.project(&self.adjoint(f)?)
    }
}

/// The pushforward of an observable: an outcome function defined on the
/// support of the output distribution.
#[derive(Debug, Clone)]
pub struct PushforwardResult {
    values: ClassObservable,
    support: Vec<usize>,
}

impl PushforwardResult {
    /// The pushforward as a classical observable, 0 off the support.
    pub fn values(&self) -> &ClassObservable {
        &self.values
    }

    /// Indices of the outcomes with probability above the cutoff.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn into_values(self) -> ClassObservable {
        self.values
    }
}

/// A classical measurement: a column-stochastic kernel K(ω′|ω) taking
/// distributions on the input outcomes to distributions on the output ones.
#[derive(Debug, Clone)]
pub struct StochasticChannel {
    in_outcomes: Vec<String>,
    out_outcomes: Vec<String>,
    /// kernel[(o, i)] = K(ω′_o | ω_i); every column sums to 1.
    kernel: DMatrix<f64>,
}

impl StochasticChannel {
    pub fn new(
        in_outcomes: Vec<String>,
        out_outcomes: Vec<String>,
        kernel: DMatrix<f64>,
        tol: &Tolerances,
    ) -> Result<Self> {
        tol.validate()?;
        if in_outcomes.is_empty() || out_outcomes.is_empty() {
            return Err(Error::invalid("channel", "outcome sets must be nonempty"));
        }
        if kernel.nrows() != out_outcomes.len() || kernel.ncols() != in_outcomes.len() {
            return Err(Error::invalid(
                "channel",
                format!(
                    "kernel is {}x{}, expected {}x{}",
                    kernel.nrows(),
                    kernel.ncols(),
                    out_outcomes.len(),
                    in_outcomes.len()
                ),
            ));
        }
        for i in 0..kernel.ncols() {
            let mut sum = 0.0;
            for o in 0..kernel.nrows() {
                let k = kernel[(o, i)];
                if !k.is_finite() || k < -tol.prob_tol {
                    return Err(Error::invalid(
                        "channel",
                        format!("kernel entry ({o},{i}) is {k}"),
                    ));
                }
                sum += k.max(0.0);
            }
            if (sum - 1.0).abs() > tol.eq_tol {
                return Err(Error::invalid("channel", format!("column {i} sums to {sum}, expected 1")));
            }
        }
        let kernel = kernel.map(|k| k.max(0.0));
        Ok(StochasticChannel { in_outcomes, out_outcomes, kernel })
    }

    pub fn identity(outcomes: Vec<String>) -> Self {
        let n = outcomes.len();
        StochasticChannel {
            in_outcomes: outcomes.clone(),
            out_outcomes: outcomes,
            kernel: DMatrix::identity(n, n),
        }
    }

    /// Binary symmetric channel with flip probability q on outcomes "0"/"1".
    pub fn binary_symmetric(q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::invalid("channel", format!("flip probability {q} outside [0,1]")));
        }
        let outcomes: Vec<String> = ["0", "1"].iter().map(|s| s.to_string()).collect();
        let kernel = DMatrix::from_row_slice(2, 2, &[1.0 - q, q, q, 1.0 - q]);
        StochasticChannel::new(outcomes.clone(), outcomes, kernel, &Tolerances::default())
    }

    /// The trivial channel with fixed output distribution q0.
    pub fn trivial(in_outcomes: Vec<String>, q0: &ProbDist) -> Self {
        let kernel = DMatrix::from_fn(q0.len(), in_outcomes.len(), |o, _| q0.weight(o));
        StochasticChannel { in_outcomes, out_outcomes: q0.outcomes().to_vec(), kernel }
    }

    pub fn in_outcomes(&self) -> &[String] {
        &self.in_outcomes
    }

    pub fn out_outcomes(&self) -> &[String] {
        &self.out_outcomes
    }

    pub fn kernel(&self) -> &DMatrix<f64> {
        &self.kernel
    }

    /// (Kp)(ω′) = Σ_ω K(ω′|ω) p(ω).
    pub fn apply(&self, p: &ProbDist) -> Result<ProbDist> {
        p.check_outcomes(&self.in_outcomes)?;
        let weights = &self.kernel * p.weights();
        ProbDist::new(
            self.out_outcomes.clone(),
            weights.iter().cloned().collect(),
            &Tolerances::default(),
        )
    }

    /// The adjoint (K′g)(ω) = Σ_ω′ K(ω′|ω) g(ω′).
    pub fn adjoint(&self, g: &ClassObservable) -> Result<ClassObservable> {
        g.check_outcomes(&self.out_outcomes)?;
        let values = self.kernel.transpose() * g.values();
        Ok(ClassObservable::from_vector(self.in_outcomes.clone(), values))
    }

    /// The pushforward (K_{*p}a)(ω′) = Σ_ω K(ω′|ω) p(ω) a(ω) / (Kp)(ω′) on the
    /// support of Kp; 0 elsewhere.
    pub fn pushforward(&self, p: &ProbDist, a: &ClassObservable) -> Result<PushforwardResult> {
        p.check_outcomes(&self.in_outcomes)?;
        a.check_outcomes(&self.in_outcomes)?;
        let tol = Tolerances::default();
        let out = &self.kernel * p.weights();
        let mut values = DVector::zeros(self.out_outcomes.len());
        let mut support = Vec::new();
        for o in 0..self.out_outcomes.len() {
            if out[o] > tol.prob_tol {
                let mut numer = 0.0;
                for i in 0..self.in_outcomes.len() {
                    numer += self.kernel[(o, i)] * p.weight(i) * a.value(i);
                }
                values[o] = numer / out[o];
                support.push(o);
            }
        }
        Ok(PushforwardResult {
            values: ClassObservable::from_vector(self.out_outcomes.clone(), values),
            support,
        })
    }

    /// The pullback of g over p: the adjoint projected onto the support of p.
    pub fn pullback(&self, space: &ClassicalSpace, g: &ClassObservable) -> Result<ClassObservable> {
        space.project(&self.adjoint(g)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localized::{classical_norm, quantum_norm};
    use crate::observable::{pauli_x, pauli_z};
    use alloc::vec;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn noisy_z(eta: f64) -> Povm {
        let id = DMatrix::<Complex64>::identity(2, 2);
        let up = (&id + pauli_z().matrix().scale(eta)).scale(0.5);
        let down = (&id - pauli_z().matrix().scale(eta)).scale(0.5);
        Povm::new(vec!["+".to_string(), "-".to_string()], vec![up, down], &tol()).unwrap()
    }

    #[test]
    fn projective_z_on_mixed_and_eigenstate() {
        let m = Povm::projective(&pauli_z());
        assert_eq!(m.len(), 2);
        let p = m.apply(&DensityState::maximally_mixed(2)).unwrap();
        assert!((p.weight(0) - 0.5).abs() < 1e-14 && (p.weight(1) - 0.5).abs() < 1e-14);

        let up = DensityState::pure(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap();
        let p = m.apply(&up).unwrap();
        // Outcomes sorted by descending eigenvalue, so +1 comes first.
        assert!((p.weight(0) - 1.0).abs() < 1e-14 && p.weight(1).abs() < 1e-14);
    }

    #[test]
    fn projective_merges_degenerate_spectrum() {
        let m = Povm::projective(&HermObservable::identity(3));
        assert_eq!(m.len(), 1);
        assert!((m.effects()[0].clone() - DMatrix::<Complex64>::identity(3, 3)).norm() < 1e-12);
    }

    #[test]
    fn projective_x_gives_half_projectors() {
        let m = Povm::projective(&pauli_x());
        let id = DMatrix::<Complex64>::identity(2, 2);
        let plus = (&id + pauli_x().matrix()).scale(0.5);
        let minus = (&id - pauli_x().matrix()).scale(0.5);
        assert!((m.effects()[0].clone() - plus).norm() < 1e-12);
        assert!((m.effects()[1].clone() - minus).norm() < 1e-12);
    }

    #[test]
    fn noisy_povm_distribution() {
        let m = noisy_z(0.5);
        let up = (DMatrix::<Complex64>::identity(2, 2) + pauli_z().matrix()).scale(0.5);
        let rho = DensityState::new(up, &tol()).unwrap();
        let p = m.apply(&rho).unwrap();
        assert!((p.weight(0) - 0.75).abs() < 1e-14);
        assert!((p.weight(1) - 0.25).abs() < 1e-14);
    }

    #[test]
    fn adjoint_of_constant_is_identity() {
        let m = noisy_z(0.5);
        let one = ClassObservable::constant(m.outcomes().to_vec(), 1.0);
        let a = m.adjoint(&one).unwrap();
        assert!((a.matrix().clone() - DMatrix::<Complex64>::identity(2, 2)).norm() < 1e-14);
    }

    #[test]
    fn adjoint_recovers_pauli_z() {
        let m = Povm::projective(&pauli_z());
        let id = m.value_observable().unwrap();
        let a = m.adjoint(&id).unwrap();
        assert!((a.matrix() - pauli_z().matrix()).norm() < 1e-12);

        let noisy = noisy_z(0.5);
        let f = ClassObservable::new(noisy.outcomes().to_vec(), vec![2.0, -2.0]).unwrap();
        let a = noisy.adjoint(&f).unwrap();
        assert!((a.matrix() - pauli_z().matrix()).norm() < 1e-14);
    }

    #[test]
    fn pushforward_examples() {
        let rho = DensityState::maximally_mixed(2);
        // Projective measurement of σ_z pushes σ_x to 0.
        let m = Povm::projective(&pauli_z());
        let pf = m.pushforward(&rho, &pauli_x()).unwrap();
        assert!(pf.values().values().norm() < 1e-14);

        // The noisy measurement pushes σ_z to ±η.
        let noisy = noisy_z(0.5);
        let pf = noisy.pushforward(&rho, &pauli_z()).unwrap();
        assert!((pf.values().value(0) - 0.5).abs() < 1e-14);
        assert!((pf.values().value(1) + 0.5).abs() < 1e-14);

        // Projective measurement of an observable pushes it to the identity
        // function on its spectrum, over any full-rank state.
        let a = &pauli_z().scaled(0.7) + &pauli_x().scaled(0.3);
        let proj = Povm::projective(&a);
        let pf = proj.pushforward(&rho, &a).unwrap();
        for (i, &v) in proj.values().unwrap().iter().enumerate() {
            assert!((pf.values().value(i) - v).abs() < 1e-12);
        }
    }

    #[test]
    fn trivial_measurement_is_constant() {
        let p0 = ProbDist::from_weights(vec![0.5, 0.5], &tol()).unwrap();
        let m = Povm::trivial(&p0, 2);
        let up = DensityState::pure(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap();
        let p = m.apply(&up).unwrap();
        assert!((p.weight(0) - 0.5).abs() < 1e-14);

        // Pushforward is the constant ⟨A⟩_ρ.
        let rho = DensityState::new(
            (DMatrix::<Complex64>::identity(2, 2) + pauli_z().matrix()).scale(0.5),
            &tol(),
        )
        .unwrap();
        let pf = m.pushforward(&rho, &pauli_z()).unwrap();
        assert!((pf.values().value(0) - 1.0).abs() < 1e-12);
        assert!((pf.values().value(1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pullback_non_expansive_witness() {
        let noisy = noisy_z(0.5);
        let rho = DensityState::maximally_mixed(2);
        let f = ClassObservable::new(noisy.outcomes().to_vec(), vec![2.0, -2.0]).unwrap();
        let p = noisy.apply(&rho).unwrap();
        let f_norm = classical_norm(&f, &p).unwrap();
        let a_norm = quantum_norm(&noisy.adjoint(&f).unwrap(), &rho).unwrap();
        assert!((f_norm - 2.0).abs() < 1e-14);
        assert!((a_norm - 1.0).abs() < 1e-14);
    }

    #[test]
    fn classical_channel_ops() {
        let tol = tol();
        let p = ProbDist::from_weights(vec![0.5, 0.5], &tol).unwrap();
        let k = StochasticChannel::binary_symmetric(0.25).unwrap();

        let out = k.apply(&p).unwrap();
        assert!((out.weight(0) - 0.5).abs() < 1e-14);

        let a = ClassObservable::from_values(vec![1.0, -1.0]);
        let pf = k.pushforward(&p, &a).unwrap();
        assert!((pf.values().value(0) - 0.5).abs() < 1e-14);
        assert!((pf.values().value(1) + 0.5).abs() < 1e-14);

        let g = ClassObservable::from_values(vec![2.0, -2.0]);
        let pb = k.adjoint(&g).unwrap();
        assert!((pb.value(0) - 1.0).abs() < 1e-14);
        assert!((pb.value(1) + 1.0).abs() < 1e-14);

        let id = StochasticChannel::identity(p.outcomes().to_vec());
        assert!((id.apply(&p).unwrap().weights() - p.weights()).norm() < 1e-15);
        assert_eq!(id.adjoint(&g).unwrap().values(), g.values());
        assert_eq!(id.pushforward(&p, &a).unwrap().values().values(), a.values());
    }

    #[test]
    fn rejects_bad_inputs() {
        // Non-PSD effect.
        let id = DMatrix::<Complex64>::identity(2, 2);
        let bad = pauli_z().matrix().clone();
        assert!(Povm::new(
            vec!["a".to_string(), "b".to_string()],
            vec![bad, &id - pauli_z().matrix()],
            &tol()
        )
        .is_err());
        // Effects not summing to identity.
        assert!(Povm::new(
            vec!["a".to_string(), "b".to_string()],
            vec![id.scale(0.5), id.scale(0.4)],
            &tol()
        )
        .is_err());
        // Non-stochastic kernel.
        let outcomes: Vec<String> = vec!["0".to_string(), "1".to_string()];
        let kernel = DMatrix::from_row_slice(2, 2, &[0.9, 0.2, 0.2, 0.8]);
        assert!(StochasticChannel::new(outcomes.clone(), outcomes, kernel, &tol()).is_err());
    }
}
