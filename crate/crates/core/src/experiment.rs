//! Simulated experimental estimation of the average gate fidelity.
//!
//! Prepare d² states `ρ_k` that span operator space, send each through the
//! channel, reconstruct `E(ρ_k)` by finite-shot state tomography, expand each
//! basis unitary as `U_j = Σ_k α_jk ρ_k`, and plug the estimates into the
//! state-basis fidelity formula.
//!
//! Tomography measures every element of a fixed Hermitian orthonormal basis
//! `G_m` (see [`measurement_basis`]) in its eigenbasis with an equal number
//! of shots, and reconstructs `ρ̂ = Σ_m ⟨G_m⟩ G_m` by linear inversion, with
//! no positivity projection.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use crate::basis::{shift_clock_basis, UnitaryOperatorBasis};
use crate::channel::QuantumChannel;
use crate::error::{Error, Result};
use crate::fidelity::{average_gate_fidelity_from_states, check_gate};
use crate::haar::{derive_seed, substream, McEstimate};
use crate::linalg::{hermitian_eigendecomposition, solve, ComplexMatrix, HermitianEigen, PureState};

/// Smallest admissible Gram eigenvalue of a preparation set.
pub const GRAM_TOL: f64 = 1e-8;
/// Bound on `‖U_j − Σ_k α_jk ρ_k‖`.
pub const RECONSTRUCTION_TOL: f64 = 1e-8;

/// d² pure states whose projectors are linearly independent.
#[derive(Clone, Debug)]
pub struct PreparationBasis {
    dim: usize,
    states: Vec<PureState>,
}

impl PreparationBasis {
    pub fn new(dim: usize, states: Vec<PureState>) -> Result<Self> {
        if states.len() != dim * dim {
            return Err(Error::CountMismatch {
                expected: dim * dim,
                found: states.len(),
            });
        }
        if let Some(bad) = states.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        let pb = Self { dim, states };
        let min_eig = pb.gram_min_eigenvalue();
        if min_eig <= GRAM_TOL {
            return Err(Error::DegeneratePreparation(min_eig));
        }
        Ok(pb)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn projectors(&self) -> Vec<ComplexMatrix> {
        self.states.iter().map(PureState::projector).collect()
    }

    /// Smallest eigenvalue of `G_kl = tr(ρ_k ρ_l)`.
    pub fn gram_min_eigenvalue(&self) -> f64 {
        gram_min_eigenvalue(&self.states)
    }
}

fn gram_min_eigenvalue(states: &[PureState]) -> f64 {
    let n = states.len();
    let mut gram = ComplexMatrix::zeros(n, n);
    for (k, a) in states.iter().enumerate() {
        for (l, b) in states.iter().enumerate() {
            let overlap: Complex64 = a
                .amplitudes()
                .iter()
                .zip(b.amplitudes())
                .map(|(x, y)| x.conj() * y)
                .sum();
            gram[(k, l)] = Complex64::new(overlap.norm_sqr(), 0.0);
        }
    }
    hermitian_eigendecomposition(&gram)
        .map(|e| e.eigenvalues[0])
        .unwrap_or(f64::NEG_INFINITY)
}

/// `{|j⟩}`, then `(|j⟩+|k⟩)/√2` for `j<k`, then `(|j⟩+i|k⟩)/√2` for `j<k`, pairs in lexicographic order.
pub fn standard_preparation_basis(dim: usize) -> Result<PreparationBasis> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall { min: 2, found: dim });
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let pairs: Vec<(usize, usize)> = (0..dim)
        .flat_map(|j| ((j + 1)..dim).map(move |k| (j, k)))
        .collect();
    let superposition = |j: usize, k: usize, phase: Complex64| {
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[j] = Complex64::new(s, 0.0);
        v[k] = phase * s;
        PureState::normalized(v).expect("nonzero")
    };
    let mut states: Vec<PureState> = (0..dim).map(|j| PureState::basis(dim, j)).collect();
    states.extend(pairs.iter().map(|&(j, k)| superposition(j, k, Complex64::new(1.0, 0.0))));
    states.extend(pairs.iter().map(|&(j, k)| superposition(j, k, Complex64::i())));
    PreparationBasis::new(dim, states)
}

/// Coefficients with `U_j = Σ_k α_jk ρ_k`; row `j`, column `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaMatrix {
    dim: usize,
    entries: ComplexMatrix,
}

impl AlphaMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &ComplexMatrix {
        &self.entries
    }

    /// Largest Frobenius residual `‖U_j − Σ_k α_jk ρ_k‖` over `j`.
    pub fn reconstruction_residual(&self, ub: &UnitaryOperatorBasis, pb: &PreparationBasis) -> f64 {
        let rhos = pb.projectors();
        ub.elements()
            .iter()
            .enumerate()
            .map(|(j, u)| {
                let mut sum = ComplexMatrix::zeros(self.dim, self.dim);
                for (k, rho) in rhos.iter().enumerate() {
                    sum = &sum + &rho.scale(self.entries[(j, k)]);
                }
                u.frobenius_distance(&sum)
            })
            .fold(0.0, f64::max)
    }
}

/// Solves the d²×d² system whose columns are the vectorized `ρ_k`, once per `U_j`.
pub fn solve_alphas(ub: &UnitaryOperatorBasis, pb: &PreparationBasis) -> Result<AlphaMatrix> {
    let d = ub.dim();
    if pb.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: pb.dim(),
        });
    }
    let d2 = d * d;
    let rhos = pb.projectors();
    let mut system = ComplexMatrix::zeros(d2, d2);
    for (k, rho) in rhos.iter().enumerate() {
        for (r, &z) in rho.as_slice().iter().enumerate() {
            system[(r, k)] = z;
        }
    }
    let mut rhs = ComplexMatrix::zeros(d2, d2);
    for (j, u) in ub.elements().iter().enumerate() {
        for (r, &z) in u.as_slice().iter().enumerate() {
            rhs[(r, j)] = z;
        }
    }
    let solution = solve(&system, &rhs)?;
    let alphas = AlphaMatrix {
        dim: d,
        entries: solution.transpose(),
    };
    let residual = alphas.reconstruction_residual(ub, pb);
    if residual >= RECONSTRUCTION_TOL {
        return Err(Error::Singular);
    }
    Ok(alphas)
}

/// Hermitian orthonormal operator basis used for tomography.
///
/// Order: `I/√d`; symmetric `(|j⟩⟨k| + |k⟩⟨j|)/√2` for `j<k`; antisymmetric
/// `(−i|j⟩⟨k| + i|k⟩⟨j|)/√2` for `j<k`; diagonal
/// `(Σ_{i<l} |i⟩⟨i| − l|l⟩⟨l|)/√(l(l+1))` for `l = 1..d−1`.
pub fn measurement_basis(dim: usize) -> Vec<ComplexMatrix> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let pairs: Vec<(usize, usize)> = (0..dim)
        .flat_map(|j| ((j + 1)..dim).map(move |k| (j, k)))
        .collect();
    let mut out = vec![ComplexMatrix::identity(dim).scale_real(1.0 / (dim as f64).sqrt())];
    for &(j, k) in &pairs {
        let mut m = ComplexMatrix::zeros(dim, dim);
        m[(j, k)] = Complex64::new(s, 0.0);
        m[(k, j)] = Complex64::new(s, 0.0);
        out.push(m);
    }
    for &(j, k) in &pairs {
        let mut m = ComplexMatrix::zeros(dim, dim);
        m[(j, k)] = Complex64::new(0.0, -s);
        m[(k, j)] = Complex64::new(0.0, s);
        out.push(m);
    }
    for l in 1..dim {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut m = ComplexMatrix::zeros(dim, dim);
        for i in 0..l {
            m[(i, i)] = Complex64::new(norm, 0.0);
        }
        m[(l, l)] = Complex64::new(-(l as f64) * norm, 0.0);
        out.push(m);
    }
    out
}

/// How outcome frequencies are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shots {
    /// Exact Born probabilities; the infinite-shot limit.
    Exact,
    /// This many projective measurements per setting.
    Finite(u64),
}

impl Shots {
    fn validate(self) -> Result<Self> {
        match self {
            Shots::Finite(0) => Err(Error::NoSamples),
            s => Ok(s),
        }
    }
}

/// Reconstructed `E(ρ_k)`, one per preparation state.
#[derive(Clone, Debug)]
pub struct TomographyResult {
    pub estimates: Vec<ComplexMatrix>,
    pub shots_per_setting: Shots,
    pub seed: u64,
}

struct Tomographer {
    dim: usize,
    basis: Vec<ComplexMatrix>,
    /// Eigensystems of `basis[1..]`.
    settings: Vec<HermitianEigen>,
}

impl Tomographer {
    fn new(dim: usize) -> Self {
        let basis = measurement_basis(dim);
        let settings = basis[1..]
            .iter()
            .map(|g| hermitian_eigendecomposition(g).expect("Hermitian by construction"))
            .collect();
        Self { dim, basis, settings }
    }

    fn reconstruct(&self, state: &ComplexMatrix, shots: Shots, rng: &mut impl Rng) -> ComplexMatrix {
        let d = self.dim;
        // ⟨I/√d⟩ = 1/√d for any unit-trace state; never sampled
        let mut estimate = self.basis[0].scale_real(1.0 / (d as f64).sqrt());
        for (g, eig) in self.basis[1..].iter().zip(&self.settings) {
            let probs: Vec<f64> = (0..d)
                .map(|a| {
                    let v = eig.eigenvectors.column(a);
                    let sv = state.apply(&v);
                    v.iter().zip(&sv).map(|(x, y)| x.conj() * y).sum::<Complex64>().re.max(0.0)
                })
                .collect();
            let total: f64 = probs.iter().sum();
            let freqs: Vec<f64> = match shots {
                Shots::Exact => probs.iter().map(|p| p / total).collect(),
                Shots::Finite(n) => multinomial(n, &probs, total, rng)
                    .into_iter()
                    .map(|c| c as f64 / n as f64)
                    .collect(),
            };
            let expectation: f64 = eig.eigenvalues.iter().zip(&freqs).map(|(l, f)| l * f).sum();
            estimate = &estimate + &g.scale_real(expectation);
        }
        estimate
    }
}

/// Sequential conditional binomials.
fn multinomial(n: u64, weights: &[f64], total: f64, rng: &mut impl Rng) -> Vec<u64> {
    let mut counts = vec![0; weights.len()];
    let mut remaining = n;
    let mut mass = total;
    for (a, &w) in weights.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if a + 1 == weights.len() {
            counts[a] = remaining;
            break;
        }
        let p = if mass > 0.0 { (w / mass).clamp(0.0, 1.0) } else { 0.0 };
        let c = Binomial::new(remaining, p).expect("p in [0, 1]").sample(rng);
        counts[a] = c;
        remaining -= c;
        mass -= w;
    }
    counts
}

/// Finite-shot tomography of `E(ρ_k)` for every preparation state.
///
/// State `k` draws from `substream(seed, k)`.
pub fn simulate_tomography(
    channel: &QuantumChannel,
    pb: &PreparationBasis,
    shots: Shots,
    seed: u64,
) -> Result<TomographyResult> {
    let shots = shots.validate()?;
    if pb.dim() != channel.dim() {
        return Err(Error::DimensionMismatch {
            expected: channel.dim(),
            found: pb.dim(),
        });
    }
    let tomographer = Tomographer::new(channel.dim());
    let estimates = run_tomography(&tomographer, channel, pb, shots, seed)?;
    Ok(TomographyResult {
        estimates,
        shots_per_setting: shots,
        seed,
    })
}

fn run_tomography(
    tomographer: &Tomographer,
    channel: &QuantumChannel,
    pb: &PreparationBasis,
    shots: Shots,
    seed: u64,
) -> Result<Vec<ComplexMatrix>> {
    pb.states()
        .par_iter()
        .enumerate()
        .map(|(k, state)| {
            let output = channel.apply_operator(&state.projector())?;
            Ok(tomographer.reconstruct(&output, shots, &mut substream(seed, k as u64)))
        })
        .collect()
}

/// Fidelity estimate over `repeats` independent tomography runs, using the
/// shift/clock basis and [`standard_preparation_basis`].
///
/// Repeat `r` runs tomography with seed `derive_seed(seed, r)`.
pub fn estimate_fidelity_experiment(
    channel: &QuantumChannel,
    gate: &ComplexMatrix,
    shots: Shots,
    seed: u64,
    repeats: u64,
) -> Result<McEstimate> {
    let d = channel.dim();
    let ub = shift_clock_basis(d)?;
    let pb = standard_preparation_basis(d)?;
    estimate_fidelity_experiment_with(channel, gate, &ub, &pb, shots, seed, repeats)
}

/// [`estimate_fidelity_experiment`] with caller-chosen bases.
pub fn estimate_fidelity_experiment_with(
    channel: &QuantumChannel,
    gate: &ComplexMatrix,
    ub: &UnitaryOperatorBasis,
    pb: &PreparationBasis,
    shots: Shots,
    seed: u64,
    repeats: u64,
) -> Result<McEstimate> {
    check_gate(channel.dim(), gate)?;
    let shots = shots.validate()?;
    if repeats == 0 {
        return Err(Error::NoSamples);
    }
    if pb.dim() != channel.dim() {
        return Err(Error::DimensionMismatch {
            expected: channel.dim(),
            found: pb.dim(),
        });
    }
    let alphas = solve_alphas(ub, pb)?;
    let tomographer = Tomographer::new(channel.dim());
    let values: Vec<f64> = (0..repeats)
        .into_par_iter()
        .map(|r| {
            let outputs = run_tomography(&tomographer, channel, pb, shots, derive_seed(seed, r))?;
            Ok(average_gate_fidelity_from_states(&outputs, &alphas, gate, ub)?.value)
        })
        .collect::<Result<_>>()?;
    McEstimate::from_samples(&values, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{depolarizing, random_channel};
    use crate::fidelity::average_gate_fidelity;
    use crate::haar::haar_unitary;
    use crate::linalg::{hs_inner, DensityMatrix};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn qubit_preparation_states() {
        let pb = standard_preparation_basis(2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expected = [
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(s, 0.0), c(s, 0.0)],
            vec![c(s, 0.0), c(0.0, s)],
        ];
        for (state, e) in pb.states().iter().zip(&expected) {
            for (a, b) in state.amplitudes().iter().zip(e) {
                assert!((a - b).norm() < 1e-15);
            }
        }
        assert!(pb.gram_min_eigenvalue() > GRAM_TOL);
    }

    #[test]
    fn preparation_set_sizes() {
        for d in 2..=6 {
            let pb = standard_preparation_basis(d).unwrap();
            assert_eq!(pb.states().len(), d * d);
            assert!(pb.gram_min_eigenvalue() > GRAM_TOL, "d = {d}");
        }
        assert!(matches!(standard_preparation_basis(1), Err(Error::DimensionTooSmall { .. })));
    }

    #[test]
    fn real_superpositions_alone_are_rank_deficient() {
        // {|j⟩} ∪ {(|j⟩ ± |k⟩)/√2} only spans real-symmetric operators
        let d = 3;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut states: Vec<PureState> = (0..d).map(|j| PureState::basis(d, j)).collect();
        for (j, k, sign) in [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0), (0, 1, -1.0), (0, 2, -1.0), (1, 2, -1.0)] {
            let mut v = vec![c(0.0, 0.0); d];
            v[j] = c(s, 0.0);
            v[k] = c(sign * s, 0.0);
            states.push(PureState::normalized(v).unwrap());
        }
        assert!(matches!(
            PreparationBasis::new(d, states),
            Err(Error::DegeneratePreparation(_))
        ));
    }

    #[test]
    fn qubit_alphas() {
        let ub = shift_clock_basis(2).unwrap();
        let pb = standard_preparation_basis(2).unwrap();
        let alphas = solve_alphas(&ub, &pb).unwrap();
        let a = alphas.entries();
        let identity = [1.0, 1.0, 0.0, 0.0];
        let x = [-1.0, -1.0, 2.0, 0.0];
        for k in 0..4 {
            assert!((a[(0, k)] - identity[k]).norm() < 1e-12);
            // X is element j = 2 (k=1, l=0) of the shift/clock order
            assert!((a[(2, k)] - x[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn alphas_reconstruct_random_bases() {
        let pb = standard_preparation_basis(3).unwrap();
        for seed in 0..4 {
            let v = haar_unitary(3, &mut substream(seed, 0));
            let ub = shift_clock_basis(3).unwrap().conjugated(&v).unwrap();
            let alphas = solve_alphas(&ub, &pb).unwrap();
            assert!(alphas.reconstruction_residual(&ub, &pb) < RECONSTRUCTION_TOL);
        }
    }

    #[test]
    fn measurement_basis_is_orthonormal_and_hermitian() {
        for d in 2..=5 {
            let g = measurement_basis(d);
            assert_eq!(g.len(), d * d);
            for (i, a) in g.iter().enumerate() {
                assert!(a.hermiticity_error() == 0.0);
                for (j, b) in g.iter().enumerate() {
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((hs_inner(a, b).unwrap() - expected).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn exact_tomography_is_exact() {
        let ch = random_channel(3, 4, 2).unwrap();
        let pb = standard_preparation_basis(3).unwrap();
        let result = simulate_tomography(&ch, &pb, Shots::Exact, 0).unwrap();
        for (est, state) in result.estimates.iter().zip(pb.states()) {
            let exact = ch.apply(&state.density_matrix()).unwrap();
            assert!(est.max_abs_diff(exact.matrix()) < 1e-10);
        }
    }

    #[test]
    fn finite_shot_estimates_are_close_and_normalized() {
        let ch = QuantumChannel::identity(2);
        let pb = standard_preparation_basis(2).unwrap();
        let result = simulate_tomography(&ch, &pb, Shots::Finite(10_000), 5).unwrap();
        let rho0 = pb.states()[0].projector();
        assert!(result.estimates[0].frobenius_distance(&rho0) < 0.1);
        for est in &result.estimates {
            assert!(est.hermiticity_error() < 1e-12);
            assert!((est.trace() - 1.0).norm() < 1e-12);
        }
        let again = simulate_tomography(&ch, &pb, Shots::Finite(10_000), 5).unwrap();
        assert_eq!(result.estimates, again.estimates);
    }

    #[test]
    fn exact_outputs_reproduce_gate_fidelity() {
        for d in 2..=4 {
            let ub = shift_clock_basis(d).unwrap();
            let pb = standard_preparation_basis(d).unwrap();
            let alphas = solve_alphas(&ub, &pb).unwrap();
            for seed in 0..3 {
                let ch = random_channel(d, d, seed).unwrap();
                let gate = haar_unitary(d, &mut substream(seed, 7));
                let outputs: Vec<ComplexMatrix> = pb
                    .states()
                    .iter()
                    .map(|s| ch.apply(&s.density_matrix()).unwrap().into_matrix())
                    .collect();
                let from_states = average_gate_fidelity_from_states(&outputs, &alphas, &gate, &ub).unwrap();
                let formula = average_gate_fidelity(&ch, &gate, &ub).unwrap();
                assert!((from_states.value - formula.value).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn from_states_landmarks() {
        let ub = shift_clock_basis(2).unwrap();
        let pb = standard_preparation_basis(2).unwrap();
        let alphas = solve_alphas(&ub, &pb).unwrap();
        let i2 = ComplexMatrix::identity(2);
        let id_out = pb.projectors();
        let v = average_gate_fidelity_from_states(&id_out, &alphas, &i2, &ub).unwrap();
        assert!((v.value - 1.0).abs() < 1e-12);
        let dep = depolarizing(2, 0.1).unwrap();
        let outs: Vec<ComplexMatrix> = id_out.iter().map(|r| dep.apply_operator(r).unwrap()).collect();
        let v = average_gate_fidelity_from_states(&outs, &alphas, &i2, &ub).unwrap();
        assert!((v.value - 0.95).abs() < 1e-10);
        assert!(matches!(
            average_gate_fidelity_from_states(&outs[..3], &alphas, &i2, &ub),
            Err(Error::CountMismatch { .. })
        ));
    }

    #[test]
    fn alphas_do_not_depend_on_channel() {
        // solve_alphas has no channel argument; the estimator must reuse the same matrix
        let ub = shift_clock_basis(3).unwrap();
        let pb = standard_preparation_basis(3).unwrap();
        assert_eq!(solve_alphas(&ub, &pb).unwrap(), solve_alphas(&ub, &pb).unwrap());
    }

    #[test]
    fn experiment_exact_mode_identity() {
        let est = estimate_fidelity_experiment(
            &QuantumChannel::identity(2),
            &ComplexMatrix::identity(2),
            Shots::Exact,
            1,
            3,
        )
        .unwrap();
        assert!((est.mean - 1.0).abs() < 1e-10);
    }

    #[test]
    fn experiment_depolarizing_estimate() {
        let est = estimate_fidelity_experiment(
            &depolarizing(2, 0.1).unwrap(),
            &ComplexMatrix::identity(2),
            Shots::Finite(10_000),
            7,
            20,
        )
        .unwrap();
        assert!(est.covers(0.95, 5.0, 1e-10), "{est:?}");
    }

    #[test]
    fn experiment_is_unbiased_on_random_qutrit_channel() {
        let ch = random_channel(3, 3, 19).unwrap();
        let gate = haar_unitary(3, &mut substream(19, 1));
        let exact = average_gate_fidelity(&ch, &gate, &shift_clock_basis(3).unwrap()).unwrap().value;
        let est = estimate_fidelity_experiment(&ch, &gate, Shots::Finite(2_000), 3, 40).unwrap();
        assert!((est.mean - exact).abs() < 3.0 * est.std_error, "{est:?} vs {exact}");
    }

    #[test]
    fn zero_shots_and_repeats_rejected() {
        let ch = QuantumChannel::identity(2);
        let i2 = ComplexMatrix::identity(2);
        assert!(matches!(
            estimate_fidelity_experiment(&ch, &i2, Shots::Finite(0), 0, 1),
            Err(Error::NoSamples)
        ));
        assert!(matches!(
            estimate_fidelity_experiment(&ch, &i2, Shots::Exact, 0, 0),
            Err(Error::NoSamples)
        ));
    }

    #[test]
    fn estimates_may_be_non_positive() {
        // low shot counts on a pure output leave the PSD cone regularly
        let ch = QuantumChannel::identity(3);
        let pb = standard_preparation_basis(3).unwrap();
        let result = simulate_tomography(&ch, &pb, Shots::Finite(10), 1).unwrap();
        let any_negative = result
            .estimates
            .iter()
            .any(|e| DensityMatrix::new(e.clone()).is_err());
        assert!(any_negative);
    }
}
