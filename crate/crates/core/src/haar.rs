//! Haar-measure sampling and the Monte Carlo oracles built on it.
//!
//! # Random streams
//!
//! Every sampler draws from ChaCha8. A run with seed `s` gives sample `i`
//! its own stream: `ChaCha8Rng::seed_from_u64(s)` with `set_stream(i)`.
//! Results therefore do not depend on how rayon partitions the work, and
//! per-sample values are reduced in index order.
//!
//! Complex normals use Box–Muller: with `u1 ∈ (0, 1]` and `u2 ∈ [0, 1)`
//! the draw is `√(−ln u1)·e^{2πi·u2}`, a circular Gaussian with `E|z|² = 1`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::QuantumChannel;
use crate::error::{Error, Result};
use crate::linalg::{qr, ComplexMatrix, DensityMatrix, PureState};

/// Samples summed serially inside one parallel work item.
const CHUNK: usize = 256;

/// Stream `index` of the generator seeded with `seed`.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Child seed for nested runs (repeats, per-channel fixtures): first word of `substream(seed, index)`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    substream(seed, index).next_u64()
}

/// Circular complex normal with unit variance, via Box–Muller.
pub fn complex_normal(rng: &mut impl Rng) -> Complex64 {
    let u1 = 1.0 - rng.random::<f64>();
    let u2 = rng.random::<f64>();
    Complex64::from_polar((-u1.ln()).sqrt(), 2.0 * PI * u2)
}

/// Haar-random pure state: normalized vector of i.i.d. complex normals.
pub fn haar_state(dim: usize, rng: &mut impl Rng) -> PureState {
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| complex_normal(rng)).collect();
        // all-zero draw has probability zero; retry keeps the contract total
        if let Ok(s) = PureState::normalized(v) {
            return s;
        }
    }
}

/// Haar-random unitary: Ginibre matrix, QR, then the phases of `diag(R)` moved into `Q`.
pub fn haar_unitary(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let data = (0..dim * dim).map(|_| complex_normal(rng)).collect();
    let ginibre = ComplexMatrix::from_row_major(dim, dim, data).expect("finite normals");
    let (mut q, r) = qr(&ginibre).expect("square");
    for j in 0..dim {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Sample mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation over √n; zero when `n_samples == 1`.
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
}

impl McEstimate {
    /// Summarizes `samples` in order.
    pub fn from_samples(samples: &[f64], seed: u64) -> Result<Self> {
        let n = samples.len();
        if n == 0 {
            return Err(Error::NoSamples);
        }
        let mean = samples.iter().sum::<f64>() / n as f64;
        let std_error = if n > 1 {
            let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        Ok(Self {
            mean,
            std_error,
            n_samples: n as u64,
            seed,
        })
    }

    /// `|mean − target|` in units of the standard error (infinite if the error is zero and they differ).
    pub fn z_score(&self, target: f64) -> f64 {
        let diff = (self.mean - target).abs();
        if self.std_error > 0.0 {
            diff / self.std_error
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }

    /// True iff `target` lies within `k` standard errors, with `slack` absolute allowance for rounding.
    pub fn covers(&self, target: f64, k: f64, slack: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_error + slack
    }
}

fn per_sample<F>(n_samples: u64, seed: u64, f: F) -> Vec<f64>
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    (0..n_samples)
        .into_par_iter()
        .map(|i| f(&mut substream(seed, i)))
        .collect()
}

/// Monte Carlo estimate of `∫dψ ⟨ψ|U† E(ψ) U|ψ⟩` over Haar states.
pub fn mc_average_gate_fidelity(
    channel: &QuantumChannel,
    gate: &ComplexMatrix,
    n_samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    crate::fidelity::check_gate(channel.dim(), gate)?;
    if n_samples == 0 {
        return Err(Error::NoSamples);
    }
    let d = channel.dim();
    let samples = per_sample(n_samples, seed, |rng| {
        let psi = haar_state(d, rng);
        let target = gate.apply(psi.amplitudes());
        // ⟨Uψ|E(ψψ†)|Uψ⟩ = Σ_i |⟨Uψ|K_i|ψ⟩|²
        channel
            .kraus()
            .iter()
            .map(|k| {
                let kpsi = k.apply(psi.amplitudes());
                target
                    .iter()
                    .zip(&kpsi)
                    .map(|(a, b)| a.conj() * b)
                    .sum::<Complex64>()
                    .norm_sqr()
            })
            .sum()
    });
    McEstimate::from_samples(&samples, seed)
}

/// Monte Carlo estimate of the plain average fidelity `∫dψ ⟨ψ|E(ψ)|ψ⟩`.
pub fn mc_average_fidelity(channel: &QuantumChannel, n_samples: u64, seed: u64) -> Result<McEstimate> {
    mc_average_gate_fidelity(channel, &ComplexMatrix::identity(channel.dim()), n_samples, seed)
}

/// `ρ ↦ U† E(U ρ U†) U` for one Haar draw from `rng`.
fn conjugated(channel: &QuantumChannel, rng: &mut ChaCha8Rng) -> Vec<ComplexMatrix> {
    let u = haar_unitary(channel.dim(), rng);
    let ud = u.dagger();
    channel.kraus().iter().map(|k| ud.matmul(k).matmul(&u)).collect()
}

/// Choi state of the empirical twirl over `n_unitaries` Haar draws.
pub fn mc_twirl_choi(channel: &QuantumChannel, n_unitaries: u64, seed: u64) -> Result<DensityMatrix> {
    if n_unitaries == 0 {
        return Err(Error::NoSamples);
    }
    let d = channel.dim();
    let chunks: Vec<(u64, u64)> = (0..n_unitaries)
        .step_by(CHUNK)
        .map(|start| (start, (start + CHUNK as u64).min(n_unitaries)))
        .collect();
    let partial: Vec<ComplexMatrix> = chunks
        .into_par_iter()
        .map(|(start, end)| {
            let mut acc = ComplexMatrix::zeros(d * d, d * d);
            for i in start..end {
                let kraus = conjugated(channel, &mut substream(seed, i));
                crate::channel::accumulate_choi(&mut acc, &kraus);
            }
            acc
        })
        .collect();
    let mut total = ComplexMatrix::zeros(d * d, d * d);
    for p in &partial {
        total = &total + p;
    }
    Ok(DensityMatrix::from_trusted(total.scale_real(1.0 / n_unitaries as f64)))
}

/// The empirical twirl as a channel with `n_unitaries · rank` Kraus operators `U_i† K U_i / √n`.
pub fn mc_twirl_channel(channel: &QuantumChannel, n_unitaries: u64, seed: u64) -> Result<QuantumChannel> {
    if n_unitaries == 0 {
        return Err(Error::NoSamples);
    }
    let weight = 1.0 / (n_unitaries as f64).sqrt();
    let kraus: Vec<ComplexMatrix> = (0..n_unitaries)
        .into_par_iter()
        .flat_map_iter(|i| {
            conjugated(channel, &mut substream(seed, i))
                .into_iter()
                .map(move |k| k.scale_real(weight))
        })
        .collect();
    QuantumChannel::new(channel.dim(), kraus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::depolarizing;
    use crate::linalg::validate_unitary;

    #[test]
    fn haar_state_is_normalized_and_deterministic() {
        for d in [2, 3, 7] {
            let a = haar_state(d, &mut substream(4, 9));
            let b = haar_state(d, &mut substream(4, 9));
            assert_eq!(a, b);
            let norm: f64 = a.amplitudes().iter().map(|z| z.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn haar_state_projector_overlap_averages_to_one_over_d() {
        for d in [2usize, 3] {
            let samples: Vec<f64> = (0..100_000)
                .map(|i| haar_state(d, &mut substream(17, i)).amplitudes()[0].norm_sqr())
                .collect();
            let est = McEstimate::from_samples(&samples, 17).unwrap();
            assert!(est.covers(1.0 / d as f64, 5.0, 0.0), "{est:?}");
        }
    }

    #[test]
    fn haar_unitary_is_unitary() {
        for d in [1, 2, 5, 16] {
            let u = haar_unitary(d, &mut substream(2, d as u64));
            assert!(validate_unitary(&u, 1e-10));
        }
    }

    #[test]
    fn haar_unitary_corner_modulus() {
        let d = 3;
        let samples: Vec<f64> = (0..100_000)
            .map(|i| haar_unitary(d, &mut substream(5, i))[(0, 0)].norm_sqr())
            .collect();
        let est = McEstimate::from_samples(&samples, 5).unwrap();
        assert!(est.covers(1.0 / 3.0, 5.0, 0.0), "{est:?}");
    }

    #[test]
    fn haar_left_invariance_of_trace_moments() {
        let d = 2;
        let v = haar_unitary(d, &mut substream(99, 0));
        let n = 50_000;
        let (mut plain, mut shifted) = (Vec::new(), Vec::new());
        let (mut plain2, mut shifted2) = (Vec::new(), Vec::new());
        for i in 0..n {
            let u = haar_unitary(d, &mut substream(31, i));
            let w = haar_unitary(d, &mut substream(32, i));
            let t = u.trace();
            let s = v.matmul(&w).trace();
            plain.push(t.re);
            shifted.push(s.re);
            plain2.push(t.norm_sqr());
            shifted2.push(s.norm_sqr());
        }
        for (a, b) in [(&plain, &shifted), (&plain2, &shifted2)] {
            let ea = McEstimate::from_samples(a, 0).unwrap();
            let eb = McEstimate::from_samples(b, 0).unwrap();
            let combined = ea.std_error.hypot(eb.std_error);
            assert!((ea.mean - eb.mean).abs() < 5.0 * combined, "{ea:?} vs {eb:?}");
        }
    }

    #[test]
    fn identity_channel_scores_one() {
        let ch = QuantumChannel::identity(3);
        let est = mc_average_fidelity(&ch, 1000, 1).unwrap();
        assert!((est.mean - 1.0).abs() < 1e-12);
        assert!(est.std_error < 1e-12);
    }

    #[test]
    fn depolarizing_estimate() {
        let ch = depolarizing(2, 0.1).unwrap();
        let est = mc_average_fidelity(&ch, 100_000, 3).unwrap();
        assert!(est.covers(0.95, 5.0, 1e-10), "{est:?}");
    }

    #[test]
    fn estimate_independent_of_thread_count() {
        let ch = QuantumChannel::random(3, 2, 8).unwrap();
        let gate = haar_unitary(3, &mut substream(1, 1));
        let serial = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let wide = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = serial.install(|| mc_average_gate_fidelity(&ch, &gate, 5000, 77).unwrap());
        let b = wide.install(|| mc_average_gate_fidelity(&ch, &gate, 5000, 77).unwrap());
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
        let ja = serial.install(|| mc_twirl_choi(&ch, 1000, 5).unwrap());
        let jb = wide.install(|| mc_twirl_choi(&ch, 1000, 5).unwrap());
        assert_eq!(ja, jb);
    }

    #[test]
    fn std_error_scales_with_root_n() {
        let ch = QuantumChannel::random(2, 3, 12).unwrap();
        let small = mc_average_fidelity(&ch, 1_000, 4).unwrap();
        let large = mc_average_fidelity(&ch, 100_000, 4).unwrap();
        let ratio = small.std_error / large.std_error;
        assert!((7.0..=14.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn twirl_of_identity_is_exact() {
        let ch = QuantumChannel::identity(2);
        let j = mc_twirl_choi(&ch, 50, 1).unwrap();
        assert!(j.matrix().max_abs_diff(&ch.choi_state().into_matrix()) < 1e-12);
    }

    #[test]
    fn rejects_non_unitary_gate_and_zero_samples() {
        let ch = QuantumChannel::identity(2);
        let bad = ComplexMatrix::identity(2).scale_real(2.0);
        assert!(matches!(mc_average_gate_fidelity(&ch, &bad, 10, 0), Err(Error::NotUnitary(_))));
        assert!(matches!(mc_average_fidelity(&ch, 0, 0), Err(Error::NoSamples)));
    }

    #[test]
    fn box_muller_variance() {
        let mut rng = substream(8, 0);
        let n = 200_000;
        let mean_sq: f64 = (0..n).map(|_| complex_normal(&mut rng).norm_sqr()).sum::<f64>() / n as f64;
        assert!((mean_sq - 1.0).abs() < 0.02);
    }
}
