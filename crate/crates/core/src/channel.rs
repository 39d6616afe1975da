//! Trace-preserving quantum operations in Kraus form.
//!
//! Kraus operators are the only stored representation; the Choi state is
//! derived on demand.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::basis::shift_clock_basis;
use crate::error::{Error, Result};
use crate::haar::haar_unitary;
use crate::linalg::{unitarity_error, ComplexMatrix, DensityMatrix, STRUCTURE_TOL};

/// `ρ ↦ Σ_i K_i ρ K_i†` with `Σ_i K_i† K_i = I`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumChannel {
    dim: usize,
    kraus: Vec<ComplexMatrix>,
}

impl QuantumChannel {
    /// Checks trace preservation at [`STRUCTURE_TOL`].
    pub fn new(dim: usize, kraus: Vec<ComplexMatrix>) -> Result<Self> {
        Self::with_tolerance(dim, kraus, STRUCTURE_TOL)
    }

    pub fn with_tolerance(dim: usize, kraus: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::NoKrausOperators);
        }
        if dim == 0 {
            return Err(Error::DimensionTooSmall { min: 1, found: 0 });
        }
        for k in &kraus {
            if k.shape() != (dim, dim) {
                return Err(Error::ShapeMismatch {
                    expected: (dim, dim),
                    found: k.shape(),
                });
            }
        }
        let ch = Self { dim, kraus };
        let err = ch.trace_preservation_error();
        if err > tol {
            return Err(Error::NotTracePreserving(err));
        }
        Ok(ch)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            kraus: vec![ComplexMatrix::identity(dim)],
        }
    }

    /// Deterministic random channel; see [`random_channel`].
    pub fn random(dim: usize, kraus_rank: usize, seed: u64) -> Result<Self> {
        random_channel(dim, kraus_rank, seed)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// `max |Σ_i K_i† K_i − I|`.
    pub fn trace_preservation_error(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus {
            sum = &sum + &k.dagger().matmul(k);
        }
        sum.max_abs_diff(&ComplexMatrix::identity(self.dim))
    }

    /// Action on an arbitrary d×d operator by linear extension of the Kraus sum.
    pub fn apply_operator(&self, op: &ComplexMatrix) -> Result<ComplexMatrix> {
        if op.shape() != (self.dim, self.dim) {
            return Err(Error::ShapeMismatch {
                expected: (self.dim, self.dim),
                found: op.shape(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus {
            out = &out + &k.matmul(op).matmul(&k.dagger());
        }
        Ok(out)
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rho.dim(),
            });
        }
        Ok(DensityMatrix::from_trusted(self.apply_operator(rho.matrix())?))
    }

    /// `(I ⊗ E)(φφ†)` with the reference system as the first factor.
    pub fn choi_state(&self) -> DensityMatrix {
        let mut acc = ComplexMatrix::zeros(self.dim * self.dim, self.dim * self.dim);
        accumulate_choi(&mut acc, &self.kraus);
        DensityMatrix::from_trusted(acc)
    }

    /// `⟨φ|(I ⊗ E)(φφ†)|φ⟩ = Σ_i |tr K_i|² / d²`, read off the Choi state.
    pub(crate) fn choi_overlap(&self) -> f64 {
        let d = self.dim;
        let j = self.choi_state();
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 0..d {
            for b in 0..d {
                acc += j.matrix()[(a * d + a, b * d + b)];
            }
        }
        acc.re / d as f64
    }
}

/// Adds `Σ_i (I ⊗ K_i)|φ⟩⟨φ|(I ⊗ K_i)†` into `acc`.
pub(crate) fn accumulate_choi(acc: &mut ComplexMatrix, kraus: &[ComplexMatrix]) {
    let d = kraus[0].rows();
    let inv_d = 1.0 / d as f64;
    let mut v = vec![Complex64::new(0.0, 0.0); d * d];
    for k in kraus {
        // ((I ⊗ K)|φ⟩)[j·d + a] = K[a, j] / √d; the 1/d is applied to the outer product.
        for j in 0..d {
            for a in 0..d {
                v[j * d + a] = k[(a, j)];
            }
        }
        for (r, vr) in v.iter().enumerate() {
            let vr = vr * inv_d;
            if vr == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (c, vc) in v.iter().enumerate() {
                acc[(r, c)] += vr * vc.conj();
            }
        }
    }
}

/// Single-Kraus channel `ρ ↦ U ρ U†`.
pub fn unitary_channel(u: &ComplexMatrix) -> Result<QuantumChannel> {
    if !u.is_square() {
        return Err(Error::NotSquare(u.rows(), u.cols()));
    }
    let err = unitarity_error(u);
    if err > STRUCTURE_TOL {
        return Err(Error::NotUnitary(err));
    }
    Ok(QuantumChannel {
        dim: u.rows(),
        kraus: vec![u.clone()],
    })
}

/// Validated depolarizing parameter, `0 ≤ p ≤ d²/(d²−1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DepolarizingParams {
    dim: usize,
    p: f64,
}

impl DepolarizingParams {
    pub fn new(dim: usize, p: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall { min: 2, found: dim });
        }
        let max = Self::max_p(dim);
        if !(0.0..=max).contains(&p) {
            return Err(Error::DepolarizingOutOfRange { p, max });
        }
        Ok(Self { dim, p })
    }

    /// Upper end of the completely positive range.
    pub fn max_p(dim: usize) -> f64 {
        let d2 = (dim * dim) as f64;
        d2 / (d2 - 1.0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn channel(&self) -> QuantumChannel {
        depolarizing_unchecked(self.dim, self.p)
    }

    /// Choi state `(1−p)φφ† + p·I/d²`.
    pub fn choi_state(&self) -> DensityMatrix {
        self.channel().choi_state()
    }
}

/// `ρ ↦ p I/d + (1−p) ρ`, realized with shift/clock Kraus operators.
pub fn depolarizing(dim: usize, p: f64) -> Result<QuantumChannel> {
    let params = DepolarizingParams::new(dim, p)?;
    Ok(params.channel())
}

fn depolarizing_unchecked(dim: usize, p: f64) -> QuantumChannel {
    let d2 = (dim * dim) as f64;
    let basis = shift_clock_basis(dim).expect("dim >= 2");
    let w_id = (1.0 - p + p / d2).max(0.0).sqrt();
    let w_err = (p / d2).sqrt();
    let kraus = basis
        .elements()
        .iter()
        .enumerate()
        .filter_map(|(j, u)| {
            let w = if j == 0 { w_id } else { w_err };
            (w > 0.0).then(|| u.scale_real(w))
        })
        .collect();
    QuantumChannel { dim, kraus }
}

/// `then ∘ first`, Kraus set `{L_j K_i}`.
pub fn compose(first: &QuantumChannel, then: &QuantumChannel) -> Result<QuantumChannel> {
    if first.dim != then.dim {
        return Err(Error::DimensionMismatch {
            expected: first.dim,
            found: then.dim,
        });
    }
    let kraus = then
        .kraus
        .iter()
        .flat_map(|l| first.kraus.iter().map(move |k| l.matmul(k)))
        .collect();
    Ok(QuantumChannel { dim: first.dim, kraus })
}

/// Stinespring construction: the d×d blocks of the first block column of a
/// Haar unitary on dimension `d·kraus_rank`, drawn from `ChaCha8Rng::seed_from_u64(seed)`.
pub fn random_channel(dim: usize, kraus_rank: usize, seed: u64) -> Result<QuantumChannel> {
    if dim == 0 {
        return Err(Error::DimensionTooSmall { min: 1, found: 0 });
    }
    if kraus_rank == 0 || kraus_rank > dim * dim {
        return Err(Error::KrausRankOutOfRange {
            rank: kraus_rank,
            max: dim * dim,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = haar_unitary(dim * kraus_rank, &mut rng);
    let kraus = (0..kraus_rank)
        .map(|i| {
            let mut k = ComplexMatrix::zeros(dim, dim);
            for a in 0..dim {
                for b in 0..dim {
                    k[(a, b)] = w[(i * dim + a, b)];
                }
            }
            k
        })
        .collect();
    QuantumChannel::new(dim, kraus)
}

/// Depolarizing parameter of the exact Haar twirl, `p = (1 − F_e)·d²/(d²−1)`.
///
/// The twirl preserves `F_e`, and `F_e` of a depolarizing channel is
/// `1 − p + p/d²`, which pins `p`. Rounding past the CP range is clamped.
pub fn exact_twirl(channel: &QuantumChannel) -> Result<DepolarizingParams> {
    let d = channel.dim();
    let d2 = (d * d) as f64;
    let fe = channel.choi_overlap();
    let p = ((1.0 - fe) * d2 / (d2 - 1.0)).clamp(0.0, DepolarizingParams::max_p(d));
    DepolarizingParams::new(d, p)
}
