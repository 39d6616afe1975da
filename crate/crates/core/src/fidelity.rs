//! Closed-form fidelity quantities.
//!
//! Entanglement fidelity by two routes (Choi overlap and a sum over an
//! orthogonal unitary basis), the Horodecki relation between average and
//! entanglement fidelity, the basis-sum formula for the average gate
//! fidelity, its qubit Pauli specialization, and the variant that consumes
//! channel outputs on a spanning set of preparation states.
//!
//! All formulas are evaluated literally, term by term. Channel action on the
//! (non-Hermitian) basis unitaries is the linear extension of the Kraus sum.

use num_complex::Complex64;
use serde::Serialize;

use crate::basis::{pauli_basis, UnitaryOperatorBasis};
use crate::channel::{compose, unitary_channel, QuantumChannel};
use crate::error::{Error, Result};
use crate::experiment::AlphaMatrix;
use crate::linalg::{unitarity_error, ComplexMatrix};

/// Unitarity tolerance for target gates; looser than internal checks so
/// gates read from decimal text are accepted.
pub const GATE_TOL: f64 = 1e-8;

/// Where a fidelity value came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FidelityMethod {
    Choi,
    BasisSum,
    Horodecki,
    /// Basis-sum average gate fidelity; reported as `eq12`.
    #[serde(rename = "eq12")]
    GateBasisSum,
    QubitClosedForm,
    StateBasis,
    MonteCarlo,
}

impl FidelityMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Choi => "choi",
            Self::BasisSum => "basis-sum",
            Self::Horodecki => "horodecki",
            Self::GateBasisSum => "eq12",
            Self::QubitClosedForm => "qubit-closed-form",
            Self::StateBasis => "state-basis",
            Self::MonteCarlo => "monte-carlo",
        }
    }
}

/// A fidelity with its provenance. `value` is the raw computed number.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FidelityValue {
    pub value: f64,
    pub method: FidelityMethod,
}

impl FidelityValue {
    fn new(value: f64, method: FidelityMethod) -> Self {
        Self { value, method }
    }

    /// Value clamped into [0, 1] for reporting.
    pub fn reported(&self) -> f64 {
        self.value.clamp(0.0, 1.0)
    }

    /// True when reporting had to clamp.
    pub fn was_clamped(&self) -> bool {
        !(0.0..=1.0).contains(&self.value)
    }
}

/// Route for [`entanglement_fidelity`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntanglementRoute {
    /// `⟨φ|(I ⊗ E)(φφ†)|φ⟩`.
    Choi,
    /// `Σ_j tr(U_j† E(U_j)) / d³`.
    BasisSum,
}

pub(crate) fn check_gate(dim: usize, gate: &ComplexMatrix) -> Result<()> {
    if gate.shape() != (dim, dim) {
        return Err(Error::ShapeMismatch {
            expected: (dim, dim),
            found: gate.shape(),
        });
    }
    let err = unitarity_error(gate);
    if err > GATE_TOL {
        return Err(Error::NotUnitary(err));
    }
    Ok(())
}

fn check_basis(dim: usize, basis: &UnitaryOperatorBasis) -> Result<()> {
    if basis.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: basis.dim(),
        });
    }
    Ok(())
}

pub fn entanglement_fidelity(
    channel: &QuantumChannel,
    route: EntanglementRoute,
    basis: &UnitaryOperatorBasis,
) -> Result<FidelityValue> {
    match route {
        EntanglementRoute::Choi => Ok(FidelityValue::new(channel.choi_overlap(), FidelityMethod::Choi)),
        EntanglementRoute::BasisSum => {
            let d = channel.dim();
            check_basis(d, basis)?;
            let mut acc = Complex64::new(0.0, 0.0);
            for u in basis.elements() {
                let image = channel.apply_operator(u)?;
                acc += u.dagger().trace_of_product(&image);
            }
            Ok(FidelityValue::new(acc.re / (d * d * d) as f64, FidelityMethod::BasisSum))
        }
    }
}

/// Choi-route entanglement fidelity.
pub fn entanglement_fidelity_choi(channel: &QuantumChannel) -> FidelityValue {
    FidelityValue::new(channel.choi_overlap(), FidelityMethod::Choi)
}

/// `(d·F_e + 1)/(d + 1)` with `F_e` from the Choi route.
pub fn average_fidelity(channel: &QuantumChannel) -> FidelityValue {
    let d = channel.dim() as f64;
    let fe = channel.choi_overlap();
    FidelityValue::new((d * fe + 1.0) / (d + 1.0), FidelityMethod::Horodecki)
}

/// `[Σ_j tr(U U_j† U† E(U_j)) + d²] / [d²(d+1)]`.
pub fn average_gate_fidelity(
    channel: &QuantumChannel,
    gate: &ComplexMatrix,
    basis: &UnitaryOperatorBasis,
) -> Result<FidelityValue> {
    let d = channel.dim();
    check_gate(d, gate)?;
    check_basis(d, basis)?;
    let gate_dagger = gate.dagger();
    let mut acc = Complex64::new(0.0, 0.0);
    for u in basis.elements() {
        let image = channel.apply_operator(u)?;
        let target = gate.matmul(&u.dagger()).matmul(&gate_dagger);
        acc += target.trace_of_product(&image);
    }
    let d2 = (d * d) as f64;
    let value = (acc.re + d2) / (d2 * (d as f64 + 1.0));
    Ok(FidelityValue::new(value, FidelityMethod::GateBasisSum))
}

/// Horodecki average fidelity of `U† ∘ E`; equals the gate fidelity by unitary invariance.
pub fn average_gate_fidelity_via_composition(
    channel: &QuantumChannel,
    gate: &ComplexMatrix,
) -> Result<FidelityValue> {
    check_gate(channel.dim(), gate)?;
    let undo = unitary_channel_loose(&gate.dagger())?;
    Ok(average_fidelity(&compose(channel, &undo)?))
}

fn unitary_channel_loose(u: &ComplexMatrix) -> Result<QuantumChannel> {
    unitary_channel(u).or_else(|_| QuantumChannel::with_tolerance(u.rows(), vec![u.clone()], GATE_TOL))
}

/// Qubit closed form `1/2 + (1/12) Σ_{σ ∈ {X,Y,Z}} tr(U σ U† E(σ))`.
pub fn average_gate_fidelity_qubit(channel: &QuantumChannel, gate: &ComplexMatrix) -> Result<FidelityValue> {
    if channel.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: channel.dim(),
        });
    }
    check_gate(2, gate)?;
    let gate_dagger = gate.dagger();
    let paulis = pauli_basis();
    let mut acc = Complex64::new(0.0, 0.0);
    for sigma in &paulis.elements()[1..] {
        let image = channel.apply_operator(sigma)?;
        acc += gate.matmul(sigma).matmul(&gate_dagger).trace_of_product(&image);
    }
    Ok(FidelityValue::new(0.5 + acc.re / 12.0, FidelityMethod::QubitClosedForm))
}

/// `[Σ_jk α_jk tr(U U_j† U† E(ρ_k)) + d²] / [d²(d+1)]` from outputs `E(ρ_k)`.
///
/// The outputs may be tomographic estimates (Hermitian, not necessarily
/// positive), in which case the raw value can leave [0, 1].
pub fn average_gate_fidelity_from_states(
    outputs: &[ComplexMatrix],
    alphas: &AlphaMatrix,
    gate: &ComplexMatrix,
    basis: &UnitaryOperatorBasis,
) -> Result<FidelityValue> {
    let d = basis.dim();
    let d2 = d * d;
    if alphas.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: alphas.dim(),
        });
    }
    if outputs.len() != d2 {
        return Err(Error::CountMismatch {
            expected: d2,
            found: outputs.len(),
        });
    }
    for out in outputs {
        if out.shape() != (d, d) {
            return Err(Error::ShapeMismatch {
                expected: (d, d),
                found: out.shape(),
            });
        }
    }
    check_gate(d, gate)?;
    let gate_dagger = gate.dagger();
    let targets: Vec<ComplexMatrix> = basis
        .elements()
        .iter()
        .map(|u| gate.matmul(&u.dagger()).matmul(&gate_dagger))
        .collect();
    let alpha = alphas.entries();
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, target) in targets.iter().enumerate() {
        for (k, out) in outputs.iter().enumerate() {
            acc += alpha[(j, k)] * target.trace_of_product(out);
        }
    }
    let value = (acc.re + d2 as f64) / (d2 as f64 * (d as f64 + 1.0));
    Ok(FidelityValue::new(value, FidelityMethod::StateBasis))
}
