//! Orthogonal unitary operator bases, `tr(U_j† U_k) = δ_jk·d`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hs_inner, kron, max_entangled_vector, unitarity_error, ComplexMatrix, STRUCTURE_TOL};

/// Name attached to each basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisLabel {
    /// `X^k Z^l`.
    ShiftClock { k: usize, l: usize },
    Named(String),
}

/// Ordered set of d² unitaries, orthogonal under the Hilbert–Schmidt product.
#[derive(Clone, Debug)]
pub struct UnitaryOperatorBasis {
    dim: usize,
    elements: Vec<ComplexMatrix>,
    labels: Vec<BasisLabel>,
}

impl UnitaryOperatorBasis {
    /// Validates a user-supplied basis at [`STRUCTURE_TOL`].
    pub fn new(dim: usize, elements: Vec<ComplexMatrix>, labels: Vec<BasisLabel>) -> Result<Self> {
        if labels.len() != elements.len() {
            return Err(Error::CountMismatch {
                expected: elements.len(),
                found: labels.len(),
            });
        }
        let basis = Self {
            dim,
            elements,
            labels,
        };
        basis.check(STRUCTURE_TOL)?;
        Ok(basis)
    }

    /// Same as [`new`](Self::new) with `Named("U{j}")` labels.
    pub fn from_elements(dim: usize, elements: Vec<ComplexMatrix>) -> Result<Self> {
        let labels = (0..elements.len())
            .map(|j| BasisLabel::Named(format!("U{j}")))
            .collect();
        Self::new(dim, elements, labels)
    }

    /// Skips validation; used to build deliberately broken sets in tests.
    pub fn new_unchecked(dim: usize, elements: Vec<ComplexMatrix>) -> Self {
        let labels = (0..elements.len())
            .map(|j| BasisLabel::Named(format!("U{j}")))
            .collect();
        Self {
            dim,
            elements,
            labels,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Multiplies element `j` by `e^{i θ_j}`; the result is again a valid basis.
    pub fn with_phases(&self, phases: &[f64]) -> Result<Self> {
        if phases.len() != self.elements.len() {
            return Err(Error::CountMismatch {
                expected: self.elements.len(),
                found: phases.len(),
            });
        }
        let elements = self
            .elements
            .iter()
            .zip(phases)
            .map(|(u, &t)| u.scale(Complex64::from_polar(1.0, t)))
            .collect();
        Ok(Self {
            dim: self.dim,
            elements,
            labels: self.labels.clone(),
        })
    }

    /// Conjugates every element by a fixed unitary `V`: `V U_j V†`.
    pub fn conjugated(&self, v: &ComplexMatrix) -> Result<Self> {
        let vd = v.dagger();
        let elements = self.elements.iter().map(|u| v.matmul(u).matmul(&vd)).collect();
        Self::new(self.dim, elements, self.labels.clone())
    }

    fn check(&self, tol: f64) -> Result<()> {
        let d = self.dim;
        if self.elements.len() != d * d {
            return Err(Error::InvalidBasis(format!(
                "expected {} elements, found {}",
                d * d,
                self.elements.len()
            )));
        }
        for (j, u) in self.elements.iter().enumerate() {
            if u.shape() != (d, d) {
                return Err(Error::InvalidBasis(format!("element {j} has shape {:?}", u.shape())));
            }
            let err = unitarity_error(u);
            if err > tol {
                return Err(Error::InvalidBasis(format!("element {j} not unitary ({err:e})")));
            }
        }
        for (j, a) in self.elements.iter().enumerate() {
            for (k, b) in self.elements.iter().enumerate().skip(j) {
                let expected = if j == k { d as f64 } else { 0.0 };
                let dev = (hs_inner(a, b)? - expected).norm();
                if dev > tol {
                    return Err(Error::InvalidBasis(format!(
                        "tr(U_{j}^dagger U_{k}) deviates by {dev:e}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Shift operator `X|j⟩ = |j ⊕ 1⟩`.
pub fn shift(dim: usize) -> ComplexMatrix {
    shift_power(dim, 1)
}

/// Clock operator `Z|j⟩ = e^{2πij/d}|j⟩`.
pub fn clock(dim: usize) -> ComplexMatrix {
    clock_power(dim, 1)
}

fn shift_power(dim: usize, k: usize) -> ComplexMatrix {
    // X^k is the permutation |j⟩ ↦ |j ⊕ k⟩, built directly.
    let mut m = ComplexMatrix::zeros(dim, dim);
    for j in 0..dim {
        m[((j + k) % dim, j)] = Complex64::new(1.0, 0.0);
    }
    m
}

fn clock_power(dim: usize, l: usize) -> ComplexMatrix {
    // Phase index reduced mod d so every entry is a single root of unity.
    let diag: Vec<Complex64> = (0..dim)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * ((j * l) % dim) as f64 / dim as f64))
        .collect();
    ComplexMatrix::from_diagonal(&diag)
}

/// The d² operators `X^k Z^l`, element `j = k·d + l`.
pub fn shift_clock_basis(dim: usize) -> Result<UnitaryOperatorBasis> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall { min: 2, found: dim });
    }
    let mut elements = Vec::with_capacity(dim * dim);
    let mut labels = Vec::with_capacity(dim * dim);
    for k in 0..dim {
        let xk = shift_power(dim, k);
        for l in 0..dim {
            elements.push(xk.matmul(&clock_power(dim, l)));
            labels.push(BasisLabel::ShiftClock { k, l });
        }
    }
    Ok(UnitaryOperatorBasis {
        dim,
        elements,
        labels,
    })
}

/// Qubit Pauli basis in the order I, X, Y, Z.
pub fn pauli_basis() -> UnitaryOperatorBasis {
    let i = Complex64::i();
    let elements = vec![
        ComplexMatrix::identity(2),
        pauli_x(),
        ComplexMatrix::from_rows(&[
            vec![Complex64::new(0.0, 0.0), -i],
            vec![i, Complex64::new(0.0, 0.0)],
        ])
        .expect("2x2"),
        pauli_z(),
    ];
    let labels = ["I", "X", "Y", "Z"]
        .iter()
        .map(|s| BasisLabel::Named((*s).to_owned()))
        .collect();
    UnitaryOperatorBasis {
        dim: 2,
        elements,
        labels,
    }
}

pub(crate) fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows([[0.0, 1.0], [1.0, 0.0]])
}

pub(crate) fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_rows([[1.0, 0.0], [0.0, -1.0]])
}

/// True iff the element count, unitarity and orthogonality all hold at `tol`.
pub fn validate_basis(basis: &UnitaryOperatorBasis, tol: f64) -> bool {
    basis.check(tol).is_ok()
}

/// `max |φφ† − Σ_j (U_j* ⊗ U_j)/d²|` for the canonical maximally entangled `φ`.
pub fn entangled_state_decomposition_check(basis: &UnitaryOperatorBasis) -> f64 {
    let d = basis.dim();
    let phi = max_entangled_vector(d);
    let target = ComplexMatrix::outer(&phi, &phi);
    let mut sum = ComplexMatrix::zeros(d * d, d * d);
    for u in basis.elements() {
        sum = &sum + &kron(&u.conj(), u);
    }
    let sum = sum.scale_real(1.0 / (d * d) as f64);
    target.max_abs_diff(&sum)
}
