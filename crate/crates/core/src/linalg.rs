//! Dense complex matrices and the state types built on them.
//!
//! Everything is row-major and owned. Dimensions in this crate are small
//! (qudits up to d = 32, doubled spaces up to d²), so no blocking or sparse
//! storage is attempted.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for structural checks (Hermiticity, trace, unitarity).
pub const STRUCTURE_TOL: f64 = 1e-10;
/// Tolerance for the eigensolver reconstruction contract.
pub const EIGEN_TOL: f64 = 1e-9;
/// Allowed distance of a pure state's norm from one.
pub const NORM_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting bad shapes and non-finite values.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                expected: (rows, cols),
                found: (data.len(), 1),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::ShapeMismatch {
                expected: (nrows, ncols),
                found: (nrows, bad.len()),
            });
        }
        Self::from_row_major(nrows, ncols, rows.concat())
    }

    /// Builds a real matrix from nested rows; handy for fixtures.
    pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> Self {
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        Self { rows: N, cols: N, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &z) in diag.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// `|v⟩⟨w|`.
    pub fn outer(v: &[Complex64], w: &[Complex64]) -> Self {
        let mut data = Vec::with_capacity(v.len() * w.len());
        for a in v {
            for b in w {
                data.push(a * b.conj());
            }
        }
        Self {
            rows: v.len(),
            cols: w.len(),
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].conj());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)]);
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Elementwise complex conjugate.
    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Matrix product; panics on incompatible shapes.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = vec![ZERO; self.rows * rhs.cols];
        for i in 0..self.rows {
            let out_row = &mut out[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let rhs_row = rhs.row(k);
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Self {
            rows: self.rows,
            cols: rhs.cols,
            data: out,
        }
    }

    pub fn try_matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch {
                expected: (self.cols, rhs.cols),
                found: rhs.shape(),
            });
        }
        Ok(self.matmul(rhs))
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `tr(A B)` without forming the product.
    pub fn trace_of_product(&self, rhs: &Self) -> Complex64 {
        assert_eq!(self.cols, rhs.rows, "trace product shape mismatch");
        assert_eq!(self.rows, rhs.cols, "trace product shape mismatch");
        let mut acc = ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self.data[i * self.cols + k] * rhs.data[k * rhs.cols + i];
            }
        }
        acc
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        (self - other).frobenius_norm()
    }

    /// Largest elementwise deviation from Hermiticity, `max |M - M†|`.
    pub fn hermiticity_error(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Averages the matrix with its adjoint.
    pub fn hermitian_part(&self) -> Self {
        (self + &self.dagger()).scale_real(0.5)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "add shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "sub shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product: `out[(i·p + k, j·q + l)] = a[i, j]·b[k, l]` for `b` of shape p×q.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (p, q) = b.shape();
    let rows = a.rows * p;
    let cols = a.cols * q;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..p {
                for l in 0..q {
                    out[(i * p + k, j * q + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn dagger(a: &ComplexMatrix) -> ComplexMatrix {
    a.dagger()
}

/// Hilbert–Schmidt inner product `tr(a† b)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            expected: a.shape(),
            found: b.shape(),
        });
    }
    Ok(a.data.iter().zip(&b.data).map(|(x, y)| x.conj() * y).sum())
}

/// True iff `a` is square and `max |a†a − I| ≤ tol`.
pub fn validate_unitary(a: &ComplexMatrix, tol: f64) -> bool {
    unitarity_error(a) <= tol
}

/// `max |a†a − I|`, or infinity for non-square input.
pub fn unitarity_error(a: &ComplexMatrix) -> f64 {
    if !a.is_square() {
        return f64::INFINITY;
    }
    a.dagger()
        .matmul(a)
        .max_abs_diff(&ComplexMatrix::identity(a.rows))
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector for `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            for i in 0..n {
                let vik = v[(i, k)] * lambda;
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }
}

/// Cyclic complex Jacobi eigensolver for Hermitian input.
///
/// Rejects input whose Hermiticity error exceeds 1e-8. The input is
/// symmetrized first, so the result is exact for `(A + A†)/2`.
pub fn hermitian_eigendecomposition(a: &ComplexMatrix) -> Result<HermitianEigen> {
    if !a.is_square() {
        return Err(Error::NotSquare(a.rows, a.cols));
    }
    let herr = a.hermiticity_error();
    if herr > 1e-8 {
        return Err(Error::NotHermitian(herr));
    }
    let n = a.rows;
    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);

    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let abs_apq = apq.norm();
                if abs_apq <= 1e-300 {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                // Unitary rotation J with J[p,p]=c, J[p,q]=s·e^{iφ}, J[q,p]=−s·e^{−iφ}, J[q,q]=c
                // chosen so that (J† M J)[p,q] = 0.
                let phase = apq / abs_apq;
                let theta = 0.5 * (2.0 * abs_apq).atan2(aqq - app);
                let c = theta.cos();
                let s = theta.sin();
                let sp = phase * s;

                // M ← M J (columns p, q)
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * c - mkq * sp.conj();
                    m[(k, q)] = mkp * sp + mkq * c;
                }
                // M ← J† M (rows p, q)
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = mpk * c - mqk * sp;
                    m[(q, k)] = mpk * sp.conj() + mqk * c;
                }
                m[(p, q)] = ZERO;
                m[(q, p)] = ZERO;
                m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);
                // V ← V J
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c - vkq * sp.conj();
                    v[(k, q)] = vkp * sp + vkq * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| m[(i, i)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            eigenvectors[(row, col)] = v[(row, src)];
        }
    }
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Householder QR of a square matrix: `a = Q R` with `R` upper triangular.
pub fn qr(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if !a.is_square() {
        return Err(Error::NotSquare(a.rows, a.cols));
    }
    let n = a.rows;
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(n);
    for k in 0..n.saturating_sub(1) {
        let x: Vec<Complex64> = (k..n).map(|i| r[(i, k)]).collect();
        let norm_x = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        // v = x + e^{i arg x0}·‖x‖·e1 avoids cancellation.
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { ONE };
        let mut v = x;
        v[0] += phase * norm_x;
        let norm_v_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if norm_v_sq == 0.0 {
            continue;
        }
        // R ← (I − 2vv†/‖v‖²) R
        for j in 0..n {
            let dot: Complex64 = (k..n).map(|i| v[i - k].conj() * r[(i, j)]).sum();
            let f = dot * (2.0 / norm_v_sq);
            for i in k..n {
                r[(i, j)] -= v[i - k] * f;
            }
        }
        // Q ← Q (I − 2vv†/‖v‖²)
        for i in 0..n {
            let dot: Complex64 = (k..n).map(|j| q[(i, j)] * v[j - k]).sum();
            let f = dot * (2.0 / norm_v_sq);
            for j in k..n {
                q[(i, j)] -= f * v[j - k].conj();
            }
        }
    }
    for i in 1..n {
        for j in 0..i {
            r[(i, j)] = ZERO;
        }
    }
    Ok((q, r))
}

/// Solves `a x = b` column by column with partial-pivot LU.
///
/// Fails with [`Error::Singular`] when a pivot falls below `1e-12` relative
/// to the largest entry of `a`.
pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare(a.rows, a.cols));
    }
    if a.rows != b.rows {
        return Err(Error::ShapeMismatch {
            expected: (a.rows, b.cols),
            found: b.shape(),
        });
    }
    let n = a.rows;
    let m = b.cols;
    let mut lu = a.clone();
    let mut x = b.clone();
    let amax = a.data.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for k in 0..n {
        let (piv, pmag) = (k..n)
            .map(|i| (i, lu[(i, k)].norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("nonempty pivot range");
        if pmag <= 1e-12 * amax.max(f64::MIN_POSITIVE) {
            return Err(Error::Singular);
        }
        if piv != k {
            for j in 0..n {
                lu.data.swap(k * n + j, piv * n + j);
            }
            for j in 0..m {
                x.data.swap(k * m + j, piv * m + j);
            }
        }
        let inv = ONE / lu[(k, k)];
        for i in (k + 1)..n {
            let f = lu[(i, k)] * inv;
            if f == ZERO {
                continue;
            }
            for j in k..n {
                let t = lu[(k, j)];
                lu[(i, j)] -= f * t;
            }
            for j in 0..m {
                let t = x[(k, j)];
                x[(i, j)] -= f * t;
            }
        }
    }
    for k in (0..n).rev() {
        let inv = ONE / lu[(k, k)];
        for j in 0..m {
            let mut acc = x[(k, j)];
            for i in (k + 1)..n {
                acc -= lu[(k, i)] * x[(i, j)];
            }
            x[(k, j)] = acc * inv;
        }
    }
    Ok(x)
}

/// Unit vector in `C^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amplitudes })
    }

    /// Scales a nonzero vector to unit norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        for z in &mut amplitudes {
            *z /= norm;
        }
        Ok(Self { amplitudes })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }

    pub fn density_matrix(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: self.projector(),
        }
    }

    /// `⟨ψ|A|ψ⟩`.
    pub fn expectation(&self, a: &ComplexMatrix) -> Complex64 {
        let av = a.apply(&self.amplitudes);
        self.amplitudes
            .iter()
            .zip(&av)
            .map(|(x, y)| x.conj() * y)
            .sum()
    }
}

/// Hermitian, positive-semidefinite, unit-trace matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates all three invariants at [`STRUCTURE_TOL`].
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, STRUCTURE_TOL)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare(matrix.rows, matrix.cols));
        }
        let herr = matrix.hermiticity_error();
        if herr > tol {
            return Err(Error::NotHermitian(herr));
        }
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > tol {
            return Err(Error::InvalidTrace(tr));
        }
        let min_eig = hermitian_eigendecomposition(&matrix)?.eigenvalues[0];
        if min_eig < -tol {
            return Err(Error::NotPositive(min_eig));
        }
        Ok(Self { matrix })
    }

    /// Wraps a matrix known to satisfy the invariants, e.g. a channel output.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.is_square());
        Self { matrix }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn overlap(&self, psi: &PureState) -> f64 {
        psi.expectation(&self.matrix).re
    }
}

/// Canonical maximally entangled vector `Σ_j |j⟩|j⟩/√d`, reference system first.
pub fn max_entangled_vector(dim: usize) -> Vec<Complex64> {
    let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
    let mut v = vec![ZERO; dim * dim];
    for j in 0..dim {
        v[j * dim + j] = amp;
    }
    v
}

pub fn max_entangled_state(dim: usize) -> PureState {
    PureState {
        amplitudes: max_entangled_vector(dim),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::{random_hermitian, random_matrix, seeded};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows([[0.0, 1.0], [1.0, 0.0]])
    }

    fn pauli_z() -> ComplexMatrix {
        ComplexMatrix::from_real_rows([[1.0, 0.0], [0.0, -1.0]])
    }

    #[test]
    fn kron_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_shifts_first_factor() {
        let x_i = kron(&pauli_x(), &ComplexMatrix::identity(2));
        let ket00 = [ONE, ZERO, ZERO, ZERO];
        assert_eq!(x_i.apply(&ket00), vec![ZERO, ZERO, ONE, ZERO]);
    }

    #[test]
    fn kron_of_clock_matrices() {
        let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let z3 = ComplexMatrix::from_diagonal(&[ONE, w, w * w]);
        let zz = kron(&z3, &z3);
        let w2 = w * w;
        let expected = [ONE, w, w2, w, w2, ONE, w2, ONE, w];
        for (i, e) in expected.iter().enumerate() {
            // ω³ = 1 only up to rounding when formed as a product
            assert!((zz[(i, i)] - e).norm() < 1e-15, "entry {i}");
        }
    }

    #[test]
    fn kron_is_associative() {
        let mut rng = seeded(3);
        let a = random_matrix(&mut rng, 2, 3);
        let b = random_matrix(&mut rng, 3, 2);
        let c = random_matrix(&mut rng, 2, 2);
        let left = kron(&kron(&a, &b), &c);
        let right = kron(&a, &kron(&b, &c));
        assert_eq!(left.shape(), right.shape());
        assert!(left.max_abs_diff(&right) < 1e-15);
    }

    #[test]
    fn dagger_cases() {
        let i3 = ComplexMatrix::identity(3);
        assert_eq!(dagger(&i3), i3);
        let a = ComplexMatrix::from_real_rows([[0.0, -1.0], [1.0, 0.0]]);
        assert_eq!(dagger(&a), ComplexMatrix::from_real_rows([[0.0, 1.0], [-1.0, 0.0]]));
        let r = random_matrix(&mut seeded(1), 4, 4);
        assert_eq!(r.dagger().dagger(), r);
    }

    #[test]
    fn hs_inner_cases() {
        let i4 = ComplexMatrix::identity(4);
        assert_eq!(hs_inner(&i4, &i4).unwrap(), c(4.0, 0.0));
        assert_eq!(hs_inner(&pauli_x(), &pauli_z()).unwrap(), ZERO);
        let a = random_matrix(&mut seeded(2), 3, 3);
        let aa = hs_inner(&a, &a).unwrap();
        assert!(aa.im.abs() < 1e-14);
        assert!((aa.re - a.frobenius_norm().powi(2)).abs() < 1e-12);
        assert!(matches!(
            hs_inner(&i4, &ComplexMatrix::identity(2)),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn hs_inner_sesquilinear() {
        let mut rng = seeded(9);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 3, 3);
            let b = random_matrix(&mut rng, 3, 3);
            let m = random_matrix(&mut rng, 3, 3);
            let s = m[(0, 0)];
            let t = m[(1, 1)];
            let combo = &a.scale(s) + &b.scale(t);
            let lhs = hs_inner(&combo, &m).unwrap();
            let rhs = s.conj() * hs_inner(&a, &m).unwrap() + t.conj() * hs_inner(&b, &m).unwrap();
            assert!((lhs - rhs).norm() < 1e-12);
            let lhs = hs_inner(&m, &combo).unwrap();
            let rhs = s * hs_inner(&m, &a).unwrap() + t * hs_inner(&m, &b).unwrap();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn unitary_validation() {
        assert!(validate_unitary(&ComplexMatrix::identity(3), 1e-10));
        let d = ComplexMatrix::from_real_rows([[1.0, 0.0], [0.0, 2.0]]);
        assert!(!validate_unitary(&d, 1e-10));
        assert!(!validate_unitary(&ComplexMatrix::zeros(2, 3), 1e-10));
    }

    #[test]
    fn eigen_of_diagonal() {
        let a = ComplexMatrix::from_real_rows([[3.0, 0.0], [0.0, 1.0]]);
        let e = hermitian_eigendecomposition(&a).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 3.0]);
    }

    #[test]
    fn eigen_of_pauli_x() {
        let e = hermitian_eigendecomposition(&pauli_x()).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // up to a global phase: |⟨expected|v⟩| = 1
        let minus = [c(s, 0.0), c(-s, 0.0)];
        let plus = [c(s, 0.0), c(s, 0.0)];
        for (k, expected) in [minus, plus].iter().enumerate() {
            let v = e.eigenvectors.column(k);
            let overlap: Complex64 = expected.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            assert!((overlap.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn eigen_reconstructs_random_hermitian() {
        let mut rng = seeded(11);
        for n in [1, 2, 3, 5, 8, 16] {
            let a = random_hermitian(&mut rng, n);
            let e = hermitian_eigendecomposition(&a).unwrap();
            assert!(e.reconstruct().frobenius_distance(&a) < EIGEN_TOL, "n = {n}");
            assert!(validate_unitary(&e.eigenvectors, 1e-10));
            assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let a = ComplexMatrix::from_real_rows([[0.0, 1.0], [0.0, 0.0]]);
        assert!(matches!(hermitian_eigendecomposition(&a), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn qr_factors_random_matrix() {
        let mut rng = seeded(5);
        for n in [1, 2, 4, 7] {
            let a = random_matrix(&mut rng, n, n);
            let (q, r) = qr(&a).unwrap();
            assert!(validate_unitary(&q, 1e-12));
            assert!(q.matmul(&r).max_abs_diff(&a) < 1e-12);
            for i in 0..n {
                for j in 0..i {
                    assert_eq!(r[(i, j)], ZERO);
                }
            }
        }
    }

    #[test]
    fn solve_recovers_solution() {
        let mut rng = seeded(6);
        let a = random_matrix(&mut rng, 6, 6);
        let x = random_matrix(&mut rng, 6, 2);
        let b = a.matmul(&x);
        assert!(solve(&a, &b).unwrap().max_abs_diff(&x) < 1e-10);
        let singular = ComplexMatrix::from_real_rows([[1.0, 2.0], [2.0, 4.0]]);
        assert!(matches!(
            solve(&singular, &ComplexMatrix::identity(2)),
            Err(Error::Singular)
        ));
    }

    #[test]
    fn transpose_trick_on_max_entangled() {
        let mut rng = seeded(12);
        for d in 2..=5 {
            let phi = max_entangled_vector(d);
            let id = ComplexMatrix::identity(d);
            let a = random_matrix(&mut rng, d, d);
            let lhs = kron(&a, &id).apply(&phi);
            let rhs = kron(&id, &a.transpose()).apply(&phi);
            let dev = lhs.iter().zip(&rhs).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
            assert!(dev < 1e-12);
        }
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(ComplexMatrix::identity(2).scale_real(0.5)).is_ok());
        assert!(matches!(
            DensityMatrix::new(ComplexMatrix::identity(2)),
            Err(Error::InvalidTrace(_))
        ));
        let neg = ComplexMatrix::from_real_rows([[1.5, 0.0], [0.0, -0.5]]);
        assert!(matches!(DensityMatrix::new(neg), Err(Error::NotPositive(_))));
        let skew = ComplexMatrix::from_real_rows([[0.5, 0.3], [-0.3, 0.5]]);
        assert!(matches!(DensityMatrix::new(skew), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn pure_state_norm_checked() {
        assert!(PureState::new(vec![ONE, ONE]).is_err());
        let s = PureState::normalized(vec![ONE, ONE]).unwrap();
        assert!((s.expectation(&ComplexMatrix::identity(2)).re - 1.0).abs() < 1e-15);
        assert!(DensityMatrix::new(s.projector()).is_ok());
    }

    #[test]
    fn from_row_major_rejects_nan() {
        let r = ComplexMatrix::from_row_major(1, 1, vec![c(f64::NAN, 0.0)]);
        assert!(matches!(r, Err(Error::NonFinite)));
        let r = ComplexMatrix::from_row_major(2, 2, vec![ONE; 3]);
        assert!(matches!(r, Err(Error::ShapeMismatch { .. })));
    }
}
