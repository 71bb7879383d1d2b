//! Dense complex matrices and the handful of kernels the rest of the crate
//! is built on: Kronecker products, embedding of small gates into the full
//! register, partial traces, numerical rank and unitarity checks.
//!
//! Basis convention: the computational basis state `|b_1 b_2 … b_n⟩` has
//! index `Σ b_q 2^(n-q)`, i.e. qubit 1 is the most significant bit. Qubit
//! indices are 1-based everywhere in the public API.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{argument, Error, Result};

pub type C64 = Complex64;

/// Default max-norm tolerance for comparisons of operators.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Largest matrix side the crate is willing to allocate (12 qubits).
pub const MAX_DIM: usize = 1 << 12;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub(crate) fn check_dim(requested: usize) -> Result<()> {
    if requested > MAX_DIM {
        Err(Error::Resource { requested, cap: MAX_DIM })
    } else {
        Ok(())
    }
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl TryFrom<MatrixRepr> for ComplexMatrix {
    type Error = Error;

    fn try_from(repr: MatrixRepr) -> Result<Self> {
        let data = repr.data.iter().map(|&[re, im]| C64::new(re, im)).collect();
        ComplexMatrix::new(repr.rows, repr.cols, data)
    }
}

impl From<ComplexMatrix> for MatrixRepr {
    fn from(m: ComplexMatrix) -> Self {
        MatrixRepr {
            rows: m.rows,
            cols: m.cols,
            data: m.data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, validating shape and finiteness.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(argument("matrix dimensions must be positive"));
        }
        if data.len() != rows * cols {
            return Err(argument(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(argument("matrix entries must be finite"));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Square matrix from nested rows. Panics on ragged input; meant for
    /// literals.
    pub fn from_rows<R: AsRef<[C64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows[0].as_ref().len();
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.as_ref().len(), c, "ragged matrix literal");
            data.extend_from_slice(row.as_ref());
        }
        ComplexMatrix { rows: r, cols: c, data }
    }

    /// Real-valued square matrix from nested rows.
    pub fn from_real<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// Matrix unit `|row⟩⟨col|` of the given dimension.
    pub fn unit(dim: usize, row: usize, col: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        m[(row, col)] = ONE;
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, factor: C64) -> Self {
        self.map(|z| z * factor)
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-norm of `self - other`. Shapes must agree.
    pub fn max_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max-norm of `self - self†`.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev: f64 = 0.0;
        for r in 0..self.rows {
            for c in r..self.cols {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// Max-norm of `self† self - I`.
    pub fn unitarity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let gram = &self.adjoint() * self;
        gram.max_diff(&Self::identity(self.rows))
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|r| {
                let row = &self.data[r * self.cols..(r + 1) * self.cols];
                row.iter().zip(v).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// `self† · m · self`, the Heisenberg-picture conjugation.
    pub fn conjugate(&self, m: &Self) -> Self {
        &(&self.adjoint() * m) * self
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            let out_row = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
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
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:>9.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a.rows.saturating_mul(b.rows);
    let cols = a.cols.saturating_mul(b.cols);
    check_dim(rows.max(cols))?;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ar in 0..a.rows {
        for ac in 0..a.cols {
            let x = a[(ar, ac)];
            for br in 0..b.rows {
                for bc in 0..b.cols {
                    out[(ar * b.rows + br, ac * b.cols + bc)] = x * b[(br, bc)];
                }
            }
        }
    }
    Ok(out)
}

/// `true` iff the max-norm of `m†m - I` is at most `tol`.
pub fn is_unitary(m: &ComplexMatrix, tol: f64) -> bool {
    m.unitarity_deviation() <= tol
}

/// Bit mask of 1-based qubit `q` in an `n`-qubit register.
#[inline]
pub(crate) fn qubit_bit(q: usize, n: usize) -> usize {
    1 << (n - q)
}

/// Spreads the bits of `sub` (MSB first) onto the register positions of
/// `qubits`.
#[inline]
pub(crate) fn scatter(sub: usize, qubits: &[usize], n: usize) -> usize {
    let k = qubits.len();
    qubits
        .iter()
        .enumerate()
        .filter(|(pos, _)| sub >> (k - 1 - pos) & 1 == 1)
        .fold(0, |acc, (_, &q)| acc | qubit_bit(q, n))
}

/// Inverse of [`scatter`]: collects the register bits of `qubits` into a
/// compact index, MSB first.
#[inline]
pub(crate) fn gather(full: usize, qubits: &[usize], n: usize) -> usize {
    qubits
        .iter()
        .fold(0, |acc, &q| (acc << 1) | usize::from(full & qubit_bit(q, n) != 0))
}

/// Acts as `g` on `targets` (in the listed order, first target = most
/// significant bit of `g`'s index) and as the identity elsewhere.
///
/// An empty target list accepts a 1x1 `g` and yields `g[0,0]·I`.
pub fn embed_gate(g: &ComplexMatrix, targets: &[usize], n: usize) -> Result<ComplexMatrix> {
    let k = targets.len();
    if !g.is_square() || g.rows() != 1 << k {
        return Err(argument(format!(
            "a {}x{} gate cannot act on {k} qubit(s)",
            g.rows(),
            g.cols()
        )));
    }
    validate_targets(targets, n)?;
    if n >= usize::BITS as usize {
        return Err(Error::Resource { requested: usize::MAX, cap: MAX_DIM });
    }
    let dim = 1usize << n;
    check_dim(dim)?;

    let mask = targets.iter().fold(0, |acc, &q| acc | qubit_bit(q, n));
    let spread: Vec<usize> = (0..1 << k).map(|s| scatter(s, targets, n)).collect();
    let mut out = ComplexMatrix::zeros(dim, dim);
    for r in 0..dim {
        let rest = r & !mask;
        let sub_r = gather(r, targets, n);
        for (sub_c, &bits) in spread.iter().enumerate() {
            out[(r, rest | bits)] = g[(sub_r, sub_c)];
        }
    }
    Ok(out)
}

pub(crate) fn validate_targets(targets: &[usize], n: usize) -> Result<()> {
    for (i, &q) in targets.iter().enumerate() {
        if q == 0 || q > n {
            return Err(argument(format!("qubit {q} is outside 1..={n}")));
        }
        if targets[..i].contains(&q) {
            return Err(argument(format!("qubit {q} listed twice")));
        }
    }
    Ok(())
}

/// Partial trace of a `2^n x 2^n` operator over the qubits in `traced`.
/// The remaining qubits keep their relative order.
pub fn partial_trace(m: &ComplexMatrix, traced: &QubitSubset) -> Result<ComplexMatrix> {
    let n = traced.n();
    if !m.is_square() || m.rows() != 1usize << n {
        return Err(argument(format!(
            "partial trace over a {n}-qubit register needs a {0}x{0} matrix, got {1}x{2}",
            1usize << n,
            m.rows(),
            m.cols()
        )));
    }
    let kept = traced.complement();
    let kept_idx: Vec<usize> = (0..kept.dim()).map(|s| scatter(s, kept.members(), n)).collect();
    let traced_idx: Vec<usize> =
        (0..traced.dim()).map(|s| scatter(s, traced.members(), n)).collect();
    let mut out = ComplexMatrix::zeros(kept.dim(), kept.dim());
    for (i, &ri) in kept_idx.iter().enumerate() {
        for (j, &rj) in kept_idx.iter().enumerate() {
            out[(i, j)] = traced_idx.iter().map(|&t| m[(ri | t, rj | t)]).sum();
        }
    }
    Ok(out)
}

/// Rank by Gaussian elimination with full (largest absolute value) pivoting;
/// a pivot counts iff its magnitude exceeds `tol`.
pub fn numerical_rank(rows: &[Vec<f64>], tol: f64) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let mut active_rows: Vec<usize> = (0..a.len()).collect();
    let mut active_cols: Vec<usize> = (0..ncols).collect();
    let mut rank = 0;
    while !active_rows.is_empty() && !active_cols.is_empty() {
        let mut best = (0, 0, -1.0);
        for (ri, &r) in active_rows.iter().enumerate() {
            for (ci, &c) in active_cols.iter().enumerate() {
                let v = a[r][c].abs();
                if v > best.2 {
                    best = (ri, ci, v);
                }
            }
        }
        let (ri, ci, mag) = best;
        if mag <= tol {
            break;
        }
        rank += 1;
        let pr = active_rows.swap_remove(ri);
        let pc = active_cols.swap_remove(ci);
        let pivot_row = a[pr].clone();
        let pivot = pivot_row[pc];
        for &r in &active_rows {
            let factor = a[r][pc] / pivot;
            if factor != 0.0 {
                for &c in &active_cols {
                    a[r][c] -= factor * pivot_row[c];
                }
                a[r][pc] = 0.0;
            }
        }
    }
    rank
}

/// Positive semidefiniteness up to `tol`: succeeds iff a Cholesky
/// factorisation of `m + tol·I` exists, i.e. the smallest eigenvalue of the
/// Hermitian part is at least `-tol` (up to rounding).
pub fn is_psd(m: &ComplexMatrix, tol: f64) -> bool {
    if !m.is_square() {
        return false;
    }
    let d = m.rows();
    let mut l = ComplexMatrix::zeros(d, d);
    for k in 0..d {
        let mut diag = m[(k, k)].re + tol;
        for j in 0..k {
            diag -= l[(k, j)].norm_sqr();
        }
        if diag <= 0.0 || !diag.is_finite() {
            return false;
        }
        let root = diag.sqrt();
        l[(k, k)] = C64::new(root, 0.0);
        for i in k + 1..d {
            let mut acc = m[(i, k)];
            for j in 0..k {
                acc -= l[(i, j)] * l[(k, j)].conj();
            }
            l[(i, k)] = acc / root;
        }
    }
    true
}

/// Normalised pure state of an `n`-qubit register.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// Validates that the length is a power of two and the norm is one.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() || !amplitudes.len().is_power_of_two() {
            return Err(argument("state length must be a power of two"));
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-8 {
            return Err(argument(format!("state has norm {norm}, expected 1")));
        }
        Ok(StateVector { amplitudes })
    }

    /// `|0…0⟩` on `n` qubits.
    pub fn zero(n: usize) -> Result<Self> {
        check_dim(1usize.checked_shl(n as u32).unwrap_or(usize::MAX))?;
        let mut amplitudes = vec![ZERO; 1 << n];
        amplitudes[0] = ONE;
        Ok(StateVector { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `|s⟩⟨s|`.
    pub fn projector(&self) -> ComplexMatrix {
        let d = self.dim();
        let mut m = ComplexMatrix::zeros(d, d);
        for r in 0..d {
            for c in 0..d {
                m[(r, c)] = self.amplitudes[r] * self.amplitudes[c].conj();
            }
        }
        m
    }
}

/// A set of qubits of an `n`-qubit register, stored sorted and 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SubsetRepr", into = "SubsetRepr")]
pub struct QubitSubset {
    n: usize,
    members: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct SubsetRepr {
    n: usize,
    members: Vec<usize>,
}

impl TryFrom<SubsetRepr> for QubitSubset {
    type Error = Error;

    fn try_from(r: SubsetRepr) -> Result<Self> {
        QubitSubset::new(r.n, r.members)
    }
}

impl From<QubitSubset> for SubsetRepr {
    fn from(s: QubitSubset) -> Self {
        SubsetRepr { n: s.n, members: s.members }
    }
}

impl QubitSubset {
    /// Members may be given in any order; duplicates and out-of-range
    /// indices are rejected.
    pub fn new(n: usize, mut members: Vec<usize>) -> Result<Self> {
        validate_targets(&members, n)?;
        members.sort_unstable();
        Ok(QubitSubset { n, members })
    }

    pub fn single(n: usize, k: usize) -> Result<Self> {
        Self::new(n, vec![k])
    }

    pub fn whole(n: usize) -> Self {
        QubitSubset { n, members: (1..=n).collect() }
    }

    pub fn empty(n: usize) -> Self {
        QubitSubset { n, members: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Hilbert-space dimension `2^|A|`.
    pub fn dim(&self) -> usize {
        1 << self.members.len()
    }

    pub fn contains(&self, q: usize) -> bool {
        self.members.binary_search(&q).is_ok()
    }

    pub fn complement(&self) -> Self {
        QubitSubset {
            n: self.n,
            members: (1..=self.n).filter(|q| !self.contains(*q)).collect(),
        }
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.members.iter().all(|q| !other.contains(*q))
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.members.iter().all(|q| other.contains(*q))
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut members: Vec<usize> =
            self.members.iter().chain(&other.members).copied().collect();
        members.sort_unstable();
        members.dedup();
        QubitSubset { n: self.n.max(other.n), members }
    }

    pub fn difference(&self, other: &Self) -> Self {
        QubitSubset {
            n: self.n,
            members: self.members.iter().copied().filter(|q| !other.contains(*q)).collect(),
        }
    }

    /// Position of qubit `q` inside this subset (0 = most significant).
    pub(crate) fn position(&self, q: usize) -> Option<usize> {
        self.members.binary_search(&q).ok()
    }
}

impl fmt::Display for QubitSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members.iter().map(|q| q.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Single-qubit Pauli matrices.
pub mod pauli {
    use super::{ComplexMatrix, C64, I, ONE, ZERO};

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[[ZERO, -I], [I, ZERO]])
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[[ONE, ZERO], [ZERO, -ONE]])
    }

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    #[allow(dead_code)]
    pub(crate) fn scalar(z: C64) -> ComplexMatrix {
        ComplexMatrix::from_rows(&[[z]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn swap() -> ComplexMatrix {
        ComplexMatrix::from_real(&[
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ])
    }

    fn cnot() -> ComplexMatrix {
        ComplexMatrix::from_real(&[
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0],
        ])
    }

    #[test]
    fn kron_identities() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2).unwrap(), ComplexMatrix::identity(4));

        let xi = kron(&pauli::x(), &i2).unwrap();
        let expected = ComplexMatrix::from_real(&[
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
        ]);
        assert_eq!(xi, expected);

        let zz = kron(&pauli::z(), &pauli::z()).unwrap();
        assert_eq!(zz, ComplexMatrix::diagonal(&[ONE, -ONE, -ONE, ONE]));
    }

    #[test]
    fn kron_rejects_oversized_result() {
        let big = ComplexMatrix::identity(MAX_DIM);
        assert!(matches!(
            kron(&big, &ComplexMatrix::identity(2)),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn embed_placements() {
        let ix = embed_gate(&pauli::x(), &[2], 2).unwrap();
        assert_eq!(ix, kron(&ComplexMatrix::identity(2), &pauli::x()).unwrap());

        assert_eq!(embed_gate(&cnot(), &[1, 2], 2).unwrap(), cnot());

        // Control on qubit 2: check every basis vector by hand.
        let rev = embed_gate(&cnot(), &[2, 1], 2).unwrap();
        for b in 0..4usize {
            let (b1, b2) = (b >> 1 & 1, b & 1);
            let out = if b2 == 1 { (b1 ^ 1) << 1 | b2 } else { b };
            for r in 0..4 {
                let want = if r == out { ONE } else { ZERO };
                assert_eq!(rev[(r, b)], want);
            }
        }
        let s = swap();
        assert_eq!(rev, &(&s * &cnot()) * &s);
    }

    #[test]
    fn embed_rejects_bad_arguments() {
        assert!(embed_gate(&cnot(), &[1], 2).is_err());
        assert!(embed_gate(&pauli::x(), &[3], 2).is_err());
        assert!(embed_gate(&cnot(), &[1, 1], 2).is_err());
        assert!(embed_gate(&pauli::x(), &[0], 2).is_err());
    }

    #[test]
    fn embed_scalar_on_empty_targets() {
        let phase = c(0.0, 1.0);
        let m = embed_gate(&pauli::scalar(phase), &[], 2).unwrap();
        assert_eq!(m, ComplexMatrix::identity(4).scale(phase));
    }

    #[test]
    fn partial_trace_examples() {
        let rho = ComplexMatrix::from_rows(&[[c(0.7, 0.0), c(0.1, 0.2)], [c(0.1, -0.2), c(0.3, 0.0)]]);
        let sigma = ComplexMatrix::from_rows(&[[c(2.0, 0.0), c(0.0, 1.0)], [c(0.0, -1.0), c(1.0, 0.0)]]);
        let prod = kron(&rho, &sigma).unwrap();
        let out = partial_trace(&prod, &QubitSubset::single(2, 2).unwrap()).unwrap();
        assert!(out.max_diff(&rho.scale(sigma.trace())) < 1e-15);

        // |Φ+⟩⟨Φ+| traced over qubit 2: sum the qubit-2 diagonal blocks.
        let h = 0.5f64.sqrt();
        let phi = StateVector::new(vec![c(h, 0.0), ZERO, ZERO, c(h, 0.0)]).unwrap();
        let red = partial_trace(&phi.projector(), &QubitSubset::single(2, 2).unwrap()).unwrap();
        assert!(red.max_diff(&ComplexMatrix::identity(2).scale(c(0.5, 0.0))) < 1e-15);

        let tr = partial_trace(&ComplexMatrix::identity(4), &QubitSubset::single(2, 1).unwrap()).unwrap();
        assert_eq!(tr, ComplexMatrix::identity(2).scale(c(2.0, 0.0)));
    }

    #[test]
    fn partial_trace_of_everything_is_the_trace() {
        let m = ComplexMatrix::from_real(&[[1.0, 2.0], [3.0, 4.0]]);
        let out = partial_trace(&m, &QubitSubset::whole(1)).unwrap();
        assert_eq!(out, ComplexMatrix::from_real(&[[5.0]]));
        assert!(partial_trace(&ComplexMatrix::identity(2), &QubitSubset::whole(2)).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(numerical_rank(&vec![vec![0.0; 3]; 3], 1e-9), 0);
        let eye: Vec<Vec<f64>> =
            (0..5).map(|i| (0..5).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        assert_eq!(numerical_rank(&eye, 1e-9), 5);
        assert_eq!(numerical_rank(&[vec![1.0, 1.0], vec![1.0, 1.0 + 1e-12]], 1e-9), 1);
        assert_eq!(numerical_rank(&[], 1e-9), 0);
    }

    #[test]
    fn unitarity() {
        let h = 0.5f64.sqrt();
        let had = ComplexMatrix::from_real(&[[h, h], [h, -h]]);
        assert!(is_unitary(&had, 1e-12));
        assert!(!is_unitary(&ComplexMatrix::identity(2).scale(c(2.0, 0.0)), 1e-12));
        assert!(!is_unitary(&ComplexMatrix::zeros(2, 3), 1e-12));
    }

    #[test]
    fn psd_check() {
        let rho = ComplexMatrix::from_real(&[[0.5, 0.5], [0.5, 0.5]]);
        assert!(is_psd(&rho, 1e-8));
        let bad = ComplexMatrix::from_real(&[[1.0, 0.0], [0.0, -0.01]]);
        assert!(!is_psd(&bad, 1e-8));
    }

    #[test]
    fn subset_algebra() {
        let a = QubitSubset::new(4, vec![3, 1]).unwrap();
        assert_eq!(a.members(), &[1, 3]);
        assert_eq!(a.complement().members(), &[2, 4]);
        assert_eq!(a.dim(), 4);
        assert!(QubitSubset::new(4, vec![1, 1]).is_err());
        assert!(QubitSubset::new(4, vec![5]).is_err());
        let b = QubitSubset::single(4, 2).unwrap();
        assert!(a.is_disjoint(&b));
        assert_eq!(a.union(&b).members(), &[1, 2, 3]);
        assert_eq!(a.union(&b).difference(&a), b);
    }

    #[test]
    fn matrix_json_shape() {
        let m = ComplexMatrix::from_rows(&[[c(1.0, 0.0), c(0.0, -1.0)], [c(0.5, 0.0), ZERO]]);
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, r#"{"rows":2,"cols":2,"data":[[1.0,0.0],[0.0,-1.0],[0.5,0.0],[0.0,0.0]]}"#);
        let back: ComplexMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<ComplexMatrix>(r#"{"rows":2,"cols":2,"data":[[1,0]]}"#).is_err());
    }
}
