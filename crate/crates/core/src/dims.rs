//! Dimension counts of the description spaces, closed form and measured.
//!
//! The measured descriptor dimension is the rank of the differential of
//! `U ↦ ⟦U⟧^{k}` at `U = 𝟙`, estimated with central finite differences along
//! every direction of the unitary group's tangent space.

use serde::{Deserialize, Serialize};

use crate::error::{argument, Error, Result};
use crate::evolution::build_evolution_matrix;
use crate::linalg::{numerical_rank, ComplexMatrix, QubitSubset, C64, ONE};

/// Dimensions of the description spaces of an `n`-qubit network.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub n: u32,
    /// Single-qubit descriptor space: `3/4 · 2^{2n}`.
    pub descriptor_dim: u64,
    /// Whole-network descriptor space, `U(2^n)/U(1)`: `2^{2n} − 1`.
    pub universal_dim: u64,
    /// Universal wave function up to norm and phase: `2^{n+1} − 2`.
    pub wavefunction_dim: u64,
    /// Single-qubit density matrices (Bloch ball).
    pub density_dim: u64,
}

/// Largest `n` whose counts fit in a `u64`.
pub const MAX_THEORETICAL_QUBITS: u32 = 31;

pub fn theoretical_dims(n: u32) -> Result<DimensionReport> {
    if n < 1 {
        return Err(argument("dimension counts need at least one qubit"));
    }
    if n > MAX_THEORETICAL_QUBITS {
        return Err(argument(format!("dimension counts overflow beyond n = {MAX_THEORETICAL_QUBITS}")));
    }
    let four_n: u64 = 1 << (2 * n);
    Ok(DimensionReport {
        n,
        descriptor_dim: 3 * (four_n / 4),
        universal_dim: four_n - 1,
        wavefunction_dim: (1u64 << (n + 1)) - 2,
        density_dim: 3,
    })
}

/// Default finite-difference step.
pub const DEFAULT_STEP: f64 = 1e-5;
/// Default rank tolerance, relative to the Jacobian's largest entry.
pub const DEFAULT_RANK_TOL: f64 = 1e-6;
/// Default cap on `n` for the measured dimension.
pub const DEFAULT_EMPIRICAL_CAP: usize = 3;

/// Knobs for [`empirical_descriptor_dim_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EmpiricalOptions {
    pub step: f64,
    pub rank_tol: f64,
    pub max_qubits: usize,
}

impl Default for EmpiricalOptions {
    fn default() -> Self {
        EmpiricalOptions {
            step: DEFAULT_STEP,
            rank_tol: DEFAULT_RANK_TOL,
            max_qubits: DEFAULT_EMPIRICAL_CAP,
        }
    }
}

/// One basis direction of the Lie algebra `u(N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TangentDirection {
    /// `i·E_aa`
    Diagonal(usize),
    /// `E_ab − E_ba`, `a < b`
    Antisymmetric(usize, usize),
    /// `i·(E_ab + E_ba)`, `a < b`
    Symmetric(usize, usize),
}

/// All `N²` basis directions of `u(N)`.
pub fn tangent_basis(dim: usize) -> Vec<TangentDirection> {
    let mut out: Vec<TangentDirection> = (0..dim).map(TangentDirection::Diagonal).collect();
    for a in 0..dim {
        for b in a + 1..dim {
            out.push(TangentDirection::Antisymmetric(a, b));
            out.push(TangentDirection::Symmetric(a, b));
        }
    }
    out
}

impl TangentDirection {
    /// The generator `D` itself.
    pub fn generator(self, dim: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(dim, dim);
        match self {
            TangentDirection::Diagonal(a) => m[(a, a)] = C64::new(0.0, 1.0),
            TangentDirection::Antisymmetric(a, b) => {
                m[(a, b)] = ONE;
                m[(b, a)] = -ONE;
            }
            TangentDirection::Symmetric(a, b) => {
                m[(a, b)] = C64::new(0.0, 1.0);
                m[(b, a)] = C64::new(0.0, 1.0);
            }
        }
        m
    }

    /// `exp(s·D)` in closed form. Each off-diagonal generator squares to
    /// minus the projector on its 2-dimensional block, so the exponential
    /// is `1 + (cos s − 1)·P + sin s·D`.
    pub fn exp(self, s: f64, dim: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::identity(dim);
        match self {
            TangentDirection::Diagonal(a) => m[(a, a)] = C64::from_polar(1.0, s),
            TangentDirection::Antisymmetric(a, b) | TangentDirection::Symmetric(a, b) => {
                let (sin, cos) = s.sin_cos();
                let d = self.generator(dim);
                for (r, c) in [(a, a), (b, b), (a, b), (b, a)] {
                    let proj = if r == c { cos - 1.0 } else { 0.0 };
                    m[(r, c)] += C64::new(proj, 0.0) + d[(r, c)] * sin;
                }
            }
        }
        m
    }
}

/// Measured dimension of qubit `k`'s descriptor space with default options
/// and the given step.
pub fn empirical_descriptor_dim(n: usize, k: usize, step: f64) -> Result<usize> {
    empirical_descriptor_dim_with(n, k, EmpiricalOptions { step, ..EmpiricalOptions::default() })
}

pub fn empirical_descriptor_dim_with(n: usize, k: usize, opts: EmpiricalOptions) -> Result<usize> {
    let jac = descriptor_jacobian(n, k, &opts)?;
    let scale = jac.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    Ok(numerical_rank(&jac, opts.rank_tol * scale))
}

/// Rows: one per tangent direction; columns: real and imaginary parts of
/// every entry of every cell of `⟦U⟧^{k}`.
fn descriptor_jacobian(n: usize, k: usize, opts: &EmpiricalOptions) -> Result<Vec<Vec<f64>>> {
    if n == 0 {
        return Err(argument("need at least one qubit"));
    }
    if n > opts.max_qubits {
        return Err(Error::Resource { requested: 1 << (2 * n), cap: 1 << (2 * opts.max_qubits) });
    }
    if !(opts.step > 0.0 && opts.step.is_finite()) {
        return Err(argument("finite-difference step must be positive"));
    }
    let a = QubitSubset::single(n, k)?;
    let dim = 1usize << n;
    let h = opts.step;
    tangent_basis(dim)
        .into_iter()
        .map(|dir| {
            let plus = build_evolution_matrix(&dir.exp(h, dim), &a)?;
            let minus = build_evolution_matrix(&dir.exp(-h, dim), &a)?;
            let mut row = Vec::with_capacity(2 * 4 * dim * dim);
            for i in 0..2 {
                for j in 0..2 {
                    let diff = plus.cell(i, j) - minus.cell(i, j);
                    for z in diff.data() {
                        row.push(z.re / (2.0 * h));
                        row.push(z.im / (2.0 * h));
                    }
                }
            }
            Ok(row)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms_small_n() {
        let r = theoretical_dims(1).unwrap();
        assert_eq!((r.descriptor_dim, r.universal_dim, r.wavefunction_dim, r.density_dim), (3, 3, 2, 3));
        let r = theoretical_dims(2).unwrap();
        assert_eq!((r.descriptor_dim, r.universal_dim, r.wavefunction_dim), (12, 15, 6));
        let r = theoretical_dims(3).unwrap();
        assert_eq!((r.descriptor_dim, r.wavefunction_dim), (48, 14));
        assert!(r.descriptor_dim > r.wavefunction_dim);
        assert!(theoretical_dims(0).is_err());
        assert!(theoretical_dims(32).is_err());
        assert_eq!(theoretical_dims(31).unwrap().universal_dim, u64::MAX >> 2);
    }

    #[test]
    fn closed_form_exponentials_are_unitary_and_match_series() {
        let dim = 4;
        for dir in tangent_basis(dim) {
            let e = dir.exp(0.37, dim);
            assert!(e.unitarity_deviation() < 1e-15);
            // Truncated Taylor series as an independent check.
            let d = dir.generator(dim).scale(C64::new(0.37, 0.0));
            let mut term = ComplexMatrix::identity(dim);
            let mut sum = ComplexMatrix::identity(dim);
            for p in 1..30 {
                term = (&term * &d).scale(C64::new(1.0 / p as f64, 0.0));
                sum = &sum + &term;
            }
            assert!(e.max_diff(&sum) < 1e-15, "{dir:?}");
        }
        assert_eq!(tangent_basis(8).len(), 64);
    }

    #[test]
    fn measured_ranks() {
        assert_eq!(empirical_descriptor_dim(1, 1, DEFAULT_STEP).unwrap(), 3);
        assert_eq!(empirical_descriptor_dim(2, 1, DEFAULT_STEP).unwrap(), 12);
        assert_eq!(empirical_descriptor_dim(2, 2, DEFAULT_STEP).unwrap(), 12);
    }

    #[test]
    fn resource_cap_and_bad_step() {
        assert!(matches!(empirical_descriptor_dim(4, 1, DEFAULT_STEP), Err(Error::Resource { .. })));
        assert!(empirical_descriptor_dim(2, 3, DEFAULT_STEP).is_err());
        assert!(empirical_descriptor_dim(2, 1, 0.0).is_err());
    }
}
