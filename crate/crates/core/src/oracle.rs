//! Schrödinger-picture reference simulator.
//!
//! Gates are applied straight to the state vector, never through the
//! assembled global unitary, so the results here are an independent check
//! on everything computed in the Heisenberg picture.

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{argument, Error, Result};
use crate::linalg::{
    is_psd, partial_trace, qubit_bit, scatter, ComplexMatrix, QubitSubset, StateVector, C64,
    DEFAULT_TOL, ZERO,
};

/// Reduced state of a subsystem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix {
    pub subset: QubitSubset,
    pub matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Checks Hermiticity and unit trace (1e-10) and positivity (1e-8).
    pub fn new(subset: QubitSubset, matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != subset.dim() {
            return Err(argument(format!(
                "density matrix of {} qubit(s) must be {}x{}",
                subset.len(),
                subset.dim(),
                subset.dim()
            )));
        }
        let dev = matrix.hermitian_deviation();
        if dev > DEFAULT_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let tr = matrix.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > DEFAULT_TOL {
            return Err(argument(format!("density matrix has trace {tr}")));
        }
        if !is_psd(&matrix, 1e-8) {
            return Err(argument("density matrix is not positive semidefinite"));
        }
        Ok(DensityMatrix { subset, matrix })
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Bloch vector `(⟨X⟩, ⟨Y⟩, ⟨Z⟩)` of a single-qubit state.
    pub fn bloch_vector(&self) -> Option<[f64; 3]> {
        (self.subset.len() == 1).then(|| {
            let m = &self.matrix;
            [2.0 * m[(1, 0)].re, 2.0 * m[(1, 0)].im, (m[(0, 0)] - m[(1, 1)]).re]
        })
    }
}

/// Applies a `2^k x 2^k` gate to `targets` of the state in place.
pub fn apply_gate(state: &mut StateVector, gate: &ComplexMatrix, targets: &[usize]) {
    let n = state.n_qubits();
    let k = targets.len();
    assert_eq!(gate.rows(), 1 << k, "gate size does not match target count");
    let mask = targets.iter().fold(0, |acc, &q| acc | qubit_bit(q, n));
    let offsets: Vec<usize> = (0..1 << k).map(|s| scatter(s, targets, n)).collect();
    let amps = state.amplitudes_mut();
    let mut local = vec![ZERO; 1 << k];
    for base in 0..amps.len() {
        if base & mask != 0 {
            continue;
        }
        for (slot, off) in local.iter_mut().zip(&offsets) {
            *slot = amps[base | off];
        }
        for (r, off) in offsets.iter().enumerate() {
            amps[base | off] = (0..1 << k).map(|c| gate[(r, c)] * local[c]).sum();
        }
    }
}

/// `U|0…0⟩`, gate by gate.
pub fn run_state(c: &Circuit) -> Result<StateVector> {
    run_from(c, StateVector::zero(c.n())?)
}

/// Runs `c` starting from an arbitrary state.
pub fn run_from(c: &Circuit, mut state: StateVector) -> Result<StateVector> {
    if state.n_qubits() != c.n() {
        return Err(argument("state and circuit sizes differ"));
    }
    for op in c.ops() {
        apply_gate(&mut state, &op.matrix()?, op.targets());
    }
    Ok(state)
}

/// `tr_{Ā} |s⟩⟨s|`.
pub fn reduced_density(s: &StateVector, a: &QubitSubset) -> Result<DensityMatrix> {
    if a.n() != s.n_qubits() {
        return Err(argument("subset and state sizes differ"));
    }
    let reduced = partial_trace(&s.projector(), &a.complement())?;
    DensityMatrix::new(a.clone(), reduced)
}

/// `⟨s|o|s⟩` for a Hermitian `o` on the full register.
pub fn expectation_observable(s: &StateVector, o: &ComplexMatrix) -> Result<f64> {
    if !o.is_square() || o.rows() != s.dim() {
        return Err(argument("observable dimension does not match the state"));
    }
    let dev = o.hermitian_deviation();
    if dev > DEFAULT_TOL {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let os = o.apply(s.amplitudes());
    let value: C64 = s.amplitudes().iter().zip(&os).map(|(a, b)| a.conj() * b).sum();
    real_part(value)
}

pub(crate) fn real_part(z: C64) -> Result<f64> {
    if z.im.abs() > DEFAULT_TOL {
        Err(Error::NotReal { imag: z.im })
    } else {
        Ok(z.re)
    }
}
