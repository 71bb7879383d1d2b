//! Descriptors and single-qubit evolution matrices are the same object in
//! two operator bases; evolution matrices in turn decide when two global
//! unitaries describe the same local state of affairs for a subsystem.

use serde::{Deserialize, Serialize};

use crate::descriptor::{descriptor_y, Descriptor};
use crate::error::{argument, Error, Result};
use crate::evolution::{build_evolution_matrix, EvolutionMatrix};
use crate::linalg::{embed_gate, partial_trace, ComplexMatrix, QubitSubset, C64, I};

/// Default max-norm tolerance for equivalence decisions.
pub const EQUIVALENCE_TOL: f64 = 1e-9;

/// Single-qubit evolution matrix from a descriptor:
///
/// ```text
/// [[ (1 + q_z)/2        (q_x − i q_y)/2 ]
///  [ (q_x + i q_y)/2    (1 − q_z)/2     ]]
/// ```
pub fn descriptor_to_evolution(d: &Descriptor) -> Result<EvolutionMatrix> {
    let half = C64::new(0.5, 0.0);
    let id = ComplexMatrix::identity(d.qx.rows());
    let iy = descriptor_y(d).scale(I);
    let cells = vec![
        (&id + &d.qz).scale(half),
        (&d.qx - &iy).scale(half),
        (&d.qx + &iy).scale(half),
        (&id - &d.qz).scale(half),
    ];
    EvolutionMatrix::from_cells(QubitSubset::single(d.n, d.qubit)?, cells)
}

/// Inverse of [`descriptor_to_evolution`]: `q_x = ⟦U⟧_{01} + ⟦U⟧_{10}`,
/// `q_z = ⟦U⟧_{00} − ⟦U⟧_{11}`.
pub fn evolution_to_descriptor(em: &EvolutionMatrix) -> Result<Descriptor> {
    let [qubit] = em.subset().members() else {
        return Err(argument(format!(
            "descriptors exist for single qubits only, got subsystem {}",
            em.subset()
        )));
    };
    let qx = em.cell(0, 1) + em.cell(1, 0);
    let qz = em.cell(0, 0) - em.cell(1, 1);
    Descriptor::new(*qubit, em.n(), qx, qz)
}

/// Result of comparing two global unitaries on a subsystem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceVerdict {
    pub equivalent: bool,
    pub subset: QubitSubset,
    /// `W` on the complement with `u2 = (𝟙^A ⊗ W)·u`, when found.
    pub witness: Option<ComplexMatrix>,
    /// `‖(𝟙^A ⊗ W)·u − u2‖` for the returned witness.
    pub witness_residual: Option<f64>,
    /// Max-norm distance between the two evolution matrices.
    pub max_deviation: f64,
    /// Grid cell where the evolution matrices differ most, when they differ.
    pub distinguishing_cell: Option<(usize, usize)>,
    pub tolerance: f64,
}

/// Candidate `W = tr_A(u2·u†) / 2^|A|`, returned only if `𝟙^A ⊗ W`
/// reproduces `u2·u†` within `tol` and `W` is unitary within `tol`.
pub fn extract_local_witness(
    u: &ComplexMatrix,
    u2: &ComplexMatrix,
    a: &QubitSubset,
    tol: f64,
) -> Result<Option<ComplexMatrix>> {
    Ok(witness_with_residual(u, u2, a, tol)?.map(|(w, _)| w))
}

fn witness_with_residual(
    u: &ComplexMatrix,
    u2: &ComplexMatrix,
    a: &QubitSubset,
    tol: f64,
) -> Result<Option<(ComplexMatrix, f64)>> {
    let full = 1usize << a.n();
    for m in [u, u2] {
        if !m.is_square() || m.rows() != full {
            return Err(argument(format!("expected {full}x{full} operators")));
        }
    }
    let relative = u2 * &u.adjoint();
    let w = partial_trace(&relative, a)?.scale(C64::new(1.0 / a.dim() as f64, 0.0));
    let comp = a.complement();
    let lifted = embed_gate(&w, comp.members(), a.n())?;
    if lifted.max_diff(&relative) > tol || w.unitarity_deviation() > tol {
        return Ok(None);
    }
    let residual = (&lifted * u).max_diff(u2);
    Ok(Some((w, residual)))
}

/// Decides whether `u` and `u2` induce the same evolution matrix on `a`,
/// i.e. whether they differ only by an operation on the complement.
pub fn noumenally_equivalent(
    u: &ComplexMatrix,
    u2: &ComplexMatrix,
    a: &QubitSubset,
    tol: f64,
) -> Result<EquivalenceVerdict> {
    if u.rows() != u2.rows() {
        return Err(argument("unitaries act on registers of different sizes"));
    }
    let em = build_evolution_matrix(u, a)?;
    let em2 = build_evolution_matrix(u2, a)?;
    let (cell, max_deviation) = em.worst_cell(&em2).expect("same subset");
    let mut verdict = EquivalenceVerdict {
        equivalent: false,
        subset: a.clone(),
        witness: None,
        witness_residual: None,
        max_deviation,
        distinguishing_cell: None,
        tolerance: tol,
    };
    if max_deviation > tol {
        verdict.distinguishing_cell = Some(cell);
        return Ok(verdict);
    }
    // Witness residuals scale with the register dimension.
    let witness_tol = tol * u.rows() as f64;
    match witness_with_residual(u, u2, a, witness_tol)? {
        Some((w, residual)) => {
            verdict.equivalent = true;
            verdict.witness = Some(w);
            verdict.witness_residual = Some(residual);
        }
        None => {
            return Err(Error::Integrity(format!(
                "evolution matrices agree within {tol:e} but no witness was found"
            )))
        }
    }
    Ok(verdict)
}

/// `|tr(a†b)| / dim`, equal to one iff `a = e^{iθ} b` for unitaries.
pub fn phase_invariant_fidelity(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (&a.adjoint() * b).trace().norm() / a.rows() as f64
}
