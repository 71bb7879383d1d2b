//! Recovering the global unitary, up to a phase, from the evolution matrices
//! of every qubit, and using it to evaluate the network on a different
//! initial state.

use crate::circuit::Circuit;
use crate::descriptor::PauliString;
use crate::error::{argument, Error, Result};
use crate::evolution::{build_evolution_matrix, join_all, EvolutionMatrix};
use crate::linalg::{ComplexMatrix, StateVector, C64, DEFAULT_TOL};
use crate::oracle::{expectation_observable, run_state};

/// Tolerance for the consistency checks done while reconstructing.
pub const RECONSTRUCT_TOL: f64 = 1e-8;

/// Joins one evolution matrix per qubit into the whole-system matrix and
/// reads `U` off it, fixing the phase so that the largest-magnitude entry is
/// real and positive.
pub fn reconstruct_unitary(ems: &[EvolutionMatrix]) -> Result<ComplexMatrix> {
    let n = ems.first().ok_or_else(|| argument("no evolution matrices given"))?.n();
    let mut ordered: Vec<&EvolutionMatrix> = ems.iter().collect();
    ordered.sort_by_key(|em| em.subset().members().first().copied());
    for (k, em) in ordered.iter().enumerate() {
        if em.n() != n {
            return Err(Error::Integrity("evolution matrices disagree on the register size".into()));
        }
        if em.subset().members() != [k + 1] {
            return Err(Error::Integrity(format!(
                "expected exactly one single-qubit evolution matrix for each of qubits 1..={n}"
            )));
        }
        em.check_invariants(DEFAULT_TOL)?;
    }
    if ordered.len() != n {
        return Err(Error::Integrity(format!("expected {n} evolution matrices, got {}", ordered.len())));
    }
    let owned: Vec<EvolutionMatrix> = ordered.into_iter().cloned().collect();
    reconstruct_from_whole(&join_all(&owned)?)
}

/// Reads `U` (up to phase) off the whole-system evolution matrix, whose
/// entries are `⟨ℓ|⟦U⟧_{ij}|k⟩ = conj(u_{jℓ})·u_{ik}`.
pub fn reconstruct_from_whole(whole: &EvolutionMatrix) -> Result<ComplexMatrix> {
    if whole.subset().len() != whole.n() {
        return Err(argument("the evolution matrix must cover the whole register"));
    }
    let dim = whole.dim();
    // |u_{ik}|² sits on the diagonal of the diagonal cells.
    let (mut i0, mut k0, mut best) = (0, 0, f64::NEG_INFINITY);
    for i in 0..dim {
        let cell = whole.cell(i, i);
        for k in 0..dim {
            let w = cell[(k, k)].re;
            if w > best {
                (i0, k0, best) = (i, k, w);
            }
        }
    }
    if !(best > 0.0) {
        return Err(Error::Integrity("evolution matrix has no positive diagonal entry".into()));
    }
    let norm = best.sqrt();
    let mut u = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        let cell = whole.cell(i, i0);
        for k in 0..dim {
            u[(i, k)] = cell[(k0, k)] / norm;
        }
    }

    let deviation = u.unitarity_deviation();
    if deviation > RECONSTRUCT_TOL {
        return Err(Error::Integrity(format!(
            "reconstructed operator is not unitary (deviation {deviation:e})"
        )));
    }
    // The whole grid must be the one generated by the reconstructed operator.
    let rebuilt = build_evolution_matrix(&u, whole.subset()).map_err(|e| Error::Integrity(e.to_string()))?;
    let mismatch = rebuilt.distance(whole).expect("same subset");
    if mismatch > RECONSTRUCT_TOL {
        return Err(Error::Integrity(format!(
            "evolution matrices are inconsistent with any single unitary (mismatch {mismatch:e})"
        )));
    }
    Ok(u)
}

/// `⟨Ψ′|O|Ψ′⟩` for `|Ψ′⟩ = U·V|0⟩`, with `U` reconstructed from the per-qubit
/// evolution matrices and `V` the preparation circuit.
pub fn alternate_initial_expectation(
    ems: &[EvolutionMatrix],
    prep: &Circuit,
    obs: &PauliString,
) -> Result<f64> {
    let u = reconstruct_unitary(ems)?;
    expectation_after_prep(&u, prep, obs)
}

/// Same as [`alternate_initial_expectation`] for an explicitly given `U`.
/// The result does not depend on the phase of `u`.
pub fn expectation_after_prep(u: &ComplexMatrix, prep: &Circuit, obs: &PauliString) -> Result<f64> {
    if prep.n() != obs.n || u.rows() != 1 << prep.n() {
        return Err(argument("preparation, observable and unitary disagree on the register size"));
    }
    let prepared = run_state(prep)?;
    let psi = u.apply(prepared.amplitudes());
    let psi = StateVector::new(psi)?;
    expectation_observable(&psi, &obs.to_matrix()?)
}

/// Re-phases an operator; used to probe phase independence.
pub fn rephase(u: &ComplexMatrix, theta: f64) -> ComplexMatrix {
    u.scale(C64::from_polar(1.0, theta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::builtin_gate;
    use crate::correspondence::phase_invariant_fidelity;
    use crate::linalg::QubitSubset;

    fn per_qubit(u: &ComplexMatrix, n: usize) -> Vec<EvolutionMatrix> {
        (1..=n).map(|k| build_evolution_matrix(u, &QubitSubset::single(n, k).unwrap()).unwrap()).collect()
    }

    fn bell() -> Circuit {
        Circuit::empty(2).unwrap().with("H", &[1], &[]).unwrap().with("CNOT", &[1, 2], &[]).unwrap()
    }

    #[test]
    fn identity_is_recovered_exactly() {
        let u = reconstruct_unitary(&per_qubit(&ComplexMatrix::identity(8), 3)).unwrap();
        assert_eq!(u, ComplexMatrix::identity(8));
    }

    #[test]
    fn hadamard_up_to_phase() {
        // Diagonal read-off: |u_{00}|² = 1/2 is the first maximum, so
        // Û = H / (conj(h_00)/|h_00|) = H exactly.
        let h = builtin_gate("H", &[]).unwrap();
        let u = reconstruct_unitary(&per_qubit(&h, 1)).unwrap();
        assert!(u.max_diff(&h) < 1e-15);
    }

    #[test]
    fn bell_fidelity() {
        let u_true = bell().global_unitary().unwrap();
        let u = reconstruct_unitary(&per_qubit(&u_true, 2)).unwrap();
        assert!((phase_invariant_fidelity(&u, &u_true) - 1.0).abs() < 1e-8);
        // Input order does not matter.
        let mut ems = per_qubit(&u_true, 2);
        ems.reverse();
        assert_eq!(reconstruct_unitary(&ems).unwrap(), u);
    }

    #[test]
    fn inconsistent_sets_are_rejected() {
        let u_true = bell().global_unitary().unwrap();
        let mut ems = per_qubit(&u_true, 2);
        assert!(matches!(reconstruct_unitary(&ems[..1]), Err(Error::Integrity(_))));
        // Matrices from two different unitaries.
        ems[1] = per_qubit(&ComplexMatrix::identity(4), 2).remove(1);
        assert!(matches!(reconstruct_unitary(&ems), Err(Error::Integrity(_))));
        let dup = vec![ems[0].clone(), ems[0].clone()];
        assert!(matches!(reconstruct_unitary(&dup), Err(Error::Integrity(_))));
        assert!(reconstruct_unitary(&[]).is_err());
    }

    #[test]
    fn alternate_initial_examples() {
        let id_ems = per_qubit(&ComplexMatrix::identity(4), 2);
        let z1: PauliString = "ZI".parse().unwrap();
        let empty = Circuit::empty(2).unwrap();
        assert!((alternate_initial_expectation(&id_ems, &empty, &z1).unwrap() - 1.0).abs() < 1e-15);
        let flip = Circuit::empty(2).unwrap().with("X", &[1], &[]).unwrap();
        assert!((alternate_initial_expectation(&id_ems, &flip, &z1).unwrap() + 1.0).abs() < 1e-15);

        // CNOT·(H⊗I)|10⟩ = (|00⟩ − |11⟩)/√2, so ⟨ZZ⟩ = 1 and ⟨XX⟩ = −1.
        let bell_ems = per_qubit(&bell().global_unitary().unwrap(), 2);
        let zz: PauliString = "ZZ".parse().unwrap();
        let xx: PauliString = "XX".parse().unwrap();
        assert!((alternate_initial_expectation(&bell_ems, &flip, &zz).unwrap() - 1.0).abs() < 1e-14);
        assert!((alternate_initial_expectation(&bell_ems, &flip, &xx).unwrap() + 1.0).abs() < 1e-14);
    }

    #[test]
    fn expectation_is_phase_blind() {
        let u = bell().global_unitary().unwrap();
        let prep = Circuit::empty(2).unwrap().with("RY", &[2], &[0.4]).unwrap();
        let obs: PauliString = "XZ".parse().unwrap();
        let a = expectation_after_prep(&u, &prep, &obs).unwrap();
        let b = expectation_after_prep(&rephase(&u, 1.234), &prep, &obs).unwrap();
        assert!((a - b).abs() < 1e-15);
    }
}
