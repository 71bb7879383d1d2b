//! The calculus of evolution matrices on a random three-qubit unitary:
//! local evolution, tracing out, joining and the map to density matrices.

use qlocal::evolution::{build_evolution_matrix, embed_local, evolve_local, join, morphism_phi, trace_out};
use qlocal::linalg::{partial_trace, QubitSubset, StateVector};
use qlocal::random::{random_unitary, rng};

fn main() -> qlocal::Result<()> {
    let mut r = rng(1);
    let u = random_unitary(8, &mut r);
    let a = QubitSubset::new(3, vec![1])?;
    let b = QubitSubset::new(3, vec![2, 3])?;
    let ab = a.union(&b);

    let em_a = build_evolution_matrix(&u, &a)?;
    let em_b = build_evolution_matrix(&u, &b)?;
    let em_ab = build_evolution_matrix(&u, &ab)?;
    println!("grid sizes: A {0}x{0}, B {1}x{1}, AB {2}x{2}", em_a.dim(), em_b.dim(), em_ab.dim());
    println!("invariants on A: {:?}", em_a.invariants());

    let v = random_unitary(2, &mut r);
    let local = evolve_local(&v, &em_a)?;
    let direct = build_evolution_matrix(&(&embed_local(&v, &a)? * &u), &a)?;
    println!("local evolution vs direct:   {:.2e}", local.distance(&direct).unwrap());
    println!("trace out B vs built on A:   {:.2e}", trace_out(&em_ab, &b)?.distance(&em_a).unwrap());
    println!("join of A and B vs built AB: {:.2e}", join(&em_a, &em_b)?.distance(&em_ab).unwrap());

    let state = StateVector::new(u.apply(StateVector::zero(3)?.amplitudes()))?;
    let oracle = partial_trace(&state.projector(), &a.complement())?;
    println!("phi vs reduced density:      {:.2e}", morphism_phi(&em_a)?.matrix.max_diff(&oracle));
    Ok(())
}
