//! Deciding whether two networks agree on a subsystem, with a witness.

use qlocal::circuit::Circuit;
use qlocal::correspondence::{noumenally_equivalent, EQUIVALENCE_TOL};
use qlocal::linalg::{ComplexMatrix, QubitSubset};

fn verdict(label: &str, u: &ComplexMatrix, u2: &ComplexMatrix, k: usize) -> qlocal::Result<()> {
    let v = noumenally_equivalent(u, u2, &QubitSubset::single(2, k)?, EQUIVALENCE_TOL)?;
    print!("{label}, qubit {k}: equivalent = {}", v.equivalent);
    match (&v.witness, v.distinguishing_cell) {
        (Some(w), _) => println!(", witness on the other qubit\n{w:?}"),
        (None, Some(cell)) => println!(", worst cell {cell:?} differs by {:.3}", v.max_deviation),
        _ => println!(),
    }
    Ok(())
}

fn main() -> qlocal::Result<()> {
    let id = ComplexMatrix::identity(4);
    let negate_control = Circuit::empty(2)?.with("CNOT", &[1, 2], &[])?.with("X", &[1], &[])?.with("CNOT", &[1, 2], &[])?;
    let negate_target = Circuit::empty(2)?.with("CNOT", &[1, 2], &[])?.with("X", &[2], &[])?.with("CNOT", &[1, 2], &[])?;
    for k in [1, 2] {
        verdict("CNOT (X on control) CNOT vs identity", &id, &negate_control.global_unitary()?, k)?;
    }
    verdict("CNOT (X on target) CNOT vs identity", &id, &negate_target.global_unitary()?, 1)?;
    Ok(())
}
