//! Rebuilding a circuit's unitary from per-qubit evolution matrices and
//! running it on a different initial state.

use qlocal::circuit::Circuit;
use qlocal::correspondence::phase_invariant_fidelity;
use qlocal::evolution::build_evolution_matrix;
use qlocal::linalg::QubitSubset;
use qlocal::oracle::{expectation_observable, run_state};
use qlocal::random::{random_circuit, rng};
use qlocal::reconstruct::{alternate_initial_expectation, reconstruct_unitary};
use qlocal::PauliString;

fn main() -> qlocal::Result<()> {
    let c = random_circuit(3, 20, &mut rng(5));
    let u = c.global_unitary()?;
    let ems = (1..=3)
        .map(|k| build_evolution_matrix(&u, &QubitSubset::single(3, k)?))
        .collect::<qlocal::Result<Vec<_>>>()?;
    let u_hat = reconstruct_unitary(&ems)?;
    println!("fidelity |tr(U_hat† U)|/8 = {:.15}", phase_invariant_fidelity(&u_hat, &u));

    let prep = Circuit::empty(3)?.with("X", &[2], &[])?.with("H", &[3], &[])?;
    let state = run_state(&prep.then(&c)?)?;
    for s in ["ZII", "IZI", "IIZ", "XYZ"] {
        let obs: PauliString = s.parse()?;
        let local = alternate_initial_expectation(&ems, &prep, &obs)?;
        let oracle = expectation_observable(&state, &obs.to_matrix()?)?;
        println!("<{s}> from |0,1,+>: {local:+.12} (oracle {oracle:+.12})");
    }
    Ok(())
}
