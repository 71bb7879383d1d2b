//! Descriptors of a Bell pair, and expectation values read off them.

use qlocal::corpus::bell_circuit;
use qlocal::descriptor::{descriptor_history, expectation_pauli, final_descriptors, reduced_density_from_descriptor};
use qlocal::PauliString;

fn main() -> qlocal::Result<()> {
    let bell = bell_circuit();
    let descs = final_descriptors(&bell)?;
    for d in &descs {
        println!("qubit {}: q_x =\n{:?}\nq_z =\n{:?}", d.qubit, d.qx, d.qz);
        let rho = reduced_density_from_descriptor(d)?;
        println!("reduced state bloch vector {:?}\n", rho.bloch_vector().unwrap());
    }
    for s in ["ZZ", "XX", "YY", "ZI", "XZ"] {
        let p: PauliString = s.parse()?;
        println!("<{s}> = {:+.12}", expectation_pauli(&descs, &p)?);
    }
    // Qubit 2's descriptor is untouched by the Hadamard on qubit 1.
    let history = descriptor_history(&bell, 2)?;
    println!("\nqubit 2 after H: change {:.1e}", history[1].distance(&history[0]));
    println!("qubit 2 after CNOT: change {:.3}", history[2].distance(&history[1]));
    Ok(())
}
