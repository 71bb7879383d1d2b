//! Measurement-free teleportation: the state prepared on qubit 1 shows up in
//! qubit 3's descriptor.

use qlocal::corpus::{prepared_bloch, teleport_circuit};
use qlocal::descriptor::{descriptor_history, reduced_density_from_descriptor};

fn main() -> qlocal::Result<()> {
    let (theta, phi) = (std::f64::consts::FRAC_PI_3, std::f64::consts::PI / 5.0);
    let c = teleport_circuit(theta, phi);
    for (step, d) in descriptor_history(&c, 3)?.iter().enumerate() {
        let bloch = reduced_density_from_descriptor(d)?.bloch_vector().unwrap();
        let gate = if step == 0 { "start".to_string() } else { c.ops()[step - 1].to_string() };
        println!("{gate:<28} qubit 3 bloch [{:+.6}, {:+.6}, {:+.6}]", bloch[0], bloch[1], bloch[2]);
    }
    let want = prepared_bloch(theta, phi);
    println!("prepared state               [{:+.6}, {:+.6}, {:+.6}]", want[0], want[1], want[2]);
    Ok(())
}
