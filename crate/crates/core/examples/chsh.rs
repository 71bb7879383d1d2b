//! CHSH value of a Bell pair computed from descriptors.

use qlocal::corpus::{chsh_circuit, chsh_closed_form, chsh_value, ChshAngles};

fn main() -> qlocal::Result<()> {
    let angles = ChshAngles::default();
    let report = chsh_value(&chsh_circuit(&angles))?;
    for ((a, b, sign), e) in angles.settings().iter().zip(&report.correlators) {
        println!("E({a:+.4}, {b:+.4}) = {e:+.12}  (sign {sign:+})");
    }
    println!("S from descriptors = {:.15}", report.s_descriptors);
    println!("S from the oracle  = {:.15}", report.s_oracle);
    println!("closed form        = {:.15}", chsh_closed_form(&angles));
    Ok(())
}
