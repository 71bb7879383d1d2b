//! Closed-form dimension counts against measured Jacobian ranks.

use qlocal::dims::{empirical_descriptor_dim, theoretical_dims, DEFAULT_STEP};

fn main() -> qlocal::Result<()> {
    println!(" n  descriptor  universal  wavefunction  measured");
    for n in 1..=6u32 {
        let r = theoretical_dims(n)?;
        let measured = if n <= 3 {
            empirical_descriptor_dim(n as usize, 1, DEFAULT_STEP)?.to_string()
        } else {
            "-".into()
        };
        println!("{n:>2}  {:>10}  {:>9}  {:>12}  {measured:>8}", r.descriptor_dim, r.universal_dim, r.wavefunction_dim);
    }
    println!("{}", serde_json::to_string(&theoretical_dims(3)?)?);
    Ok(())
}
