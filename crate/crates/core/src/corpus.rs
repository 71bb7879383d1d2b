//! Builders for the shipped example networks: a Bell pair, the CHSH
//! experiment and measurement-free teleportation.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::descriptor::{expectation_pauli, final_descriptors, Pauli, PauliString};
use crate::error::{argument, Result};
use crate::oracle::{expectation_observable, run_state};

/// `CNOT·(H⊗𝟙)` on two qubits.
pub fn bell_circuit() -> Circuit {
    Circuit::empty(2)
        .and_then(|c| c.with("H", &[1], &[]))
        .and_then(|c| c.with("CNOT", &[1, 2], &[]))
        .expect("static circuit")
}

/// Measurement angles `(a0, a1, b0, b1)` in the x–z plane. Measuring
/// `cos a·Z + sin a·X` is the same as applying `RY(−a)` and measuring `Z`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChshAngles {
    pub a0: f64,
    pub a1: f64,
    pub b0: f64,
    pub b1: f64,
}

impl Default for ChshAngles {
    /// Settings that reach Tsirelson's bound `2√2`.
    fn default() -> Self {
        ChshAngles { a0: 0.0, a1: FRAC_PI_2, b0: FRAC_PI_4, b1: -FRAC_PI_4 }
    }
}

impl ChshAngles {
    /// `(a, b, sign)` of the four correlators in `S`.
    pub fn settings(&self) -> [(f64, f64, f64); 4] {
        [
            (self.a0, self.b0, 1.0),
            (self.a0, self.b1, 1.0),
            (self.a1, self.b0, 1.0),
            (self.a1, self.b1, -1.0),
        ]
    }
}

/// Four Bell pairs on qubits `(1,2)`, `(3,4)`, `(5,6)`, `(7,8)`, each
/// rotated into one of the four measurement settings.
pub fn chsh_circuit(angles: &ChshAngles) -> Circuit {
    let mut c = Circuit::empty(8).expect("n = 8");
    for (p, (a, b, _)) in angles.settings().into_iter().enumerate() {
        let (qa, qb) = (2 * p + 1, 2 * p + 2);
        c = c
            .with("H", &[qa], &[])
            .and_then(|c| c.with("CNOT", &[qa, qb], &[]))
            .and_then(|c| c.with("RY", &[qa], &[-a]))
            .and_then(|c| c.with("RY", &[qb], &[-b]))
            .expect("static circuit");
    }
    c
}

/// The four `Z⊗Z` correlators of [`chsh_circuit`], with their signs.
pub fn chsh_terms() -> Vec<(f64, PauliString)> {
    ChshAngles::default()
        .settings()
        .iter()
        .enumerate()
        .map(|(p, &(_, _, sign))| {
            let letters = [(2 * p + 1, Pauli::Z), (2 * p + 2, Pauli::Z)];
            (sign, PauliString::new(8, letters, 1.0).expect("valid string"))
        })
        .collect()
}

/// CHSH value computed both from descriptors and from the oracle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChshReport {
    pub correlators: Vec<f64>,
    pub s_descriptors: f64,
    pub s_oracle: f64,
}

/// Evaluates `S = E00 + E01 + E10 − E11` for an eight-qubit network laid
/// out like [`chsh_circuit`].
pub fn chsh_value(c: &Circuit) -> Result<ChshReport> {
    if c.n() != 8 {
        return Err(argument("the CHSH network has eight qubits"));
    }
    let descs = final_descriptors(c)?;
    let state = run_state(c)?;
    let mut report = ChshReport { correlators: Vec::new(), s_descriptors: 0.0, s_oracle: 0.0 };
    for (sign, p) in chsh_terms() {
        let e = expectation_pauli(&descs, &p)?;
        report.correlators.push(e);
        report.s_descriptors += sign * e;
        report.s_oracle += sign * expectation_observable(&state, &p.to_matrix()?)?;
    }
    Ok(report)
}

/// Closed form on `Φ⁺`: `E(a, b) = cos(a − b)`.
pub fn chsh_closed_form(angles: &ChshAngles) -> f64 {
    angles.settings().iter().map(|&(a, b, sign)| sign * (a - b).cos()).sum()
}

/// Teleports `RZ(φ)·RY(θ)|0⟩` from qubit 1 to qubit 3 with the classical
/// corrections replaced by `CNOT 2 3` and `CZ 1 3`.
pub fn teleport_circuit(theta: f64, phi: f64) -> Circuit {
    Circuit::empty(3)
        .and_then(|c| c.with("RY", &[1], &[theta]))
        .and_then(|c| c.with("RZ", &[1], &[phi]))
        .and_then(|c| c.with("H", &[2], &[]))
        .and_then(|c| c.with("CNOT", &[2, 3], &[]))
        .and_then(|c| c.with("CNOT", &[1, 2], &[]))
        .and_then(|c| c.with("H", &[1], &[]))
        .and_then(|c| c.with("CNOT", &[2, 3], &[]))
        .and_then(|c| c.with("CZ", &[1, 3], &[]))
        .expect("static circuit")
}

/// Bloch vector of `RZ(φ)·RY(θ)|0⟩`.
pub fn prepared_bloch(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptor::reduced_density_from_descriptor;

    #[test]
    fn tsirelson_bound() {
        let angles = ChshAngles::default();
        assert!((chsh_closed_form(&angles) - 2.0 * 2f64.sqrt()).abs() < 1e-15);
        let r = chsh_value(&chsh_circuit(&angles)).unwrap();
        assert!((r.s_descriptors - 2.0 * 2f64.sqrt()).abs() < 1e-10);
        assert!((r.s_descriptors - r.s_oracle).abs() < 1e-10);
        for e in &r.correlators {
            assert!((e.abs() - 0.5f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn teleported_state_arrives_on_qubit_three() {
        let (theta, phi) = (1.1, -0.7);
        let descs = final_descriptors(&teleport_circuit(theta, phi)).unwrap();
        let rho = reduced_density_from_descriptor(&descs[2]).unwrap();
        let got = rho.bloch_vector().unwrap();
        let want = prepared_bloch(theta, phi);
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-12, "{got:?} vs {want:?}");
        }
    }
}
