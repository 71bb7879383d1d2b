//! Built-in gate vocabulary.
//!
//! Conventions (angles in radians):
//!
//! | gate | matrix |
//! |------|--------|
//! | `H` | `[[1, 1], [1, -1]] / √2` |
//! | `S` | `diag(1, i)` |
//! | `T` | `diag(1, e^{iπ/4})` |
//! | `RX(θ)` | `exp(-iθX/2) = [[cos θ/2, -i sin θ/2], [-i sin θ/2, cos θ/2]]` |
//! | `RY(θ)` | `exp(-iθY/2) = [[cos θ/2, -sin θ/2], [sin θ/2, cos θ/2]]` |
//! | `RZ(θ)` | `exp(-iθZ/2) = diag(e^{-iθ/2}, e^{iθ/2})` |
//! | `PHASE(φ)` | `diag(1, e^{iφ})` |
//! | `CNOT a b` | control `a`, target `b` |
//! | `CZ`, `SWAP` | standard two-qubit gates |
//! | `CCNOT a b c` | Toffoli, controls `a b`, target `c` |

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{argument, Result};
use crate::linalg::{pauli, ComplexMatrix, C64, I, ONE, ZERO};

/// Names of the built-in gates, in documentation order.
pub const BUILTIN_GATES: &[&str] = &[
    "X", "Y", "Z", "H", "S", "T", "RX", "RY", "RZ", "PHASE", "CNOT", "CZ", "SWAP", "CCNOT",
];

/// `(qubit arity, parameter count)` of a built-in gate.
pub fn builtin_signature(name: &str) -> Option<(usize, usize)> {
    Some(match name {
        "X" | "Y" | "Z" | "H" | "S" | "T" => (1, 0),
        "RX" | "RY" | "RZ" | "PHASE" => (1, 1),
        "CNOT" | "CZ" | "SWAP" => (2, 0),
        "CCNOT" => (3, 0),
        _ => return None,
    })
}

/// The unitary of a built-in gate.
pub fn builtin_gate(name: &str, params: &[f64]) -> Result<ComplexMatrix> {
    let (_, nparams) =
        builtin_signature(name).ok_or_else(|| argument(format!("unknown gate {name:?}")))?;
    if params.len() != nparams {
        return Err(argument(format!(
            "gate {name} takes {nparams} parameter(s), got {}",
            params.len()
        )));
    }
    let m = match name {
        "X" => pauli::x(),
        "Y" => pauli::y(),
        "Z" => pauli::z(),
        "H" => ComplexMatrix::from_real(&[
            [FRAC_1_SQRT_2, FRAC_1_SQRT_2],
            [FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
        ]),
        "S" => ComplexMatrix::diagonal(&[ONE, I]),
        "T" => ComplexMatrix::diagonal(&[ONE, C64::from_polar(1.0, std::f64::consts::FRAC_PI_4)]),
        "RX" => {
            let (s, c) = (params[0] / 2.0).sin_cos();
            ComplexMatrix::from_rows(&[[C64::new(c, 0.0), C64::new(0.0, -s)], [
                C64::new(0.0, -s),
                C64::new(c, 0.0),
            ]])
        }
        "RY" => {
            let (s, c) = (params[0] / 2.0).sin_cos();
            ComplexMatrix::from_real(&[[c, -s], [s, c]])
        }
        "RZ" => ComplexMatrix::diagonal(&[
            C64::from_polar(1.0, -params[0] / 2.0),
            C64::from_polar(1.0, params[0] / 2.0),
        ]),
        "PHASE" => ComplexMatrix::diagonal(&[ONE, C64::from_polar(1.0, params[0])]),
        "CNOT" => permutation(&[0, 1, 3, 2]),
        "CZ" => ComplexMatrix::diagonal(&[ONE, ONE, ONE, -ONE]),
        "SWAP" => permutation(&[0, 2, 1, 3]),
        "CCNOT" => permutation(&[0, 1, 2, 3, 4, 5, 7, 6]),
        _ => unreachable!("signature table and matrix table disagree"),
    };
    Ok(m)
}

/// Permutation matrix sending `|i⟩` to `|perm[i]⟩`.
fn permutation(perm: &[usize]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(perm.len(), perm.len());
    for (i, &j) in perm.iter().enumerate() {
        m[(j, i)] = ONE;
    }
    debug_assert!(m.data().iter().filter(|z| **z != ZERO).count() == perm.len());
    m
}
