//! Circuits: an ordered list of gates acting on an `n`-qubit register
//! prepared in `|0…0⟩`. Each gate is one time step.

mod gates;
mod parse;

use std::fmt;

pub use gates::{builtin_gate, builtin_signature, BUILTIN_GATES};
pub use parse::{parse_circuit, render_circuit, ParseError, ParseErrorKind};

use crate::error::{argument, Error, Result};
use crate::linalg::{embed_gate, is_unitary, validate_targets, ComplexMatrix, DEFAULT_TOL};

/// One gate application.
#[derive(Clone, Debug, PartialEq)]
pub struct GateOp {
    name: String,
    targets: Vec<usize>,
    params: Vec<f64>,
    custom_matrix: Option<ComplexMatrix>,
}

impl GateOp {
    /// A built-in gate. The name is matched case-insensitively.
    pub fn builtin(name: &str, targets: &[usize], params: &[f64]) -> Result<Self> {
        let name = name.to_ascii_uppercase();
        let (arity, nparams) = builtin_signature(&name)
            .ok_or_else(|| argument(format!("unknown gate {name:?}")))?;
        if targets.len() != arity {
            return Err(argument(format!(
                "gate {name} acts on {arity} qubit(s), got {}",
                targets.len()
            )));
        }
        if params.len() != nparams {
            return Err(argument(format!(
                "gate {name} takes {nparams} parameter(s), got {}",
                params.len()
            )));
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(argument("gate parameters must be finite"));
        }
        check_distinct(targets)?;
        Ok(GateOp { name, targets: targets.to_vec(), params: params.to_vec(), custom_matrix: None })
    }

    /// A user-supplied unitary acting on `targets`.
    pub fn custom(name: &str, matrix: ComplexMatrix, targets: &[usize]) -> Result<Self> {
        if builtin_signature(&name.to_ascii_uppercase()).is_some() {
            return Err(argument(format!("custom gate {name:?} shadows a built-in gate")));
        }
        if !matrix.is_square() || matrix.rows() != 1 << targets.len() {
            return Err(argument(format!(
                "custom gate {name} is {}x{} but has {} target(s)",
                matrix.rows(),
                matrix.cols(),
                targets.len()
            )));
        }
        let deviation = matrix.unitarity_deviation();
        if deviation > DEFAULT_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        check_distinct(targets)?;
        Ok(GateOp {
            name: name.to_string(),
            targets: targets.to_vec(),
            params: Vec::new(),
            custom_matrix: Some(matrix),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn custom_matrix(&self) -> Option<&ComplexMatrix> {
        self.custom_matrix.as_ref()
    }

    /// The gate's `2^k x 2^k` unitary.
    pub fn matrix(&self) -> Result<ComplexMatrix> {
        match &self.custom_matrix {
            Some(m) => Ok(m.clone()),
            None => builtin_gate(&self.name, &self.params),
        }
    }

    /// The gate embedded into the full `n`-qubit register.
    pub fn embedded(&self, n: usize) -> Result<ComplexMatrix> {
        embed_gate(&self.matrix()?, &self.targets, n)
    }

    pub fn acts_on(&self, q: usize) -> bool {
        self.targets.contains(&q)
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if !self.params.is_empty() {
            let ps: Vec<String> = self.params.iter().map(|p| p.to_string()).collect();
            write!(f, "({})", ps.join(","))?;
        }
        for t in &self.targets {
            write!(f, " {t}")?;
        }
        Ok(())
    }
}

fn check_distinct(targets: &[usize]) -> Result<()> {
    for (i, q) in targets.iter().enumerate() {
        if targets[..i].contains(q) {
            return Err(argument(format!("qubit {q} listed twice")));
        }
    }
    Ok(())
}

/// A network of `n` qubits and its gates in time order.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n: usize,
    ops: Vec<GateOp>,
}

impl Circuit {
    pub fn new(n: usize, ops: Vec<GateOp>) -> Result<Self> {
        if n == 0 {
            return Err(argument("a circuit needs at least one qubit"));
        }
        for op in &ops {
            validate_targets(op.targets(), n)?;
        }
        Ok(Circuit { n, ops })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Appends a gate, checking its targets against the register size.
    pub fn push(&mut self, op: GateOp) -> Result<()> {
        validate_targets(op.targets(), self.n)?;
        self.ops.push(op);
        Ok(())
    }

    /// Convenience for chaining built-in gates.
    pub fn with(mut self, name: &str, targets: &[usize], params: &[f64]) -> Result<Self> {
        self.push(GateOp::builtin(name, targets, params)?)?;
        Ok(self)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Circuit) -> Result<Circuit> {
        if self.n != other.n {
            return Err(argument(format!(
                "cannot concatenate circuits on {} and {} qubits",
                self.n, other.n
            )));
        }
        let mut ops = self.ops.clone();
        ops.extend(other.ops.iter().cloned());
        Ok(Circuit { n: self.n, ops })
    }

    /// `U = G_T ⋯ G_2 G_1`.
    pub fn global_unitary(&self) -> Result<ComplexMatrix> {
        let mut u = identity_checked(self.n)?;
        for op in &self.ops {
            u = &op.embedded(self.n)? * &u;
        }
        Ok(u)
    }

    /// `[U_0 = I, U_1, …, U_T]` with `U_t = G_t U_{t-1}`.
    pub fn prefix_unitaries(&self) -> Result<Vec<ComplexMatrix>> {
        let mut out = Vec::with_capacity(self.ops.len() + 1);
        out.push(identity_checked(self.n)?);
        for op in &self.ops {
            let next = &op.embedded(self.n)? * out.last().expect("non-empty");
            out.push(next);
        }
        Ok(out)
    }
}

fn identity_checked(n: usize) -> Result<ComplexMatrix> {
    let dim = 1usize.checked_shl(n as u32).unwrap_or(usize::MAX);
    crate::linalg::check_dim(dim)?;
    Ok(ComplexMatrix::identity(dim))
}

/// Free-function form of [`Circuit::global_unitary`].
pub fn global_unitary(c: &Circuit) -> Result<ComplexMatrix> {
    c.global_unitary()
}

/// Free-function form of [`Circuit::prefix_unitaries`].
pub fn prefix_unitaries(c: &Circuit) -> Result<Vec<ComplexMatrix>> {
    c.prefix_unitaries()
}

/// `true` if every prefix unitary of the circuit is unitary within `tol`.
pub fn all_prefixes_unitary(c: &Circuit, tol: f64) -> Result<bool> {
    Ok(c.prefix_unitaries()?.iter().all(|u| is_unitary(u, tol)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{C64, ZERO};

    fn bell() -> Circuit {
        Circuit::empty(2).unwrap().with("H", &[1], &[]).unwrap().with("CNOT", &[1, 2], &[]).unwrap()
    }

    #[test]
    fn empty_circuit_is_identity() {
        let c = Circuit::empty(2).unwrap();
        assert_eq!(c.global_unitary().unwrap(), ComplexMatrix::identity(4));
        assert_eq!(c.prefix_unitaries().unwrap(), vec![ComplexMatrix::identity(4)]);
    }

    #[test]
    fn single_hadamard() {
        let c = Circuit::empty(1).unwrap().with("H", &[1], &[]).unwrap();
        let h = builtin_gate("H", &[]).unwrap();
        assert_eq!(c.global_unitary().unwrap(), h);
        assert_eq!(c.prefix_unitaries().unwrap(), vec![ComplexMatrix::identity(2), h]);
    }

    #[test]
    fn bell_unitary_first_column() {
        let u = bell().global_unitary().unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let col: Vec<C64> = (0..4).map(|r| u[(r, 0)]).collect();
        let want = [C64::new(s, 0.0), ZERO, ZERO, C64::new(s, 0.0)];
        for (a, b) in col.iter().zip(want) {
            assert!((a - b).norm() < 1e-15);
        }
        let prefixes = bell().prefix_unitaries().unwrap();
        assert_eq!(prefixes.len(), 3);
        let h1 = embed_gate(&builtin_gate("H", &[]).unwrap(), &[1], 2).unwrap();
        assert_eq!(prefixes[1], h1);
        assert!(prefixes[2].max_diff(&u) < 1e-15);
    }

    #[test]
    fn concatenation_multiplies_in_reverse() {
        let a = bell();
        let b = Circuit::empty(2).unwrap().with("RY", &[2], &[0.4]).unwrap().with("S", &[1], &[]).unwrap();
        let joined = a.then(&b).unwrap().global_unitary().unwrap();
        let product = &b.global_unitary().unwrap() * &a.global_unitary().unwrap();
        assert!(joined.max_diff(&product) < 1e-12);
    }

    #[test]
    fn gate_validation() {
        assert!(GateOp::builtin("CNOT", &[1, 1], &[]).is_err());
        assert!(GateOp::builtin("CNOT", &[1], &[]).is_err());
        assert!(GateOp::builtin("RX", &[1], &[f64::NAN]).is_err());
        assert!(Circuit::empty(2).unwrap().with("X", &[3], &[]).is_err());
        let not_unitary = ComplexMatrix::identity(2).scale(C64::new(2.0, 0.0));
        assert!(GateOp::custom("G", not_unitary, &[1]).is_err());
        assert!(GateOp::custom("H", ComplexMatrix::identity(2), &[1]).is_err());
    }
}
