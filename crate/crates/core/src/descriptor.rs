//! Qubit descriptors: each qubit `k` carries the Heisenberg-evolved
//! pair `(q_x, q_z) = (U† X_k U, U† Z_k U)`, and every expectation value of
//! the network is a function of these pairs evaluated against the fixed
//! reference vector `|0…0⟩`.
//!
//! Descriptors are evolved by conjugation with the accumulated unitary. The
//! `y` component is not stored; [`descriptor_y`] rebuilds it as
//! `i·q_x·q_z`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{argument, Error, Result};
use crate::linalg::{embed_gate, pauli, ComplexMatrix, QubitSubset, C64, DEFAULT_TOL, I};
use crate::oracle::{real_part, DensityMatrix};

/// Descriptor of one qubit in an `n`-qubit network.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Descriptor {
    pub qubit: usize,
    pub n: usize,
    pub qx: ComplexMatrix,
    pub qz: ComplexMatrix,
}

impl Descriptor {
    /// Validates shapes and the Pauli algebra (`q² = I`, anticommutation,
    /// Hermitian and unitary components).
    pub fn new(qubit: usize, n: usize, qx: ComplexMatrix, qz: ComplexMatrix) -> Result<Self> {
        let d = Descriptor { qubit, n, qx, qz };
        if qubit == 0 || qubit > n {
            return Err(argument(format!("qubit {qubit} is outside 1..={n}")));
        }
        let dim = 1usize << n;
        for m in [&d.qx, &d.qz] {
            if !m.is_square() || m.rows() != dim {
                return Err(argument(format!("descriptor components must be {dim}x{dim}")));
            }
        }
        let dev = d.algebra_deviation();
        if dev > DEFAULT_TOL {
            return Err(Error::Integrity(format!(
                "descriptor of qubit {qubit} violates the Pauli algebra by {dev:e}"
            )));
        }
        Ok(d)
    }

    /// Largest violation of the Pauli relations satisfied by `(q_x, q_z)`.
    pub fn algebra_deviation(&self) -> f64 {
        let id = ComplexMatrix::identity(self.qx.rows());
        let xx = &self.qx * &self.qx;
        let zz = &self.qz * &self.qz;
        let anti = &(&self.qx * &self.qz) + &(&self.qz * &self.qx);
        [
            self.qx.hermitian_deviation(),
            self.qz.hermitian_deviation(),
            xx.max_diff(&id),
            zz.max_diff(&id),
            anti.max_norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Component `q_w` for `w ∈ {X, Y, Z}`.
    pub fn component(&self, w: Pauli) -> ComplexMatrix {
        match w {
            Pauli::X => self.qx.clone(),
            Pauli::Y => descriptor_y(self),
            Pauli::Z => self.qz.clone(),
        }
    }

    /// Max-norm distance between the components of two descriptors.
    pub fn distance(&self, other: &Descriptor) -> f64 {
        self.qx.max_diff(&other.qx).max(self.qz.max_diff(&other.qz))
    }
}

/// `𝟙^{k-1} ⊗ (σ_x, σ_z) ⊗ 𝟙^{n-k}`.
pub fn initial_descriptor(k: usize, n: usize) -> Result<Descriptor> {
    if k == 0 || k > n {
        return Err(argument(format!("qubit {k} is outside 1..={n}")));
    }
    Ok(Descriptor {
        qubit: k,
        n,
        qx: embed_gate(&pauli::x(), &[k], n)?,
        qz: embed_gate(&pauli::z(), &[k], n)?,
    })
}

/// `(u† q_x u, u† q_z u)`.
pub fn evolve_descriptor(d: &Descriptor, u: &ComplexMatrix) -> Result<Descriptor> {
    if u.rows() != d.qx.rows() || !u.is_square() {
        return Err(argument("evolution operator does not match the register size"));
    }
    let deviation = u.unitarity_deviation();
    if deviation > DEFAULT_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(Descriptor { qubit: d.qubit, n: d.n, qx: u.conjugate(&d.qx), qz: u.conjugate(&d.qz) })
}

/// `q_y = i·q_x·q_z`.
pub fn descriptor_y(d: &Descriptor) -> ComplexMatrix {
    (&d.qx * &d.qz).scale(I)
}

/// Descriptors of every qubit after the whole circuit.
pub fn final_descriptors(c: &Circuit) -> Result<Vec<Descriptor>> {
    let u = c.global_unitary()?;
    (1..=c.n()).map(|k| evolve_descriptor(&initial_descriptor(k, c.n())?, &u)).collect()
}

/// Descriptor of qubit `k` at every time step `0..=T`.
pub fn descriptor_history(c: &Circuit, k: usize) -> Result<Vec<Descriptor>> {
    let d0 = initial_descriptor(k, c.n())?;
    c.prefix_unitaries()?.iter().map(|u| evolve_descriptor(&d0, u)).collect()
}

/// A single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> ComplexMatrix {
        match self {
            Pauli::X => pauli::x(),
            Pauli::Y => pauli::y(),
            Pauli::Z => pauli::z(),
        }
    }

    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];
}

/// `coefficient · ⊗_k σ_{letter(k)}`, identity on unlisted qubits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliString {
    pub n: usize,
    pub letters: BTreeMap<usize, Pauli>,
    pub coefficient: f64,
}

impl PauliString {
    pub fn new(n: usize, letters: impl IntoIterator<Item = (usize, Pauli)>, coefficient: f64) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (q, w) in letters {
            if q == 0 || q > n {
                return Err(argument(format!("qubit {q} is outside 1..={n}")));
            }
            if map.insert(q, w).is_some() {
                return Err(argument(format!("qubit {q} listed twice")));
            }
        }
        Ok(PauliString { n, letters: map, coefficient })
    }

    pub fn single(n: usize, q: usize, w: Pauli) -> Result<Self> {
        Self::new(n, [(q, w)], 1.0)
    }

    pub fn support(&self) -> QubitSubset {
        QubitSubset::new(self.n, self.letters.keys().copied().collect())
            .expect("letters are validated on construction")
    }

    /// The embedded `2^n x 2^n` operator.
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let mut m = ComplexMatrix::identity(1 << self.n).scale(C64::new(self.coefficient, 0.0));
        for (&q, &w) in &self.letters {
            m = &embed_gate(&w.matrix(), &[q], self.n)? * &m;
        }
        Ok(m)
    }
}

/// Dense notation, one character per qubit: `"XIZ"` is `X ⊗ I ⊗ Z`.
impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut letters = Vec::new();
        let chars: Vec<char> = s.trim().chars().collect();
        for (i, c) in chars.iter().enumerate() {
            let w = match c.to_ascii_uppercase() {
                'I' => continue,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                _ => return Err(argument(format!("invalid Pauli letter {c:?}"))),
            };
            letters.push((i + 1, w));
        }
        if chars.is_empty() {
            return Err(argument("empty Pauli string"));
        }
        PauliString::new(chars.len(), letters, 1.0)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficient != 1.0 {
            write!(f, "{}*", self.coefficient)?;
        }
        for q in 1..=self.n {
            let c = match self.letters.get(&q) {
                None => 'I',
                Some(Pauli::X) => 'X',
                Some(Pauli::Y) => 'Y',
                Some(Pauli::Z) => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Expectation of a Pauli string computed from descriptors alone:
/// `⟨0| Π_k q_{k,w_k} |0⟩`, product in ascending qubit order.
pub fn expectation_pauli(descs: &[Descriptor], p: &PauliString) -> Result<f64> {
    if descs.iter().any(|d| d.n != p.n) {
        return Err(argument("descriptors and Pauli string disagree on the register size"));
    }
    let mut product: Option<ComplexMatrix> = None;
    for (&q, &w) in &p.letters {
        let d = descs
            .iter()
            .find(|d| d.qubit == q)
            .ok_or_else(|| argument(format!("no descriptor for qubit {q}")))?;
        let comp = d.component(w);
        product = Some(match product {
            None => comp,
            Some(acc) => &acc * &comp,
        });
    }
    // ⟨0|M|0⟩ is the top-left entry.
    let value = product.map_or(C64::new(1.0, 0.0), |m| m[(0, 0)]);
    Ok(p.coefficient * real_part(value)?)
}

/// `½(I + Σ_w p_w σ_w)` with `p_w = ⟨0|q_w|0⟩`.
pub fn reduced_density_from_descriptor(d: &Descriptor) -> Result<DensityMatrix> {
    let mut rho = ComplexMatrix::identity(2);
    for w in Pauli::ALL {
        let p = real_part(d.component(w)[(0, 0)])?;
        rho = &rho + &w.matrix().scale(C64::new(p, 0.0));
    }
    DensityMatrix::new(QubitSubset::single(d.n, d.qubit)?, rho.scale(C64::new(0.5, 0.0)))
}

/// Outcome of checking one time step of a circuit for locality.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalityStep {
    /// 1-based time step.
    pub step: usize,
    pub gate: String,
    pub targets: Vec<usize>,
    /// The gate does not act on the checked qubit.
    pub disjoint: bool,
    /// Max-norm change of the descriptor across this step.
    pub deviation: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalityReport {
    pub qubit: usize,
    pub tolerance: f64,
    pub steps: Vec<LocalityStep>,
}

impl LocalityReport {
    pub fn passed(&self) -> bool {
        self.steps.iter().all(|s| s.passed)
    }

    /// Largest change over steps whose gate is disjoint from the qubit.
    pub fn max_disjoint_deviation(&self) -> f64 {
        self.steps.iter().filter(|s| s.disjoint).map(|s| s.deviation).fold(0.0, f64::max)
    }
}

/// Tolerance for the locality check.
pub const LOCALITY_TOL: f64 = 1e-12;

/// Steps through the circuit and asserts that qubit `k`'s descriptor is left
/// unchanged by every gate that does not act on `k`.
pub fn check_locality(c: &Circuit, k: usize) -> Result<LocalityReport> {
    let history = descriptor_history(c, k)?;
    let steps = c
        .ops()
        .iter()
        .enumerate()
        .map(|(t, op)| {
            let deviation = history[t + 1].distance(&history[t]);
            let disjoint = !op.acts_on(k);
            LocalityStep {
                step: t + 1,
                gate: op.name().to_string(),
                targets: op.targets().to_vec(),
                disjoint,
                deviation,
                passed: !disjoint || deviation <= LOCALITY_TOL,
            }
        })
        .collect();
    Ok(LocalityReport { qubit: k, tolerance: LOCALITY_TOL, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::kron;

    fn bell() -> Circuit {
        Circuit::empty(2).unwrap().with("H", &[1], &[]).unwrap().with("CNOT", &[1, 2], &[]).unwrap()
    }

    fn k2(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix {
        kron(&a, &b).unwrap()
    }

    #[test]
    fn initial_descriptors() {
        let d = initial_descriptor(1, 1).unwrap();
        assert_eq!((d.qx.clone(), d.qz.clone()), (pauli::x(), pauli::z()));
        let d = initial_descriptor(2, 2).unwrap();
        assert_eq!(d.qx, k2(pauli::identity(), pauli::x()));
        assert_eq!(d.qz, k2(pauli::identity(), pauli::z()));
        let d = initial_descriptor(1, 2).unwrap();
        assert_eq!(d.qx, k2(pauli::x(), pauli::identity()));
        assert_eq!(d.qz, k2(pauli::z(), pauli::identity()));
        assert!(initial_descriptor(3, 2).is_err());
        assert!(initial_descriptor(0, 2).is_err());
    }

    #[test]
    fn evolution_examples() {
        let d = initial_descriptor(2, 2).unwrap();
        assert_eq!(evolve_descriptor(&d, &ComplexMatrix::identity(4)).unwrap(), d);

        let h1 = Circuit::empty(2).unwrap().with("H", &[1], &[]).unwrap().global_unitary().unwrap();
        assert!(evolve_descriptor(&d, &h1).unwrap().distance(&d) < 1e-15);

        // U = CNOT·(H⊗I). Conjugating by hand: CNOT (I⊗X) CNOT = I⊗X and
        // CNOT (I⊗Z) CNOT = Z⊗Z; then H⊗I maps these to I⊗X and X⊗Z.
        let u = bell().global_unitary().unwrap();
        let e = evolve_descriptor(&d, &u).unwrap();
        assert!(e.qx.max_diff(&k2(pauli::identity(), pauli::x())) < 1e-15);
        assert!(e.qz.max_diff(&k2(pauli::x(), pauli::z())) < 1e-15);
        assert!(e.algebra_deviation() < 1e-14);

        // i·(I⊗X)·(X⊗Z) = X ⊗ (iXZ) = X ⊗ Y
        assert!(descriptor_y(&e).max_diff(&k2(pauli::x(), pauli::y())) < 1e-15);
    }

    #[test]
    fn y_component() {
        let d = initial_descriptor(1, 1).unwrap();
        assert_eq!(descriptor_y(&d), pauli::y());
        let u = Circuit::empty(1).unwrap().with("RX", &[1], &[0.3]).unwrap().with("T", &[1], &[]).unwrap()
            .global_unitary().unwrap();
        let lhs = descriptor_y(&evolve_descriptor(&d, &u).unwrap());
        assert!(lhs.max_diff(&u.conjugate(&descriptor_y(&d))) < 1e-15);
    }

    #[test]
    fn non_unitary_evolution_is_rejected() {
        let d = initial_descriptor(1, 1).unwrap();
        let bad = ComplexMatrix::identity(2).scale(C64::new(1.1, 0.0));
        assert!(matches!(evolve_descriptor(&d, &bad), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn expectation_examples() {
        let empty = final_descriptors(&Circuit::empty(1).unwrap()).unwrap();
        assert_eq!(expectation_pauli(&empty, &PauliString::single(1, 1, Pauli::Z).unwrap()).unwrap(), 1.0);

        let descs = final_descriptors(&bell()).unwrap();
        let zz: PauliString = "ZZ".parse().unwrap();
        assert!((expectation_pauli(&descs, &zz).unwrap() - 1.0).abs() < 1e-15);
        let x1: PauliString = "XI".parse().unwrap();
        assert!(expectation_pauli(&descs, &x1).unwrap().abs() < 1e-15);
        let yy: PauliString = "YY".parse().unwrap();
        assert!((expectation_pauli(&descs, &yy).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn expectation_argument_errors() {
        let descs = vec![initial_descriptor(1, 2).unwrap()];
        let p: PauliString = "ZZ".parse().unwrap();
        assert!(expectation_pauli(&descs, &p).is_err());
        let p: PauliString = "Z".parse().unwrap();
        assert!(expectation_pauli(&descs, &p).is_err());
    }

    #[test]
    fn reduced_density_examples() {
        let rho = reduced_density_from_descriptor(&initial_descriptor(1, 1).unwrap()).unwrap();
        assert!(rho.matrix.max_diff(&ComplexMatrix::from_real(&[[1.0, 0.0], [0.0, 0.0]])) < 1e-15);

        let c = Circuit::empty(1).unwrap().with("H", &[1], &[]).unwrap();
        let d = &final_descriptors(&c).unwrap()[0];
        let rho = reduced_density_from_descriptor(d).unwrap();
        assert!(rho.matrix.max_diff(&ComplexMatrix::from_real(&[[0.5, 0.5], [0.5, 0.5]])) < 1e-15);

        for d in final_descriptors(&bell()).unwrap() {
            let rho = reduced_density_from_descriptor(&d).unwrap();
            assert!(rho.matrix.max_diff(&ComplexMatrix::identity(2).scale(C64::new(0.5, 0.0))) < 1e-15);
        }
    }

    #[test]
    fn locality_examples() {
        let c = Circuit::empty(2).unwrap().with("H", &[1], &[]).unwrap().with("H", &[2], &[]).unwrap();
        let r = check_locality(&c, 2).unwrap();
        assert!(r.steps[0].disjoint && r.steps[0].deviation <= 1e-12 && r.passed());

        let c = Circuit::empty(2).unwrap().with("CNOT", &[1, 2], &[]).unwrap();
        let r = check_locality(&c, 1).unwrap();
        assert!(!r.steps[0].disjoint);
        assert!(r.steps[0].deviation > 0.5);
        let after = &descriptor_history(&c, 1).unwrap()[1];
        assert!(after.qx.max_diff(&k2(pauli::x(), pauli::x())) < 1e-15);

        let r = check_locality(&Circuit::empty(3).unwrap(), 2).unwrap();
        assert!(r.steps.is_empty() && r.passed());
    }

    #[test]
    fn pauli_string_parsing() {
        let p: PauliString = "xIz".parse().unwrap();
        assert_eq!(p.n, 3);
        assert_eq!(p.to_string(), "XIZ");
        assert!("XQ".parse::<PauliString>().is_err());
        assert!("".parse::<PauliString>().is_err());
        assert!(PauliString::new(2, [(1, Pauli::X), (1, Pauli::Z)], 1.0).is_err());
        let m = p.to_matrix().unwrap();
        let want = kron(&kron(&pauli::x(), &pauli::identity()).unwrap(), &pauli::z()).unwrap();
        assert_eq!(m, want);
    }

    #[test]
    fn descriptor_json_fields() {
        let d = initial_descriptor(1, 1).unwrap();
        let v: serde_json::Value = serde_json::to_value(&d).unwrap();
        assert_eq!(v["qubit"], 1);
        assert_eq!(v["n"], 1);
        assert_eq!(v["qx"]["rows"], 2);
        let back: Descriptor = serde_json::from_value(v).unwrap();
        assert_eq!(back, d);
    }
}
