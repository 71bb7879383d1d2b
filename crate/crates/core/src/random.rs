//! Seeded generators for random circuits, unitaries, subsets and Pauli
//! strings. Everything is driven by a `ChaCha8Rng` so sweeps are
//! reproducible from a single seed.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::circuit::{builtin_signature, Circuit, GateOp, BUILTIN_GATES};
use crate::descriptor::{Pauli, PauliString};
use crate::linalg::{ComplexMatrix, QubitSubset, C64, ZERO};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Haar-distributed unitary: Gram–Schmidt on a complex Ginibre matrix.
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = (0..dim)
        .map(|_| {
            (0..dim)
                .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect()
        })
        .collect();
    for j in 0..dim {
        // Two passes keep the columns orthogonal to machine precision.
        for _ in 0..2 {
            for p in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let proj: C64 = done[p].iter().zip(&rest[0]).map(|(a, b)| a.conj() * b).sum();
                for (x, q) in rest[0].iter_mut().zip(&done[p]) {
                    *x -= proj * q;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in &mut cols[j] {
            *x /= norm;
        }
    }
    let mut m = ComplexMatrix::zeros(dim, dim);
    for (c, col) in cols.iter().enumerate() {
        for (r, &z) in col.iter().enumerate() {
            m[(r, c)] = z;
        }
    }
    m
}

/// Random circuit over the built-in vocabulary (gates wider than the
/// register are skipped).
pub fn random_circuit(n: usize, gates: usize, rng: &mut impl Rng) -> Circuit {
    let usable: Vec<&str> =
        BUILTIN_GATES.iter().copied().filter(|g| builtin_signature(g).unwrap().0 <= n).collect();
    let qubits: Vec<usize> = (1..=n).collect();
    let mut c = Circuit::empty(n).expect("n >= 1");
    for _ in 0..gates {
        let name = usable[rng.random_range(0..usable.len())];
        let (arity, nparams) = builtin_signature(name).unwrap();
        let targets: Vec<usize> = qubits.choose_multiple(rng, arity).copied().collect();
        let params: Vec<f64> =
            (0..nparams).map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)).collect();
        c.push(GateOp::builtin(name, &targets, &params).expect("valid by construction"))
            .expect("targets in range");
    }
    c
}

/// Random circuit that also includes a random two-qubit custom unitary
/// when `n >= 2`.
pub fn random_circuit_with_custom(n: usize, gates: usize, rng: &mut impl Rng) -> Circuit {
    let mut c = random_circuit(n, gates, rng);
    if n >= 2 {
        let qubits: Vec<usize> = (1..=n).collect();
        let targets: Vec<usize> = qubits.choose_multiple(rng, 2).copied().collect();
        let g = random_unitary(4, rng);
        c.push(GateOp::custom("U4", g, &targets).expect("Haar unitary")).expect("in range");
    }
    c
}

/// Non-empty random subset.
pub fn random_subset(n: usize, rng: &mut impl Rng) -> QubitSubset {
    let size = rng.random_range(1..=n);
    random_subset_of_size(n, size, rng)
}

pub fn random_subset_of_size(n: usize, size: usize, rng: &mut impl Rng) -> QubitSubset {
    let qubits: Vec<usize> = (1..=n).collect();
    let members = qubits.choose_multiple(rng, size).copied().collect();
    QubitSubset::new(n, members).expect("valid by construction")
}

/// Two non-empty disjoint subsets (`n >= 2`).
pub fn random_disjoint_pair(n: usize, rng: &mut impl Rng) -> (QubitSubset, QubitSubset) {
    assert!(n >= 2, "need two qubits for a disjoint pair");
    let mut qubits: Vec<usize> = (1..=n).collect();
    qubits.shuffle(rng);
    let total = rng.random_range(2..=n);
    let split = rng.random_range(1..total);
    let a = QubitSubset::new(n, qubits[..split].to_vec()).expect("valid");
    let b = QubitSubset::new(n, qubits[split..total].to_vec()).expect("valid");
    (a, b)
}

/// Random Pauli string with non-empty support and unit coefficient.
pub fn random_pauli_string(n: usize, rng: &mut impl Rng) -> PauliString {
    let support = random_subset(n, rng);
    let letters = support.members().iter().map(|&q| (q, Pauli::ALL[rng.random_range(0..3)]));
    PauliString::new(n, letters, 1.0).expect("valid by construction")
}

/// Random normalised state vector.
pub fn random_state(n: usize, rng: &mut impl Rng) -> Vec<C64> {
    let mut v: Vec<C64> = (0..1usize << n)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    if norm == 0.0 {
        v.fill(ZERO);
        v[0] = C64::new(1.0, 0.0);
    }
    v
}
