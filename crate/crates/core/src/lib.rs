//! Local, Heisenberg-picture descriptions of qubit networks.
//!
//! A network of `n` qubits evolving under a global unitary `U` can be
//! described qubit by qubit: each qubit carries a *descriptor*
//! `(q_x, q_z) = (U†σ_xU, U†σ_zU)`, and each subsystem `A` carries an
//! *evolution matrix* `⟦U⟧^A`, a grid of operators indexed by the basis of
//! `A`. This crate implements both objects, their calculus (local evolution,
//! tracing out, joining, the morphism to density matrices), the equivalence
//! test between global unitaries, reconstruction of `U` from local data,
//! and a Schrödinger-picture oracle used to check all of it.
//!
//! ```
//! use qlocal::{corpus::bell_circuit, descriptor::{expectation_pauli, final_descriptors}};
//!
//! let descs = final_descriptors(&bell_circuit()).unwrap();
//! let zz = expectation_pauli(&descs, &"ZZ".parse().unwrap()).unwrap();
//! assert!((zz - 1.0).abs() < 1e-12);
//! ```

pub mod checks;
pub mod circuit;
pub mod cli;
pub mod corpus;
pub mod correspondence;
pub mod descriptor;
pub mod dims;
pub mod error;
pub mod evolution;
pub mod linalg;
pub mod oracle;
pub mod random;
pub mod reconstruct;

pub use circuit::{parse_circuit, render_circuit, Circuit, GateOp};
pub use correspondence::{
    descriptor_to_evolution, evolution_to_descriptor, extract_local_witness, noumenally_equivalent,
    EquivalenceVerdict,
};
pub use descriptor::{Descriptor, Pauli, PauliString};
pub use dims::{empirical_descriptor_dim, theoretical_dims, DimensionReport};
pub use error::{Error, Result};
pub use evolution::{build_evolution_matrix, evolve_local, join, morphism_phi, trace_out, EvolutionMatrix};
pub use linalg::{ComplexMatrix, QubitSubset, StateVector, C64};
pub use oracle::DensityMatrix;
pub use reconstruct::{alternate_initial_expectation, reconstruct_unitary};
