//! Seeded property sweeps over the whole calculus. Each suite compares two
//! independent routes to the same quantity and records the max-norm
//! deviation of every comparison.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::correspondence::{
    descriptor_to_evolution, evolution_to_descriptor, extract_local_witness, noumenally_equivalent,
    phase_invariant_fidelity, EQUIVALENCE_TOL,
};
use crate::descriptor::{
    check_locality, expectation_pauli, final_descriptors, reduced_density_from_descriptor,
    LOCALITY_TOL,
};
use crate::dims::{empirical_descriptor_dim_with, theoretical_dims, EmpiricalOptions};
use crate::error::{argument, Result};
use crate::evolution::{
    build_evolution_matrix, embed_local, evolve_local, join, morphism_phi, trace_out,
};
use crate::linalg::{partial_trace, ComplexMatrix, QubitSubset, StateVector, DEFAULT_TOL};
use crate::oracle::{expectation_observable, reduced_density, run_state};
use crate::random::{
    random_circuit, random_circuit_with_custom, random_disjoint_pair, random_pauli_string,
    random_subset, random_unitary, rng, SeededRng,
};
use crate::reconstruct::{expectation_after_prep, reconstruct_unitary, rephase};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Locality,
    Completeness,
    Thm1,
    Thm2,
    Thm3,
    Dims,
    Reconstruct,
    Conversion,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Locality,
        Suite::Completeness,
        Suite::Thm1,
        Suite::Thm2,
        Suite::Thm3,
        Suite::Dims,
        Suite::Reconstruct,
        Suite::Conversion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Locality => "locality",
            Suite::Completeness => "completeness",
            Suite::Thm1 => "thm1",
            Suite::Thm2 => "thm2",
            Suite::Thm3 => "thm3",
            Suite::Dims => "dims",
            Suite::Reconstruct => "reconstruct",
            Suite::Conversion => "conversion",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| argument(format!("unknown suite {s:?}")))
    }
}

/// Sweep parameters.
#[derive(Clone, Debug)]
pub struct CheckConfig {
    /// Register size. Circuit sweeps draw sizes from `1..=n`; the theorem
    /// sweeps use exactly `n`.
    pub n: usize,
    pub seed: u64,
    pub trials: usize,
    /// Upper bound on the gate count of random circuits.
    pub max_gates: usize,
    /// Pauli strings sampled per circuit in the completeness sweep.
    pub paulis_per_circuit: usize,
    /// Overrides every suite's default tolerance when set.
    pub tol: Option<f64>,
    /// Check these circuits instead of random ones (circuit-driven suites).
    pub circuits: Vec<Circuit>,
    pub empirical: EmpiricalOptions,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            n: 3,
            seed: 0,
            trials: 20,
            max_gates: 30,
            paulis_per_circuit: 10,
            tol: None,
            circuits: Vec::new(),
            empirical: EmpiricalOptions::default(),
        }
    }
}

/// One comparison inside a trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub trial: usize,
    pub identity: String,
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub n: usize,
    pub seed: u64,
    pub trials: usize,
    pub comparisons: Vec<Comparison>,
}

impl SuiteReport {
    fn new(suite: Suite, cfg: &CheckConfig, trials: usize) -> Self {
        SuiteReport { suite, n: cfg.n, seed: cfg.seed, trials, comparisons: Vec::new() }
    }

    fn record(&mut self, trial: usize, identity: impl Into<String>, deviation: f64, tolerance: f64) {
        let passed = deviation <= tolerance;
        self.comparisons.push(Comparison { trial, identity: identity.into(), deviation, tolerance, passed });
    }

    /// Records a boolean outcome as deviation 0 (pass) or 1 (fail).
    fn record_bool(&mut self, trial: usize, identity: impl Into<String>, ok: bool) {
        self.record(trial, identity, if ok { 0.0 } else { 1.0 }, 0.0);
    }

    pub fn passed(&self) -> bool {
        self.comparisons.iter().all(|c| c.passed)
    }

    pub fn max_deviation(&self) -> f64 {
        self.comparisons.iter().map(|c| c.deviation).fold(0.0, f64::max)
    }

    /// Largest deviation for one identity label.
    pub fn max_deviation_of(&self, identity: &str) -> f64 {
        self.comparisons
            .iter()
            .filter(|c| c.identity == identity)
            .map(|c| c.deviation)
            .fold(0.0, f64::max)
    }

    /// `(trial, max deviation, all passed)` per trial.
    pub fn per_trial(&self) -> Vec<(usize, f64, bool)> {
        let mut out: Vec<(usize, f64, bool)> = Vec::new();
        for c in &self.comparisons {
            match out.last_mut() {
                Some(last) if last.0 == c.trial => {
                    last.1 = last.1.max(c.deviation);
                    last.2 &= c.passed;
                }
                _ => out.push((c.trial, c.deviation, c.passed)),
            }
        }
        out
    }

    pub fn failures(&self) -> impl Iterator<Item = &Comparison> {
        self.comparisons.iter().filter(|c| !c.passed)
    }
}

pub fn run_suite(suite: Suite, cfg: &CheckConfig) -> Result<SuiteReport> {
    if cfg.n == 0 {
        return Err(argument("suites need n >= 1"));
    }
    match suite {
        Suite::Locality => locality(cfg),
        Suite::Completeness => completeness(cfg),
        Suite::Thm1 => theorem_one(cfg),
        Suite::Thm2 => theorem_two(cfg),
        Suite::Thm3 => theorem_three(cfg),
        Suite::Dims => dims(cfg),
        Suite::Reconstruct => reconstruction(cfg),
        Suite::Conversion => conversion(cfg),
    }
}

/// The explicit circuits, or `trials` random circuits with sizes in
/// `1..=n` and up to `max_gates` gates. Every other random circuit carries
/// a custom two-qubit unitary.
pub fn circuit_sweep(cfg: &CheckConfig, rng: &mut SeededRng) -> Vec<Circuit> {
    if !cfg.circuits.is_empty() {
        return cfg.circuits.clone();
    }
    (0..cfg.trials)
        .map(|t| {
            let n = rng.random_range(1..=cfg.n);
            let gates = rng.random_range(0..=cfg.max_gates);
            if t % 2 == 1 {
                random_circuit_with_custom(n, gates.saturating_sub(1), rng)
            } else {
                random_circuit(n, gates, rng)
            }
        })
        .collect()
}

fn tol_or(cfg: &CheckConfig, default: f64) -> f64 {
    cfg.tol.unwrap_or(default)
}

fn locality(cfg: &CheckConfig) -> Result<SuiteReport> {
    let mut r = rng(cfg.seed);
    let circuits = circuit_sweep(cfg, &mut r);
    let tol = tol_or(cfg, LOCALITY_TOL);
    let mut report = SuiteReport::new(Suite::Locality, cfg, circuits.len());
    for (t, c) in circuits.iter().enumerate() {
        for k in 1..=c.n() {
            let loc = check_locality(c, k)?;
            report.record(t, format!("unchanged descriptor of qubit {k}"), loc.max_disjoint_deviation(), tol);
        }
    }
    Ok(report)
}

fn completeness(cfg: &CheckConfig) -> Result<SuiteReport> {
    let mut r = rng(cfg.seed);
    let circuits = circuit_sweep(cfg, &mut r);
    let tol = tol_or(cfg, DEFAULT_TOL);
    let mut report = SuiteReport::new(Suite::Completeness, cfg, circuits.len());
    for (t, c) in circuits.iter().enumerate() {
        let u = c.global_unitary()?;
        let state = run_state(c)?;
        let descs = final_descriptors(c)?;

        let mut pauli_dev: f64 = 0.0;
        for _ in 0..cfg.paulis_per_circuit {
            let p = random_pauli_string(c.n(), &mut r);
            let local = expectation_pauli(&descs, &p)?;
            let oracle = expectation_observable(&state, &p.to_matrix()?)?;
            pauli_dev = pauli_dev.max((local - oracle).abs());
        }
        report.record(t, "pauli expectation", pauli_dev, tol);

        let mut desc_dev: f64 = 0.0;
        for d in &descs {
            let from_desc = reduced_density_from_descriptor(d)?;
            let oracle = reduced_density(&state, &QubitSubset::single(c.n(), d.qubit)?)?;
            desc_dev = desc_dev.max(from_desc.matrix.max_diff(&oracle.matrix));
        }
        report.record(t, "descriptor reduced density", desc_dev, tol);

        let a = random_subset(c.n(), &mut r);
        let phi = morphism_phi(&build_evolution_matrix(&u, &a)?)?;
        let oracle = reduced_density(&state, &a)?;
        report.record(t, "phi reduced density", phi.matrix.max_diff(&oracle.matrix), tol);
    }
    Ok(report)
}

fn conversion(cfg: &CheckConfig) -> Result<SuiteReport> {
    let mut r = rng(cfg.seed);
    let circuits = circuit_sweep(cfg, &mut r);
    let tol = tol_or(cfg, 1e-13);
    let mut report = SuiteReport::new(Suite::Conversion, cfg, circuits.len());
    for (t, c) in circuits.iter().enumerate() {
        let u = c.global_unitary()?;
        let mut round_trip: f64 = 0.0;
        let mut reverse_trip: f64 = 0.0;
        let mut vs_built: f64 = 0.0;
        for d in final_descriptors(c)? {
            let em = descriptor_to_evolution(&d)?;
            round_trip = round_trip.max(evolution_to_descriptor(&em)?.distance(&d));
            let built = build_evolution_matrix(&u, em.subset())?;
            vs_built = vs_built.max(em.distance(&built).expect("same subset"));
            let back = descriptor_to_evolution(&evolution_to_descriptor(&built)?)?;
            reverse_trip = reverse_trip.max(back.distance(&built).expect("same subset"));
        }
        report.record(t, "descriptor round trip", round_trip, tol);
        report.record(t, "evolution round trip", reverse_trip, tol);
        report.record(t, "converted equals built", vs_built, cfg.tol.unwrap_or(DEFAULT_TOL));
    }
    Ok(report)
}

/// Haar-random `u` on `n` qubits, disjoint `A`, `B` and a Haar `v` on `A`.
struct TheoremSample {
    u: ComplexMatrix,
    a: QubitSubset,
    b: QubitSubset,
    v: ComplexMatrix,
}

fn theorem_sample(n: usize, r: &mut SeededRng) -> Result<TheoremSample> {
    if n < 2 {
        return Err(argument("theorem sweeps need n >= 2"));
    }
    let u = random_unitary(1 << n, r);
    let (a, b) = random_disjoint_pair(n, r);
    let v = random_unitary(a.dim(), r);
    Ok(TheoremSample { u, a, b, v })
}

fn theorem_one(cfg: &CheckConfig) -> Result<SuiteReport> {
    let mut r = rng(cfg.seed);
    let tol = tol_or(cfg, DEFAULT_TOL);
    let mut report = SuiteReport::new(Suite::Thm1, cfg, cfg.trials);
    for t in 0..cfg.trials {
        let TheoremSample { u, a, b, v } = theorem_sample(cfg.n, &mut r)?;
        let ab = a.union(&b);
        let em_a = build_evolution_matrix(&u, &a)?;
        let em_b = build_evolution_matrix(&u, &b)?;
        let em_ab = build_evolution_matrix(&u, &ab)?;

        let evolved = evolve_local(&v, &em_a)?;
        let direct = build_evolution_matrix(&(&embed_local(&v, &a)? * &u), &a)?;
        report.record(t, "local evolution", evolved.distance(&direct).expect("same subset"), tol);

        let traced = trace_out(&em_ab, &b)?;
        report.record(t, "trace out", traced.distance(&em_a).expect("same subset"), tol);

        let joined = join(&em_a, &em_b)?;
        report.record(t, "join", joined.distance(&em_ab).expect("same subset"), tol);

        // The product relation costs d⁴ products; only check it on small grids.
        if joined.dim() <= 8 {
            report.record(t, "join invariants", joined.invariants().max(), tol);
        }
    }
    Ok(report)
}

fn theorem_two(cfg: &CheckConfig) -> Result<SuiteReport> {
    let mut r = rng(cfg.seed);
    let tol = tol_or(cfg, DEFAULT_TOL);
    let mut report = SuiteReport::new(Suite::Thm2, cfg, cfg.trials);
    for t in 0..cfg.trials {
        let TheoremSample { u, a, b, v } = theorem_sample(cfg.n, &mut r)?;
        let ab = a.union(&b);
        let em_a = build_evolution_matrix(&u, &a)?;
        let em_ab = build_evolution_matrix(&u, &ab)?;

        // φ⟦U⟧^A = tr_Ā(U ρ₀ U†), with U|0⟩ read off the first column.
        let state = StateVector::new((0..u.rows()).map(|i| u[(i, 0)]).collect())?;
        let oracle = partial_trace(&state.projector(), &a.complement())?;
        let phi_a = morphism_phi(&em_a)?;
        report.record(t, "phi equals reduced density", phi_a.matrix.max_diff(&oracle), tol);

        let lhs = morphism_phi(&evolve_local(&v, &em_a)?)?.matrix;
        let rhs = &(&v * &phi_a.matrix) * &v.adjoint();
        report.record(t, "phi intertwines evolution", lhs.max_diff(&rhs), tol);

        // tr_B inside the |AB|-qubit register of φ⟦U⟧^{AB}.
        let b_inside = QubitSubset::new(
            ab.len(),
            b.members().iter().map(|q| ab.members().binary_search(q).expect("B ⊆ AB") + 1).collect(),
        )?;
        let lhs = partial_trace(&morphism_phi(&em_ab)?.matrix, &b_inside)?;
        let rhs = morphism_phi(&trace_out(&em_ab, &b)?)?.matrix;
        report.record(t, "phi commutes with trace out", lhs.max_diff(&rhs), tol);
    }
    Ok(report)
}

/// Max-norm distance between `a` and `b` after aligning their phases.
pub fn distance_up_to_phase(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let overlap = (&a.adjoint() * b).trace();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { overlap + 1.0 };
    a.scale(phase).max_diff(b)
}

fn theorem_three(cfg: &CheckConfig) -> Result<SuiteReport> {
    let mut r = rng(cfg.seed);
    let tol = tol_or(cfg, EQUIVALENCE_TOL);
    let n = cfg.n;
    if n < 2 {
        return Err(argument("theorem sweeps need n >= 2"));
    }
    let mut report = SuiteReport::new(Suite::Thm3, cfg, cfg.trials);
    for t in 0..cfg.trials {
        let u = random_unitary(1 << n, &mut r);
        let k = r.random_range(1..=n);
        let a = QubitSubset::single(n, k)?;

        // Forward: u2 = (𝟙^A ⊗ W) u must be equivalent, with witness W.
        let w = random_unitary(1 << (n - 1), &mut r);
        let u2 = &embed_local(&w, &a.complement())? * &u;
        let verdict = noumenally_equivalent(&u, &u2, &a, tol)?;
        report.record_bool(t, "forward: equivalent", verdict.equivalent);
        let witness_dev = verdict.witness.as_ref().map_or(f64::INFINITY, |got| distance_up_to_phase(got, &w));
        report.record(t, "forward: witness recovers W", witness_dev, tol);

        // Reverse: a generic second unitary is not of product form.
        let other = random_unitary(1 << n, &mut r);
        let product_form = extract_local_witness(&u, &other, &a, tol)?.is_some();
        if !product_form {
            let verdict = noumenally_equivalent(&u, &other, &a, tol)?;
            report.record_bool(t, "reverse: not equivalent", !verdict.equivalent);
        }
    }

    // Negation on the control conjugated by CNOT acts on both qubits.
    let mut c = Circuit::empty(n)?;
    c = c.with("CNOT", &[1, 2], &[])?.with("X", &[1], &[])?.with("CNOT", &[1, 2], &[])?;
    let u2 = c.global_unitary()?;
    let id = ComplexMatrix::identity(1 << n);
    for k in [1, 2] {
        let v = noumenally_equivalent(&id, &u2, &QubitSubset::single(n, k)?, tol)?;
        report.record_bool(cfg.trials, format!("CNOT-conjugated negation not local to qubit {k}"), !v.equivalent);
    }
    Ok(report)
}

fn dims(cfg: &CheckConfig) -> Result<SuiteReport> {
    let expected = theoretical_dims(cfg.n as u32)?.descriptor_dim as f64;
    let mut report = SuiteReport::new(Suite::Dims, cfg, cfg.n);
    for k in 1..=cfg.n {
        let rank = empirical_descriptor_dim_with(cfg.n, k, cfg.empirical)?;
        report.record(k - 1, format!("rank for qubit {k} = {rank}, closed form {expected}"), (rank as f64 - expected).abs(), 0.0);
    }
    Ok(report)
}

fn reconstruction(cfg: &CheckConfig) -> Result<SuiteReport> {
    let mut r = rng(cfg.seed);
    let circuits = circuit_sweep(cfg, &mut r);
    let fid_tol = 1e-8;
    let exp_tol = tol_or(cfg, 1e-9);
    let mut report = SuiteReport::new(Suite::Reconstruct, cfg, circuits.len());
    for (t, c) in circuits.iter().enumerate() {
        let n = c.n();
        let u = c.global_unitary()?;
        let ems = (1..=n)
            .map(|k| build_evolution_matrix(&u, &QubitSubset::single(n, k)?))
            .collect::<Result<Vec<_>>>()?;
        let u_hat = reconstruct_unitary(&ems)?;
        report.record(t, "fidelity defect", 1.0 - phase_invariant_fidelity(&u_hat, &u), fid_tol);
        report.record(t, "reconstructed unitarity", u_hat.unitarity_deviation(), fid_tol);

        let prep = random_circuit(n, r.random_range(0..=6), &mut r);
        let obs = random_pauli_string(n, &mut r);
        let local = expectation_after_prep(&u_hat, &prep, &obs)?;
        let oracle = expectation_observable(&run_state(&prep.then(c)?)?, &obs.to_matrix()?)?;
        report.record(t, "alternate initial state", (local - oracle).abs(), exp_tol);
        let theta = r.random_range(0.0..std::f64::consts::TAU);
        let rephased = expectation_after_prep(&rephase(&u_hat, theta), &prep, &obs)?;
        report.record(t, "phase independence", (rephased - local).abs(), exp_tol);
    }
    Ok(report)
}
