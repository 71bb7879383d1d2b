//! Command-line front end behind the `qlocal` binary.
//!
//! Every command writes JSON to stdout (or `--out`) and human-readable
//! diagnostics to stderr. Exit codes: 0 success, 1 semantic negative,
//! 2 input error, 3 resource error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::checks::{run_suite, CheckConfig, Suite};
use crate::circuit::{parse_circuit, Circuit};
use crate::correspondence::{noumenally_equivalent, phase_invariant_fidelity, EQUIVALENCE_TOL};
use crate::descriptor::{expectation_pauli, final_descriptors, reduced_density_from_descriptor, Descriptor, PauliString};
use crate::dims::{theoretical_dims, DimensionReport, DEFAULT_EMPIRICAL_CAP};
use crate::error::{argument, Error, Result};
use crate::evolution::{build_evolution_matrix, morphism_phi, EvolutionMatrix};
use crate::linalg::{ComplexMatrix, QubitSubset, DEFAULT_TOL};
use crate::oracle::{expectation_observable, reduced_density, run_state, DensityMatrix};
use crate::reconstruct::reconstruct_unitary;

/// Default register cap for `run`, `equiv`, `reconstruct` and the sweeps.
pub const DEFAULT_MAX_QUBITS: usize = 8;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "qlocal", version, about = "Local descriptions of qubit networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a circuit in all three pictures and compare them.
    Run(RunArgs),
    /// Run a seeded invariant sweep.
    Check(CheckArgs),
    /// Decide whether two circuits agree on a subsystem.
    Equiv(EquivArgs),
    /// Rebuild the global unitary from per-qubit evolution matrices.
    Reconstruct(ReconstructArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Agreement tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Write JSON here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Largest register accepted.
    #[arg(long)]
    pub max_qubits: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Circuit file, or `-` for stdin.
    pub circuit: PathBuf,
    /// Also report the evolution matrix and reduced state of this subsystem.
    #[arg(long, value_delimiter = ',')]
    pub subset: Option<Vec<usize>>,
    /// Pauli strings (e.g. `ZZI`) to evaluate from descriptors and the oracle.
    #[arg(long = "pauli")]
    pub paulis: Vec<String>,
    /// Omit state vector, descriptors and evolution matrices.
    #[arg(long)]
    pub brief: bool,
    /// Write one evolution matrix per qubit into this directory.
    #[arg(long)]
    pub export_ems: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// locality, completeness, thm1, thm2, thm3, dims, reconstruct or conversion.
    pub suite: String,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    /// Check this circuit instead of random ones.
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    #[arg(long, default_value_t = 30)]
    pub max_gates: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct EquivArgs {
    pub first: PathBuf,
    pub second: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    pub subset: Vec<usize>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    /// Per-qubit evolution matrix JSON files.
    pub ems: Vec<PathBuf>,
    /// Reference circuit; its evolution matrices are used when no files are given.
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// Everything `run` computes for one circuit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub n: usize,
    pub gates: usize,
    pub circuit: Vec<String>,
    pub tolerance: f64,
    pub final_state: Option<Vec<[f64; 2]>>,
    pub descriptors: Option<Vec<Descriptor>>,
    pub evolution_matrices: Option<Vec<EvolutionMatrix>>,
    pub qubits: Vec<QubitReport>,
    pub subset: Option<SubsetReport>,
    pub expectations: Vec<ExpectationReport>,
    pub max_deviation: f64,
    pub passed: bool,
}

/// Reduced state of one qubit in the three pictures.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitReport {
    pub qubit: usize,
    pub oracle: ComplexMatrix,
    pub from_descriptor: ComplexMatrix,
    pub from_evolution: ComplexMatrix,
    pub bloch: [f64; 3],
    pub max_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubsetReport {
    pub subset: QubitSubset,
    pub evolution_matrix: Option<EvolutionMatrix>,
    pub oracle: ComplexMatrix,
    pub from_evolution: ComplexMatrix,
    pub max_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectationReport {
    pub pauli: String,
    pub from_descriptors: f64,
    pub oracle: f64,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub report: crate::checks::SuiteReport,
    pub dimensions: Option<DimensionReport>,
    pub passed: bool,
    pub max_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconstructReport {
    pub n: usize,
    pub unitary: ComplexMatrix,
    pub unitarity_deviation: f64,
    pub fidelity: Option<f64>,
}

/// Parses arguments and runs the command; returns the exit code.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Resource { .. } => EXIT_RESOURCE,
        _ => EXIT_INPUT,
    }
}

fn dispatch(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Run(a) => {
            let circuit = read_circuit(&a.circuit)?;
            let report = cmd_run(&circuit, &a)?;
            for q in &report.qubits {
                writeln!(stderr, "qubit {}: bloch {:?}, max deviation {:.3e}", q.qubit, q.bloch, q.max_deviation)?;
            }
            emit(&report, a.common.out.as_deref(), stdout)?;
            Ok(if report.passed { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Check(a) => {
            let summary = cmd_check(&a)?;
            for (trial, dev, ok) in summary.report.per_trial() {
                writeln!(stderr, "trial {trial:>4}: max deviation {dev:.3e} {}", if ok { "ok" } else { "FAIL" })?;
            }
            for c in summary.report.failures() {
                writeln!(stderr, "  trial {} {}: {:.3e} > {:.1e}", c.trial, c.identity, c.deviation, c.tolerance)?;
            }
            writeln!(
                stderr,
                "{}: {} (max deviation {:.3e})",
                summary.report.suite,
                if summary.passed { "pass" } else { "FAIL" },
                summary.max_deviation
            )?;
            emit(&summary, a.common.out.as_deref(), stdout)?;
            Ok(if summary.passed { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Equiv(a) => {
            let first = read_circuit(&a.first)?;
            let second = read_circuit(&a.second)?;
            let verdict = cmd_equiv(&first, &second, &a)?;
            writeln!(stderr, "{}", if verdict.equivalent { "equivalent" } else { "not equivalent" })?;
            emit(&verdict, a.common.out.as_deref(), stdout)?;
            Ok(if verdict.equivalent { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Reconstruct(a) => {
            let report = cmd_reconstruct(&a)?;
            if let Some(f) = report.fidelity {
                writeln!(stderr, "fidelity {f:.15}")?;
            }
            emit(&report, a.common.out.as_deref(), stdout)?;
            Ok(EXIT_OK)
        }
    }
}

/// Reads a circuit from a file, or from stdin for `-`.
pub fn read_circuit(path: &Path) -> Result<Circuit> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path)?
    };
    Ok(parse_circuit(&text)?)
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    let json = serde_json::to_string_pretty(value)?;
    match out {
        Some(path) => fs::write(path, json + "\n")?,
        None => writeln!(stdout, "{json}")?,
    }
    Ok(())
}

fn check_cap(n: usize, cap: Option<usize>) -> Result<()> {
    let cap = cap.unwrap_or(DEFAULT_MAX_QUBITS);
    if n > cap {
        return Err(Error::Resource { requested: 1 << n.min(63), cap: 1 << cap.min(63) });
    }
    Ok(())
}

fn tolerance(t: Option<f64>, default: f64) -> Result<f64> {
    match t {
        Some(t) if !(t >= 0.0 && t.is_finite()) => Err(argument("--tol must be a non-negative number")),
        Some(t) => Ok(t),
        None => Ok(default),
    }
}

pub fn cmd_run(c: &Circuit, a: &RunArgs) -> Result<RunReport> {
    let n = c.n();
    check_cap(n, a.common.max_qubits)?;
    let tol = tolerance(a.common.tol, DEFAULT_TOL)?;
    let paulis = a
        .paulis
        .iter()
        .map(|s| {
            let p: PauliString = s.parse()?;
            if p.n != n {
                return Err(argument(format!("Pauli string {s} has {} letters, circuit has {n} qubits", p.n)));
            }
            Ok(p)
        })
        .collect::<Result<Vec<_>>>()?;
    let subset = a.subset.as_ref().map(|m| QubitSubset::new(n, m.clone())).transpose()?;

    let u = c.global_unitary()?;
    let state = run_state(c)?;
    let descs = final_descriptors(c)?;
    let ems = (1..=n)
        .map(|k| build_evolution_matrix(&u, &QubitSubset::single(n, k)?))
        .collect::<Result<Vec<_>>>()?;

    let mut qubits = Vec::with_capacity(n);
    for (d, em) in descs.iter().zip(&ems) {
        let oracle = reduced_density(&state, em.subset())?;
        let from_descriptor = reduced_density_from_descriptor(d)?;
        let from_evolution = morphism_phi(em)?;
        let max_deviation = oracle
            .matrix
            .max_diff(&from_descriptor.matrix)
            .max(oracle.matrix.max_diff(&from_evolution.matrix));
        qubits.push(QubitReport {
            qubit: d.qubit,
            bloch: oracle.bloch_vector().expect("single qubit"),
            oracle: oracle.matrix,
            from_descriptor: from_descriptor.matrix,
            from_evolution: from_evolution.matrix,
            max_deviation,
        });
    }

    let subset = subset
        .map(|s| -> Result<SubsetReport> {
            let em = build_evolution_matrix(&u, &s)?;
            let DensityMatrix { matrix: oracle, .. } = reduced_density(&state, &s)?;
            let from_evolution = morphism_phi(&em)?.matrix;
            Ok(SubsetReport {
                max_deviation: oracle.max_diff(&from_evolution),
                evolution_matrix: (!a.brief).then_some(em),
                subset: s,
                oracle,
                from_evolution,
            })
        })
        .transpose()?;

    let expectations = paulis
        .iter()
        .map(|p| {
            let from_descriptors = expectation_pauli(&descs, p)?;
            let oracle = expectation_observable(&state, &p.to_matrix()?)?;
            Ok(ExpectationReport {
                pauli: p.to_string(),
                from_descriptors,
                oracle,
                deviation: (from_descriptors - oracle).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    if let Some(dir) = &a.export_ems {
        fs::create_dir_all(dir)?;
        for em in &ems {
            let path = dir.join(format!("em_q{}.json", em.subset().members()[0]));
            fs::write(path, serde_json::to_string(em)? + "\n")?;
        }
    }

    let max_deviation = qubits
        .iter()
        .map(|q| q.max_deviation)
        .chain(subset.iter().map(|s| s.max_deviation))
        .chain(expectations.iter().map(|e| e.deviation))
        .fold(0.0, f64::max);
    Ok(RunReport {
        n,
        gates: c.len(),
        circuit: c.ops().iter().map(ToString::to_string).collect(),
        tolerance: tol,
        final_state: (!a.brief).then(|| state.amplitudes().iter().map(|z| [z.re, z.im]).collect()),
        descriptors: (!a.brief).then_some(descs),
        evolution_matrices: (!a.brief).then_some(ems),
        qubits,
        subset,
        expectations,
        max_deviation,
        passed: max_deviation <= tol,
    })
}

pub fn cmd_check(a: &CheckArgs) -> Result<CheckSummary> {
    let suite: Suite = a.suite.parse()?;
    let mut cfg = CheckConfig {
        n: a.n,
        seed: a.seed,
        trials: a.trials,
        max_gates: a.max_gates,
        tol: a.common.tol.map(|t| tolerance(Some(t), 0.0)).transpose()?,
        ..CheckConfig::default()
    };
    if let Some(path) = &a.circuit {
        let c = read_circuit(path)?;
        cfg.n = c.n();
        cfg.circuits = vec![c];
    }
    if suite == Suite::Dims {
        cfg.empirical.max_qubits = a.common.max_qubits.unwrap_or(DEFAULT_EMPIRICAL_CAP);
    } else {
        check_cap(cfg.n, a.common.max_qubits)?;
    }
    let report = run_suite(suite, &cfg)?;
    let dimensions = if suite == Suite::Dims { Some(theoretical_dims(cfg.n as u32)?) } else { None };
    Ok(CheckSummary { passed: report.passed(), max_deviation: report.max_deviation(), report, dimensions })
}

pub fn cmd_equiv(
    first: &Circuit,
    second: &Circuit,
    a: &EquivArgs,
) -> Result<crate::correspondence::EquivalenceVerdict> {
    if first.n() != second.n() {
        return Err(argument(format!(
            "circuits act on {} and {} qubits",
            first.n(),
            second.n()
        )));
    }
    check_cap(first.n(), a.common.max_qubits)?;
    let tol = tolerance(a.common.tol, EQUIVALENCE_TOL)?;
    let subset = QubitSubset::new(first.n(), a.subset.clone())?;
    noumenally_equivalent(&first.global_unitary()?, &second.global_unitary()?, &subset, tol)
}

pub fn cmd_reconstruct(a: &ReconstructArgs) -> Result<ReconstructReport> {
    let reference = a.circuit.as_deref().map(read_circuit).transpose()?;
    let ems: Vec<EvolutionMatrix> = if a.ems.is_empty() {
        let c = reference.as_ref().ok_or_else(|| argument("give evolution matrix files or --circuit"))?;
        check_cap(c.n(), a.common.max_qubits)?;
        let u = c.global_unitary()?;
        (1..=c.n())
            .map(|k| build_evolution_matrix(&u, &QubitSubset::single(c.n(), k)?))
            .collect::<Result<_>>()?
    } else {
        a.ems
            .iter()
            .map(|p| Ok(serde_json::from_str(&fs::read_to_string(p)?)?))
            .collect::<Result<_>>()?
    };
    let n = ems.first().map(EvolutionMatrix::n).unwrap_or(0);
    check_cap(n, a.common.max_qubits)?;
    let unitary = reconstruct_unitary(&ems)?;
    let fidelity = match &reference {
        Some(c) if c.n() != n => return Err(argument("reference circuit has a different register size")),
        Some(c) => Some(phase_invariant_fidelity(&unitary, &c.global_unitary()?)),
        None => None,
    };
    Ok(ReconstructReport { n, unitarity_deviation: unitary.unitarity_deviation(), unitary, fidelity })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_cli(std::iter::once("qlocal").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn unknown_suite_is_an_input_error() {
        assert_eq!(run(&["check", "thm9"]).0, EXIT_INPUT);
    }

    #[test]
    fn dims_check_reports_match() {
        let (code, out, _) = run(&["check", "dims", "--n", "2"]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["dimensions"]["descriptor_dim"], 12);
        assert_eq!(run(&["check", "dims", "--n", "4"]).0, EXIT_RESOURCE);
    }

    #[test]
    fn missing_file_and_bad_flags() {
        assert_eq!(run(&["run", "/nonexistent/x.qc"]).0, EXIT_INPUT);
        assert_eq!(run(&["run"]).0, EXIT_INPUT);
        assert_eq!(run(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn exit_code_mapping() {
        assert_eq!(exit_code(&Error::Resource { requested: 1, cap: 0 }), EXIT_RESOURCE);
        assert_eq!(exit_code(&Error::Integrity("x".into())), EXIT_INPUT);
        assert_eq!(exit_code(&argument("x")), EXIT_INPUT);
    }
}
