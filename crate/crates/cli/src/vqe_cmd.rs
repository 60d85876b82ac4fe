//! The `vqe` subcommand: load a Pauli-sum Hamiltonian and a Clifford+T
//! ansatz, run gradient descent through the chosen backend, and emit the
//! trace as CSV.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::ValueEnum;
use serde::Deserialize;

use cliffsplit::circuit::{parse_qasm, PauliString, PauliSum};
use cliffsplit::vqe::{Ansatz, Backend, GradientMethod, VqeConfig, VqeProblem};

#[derive(Copy, Clone, ValueEnum)]
pub enum BackendArg {
    Dense,
    SplitLeft,
    AbsorbRight,
}

#[derive(Deserialize)]
struct HamiltonianFile {
    terms: Vec<HamiltonianTerm>,
}

#[derive(Deserialize)]
struct HamiltonianTerm {
    coeff: f64,
    pauli: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default = "default_step")]
    step_size: f64,
    #[serde(default = "default_iters")]
    max_iters: usize,
    #[serde(default = "default_tol")]
    tolerance: f64,
    #[serde(default)]
    gradient: GradientField,
}

fn default_step() -> f64 {
    0.1
}
fn default_iters() -> usize {
    200
}
fn default_tol() -> f64 {
    1e-9
}

#[derive(Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
enum GradientField {
    #[default]
    ParameterShift,
    FiniteDifference(f64),
}

/// Usage-class failures (malformed config/hamiltonian) exit with code 2,
/// like argument parse errors; domain failures propagate as exit 1.
fn usage_error(msg: String) -> ! {
    eprintln!("error: {msg}");
    std::process::exit(2);
}

pub fn run(
    hamiltonian: &PathBuf,
    ansatz: &PathBuf,
    backend: BackendArg,
    config: &Option<PathBuf>,
    init_seed: Option<u64>,
    out: &Option<PathBuf>,
) -> Result<(), String> {
    let ham_text = std::fs::read_to_string(hamiltonian)
        .map_err(|e| format!("cannot read {}: {e}", hamiltonian.display()))?;
    let ham: HamiltonianFile = serde_json::from_str(&ham_text)
        .unwrap_or_else(|e| usage_error(format!("bad hamiltonian json: {e}")));
    let terms: Vec<(f64, PauliString)> = ham
        .terms
        .iter()
        .map(|t| {
            t.pauli
                .parse::<PauliString>()
                .map(|p| (t.coeff, p))
                .unwrap_or_else(|e| usage_error(format!("bad pauli {:?}: {e}", t.pauli)))
        })
        .collect();
    let observable = PauliSum::new(terms);

    let qasm = std::fs::read_to_string(ansatz)
        .map_err(|e| format!("cannot read {}: {e}", ansatz.display()))?;
    let circuit = parse_qasm(&qasm).map_err(|e| format!("{}: {e}", ansatz.display()))?;
    let ansatz = Ansatz::from_clifford_t(&circuit);

    let config = match config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let file: ConfigFile = serde_json::from_str(&text)
                .unwrap_or_else(|e| usage_error(format!("bad config json: {e}")));
            if file.step_size <= 0.0 || file.max_iters == 0 {
                usage_error("config needs step_size > 0 and max_iters >= 1".into());
            }
            VqeConfig {
                step_size: file.step_size,
                max_iters: file.max_iters,
                tolerance: file.tolerance,
                gradient: match file.gradient {
                    GradientField::ParameterShift => GradientMethod::ParameterShift,
                    GradientField::FiniteDifference(h) => GradientMethod::FiniteDifference(h),
                },
            }
        }
        None => VqeConfig::default(),
    };

    let init: Vec<f64> = match init_seed {
        Some(seed) => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            (0..ansatz.parameter_count())
                .map(|_| rng.gen_range(-std::f64::consts::PI..=std::f64::consts::PI))
                .collect()
        }
        None => vec![0.0; ansatz.parameter_count()],
    };

    let backend = match backend {
        BackendArg::Dense => Backend::Dense,
        BackendArg::SplitLeft => Backend::SplitLeft,
        BackendArg::AbsorbRight => Backend::AbsorbRight,
    };
    let problem =
        VqeProblem::prepare(ansatz, observable, backend).map_err(|e| e.to_string())?;
    let trace = problem.descend(&config, &init).map_err(|e| e.to_string())?;

    eprintln!(
        "{} iterations, final loss {:.12}, converged: {}",
        trace.iterations.len(),
        trace.final_loss,
        trace.converged
    );

    let mut csv = String::from("iter,loss");
    for k in 0..problem.parameter_count() {
        let _ = write!(csv, ",param{k}");
    }
    csv.push('\n');
    for (i, (params, loss)) in trace.iterations.iter().enumerate() {
        let _ = write!(csv, "{i},{loss:.15}");
        for p in params {
            let _ = write!(csv, ",{p:.15}");
        }
        csv.push('\n');
    }
    super::write_output(out, &csv)
}
