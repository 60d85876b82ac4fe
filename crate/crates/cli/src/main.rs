//! Command-line front end: split circuits at the Clifford border, simulate
//! them through the dense/composite/tableau paths, benchmark the paths
//! against each other, tally depth-reduction histograms, and run VQE. All
//! plot-ready output is CSV; structured output is JSON.

mod bench;
mod vqe_cmd;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cliffsplit::border::{self, SplitSide};
use cliffsplit::circuit::{parse_qasm, random_clifford_t, Circuit};
use cliffsplit::densesim::{self, Statevector};
use cliffsplit::stabilizer;

#[derive(Parser)]
#[command(
    name = "cliffsplit",
    about = "Clifford border detection, split simulation, and VQE over Clifford+T circuits",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Copy, Clone, ValueEnum)]
enum MethodArg {
    Dense,
    Composite,
    Tableau,
}

#[derive(Subcommand)]
enum Command {
    /// Split a circuit into Clifford and non-Clifford sections.
    Split {
        /// Input OpenQASM 2.0 file.
        input: PathBuf,
        /// Which end of the circuit the Clifford section is taken from.
        #[arg(long, value_enum, default_value = "left")]
        side: SideArg,
        /// Write the SplitResult JSON here (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Re-check unitary equivalence of the recomposition (n ≤ 6).
        #[arg(long)]
        verify: bool,
    },
    /// Simulate a circuit and print its statevector or generators.
    Simulate {
        /// Input OpenQASM 2.0 file.
        input: PathBuf,
        /// dense: statevector kernels; composite: split + tableau + evolve;
        /// tableau: Clifford-only, prints stabilizer generators.
        #[arg(long, value_enum, default_value = "dense")]
        method: MethodArg,
        /// Write JSON output here (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Emit the measurement distribution as CSV instead of amplitudes
        /// (dense/composite methods only).
        #[arg(long)]
        distribution: bool,
    },
    /// Benchmark dense vs composite simulation over random circuits.
    ///
    /// CSV columns: id,n_qubits,depth,seed,path,wall_time_mean_s,
    /// wall_time_var_s2,depth_reduction,checks_passed — one row per
    /// (circuit, path) with mean/variance over the timed repetitions.
    Bench {
        /// Qubit range, e.g. 2..6 (inclusive).
        #[arg(long, value_parser = parse_range)]
        qubits: (usize, usize),
        /// Target circuit depth.
        #[arg(long, default_value_t = 40)]
        depth: usize,
        /// T-gate probability.
        #[arg(long, default_value_t = 0.2)]
        tprob: f64,
        /// Random circuits per qubit count.
        #[arg(long, default_value_t = 5)]
        seeds: u64,
        /// Timed repetitions per measurement, after one discarded warm-up.
        #[arg(long, default_value_t = 7)]
        reps: usize,
        /// Base seed (env var SEED overrides).
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Worker threads across benchmark cells.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write the CSV here (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Depth-reduction percentile histogram over a corpus.
    ///
    /// CSV columns: bucket_lo_pct,bucket_hi_pct,count.
    Histogram {
        /// Directory of .qasm files.
        #[arg(long, conflicts_with = "random")]
        corpus: Option<PathBuf>,
        /// Random corpus spec: n=2..10,depth=20..100,tprob=0.2,count=500
        #[arg(long)]
        random: Option<String>,
        /// Base seed for the random corpus (env var SEED overrides).
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write the CSV here (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gradient-descent VQE with a selectable evaluation backend.
    ///
    /// Trace CSV columns: iter,loss,param0,param1,...
    Vqe {
        /// Hamiltonian JSON: {"terms": [{"coeff": 0.5, "pauli": "ZZ"}, ...]}
        #[arg(long)]
        hamiltonian: PathBuf,
        /// Ansatz as OpenQASM 2.0; T/Tdg gates become the parameters.
        #[arg(long)]
        ansatz: PathBuf,
        /// Loss evaluation backend.
        #[arg(long, value_enum, default_value = "dense")]
        backend: vqe_cmd::BackendArg,
        /// Optimizer config JSON (step_size, max_iters, tolerance, gradient).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Seed for the initial parameter vector, uniform in (-π, π]
        /// (env var SEED overrides); zeros when omitted.
        #[arg(long)]
        init_seed: Option<u64>,
        /// Write the trace CSV here (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected a range like 2..6, got {s:?}"))?;
    let lo: usize = a.trim().parse().map_err(|_| format!("bad range start {a:?}"))?;
    let hi: usize = b.trim().parse().map_err(|_| format!("bad range end {b:?}"))?;
    if lo == 0 || hi < lo {
        return Err(format!("range {s:?} must satisfy 1 <= lo <= hi"));
    }
    Ok((lo, hi))
}

fn env_seed(fallback: u64) -> u64 {
    match std::env::var("SEED") {
        Ok(v) => v.parse().unwrap_or(fallback),
        Err(_) => fallback,
    }
}

fn read_circuit(path: &PathBuf) -> Result<Circuit, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_qasm(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            use std::io::Write;
            // a closed pipe (e.g. piping into `head`) is not an error
            match writeln!(std::io::stdout(), "{content}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(format!("cannot write to stdout: {e}"))
                }
                _ => Ok(()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Split { input, side, out, verify } => cmd_split(&input, side, &out, verify),
        Command::Simulate { input, method, out, distribution } => {
            cmd_simulate(&input, method, &out, distribution)
        }
        Command::Bench { qubits, depth, tprob, seeds, reps, seed, jobs, out } => {
            let csv = bench::run(qubits, depth, tprob, seeds, reps, env_seed(seed), jobs)?;
            write_output(&out, &csv)
        }
        Command::Histogram { corpus, random, seed, out } => {
            cmd_histogram(corpus, random, env_seed(seed), &out)
        }
        Command::Vqe { hamiltonian, ansatz, backend, config, init_seed, out } => {
            vqe_cmd::run(&hamiltonian, &ansatz, backend, &config, init_seed.map(env_seed), &out)
        }
    }
}

fn cmd_split(
    input: &PathBuf,
    side: SideArg,
    out: &Option<PathBuf>,
    verify: bool,
) -> Result<(), String> {
    let circuit = read_circuit(input)?;
    let side = match side {
        SideArg::Left => SplitSide::Left,
        SideArg::Right => SplitSide::Right,
    };
    let split = border::split(&circuit, side).map_err(|e| e.to_string())?;

    let total = split.recomposed();
    eprintln!(
        "input depth {}, recomposed depth {}, Clifford depth {} ({} gates), \
         non-Clifford depth {} ({} gates), reduction {:.1}%",
        circuit.depth(),
        total.depth(),
        split.clifford.depth(),
        split.clifford.gate_count(),
        split.non_clifford.depth(),
        split.non_clifford.gate_count(),
        100.0 * split.depth_reduction
    );

    if verify {
        if circuit.n_qubits > densesim::UNITARY_MAX_QUBITS {
            return Err(format!(
                "--verify supports at most {} qubits",
                densesim::UNITARY_MAX_QUBITS
            ));
        }
        let u = densesim::unitary(&circuit).map_err(|e| e.to_string())?;
        let v = densesim::unitary(&total).map_err(|e| e.to_string())?;
        if !u.equal_up_to_scalar(&v, 1e-9) {
            return Err("recomposed circuit deviates from the original".into());
        }
        eprintln!("verified: recomposition matches the original up to global phase");
    }

    let json = serde_json::to_string_pretty(&split).map_err(|e| e.to_string())?;
    write_output(out, &json)
}

fn cmd_simulate(
    input: &PathBuf,
    method: MethodArg,
    out: &Option<PathBuf>,
    distribution: bool,
) -> Result<(), String> {
    let circuit = read_circuit(input)?;
    let emit = |out: &Option<PathBuf>, state: &Statevector| -> Result<(), String> {
        if distribution {
            write_output(out, &densesim::distribution_csv(&state.distribution()))
        } else {
            write_output(out, &state_json(state)?)
        }
    };
    match method {
        MethodArg::Dense => {
            let state = Statevector::zero_state(circuit.n_qubits)
                .evolved(&circuit)
                .map_err(|e| e.to_string())?;
            emit(out, &state)
        }
        MethodArg::Composite => {
            let state = densesim::composite_simulate(&circuit).map_err(|e| e.to_string())?;
            emit(out, &state)
        }
        MethodArg::Tableau => {
            if distribution {
                return Err("--distribution applies to dense/composite methods only".into());
            }
            let tableau = stabilizer::run_tableau(&circuit).map_err(|e| e.to_string())?;
            let gens: Vec<String> =
                tableau.generators().iter().map(|g| g.to_string()).collect();
            write_output(out, &serde_json::to_string_pretty(&gens).map_err(|e| e.to_string())?)
        }
    }
}

fn state_json(state: &Statevector) -> Result<String, String> {
    let pairs: Vec<[f64; 2]> = state.amplitudes().iter().map(|a| [a.re, a.im]).collect();
    serde_json::to_string(&pairs).map_err(|e| e.to_string())
}

fn cmd_histogram(
    corpus: Option<PathBuf>,
    random: Option<String>,
    seed: u64,
    out: &Option<PathBuf>,
) -> Result<(), String> {
    let circuits: Vec<Circuit> = match (corpus, random) {
        (Some(dir), None) => {
            let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
                .map_err(|e| format!("cannot read {}: {e}", dir.display()))?
                .filter_map(|entry| entry.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "qasm"))
                .collect();
            files.sort();
            files.iter().map(read_circuit).collect::<Result<_, _>>()?
        }
        (None, Some(spec)) => random_corpus(&spec, seed)?,
        _ => return Err("histogram needs exactly one of --corpus or --random".into()),
    };
    let buckets = border::depth_reduction_histogram(&circuits).map_err(|e| e.to_string())?;
    let mut csv = String::from("bucket_lo_pct,bucket_hi_pct,count\n");
    for (i, count) in buckets.iter().enumerate() {
        csv.push_str(&format!("{},{},{}\n", i * 10, (i + 1) * 10, count));
    }
    write_output(out, &csv)
}

/// Parse "n=2..10,depth=20..100,tprob=0.2,count=500" and draw that corpus
/// deterministically from the seed.
fn random_corpus(spec: &str, seed: u64) -> Result<Vec<Circuit>, String> {
    let mut n = (2usize, 10usize);
    let mut depth = (20usize, 100usize);
    let mut tprob = 0.2f64;
    let mut count = 500usize;
    for field in spec.split(',') {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| format!("bad corpus field {field:?}"))?;
        match key.trim() {
            "n" => n = parse_range(value)?,
            "depth" => depth = parse_range(value)?,
            "tprob" => {
                tprob = value.parse().map_err(|_| format!("bad tprob {value:?}"))?;
            }
            "count" => {
                count = value.parse().map_err(|_| format!("bad count {value:?}"))?;
            }
            other => return Err(format!("unknown corpus key {other:?}")),
        }
    }
    (0..count)
        .map(|i| {
            let s = seed.wrapping_add(i as u64);
            let qubits = n.0 + (i % (n.1 - n.0 + 1));
            let d = depth.0 + (7 * i) % (depth.1 - depth.0 + 1);
            random_clifford_t(qubits, d, tprob, s).map_err(|e| e.to_string())
        })
        .collect()
}
