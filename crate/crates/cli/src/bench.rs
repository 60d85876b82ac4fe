//! Dense-vs-composite benchmark harness. Per circuit the splitting is done
//! once up front (it is compilation, not simulation); the timed pipelines
//! are statevector evolution from zero versus tableau simulation plus
//! generator reconstruction plus evolution through the non-Clifford rest.

use std::fmt::Write as _;
use std::time::Instant;

use cliffsplit::border::{self, SplitResult, SplitSide};
use cliffsplit::circuit::random_clifford_t;
use cliffsplit::densesim::Statevector;
use cliffsplit::stabilizer;

struct Cell {
    id: usize,
    n: usize,
    depth: usize,
    seed: u64,
}

struct Row {
    id: usize,
    n: usize,
    depth: usize,
    seed: u64,
    path: &'static str,
    mean_s: f64,
    var_s2: f64,
    depth_reduction: f64,
    checks_passed: bool,
}

pub fn run(
    qubits: (usize, usize),
    depth: usize,
    tprob: f64,
    seeds: u64,
    reps: usize,
    base_seed: u64,
    jobs: usize,
) -> Result<String, String> {
    let mut cells = Vec::new();
    let mut id = 0;
    for n in qubits.0..=qubits.1 {
        for k in 0..seeds {
            cells.push(Cell { id, n, depth, seed: base_seed.wrapping_add(k) });
            id += 1;
        }
    }

    let rows: Vec<Row> = if jobs <= 1 {
        cells
            .iter()
            .map(|c| measure_cell(c, tprob, reps))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .flatten()
            .collect()
    } else {
        // distribute cells over workers; rows are re-sorted by id to keep
        // the CSV deterministic apart from the timing columns
        let chunks: Vec<Vec<&Cell>> = (0..jobs)
            .map(|w| cells.iter().skip(w).step_by(jobs).collect())
            .collect();
        let mut all: Vec<Row> = std::thread::scope(|scope| {
            let handles: Vec<_> = chunks
                .into_iter()
                .map(|chunk| {
                    scope.spawn(move || {
                        chunk
                            .into_iter()
                            .map(|c| measure_cell(c, tprob, reps))
                            .collect::<Result<Vec<_>, String>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect::<Result<Vec<_>, _>>()
                .map(|v| v.into_iter().flatten().flatten().collect())
        })?;
        all.sort_by_key(|r| (r.id, r.path == "composite"));
        all
    };

    let mut csv = String::from(
        "id,n_qubits,depth,seed,path,wall_time_mean_s,wall_time_var_s2,depth_reduction,checks_passed\n",
    );
    for r in rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{:.9e},{:.9e},{:.6},{}",
            r.id, r.n, r.depth, r.seed, r.path, r.mean_s, r.var_s2, r.depth_reduction, r.checks_passed
        );
    }
    Ok(csv)
}

fn measure_cell(cell: &Cell, tprob: f64, reps: usize) -> Result<Vec<Row>, String> {
    let circuit =
        random_clifford_t(cell.n, cell.depth, tprob, cell.seed).map_err(|e| e.to_string())?;
    let split = border::split(&circuit, SplitSide::Left).map_err(|e| e.to_string())?;

    let dense_state = Statevector::zero_state(cell.n)
        .evolved(&circuit)
        .map_err(|e| e.to_string())?;
    let composite_state = run_composite(&split).map_err(|e| e.to_string())?;
    let checks_passed = (dense_state.overlap(&composite_state) - 1.0).abs() < 1e-9;

    let (dense_mean, dense_var) = time_reps(reps, || {
        let _ = Statevector::zero_state(cell.n).evolved(&circuit).unwrap();
    });
    let (comp_mean, comp_var) = time_reps(reps, || {
        let _ = run_composite(&split).unwrap();
    });

    Ok(vec![
        Row {
            id: cell.id,
            n: cell.n,
            depth: cell.depth,
            seed: cell.seed,
            path: "dense",
            mean_s: dense_mean,
            var_s2: dense_var,
            depth_reduction: split.depth_reduction,
            checks_passed,
        },
        Row {
            id: cell.id,
            n: cell.n,
            depth: cell.depth,
            seed: cell.seed,
            path: "composite",
            mean_s: comp_mean,
            var_s2: comp_var,
            depth_reduction: split.depth_reduction,
            checks_passed,
        },
    ])
}

fn run_composite(split: &SplitResult) -> Result<Statevector, String> {
    let tableau = stabilizer::run_tableau(&split.clifford).map_err(|e| e.to_string())?;
    let mut state = stabilizer::tableau_statevector(&tableau).map_err(|e| e.to_string())?;
    state.evolve(&split.non_clifford).map_err(|e| e.to_string())?;
    Ok(state)
}

/// Mean and variance of the wall time over `reps` runs, after one discarded
/// warm-up run.
fn time_reps(reps: usize, mut f: impl FnMut()) -> (f64, f64) {
    f(); // warm-up
    let mut times = Vec::with_capacity(reps);
    for _ in 0..reps.max(1) {
        let t0 = Instant::now();
        f();
        times.push(t0.elapsed().as_secs_f64());
    }
    let mean = times.iter().sum::<f64>() / times.len() as f64;
    let var = times.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>() / times.len() as f64;
    (mean, var)
}
