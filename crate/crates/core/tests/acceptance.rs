//! Acceptance suite: one test per shipping criterion, each printing a
//! PASS/FAIL line (visible with `cargo test --test acceptance -- --nocapture`).
//! Tolerances are pinned in the constants below.

use std::time::Instant;

use cliffsplit::border::{self, SplitSide};
use cliffsplit::circuit::{random_clifford_t, Circuit, Gate, PauliSum, PauliString};
use cliffsplit::densesim::{self, expectation, Statevector};
use cliffsplit::matrix::Matrix;
use cliffsplit::oracle;
use cliffsplit::projector;
use cliffsplit::stabilizer;
use cliffsplit::vqe::{self, Ansatz, Backend, GradientMethod, VqeConfig, VqeProblem};
use cliffsplit::zx;

const OVERLAP_TOL: f64 = 1e-9;
const EXACT_TOL: f64 = 1e-10;
const GRADIENT_TOL: f64 = 1e-6;
const GROUND_TOL: f64 = 1e-4;
const SPLIT_BUDGET_SECS: f64 = 300.0;

fn report(criterion: &str, passed: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} — {detail}",
        if passed { "PASS" } else { "FAIL" }
    );
    assert!(passed, "criterion {criterion} failed: {detail}");
}

/// |Tr(U†V)| / 2^n.
fn trace_overlap(u: &Matrix, v: &Matrix) -> f64 {
    u.adjoint().mul(v).trace().norm() / u.rows() as f64
}

/// The 200-circuit corpus shared by criteria 1, 2, and 4:
/// n = 2..6, depth 20..60, t_prob = 0.2.
fn split_corpus() -> Vec<Circuit> {
    (0..200)
        .map(|i| {
            let n = 2 + i % 5;
            let depth = 20 + (i * 7) % 41;
            random_clifford_t(n, depth, 0.2, 1000 + i as u64).unwrap()
        })
        .collect()
}

fn acceptance_hamiltonian() -> PauliSum {
    PauliSum::new(vec![
        (0.5, "ZZ".parse().unwrap()),
        (-0.3, "XI".parse().unwrap()),
        (0.2, "IX".parse().unwrap()),
    ])
}

/// The 20-ansatz VQE corpus shared by criteria 8 and 10:
/// 2 qubits, depth 20..100, t_prob = 0.2.
fn vqe_corpus() -> Vec<Ansatz> {
    (0..20)
        .map(|i| {
            let depth = 20 + (i * 17) % 81;
            Ansatz::from_clifford_t(&random_clifford_t(2, depth, 0.2, 3000 + i as u64).unwrap())
        })
        .collect()
}

#[test]
fn criterion_01_split_soundness() {
    let start = Instant::now();
    let corpus = split_corpus();
    let mut worst: f64 = 1.0;
    for c in &corpus {
        let u = densesim::unitary(c).unwrap();
        for side in [SplitSide::Left, SplitSide::Right] {
            let s = border::split(c, side).unwrap();
            assert!(s.clifford.is_clifford(), "U_C must be 100% Clifford");
            let v = densesim::unitary(&s.recomposed()).unwrap();
            worst = worst.min(trace_overlap(&u, &v));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "1 (split soundness)",
        worst >= 1.0 - OVERLAP_TOL && elapsed < SPLIT_BUDGET_SECS,
        &format!(
            "200 circuits × both sides, worst |Tr(U†V)|/2^n = {worst:.12}, {elapsed:.1}s"
        ),
    );
}

#[test]
fn criterion_02_extraction_soundness() {
    let corpus = split_corpus();
    let mut worst: f64 = 1.0;
    for c in &corpus {
        let mut d = zx::ZXDiagram::from_circuit(c);
        zx::to_graph_like(&mut d);
        let extracted = zx::extract_circuit(&d).unwrap();
        for g in &extracted.gates {
            let ok = match g {
                Gate::H { .. } | Gate::Cz { .. } | Gate::Cx { .. } => true,
                Gate::Rz { phase, .. } => matches!(phase.denom(), 1 | 2 | 4),
                _ => false,
            };
            assert!(ok, "extracted gate {g} outside the allowed set");
        }
        let u = densesim::unitary(c).unwrap();
        let v = densesim::unitary(&extracted).unwrap();
        worst = worst.min(trace_overlap(&u, &v));
    }
    report(
        "2 (extraction soundness)",
        worst >= 1.0 - OVERLAP_TOL,
        &format!("200 round trips, worst overlap = {worst:.12}, gate set ⊆ {{H, Rz, CZ, CNOT}}"),
    );
}

#[test]
fn criterion_03_stabilizer_reconstruction() {
    let mut worst: f64 = 1.0;
    for i in 0..100 {
        let n = 2 + i % 7;
        let c = random_clifford_t(n, 40, 0.0, 5000 + i as u64).unwrap();
        let tableau = stabilizer::run_tableau(&c).unwrap();
        let rec = stabilizer::tableau_statevector(&tableau).unwrap();
        let direct = Statevector::zero_state(n).evolved(&c).unwrap();
        worst = worst.min(rec.overlap(&direct));
    }

    let gens: Vec<PauliString> =
        ["+ZZY", "+ZXZ", "+YIX"].iter().map(|s| s.parse().unwrap()).collect();
    let psi = stabilizer::stabilizer_statevector(&gens).unwrap();
    let mut max_residual: f64 = 0.0;
    for g in &gens {
        let image = densesim::apply_pauli(&psi, g);
        let residual: f64 = psi
            .amplitudes()
            .iter()
            .zip(image.amplitudes())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        max_residual = max_residual.max(residual);
    }
    report(
        "3 (stabilizer reconstruction)",
        worst >= 1.0 - OVERLAP_TOL && max_residual < EXACT_TOL,
        &format!(
            "100 circuits n=2..8, worst overlap = {worst:.12}; \
             {{+ZZY,+ZXZ,+YIX}} residual = {max_residual:.2e}"
        ),
    );
}

#[test]
fn criterion_04_composite_equivalence_and_speed() {
    let corpus = split_corpus();
    let mut worst: f64 = 1.0;
    for c in &corpus {
        let composite = densesim::composite_simulate(c).unwrap();
        let direct = Statevector::zero_state(c.n_qubits).evolved(c).unwrap();
        worst = worst.min(composite.overlap(&direct));
    }

    // self-relative speed at n = 8, depth 100, pure Clifford: the tableau
    // path (tableau + reconstruction) against the dense path, taking the
    // fastest of several timed batches to suppress scheduling noise
    let c = random_clifford_t(8, 100, 0.0, 77).unwrap();
    let best_of = |f: &dyn Fn()| -> f64 {
        (0..7)
            .map(|_| {
                let t0 = Instant::now();
                for _ in 0..20 {
                    f();
                }
                t0.elapsed().as_secs_f64() / 20.0
            })
            .fold(f64::INFINITY, f64::min)
    };
    let tableau_time = best_of(&|| {
        let t = stabilizer::run_tableau(&c).unwrap();
        let _ = stabilizer::tableau_statevector(&t).unwrap();
    });
    let dense_time = best_of(&|| {
        let _ = Statevector::zero_state(8).evolved(&c).unwrap();
    });
    let ratio = dense_time / tableau_time;

    report(
        "4 (composite simulation)",
        worst >= 1.0 - OVERLAP_TOL && ratio > 1.0,
        &format!(
            "200 circuits, worst overlap = {worst:.12}; \
             dense/tableau time ratio at n=8 depth=100: {ratio:.1}x"
        ),
    );
}

#[test]
fn criterion_05_projector_circuit() {
    let mut worst: f64 = 1.0;
    for n in 1..=4usize {
        for k in 0..6u64 {
            let c = random_clifford_t(n, 30, 0.0, 7000 + 10 * n as u64 + k).unwrap();
            let gens = stabilizer::run_tableau(&c).unwrap().generators();
            let proj = projector::build_projector(&gens, n)
                .expect("random tableau generators never degenerate to identity");

            let (lo, hi) = projector::projector_depth_bounds(n);
            let depth = proj.pre_transpile_depth();
            assert!(depth >= lo && depth <= hi, "depth {depth} outside [{lo}, {hi}]");

            // seed the targets with a random non-perpendicular state
            let seed_circuit = random_clifford_t(n, 20, 0.4, 8000 + 10 * n as u64 + k).unwrap();
            let seed = Statevector::zero_state(n).evolved(&seed_circuit).unwrap();
            let mut full = vec![num_complex::Complex64::new(0.0, 0.0); 1 << (n + gens.len())];
            for (t, amp) in seed.amplitudes().iter().enumerate() {
                full[t << gens.len()] = *amp;
            }
            let mut full = Statevector::from_amplitudes(n + gens.len(), full);
            full.evolve(&proj.circuit).unwrap();
            match projector::postselect_ancillas(
                &full,
                &proj.ancilla_indices,
                &vec![false; gens.len()],
            ) {
                Ok((state, _)) => {
                    let want = stabilizer::stabilizer_statevector(&gens).unwrap();
                    worst = worst.min(state.overlap(&want));
                }
                Err(projector::ProjectorError::ZeroProbabilityOutcome) => {
                    // seed was perpendicular to the stabilizer state; admissible
                }
                Err(other) => panic!("unexpected projector error: {other}"),
            }
        }
    }

    let fig2: Vec<PauliString> =
        ["+ZZY", "+ZXZ", "+YIX"].iter().map(|s| s.parse().unwrap()).collect();
    let proj = projector::build_projector(&fig2, 3).unwrap();
    report(
        "5 (projector circuit)",
        worst >= 1.0 - OVERLAP_TOL && proj.controlled_op_count() == 8,
        &format!(
            "n=1..4 all-zero post-selection worst overlap = {worst:.12}; \
             depths within bounds; example instance uses {} controlled ops",
            proj.controlled_op_count()
        ),
    );
}

#[test]
fn criterion_06_distribution_equivalence() {
    let mut worst_tv: f64 = 0.0;
    for i in 0..100 {
        let n = 2 + i % 4;
        let depth = 12 + (i * 3) % 25;
        let c = random_clifford_t(n, depth, 0.2, 9000 + i as u64).unwrap();
        let via = projector::distribution_via_projector(&c).unwrap();
        let direct = Statevector::zero_state(n).evolved(&c).unwrap().distribution();
        let tv: f64 = via.iter().zip(&direct).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0;
        worst_tv = worst_tv.max(tv);
    }
    report(
        "6 (distribution equivalence)",
        worst_tv < OVERLAP_TOL,
        &format!("100 right-split circuits n=2..5, worst total variation = {worst_tv:.2e}"),
    );
}

#[test]
fn criterion_07_observable_absorption() {
    let mut worst_value: f64 = 0.0;
    let mut worst_matrix: f64 = 0.0;
    for i in 0..100 {
        let n = 2 + i % 3;
        let c = random_clifford_t(n, 20, 0.2, 11000 + i as u64).unwrap();
        let split = border::split(&c, SplitSide::Right).unwrap();
        let a = PauliSum::new(vec![
            (0.7, oracle::random_pauli(n, 500 + i as u64)),
            (-0.4, oracle::random_pauli(n, 900 + i as u64)),
        ]);

        let absorbed = vqe::absorb_clifford(&a, &split.clifford).unwrap();

        let full = Statevector::zero_state(n).evolved(&split.recomposed()).unwrap();
        let lhs = expectation(&full, &a).unwrap();
        let nc = Statevector::zero_state(n).evolved(&split.non_clifford).unwrap();
        let rhs = expectation(&nc, &absorbed).unwrap();
        worst_value = worst_value.max((lhs - rhs).abs());

        let um = densesim::unitary(&split.clifford).unwrap();
        let dense_conj = um.adjoint().mul(&oracle::pauli_sum_matrix(&a)).mul(&um);
        worst_matrix =
            worst_matrix.max(oracle::pauli_sum_matrix(&absorbed).max_abs_diff(&dense_conj));
    }
    report(
        "7 (observable absorption)",
        worst_value < EXACT_TOL && worst_matrix < EXACT_TOL,
        &format!(
            "100 pairs, worst expectation gap = {worst_value:.2e}, \
             worst matrix deviation = {worst_matrix:.2e}"
        ),
    );
}

#[test]
fn criterion_08_vqe_backend_equality() {
    let observable = acceptance_hamiltonian();
    let exact_ground = oracle::ground_energy(&observable);
    let config = VqeConfig {
        step_size: 0.2,
        max_iters: 400,
        tolerance: 1e-10,
        gradient: GradientMethod::ParameterShift,
    };

    let mut worst_gap: f64 = 0.0;
    let mut best_final = f64::INFINITY;
    for (i, ansatz) in vqe_corpus().into_iter().enumerate() {
        let k = ansatz.parameter_count();
        let init: Vec<f64> = (0..k).map(|j| 0.23 + 0.61 * j as f64).collect();
        let dense = VqeProblem::prepare(ansatz.clone(), observable.clone(), Backend::Dense)
            .unwrap()
            .descend(&config, &init)
            .unwrap();
        let split = VqeProblem::prepare(ansatz, observable.clone(), Backend::SplitLeft)
            .unwrap()
            .descend(&config, &init)
            .unwrap();
        assert_eq!(
            dense.iterations.len(),
            split.iterations.len(),
            "ansatz {i}: trace lengths diverged"
        );
        for ((_, dl), (_, sl)) in dense.iterations.iter().zip(&split.iterations) {
            worst_gap = worst_gap.max((dl - sl).abs());
        }
        best_final = best_final.min(dense.final_loss);
    }
    report(
        "8 (VQE backend equality)",
        worst_gap < EXACT_TOL && (best_final - exact_ground).abs() < GROUND_TOL,
        &format!(
            "20 ansatzes, worst per-iteration dense/split gap = {worst_gap:.2e}; \
             best final loss {best_final:.9} vs exact ground {exact_ground:.9}"
        ),
    );
}

#[test]
fn criterion_09_histogram_shape() {
    let corpus: Vec<Circuit> = (0..500)
        .map(|i| {
            let n = 2 + i % 9;
            let depth = 20 + (i * 13) % 81;
            random_clifford_t(n, depth, 0.2, 13000 + i as u64).unwrap()
        })
        .collect();
    let buckets = border::depth_reduction_histogram(&corpus).unwrap();
    let mid = &buckets[1..9];
    let weakly_decreasing = mid.windows(2).all(|w| w[0] >= w[1]);
    report(
        "9 (histogram shape)",
        weakly_decreasing,
        &format!("bucket counts = {buckets:?}; [10%,90%) weakly decreasing"),
    );
}

#[test]
fn criterion_10_gradient_check() {
    let observable = acceptance_hamiltonian();
    let mut worst: f64 = 0.0;
    for ansatz in vqe_corpus() {
        let k = ansatz.parameter_count();
        let problem =
            VqeProblem::prepare(ansatz, observable.clone(), Backend::Dense).unwrap();
        for point in 0..2 {
            let params: Vec<f64> =
                (0..k).map(|j| -1.1 + 0.37 * j as f64 + 0.5 * point as f64).collect();
            let ps = problem.gradient(&params, GradientMethod::ParameterShift).unwrap();
            let fd = problem.gradient(&params, GradientMethod::FiniteDifference(1e-5)).unwrap();
            for (a, b) in ps.iter().zip(&fd) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    report(
        "10 (gradient check)",
        worst < GRADIENT_TOL,
        &format!("20 ansatzes × 2 points, worst parameter-shift vs finite-difference gap = {worst:.2e}"),
    );
}
