//! Gradient-descent VQE over parameterized Clifford+T ansatzes, with three
//! interchangeable loss backends: plain dense simulation, split simulation
//! seeded by the precomputed stabilizer state of the left Clifford section,
//! and right-Clifford observable absorption.

use serde::Serialize;
use thiserror::Error;

use crate::border::{self, SplitError, SplitSide};
use crate::circuit::{Circuit, Gate, PauliSum, Phase};
use crate::densesim::{expectation, SimError, Statevector};
use crate::stabilizer::{self, TableauError};

#[derive(Debug, Error)]
pub enum VqeError {
    #[error("expected {want} parameters, got {got}")]
    ParameterCount { want: usize, got: usize },
    #[error("parameter {0} is used more than once in the template")]
    ParameterReuse(u32),
    #[error(transparent)]
    Split(#[from] SplitError),
    #[error(transparent)]
    Tableau(#[from] TableauError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// A circuit template whose Rz gates may reference variational parameters.
/// Each parameter id appears exactly once, which keeps the parameter-shift
/// rule exact.
#[derive(Clone, Debug)]
pub struct Ansatz {
    template: Circuit,
    parameter_count: usize,
}

impl Ansatz {
    pub fn new(template: Circuit) -> Result<Ansatz, VqeError> {
        let mut seen: Vec<u32> = Vec::new();
        for g in &template.gates {
            if let Gate::Rz { phase, .. } = g {
                for &(id, _) in phase.param_terms() {
                    if seen.contains(&id) {
                        return Err(VqeError::ParameterReuse(id));
                    }
                    seen.push(id);
                }
            }
        }
        let parameter_count = seen.iter().map(|&id| id as usize + 1).max().unwrap_or(0);
        Ok(Ansatz { template, parameter_count })
    }

    /// Turn a Clifford+T circuit into an ansatz by replacing every T/Tdg
    /// with a freshly parameterized Z-rotation.
    pub fn from_clifford_t(c: &Circuit) -> Ansatz {
        let mut next = 0u32;
        let gates = c
            .gates
            .iter()
            .map(|g| match g {
                Gate::T { qubits } | Gate::Tdg { qubits } => {
                    let p = Phase::parameter(next);
                    next += 1;
                    Gate::rz(p, qubits[0])
                }
                other => other.clone(),
            })
            .collect();
        Ansatz {
            template: Circuit { n_qubits: c.n_qubits, gates },
            parameter_count: next as usize,
        }
    }

    pub fn template(&self) -> &Circuit {
        &self.template
    }

    pub fn parameter_count(&self) -> usize {
        self.parameter_count
    }

    pub fn n_qubits(&self) -> usize {
        self.template.n_qubits
    }

    /// Substitute parameter values, yielding a concrete circuit.
    pub fn bind(&self, params: &[f64]) -> Result<Circuit, VqeError> {
        if params.len() != self.parameter_count {
            return Err(VqeError::ParameterCount { want: self.parameter_count, got: params.len() });
        }
        Ok(bind_circuit(&self.template, params))
    }
}

fn bind_circuit(template: &Circuit, params: &[f64]) -> Circuit {
    let gates = template
        .gates
        .iter()
        .map(|g| match g {
            Gate::Rz { qubits, phase } if !phase.is_concrete() => {
                Gate::rz(phase.bind(params), qubits[0])
            }
            other => other.clone(),
        })
        .collect();
    Circuit { n_qubits: template.n_qubits, gates }
}

/// Loss-evaluation strategy.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    /// Evolve |0...0> through the bound ansatz.
    Dense,
    /// Split left once, precompute the stabilizer state of U_C, and evolve
    /// it through the bound non-Clifford remainder.
    SplitLeft,
    /// Split right once and absorb the observable through U_C, evaluating
    /// the transformed observable on the bound non-Clifford part.
    AbsorbRight,
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub enum GradientMethod {
    /// Exact for Rz-generated parameters: (f(θ+π/2) - f(θ-π/2)) / 2.
    ParameterShift,
    /// Central differences with step h.
    FiniteDifference(f64),
}

#[derive(Clone, Debug)]
pub struct VqeConfig {
    pub step_size: f64,
    pub max_iters: usize,
    pub tolerance: f64,
    pub gradient: GradientMethod,
}

impl Default for VqeConfig {
    fn default() -> VqeConfig {
        VqeConfig {
            step_size: 0.1,
            max_iters: 200,
            tolerance: 1e-9,
            gradient: GradientMethod::ParameterShift,
        }
    }
}

/// Per-iteration record of a descent run.
#[derive(Clone, Debug, Serialize)]
pub struct VqeTrace {
    pub iterations: Vec<(Vec<f64>, f64)>,
    pub final_params: Vec<f64>,
    pub final_loss: f64,
    pub converged: bool,
}

enum Prepared {
    Dense,
    SplitLeft { stabilizer_state: Statevector, non_clifford: Circuit },
    AbsorbRight { absorbed: PauliSum, non_clifford: Circuit },
}

/// An ansatz/observable pair with its backend's one-time preparation done:
/// splitting, stabilizer-state reconstruction, observable absorption.
pub struct VqeProblem {
    ansatz: Ansatz,
    observable: PauliSum,
    prepared: Prepared,
}

impl VqeProblem {
    pub fn prepare(
        ansatz: Ansatz,
        observable: PauliSum,
        backend: Backend,
    ) -> Result<VqeProblem, VqeError> {
        let prepared = match backend {
            Backend::Dense => Prepared::Dense,
            Backend::SplitLeft => {
                let split = border::split(ansatz.template(), SplitSide::Left)?;
                assert!(split.clifford.is_clifford(), "left section must be Clifford");
                let tableau = stabilizer::run_tableau(&split.clifford)?;
                let stabilizer_state = stabilizer::tableau_statevector(&tableau)?;
                Prepared::SplitLeft { stabilizer_state, non_clifford: split.non_clifford }
            }
            Backend::AbsorbRight => {
                let split = border::split(ansatz.template(), SplitSide::Right)?;
                assert!(split.clifford.is_clifford(), "right section must be Clifford");
                let absorbed = absorb_clifford(&observable, &split.clifford)?;
                Prepared::AbsorbRight { absorbed, non_clifford: split.non_clifford }
            }
        };
        Ok(VqeProblem { ansatz, observable, prepared })
    }

    pub fn parameter_count(&self) -> usize {
        self.ansatz.parameter_count()
    }

    /// <ψ(θ)|A|ψ(θ)> through this problem's backend.
    pub fn loss(&self, params: &[f64]) -> Result<f64, VqeError> {
        if params.len() != self.ansatz.parameter_count() {
            return Err(VqeError::ParameterCount {
                want: self.ansatz.parameter_count(),
                got: params.len(),
            });
        }
        match &self.prepared {
            Prepared::Dense => {
                let bound = self.ansatz.bind(params)?;
                let state = Statevector::zero_state(bound.n_qubits).evolved(&bound)?;
                Ok(expectation(&state, &self.observable)?)
            }
            Prepared::SplitLeft { stabilizer_state, non_clifford } => {
                let bound = bind_circuit(non_clifford, params);
                let state = stabilizer_state.evolved(&bound)?;
                Ok(expectation(&state, &self.observable)?)
            }
            Prepared::AbsorbRight { absorbed, non_clifford } => {
                let bound = bind_circuit(non_clifford, params);
                let state = Statevector::zero_state(bound.n_qubits).evolved(&bound)?;
                Ok(expectation(&state, absorbed)?)
            }
        }
    }

    pub fn gradient(&self, params: &[f64], method: GradientMethod) -> Result<Vec<f64>, VqeError> {
        let mut grad = Vec::with_capacity(params.len());
        let mut shifted = params.to_vec();
        for k in 0..params.len() {
            let (delta, denom) = match method {
                GradientMethod::ParameterShift => (std::f64::consts::FRAC_PI_2, 2.0),
                GradientMethod::FiniteDifference(h) => (h, 2.0 * h),
            };
            shifted[k] = params[k] + delta;
            let up = self.loss(&shifted)?;
            shifted[k] = params[k] - delta;
            let down = self.loss(&shifted)?;
            shifted[k] = params[k];
            grad.push((up - down) / denom);
        }
        Ok(grad)
    }

    /// Plain gradient descent: θ <- θ - s∇f, stopping on |Δf| below the
    /// tolerance or at the iteration cap (non-convergence is reported in
    /// the trace, not raised).
    pub fn descend(&self, config: &VqeConfig, init: &[f64]) -> Result<VqeTrace, VqeError> {
        assert!(config.step_size > 0.0, "step size must be positive");
        assert!(config.max_iters >= 1, "need at least one iteration");
        let mut params = init.to_vec();
        let mut iterations = Vec::new();
        let mut last_loss = f64::NAN;
        let mut converged = false;
        for _ in 0..config.max_iters {
            let loss = self.loss(&params)?;
            iterations.push((params.clone(), loss));
            if !last_loss.is_nan() && (loss - last_loss).abs() < config.tolerance {
                converged = true;
                break;
            }
            last_loss = loss;
            let grad = self.gradient(&params, config.gradient)?;
            for (p, g) in params.iter_mut().zip(&grad) {
                *p -= config.step_size * g;
            }
        }
        let (final_params, final_loss) = iterations
            .last()
            .map(|(p, l)| (p.clone(), *l))
            .unwrap_or((params, f64::NAN));
        Ok(VqeTrace { iterations, final_params, final_loss, converged })
    }
}

/// Evaluate a loss once through a freshly prepared backend.
pub fn loss(
    ansatz: &Ansatz,
    params: &[f64],
    observable: &PauliSum,
    backend: Backend,
) -> Result<f64, VqeError> {
    VqeProblem::prepare(ansatz.clone(), observable.clone(), backend)?.loss(params)
}

/// Evaluate a gradient once through a freshly prepared backend.
pub fn gradient(
    ansatz: &Ansatz,
    params: &[f64],
    observable: &PauliSum,
    backend: Backend,
    method: GradientMethod,
) -> Result<Vec<f64>, VqeError> {
    VqeProblem::prepare(ansatz.clone(), observable.clone(), backend)?.gradient(params, method)
}

/// Run gradient descent through a freshly prepared backend.
pub fn descend(
    ansatz: &Ansatz,
    observable: &PauliSum,
    config: &VqeConfig,
    init: &[f64],
    backend: Backend,
) -> Result<VqeTrace, VqeError> {
    VqeProblem::prepare(ansatz.clone(), observable.clone(), backend)?.descend(config, init)
}

/// Conjugate an observable through a Clifford circuit classically:
/// A' = U_C† A U_C, term by term via symplectic updates, never matrices.
pub fn absorb_clifford(a: &PauliSum, u_c: &Circuit) -> Result<PauliSum, VqeError> {
    // folding the adjoint's gates forward applies g† ... g on each term
    let adj = u_c.adjoint();
    let mut terms = Vec::with_capacity(a.terms().len());
    for (coeff, p) in a.terms() {
        let mut p = p.clone();
        for g in &adj.gates {
            stabilizer::conjugate_pauli(&mut p, g)?;
        }
        terms.push((*coeff, p));
    }
    Ok(PauliSum::new(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{random_clifford_t, PauliString};
    use crate::densesim;
    use crate::oracle;

    fn z_observable() -> PauliSum {
        PauliSum::new(vec![(1.0, "Z".parse().unwrap())])
    }

    fn single_param_ansatz(gates_before: Vec<Gate>, gates_after: Vec<Gate>) -> Ansatz {
        let mut gates = gates_before;
        gates.push(Gate::rz(Phase::parameter(0), 0));
        gates.extend(gates_after);
        Ansatz::new(Circuit { n_qubits: 1, gates }).unwrap()
    }

    #[test]
    fn loss_examples() {
        // Rz on |0>: Z expectation is 1 for any angle
        let a = single_param_ansatz(vec![], vec![]);
        for theta in [0.0, 0.7, -2.2] {
            assert!((loss(&a, &[theta], &z_observable(), Backend::Dense).unwrap() - 1.0).abs() < 1e-12);
        }
        // H then Rz: the state stays on the equator, <Z> = 0
        let a = single_param_ansatz(vec![Gate::h(0)], vec![]);
        for theta in [0.0, 1.1] {
            assert!(loss(&a, &[theta], &z_observable(), Backend::Dense).unwrap().abs() < 1e-12);
        }
        // H Rz H: <Z> = cos θ
        let a = single_param_ansatz(vec![Gate::h(0)], vec![Gate::h(0)]);
        let got = loss(&a, &[std::f64::consts::PI / 3.0], &z_observable(), Backend::Dense).unwrap();
        assert!((got - 0.5).abs() < 1e-9);
    }

    #[test]
    fn gradient_examples() {
        let a = single_param_ansatz(vec![Gate::h(0)], vec![Gate::h(0)]);
        let theta = std::f64::consts::PI / 3.0;
        let g = gradient(&a, &[theta], &z_observable(), Backend::Dense, GradientMethod::ParameterShift)
            .unwrap();
        assert!((g[0] + theta.sin()).abs() < 1e-9, "got {}", g[0]);

        // constant loss: zero gradient
        let a = single_param_ansatz(vec![], vec![]);
        let g = gradient(&a, &[0.4], &z_observable(), Backend::Dense, GradientMethod::ParameterShift)
            .unwrap();
        assert!(g[0].abs() < 1e-12);
    }

    #[test]
    fn parameter_shift_matches_finite_differences() {
        for seed in 0..8 {
            let c = random_clifford_t(2, 18, 0.25, seed).unwrap();
            let ansatz = Ansatz::from_clifford_t(&c);
            if ansatz.parameter_count() == 0 {
                continue;
            }
            let obs = PauliSum::new(vec![
                (0.5, "ZZ".parse().unwrap()),
                (-0.3, "XI".parse().unwrap()),
                (0.2, "IX".parse().unwrap()),
            ]);
            let problem = VqeProblem::prepare(ansatz.clone(), obs, Backend::Dense).unwrap();
            let params: Vec<f64> =
                (0..ansatz.parameter_count()).map(|k| 0.3 + 0.17 * k as f64).collect();
            let ps = problem.gradient(&params, GradientMethod::ParameterShift).unwrap();
            let fd = problem.gradient(&params, GradientMethod::FiniteDifference(1e-5)).unwrap();
            for (p, f) in ps.iter().zip(&fd) {
                assert!((p - f).abs() < 1e-6, "seed {seed}: {p} vs {f}");
            }
        }
    }

    #[test]
    fn descent_on_cosine() {
        let a = single_param_ansatz(vec![Gate::h(0)], vec![Gate::h(0)]);
        let config = VqeConfig {
            step_size: 0.4,
            max_iters: 200,
            tolerance: 1e-12,
            gradient: GradientMethod::ParameterShift,
        };
        let problem = VqeProblem::prepare(a, z_observable(), Backend::Dense).unwrap();
        let trace = problem.descend(&config, &[1.0]).unwrap();
        assert!(trace.iterations.len() <= 200);
        assert!((trace.final_loss - (-1.0)).abs() < 1e-6, "loss {}", trace.final_loss);
        assert!(trace.final_loss <= trace.iterations[0].1);

        // stationary start: converges immediately
        let a = single_param_ansatz(vec![Gate::h(0)], vec![Gate::h(0)]);
        let problem = VqeProblem::prepare(a, z_observable(), Backend::Dense).unwrap();
        let trace = problem.descend(&config, &[0.0]).unwrap();
        assert!(trace.converged);
        assert_eq!(trace.iterations.len(), 2);
    }

    #[test]
    fn absorb_examples() {
        // H† Z H = X
        let a = PauliSum::new(vec![(1.0, "Z".parse().unwrap())]);
        let h = Circuit::from_gates(1, vec![Gate::h(0)]).unwrap();
        let absorbed = absorb_clifford(&a, &h).unwrap();
        assert_eq!(absorbed.terms()[0].1, "X".parse::<PauliString>().unwrap());

        // CNOT† (X ⊗ I) CNOT = X ⊗ X
        let a = PauliSum::new(vec![(1.0, "XI".parse().unwrap())]);
        let cx = Circuit::from_gates(2, vec![Gate::cx(0, 1)]).unwrap();
        let absorbed = absorb_clifford(&a, &cx).unwrap();
        assert_eq!(absorbed.terms()[0].1, "XX".parse::<PauliString>().unwrap());

        // non-Clifford rejected
        let t = Circuit::from_gates(1, vec![Gate::t(0)]).unwrap();
        assert!(absorb_clifford(&z_observable(), &t).is_err());
    }

    #[test]
    fn absorb_matches_dense_conjugation() {
        for seed in 0..12 {
            let n = 2 + (seed as usize % 3);
            let u = random_clifford_t(n, 20, 0.0, seed + 10).unwrap();
            let letters = ["X", "Z", "Y", "I"];
            let word: String = (0..n).map(|q| letters[(seed as usize + q) % 4]).collect();
            let a = PauliSum::new(vec![
                (0.8, word.parse().unwrap()),
                (-0.4, oracle::random_pauli(n, seed)),
            ]);
            let absorbed = absorb_clifford(&a, &u).unwrap();
            let um = densesim::unitary(&u).unwrap();
            let want = um.adjoint().mul(&oracle::pauli_sum_matrix(&a)).mul(&um);
            let got = oracle::pauli_sum_matrix(&absorbed);
            assert!(got.max_abs_diff(&want) < 1e-10, "seed {seed}");
        }
    }

    #[test]
    fn expectation_invariant_under_absorption() {
        for seed in 0..10 {
            let c = random_clifford_t(3, 20, 0.2, seed + 30).unwrap();
            let split = border::split(&c, SplitSide::Right).unwrap();
            let a = PauliSum::new(vec![
                (0.6, oracle::random_pauli(3, seed)),
                (0.4, oracle::random_pauli(3, seed + 99)),
            ]);
            let full_state = Statevector::zero_state(3).evolved(&split.recomposed()).unwrap();
            let lhs = expectation(&full_state, &a).unwrap();
            let absorbed = absorb_clifford(&a, &split.clifford).unwrap();
            let nc_state = Statevector::zero_state(3).evolved(&split.non_clifford).unwrap();
            let rhs = expectation(&nc_state, &absorbed).unwrap();
            assert!((lhs - rhs).abs() < 1e-10, "seed {seed}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn backends_agree() {
        let obs = PauliSum::new(vec![
            (0.5, "ZZ".parse().unwrap()),
            (-0.3, "XI".parse().unwrap()),
            (0.2, "IX".parse().unwrap()),
        ]);
        for seed in 0..10 {
            let c = random_clifford_t(2, 20, 0.2, seed + 50).unwrap();
            let ansatz = Ansatz::from_clifford_t(&c);
            let params: Vec<f64> =
                (0..ansatz.parameter_count()).map(|k| -0.8 + 0.31 * k as f64).collect();
            let dense = loss(&ansatz, &params, &obs, Backend::Dense).unwrap();
            let split_left = loss(&ansatz, &params, &obs, Backend::SplitLeft).unwrap();
            let absorb = loss(&ansatz, &params, &obs, Backend::AbsorbRight).unwrap();
            assert!((dense - split_left).abs() < 1e-10, "seed {seed}: dense {dense} splitleft {split_left}");
            assert!((dense - absorb).abs() < 1e-10, "seed {seed}: dense {dense} absorb {absorb}");
        }
    }

    #[test]
    fn ansatz_validation() {
        let mut c = Circuit::new(1);
        c.push(Gate::rz(Phase::parameter(0), 0));
        c.push(Gate::rz(Phase::parameter(0), 0));
        assert!(matches!(Ansatz::new(c), Err(VqeError::ParameterReuse(0))));

        let a = single_param_ansatz(vec![], vec![]);
        assert!(matches!(
            a.bind(&[0.1, 0.2]),
            Err(VqeError::ParameterCount { want: 1, got: 2 })
        ));
        assert!(
            Ansatz::from_clifford_t(&random_clifford_t(2, 10, 1.0, 1).unwrap()).parameter_count()
                > 0
        );
    }

    #[test]
    fn zero_parameter_ansatz_descends_trivially() {
        let c = Circuit::from_gates(1, vec![Gate::h(0), Gate::s(0)]).unwrap();
        let ansatz = Ansatz::from_clifford_t(&c);
        assert_eq!(ansatz.parameter_count(), 0);
        let problem = VqeProblem::prepare(ansatz, z_observable(), Backend::SplitLeft).unwrap();
        let trace = problem.descend(&VqeConfig::default(), &[]).unwrap();
        assert!(trace.converged);
        assert!(trace.final_params.is_empty());
        assert!(trace.final_loss.abs() < 1e-12); // <Z> on the equator
    }

    #[test]
    fn ground_energy_reachable_on_expressive_ansatz() {
        // the test Hamiltonian ground energy is -sqrt(1/2), found by
        // block-diagonalizing in the XX eigenbasis
        let obs = PauliSum::new(vec![
            (0.5, "ZZ".parse().unwrap()),
            (-0.3, "XI".parse().unwrap()),
            (0.2, "IX".parse().unwrap()),
        ]);
        let exact = oracle::ground_energy(&obs);
        assert!((exact + (0.5f64).sqrt()).abs() < 1e-10);
    }
}
