//! Gate-level circuit IR: gates over the Clifford+T set, greedy-layer depth
//! accounting, adjoints, random Clifford+T generation, and Pauli algebra.

mod pauli;
mod phase;
mod qasm;

use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use pauli::{PauliLetter, PauliString, PauliSum, Sign};
pub use phase::{Phase, BIND_MAX_DEN, PARSE_MAX_DEN};
pub use qasm::parse_qasm;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CircuitError {
    #[error("circuit must have at least one qubit")]
    ZeroQubits,
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("two-qubit gate requires distinct qubits (got {0} twice)")]
    DuplicateQubit(usize),
    #[error("qasm parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A single gate from the Clifford+T set, plus arbitrary-angle `Rz`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Gate {
    H { qubits: [usize; 1] },
    X { qubits: [usize; 1] },
    Y { qubits: [usize; 1] },
    Z { qubits: [usize; 1] },
    S { qubits: [usize; 1] },
    Sdg { qubits: [usize; 1] },
    T { qubits: [usize; 1] },
    Tdg { qubits: [usize; 1] },
    Rz { qubits: [usize; 1], phase: Phase },
    Cx { qubits: [usize; 2] },
    Cz { qubits: [usize; 2] },
}

impl Gate {
    pub fn h(q: usize) -> Self {
        Gate::H { qubits: [q] }
    }
    pub fn x(q: usize) -> Self {
        Gate::X { qubits: [q] }
    }
    pub fn y(q: usize) -> Self {
        Gate::Y { qubits: [q] }
    }
    pub fn z(q: usize) -> Self {
        Gate::Z { qubits: [q] }
    }
    pub fn s(q: usize) -> Self {
        Gate::S { qubits: [q] }
    }
    pub fn sdg(q: usize) -> Self {
        Gate::Sdg { qubits: [q] }
    }
    pub fn t(q: usize) -> Self {
        Gate::T { qubits: [q] }
    }
    pub fn tdg(q: usize) -> Self {
        Gate::Tdg { qubits: [q] }
    }
    pub fn rz(phase: Phase, q: usize) -> Self {
        Gate::Rz { qubits: [q], phase }
    }
    pub fn cx(control: usize, target: usize) -> Self {
        Gate::Cx { qubits: [control, target] }
    }
    pub fn cz(a: usize, b: usize) -> Self {
        Gate::Cz { qubits: [a, b] }
    }

    pub fn qubits(&self) -> &[usize] {
        match self {
            Gate::H { qubits }
            | Gate::X { qubits }
            | Gate::Y { qubits }
            | Gate::Z { qubits }
            | Gate::S { qubits }
            | Gate::Sdg { qubits }
            | Gate::T { qubits }
            | Gate::Tdg { qubits }
            | Gate::Rz { qubits, .. } => qubits,
            Gate::Cx { qubits } | Gate::Cz { qubits } => qubits,
        }
    }

    /// The Z-rotation angle this gate contributes, if it is a phase gate.
    pub fn z_phase(&self) -> Option<Phase> {
        match self {
            Gate::Z { .. } => Some(Phase::new(1, 1)),
            Gate::S { .. } => Some(Phase::new(1, 2)),
            Gate::Sdg { .. } => Some(Phase::new(-1, 2)),
            Gate::T { .. } => Some(Phase::new(1, 4)),
            Gate::Tdg { .. } => Some(Phase::new(-1, 4)),
            Gate::Rz { phase, .. } => Some(phase.clone()),
            _ => None,
        }
    }

    /// True exactly for gates that normalize the Pauli group.
    pub fn is_clifford(&self) -> bool {
        match self {
            Gate::T { .. } | Gate::Tdg { .. } => false,
            Gate::Rz { phase, .. } => phase.is_clifford(),
            _ => true,
        }
    }

    pub fn dagger(&self) -> Gate {
        match self {
            Gate::S { qubits } => Gate::Sdg { qubits: *qubits },
            Gate::Sdg { qubits } => Gate::S { qubits: *qubits },
            Gate::T { qubits } => Gate::Tdg { qubits: *qubits },
            Gate::Tdg { qubits } => Gate::T { qubits: *qubits },
            Gate::Rz { qubits, phase } => Gate::Rz { qubits: *qubits, phase: phase.neg() },
            other => other.clone(),
        }
    }

    fn validate(&self, n_qubits: usize) -> Result<(), CircuitError> {
        let qs = self.qubits();
        for &q in qs {
            if q >= n_qubits {
                return Err(CircuitError::QubitOutOfRange { index: q, n_qubits });
            }
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(CircuitError::DuplicateQubit(qs[0]));
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::H { qubits } => write!(f, "h q[{}]", qubits[0]),
            Gate::X { qubits } => write!(f, "x q[{}]", qubits[0]),
            Gate::Y { qubits } => write!(f, "y q[{}]", qubits[0]),
            Gate::Z { qubits } => write!(f, "z q[{}]", qubits[0]),
            Gate::S { qubits } => write!(f, "s q[{}]", qubits[0]),
            Gate::Sdg { qubits } => write!(f, "sdg q[{}]", qubits[0]),
            Gate::T { qubits } => write!(f, "t q[{}]", qubits[0]),
            Gate::Tdg { qubits } => write!(f, "tdg q[{}]", qubits[0]),
            Gate::Rz { qubits, phase } => write!(f, "rz({}) q[{}]", phase, qubits[0]),
            Gate::Cx { qubits } => write!(f, "cx q[{}],q[{}]", qubits[0], qubits[1]),
            Gate::Cz { qubits } => write!(f, "cz q[{}],q[{}]", qubits[0], qubits[1]),
        }
    }
}

/// An ordered gate list over a fixed qubit register.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub n_qubits: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        assert!(n_qubits >= 1, "circuit needs at least one qubit");
        Circuit { n_qubits, gates: Vec::new() }
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<Gate>) -> Result<Self, CircuitError> {
        if n_qubits == 0 {
            return Err(CircuitError::ZeroQubits);
        }
        for g in &gates {
            g.validate(n_qubits)?;
        }
        Ok(Circuit { n_qubits, gates })
    }

    /// Append a gate; panics on qubit indices outside the register.
    pub fn push(&mut self, gate: Gate) {
        gate.validate(self.n_qubits).expect("invalid gate for circuit");
        self.gates.push(gate);
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn is_clifford(&self) -> bool {
        self.gates.iter().all(Gate::is_clifford)
    }

    pub fn non_clifford_count(&self) -> usize {
        self.gates.iter().filter(|g| !g.is_clifford()).count()
    }

    /// Moment count under greedy layering: each gate is placed in the
    /// earliest layer where all of its qubits are free.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.n_qubits];
        let mut depth = 0;
        for g in &self.gates {
            let layer = g.qubits().iter().map(|&q| level[q]).max().unwrap() + 1;
            for &q in g.qubits() {
                level[q] = layer;
            }
            depth = depth.max(layer);
        }
        depth
    }

    /// Gates reversed with each gate replaced by its dagger.
    pub fn adjoint(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(Gate::dagger).collect(),
        }
    }

    /// `self` followed by `other` on the same register.
    pub fn then(&self, other: &Circuit) -> Circuit {
        assert_eq!(self.n_qubits, other.n_qubits, "register size mismatch");
        let mut gates = self.gates.clone();
        gates.extend(other.gates.iter().cloned());
        Circuit { n_qubits: self.n_qubits, gates }
    }

    /// Remove adjacent self-inverse pairs (`H H`, `X X`, ... on the same
    /// qubit(s) with nothing in between on those qubits). Keeps extracted
    /// circuits free of the identity padding the extractor introduces.
    pub fn cancel_adjacent_inverses(&self) -> Circuit {
        let mut kept: Vec<Option<Gate>> = Vec::with_capacity(self.gates.len());
        // stack of live gate indices per qubit; cancelling pops, exposing the
        // previous gate so chains like H H H H collapse fully
        let mut stacks: Vec<Vec<usize>> = vec![Vec::new(); self.n_qubits];
        for g in &self.gates {
            let qs = g.qubits();
            let tops: Vec<Option<usize>> = qs.iter().map(|&q| stacks[q].last().copied()).collect();
            let cancels = match tops.as_slice() {
                [Some(i)] => kept[*i].as_ref() == Some(&g.dagger()),
                [Some(i), Some(j)] => i == j && kept[*i].as_ref() == Some(&g.dagger()),
                _ => false,
            };
            if cancels {
                let i = tops[0].unwrap();
                for &q in qs {
                    stacks[q].pop();
                }
                kept[i] = None;
                continue;
            }
            kept.push(Some(g.clone()));
            for &q in qs {
                stacks[q].push(kept.len() - 1);
            }
        }
        Circuit { n_qubits: self.n_qubits, gates: kept.into_iter().flatten().collect() }
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qreg q[{}];", self.n_qubits)?;
        for g in &self.gates {
            writeln!(f, "{};", g)?;
        }
        Ok(())
    }
}

/// Deterministically generate a random Clifford+T circuit: each placement is
/// a T gate with probability `t_prob`, otherwise uniform over
/// `{H, S, X, Z, CNOT, CZ}` (one-qubit gates only when `n == 1`), on uniform
/// qubit choices, appending until the greedy depth reaches `target_depth`.
pub fn random_clifford_t(
    n: usize,
    target_depth: usize,
    t_prob: f64,
    seed: u64,
) -> Result<Circuit, CircuitError> {
    if n == 0 {
        return Err(CircuitError::ZeroQubits);
    }
    assert!((0.0..=1.0).contains(&t_prob), "t_prob must lie in [0, 1]");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new(n);
    let mut level = vec![0usize; n];
    let mut depth = 0;
    while depth < target_depth {
        let g = if rng.gen_bool(t_prob) {
            Gate::t(rng.gen_range(0..n))
        } else {
            let kind = if n == 1 { rng.gen_range(0..4) } else { rng.gen_range(0..6) };
            match kind {
                0 => Gate::h(rng.gen_range(0..n)),
                1 => Gate::s(rng.gen_range(0..n)),
                2 => Gate::x(rng.gen_range(0..n)),
                3 => Gate::z(rng.gen_range(0..n)),
                _ => {
                    let a = rng.gen_range(0..n);
                    let mut b = rng.gen_range(0..n - 1);
                    if b >= a {
                        b += 1;
                    }
                    if kind == 4 {
                        Gate::cx(a, b)
                    } else {
                        Gate::cz(a, b)
                    }
                }
            }
        };
        let layer = g.qubits().iter().map(|&q| level[q]).max().unwrap() + 1;
        for &q in g.qubits() {
            level[q] = layer;
        }
        depth = depth.max(layer);
        c.gates.push(g);
    }
    Ok(c)
}
