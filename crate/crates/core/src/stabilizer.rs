//! Aaronson-Gottesman tableau simulation of Clifford circuits, and
//! reconstruction of the stabilized statevector from a generator set by
//! projecting a seed state onto the joint +1 eigenspace.

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, Gate, PauliString, Sign};
use crate::densesim::{apply_pauli, Statevector};

#[derive(Debug, Error)]
pub enum TableauError {
    #[error("tableau needs at least one qubit")]
    ZeroQubits,
    #[error("non-Clifford gate {0} cannot be applied to a tableau")]
    NonClifford(String),
    #[error("invalid generator set: {0}")]
    BadGenerators(String),
    #[error("every basis seed was annihilated by the projection")]
    AllSeedsAnnihilated,
}

/// Conjugate a Pauli word in place by a Clifford gate: `p <- g p g†`, with
/// exact sign tracking.
pub fn conjugate_pauli(p: &mut PauliString, g: &Gate) -> Result<(), TableauError> {
    match g {
        Gate::H { qubits } => {
            let q = qubits[0];
            let (x, z) = (p.x_bit(q), p.z_bit(q));
            if x && z {
                p.negate(); // Y -> -Y
            }
            p.set_bits(q, z, x);
        }
        Gate::S { qubits } => {
            let q = qubits[0];
            let (x, z) = (p.x_bit(q), p.z_bit(q));
            if x {
                if z {
                    p.negate(); // Y -> -X
                }
                p.set_bits(q, x, !z);
            }
        }
        Gate::Sdg { qubits } => {
            let q = qubits[0];
            let (x, z) = (p.x_bit(q), p.z_bit(q));
            if x {
                if !z {
                    p.negate(); // X -> -Y
                }
                p.set_bits(q, x, !z);
            }
        }
        Gate::X { qubits } => {
            let q = qubits[0];
            if p.z_bit(q) {
                p.negate(); // Z -> -Z, Y -> -Y
            }
        }
        Gate::Y { qubits } => {
            let q = qubits[0];
            if p.x_bit(q) ^ p.z_bit(q) {
                p.negate(); // X -> -X, Z -> -Z
            }
        }
        Gate::Z { qubits } => {
            let q = qubits[0];
            if p.x_bit(q) {
                p.negate(); // X -> -X, Y -> -Y
            }
        }
        Gate::Cx { qubits } => {
            let (c, t) = (qubits[0], qubits[1]);
            let (xc, zc) = (p.x_bit(c), p.z_bit(c));
            let (xt, zt) = (p.x_bit(t), p.z_bit(t));
            if xc && zt && (xt == zc) {
                p.negate();
            }
            p.set_bits(t, xt ^ xc, zt);
            p.set_bits(c, xc, zc ^ zt);
        }
        Gate::Cz { qubits } => {
            let (a, b) = (qubits[0], qubits[1]);
            let (xa, za) = (p.x_bit(a), p.z_bit(a));
            let (xb, zb) = (p.x_bit(b), p.z_bit(b));
            if xa && xb && (za ^ zb) {
                p.negate();
            }
            p.set_bits(a, xa, za ^ xb);
            p.set_bits(b, xb, zb ^ xa);
        }
        Gate::Rz { qubits, phase } => {
            let q = qubits[0];
            let (x, z) = (p.x_bit(q), p.z_bit(q));
            match phase.half_turns_mod4() {
                Some(0) => {}
                Some(1) => {
                    // S
                    if x {
                        if z {
                            p.negate();
                        }
                        p.set_bits(q, x, !z);
                    }
                }
                Some(2) => {
                    // Z
                    if x {
                        p.negate();
                    }
                }
                Some(3) => {
                    // Sdg
                    if x {
                        if !z {
                            p.negate();
                        }
                        p.set_bits(q, x, !z);
                    }
                }
                _ => return Err(TableauError::NonClifford(g.to_string())),
            }
        }
        Gate::T { .. } | Gate::Tdg { .. } => {
            return Err(TableauError::NonClifford(g.to_string()))
        }
    }
    Ok(())
}

/// 2n signed Pauli rows: n destabilizers followed by n stabilizers.
#[derive(Clone, Debug, Serialize)]
pub struct Tableau {
    n: usize,
    rows: Vec<PauliString>,
}

impl Tableau {
    /// Tableau of |0...0>: stabilizers {+Z_k}, destabilizers {+X_k}.
    pub fn new(n: usize) -> Result<Tableau, TableauError> {
        if n == 0 {
            return Err(TableauError::ZeroQubits);
        }
        let mut rows = Vec::with_capacity(2 * n);
        for k in 0..n {
            rows.push(PauliString::single(n, k, crate::circuit::PauliLetter::X));
        }
        for k in 0..n {
            rows.push(PauliString::single(n, k, crate::circuit::PauliLetter::Z));
        }
        Ok(Tableau { n, rows })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    /// Conjugate every row by the gate. Errors on non-Clifford gates.
    /// The symplectic invariants are exercised per step by the test suite;
    /// the hot path stays assertion-free.
    pub fn apply(&mut self, g: &Gate) -> Result<(), TableauError> {
        for row in &mut self.rows {
            conjugate_pauli(row, g)?;
        }
        Ok(())
    }

    pub fn destabilizers(&self) -> &[PauliString] {
        &self.rows[..self.n]
    }

    /// The n stabilizer rows, signs in {+1, -1}.
    pub fn generators(&self) -> Vec<PauliString> {
        self.rows[self.n..].to_vec()
    }

    /// Symplectic basis invariants: stabilizers mutually commute, and
    /// destabilizer i anticommutes with stabilizer i only.
    pub fn check_symplectic(&self) -> bool {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                if !self.rows[n + i].commutes_with(&self.rows[n + j]) {
                    return false;
                }
                if !self.rows[i].commutes_with(&self.rows[j]) {
                    return false;
                }
                let want_anticommute = i == j;
                if self.rows[i].commutes_with(&self.rows[n + j]) == want_anticommute {
                    return false;
                }
            }
        }
        self.rows.iter().all(|r| r.sign().is_real())
    }
}

/// Fold a Clifford circuit into a fresh tableau.
pub fn run_tableau(c: &Circuit) -> Result<Tableau, TableauError> {
    let mut t = Tableau::new(c.n_qubits)?;
    for g in &c.gates {
        t.apply(g)?;
    }
    Ok(t)
}

/// Reconstruct the unique state with `G_k ψ = +ψ` for every generator, by
/// running a computational-basis seed through the projectors `(I + G_k)/2`.
/// Basis states are tried in order until one survives (a seed fails only
/// when it is perpendicular to the stabilizer state).
pub fn stabilizer_statevector(gens: &[PauliString]) -> Result<Statevector, TableauError> {
    let n = gens.len();
    if n == 0 {
        return Err(TableauError::BadGenerators("empty generator set".into()));
    }
    if gens.iter().any(|g| g.len() != n) {
        return Err(TableauError::BadGenerators(format!(
            "need {n} generators over {n} qubits with matching lengths"
        )));
    }
    if gens.iter().any(|g| !g.sign().is_real()) {
        return Err(TableauError::BadGenerators("generator signs must be ±1".into()));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if !gens[i].commutes_with(&gens[j]) {
                return Err(TableauError::BadGenerators(format!(
                    "generators {} and {} anticommute (projection rank ≠ 1)",
                    gens[i], gens[j]
                )));
            }
        }
    }
    if !independent_over_gf2(gens) {
        return Err(TableauError::BadGenerators(
            "generators are dependent (projection rank ≠ 1)".into(),
        ));
    }

    // fast-forward the seed scan: the first basis state the projection does
    // not annihilate is exactly the first one satisfying every diagonal
    // constraint of the stabilizer group, which is cheap to test directly
    let dim = 1usize << n;
    let start = first_support_candidate(gens, n);
    'seed: for k in (start..dim).chain(0..start) {
        let mut amps = vec![num_complex::Complex64::new(0.0, 0.0); dim];
        amps[k] = num_complex::Complex64::new(1.0, 0.0);
        let mut state = Statevector::from_amplitudes(n, amps);
        for g in gens {
            let mut image = apply_pauli(&state, g);
            for (o, a) in image.amplitudes_mut().iter_mut().zip(state.amplitudes()) {
                *o = 0.5 * (*o + a);
            }
            state = image;
            if state.norm() * state.norm() <= 1e-12 {
                continue 'seed;
            }
        }
        state.normalize();
        return Ok(state);
    }
    Err(TableauError::AllSeedsAnnihilated)
}

/// Lowest basis index with nonzero overlap against the stabilizer state:
/// eliminate the generators' x-parts over GF(2) (group products keep signs
/// exact), leaving pure-Z rows whose signs constrain basis-state parities.
fn first_support_candidate(gens: &[PauliString], n: usize) -> usize {
    let mut rows: Vec<PauliString> = gens.to_vec();
    let mut pivoted: Vec<bool> = vec![false; rows.len()];
    for col in 0..n {
        let Some(p) = (0..rows.len()).find(|&r| !pivoted[r] && rows[r].x_bit(col)) else {
            continue;
        };
        pivoted[p] = true;
        for r in 0..rows.len() {
            if r != p && rows[r].x_bit(col) {
                rows[r] = rows[r].mul(&rows[p]);
            }
        }
    }
    let constraints: Vec<&PauliString> = rows
        .iter()
        .zip(&pivoted)
        .filter(|(r, &piv)| !piv && !r.is_identity_word())
        .map(|(r, _)| r)
        .collect();
    'candidate: for b in 0..(1usize << n) {
        for c in &constraints {
            let mut parity = false;
            for q in 0..n {
                parity ^= c.z_bit(q) && (b >> (n - 1 - q)) & 1 == 1;
            }
            let want_minus = c.sign() == Sign::Minus;
            if parity != want_minus {
                continue 'candidate;
            }
        }
        return b;
    }
    0
}

/// Statevector of the tableau's stabilizer state.
pub fn tableau_statevector(t: &Tableau) -> Result<Statevector, TableauError> {
    stabilizer_statevector(&t.generators())
}

/// Rank check of the (x|z) bit rows over GF(2).
fn independent_over_gf2(gens: &[PauliString]) -> bool {
    let n = gens[0].len();
    let mut rows: Vec<Vec<bool>> = gens
        .iter()
        .map(|g| (0..n).map(|k| g.x_bit(k)).chain((0..n).map(|k| g.z_bit(k))).collect())
        .collect();
    let cols = 2 * n;
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col]) else {
            continue;
        };
        rows.swap(rank, pivot);
        for r in 0..rows.len() {
            if r != rank && rows[r][col] {
                let (a, b) = if r < rank {
                    let (lo, hi) = rows.split_at_mut(rank);
                    (&mut lo[r], &hi[0])
                } else {
                    let (lo, hi) = rows.split_at_mut(r);
                    (&mut hi[0], &lo[rank])
                };
                for k in 0..cols {
                    a[k] ^= b[k];
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank == gens.len()
}
