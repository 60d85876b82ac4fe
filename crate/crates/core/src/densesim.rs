//! Exact dense statevector simulation with stride-indexed gate kernels,
//! Pauli-sum expectation values, and the composite split-simulation pipeline.
//!
//! Basis convention: qubit 0 is the most significant bit of the amplitude
//! index, so |q0 q1 ... q(n-1)> lives at index q0·2^(n-1) + ... + q(n-1).

use num_complex::Complex64;
use thiserror::Error;

use crate::border::{self, SplitError, SplitSide};
use crate::circuit::{Circuit, Gate, PauliString, PauliSum, Sign};
use crate::matrix::Matrix;
use crate::stabilizer;

/// Qubit cap for the explicit matrix oracle (64×64).
pub const UNITARY_MAX_QUBITS: usize = 6;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("dimension mismatch: state has {state} qubits, operator has {operator}")]
    DimensionMismatch { state: usize, operator: usize },
    #[error("matrix oracle capped at {max} qubits, got {got}")]
    SizeCap { max: usize, got: usize },
    #[error("split failed: {0}")]
    Split(#[from] SplitError),
    #[error("reconstruction failed: {0}")]
    Reconstruction(#[from] stabilizer::TableauError),
}

/// 2^n complex amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    n: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// |0...0> on `n` qubits. Panics on `n == 0`.
    pub fn zero_state(n: usize) -> Statevector {
        assert!(n >= 1, "statevector needs at least one qubit");
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Statevector { n, amps }
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Statevector {
        assert_eq!(amps.len(), 1 << n);
        Statevector { n, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let norm = self.norm();
        assert!(norm > 0.0, "cannot normalize the zero vector");
        for a in &mut self.amps {
            *a /= norm;
        }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Statevector) -> Complex64 {
        assert_eq!(self.n, other.n);
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|<self|other>|`; 1 exactly when the states agree up to global phase.
    pub fn overlap(&self, other: &Statevector) -> f64 {
        self.inner(other).norm()
    }

    /// p_k = |a_k|^2.
    pub fn distribution(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Apply the circuit gate by gate, in place.
    pub fn evolve(&mut self, c: &Circuit) -> Result<(), SimError> {
        if c.n_qubits != self.n {
            return Err(SimError::DimensionMismatch { state: self.n, operator: c.n_qubits });
        }
        for g in &c.gates {
            self.apply_gate(g);
        }
        Ok(())
    }

    /// `self` evolved through `c`, consuming nothing.
    pub fn evolved(&self, c: &Circuit) -> Result<Statevector, SimError> {
        let mut out = self.clone();
        out.evolve(c)?;
        Ok(out)
    }

    fn bit_mask(&self, qubit: usize) -> usize {
        1 << (self.n - 1 - qubit)
    }

    pub fn apply_gate(&mut self, g: &Gate) {
        match g {
            Gate::H { qubits } => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                self.map_pairs(qubits[0], |v0, v1| (s * (v0 + v1), s * (v0 - v1)));
            }
            Gate::X { qubits } => {
                self.map_pairs(qubits[0], |v0, v1| (v1, v0));
            }
            Gate::Y { qubits } => {
                let i = Complex64::i();
                self.map_pairs(qubits[0], move |v0, v1| (-i * v1, i * v0));
            }
            Gate::Z { qubits } => self.phase_on_one(qubits[0], -Complex64::ONE),
            Gate::S { qubits } => self.phase_on_one(qubits[0], Complex64::i()),
            Gate::Sdg { qubits } => self.phase_on_one(qubits[0], -Complex64::i()),
            Gate::T { qubits } => {
                self.phase_on_one(qubits[0], Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4))
            }
            Gate::Tdg { qubits } => {
                self.phase_on_one(qubits[0], Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4))
            }
            Gate::Rz { qubits, phase } => {
                // diag(1, e^{iθ}); equal to S/T-family gates at the
                // corresponding rational angles
                let theta = phase.radians_concrete();
                self.phase_on_one(qubits[0], Complex64::from_polar(1.0, theta));
            }
            Gate::Cx { qubits } => {
                let cm = self.bit_mask(qubits[0]);
                let tm = self.bit_mask(qubits[1]);
                for i in 0..self.amps.len() {
                    if i & cm != 0 && i & tm == 0 {
                        self.amps.swap(i, i | tm);
                    }
                }
            }
            Gate::Cz { qubits } => {
                let am = self.bit_mask(qubits[0]);
                let bm = self.bit_mask(qubits[1]);
                for i in 0..self.amps.len() {
                    if i & am != 0 && i & bm != 0 {
                        self.amps[i] = -self.amps[i];
                    }
                }
            }
        }
    }

    fn map_pairs(&mut self, qubit: usize, f: impl Fn(Complex64, Complex64) -> (Complex64, Complex64)) {
        let mask = self.bit_mask(qubit);
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let j = i | mask;
                let (v0, v1) = f(self.amps[i], self.amps[j]);
                self.amps[i] = v0;
                self.amps[j] = v1;
            }
        }
    }

    fn phase_on_one(&mut self, qubit: usize, factor: Complex64) {
        let mask = self.bit_mask(qubit);
        for i in 0..self.amps.len() {
            if i & mask != 0 {
                self.amps[i] *= factor;
            }
        }
    }
}

/// Measurement distribution as CSV with `index,probability` rows.
pub fn distribution_csv(distribution: &[f64]) -> String {
    let mut out = String::from("index,probability\n");
    for (i, p) in distribution.iter().enumerate() {
        out.push_str(&format!("{i},{p:.15}\n"));
    }
    out
}

/// Apply a signed Pauli word to a state, returning the image.
pub fn apply_pauli(state: &Statevector, p: &PauliString) -> Statevector {
    assert_eq!(state.n_qubits(), p.len(), "Pauli word length mismatch");
    let n = state.n_qubits();
    let mut xmask = 0usize;
    let mut zmask = 0usize;
    let mut y_count = 0u32;
    for k in 0..n {
        let bit = 1 << (n - 1 - k);
        if p.x_bit(k) {
            xmask |= bit;
        }
        if p.z_bit(k) {
            zmask |= bit;
        }
        if p.x_bit(k) && p.z_bit(k) {
            y_count += 1;
        }
    }
    let base = match p.sign() {
        Sign::Plus => Complex64::ONE,
        Sign::PlusI => Complex64::i(),
        Sign::Minus => -Complex64::ONE,
        Sign::MinusI => -Complex64::i(),
    } * Complex64::i().powu(y_count);
    let mut out = vec![Complex64::new(0.0, 0.0); state.amps.len()];
    for (j, amp) in state.amps.iter().enumerate() {
        let parity = (j & zmask).count_ones() & 1;
        let factor = if parity == 1 { -base } else { base };
        out[j ^ xmask] = factor * amp;
    }
    Statevector { n, amps: out }
}

/// `<s|A|s>` for a Hermitian Pauli sum; the imaginary residue must vanish.
pub fn expectation(s: &Statevector, a: &PauliSum) -> Result<f64, SimError> {
    if a.n_qubits() != 0 && a.n_qubits() != s.n_qubits() {
        return Err(SimError::DimensionMismatch { state: s.n_qubits(), operator: a.n_qubits() });
    }
    let mut value = Complex64::new(0.0, 0.0);
    for (coeff, p) in a.terms() {
        let image = apply_pauli(s, p);
        value += coeff * s.inner(&image);
    }
    assert!(value.im.abs() < 1e-10, "expectation of a Hermitian sum must be real");
    Ok(value.re)
}

/// Ground-truth unitary of a circuit, built column by column through the
/// simulator. Capped at 6 qubits.
pub fn unitary(c: &Circuit) -> Result<Matrix, SimError> {
    if c.n_qubits > UNITARY_MAX_QUBITS {
        return Err(SimError::SizeCap { max: UNITARY_MAX_QUBITS, got: c.n_qubits });
    }
    let dim = 1 << c.n_qubits;
    let mut m = Matrix::zeros(dim, dim);
    for col in 0..dim {
        let mut basis = Statevector::zero_state(c.n_qubits);
        basis.amps[0] = Complex64::new(0.0, 0.0);
        basis.amps[col] = Complex64::new(1.0, 0.0);
        basis.evolve(c)?;
        for row in 0..dim {
            m[(row, col)] = basis.amps[row];
        }
    }
    Ok(m)
}

/// Simulate by splitting: tableau-simulate the left Clifford section,
/// reconstruct its statevector from the generators, then evolve it through
/// the non-Clifford remainder. Matches direct simulation up to global phase.
pub fn composite_simulate(c: &Circuit) -> Result<Statevector, SimError> {
    let split = border::split(c, SplitSide::Left)?;
    let tableau = stabilizer::run_tableau(&split.clifford)
        .expect("split produced a non-Clifford gate in the Clifford section");
    let mut state = stabilizer::tableau_statevector(&tableau)?;
    state.evolve(&split.non_clifford)?;
    Ok(state)
}
