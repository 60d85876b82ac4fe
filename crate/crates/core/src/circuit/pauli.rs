//! Signed Pauli words in symplectic (x-bits, z-bits, sign) form, and
//! real-weighted Pauli sums for observables.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PauliParseError {
    #[error("empty Pauli string")]
    Empty,
    #[error("invalid Pauli character {0:?}")]
    BadChar(char),
}

/// Overall sign of a Pauli word, a power of the imaginary unit.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    PlusI,
    Minus,
    MinusI,
}

impl Sign {
    fn from_quarter_turns(k: u8) -> Sign {
        match k % 4 {
            0 => Sign::Plus,
            1 => Sign::PlusI,
            2 => Sign::Minus,
            _ => Sign::MinusI,
        }
    }

    fn quarter_turns(self) -> u8 {
        match self {
            Sign::Plus => 0,
            Sign::PlusI => 1,
            Sign::Minus => 2,
            Sign::MinusI => 3,
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Sign) -> Sign {
        Sign::from_quarter_turns(self.quarter_turns() + other.quarter_turns())
    }

    pub fn negate(self) -> Sign {
        self.mul(Sign::Minus)
    }

    pub fn is_real(self) -> bool {
        matches!(self, Sign::Plus | Sign::Minus)
    }

    pub fn as_f64(self) -> Option<f64> {
        match self {
            Sign::Plus => Some(1.0),
            Sign::Minus => Some(-1.0),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+"),
            Sign::PlusI => write!(f, "+i"),
            Sign::Minus => write!(f, "-"),
            Sign::MinusI => write!(f, "-i"),
        }
    }
}

/// One tensor factor of a Pauli word.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    fn from_bits(x: bool, z: bool) -> PauliLetter {
        match (x, z) {
            (false, false) => PauliLetter::I,
            (true, false) => PauliLetter::X,
            (false, true) => PauliLetter::Z,
            (true, true) => PauliLetter::Y,
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            PauliLetter::I => (false, false),
            PauliLetter::X => (true, false),
            PauliLetter::Z => (false, true),
            PauliLetter::Y => (true, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }
}

/// A signed n-qubit Pauli word. Letter k is I/X/Z/Y for
/// (x, z) = (0,0)/(1,0)/(0,1)/(1,1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString {
    x: Vec<bool>,
    z: Vec<bool>,
    sign: Sign,
}

impl PauliString {
    pub fn identity(n: usize) -> PauliString {
        PauliString { x: vec![false; n], z: vec![false; n], sign: Sign::Plus }
    }

    pub fn from_letters(letters: &[PauliLetter], sign: Sign) -> PauliString {
        let mut p = PauliString::identity(letters.len());
        p.sign = sign;
        for (k, &l) in letters.iter().enumerate() {
            p.set_letter(k, l);
        }
        p
    }

    /// Single-letter word: `letter` at `qubit`, identity elsewhere.
    pub fn single(n: usize, qubit: usize, letter: PauliLetter) -> PauliString {
        let mut p = PauliString::identity(n);
        p.set_letter(qubit, letter);
        p
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn set_sign(&mut self, sign: Sign) {
        self.sign = sign;
    }

    pub fn negate(&mut self) {
        self.sign = self.sign.negate();
    }

    pub fn x_bit(&self, k: usize) -> bool {
        self.x[k]
    }

    pub fn z_bit(&self, k: usize) -> bool {
        self.z[k]
    }

    pub(crate) fn set_bits(&mut self, k: usize, x: bool, z: bool) {
        self.x[k] = x;
        self.z[k] = z;
    }

    pub fn letter(&self, k: usize) -> PauliLetter {
        PauliLetter::from_bits(self.x[k], self.z[k])
    }

    pub fn set_letter(&mut self, k: usize, letter: PauliLetter) {
        let (x, z) = letter.bits();
        self.x[k] = x;
        self.z[k] = z;
    }

    pub fn is_identity_word(&self) -> bool {
        self.x.iter().all(|&b| !b) && self.z.iter().all(|&b| !b)
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        (0..self.len()).filter(|&k| self.x[k] || self.z[k]).count()
    }

    /// True iff the symplectic inner product Σ (x·z' + z·x') is even.
    /// Panics on length mismatch.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        assert_eq!(self.len(), other.len(), "Pauli string length mismatch");
        let mut acc = false;
        for k in 0..self.len() {
            acc ^= (self.x[k] & other.z[k]) ^ (self.z[k] & other.x[k]);
        }
        !acc
    }

    /// Group product with exact sign tracking. Panics on length mismatch.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(&self, other: &PauliString) -> PauliString {
        assert_eq!(self.len(), other.len(), "Pauli string length mismatch");
        let n = self.len();
        let mut out = PauliString::identity(n);
        // i-exponent accumulated from single-letter products
        let mut turns: u8 = 0;
        for k in 0..n {
            let (x1, z1) = (self.x[k], self.z[k]);
            let (x2, z2) = (other.x[k], other.z[k]);
            out.x[k] = x1 ^ x2;
            out.z[k] = z1 ^ z2;
            turns = (turns + letter_product_turns(x1, z1, x2, z2)) % 4;
        }
        out.sign = self.sign.mul(other.sign).mul(Sign::from_quarter_turns(turns));
        out
    }
}

/// Power of i produced by multiplying two single-qubit Paulis given as
/// (x, z) bit pairs, e.g. X·Z = -iY gives 3.
fn letter_product_turns(x1: bool, z1: bool, x2: bool, z2: bool) -> u8 {
    use PauliLetter::*;
    let a = PauliLetter::from_bits(x1, z1);
    let b = PauliLetter::from_bits(x2, z2);
    match (a, b) {
        (I, _) | (_, I) => 0,
        (X, X) | (Y, Y) | (Z, Z) => 0,
        (X, Y) | (Y, Z) | (Z, X) => 1, // XY = iZ, YZ = iX, ZX = iY
        (Y, X) | (Z, Y) | (X, Z) => 3, // reversed order picks up -i
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.sign)?;
        for k in 0..self.len() {
            write!(f, "{}", self.letter(k).as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = PauliParseError;

    /// Parse literals like `"+ZZY"`, `"-iXY"`, or `"XX"` (implicit `+`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut rest = s;
        let mut sign = Sign::Plus;
        if let Some(r) = rest.strip_prefix("+i").or_else(|| rest.strip_prefix("+I")) {
            // "+I..." is ambiguous with an identity letter; treat "+i" as a
            // sign only when lowercase
            if rest.starts_with("+i") {
                sign = Sign::PlusI;
                rest = r;
            } else {
                rest = rest.strip_prefix('+').unwrap();
            }
        } else if let Some(r) = rest.strip_prefix("-i") {
            sign = Sign::MinusI;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        } else if let Some(r) = rest.strip_prefix('-') {
            sign = Sign::Minus;
            rest = r;
        }
        if rest.is_empty() {
            return Err(PauliParseError::Empty);
        }
        let mut letters = Vec::with_capacity(rest.len());
        for ch in rest.chars() {
            letters.push(match ch.to_ascii_uppercase() {
                'I' => PauliLetter::I,
                'X' => PauliLetter::X,
                'Y' => PauliLetter::Y,
                'Z' => PauliLetter::Z,
                other => return Err(PauliParseError::BadChar(other)),
            });
        }
        Ok(PauliString::from_letters(&letters, sign))
    }
}

/// A Hermitian observable as a real-weighted sum of +1-signed Pauli words.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliSum {
    terms: Vec<(f64, PauliString)>,
}

impl PauliSum {
    pub fn new(terms: Vec<(f64, PauliString)>) -> PauliSum {
        PauliSum { terms }.canonicalized()
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn n_qubits(&self) -> usize {
        self.terms.first().map_or(0, |(_, p)| p.len())
    }

    /// Fold signs into coefficients, merge duplicate words, drop zeros.
    pub fn canonicalized(&self) -> PauliSum {
        let mut merged: Vec<(f64, PauliString)> = Vec::new();
        for (coeff, p) in &self.terms {
            let mut coeff = *coeff;
            let mut p = p.clone();
            match p.sign() {
                Sign::Plus => {}
                Sign::Minus => {
                    coeff = -coeff;
                    p.set_sign(Sign::Plus);
                }
                _ => panic!("imaginary-signed term in a Hermitian Pauli sum"),
            }
            match merged.iter_mut().find(|(_, q)| *q == p) {
                Some((c, _)) => *c += coeff,
                None => merged.push((coeff, p)),
            }
        }
        merged.retain(|(c, _)| c.abs() > 1e-14);
        PauliSum { terms: merged }
    }
}
