//! Exact rotation angles as rational multiples of π, with optional symbolic
//! parameter terms for variational circuits.
//!
//! Keeping angles rational makes the Clifford test (`denominator ∈ {1, 2}`)
//! exact rather than tolerance-based. Angles that originate from float
//! literals are stored as their best rational approximation.

use std::fmt;

use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Maximum denominator when approximating a parsed float literal.
pub const PARSE_MAX_DEN: i64 = 1 << 20;
/// Maximum denominator when binding a variational parameter value. Tight
/// enough that downstream finite-difference quotients stay well below 1e-6.
pub const BIND_MAX_DEN: i64 = 1 << 44;

/// An angle `(num/den)·π + Σ coeff·θ_id`, with the rational part stored in
/// lowest terms and `num` normalized into `(-2·den, 2·den]`.
///
/// The parameter terms are kept sorted by id with nonzero coefficients; a
/// phase is *concrete* when it has no parameter terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Phase {
    num: i64,
    den: i64,
    params: Vec<(u32, i32)>,
}

impl Phase {
    pub fn zero() -> Self {
        Phase { num: 0, den: 1, params: Vec::new() }
    }

    /// `(num/den)·π`, normalized. Panics on `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "phase denominator must be nonzero");
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let (num, den) = reduce128(num as i128, den as i128);
        Phase { num, den, params: Vec::new() }
    }

    pub fn pi() -> Self {
        Phase::new(1, 1)
    }

    /// A pure symbolic parameter term `+θ_id`.
    pub fn parameter(id: u32) -> Self {
        Phase { num: 0, den: 1, params: vec![(id, 1)] }
    }

    pub fn numer(&self) -> i64 {
        self.num
    }

    pub fn denom(&self) -> i64 {
        self.den
    }

    pub fn param_terms(&self) -> &[(u32, i32)] {
        &self.params
    }

    pub fn is_concrete(&self) -> bool {
        self.params.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0 && self.params.is_empty()
    }

    /// True for angles that are integer multiples of π/2 with no free
    /// parameters: exactly the phases whose Z-rotation is a Clifford gate.
    pub fn is_clifford(&self) -> bool {
        self.params.is_empty() && (self.den == 1 || self.den == 2)
    }

    /// True for integer multiples of π (the Pauli-Z family).
    pub fn is_pauli(&self) -> bool {
        self.params.is_empty() && self.den == 1
    }

    pub fn add(&self, other: &Phase) -> Phase {
        let n = self.num as i128 * other.den as i128 + other.num as i128 * self.den as i128;
        let d = self.den as i128 * other.den as i128;
        let mut params = self.params.clone();
        for &(id, c) in &other.params {
            match params.binary_search_by_key(&id, |&(i, _)| i) {
                Ok(pos) => {
                    params[pos].1 += c;
                    if params[pos].1 == 0 {
                        params.remove(pos);
                    }
                }
                Err(pos) => params.insert(pos, (id, c)),
            }
        }
        let (num, den) = reduce128(n, d);
        Phase { num, den, params }
    }

    pub fn neg(&self) -> Phase {
        let p = Phase::new(-self.num, self.den);
        Phase { num: p.num, den: p.den, params: self.params.iter().map(|&(i, c)| (i, -c)).collect() }
    }

    /// The represented angle in radians. Parameterized phases require a
    /// binding slice; panics if a referenced parameter is out of range.
    pub fn radians(&self, params: &[f64]) -> f64 {
        let mut v = std::f64::consts::PI * self.num as f64 / self.den as f64;
        for &(id, c) in &self.params {
            v += c as f64 * params[id as usize];
        }
        v
    }

    /// Radians of a concrete phase. Panics when parameter terms are present.
    pub fn radians_concrete(&self) -> f64 {
        assert!(self.is_concrete(), "phase has unbound parameters");
        std::f64::consts::PI * self.num as f64 / self.den as f64
    }

    /// Substitute parameter values, producing a concrete phase. Parameter
    /// contributions are re-rationalized with denominator ≤ 2^44 so the
    /// binding error is far below every tolerance used downstream.
    pub fn bind(&self, params: &[f64]) -> Phase {
        if self.params.is_empty() {
            return self.clone();
        }
        let mut extra = 0.0;
        for &(id, c) in &self.params {
            extra += c as f64 * params[id as usize];
        }
        let approx = Phase::from_radians(extra, BIND_MAX_DEN);
        Phase::new(self.num, self.den).add(&approx)
    }

    /// Best rational approximation `p/q ≈ theta/π` with `q ≤ max_den`, via
    /// continued fractions.
    pub fn from_radians(theta: f64, max_den: i64) -> Phase {
        let (num, den) = rational_approx(theta / std::f64::consts::PI, max_den);
        Phase::new(num, den)
    }

    /// The nearest rational multiple of π within `tol` radians, if one with a
    /// small denominator exists; used by the parser to recover exact angles
    /// from float literals.
    pub fn try_exact_radians(theta: f64, tol: f64) -> Option<Phase> {
        let x = theta / std::f64::consts::PI;
        for max_den in [1i64, 2, 4, 8, 16, 64, 1024, 65536] {
            let (num, den) = rational_approx(x, max_den);
            let approx = std::f64::consts::PI * num as f64 / den as f64;
            if (approx - theta).abs() <= tol {
                return Some(Phase::new(num, den));
            }
        }
        None
    }

    /// Multiple of π/2 in `{0, 1, 2, 3}` for Clifford phases.
    pub fn half_turns_mod4(&self) -> Option<u8> {
        if !self.is_clifford() {
            return None;
        }
        let quarters = if self.den == 1 { self.num * 2 } else { self.num };
        Some(quarters.rem_euclid(4) as u8)
    }
}

/// Reduce `n/d` to lowest terms, normalize `num` into `(-2·den, 2·den]`, and
/// fall back to a float re-approximation on (absurdly rare) i64 overflow.
fn reduce128(n: i128, d: i128) -> (i64, i64) {
    assert!(d != 0);
    let (mut n, mut d) = if d < 0 { (-n, -d) } else { (n, d) };
    let g = gcd128(n.unsigned_abs(), d as u128);
    if g > 1 {
        n /= g as i128;
        d /= g as i128;
    }
    // normalize into (-2d, 2d]
    let m = 4 * d;
    n = n.rem_euclid(m);
    if n > 2 * d {
        n -= m;
    }
    if n.abs() <= i64::MAX as i128 && d <= i64::MAX as i128 {
        (n as i64, d as i64)
    } else {
        // convergents are already coprime; re-normalize into (-2·den, 2·den]
        let (num, den) = rational_approx(n as f64 / d as f64, BIND_MAX_DEN);
        let m = 4 * den;
        let mut num = num.rem_euclid(m);
        if num > 2 * den {
            num -= m;
        }
        (num, den)
    }
}

fn gcd128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

/// Best continued-fraction convergent of `x` with denominator ≤ `max_den`.
fn rational_approx(x: f64, max_den: i64) -> (i64, i64) {
    assert!(x.is_finite());
    let (mut p0, mut q0): (i128, i128) = (1, 0);
    let (mut p1, mut q1): (i128, i128) = (x.floor() as i128, 1);
    let mut frac = x - x.floor();
    for _ in 0..64 {
        if frac.abs() < 1e-18 {
            break;
        }
        let r = 1.0 / frac;
        let a = r.floor();
        if a >= i64::MAX as f64 {
            break;
        }
        frac = r - a;
        let p2 = a as i128 * p1 + p0;
        let q2 = a as i128 * q1 + q0;
        if q2 > max_den as i128 || p2.abs() > i64::MAX as i128 {
            break;
        }
        (p0, q0) = (p1, q1);
        (p1, q1) = (p2, q2);
    }
    (p1 as i64, q1 as i64)
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        if self.num != 0 || self.params.is_empty() {
            if self.den == 1 {
                write!(f, "{}π", self.num)?;
            } else {
                write!(f, "{}π/{}", self.num, self.den)?;
            }
            wrote = true;
        }
        for &(id, c) in &self.params {
            if wrote {
                write!(f, "{}", if c >= 0 { "+" } else { "-" })?;
            } else if c < 0 {
                write!(f, "-")?;
            }
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            write!(f, "θ{}", id)?;
            wrote = true;
        }
        Ok(())
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[derive(Serialize, Deserialize)]
struct PhaseRepr {
    num: i64,
    den: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    param: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    params: Option<Vec<(u32, i32)>>,
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let repr = match self.params.as_slice() {
            [] => PhaseRepr { num: self.num, den: self.den, param: None, params: None },
            [(id, 1)] => PhaseRepr { num: self.num, den: self.den, param: Some(*id), params: None },
            more => PhaseRepr {
                num: self.num,
                den: self.den,
                param: None,
                params: Some(more.to_vec()),
            },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Phase {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = PhaseRepr::deserialize(d)?;
        if repr.den == 0 {
            return Err(D::Error::custom("phase denominator must be nonzero"));
        }
        let mut p = Phase::new(repr.num, repr.den);
        if let Some(id) = repr.param {
            p = p.add(&Phase::parameter(id));
        }
        if let Some(terms) = repr.params {
            for (id, c) in terms {
                let mut t = Phase::parameter(id);
                t.params[0].1 = c;
                p = p.add(&t);
            }
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn normalization_lowest_terms_and_range() {
        let p = Phase::new(6, 8);
        assert_eq!((p.numer(), p.denom()), (3, 4));
        let p = Phase::new(9, 4); // 9π/4 leaves (-2π, 2π]; lands on -7π/4
        assert_eq!((p.numer(), p.denom()), (-7, 4));
        let p = Phase::new(-5, 2); // -5π/2 ≡ 3π/2
        assert_eq!((p.numer(), p.denom()), (3, 2));
        let p = Phase::new(2, 1); // 2π stays 2π: range is (-2π, 2π]
        assert_eq!((p.numer(), p.denom()), (2, 1));
        let p = Phase::new(-2, 1); // -2π ≡ 2π
        assert_eq!((p.numer(), p.denom()), (2, 1));
    }

    #[test]
    fn normalization_is_idempotent_and_angle_preserving() {
        for num in -17..17 {
            for den in 1..9 {
                let p = Phase::new(num, den);
                let q = Phase::new(p.numer(), p.denom());
                assert_eq!(p, q);
                let a = (PI * num as f64 / den as f64).rem_euclid(2.0 * PI);
                let b = p.radians_concrete().rem_euclid(2.0 * PI);
                assert!((a - b).abs() < 1e-9 || (a - b).abs() - 2.0 * PI < 1e-9);
            }
        }
    }

    #[test]
    fn clifford_test_is_exact() {
        assert!(Phase::new(1, 2).is_clifford());
        assert!(Phase::new(1, 1).is_clifford());
        assert!(Phase::zero().is_clifford());
        assert!(!Phase::new(1, 4).is_clifford());
        assert!(!Phase::new(3, 4).is_clifford());
        assert!(!Phase::parameter(0).is_clifford());
        // two T-gates fuse into an S-gate
        assert!(Phase::new(1, 4).add(&Phase::new(1, 4)).is_clifford());
    }

    #[test]
    fn parameter_arithmetic() {
        let p = Phase::parameter(3).add(&Phase::new(1, 4));
        assert!(!p.is_concrete());
        let q = p.add(&p.neg());
        assert!(q.is_zero());
        // binding evaluates rational + parameter parts
        let mut params = vec![0.0; 4];
        params[3] = 0.3;
        let bound = p.bind(&params);
        assert!(bound.is_concrete());
        assert!((bound.radians_concrete() - (PI / 4.0 + 0.3)).abs() < 1e-12);
    }

    #[test]
    #[allow(clippy::approx_constant)] // the raw literal is what a qasm file carries
    fn float_literal_recovery() {
        let p = Phase::try_exact_radians(0.7853981633974483, 1e-12).unwrap();
        assert_eq!((p.numer(), p.denom()), (1, 4));
        let p = Phase::try_exact_radians(-PI / 2.0, 1e-12).unwrap();
        assert_eq!((p.numer(), p.denom()), (-1, 2));
        // 0.7 is not a nice multiple of π; approximation must stay close
        assert!(Phase::try_exact_radians(0.7, 1e-12).is_none());
        let p = Phase::from_radians(0.7, PARSE_MAX_DEN);
        assert!((p.radians_concrete() - 0.7).abs() < 1e-5);
        assert!(p.denom() <= PARSE_MAX_DEN);
    }

    #[test]
    fn half_turns() {
        assert_eq!(Phase::zero().half_turns_mod4(), Some(0));
        assert_eq!(Phase::new(1, 2).half_turns_mod4(), Some(1));
        assert_eq!(Phase::new(1, 1).half_turns_mod4(), Some(2));
        assert_eq!(Phase::new(-1, 2).half_turns_mod4(), Some(3));
        assert_eq!(Phase::new(2, 1).half_turns_mod4(), Some(0));
        assert_eq!(Phase::new(1, 4).half_turns_mod4(), None);
    }

    #[test]
    fn json_round_trip() {
        for p in [Phase::new(3, 4), Phase::parameter(7), Phase::new(1, 2).add(&Phase::parameter(0))] {
            let js = serde_json::to_string(&p).unwrap();
            let back: Phase = serde_json::from_str(&js).unwrap();
            assert_eq!(p, back);
        }
        assert_eq!(serde_json::to_string(&Phase::new(1, 4)).unwrap(), r#"{"num":1,"den":4}"#);
    }
}
