//! Brute-force matrix semantics of a ZX-diagram by tensor contraction of the
//! per-spider linear maps. Exponential in the wire count; capped, and meant
//! purely as the equivalence oracle for rewrites and extraction.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::matrix::Matrix;

use super::{EdgeKind, VertexKind, ZXDiagram, ZxError};

pub const SEMANTICS_MAX_WIRES: usize = 12;
const MAX_TENSOR_RANK: usize = 24;

type LegId = usize;

/// Dense tensor over 2-dimensional legs; `legs[0]` is the most significant
/// index bit.
#[derive(Clone, Debug)]
struct Tensor {
    legs: Vec<LegId>,
    data: Vec<Complex64>,
}

impl Tensor {
    fn scalar(z: Complex64) -> Tensor {
        Tensor { legs: Vec::new(), data: vec![z] }
    }

    fn rank(&self) -> usize {
        self.legs.len()
    }

    /// Sum over the two positions of a repeated leg, removing both.
    fn self_trace(&self, leg: LegId) -> Tensor {
        let positions: Vec<usize> =
            self.legs.iter().enumerate().filter(|(_, &l)| l == leg).map(|(i, _)| i).collect();
        assert_eq!(positions.len(), 2, "self_trace needs a doubled leg");
        let keep: Vec<usize> =
            (0..self.rank()).filter(|i| !positions.contains(i)).collect();
        let new_legs: Vec<LegId> = keep.iter().map(|&i| self.legs[i]).collect();
        let mut data = vec![Complex64::new(0.0, 0.0); 1 << new_legs.len()];
        for (idx, slot) in data.iter_mut().enumerate() {
            for b in 0..2usize {
                let mut src = 0usize;
                for (out_pos, &in_pos) in keep.iter().enumerate() {
                    let bit = (idx >> (new_legs.len() - 1 - out_pos)) & 1;
                    src |= bit << (self.rank() - 1 - in_pos);
                }
                for &p in &positions {
                    src |= b << (self.rank() - 1 - p);
                }
                *slot += self.data[src];
            }
        }
        Tensor { legs: new_legs, data }
    }

    fn has_repeated_leg(&self) -> Option<LegId> {
        for (i, &l) in self.legs.iter().enumerate() {
            if self.legs[i + 1..].contains(&l) {
                return Some(l);
            }
        }
        None
    }
}

/// Contract two tensors over all their shared legs.
fn contract(a: &Tensor, b: &Tensor) -> Result<Tensor, ZxError> {
    let shared: Vec<LegId> = a.legs.iter().copied().filter(|l| b.legs.contains(l)).collect();
    let a_keep: Vec<usize> =
        (0..a.rank()).filter(|&i| !shared.contains(&a.legs[i])).collect();
    let b_keep: Vec<usize> =
        (0..b.rank()).filter(|&i| !shared.contains(&b.legs[i])).collect();
    let out_rank = a_keep.len() + b_keep.len();
    if out_rank > MAX_TENSOR_RANK {
        return Err(ZxError::ContractionTooLarge);
    }
    let mut legs = Vec::with_capacity(out_rank);
    legs.extend(a_keep.iter().map(|&i| a.legs[i]));
    legs.extend(b_keep.iter().map(|&i| b.legs[i]));

    let a_shared_pos: Vec<usize> = shared
        .iter()
        .map(|l| a.legs.iter().position(|x| x == l).unwrap())
        .collect();
    let b_shared_pos: Vec<usize> = shared
        .iter()
        .map(|l| b.legs.iter().position(|x| x == l).unwrap())
        .collect();

    let mut data = vec![Complex64::new(0.0, 0.0); 1 << out_rank];
    for (idx, slot) in data.iter_mut().enumerate() {
        // split the output assignment back into a-part and b-part
        let mut a_base = 0usize;
        for (out_pos, &in_pos) in a_keep.iter().enumerate() {
            let bit = (idx >> (out_rank - 1 - out_pos)) & 1;
            a_base |= bit << (a.rank() - 1 - in_pos);
        }
        let mut b_base = 0usize;
        for (out_pos, &in_pos) in b_keep.iter().enumerate() {
            let bit = (idx >> (out_rank - 1 - (a_keep.len() + out_pos))) & 1;
            b_base |= bit << (b.rank() - 1 - in_pos);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for s in 0..(1usize << shared.len()) {
            let mut a_idx = a_base;
            let mut b_idx = b_base;
            for (k, (&ap, &bp)) in a_shared_pos.iter().zip(&b_shared_pos).enumerate() {
                let bit = (s >> k) & 1;
                a_idx |= bit << (a.rank() - 1 - ap);
                b_idx |= bit << (b.rank() - 1 - bp);
            }
            acc += a.data[a_idx] * b.data[b_idx];
        }
        *slot = acc;
    }
    Ok(Tensor { legs, data })
}

fn z_spider_tensor(legs: Vec<LegId>, phase: Complex64) -> Tensor {
    let rank = legs.len();
    let mut data = vec![Complex64::new(0.0, 0.0); 1 << rank];
    data[0] = Complex64::new(1.0, 0.0);
    let last = (1 << rank) - 1;
    data[last] += phase; // rank 0: scalar 1 + e^{iα}
    Tensor { legs, data }
}

fn x_spider_tensor(legs: Vec<LegId>, phase: Complex64) -> Tensor {
    let rank = legs.len();
    let norm = (1.0 / 2.0f64.sqrt()).powi(rank as i32);
    let mut data = vec![Complex64::new(0.0, 0.0); 1 << rank];
    for (idx, slot) in data.iter_mut().enumerate() {
        let parity = (idx.count_ones() & 1) == 1;
        let signed = if parity { -phase } else { phase };
        *slot = norm * (Complex64::new(1.0, 0.0) + signed);
    }
    Tensor { legs, data }
}

fn hadamard_tensor(a: LegId, b: LegId) -> Tensor {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Tensor {
        legs: vec![a, b],
        data: vec![
            Complex64::new(s, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(-s, 0.0),
        ],
    }
}

fn delta_tensor(a: LegId, b: LegId) -> Tensor {
    Tensor {
        legs: vec![a, b],
        data: vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ],
    }
}

/// The `2^|outputs| × 2^|inputs|` matrix denoted by the diagram, with wire 0
/// as the most significant bit on each side. Errors when the open wire count
/// exceeds [`SEMANTICS_MAX_WIRES`].
pub fn semantics(d: &ZXDiagram) -> Result<Matrix, ZxError> {
    let open = d.inputs().len() + d.outputs().len();
    if open > SEMANTICS_MAX_WIRES {
        return Err(ZxError::SemanticsSizeCap { max: SEMANTICS_MAX_WIRES, got: open });
    }

    let mut next_leg: LegId = 0;
    let mut fresh = || {
        let l = next_leg;
        next_leg += 1;
        l
    };

    // legs attached to each spider, and the open leg of each boundary
    let mut spider_legs: BTreeMap<usize, Vec<LegId>> = BTreeMap::new();
    let mut boundary_leg: BTreeMap<usize, LegId> = BTreeMap::new();
    let mut extra: Vec<Tensor> = Vec::new();

    let attach = |v: usize,
                      leg: LegId,
                      d: &ZXDiagram,
                      spider_legs: &mut BTreeMap<usize, Vec<LegId>>,
                      boundary_leg: &mut BTreeMap<usize, LegId>| {
        if d.vertex(v).kind.is_boundary() {
            boundary_leg.insert(v, leg);
        } else {
            spider_legs.entry(v).or_default().push(leg);
        }
    };

    for (_, e) in d.edges() {
        let both_spiders =
            d.vertex(e.a).kind.is_spider() && d.vertex(e.b).kind.is_spider();
        match e.kind {
            EdgeKind::Plain if both_spiders => {
                let l = fresh();
                attach(e.a, l, d, &mut spider_legs, &mut boundary_leg);
                attach(e.b, l, d, &mut spider_legs, &mut boundary_leg);
            }
            EdgeKind::Plain => {
                // materialize an identity so boundary legs stay distinct
                let (la, lb) = (fresh(), fresh());
                extra.push(delta_tensor(la, lb));
                attach(e.a, la, d, &mut spider_legs, &mut boundary_leg);
                attach(e.b, lb, d, &mut spider_legs, &mut boundary_leg);
            }
            EdgeKind::Hadamard => {
                let (la, lb) = (fresh(), fresh());
                extra.push(hadamard_tensor(la, lb));
                attach(e.a, la, d, &mut spider_legs, &mut boundary_leg);
                attach(e.b, lb, d, &mut spider_legs, &mut boundary_leg);
            }
        }
    }

    let mut tensors: Vec<Tensor> = Vec::new();
    for v in d.vertices() {
        if v.kind.is_boundary() {
            continue;
        }
        let legs = spider_legs.remove(&v.id).unwrap_or_default();
        let phase = Complex64::from_polar(1.0, v.phase.radians_concrete());
        let mut t = match v.kind {
            VertexKind::Z => z_spider_tensor(legs, phase),
            VertexKind::X => x_spider_tensor(legs, phase),
            _ => unreachable!(),
        };
        while let Some(leg) = t.has_repeated_leg() {
            t = t.self_trace(leg);
        }
        tensors.push(t);
    }
    tensors.extend(extra);
    if tensors.is_empty() {
        tensors.push(Tensor::scalar(Complex64::new(1.0, 0.0)));
    }

    // greedy contraction: repeatedly contract the connected pair with the
    // smallest resulting rank
    while tensors.len() > 1 {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in 0..tensors.len() {
            for j in (i + 1)..tensors.len() {
                let shared =
                    tensors[i].legs.iter().filter(|l| tensors[j].legs.contains(l)).count();
                if shared == 0 {
                    continue;
                }
                let rank = tensors[i].rank() + tensors[j].rank() - 2 * shared;
                if best.is_none_or(|(_, _, r)| rank < r) {
                    best = Some((i, j, rank));
                }
            }
        }
        let (i, j) = match best {
            Some((i, j, _)) => (i, j),
            // disconnected components: outer-product the first two
            None => (0, 1),
        };
        // i < j in every case, so removing j first leaves i stable
        let b = tensors.swap_remove(j);
        let a = tensors.swap_remove(i);
        let mut t = contract(&a, &b)?;
        while let Some(leg) = t.has_repeated_leg() {
            t = t.self_trace(leg);
        }
        tensors.push(t);
    }
    let result = tensors.pop().unwrap();

    // order the final legs: rows = outputs (wire 0 most significant), then
    // columns = inputs
    let rows = 1usize << d.outputs().len();
    let cols = 1usize << d.inputs().len();
    let mut m = Matrix::zeros(rows, cols);
    let out_legs: Vec<Option<LegId>> =
        d.outputs().iter().map(|o| boundary_leg.get(o).copied()).collect();
    let in_legs: Vec<Option<LegId>> =
        d.inputs().iter().map(|i| boundary_leg.get(i).copied()).collect();
    for (pos, l) in out_legs.iter().chain(in_legs.iter()).enumerate() {
        let l = l.unwrap_or_else(|| panic!("boundary {pos} has no edge"));
        assert!(result.legs.contains(&l), "open leg missing from contracted tensor");
    }
    for r in 0..rows {
        for c in 0..cols {
            let mut idx = 0usize;
            for (k, leg) in out_legs.iter().enumerate() {
                let bit = (r >> (d.outputs().len() - 1 - k)) & 1;
                let pos = result.legs.iter().position(|x| x == &leg.unwrap()).unwrap();
                idx |= bit << (result.rank() - 1 - pos);
            }
            for (k, leg) in in_legs.iter().enumerate() {
                let bit = (c >> (d.inputs().len() - 1 - k)) & 1;
                let pos = result.legs.iter().position(|x| x == &leg.unwrap()).unwrap();
                idx |= bit << (result.rank() - 1 - pos);
            }
            m[(r, c)] = result.data[idx];
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Circuit, Gate, Phase};
    use crate::densesim;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn z_spider_with_pi_phase_is_pauli_z() {
        let mut d = ZXDiagram::new();
        let i = d.add_input(0);
        let o = d.add_output(0);
        let v = d.add_vertex(VertexKind::Z, Phase::pi(), 0);
        d.add_edge(i, v, EdgeKind::Plain);
        d.add_edge(v, o, EdgeKind::Plain);
        let m = semantics(&d).unwrap();
        let z = Matrix::from_rows(&[&[c64(1.0, 0.0), c64(0.0, 0.0)], &[c64(0.0, 0.0), c64(-1.0, 0.0)]]);
        assert!(m.max_abs_diff(&z) < 1e-12);
    }

    #[test]
    fn one_leg_x_spiders_are_z_basis_states() {
        // |+><+| + e^{iα}|-><-| with one leg: α = 0 gives ∝ |0>, π gives |1>
        for (phase, expect) in [
            (Phase::zero(), [c64(1.0, 0.0), c64(0.0, 0.0)]),
            (Phase::pi(), [c64(0.0, 0.0), c64(1.0, 0.0)]),
        ] {
            let mut d = ZXDiagram::new();
            let o = d.add_output(0);
            let v = d.add_vertex(VertexKind::X, phase, 0);
            d.add_edge(v, o, EdgeKind::Plain);
            let m = semantics(&d).unwrap();
            let want = Matrix::from_rows(&[&[expect[0]], &[expect[1]]]);
            assert!(m.equal_up_to_scalar(&want, 1e-12));
        }
        // the 1-leg Z-spider with phase 0 is the |+> state
        let mut d = ZXDiagram::new();
        let o = d.add_output(0);
        let v = d.add_vertex(VertexKind::Z, Phase::zero(), 0);
        d.add_edge(v, o, EdgeKind::Plain);
        let m = semantics(&d).unwrap();
        let plus = Matrix::from_rows(&[&[c64(1.0, 0.0)], &[c64(1.0, 0.0)]]);
        assert!(m.equal_up_to_scalar(&plus, 1e-12));
    }

    #[test]
    fn circuit_encodings_match_dense_unitaries() {
        let cases = vec![
            Circuit::from_gates(1, vec![Gate::h(0)]).unwrap(),
            Circuit::new(1),
            Circuit::from_gates(2, vec![Gate::cx(0, 1)]).unwrap(),
            Circuit::from_gates(2, vec![Gate::cz(0, 1)]).unwrap(),
            Circuit::from_gates(2, vec![Gate::h(0), Gate::cx(0, 1)]).unwrap(),
            Circuit::from_gates(1, vec![Gate::t(0), Gate::h(0), Gate::s(0)]).unwrap(),
            Circuit::from_gates(2, vec![Gate::y(0), Gate::x(1), Gate::cz(0, 1), Gate::h(1)]).unwrap(),
        ];
        for c in cases {
            let d = ZXDiagram::from_circuit(&c);
            let m = semantics(&d).unwrap();
            let u = densesim::unitary(&c).unwrap();
            assert!(
                m.equal_up_to_scalar(&u, 1e-10),
                "semantics mismatch for circuit {c}"
            );
        }
    }

    #[test]
    fn random_circuits_match_dense_unitaries() {
        for seed in 0..15 {
            let c = crate::circuit::random_clifford_t(3, 12, 0.3, seed).unwrap();
            let d = ZXDiagram::from_circuit(&c);
            let m = semantics(&d).unwrap();
            let u = densesim::unitary(&c).unwrap();
            assert!(m.equal_up_to_scalar(&u, 1e-9), "mismatch at seed {seed}");
        }
    }

    #[test]
    fn wire_cap_enforced() {
        let d = ZXDiagram::from_circuit(&Circuit::new(7));
        assert!(matches!(semantics(&d), Err(ZxError::SemanticsSizeCap { .. })));
    }
}
