//! Clifford border detection: push non-Clifford spiders rightward along
//! their wires, find the per-wire cut separating a purely Clifford prefix
//! from the rest (pulling straddling two-qubit connections to the
//! non-Clifford side), and split circuits into U_C and U_NC.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::zx::{self, EdgeKind, VertexId, VertexKind, ZXDiagram, ZxError};

#[derive(Debug, Error)]
pub enum SplitError {
    #[error(transparent)]
    Zx(#[from] ZxError),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitSide {
    Left,
    Right,
}

/// The per-wire cut: `parsed` holds the Clifford-side spider ids, `cut` maps
/// each wire to the last parsed vertex on it (the wire's input boundary when
/// nothing on that wire parsed).
#[derive(Clone, Debug)]
pub struct Border {
    pub parsed: BTreeSet<VertexId>,
    pub cut: BTreeMap<usize, VertexId>,
}

/// Outcome of splitting a circuit at the Clifford border.
#[derive(Clone, Debug, Serialize)]
pub struct SplitResult {
    pub clifford: Circuit,
    pub non_clifford: Circuit,
    pub side: SplitSide,
    pub depth_reduction: f64,
}

impl SplitResult {
    /// The recomposed circuit in temporal gate order.
    pub fn recomposed(&self) -> Circuit {
        match self.side {
            SplitSide::Left => self.clifford.then(&self.non_clifford),
            SplitSide::Right => self.non_clifford.then(&self.clifford),
        }
    }
}

/// Wire-chain view of a circuit-shaped diagram: per wire, the spiders in
/// order with the kind of the edge entering each from the left, plus the
/// kind of the final edge into the output. Verticals (edges between wires)
/// hang off the spiders and are not part of the chain.
struct WireStructure {
    chains: Vec<Vec<VertexId>>,
    lead_kinds: Vec<Vec<EdgeKind>>,
    tail_kinds: Vec<EdgeKind>,
}

impl WireStructure {
    fn build(d: &ZXDiagram) -> WireStructure {
        let n = d.n_wires();
        let mut chains = Vec::with_capacity(n);
        let mut lead_kinds = Vec::with_capacity(n);
        let mut tail_kinds = Vec::with_capacity(n);
        for w in 0..n {
            let mut chain = Vec::new();
            let mut kinds = Vec::new();
            let input = d.inputs()[w];
            let mut incoming = {
                let nbrs = d.neighbors(input);
                assert_eq!(nbrs.len(), 1, "input must have one wire");
                nbrs[0]
            };
            loop {
                let (cur, kind, edge) = incoming;
                if d.vertex(cur).kind == VertexKind::BoundaryOut {
                    tail_kinds.push(kind);
                    break;
                }
                assert_eq!(d.vertex(cur).kind, VertexKind::Z, "chains hold Z-spiders");
                assert_eq!(d.vertex(cur).wire, w, "chain left its wire");
                chain.push(cur);
                kinds.push(kind);
                incoming = d
                    .neighbors(cur)
                    .into_iter()
                    .find(|&(v, _, e)| {
                        e != edge
                            && (d.vertex(v).wire == w || d.vertex(v).kind.is_boundary())
                            && (d.vertex(v).kind.is_spider()
                                || d.vertex(v).kind == VertexKind::BoundaryOut)
                    })
                    .expect("wire chain continues to the output");
            }
            chains.push(chain);
            lead_kinds.push(kinds);
        }
        WireStructure { chains, lead_kinds, tail_kinds }
    }

    fn position_of(&self, v: VertexId) -> Option<(usize, usize)> {
        for (w, chain) in self.chains.iter().enumerate() {
            if let Some(i) = chain.iter().position(|&x| x == v) {
                return Some((w, i));
            }
        }
        None
    }
}

fn is_clifford_spider(d: &ZXDiagram, v: VertexId) -> bool {
    d.vertex(v).phase.is_clifford()
}

/// True for spiders carrying only chain edges (no verticals): the movable
/// phase spiders.
fn is_pure_phase_spider(d: &ZXDiagram, v: VertexId) -> bool {
    d.neighbors(v)
        .iter()
        .all(|&(u, _, _)| d.vertex(u).kind.is_boundary() || d.vertex(u).wire == d.vertex(v).wire)
}

/// Convert every X-spider to Z and commute non-Clifford phase spiders as far
/// right as possible along their wires. Movement happens only across plain
/// edges onto pure phase spiders: a Clifford neighbor is swapped past,
/// a non-Clifford neighbor is fused (phases add). Semantics are preserved.
pub fn push_non_clifford(d: &mut ZXDiagram) -> Result<(), ZxError> {
    for v in d.vertex_ids().collect::<Vec<_>>() {
        if d.contains_vertex(v) && d.vertex(v).kind == VertexKind::X {
            zx::color_change(d, v)?;
        }
    }

    let mut ws = WireStructure::build(d);
    let cap = 10 * d.spider_count().max(1);
    for _pass in 0..cap {
        let mut changed = false;
        for w in 0..ws.chains.len() {
            let mut i = ws.chains[w].len();
            while i > 0 {
                i -= 1;
                let v = ws.chains[w][i];
                if is_clifford_spider(d, v) {
                    continue;
                }
                if i + 1 >= ws.chains[w].len() {
                    continue; // already rightmost
                }
                if ws.lead_kinds[w][i + 1] != EdgeKind::Plain {
                    continue; // Hadamard edge blocks commuting
                }
                let u = ws.chains[w][i + 1];
                if !is_pure_phase_spider(d, u) {
                    continue; // two-qubit connection blocks the naive push
                }
                debug_assert!(is_pure_phase_spider(d, v), "non-Clifford spiders are phase spiders");
                if is_clifford_spider(d, u) {
                    swap_chain_neighbors(d, &mut ws, w, i);
                } else {
                    fuse_chain_neighbors(d, &mut ws, w, i);
                }
                changed = true;
            }
        }
        if !changed {
            return Ok(());
        }
    }
    Err(ZxError::PushIterationCap)
}

/// Swap chain positions i and i+1 on wire `w` (both diagonal, so the wire
/// map is unchanged). Edge kinds around the pair stay in place.
fn swap_chain_neighbors(d: &mut ZXDiagram, ws: &mut WireStructure, w: usize, i: usize) {
    let v = ws.chains[w][i];
    let u = ws.chains[w][i + 1];
    let left = if i == 0 { d.inputs()[w] } else { ws.chains[w][i - 1] };
    let right = if i + 2 < ws.chains[w].len() { ws.chains[w][i + 2] } else { d.outputs()[w] };
    let k_left = ws.lead_kinds[w][i];
    let k_right = if i + 2 < ws.chains[w].len() {
        ws.lead_kinds[w][i + 2]
    } else {
        ws.tail_kinds[w]
    };

    let e_left = ws_edge(d, left, v);
    let e_mid = ws_edge(d, v, u);
    let e_right = ws_edge(d, u, right);
    d.remove_edge(e_left);
    d.remove_edge(e_mid);
    d.remove_edge(e_right);
    d.add_edge(left, u, k_left);
    d.add_edge(u, v, EdgeKind::Plain);
    d.add_edge(v, right, k_right);
    ws.chains[w].swap(i, i + 1);
}

/// Fuse chain position i+1 into i on wire `w` (both non-Clifford phase
/// spiders joined by a plain edge).
fn fuse_chain_neighbors(d: &mut ZXDiagram, ws: &mut WireStructure, w: usize, i: usize) {
    let v = ws.chains[w][i];
    let u = ws.chains[w][i + 1];
    zx::fuse(d, v, u).expect("plain-adjacent same-color spiders fuse");
    ws.chains[w].remove(i + 1);
    ws.lead_kinds[w].remove(i + 1);
}

/// The unique chain edge between two adjacent chain vertices (or a vertex
/// and its boundary).
fn ws_edge(d: &ZXDiagram, a: VertexId, b: VertexId) -> zx::EdgeId {
    let es = d.edges_between(a, b);
    assert_eq!(es.len(), 1, "chain neighbors share exactly one edge");
    es[0]
}

/// Identify the Clifford border of a pushed diagram: per wire, the maximal
/// prefix of Clifford spiders, shrunk repeatedly while any two-qubit
/// connection straddles the cut.
pub fn detect_border(d: &ZXDiagram) -> Border {
    let ws = WireStructure::build(d);
    let mut cut: Vec<usize> = ws
        .chains
        .iter()
        .map(|chain| {
            chain
                .iter()
                .position(|&v| !is_clifford_spider(d, v))
                .unwrap_or(chain.len())
        })
        .collect();

    // verticals as (wire, index) pairs
    let mut verticals: Vec<((usize, usize), (usize, usize))> = Vec::new();
    for (_, e) in d.edges() {
        if d.vertex(e.a).kind.is_boundary() || d.vertex(e.b).kind.is_boundary() {
            continue;
        }
        if d.vertex(e.a).wire == d.vertex(e.b).wire {
            continue;
        }
        let pa = ws.position_of(e.a).expect("vertical endpoint sits on a chain");
        let pb = ws.position_of(e.b).expect("vertical endpoint sits on a chain");
        verticals.push((pa, pb));
    }

    // each straddling connection moves its parsed endpoint (and everything
    // right of it) to the non-Clifford side; iterate to a fixpoint
    loop {
        let mut changed = false;
        for &((w1, i1), (w2, i2)) in &verticals {
            let p1 = i1 < cut[w1];
            let p2 = i2 < cut[w2];
            if p1 && !p2 {
                cut[w1] = i1;
                changed = true;
            } else if p2 && !p1 {
                cut[w2] = i2;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let mut parsed = BTreeSet::new();
    let mut cut_map = BTreeMap::new();
    for (w, chain) in ws.chains.iter().enumerate() {
        parsed.extend(chain[..cut[w]].iter().copied());
        let last = if cut[w] == 0 { d.inputs()[w] } else { chain[cut[w] - 1] };
        cut_map.insert(w, last);
    }
    Border { parsed, cut: cut_map }
}

/// Read a wire-structured diagram back into two circuits at the border:
/// the Clifford prefix (including any Hadamard on each cut edge) and the
/// non-Clifford remainder.
fn read_back_split(d: &ZXDiagram, border: &Border) -> (Circuit, Circuit) {
    let ws = WireStructure::build(d);
    let n = ws.chains.len();
    let cut: Vec<usize> = (0..n)
        .map(|w| {
            ws.chains[w]
                .iter()
                .position(|v| !border.parsed.contains(v))
                .unwrap_or(ws.chains[w].len())
        })
        .collect();

    let left = read_back_range(d, &ws, &vec![0; n], &cut, true);
    let right = read_back_range(d, &ws, &cut, &ws.chains.iter().map(Vec::len).collect::<Vec<_>>(), false);
    (left.cancel_adjacent_inverses(), right.cancel_adjacent_inverses())
}

/// Emit the gates of chain positions `lo[w]..hi[w]`. `take_cut_hadamard`
/// controls whether the edge crossing the right end of the range belongs to
/// this range (the Clifford side keeps cut-edge Hadamards; the right side's
/// leading edges were consumed by the left and enter plain).
fn read_back_range(
    d: &ZXDiagram,
    ws: &WireStructure,
    lo: &[usize],
    hi: &[usize],
    take_cut_hadamard: bool,
) -> Circuit {
    let n = ws.chains.len();
    #[derive(Debug)]
    enum Step {
        Hadamard,
        Spider(VertexId),
    }
    let mut steps: Vec<Vec<Step>> = Vec::with_capacity(n);
    for w in 0..n {
        let mut list = Vec::new();
        for i in lo[w]..hi[w] {
            // the edge entering the first spider of the right side was
            // consumed as the left side's trailing cut edge
            let owns_lead = i > lo[w] || take_cut_hadamard;
            if owns_lead && ws.lead_kinds[w][i] == EdgeKind::Hadamard {
                list.push(Step::Hadamard);
            }
            list.push(Step::Spider(ws.chains[w][i]));
        }
        // trailing edge: the left side takes the crossing edge (the next
        // spider's lead, or the output tail when the wire is fully parsed);
        // the right side takes the output tail only when it has spiders
        let trailing = if take_cut_hadamard {
            Some(if hi[w] < ws.chains[w].len() {
                ws.lead_kinds[w][hi[w]]
            } else {
                ws.tail_kinds[w]
            })
        } else if lo[w] < hi[w] {
            Some(ws.tail_kinds[w])
        } else {
            None
        };
        if trailing == Some(EdgeKind::Hadamard) {
            list.push(Step::Hadamard);
        }
        steps.push(list);
    }

    // verticals inside the range, keyed per spider
    let mut pending_verticals: BTreeMap<VertexId, Vec<(VertexId, usize)>> = BTreeMap::new();
    let in_range = |v: VertexId| -> bool {
        ws.position_of(v).is_some_and(|(w, i)| i >= lo[w] && i < hi[w])
    };
    for (_, e) in d.edges() {
        if d.vertex(e.a).kind.is_boundary() || d.vertex(e.b).kind.is_boundary() {
            continue;
        }
        if d.vertex(e.a).wire == d.vertex(e.b).wire {
            continue;
        }
        if in_range(e.a) && in_range(e.b) {
            let wa = ws.position_of(e.a).unwrap().0;
            let wb = ws.position_of(e.b).unwrap().0;
            pending_verticals.entry(e.a).or_default().push((e.b, wb));
            pending_verticals.entry(e.b).or_default().push((e.a, wa));
        }
    }

    let mut circuit = Circuit::new(n);
    let mut pos = vec![0usize; n];
    let mut arrived: BTreeMap<VertexId, usize> = BTreeMap::new(); // spider -> wire
    loop {
        let mut progressed = false;
        for w in 0..n {
            while pos[w] < steps[w].len() {
                match &steps[w][pos[w]] {
                    Step::Hadamard => {
                        circuit.push(Gate::h(w));
                        pos[w] += 1;
                        progressed = true;
                    }
                    Step::Spider(v) => {
                        let v = *v;
                        if let std::collections::btree_map::Entry::Vacant(slot) = arrived.entry(v) {
                            slot.insert(w);
                            let phase = d.vertex(v).phase.clone();
                            // full turns are identities and emit nothing
                            if !phase.is_zero() && phase.half_turns_mod4() != Some(0) {
                                circuit.push(Gate::rz(phase, w));
                            }
                            progressed = true;
                        }
                        // emit CZs whose partners have arrived
                        let mut remaining = pending_verticals.remove(&v).unwrap_or_default();
                        remaining.retain(|&(partner, pw)| {
                            if arrived.contains_key(&partner) {
                                circuit.push(Gate::cz(w.min(pw), w.max(pw)));
                                // drop the mirrored entry on the partner
                                if let Some(list) = pending_verticals.get_mut(&partner) {
                                    if let Some(k) = list.iter().position(|&(x, _)| x == v) {
                                        list.remove(k);
                                    }
                                }
                                progressed = true;
                                false
                            } else {
                                true
                            }
                        });
                        if remaining.is_empty() {
                            pos[w] += 1;
                            progressed = true;
                        } else {
                            pending_verticals.insert(v, remaining);
                            break; // wait for partners
                        }
                    }
                }
            }
        }
        if pos.iter().enumerate().all(|(w, &p)| p == steps[w].len()) {
            break;
        }
        assert!(progressed, "vertical scheduling deadlocked");
    }
    circuit
}

/// Split a circuit at its Clifford border. `Left` produces
/// `U_NC · U_C` (Clifford first in time); `Right` runs the procedure on the
/// adjoint and flips back, producing `U_C · U_NC`.
pub fn split(c: &Circuit, side: SplitSide) -> Result<SplitResult, SplitError> {
    match side {
        SplitSide::Left => split_left(c),
        SplitSide::Right => {
            let mirrored = split_left(&c.adjoint())?;
            let clifford = mirrored.clifford.adjoint();
            let non_clifford = mirrored.non_clifford.adjoint();
            let total = non_clifford.then(&clifford);
            let depth_reduction = reduction(clifford.depth(), total.depth());
            Ok(SplitResult { clifford, non_clifford, side: SplitSide::Right, depth_reduction })
        }
    }
}

fn split_left(c: &Circuit) -> Result<SplitResult, SplitError> {
    let mut d = ZXDiagram::from_circuit(c);
    zx::to_graph_like(&mut d);
    let extracted = zx::extract_circuit(&d)?;

    let mut pushed = ZXDiagram::from_circuit(&extracted);
    push_non_clifford(&mut pushed)?;
    let border = detect_border(&pushed);
    let (clifford, non_clifford) = read_back_split(&pushed, &border);

    let total = clifford.then(&non_clifford);
    let depth_reduction = reduction(clifford.depth(), total.depth());
    Ok(SplitResult { clifford, non_clifford, side: SplitSide::Left, depth_reduction })
}

/// Fully Clifford circuits (empty non-Clifford side) count as full-depth
/// reduction even when the total depth is zero.
fn reduction(clifford_depth: usize, total_depth: usize) -> f64 {
    if total_depth == 0 {
        1.0
    } else {
        clifford_depth as f64 / total_depth as f64
    }
}

/// Tally depth reductions into ten percentile buckets
/// [0-10%), ..., [90-100%].
pub fn depth_reduction_histogram(circuits: &[Circuit]) -> Result<[usize; 10], SplitError> {
    let mut buckets = [0usize; 10];
    for c in circuits {
        let s = split(c, SplitSide::Left)?;
        let idx = ((s.depth_reduction * 10.0).floor() as usize).min(9);
        buckets[idx] += 1;
    }
    Ok(buckets)
}
