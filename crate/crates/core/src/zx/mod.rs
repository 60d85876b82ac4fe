//! ZX-diagrams: open graphs of phased Z/X spiders wired by plain or Hadamard
//! edges, plus the rewrites, graph-like normalization, circuit extraction,
//! and exact matrix semantics used by the splitting pipeline.

mod extract;
mod rewrite;
mod semantics;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Circuit, Gate, Phase};

pub use extract::extract_circuit;
pub use rewrite::{color_change, fuse, graph_like_violation, is_graph_like, normalize_edges, to_graph_like};
pub use semantics::semantics;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Error)]
pub enum ZxError {
    #[error("rewrite precondition failed: {0}")]
    Precondition(String),
    #[error("diagram is not graph-like: {0}")]
    NotGraphLike(String),
    #[error("extraction stuck: {0}")]
    ExtractionStuck(String),
    #[error("semantics oracle capped at {max} open wires, diagram has {got}")]
    SemanticsSizeCap { max: usize, got: usize },
    #[error("tensor contraction grew past the size cap")]
    ContractionTooLarge,
    #[error("non-Clifford pushing exceeded its iteration cap (possible cycle)")]
    PushIterationCap,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexKind {
    Z,
    X,
    BoundaryIn,
    BoundaryOut,
}

impl VertexKind {
    pub fn is_boundary(self) -> bool {
        matches!(self, VertexKind::BoundaryIn | VertexKind::BoundaryOut)
    }

    pub fn is_spider(self) -> bool {
        !self.is_boundary()
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Plain,
    Hadamard,
}

impl EdgeKind {
    pub fn toggled(self) -> EdgeKind {
        match self {
            EdgeKind::Plain => EdgeKind::Hadamard,
            EdgeKind::Hadamard => EdgeKind::Plain,
        }
    }

    /// Kind of the single edge equivalent to two in series.
    pub fn compose(self, other: EdgeKind) -> EdgeKind {
        if self == other {
            EdgeKind::Plain
        } else {
            EdgeKind::Hadamard
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZXVertex {
    pub id: VertexId,
    pub kind: VertexKind,
    pub phase: Phase,
    /// Qubit-row hint; exact for freshly encoded circuits, advisory after
    /// rewriting.
    pub wire: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub a: VertexId,
    pub b: VertexId,
    pub kind: EdgeKind,
}

impl Edge {
    pub fn other(&self, v: VertexId) -> VertexId {
        if v == self.a {
            self.b
        } else {
            self.a
        }
    }

    pub fn is_self_loop(&self) -> bool {
        self.a == self.b
    }
}

/// An open graph of spiders. Parallel edges and self-loops are representable
/// (rewrites create them transiently); `normalize_edges` removes them.
#[derive(Clone, Debug, Default)]
pub struct ZXDiagram {
    vertices: BTreeMap<VertexId, ZXVertex>,
    edges: BTreeMap<EdgeId, Edge>,
    incident: BTreeMap<VertexId, BTreeSet<EdgeId>>,
    inputs: Vec<VertexId>,
    outputs: Vec<VertexId>,
    next_vertex: VertexId,
    next_edge: EdgeId,
}

impl ZXDiagram {
    pub fn new() -> ZXDiagram {
        ZXDiagram::default()
    }

    pub fn add_vertex(&mut self, kind: VertexKind, phase: Phase, wire: usize) -> VertexId {
        let id = self.next_vertex;
        self.next_vertex += 1;
        assert!(
            !kind.is_boundary() || phase.is_zero(),
            "boundary vertices carry zero phase"
        );
        self.vertices.insert(id, ZXVertex { id, kind, phase, wire });
        self.incident.insert(id, BTreeSet::new());
        id
    }

    pub fn add_input(&mut self, wire: usize) -> VertexId {
        let id = self.add_vertex(VertexKind::BoundaryIn, Phase::zero(), wire);
        self.inputs.push(id);
        id
    }

    pub fn add_output(&mut self, wire: usize) -> VertexId {
        let id = self.add_vertex(VertexKind::BoundaryOut, Phase::zero(), wire);
        self.outputs.push(id);
        id
    }

    pub fn add_edge(&mut self, a: VertexId, b: VertexId, kind: EdgeKind) -> EdgeId {
        assert!(self.vertices.contains_key(&a) && self.vertices.contains_key(&b));
        let id = self.next_edge;
        self.next_edge += 1;
        self.edges.insert(id, Edge { a: a.min(b), b: a.max(b), kind });
        self.incident.get_mut(&a).unwrap().insert(id);
        self.incident.get_mut(&b).unwrap().insert(id);
        id
    }

    pub fn remove_edge(&mut self, e: EdgeId) -> Edge {
        let edge = self.edges.remove(&e).expect("edge exists");
        self.incident.get_mut(&edge.a).unwrap().remove(&e);
        self.incident.get_mut(&edge.b).unwrap().remove(&e);
        edge
    }

    /// Remove a vertex with all incident edges. Boundary lists are left
    /// untouched; callers detaching boundaries must fix them up.
    pub fn remove_vertex(&mut self, v: VertexId) {
        let ids: Vec<EdgeId> = self.incident[&v].iter().copied().collect();
        for e in ids {
            self.remove_edge(e);
        }
        self.incident.remove(&v);
        self.vertices.remove(&v);
    }

    pub fn vertex(&self, v: VertexId) -> &ZXVertex {
        &self.vertices[&v]
    }

    pub fn vertex_mut(&mut self, v: VertexId) -> &mut ZXVertex {
        self.vertices.get_mut(&v).unwrap()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains_key(&v)
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[&e]
    }

    pub fn edge_kind_mut(&mut self, e: EdgeId) -> &mut EdgeKind {
        &mut self.edges.get_mut(&e).unwrap().kind
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.keys().copied()
    }

    pub fn vertices(&self) -> impl Iterator<Item = &ZXVertex> {
        self.vertices.values()
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.keys().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&EdgeId, &Edge)> {
        self.edges.iter()
    }

    pub fn incident_edges(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        self.incident[&v].iter().copied()
    }

    /// Degree counting self-loops twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.incident[&v]
            .iter()
            .map(|e| if self.edges[e].is_self_loop() { 2 } else { 1 })
            .sum()
    }

    /// (neighbor, edge kind, edge id) triples, self-loops included once.
    pub fn neighbors(&self, v: VertexId) -> Vec<(VertexId, EdgeKind, EdgeId)> {
        self.incident[&v]
            .iter()
            .map(|&e| {
                let edge = &self.edges[&e];
                (edge.other(v), edge.kind, e)
            })
            .collect()
    }

    /// Edges between a fixed pair of vertices.
    pub fn edges_between(&self, a: VertexId, b: VertexId) -> Vec<EdgeId> {
        self.incident[&a]
            .iter()
            .copied()
            .filter(|e| {
                let edge = &self.edges[e];
                (edge.a, edge.b) == (a.min(b), a.max(b))
            })
            .collect()
    }

    pub fn inputs(&self) -> &[VertexId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[VertexId] {
        &self.outputs
    }

    pub fn n_wires(&self) -> usize {
        self.inputs.len()
    }

    pub fn spider_count(&self) -> usize {
        self.vertices.values().filter(|v| v.kind.is_spider()).count()
    }

    /// Standard gate-to-spider encoding: phase gates become phased Z-spiders,
    /// X a π-phased X-spider, H toggles the pending wire edge to Hadamard,
    /// CNOT a plain-connected Z(control)/X(target) pair, CZ a Hadamard-joined
    /// Z pair. Semantics equal the circuit unitary up to a global scalar.
    pub fn from_circuit(c: &Circuit) -> ZXDiagram {
        let mut d = ZXDiagram::new();
        let n = c.n_qubits;
        let mut cur: Vec<VertexId> = (0..n).map(|w| d.add_input(w)).collect();
        let mut pending = vec![EdgeKind::Plain; n];

        let place = |d: &mut ZXDiagram,
                         cur: &mut Vec<VertexId>,
                         pending: &mut Vec<EdgeKind>,
                         w: usize,
                         kind: VertexKind,
                         phase: Phase| {
            let v = d.add_vertex(kind, phase, w);
            d.add_edge(cur[w], v, pending[w]);
            cur[w] = v;
            pending[w] = EdgeKind::Plain;
            v
        };

        for g in &c.gates {
            match g {
                Gate::H { qubits } => {
                    pending[qubits[0]] = pending[qubits[0]].toggled();
                }
                Gate::X { qubits } => {
                    place(&mut d, &mut cur, &mut pending, qubits[0], VertexKind::X, Phase::pi());
                }
                Gate::Y { qubits } => {
                    // Y = iXZ up to global phase: a Z(π) then an X(π) spider
                    place(&mut d, &mut cur, &mut pending, qubits[0], VertexKind::Z, Phase::pi());
                    place(&mut d, &mut cur, &mut pending, qubits[0], VertexKind::X, Phase::pi());
                }
                Gate::Cx { qubits } => {
                    let zc = place(
                        &mut d,
                        &mut cur,
                        &mut pending,
                        qubits[0],
                        VertexKind::Z,
                        Phase::zero(),
                    );
                    let xt = place(
                        &mut d,
                        &mut cur,
                        &mut pending,
                        qubits[1],
                        VertexKind::X,
                        Phase::zero(),
                    );
                    d.add_edge(zc, xt, EdgeKind::Plain);
                }
                Gate::Cz { qubits } => {
                    let za = place(
                        &mut d,
                        &mut cur,
                        &mut pending,
                        qubits[0],
                        VertexKind::Z,
                        Phase::zero(),
                    );
                    let zb = place(
                        &mut d,
                        &mut cur,
                        &mut pending,
                        qubits[1],
                        VertexKind::Z,
                        Phase::zero(),
                    );
                    d.add_edge(za, zb, EdgeKind::Hadamard);
                }
                phase_gate => {
                    let w = phase_gate.qubits()[0];
                    let phase = phase_gate.z_phase().expect("remaining gates are phase gates");
                    place(&mut d, &mut cur, &mut pending, w, VertexKind::Z, phase);
                }
            }
        }

        for w in 0..n {
            let out = d.add_output(w);
            d.add_edge(cur[w], out, pending[w]);
        }
        d
    }

    /// Well-formedness: edge endpoints exist, boundaries have degree one and
    /// zero phase, boundary lists match vertex kinds.
    pub fn validate(&self) -> Result<(), String> {
        for (id, e) in &self.edges {
            if !self.vertices.contains_key(&e.a) || !self.vertices.contains_key(&e.b) {
                return Err(format!("edge {id} references a missing vertex"));
            }
        }
        for v in self.vertices.values() {
            if v.kind.is_boundary() {
                if self.degree(v.id) != 1 {
                    return Err(format!("boundary {} has degree {}", v.id, self.degree(v.id)));
                }
                if !v.phase.is_zero() {
                    return Err(format!("boundary {} has nonzero phase", v.id));
                }
            }
        }
        for &i in &self.inputs {
            if self.vertices.get(&i).map(|v| v.kind) != Some(VertexKind::BoundaryIn) {
                return Err(format!("input list entry {i} is not a boundary-in vertex"));
            }
        }
        for &o in &self.outputs {
            if self.vertices.get(&o).map(|v| v.kind) != Some(VertexKind::BoundaryOut) {
                return Err(format!("output list entry {o} is not a boundary-out vertex"));
            }
        }
        Ok(())
    }

    /// GraphViz dot form for visual inspection.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph zx {\n  rankdir=LR;\n");
        for v in self.vertices.values() {
            let (shape, color, label) = match v.kind {
                VertexKind::Z => ("circle", "palegreen", format!("{}", v.phase)),
                VertexKind::X => ("circle", "salmon", format!("{}", v.phase)),
                VertexKind::BoundaryIn => ("plaintext", "white", format!("in{}", v.wire)),
                VertexKind::BoundaryOut => ("plaintext", "white", format!("out{}", v.wire)),
            };
            let label = if label == "0π" { String::new() } else { label };
            let _ = writeln!(
                s,
                "  v{} [shape={shape},style=filled,fillcolor={color},label=\"{label}\"];",
                v.id
            );
        }
        for e in self.edges.values() {
            let style = match e.kind {
                EdgeKind::Plain => "solid",
                EdgeKind::Hadamard => "dashed, color=blue",
            };
            let _ = writeln!(s, "  v{} -- v{} [style=\"{style}\"];", e.a, e.b);
        }
        s.push_str("}\n");
        s
    }
}

/// JSON graph form for debugging and test fixtures.
#[derive(Serialize, Deserialize)]
pub struct DiagramJson {
    pub vertices: Vec<ZXVertex>,
    pub edges: Vec<Edge>,
    pub inputs: Vec<VertexId>,
    pub outputs: Vec<VertexId>,
}

impl From<&ZXDiagram> for DiagramJson {
    fn from(d: &ZXDiagram) -> DiagramJson {
        DiagramJson {
            vertices: d.vertices.values().cloned().collect(),
            edges: d.edges.values().copied().collect(),
            inputs: d.inputs.clone(),
            outputs: d.outputs.clone(),
        }
    }
}

impl From<DiagramJson> for ZXDiagram {
    fn from(j: DiagramJson) -> ZXDiagram {
        let mut d = ZXDiagram::new();
        for v in j.vertices {
            d.vertices.insert(v.id, v.clone());
            d.incident.insert(v.id, BTreeSet::new());
            d.next_vertex = d.next_vertex.max(v.id + 1);
        }
        for e in j.edges {
            d.add_edge(e.a, e.b, e.kind);
        }
        d.inputs = j.inputs;
        d.outputs = j.outputs;
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circuit_encoding_shapes() {
        let c = Circuit::from_gates(2, vec![Gate::h(0), Gate::cx(0, 1)]).unwrap();
        let d = ZXDiagram::from_circuit(&c);
        d.validate().unwrap();
        assert_eq!(d.inputs().len(), 2);
        assert_eq!(d.outputs().len(), 2);
        // one Z and one X spider from the CNOT
        assert_eq!(d.vertices().filter(|v| v.kind == VertexKind::Z).count(), 1);
        assert_eq!(d.vertices().filter(|v| v.kind == VertexKind::X).count(), 1);
        // H became a Hadamard edge, the CNOT bridge is plain
        let h_edges = d.edges().filter(|(_, e)| e.kind == EdgeKind::Hadamard).count();
        assert_eq!(h_edges, 1);
    }

    #[test]
    fn empty_circuit_is_bare_wires() {
        let d = ZXDiagram::from_circuit(&Circuit::new(3));
        assert_eq!(d.spider_count(), 0);
        assert_eq!(d.edges().count(), 3);
        d.validate().unwrap();
    }

    #[test]
    fn self_loop_degree_counts_twice() {
        let mut d = ZXDiagram::new();
        let v = d.add_vertex(VertexKind::Z, Phase::zero(), 0);
        d.add_edge(v, v, EdgeKind::Plain);
        assert_eq!(d.degree(v), 2);
        assert_eq!(d.neighbors(v).len(), 1);
    }

    #[test]
    fn json_round_trip() {
        let c = Circuit::from_gates(2, vec![Gate::t(0), Gate::cz(0, 1), Gate::h(1)]).unwrap();
        let d = ZXDiagram::from_circuit(&c);
        let js = serde_json::to_string(&DiagramJson::from(&d)).unwrap();
        let back: ZXDiagram = serde_json::from_str::<DiagramJson>(&js).unwrap().into();
        back.validate().unwrap();
        assert_eq!(back.spider_count(), d.spider_count());
        assert_eq!(back.edges().count(), d.edges().count());
        assert!(d.to_dot().contains("rankdir"));
    }
}
