//! The rewrites the splitting pipeline relies on: spider fusion, color
//! change, edge cleanup, and graph-like normalization. Every rewrite
//! preserves the diagram's semantics up to a nonzero global scalar.

use super::{EdgeKind, VertexId, VertexKind, ZXDiagram, ZxError};
use crate::circuit::Phase;

/// Fuse two same-color spiders joined by at least one plain edge: `keep`
/// absorbs `merge`'s phase and neighbors; one plain edge between them is
/// consumed, any further mutual edges become self-loops on `keep`.
pub fn fuse(d: &mut ZXDiagram, keep: VertexId, merge: VertexId) -> Result<(), ZxError> {
    if keep == merge {
        return Err(ZxError::Precondition("fuse needs two distinct spiders".into()));
    }
    let (ka, kb) = (d.vertex(keep).kind, d.vertex(merge).kind);
    if !ka.is_spider() || ka != kb {
        return Err(ZxError::Precondition(format!(
            "fuse needs same-color spiders, got {ka:?} and {kb:?}"
        )));
    }
    let plain = d
        .edges_between(keep, merge)
        .into_iter()
        .find(|&e| d.edge(e).kind == EdgeKind::Plain)
        .ok_or_else(|| ZxError::Precondition("fuse needs a connecting plain edge".into()))?;
    d.remove_edge(plain);

    let phase = d.vertex(merge).phase.clone();
    let keep_phase = d.vertex(keep).phase.add(&phase);
    d.vertex_mut(keep).phase = keep_phase;

    for e in d.incident_edges(merge).collect::<Vec<_>>() {
        let edge = d.remove_edge(e);
        let other = if edge.is_self_loop() { keep } else { edge.other(merge) };
        let other = if other == merge { keep } else { other };
        d.add_edge(keep, other, edge.kind);
    }
    d.remove_vertex(merge);
    Ok(())
}

/// Color-change an X-spider to Z, toggling every incident edge
/// (self-loops toggle once per loop).
pub fn color_change(d: &mut ZXDiagram, v: VertexId) -> Result<(), ZxError> {
    if d.vertex(v).kind != VertexKind::X {
        return Err(ZxError::Precondition(format!(
            "color change needs an X-spider, got {:?}",
            d.vertex(v).kind
        )));
    }
    d.vertex_mut(v).kind = VertexKind::Z;
    for e in d.incident_edges(v).collect::<Vec<_>>() {
        let k = d.edge(e).kind;
        *d.edge_kind_mut(e) = k.toggled();
    }
    Ok(())
}

/// One cleanup pass; returns whether anything changed.
///
/// - parallel Hadamard edges between the same pair of Z-spiders cancel mod 2
/// - plain self-loops are deleted
/// - Hadamard self-loops are deleted, adding π to the spider's phase
/// - zero-phase degree-2 spiders with no boundary neighbor are elided,
///   composing their two edge kinds (`H·H` on a line cancels to plain)
fn normalize_pass(d: &mut ZXDiagram) -> bool {
    let mut changed = false;

    // self-loops
    for v in d.vertex_ids().collect::<Vec<_>>() {
        for (other, kind, e) in d.neighbors(v) {
            if other != v {
                continue;
            }
            d.remove_edge(e);
            if kind == EdgeKind::Hadamard {
                let p = d.vertex(v).phase.add(&Phase::pi());
                d.vertex_mut(v).phase = p;
            }
            changed = true;
        }
    }

    // parallel Hadamard pairs between Z-spiders
    let pairs: Vec<(VertexId, VertexId)> = d
        .edges()
        .filter(|(_, e)| !e.is_self_loop())
        .map(|(_, e)| (e.a, e.b))
        .collect();
    for (a, b) in pairs {
        if !d.contains_vertex(a) || !d.contains_vertex(b) {
            continue;
        }
        if d.vertex(a).kind != VertexKind::Z || d.vertex(b).kind != VertexKind::Z {
            continue;
        }
        loop {
            let hs: Vec<_> = d
                .edges_between(a, b)
                .into_iter()
                .filter(|&e| d.edge(e).kind == EdgeKind::Hadamard)
                .collect();
            if hs.len() < 2 {
                break;
            }
            d.remove_edge(hs[0]);
            d.remove_edge(hs[1]);
            changed = true;
        }
    }

    // elide zero-phase degree-2 identity spiders away from boundaries
    for v in d.vertex_ids().collect::<Vec<_>>() {
        if !d.contains_vertex(v) {
            continue;
        }
        let vert = d.vertex(v);
        if !vert.kind.is_spider() || !vert.phase.is_zero() {
            continue;
        }
        let nbrs = d.neighbors(v);
        if d.degree(v) != 2 || nbrs.len() != 2 {
            continue;
        }
        let (a, ka, _) = nbrs[0];
        let (b, kb, _) = nbrs[1];
        if d.vertex(a).kind.is_boundary() || d.vertex(b).kind.is_boundary() {
            continue;
        }
        d.remove_vertex(v);
        d.add_edge(a, b, ka.compose(kb));
        changed = true;
    }

    changed
}

/// Run cleanup passes to a fixpoint.
pub fn normalize_edges(d: &mut ZXDiagram) {
    while normalize_pass(d) {}
}

/// Why the diagram fails the four graph-like conditions, if it does.
pub fn graph_like_violation(d: &ZXDiagram) -> Option<String> {
    for v in d.vertices() {
        if v.kind == VertexKind::X {
            return Some(format!("vertex {} is an X-spider", v.id));
        }
    }
    let mut seen_pairs = std::collections::BTreeSet::new();
    for (_, e) in d.edges() {
        let a_spider = d.vertex(e.a).kind.is_spider();
        let b_spider = d.vertex(e.b).kind.is_spider();
        if e.is_self_loop() {
            return Some(format!("self-loop on vertex {}", e.a));
        }
        if a_spider && b_spider {
            if e.kind != EdgeKind::Hadamard {
                return Some(format!("plain edge between spiders {} and {}", e.a, e.b));
            }
            if !seen_pairs.insert((e.a, e.b)) {
                return Some(format!("parallel Hadamard edges between {} and {}", e.a, e.b));
            }
        }
    }
    for &b in d.inputs().iter().chain(d.outputs()) {
        let nbrs = d.neighbors(b);
        if nbrs.len() != 1 {
            return Some(format!("boundary {b} has degree {}", nbrs.len()));
        }
        if d.vertex(nbrs[0].0).kind != VertexKind::Z {
            return Some(format!("boundary {b} does not attach to a Z-spider"));
        }
    }
    for v in d.vertices() {
        if !v.kind.is_spider() {
            continue;
        }
        let boundary_count = d
            .neighbors(v.id)
            .iter()
            .filter(|(w, _, _)| d.vertex(*w).kind.is_boundary())
            .count();
        if boundary_count > 1 {
            return Some(format!("spider {} touches {boundary_count} boundaries", v.id));
        }
    }
    None
}

pub fn is_graph_like(d: &ZXDiagram) -> bool {
    graph_like_violation(d).is_none()
}

/// Normalize to graph-like form: color-change every X-spider, fuse across
/// all plain spider-spider edges with cleanup to a fixpoint, then repair
/// boundary attachments with identity spider pairs.
pub fn to_graph_like(d: &mut ZXDiagram) {
    for v in d.vertex_ids().collect::<Vec<_>>() {
        if d.contains_vertex(v) && d.vertex(v).kind == VertexKind::X {
            color_change(d, v).expect("vertex is an X-spider");
        }
    }

    loop {
        let mut changed = normalize_pass(d);
        // fuse one plain spider-spider edge at a time; ids shift as we go
        loop {
            let target = d.edges().find_map(|(_, e)| {
                let both = d.vertex(e.a).kind.is_spider() && d.vertex(e.b).kind.is_spider();
                (both && !e.is_self_loop() && e.kind == EdgeKind::Plain).then_some((e.a, e.b))
            });
            match target {
                Some((a, b)) => {
                    fuse(d, a, b).expect("plain spider-spider edge is fusable");
                    changed = true;
                }
                None => break,
            }
        }
        if !changed {
            break;
        }
    }

    repair_boundaries(d);
    debug_assert_eq!(graph_like_violation(d), None);
}

/// Insert Hadamard-joined identity spider pairs so that every boundary
/// attaches to its own Z-spider and no spider holds two boundaries.
fn repair_boundaries(d: &mut ZXDiagram) {
    let boundaries: Vec<VertexId> =
        d.inputs().iter().chain(d.outputs()).copied().collect();

    // boundary wired straight to another boundary
    for &b in &boundaries {
        let nbrs = d.neighbors(b);
        assert_eq!(nbrs.len(), 1, "boundary {b} must have degree 1");
        let (other, kind, e) = nbrs[0];
        if !d.vertex(other).kind.is_boundary() {
            continue;
        }
        let wire = d.vertex(b).wire;
        d.remove_edge(e);
        let u1 = d.add_vertex(VertexKind::Z, Phase::zero(), wire);
        let u2 = d.add_vertex(VertexKind::Z, Phase::zero(), wire);
        d.add_edge(b, u1, EdgeKind::Plain);
        d.add_edge(u1, u2, EdgeKind::Hadamard);
        d.add_edge(u2, other, kind.compose(EdgeKind::Hadamard));
    }

    // spiders holding more than one boundary keep their first and push each
    // extra boundary behind an H-H identity pair
    for v in d.vertex_ids().collect::<Vec<_>>() {
        if !d.vertex(v).kind.is_spider() {
            continue;
        }
        let boundary_edges: Vec<(VertexId, EdgeKind, usize)> = d
            .neighbors(v)
            .into_iter()
            .filter(|(w, _, _)| d.vertex(*w).kind.is_boundary())
            .collect();
        for &(b, kind, e) in boundary_edges.iter().skip(1) {
            let wire = d.vertex(b).wire;
            d.remove_edge(e);
            let u1 = d.add_vertex(VertexKind::Z, Phase::zero(), wire);
            let u2 = d.add_vertex(VertexKind::Z, Phase::zero(), wire);
            d.add_edge(v, u1, EdgeKind::Hadamard);
            d.add_edge(u1, u2, EdgeKind::Hadamard);
            d.add_edge(u2, b, kind);
        }
    }
}
