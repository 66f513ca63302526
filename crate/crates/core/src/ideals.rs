//! Hereditary and saturated vertex collections, saturation closure,
//! enumeration, quotients and downstream restrictions.
//!
//! For a finite ultragraph the union- and subset-closed subcollections of
//! the generated set lattice are exactly the collections `{A : A ⊆ K}`
//! for a vertex set `K`, so everything here is phrased in terms of the
//! support `K`.  `K` is hereditary when every edge sourced inside `K` has
//! its whole range inside `K`, and saturated when every regular vertex
//! whose edge ranges all lie inside `K` already belongs to `K`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::model::symbolic::{stabilize, StabilizeOutcome, SymVertex, TailPred, Window};
use crate::model::{forward_closure, ModelError, SymbolicUltragraph, Ultragraph, VertexId};
use crate::setalg::VertexSet;
use crate::Options;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdealsError {
    #[error("support is not hereditary (edge {edge} escapes)")]
    NotHereditary { edge: String },
    #[error("support is not saturated or not hereditary: {0}")]
    NotSaturatedHereditary(String),
    #[error("enumeration budget of {0} exceeded")]
    BudgetExceeded(u64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HereditaryCheck {
    Holds,
    Violated { edge: usize },
}

impl HereditaryCheck {
    pub fn holds(&self) -> bool {
        matches!(self, HereditaryCheck::Holds)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SaturatedCheck {
    Holds,
    Violated { vertex: VertexId },
}

impl SaturatedCheck {
    pub fn holds(&self) -> bool {
        matches!(self, SaturatedCheck::Holds)
    }
}

/// `K` is hereditary iff `s(e) ∈ K` implies `r(e) ⊆ K` for every edge.
pub fn is_hereditary(g: &Ultragraph, k: &BTreeSet<VertexId>) -> HereditaryCheck {
    for (i, e) in g.edges().iter().enumerate() {
        if k.contains(&e.source) && !e.range.is_subset(k) {
            return HereditaryCheck::Violated { edge: i };
        }
    }
    HereditaryCheck::Holds
}

/// `K` is saturated iff every regular vertex all of whose edge ranges lie
/// inside `K` belongs to `K`.  Requires a hereditary `K`.
pub fn is_saturated(g: &Ultragraph, k: &BTreeSet<VertexId>) -> Result<SaturatedCheck, IdealsError> {
    if let HereditaryCheck::Violated { edge } = is_hereditary(g, k) {
        return Err(IdealsError::NotHereditary {
            edge: g.edge(edge).name.clone(),
        });
    }
    Ok(
        saturation_gap(g, k).map_or(SaturatedCheck::Holds, |vertex| SaturatedCheck::Violated {
            vertex,
        }),
    )
}

/// Least vertex that saturation would add, if any.
fn saturation_gap(g: &Ultragraph, k: &BTreeSet<VertexId>) -> Option<VertexId> {
    g.vertex_ids().find(|&v| {
        !k.contains(&v)
            && g.is_regular(v)
            && g.out_edges(v).iter().all(|&e| g.edge(e).range.is_subset(k))
    })
}

/// The layers added by the saturation closure, in order, plus the closure
/// itself.  For a finite graph the fixed point is reached in at most
/// `|G⁰|` rounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaturationTrace {
    pub layers: Vec<BTreeSet<VertexId>>,
    pub closure: BTreeSet<VertexId>,
}

pub fn saturate(g: &Ultragraph, k: &BTreeSet<VertexId>) -> Result<SaturationTrace, IdealsError> {
    if let HereditaryCheck::Violated { edge } = is_hereditary(g, k) {
        return Err(IdealsError::NotHereditary {
            edge: g.edge(edge).name.clone(),
        });
    }
    let mut closure = k.clone();
    let mut layers = Vec::new();
    loop {
        let layer: BTreeSet<VertexId> = g
            .vertex_ids()
            .filter(|&v| {
                !closure.contains(&v)
                    && g.is_regular(v)
                    && g.out_edges(v)
                        .iter()
                        .all(|&e| g.edge(e).range.is_subset(&closure))
            })
            .collect();
        if layer.is_empty() {
            break;
        }
        closure.extend(layer.iter().cloned());
        layers.push(layer);
    }
    Ok(SaturationTrace { layers, closure })
}

/// Least hereditary support containing the seed, by worklist propagation.
pub fn hereditary_closure(g: &Ultragraph, seed: &BTreeSet<VertexId>) -> BTreeSet<VertexId> {
    let mut k = seed.clone();
    let mut changed = true;
    while changed {
        changed = false;
        for e in g.edges() {
            if k.contains(&e.source) && !e.range.is_subset(&k) {
                k.extend(e.range.iter().cloned());
                changed = true;
            }
        }
    }
    k
}

/// All saturated hereditary supports, in ascending (size, members) order;
/// always contains the empty support and the full vertex set.
pub fn enumerate_saturated_hereditary(
    g: &Ultragraph,
    budget: u64,
) -> Result<Vec<BTreeSet<VertexId>>, IdealsError> {
    let n = g.vertex_count();
    if n >= 63 || (1u64 << n) > budget {
        return Err(IdealsError::BudgetExceeded(budget));
    }
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << n) {
        let k: BTreeSet<VertexId> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| VertexId(i as u32))
            .collect();
        if is_hereditary(g, &k).holds() && saturation_gap(g, &k).is_none() {
            out.push(k);
        }
    }
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    Ok(out)
}

/// The quotient ultragraph on `S = G⁰ \ K`: retained edges are those whose
/// range meets `S`, with ranges intersected with `S`.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub graph: Ultragraph,
    /// Maps old vertex ids to quotient ids; `None` for vertices of `K`.
    /// Empty for symbolic quotients, whose survivors carry their original
    /// labels as vertex names instead.
    pub vertex_map: Vec<Option<VertexId>>,
    /// Set when `K` was the full vertex set and the quotient is empty.
    pub degenerate: bool,
}

pub fn quotient_ultragraph(
    g: &Ultragraph,
    k: &BTreeSet<VertexId>,
) -> Result<Quotient, IdealsError> {
    match is_saturated(g, k)? {
        SaturatedCheck::Holds => {}
        SaturatedCheck::Violated { vertex } => {
            return Err(IdealsError::NotSaturatedHereditary(format!(
                "saturation would add {}",
                g.name(vertex)
            )));
        }
    }
    let mut vertex_map: Vec<Option<VertexId>> = vec![None; g.vertex_count()];
    let mut names = Vec::new();
    for v in g.vertex_ids() {
        if !k.contains(&v) {
            vertex_map[v.index()] = Some(VertexId(names.len() as u32));
            names.push(g.name(v).to_string());
        }
    }
    let degenerate = names.is_empty();
    let mut edges = Vec::new();
    for e in g.edges() {
        let range: BTreeSet<VertexId> = e
            .range
            .iter()
            .filter_map(|v| vertex_map[v.index()])
            .collect();
        if range.is_empty() {
            continue;
        }
        let source = vertex_map[e.source.index()].expect(
            "a retained edge has a range outside K, so its source is outside K by heredity",
        );
        edges.push(crate::model::Edge {
            name: e.name.clone(),
            source,
            range,
            infinite_range: e.infinite_range,
        });
    }
    let graph = Ultragraph::new(names, edges)?;
    Ok(Quotient {
        graph,
        vertex_map,
        degenerate,
    })
}

/// The sub-ultragraph on the vertices reachable from `v` (reflexively),
/// with all edges sourced there.  Ranges automatically stay inside.
#[derive(Debug, Clone)]
pub struct Restriction {
    pub graph: Ultragraph,
    /// Maps restriction ids back to the original ids.
    pub vertex_map: Vec<VertexId>,
}

pub fn downstream_restriction(g: &Ultragraph, v: VertexId) -> Restriction {
    let reach = forward_closure(g, v);
    let mut old_to_new: Vec<Option<VertexId>> = vec![None; g.vertex_count()];
    let mut names = Vec::new();
    let mut vertex_map = Vec::new();
    for &u in &reach {
        old_to_new[u.index()] = Some(VertexId(names.len() as u32));
        names.push(g.name(u).to_string());
        vertex_map.push(u);
    }
    let mut edges = Vec::new();
    for e in g.edges() {
        if let Some(source) = old_to_new[e.source.index()] {
            let range: BTreeSet<VertexId> = e
                .range
                .iter()
                .map(|w| old_to_new[w.index()].expect("ranges of reachable sources are reachable"))
                .collect();
            edges.push(crate::model::Edge {
                name: e.name.clone(),
                source,
                range,
                infinite_range: e.infinite_range,
            });
        }
    }
    let graph = Ultragraph::new(names, edges).expect("restriction preserves validity");
    Restriction { graph, vertex_map }
}

// ---------------------------------------------------------------------------
// symbolic variants
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymHereditaryCheck {
    Holds,
    Violated { edge: String },
}

impl SymHereditaryCheck {
    pub fn holds(&self) -> bool {
        matches!(self, SymHereditaryCheck::Holds)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymSaturatedCheck {
    Holds,
    Violated { vertex: SymVertex },
}

impl SymSaturatedCheck {
    pub fn holds(&self) -> bool {
        matches!(self, SymSaturatedCheck::Holds)
    }
}

fn tail_indices(k: &VertexSet<SymVertex>) -> Vec<i64> {
    k.support()
        .iter()
        .filter_map(|v| match v {
            SymVertex::Tail(i) => Some(*i),
            SymVertex::Named(_) => None,
        })
        .collect()
}

/// Exact hereditary test for a symbolic graph: finitely many concrete
/// edges are checked directly, and every family is checked on an explicit
/// prefix of its domain plus one generic index beyond the stability
/// threshold (offsets are translation invariant there).
pub fn is_hereditary_symbolic(
    g: &SymbolicUltragraph,
    k: &VertexSet<SymVertex>,
) -> Result<SymHereditaryCheck, IdealsError> {
    for e in g.concrete_edges() {
        if k.contains(&e.source) && !e.range.is_subset_of(k) {
            return Ok(SymHereditaryCheck::Violated {
                edge: e.name.clone(),
            });
        }
    }
    let threshold = g.stability_threshold(&tail_indices(k));
    for (fi, f) in g.families().iter().enumerate() {
        let pred = TailPred::sample(f.start, threshold, |n| {
            if !g.instance_valid(fi, n) {
                return false;
            }
            let src = g
                .resolve_ref(f.source, n)
                .expect("validated family reference");
            let range = g.instance_range(fi, n).expect("validated family reference");
            k.contains(&src) && !range.is_subset_of(k)
        });
        if let Some(n) = pred.first_true() {
            return Ok(SymHereditaryCheck::Violated {
                edge: format!("{}[{n}]", f.name),
            });
        }
    }
    Ok(SymHereditaryCheck::Holds)
}

/// Exact saturated test for a symbolic graph.
pub fn is_saturated_symbolic(
    g: &SymbolicUltragraph,
    k: &VertexSet<SymVertex>,
) -> Result<SymSaturatedCheck, IdealsError> {
    if let SymHereditaryCheck::Violated { edge } = is_hereditary_symbolic(g, k)? {
        return Err(IdealsError::NotHereditary { edge });
    }
    let addable = |v: SymVertex| -> bool {
        if k.contains(&v) {
            return false;
        }
        match g.edges_at(v) {
            None => false, // infinite emitter
            Some(es) => {
                !es.is_empty()
                    && es.iter().all(|&inst| {
                        g.edge_range(inst)
                            .expect("validated instance")
                            .is_subset_of(k)
                    })
            }
        }
    };
    for i in 0..g.names().len() {
        let v = SymVertex::Named(i);
        if addable(v) {
            return Ok(SymSaturatedCheck::Violated { vertex: v });
        }
    }
    let threshold = g.stability_threshold(&tail_indices(k));
    let pred = TailPred::sample(g.tail().start, threshold, |i| addable(SymVertex::Tail(i)));
    if let Some(i) = pred.first_true() {
        return Ok(SymSaturatedCheck::Violated {
            vertex: SymVertex::Tail(i),
        });
    }
    Ok(SymSaturatedCheck::Holds)
}

/// Window-stabilized hereditary closure; unstable means the two windows
/// did not agree on a liftable answer.
pub fn hereditary_closure_symbolic(
    g: &SymbolicUltragraph,
    seed: &VertexSet<SymVertex>,
    opts: &Options,
) -> Result<StabilizeOutcome<VertexSet<SymVertex>>, IdealsError> {
    let extra = g.min_window_for_sets(&[seed]);
    stabilize(g, opts, extra, |w: &Window| {
        let Some(lowered) = w.lower_set(seed) else {
            return Ok(None);
        };
        Ok(w.lift_set(&hereditary_closure(&w.graph, &lowered)))
    })
}

/// Window-stabilized saturation closure.  The input must be exactly
/// hereditary; only the final support is reported for symbolic graphs, the
/// layer structure is a window artifact.
pub fn saturate_symbolic(
    g: &SymbolicUltragraph,
    k: &VertexSet<SymVertex>,
    opts: &Options,
) -> Result<StabilizeOutcome<VertexSet<SymVertex>>, IdealsError> {
    if let SymHereditaryCheck::Violated { edge } = is_hereditary_symbolic(g, k)? {
        return Err(IdealsError::NotHereditary { edge });
    }
    let extra = g.min_window_for_sets(&[k]);
    stabilize(g, opts, extra, |w: &Window| {
        let Some(lowered) = w.lower_set(k) else {
            return Ok(None);
        };
        let trace = saturate(&w.graph, &lowered)?;
        Ok(w.lift_set(&trace.closure))
    })
}

/// Quotient of a symbolic graph by a cofinite saturated hereditary
/// support: the quotient lives on the finite complement.  A quotient with
/// infinitely many retained edges is not representable and is rejected.
pub fn quotient_symbolic(
    g: &SymbolicUltragraph,
    k: &VertexSet<SymVertex>,
) -> Result<Quotient, IdealsError> {
    if k.is_finite() {
        return Err(IdealsError::Unsupported(
            "quotient by a finite support has an infinite vertex set".into(),
        ));
    }
    if let SymSaturatedCheck::Violated { vertex } = is_saturated_symbolic(g, k)? {
        return Err(IdealsError::NotSaturatedHereditary(format!(
            "saturation would add {}",
            g.vertex_label(vertex)
        )));
    }
    let s = k.complement(); // finite
    let survivors: Vec<SymVertex> = s.support().iter().copied().collect();
    let index_of = |v: SymVertex| survivors.iter().position(|&u| u == v);
    let names: Vec<String> = survivors.iter().map(|&v| g.vertex_label(v)).collect();

    let mut retained: Vec<(String, SymVertex, VertexSet<SymVertex>)> = Vec::new();
    for e in g.concrete_edges() {
        let meet = e.range.intersect(&s);
        if !meet.is_empty() {
            retained.push((e.name.clone(), e.source, meet));
        }
    }
    let threshold = g.stability_threshold(&tail_indices(k));
    for (fi, f) in g.families().iter().enumerate() {
        let pred = TailPred::sample(f.start, threshold, |n| {
            g.instance_valid(fi, n)
                && !g
                    .instance_range(fi, n)
                    .expect("validated instance")
                    .intersect(&s)
                    .is_empty()
        });
        if pred.eventually() {
            return Err(IdealsError::Unsupported(format!(
                "family {} meets the quotient for infinitely many indices",
                f.name
            )));
        }
        let mut n = f.start;
        let end = threshold;
        while n <= end {
            if pred.at(n) {
                retained.push((
                    format!("{}[{n}]", f.name),
                    g.resolve_ref(f.source, n).expect("validated instance"),
                    g.instance_range(fi, n)
                        .expect("validated instance")
                        .intersect(&s),
                ));
            }
            n += 1;
        }
    }

    let mut edges = Vec::new();
    for (name, source, range) in retained {
        let source = index_of(source).ok_or_else(|| {
            IdealsError::NotSaturatedHereditary(format!(
                "retained edge {name} has its source inside the support"
            ))
        })?;
        let range: BTreeSet<VertexId> = range
            .support()
            .iter()
            .filter_map(|&v| index_of(v))
            .map(|i| VertexId(i as u32))
            .collect();
        edges.push(crate::model::Edge {
            name,
            source: VertexId(source as u32),
            range,
            infinite_range: false,
        });
    }
    let degenerate = names.is_empty();
    let graph = Ultragraph::new(names, edges)?;
    let vertex_map = Vec::new();
    Ok(Quotient {
        graph,
        vertex_map,
        degenerate,
    })
}
