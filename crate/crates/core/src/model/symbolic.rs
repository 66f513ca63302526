//! Finitely described infinite ultragraphs.
//!
//! A symbolic ultragraph has finitely many *named* vertices plus an
//! infinite tail `v[n]` for `n ≥ start`.  Edges come in two kinds:
//! finitely many concrete edges (whose ranges may be cofinite), and edge
//! families indexed by `n` — one edge per `n ≥ start` outside a finite
//! skip set, with source and range members given either as fixed vertices
//! or as offsets `v[n+d]`.  An offset that lands below the tail start
//! resolves to the named vertex `{prefix}{k}`, so a family like
//! `g[n] : v[n+1] -> { v[n] }` can reach into the named block.
//!
//! Questions about a symbolic graph are answered on finite windows: the
//! description is resolved on `[start, top]`, decided there, and verified
//! to give the same (symbolically lifted) answer on the next window.  The
//! resolved window remembers which vertices are infinite emitters in the
//! full graph and which had edges dropped at the window boundary, so the
//! finite algorithms never mistake a truncation artifact for a sink or a
//! regular vertex.

use std::collections::{BTreeMap, BTreeSet};

use super::{Edge, ModelError, Ultragraph, VertexId};
use crate::setalg::{Polarity, VertexSet};
use crate::Options;

/// A vertex of a symbolic ultragraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymVertex {
    /// Index into the named-vertex list.
    Named(usize),
    /// Tail vertex `v[n]`.
    Tail(i64),
}

/// A vertex reference inside a family declaration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymRef {
    Fixed(SymVertex),
    /// `v[n + d]` where `n` is the family index.
    Offset(i64),
}

/// The range pattern of a family: a finite member list or the complement
/// of one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymRange {
    Finite(Vec<SymRef>),
    Cofinite(Vec<SymRef>),
}

/// The infinite tail declaration: vertices `{prefix}[n]` for `n ≥ start`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailSpec {
    pub prefix: String,
    pub start: i64,
}

/// A concrete (non-family) edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymEdge {
    pub name: String,
    pub source: SymVertex,
    pub range: VertexSet<SymVertex>,
}

/// One edge per index `n ≥ start`, `n ∉ skip`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeFamily {
    pub name: String,
    pub start: i64,
    pub skip: BTreeSet<i64>,
    pub source: SymRef,
    pub range: SymRange,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicUltragraph {
    names: Vec<String>,
    tail: TailSpec,
    concrete: Vec<SymEdge>,
    families: Vec<EdgeFamily>,
}

/// A reference to one edge of the full graph: a concrete edge or a family
/// instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum EdgeInst {
    Concrete(usize),
    Instance(usize, i64),
}

impl SymbolicUltragraph {
    pub fn new(
        names: Vec<String>,
        tail: TailSpec,
        concrete: Vec<(String, SymVertex, VertexSet<SymVertex>)>,
        families: Vec<EdgeFamily>,
    ) -> Result<Self, ModelError> {
        let concrete: Vec<SymEdge> = concrete
            .into_iter()
            .map(|(name, source, range)| SymEdge {
                name,
                source,
                range,
            })
            .collect();
        let g = SymbolicUltragraph {
            names,
            tail,
            concrete,
            families,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<(), ModelError> {
        let mut seen = BTreeSet::new();
        for n in &self.names {
            if n.contains('[') {
                return Err(ModelError::InvalidSymbolic(format!(
                    "vertex name {n} may not contain brackets"
                )));
            }
            if !seen.insert(n.clone()) {
                return Err(ModelError::DuplicateId(n.clone()));
            }
        }
        let mut edge_names = BTreeSet::new();
        for e in &self.concrete {
            if !edge_names.insert(e.name.clone()) {
                return Err(ModelError::DuplicateId(e.name.clone()));
            }
            self.check_vertex(e.source)?;
            for &v in e.range.support() {
                self.check_vertex(v)?;
            }
            if e.range.is_empty() {
                return Err(ModelError::EmptyRange(e.name.clone()));
            }
        }
        for f in &self.families {
            if !edge_names.insert(f.name.clone()) {
                return Err(ModelError::DuplicateId(f.name.clone()));
            }
            if let SymRange::Finite(refs) = &f.range {
                if refs.is_empty() {
                    return Err(ModelError::EmptyRange(f.name.clone()));
                }
            }
            // every reference must resolve for every index in the domain;
            // offsets only need explicit checks below the fallback boundary
            let refs: Vec<SymRef> = std::iter::once(f.source)
                .chain(match &f.range {
                    SymRange::Finite(r) | SymRange::Cofinite(r) => r.iter().copied(),
                })
                .collect();
            for r in refs {
                match r {
                    SymRef::Fixed(v) => self.check_vertex(v)?,
                    SymRef::Offset(d) => {
                        let mut n = f.start;
                        while n + d < self.tail.start {
                            if !f.skip.contains(&n) {
                                self.resolve_ref(r, n).map_err(|_| {
                                    ModelError::InvalidSymbolic(format!(
                                        "family {}: v[{}] does not resolve (no vertex named {}{})",
                                        f.name,
                                        n + d,
                                        self.tail.prefix,
                                        n + d
                                    ))
                                })?;
                            }
                            n += 1;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_vertex(&self, v: SymVertex) -> Result<(), ModelError> {
        match v {
            SymVertex::Named(i) if i < self.names.len() => Ok(()),
            SymVertex::Tail(k) if k >= self.tail.start => Ok(()),
            SymVertex::Named(i) => Err(ModelError::UnknownVertex(format!("named #{i}"))),
            SymVertex::Tail(k) => Err(ModelError::UnknownVertex(format!(
                "{}[{k}] lies before the tail start",
                self.tail.prefix
            ))),
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn tail(&self) -> &TailSpec {
        &self.tail
    }

    pub fn concrete_edges(&self) -> &[SymEdge] {
        &self.concrete
    }

    pub fn families(&self) -> &[EdgeFamily] {
        &self.families
    }

    /// Resolves an indexed reference at family index `n`, falling back to
    /// the named vertex `{prefix}{k}` for positions before the tail start.
    pub(crate) fn resolve_ref(&self, r: SymRef, n: i64) -> Result<SymVertex, ModelError> {
        match r {
            SymRef::Fixed(v) => Ok(v),
            SymRef::Offset(d) => {
                let k = n + d;
                if k >= self.tail.start {
                    Ok(SymVertex::Tail(k))
                } else {
                    let want = format!("{}{}", self.tail.prefix, k);
                    self.names
                        .iter()
                        .position(|name| *name == want)
                        .map(SymVertex::Named)
                        .ok_or(ModelError::UnknownVertex(want))
                }
            }
        }
    }

    /// The absolute range of one family instance.
    pub(crate) fn instance_range(
        &self,
        fam: usize,
        n: i64,
    ) -> Result<VertexSet<SymVertex>, ModelError> {
        let f = &self.families[fam];
        match &f.range {
            SymRange::Finite(refs) => {
                let members = refs
                    .iter()
                    .map(|&r| self.resolve_ref(r, n))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(VertexSet::finite(members))
            }
            SymRange::Cofinite(refs) => {
                let excl = refs
                    .iter()
                    .map(|&r| self.resolve_ref(r, n))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(VertexSet::cofinite(excl))
            }
        }
    }

    pub(crate) fn instance_valid(&self, fam: usize, n: i64) -> bool {
        let f = &self.families[fam];
        n >= f.start && !f.skip.contains(&n)
    }

    pub(crate) fn edge_range(&self, inst: EdgeInst) -> Result<VertexSet<SymVertex>, ModelError> {
        match inst {
            EdgeInst::Concrete(i) => Ok(self.concrete[i].range.clone()),
            EdgeInst::Instance(f, n) => self.instance_range(f, n),
        }
    }

    /// Vertices that source infinitely many edges in the full graph.
    /// Only a fixed family source can do that.
    pub fn infinite_emitters(&self) -> BTreeSet<SymVertex> {
        self.families
            .iter()
            .filter_map(|f| match f.source {
                SymRef::Fixed(v) => Some(v),
                SymRef::Offset(_) => None,
            })
            .collect()
    }

    /// The edges sourced at a vertex, or `None` if there are infinitely
    /// many.
    pub(crate) fn edges_at(&self, v: SymVertex) -> Option<Vec<EdgeInst>> {
        if self.infinite_emitters().contains(&v) {
            return None;
        }
        let mut out = Vec::new();
        for (i, e) in self.concrete.iter().enumerate() {
            if e.source == v {
                out.push(EdgeInst::Concrete(i));
            }
        }
        for (fi, f) in self.families.iter().enumerate() {
            match f.source {
                SymRef::Fixed(_) => {} // covered by the infinite-emitter check
                SymRef::Offset(a) => match v {
                    SymVertex::Tail(k) => {
                        let n = k - a;
                        if self.instance_valid(fi, n)
                            && self.resolve_ref(SymRef::Offset(a), n) == Ok(v)
                        {
                            out.push(EdgeInst::Instance(fi, n));
                        }
                    }
                    SymVertex::Named(_) => {
                        // fallback instances: finitely many n with n + a
                        // below the tail start
                        let mut n = f.start;
                        while n + a < self.tail.start {
                            if self.instance_valid(fi, n)
                                && self.resolve_ref(SymRef::Offset(a), n) == Ok(v)
                            {
                                out.push(EdgeInst::Instance(fi, n));
                            }
                            n += 1;
                        }
                    }
                },
            }
        }
        Some(out)
    }

    /// Largest offset magnitude used anywhere; window lifts keep a band of
    /// this size (plus one) clear of the frontier.
    pub fn guard(&self) -> i64 {
        let mut span = 0i64;
        for f in &self.families {
            if let SymRef::Offset(a) = f.source {
                span = span.max(a.abs());
            }
            let refs = match &f.range {
                SymRange::Finite(r) | SymRange::Cofinite(r) => r,
            };
            for r in refs {
                if let SymRef::Offset(d) = r {
                    span = span.max(d.abs());
                }
            }
        }
        span + 1
    }

    /// Every explicitly mentioned tail index; beyond
    /// `stability_threshold` the structure is translation invariant.
    pub(crate) fn stability_threshold(&self, extra: &[i64]) -> i64 {
        let mut t = self.tail.start;
        let mut note = |k: i64| t = t.max(k);
        for e in &self.concrete {
            if let SymVertex::Tail(k) = e.source {
                note(k);
            }
            for v in e.range.support() {
                if let SymVertex::Tail(k) = v {
                    note(*k);
                }
            }
        }
        for f in &self.families {
            note(f.start);
            for &s in &f.skip {
                note(s);
            }
            let refs = match &f.range {
                SymRange::Finite(r) | SymRange::Cofinite(r) => r,
            };
            for r in refs.iter().chain(std::iter::once(&f.source)) {
                if let SymRef::Fixed(SymVertex::Tail(k)) = r {
                    note(*k);
                }
            }
        }
        for &k in extra {
            note(k);
        }
        t + 2 * self.guard() + 2
    }

    /// Smallest window top on which the description resolves with every
    /// concrete reference, at least one instance of each family, and a
    /// full guard band.
    pub fn min_window(&self) -> i64 {
        let mut top = self.tail.start + self.guard();
        let mut note = |k: i64| top = top.max(k);
        for e in &self.concrete {
            if let SymVertex::Tail(k) = e.source {
                note(k);
            }
            if e.range.polarity() == Polarity::Finite {
                for v in e.range.support() {
                    if let SymVertex::Tail(k) = v {
                        note(*k);
                    }
                }
            }
        }
        for f in &self.families {
            let first = (f.start..)
                .find(|n| !f.skip.contains(n))
                .expect("skip set is finite");
            let mut reach = first;
            if let SymRef::Offset(a) = f.source {
                reach = reach.max(first + a);
            }
            if let SymRange::Finite(refs) = &f.range {
                for r in refs {
                    if let SymRef::Offset(d) = r {
                        reach = reach.max(first + d);
                    }
                }
            }
            note(reach);
        }
        top
    }

    pub fn min_window_for_sets(&self, sets: &[&VertexSet<SymVertex>]) -> i64 {
        let mut top = self.min_window();
        for s in sets {
            for v in s.support() {
                if let SymVertex::Tail(k) = v {
                    top = top.max(k + self.guard());
                }
            }
        }
        top
    }

    /// Default window top: the tail start plus a fixed slack of eight
    /// index steps (all family domains advance by one), never below the
    /// minimum resolvable window.
    pub fn default_horizon(&self) -> i64 {
        self.min_window().max(self.tail.start + 8)
    }

    pub fn vertex_label(&self, v: SymVertex) -> String {
        match v {
            SymVertex::Named(i) => self.names[i].clone(),
            SymVertex::Tail(k) => format!("{}[{k}]", self.tail.prefix),
        }
    }

    pub fn vertex_from_label(&self, label: &str) -> Option<SymVertex> {
        if let Some(i) = self.names.iter().position(|n| n == label) {
            return Some(SymVertex::Named(i));
        }
        let rest = label.strip_prefix(&self.tail.prefix)?;
        let inner = rest.strip_prefix('[')?.strip_suffix(']')?;
        let k: i64 = inner.parse().ok()?;
        (k >= self.tail.start).then_some(SymVertex::Tail(k))
    }

    pub fn set_label(&self, s: &VertexSet<SymVertex>) -> String {
        let members: Vec<String> = s.support().iter().map(|&v| self.vertex_label(v)).collect();
        match s.polarity() {
            Polarity::Finite => format!("{{{}}}", members.join(", ")),
            Polarity::Cofinite => format!("~{{{}}}", members.join(", ")),
        }
    }

    /// Resolves the description on the window `[start, top]`.
    pub fn resolve(&self, top: i64) -> Result<Window, ModelError> {
        let min = self.min_window();
        if top < min {
            return Err(ModelError::WindowTooSmall(top, min));
        }
        let named = self.names.len();
        let mut names: Vec<String> = self.names.clone();
        for k in self.tail.start..=top {
            names.push(format!("{}[{k}]", self.tail.prefix));
        }
        let vid = |v: SymVertex| -> Option<VertexId> {
            match v {
                SymVertex::Named(i) => Some(VertexId(i as u32)),
                SymVertex::Tail(k) if k <= top => {
                    Some(VertexId((named as i64 + (k - self.tail.start)) as u32))
                }
                SymVertex::Tail(_) => None,
            }
        };

        let mut edges = Vec::new();
        let mut instance_of: Vec<Option<(usize, i64)>> = Vec::new();
        let mut deficient: BTreeSet<VertexId> = BTreeSet::new();
        let mut deficient_from: BTreeMap<VertexId, String> = BTreeMap::new();
        let window_members = |excl: &BTreeSet<SymVertex>| -> BTreeSet<VertexId> {
            (0..names.len() as u32)
                .map(VertexId)
                .filter(|&v| {
                    let sym = if (v.0 as usize) < named {
                        SymVertex::Named(v.0 as usize)
                    } else {
                        SymVertex::Tail(self.tail.start + (v.0 as usize - named) as i64)
                    };
                    !excl.contains(&sym)
                })
                .collect()
        };

        for e in &self.concrete {
            let source = vid(e.source).expect("concrete sources are inside min windows");
            let (range, infinite) = match e.range.polarity() {
                Polarity::Finite => {
                    let members = e
                        .range
                        .support()
                        .iter()
                        .map(|&v| vid(v).expect("concrete finite ranges fit min windows"))
                        .collect::<BTreeSet<_>>();
                    (members, false)
                }
                Polarity::Cofinite => (window_members(e.range.support()), true),
            };
            edges.push(Edge {
                name: e.name.clone(),
                source,
                range,
                infinite_range: infinite,
            });
            instance_of.push(None);
        }

        for (fi, f) in self.families.iter().enumerate() {
            for n in f.start..=top {
                if f.skip.contains(&n) {
                    continue;
                }
                let src_sym = self.resolve_ref(f.source, n)?;
                let Some(source) = vid(src_sym) else { continue };
                match &f.range {
                    SymRange::Finite(refs) => {
                        let mut members = BTreeSet::new();
                        let mut fits = true;
                        for &r in refs {
                            match vid(self.resolve_ref(r, n)?) {
                                Some(v) => {
                                    members.insert(v);
                                }
                                None => {
                                    fits = false;
                                    break;
                                }
                            }
                        }
                        if !fits {
                            deficient.insert(source);
                            deficient_from
                                .entry(source)
                                .or_insert_with(|| f.name.clone());
                            continue;
                        }
                        edges.push(Edge {
                            name: format!("{}[{n}]", f.name),
                            source,
                            range: members,
                            infinite_range: false,
                        });
                        instance_of.push(Some((fi, n)));
                    }
                    SymRange::Cofinite(refs) => {
                        let excl: BTreeSet<SymVertex> = refs
                            .iter()
                            .map(|&r| self.resolve_ref(r, n))
                            .collect::<Result<_, _>>()?;
                        let members = window_members(&excl);
                        if members.is_empty() {
                            deficient.insert(source);
                            deficient_from
                                .entry(source)
                                .or_insert_with(|| f.name.clone());
                            continue;
                        }
                        edges.push(Edge {
                            name: format!("{}[{n}]", f.name),
                            source,
                            range: members,
                            infinite_range: true,
                        });
                        instance_of.push(Some((fi, n)));
                    }
                }
            }
        }

        let infinite_emitters: BTreeSet<VertexId> = self
            .infinite_emitters()
            .into_iter()
            .filter_map(vid)
            .collect();
        let graph = Ultragraph::with_truncation(names, edges, infinite_emitters, deficient)?;
        Ok(Window {
            graph,
            top,
            guard: self.guard(),
            named,
            tail_start: self.tail.start,
            instance_of,
            deficient_from,
        })
    }
}

/// A finite resolution of a symbolic ultragraph on `[start, top]`.
#[derive(Debug, Clone)]
pub struct Window {
    pub graph: Ultragraph,
    pub top: i64,
    guard: i64,
    named: usize,
    tail_start: i64,
    instance_of: Vec<Option<(usize, i64)>>,
    deficient_from: BTreeMap<VertexId, String>,
}

impl Window {
    pub fn vertex_of(&self, v: SymVertex) -> Option<VertexId> {
        match v {
            SymVertex::Named(i) if i < self.named => Some(VertexId(i as u32)),
            SymVertex::Tail(k) if k >= self.tail_start && k <= self.top => {
                Some(VertexId((self.named as i64 + k - self.tail_start) as u32))
            }
            _ => None,
        }
    }

    pub fn sym_of(&self, v: VertexId) -> SymVertex {
        if (v.0 as usize) < self.named {
            SymVertex::Named(v.0 as usize)
        } else {
            SymVertex::Tail(self.tail_start + (v.0 as usize - self.named) as i64)
        }
    }

    /// First tail index of the frontier band.
    pub fn frontier(&self) -> i64 {
        self.top - self.guard + 1
    }

    fn in_band(&self, v: VertexId) -> bool {
        match self.sym_of(v) {
            SymVertex::Named(_) => false,
            SymVertex::Tail(k) => k >= self.frontier(),
        }
    }

    /// Lifts a vertex to a window-independent symbol; frontier vertices do
    /// not lift.
    pub fn lift_vertex(&self, v: VertexId) -> Option<SymVertex> {
        (!self.in_band(v)).then(|| self.sym_of(v))
    }

    /// Lifts a window subset to a finite or cofinite symbolic set.  The
    /// frontier band must lie entirely inside or entirely outside the set,
    /// otherwise the window answer does not determine a stable description.
    pub fn lift_set(&self, s: &BTreeSet<VertexId>) -> Option<VertexSet<SymVertex>> {
        let band: Vec<VertexId> = self
            .graph
            .vertex_ids()
            .filter(|&v| self.in_band(v))
            .collect();
        debug_assert!(!band.is_empty());
        let inside = band.iter().filter(|v| s.contains(v)).count();
        if inside == band.len() {
            let excl: Vec<SymVertex> = self
                .graph
                .vertex_ids()
                .filter(|v| !s.contains(v))
                .map(|v| self.sym_of(v))
                .collect();
            Some(VertexSet::cofinite(excl))
        } else if inside == 0 {
            Some(VertexSet::finite(s.iter().map(|&v| self.sym_of(v))))
        } else {
            None
        }
    }

    /// Materializes a symbolic set inside the window; `None` when a finite
    /// member lies beyond the top.
    pub fn lower_set(&self, s: &VertexSet<SymVertex>) -> Option<BTreeSet<VertexId>> {
        match s.polarity() {
            Polarity::Finite => s
                .support()
                .iter()
                .map(|&v| self.vertex_of(v))
                .collect::<Option<BTreeSet<_>>>(),
            Polarity::Cofinite => {
                let excl: BTreeSet<VertexId> = s
                    .support()
                    .iter()
                    .filter_map(|&v| self.vertex_of(v))
                    .collect();
                Some(
                    self.graph
                        .vertex_ids()
                        .filter(|v| !excl.contains(v))
                        .collect(),
                )
            }
        }
    }

    /// The family a deficient vertex lost instances of, when any.
    pub fn escape_family(&self, v: VertexId) -> Option<&str> {
        self.deficient_from.get(&v).map(|s| s.as_str())
    }

    /// Window-independent names for an edge list; family instances inside
    /// the frontier band do not lift.
    pub fn lift_edge_names(&self, edges: &[usize]) -> Option<Vec<String>> {
        edges
            .iter()
            .map(|&i| match self.instance_of[i] {
                None => Some(self.graph.edge(i).name.clone()),
                Some((_, n)) => (n < self.frontier()).then(|| self.graph.edge(i).name.clone()),
            })
            .collect()
    }
}

/// The outcome of a two-window agreement check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stable<T> {
    pub value: T,
    pub horizon: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StabilizeOutcome<T> {
    Stable(Stable<T>),
    /// The windows disagreed, or an answer did not lift; carries the
    /// window top that was tried.
    Unstable(i64),
}

impl<T> StabilizeOutcome<T> {
    pub fn stable(self) -> Option<Stable<T>> {
        match self {
            StabilizeOutcome::Stable(s) => Some(s),
            StabilizeOutcome::Unstable(_) => None,
        }
    }
}

/// Resolves the description on `[.., top]` and `[.., top+1]`, computes a
/// lifted answer on both, and accepts it only when the two windows agree.
/// `None` from the per-window function means the answer did not lift.
pub fn stabilize<T, E, F>(
    g: &SymbolicUltragraph,
    opts: &Options,
    extra_min: i64,
    f: F,
) -> Result<StabilizeOutcome<T>, E>
where
    T: PartialEq,
    E: From<ModelError>,
    F: Fn(&Window) -> Result<Option<T>, E>,
{
    let top = opts
        .horizon
        .unwrap_or_else(|| g.default_horizon())
        .max(g.min_window())
        .max(extra_min);
    let lo = g.resolve(top)?;
    let hi = g.resolve(top + 1)?;
    let a = f(&lo)?;
    let b = f(&hi)?;
    match (a, b) {
        (Some(a), Some(b)) if a == b => Ok(StabilizeOutcome::Stable(Stable {
            value: a,
            horizon: top,
        })),
        _ => Ok(StabilizeOutcome::Unstable(top)),
    }
}

/// Vertices of the full graph that are sinks or infinite emitters,
/// computed exactly from the description.
pub fn singular_vertices_symbolic(g: &SymbolicUltragraph) -> VertexSet<SymVertex> {
    let infinite = g.infinite_emitters();
    let mut named_singular: BTreeSet<SymVertex> = BTreeSet::new();
    for i in 0..g.names().len() {
        let v = SymVertex::Named(i);
        match g.edges_at(v) {
            None => {
                named_singular.insert(v);
            }
            Some(es) if es.is_empty() => {
                named_singular.insert(v);
            }
            Some(_) => {}
        }
    }
    // tail supply is translation invariant beyond the threshold
    let threshold = g.stability_threshold(&[]);
    let tail_sink = |k: i64| -> bool {
        !infinite.contains(&SymVertex::Tail(k))
            && g.edges_at(SymVertex::Tail(k))
                .is_some_and(|es| es.is_empty())
    };
    let tail_infinite = |k: i64| infinite.contains(&SymVertex::Tail(k));
    let eventually = tail_sink(threshold) || tail_infinite(threshold);
    if eventually {
        // cofinitely many tail vertices are singular
        let mut excl: Vec<SymVertex> = (0..g.names().len())
            .map(SymVertex::Named)
            .filter(|v| !named_singular.contains(v))
            .collect();
        for k in g.tail().start..threshold {
            if !tail_sink(k) && !tail_infinite(k) {
                excl.push(SymVertex::Tail(k));
            }
        }
        VertexSet::cofinite(excl)
    } else {
        let mut members: Vec<SymVertex> = named_singular.into_iter().collect();
        for k in g.tail().start..threshold {
            if tail_sink(k) || tail_infinite(k) {
                members.push(SymVertex::Tail(k));
            }
        }
        VertexSet::finite(members)
    }
}

/// A boolean predicate on tail indices `n ≥ start` that is constant from
/// `start + prefix.len()` on.  Used by the exact symbolic checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct TailPred {
    start: i64,
    prefix: Vec<bool>,
    tail: bool,
}

impl TailPred {
    /// Samples `f` on `[start, threshold]`; `f` must be constant from
    /// `threshold` on.
    pub fn sample(start: i64, threshold: i64, f: impl Fn(i64) -> bool) -> Self {
        let threshold = threshold.max(start);
        let prefix: Vec<bool> = (start..threshold).map(&f).collect();
        TailPred {
            start,
            prefix,
            tail: f(threshold),
        }
    }

    pub fn at(&self, n: i64) -> bool {
        debug_assert!(n >= self.start);
        let i = (n - self.start) as usize;
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.tail
        }
    }

    pub fn first_true(&self) -> Option<i64> {
        for (i, &b) in self.prefix.iter().enumerate() {
            if b {
                return Some(self.start + i as i64);
            }
        }
        self.tail.then_some(self.start + self.prefix.len() as i64)
    }

    pub fn eventually(&self) -> bool {
        self.tail
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The descending chain with a cofinite fan: named v0, v1; tail from 2;
    /// e : v1 -> ~{v0,v1}; f : v0 -> ~{v0}; g[n] : v[n+1] -> {v[n]}.
    pub(crate) fn descending_chain() -> SymbolicUltragraph {
        SymbolicUltragraph::new(
            vec!["v0".into(), "v1".into()],
            TailSpec {
                prefix: "v".into(),
                start: 2,
            },
            vec![
                (
                    "e".into(),
                    SymVertex::Named(1),
                    VertexSet::cofinite([SymVertex::Named(0), SymVertex::Named(1)]),
                ),
                (
                    "f".into(),
                    SymVertex::Named(0),
                    VertexSet::cofinite([SymVertex::Named(0)]),
                ),
            ],
            vec![EdgeFamily {
                name: "g".into(),
                start: 1,
                skip: BTreeSet::new(),
                source: SymRef::Offset(1),
                range: SymRange::Finite(vec![SymRef::Offset(0)]),
            }],
        )
        .unwrap()
    }

    #[test]
    fn resolves_to_valid_windows() {
        let g = descending_chain();
        for top in g.min_window()..g.min_window() + 6 {
            let w = g.resolve(top).unwrap();
            let n = w.graph.vertex_count();
            assert_eq!(n as i64, 2 + top - 1);
            assert!(w.graph.edges().iter().all(|e| !e.range.is_empty()));
            // every vertex sources exactly one edge, as in the full graph
            assert!(w
                .graph
                .vertex_ids()
                .all(|v| w.graph.out_edges(v).len() == 1));
            assert!(!w.graph.is_truncation() || w.graph.singular_vertices().is_empty());
        }
    }

    #[test]
    fn window_too_small() {
        let g = descending_chain();
        assert!(matches!(
            g.resolve(1),
            Err(ModelError::WindowTooSmall(1, _))
        ));
    }

    #[test]
    fn fallback_resolution() {
        let g = descending_chain();
        // instance n=1 of the family: source v[2], range {v[1]} -> named v1
        assert_eq!(
            g.resolve_ref(SymRef::Offset(0), 1).unwrap(),
            SymVertex::Named(1)
        );
        assert_eq!(
            g.resolve_ref(SymRef::Offset(1), 1).unwrap(),
            SymVertex::Tail(2)
        );
    }

    #[test]
    fn lifting_sets() {
        let g = descending_chain();
        let w = g.resolve(10).unwrap();
        let all_but_v0: BTreeSet<VertexId> = w
            .graph
            .vertex_ids()
            .filter(|&v| w.graph.name(v) != "v0")
            .collect();
        let lifted = w.lift_set(&all_but_v0).unwrap();
        assert_eq!(lifted, VertexSet::cofinite([SymVertex::Named(0)]));
        let small = BTreeSet::from_iter([w.graph.vertex_named("v[3]").unwrap()]);
        assert_eq!(
            w.lift_set(&small).unwrap(),
            VertexSet::finite([SymVertex::Tail(3)])
        );
        // a set that cuts the frontier band does not lift
        let cut: BTreeSet<VertexId> = w.graph.vertex_ids().filter(|v| v.0 % 2 == 0).collect();
        assert_eq!(w.lift_set(&cut), None);
    }

    #[test]
    fn no_singular_vertices_in_the_chain() {
        let g = descending_chain();
        assert!(singular_vertices_symbolic(&g).is_empty());
    }

    #[test]
    fn labels_roundtrip() {
        let g = descending_chain();
        for v in [SymVertex::Named(0), SymVertex::Named(1), SymVertex::Tail(7)] {
            assert_eq!(g.vertex_from_label(&g.vertex_label(v)), Some(v));
        }
    }
}
