//! Core data model: finite ultragraphs, paths and loops, plus the
//! symbolic (infinite) variant and the matrix bridges.
//!
//! Every edge has a single source and a nonempty set of range vertices.
//! A path is a nonempty edge sequence in which the source of each edge
//! lies in the range of its predecessor; a loop is a path whose starting
//! source lies in the final range.  Zero-length paths are not represented
//! as values — operations that need them (reflexive reachability) handle
//! the case explicitly.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

mod loops;
mod matrix;
pub mod symbolic;

pub use loops::{find_loops, has_loop, LoopMode};
pub use matrix::{
    edge_matrix, graph_from_matrix, graph_from_symbolic_matrix, ultragraph_from_matrix,
    ultragraph_from_symbolic_matrix, DenseZeroOne, SymbolicZeroOne,
};
pub use symbolic::SymbolicUltragraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("edge {0} has an empty range")]
    EmptyRange(String),
    #[error("unknown vertex: {0}")]
    UnknownVertex(String),
    #[error("duplicate edge id: {0}")]
    DuplicateId(String),
    #[error("path breaks at position {0}: source not in the previous range")]
    NotComposable(usize),
    #[error("edge sequence is not a loop: starting source not in the final range")]
    NotALoop,
    #[error("a path must contain at least one edge")]
    EmptyPath,
    #[error("enumeration budget of {0} exceeded")]
    BudgetExceeded(u64),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid symbolic description: {0}")]
    InvalidSymbolic(String),
    #[error("window [..{0}] is too small for this description (needs at least {1})")]
    WindowTooSmall(i64, i64),
}

/// Index of a vertex within its ultragraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An edge: one source vertex, a nonempty finite range.
///
/// `infinite_range` marks edges of window resolutions whose true range is
/// cofinite; for honestly finite graphs it is always false.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub source: VertexId,
    pub range: BTreeSet<VertexId>,
    pub infinite_range: bool,
}

impl Edge {
    pub fn new(
        name: impl Into<String>,
        source: VertexId,
        range: impl IntoIterator<Item = VertexId>,
    ) -> Self {
        Edge {
            name: name.into(),
            source,
            range: range.into_iter().collect(),
            infinite_range: false,
        }
    }
}

/// A finite ultragraph.
///
/// The two truncation fields are populated only when the graph is a window
/// resolution of a symbolic description: `infinite_emitters` lists vertices
/// that source infinitely many edges in the full graph, and `deficient`
/// lists vertices whose in-window edge list is incomplete because some
/// instances fell outside the window.  Honest finite graphs leave both
/// empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ultragraph {
    names: Vec<String>,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
    infinite_emitters: BTreeSet<VertexId>,
    deficient: BTreeSet<VertexId>,
}

impl Ultragraph {
    pub fn new(names: Vec<String>, edges: Vec<Edge>) -> Result<Self, ModelError> {
        Self::with_truncation(names, edges, BTreeSet::new(), BTreeSet::new())
    }

    pub(crate) fn with_truncation(
        names: Vec<String>,
        edges: Vec<Edge>,
        infinite_emitters: BTreeSet<VertexId>,
        deficient: BTreeSet<VertexId>,
    ) -> Result<Self, ModelError> {
        let n = names.len();
        let mut seen = BTreeSet::new();
        for e in &edges {
            if !seen.insert(e.name.clone()) {
                return Err(ModelError::DuplicateId(e.name.clone()));
            }
            if e.range.is_empty() {
                return Err(ModelError::EmptyRange(e.name.clone()));
            }
            if e.source.index() >= n {
                return Err(ModelError::UnknownVertex(format!("source of {}", e.name)));
            }
            if let Some(v) = e.range.iter().find(|v| v.index() >= n) {
                return Err(ModelError::UnknownVertex(format!(
                    "range member #{} of {}",
                    v.0, e.name
                )));
            }
        }
        for v in infinite_emitters.iter().chain(deficient.iter()) {
            if v.index() >= n {
                return Err(ModelError::UnknownVertex(format!(
                    "flagged vertex #{}",
                    v.0
                )));
            }
        }
        let mut out = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            out[e.source.index()].push(i);
        }
        Ok(Ultragraph {
            names,
            edges,
            out,
            infinite_emitters,
            deficient,
        })
    }

    /// Convenience constructor with vertices named `v0..`.
    pub fn from_parts(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (String, u32, Vec<u32>)>,
    ) -> Result<Self, ModelError> {
        let names = (0..vertex_count).map(|i| format!("v{i}")).collect();
        let edges = edges
            .into_iter()
            .map(|(name, src, range)| {
                Edge::new(name, VertexId(src), range.into_iter().map(VertexId))
            })
            .collect();
        Self::new(names, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.names.len() as u32).map(VertexId)
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.index()]
    }

    pub fn vertex_named(&self, name: &str) -> Option<VertexId> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| VertexId(i as u32))
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, idx: usize) -> &Edge {
        &self.edges[idx]
    }

    pub fn edge_named(&self, name: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.name == name)
    }

    pub fn out_edges(&self, v: VertexId) -> &[usize] {
        &self.out[v.index()]
    }

    pub fn is_infinite_emitter(&self, v: VertexId) -> bool {
        self.infinite_emitters.contains(&v)
    }

    /// Vertices whose in-window edge list is known to be incomplete.
    pub fn is_deficient(&self, v: VertexId) -> bool {
        self.deficient.contains(&v)
    }

    pub fn is_sink(&self, v: VertexId) -> bool {
        self.out[v.index()].is_empty() && !self.is_infinite_emitter(v) && !self.is_deficient(v)
    }

    /// Regular means a positive finite edge supply.  Deficient vertices are
    /// excluded because their true supply is not fully visible.
    pub fn is_regular(&self, v: VertexId) -> bool {
        !self.out[v.index()].is_empty() && !self.is_infinite_emitter(v) && !self.is_deficient(v)
    }

    pub fn is_truncation(&self) -> bool {
        !self.infinite_emitters.is_empty() || !self.deficient.is_empty()
    }

    /// Sinks and infinite emitters.
    pub fn singular_vertices(&self) -> BTreeSet<VertexId> {
        self.vertex_ids()
            .filter(|&v| self.is_sink(v) || self.is_infinite_emitter(v))
            .collect()
    }

    pub fn all_vertices(&self) -> BTreeSet<VertexId> {
        self.vertex_ids().collect()
    }

    pub fn vertex_names(&self, vs: &BTreeSet<VertexId>) -> Vec<String> {
        vs.iter().map(|&v| self.name(v).to_string()).collect()
    }
}

/// A nonempty composable edge sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    edges: Vec<usize>,
}

// paths are nonempty by construction, so there is no is_empty
#[allow(clippy::len_without_is_empty)]
impl Path {
    pub fn new(g: &Ultragraph, edges: Vec<usize>) -> Result<Self, ModelError> {
        if edges.is_empty() {
            return Err(ModelError::EmptyPath);
        }
        for w in edges.windows(2) {
            let prev = g.edge(w[0]);
            let next = g.edge(w[1]);
            if !prev.range.contains(&next.source) {
                return Err(ModelError::NotComposable(edges.len()));
            }
        }
        Ok(Path { edges })
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn source(&self, g: &Ultragraph) -> VertexId {
        g.edge(self.edges[0]).source
    }

    /// The range of a path is the range of its final edge.
    pub fn range<'g>(&self, g: &'g Ultragraph) -> &'g BTreeSet<VertexId> {
        &g.edge(*self.edges.last().expect("paths are nonempty"))
            .range
    }

    pub fn edge_names(&self, g: &Ultragraph) -> Vec<String> {
        self.edges.iter().map(|&i| g.edge(i).name.clone()).collect()
    }
}

/// A path whose starting source lies in its final range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Loop {
    path: Path,
}

#[allow(clippy::len_without_is_empty)]
impl Loop {
    pub fn new(g: &Ultragraph, path: Path) -> Result<Self, ModelError> {
        if !path.range(g).contains(&path.source(g)) {
            return Err(ModelError::NotALoop);
        }
        Ok(Loop { path })
    }

    pub fn from_edges(g: &Ultragraph, edges: Vec<usize>) -> Result<Self, ModelError> {
        Loop::new(g, Path::new(g, edges)?)
    }

    pub fn from_edge_names(g: &Ultragraph, names: &[String]) -> Result<Self, ModelError> {
        let edges = names
            .iter()
            .map(|n| {
                g.edge_named(n)
                    .ok_or_else(|| ModelError::UnknownVertex(n.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Loop::from_edges(g, edges)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn edges(&self) -> &[usize] {
        self.path.edges()
    }

    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn edge_names(&self, g: &Ultragraph) -> Vec<String> {
        self.path.edge_names(g)
    }

    /// Sources visited by the loop, in loop order.
    pub fn sources(&self, g: &Ultragraph) -> Vec<VertexId> {
        self.path
            .edges()
            .iter()
            .map(|&i| g.edge(i).source)
            .collect()
    }
}

/// A finite or symbolic ultragraph, as parsed from an input document.
#[derive(Debug, Clone)]
pub enum Description {
    Finite(Ultragraph),
    Symbolic(SymbolicUltragraph),
}

impl Description {
    pub fn as_finite(&self) -> Option<&Ultragraph> {
        match self {
            Description::Finite(g) => Some(g),
            Description::Symbolic(_) => None,
        }
    }

    pub fn as_symbolic(&self) -> Option<&SymbolicUltragraph> {
        match self {
            Description::Symbolic(g) => Some(g),
            Description::Finite(_) => None,
        }
    }
}

/// Renames vertices of a finite graph by a permutation, used by the
/// relabeling-invariance tests.
pub fn relabel(g: &Ultragraph, perm: &[usize]) -> Result<Ultragraph, ModelError> {
    let n = g.vertex_count();
    if perm.len() != n || {
        let mut seen = vec![false; n];
        perm.iter()
            .any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
    } {
        return Err(ModelError::InvalidMatrix("not a permutation".into()));
    }
    let mut names = vec![String::new(); n];
    for (i, &p) in perm.iter().enumerate() {
        names[p] = g.name(VertexId(i as u32)).to_string();
    }
    let edges = g
        .edges()
        .iter()
        .map(|e| Edge {
            name: e.name.clone(),
            source: VertexId(perm[e.source.index()] as u32),
            range: e
                .range
                .iter()
                .map(|v| VertexId(perm[v.index()] as u32))
                .collect(),
            infinite_range: e.infinite_range,
        })
        .collect();
    Ultragraph::new(names, edges)
}

/// Structural signature modulo vertex/edge names: sorted list of
/// `(source, sorted range)` pairs keyed by vertex index.
pub fn structural_signature(g: &Ultragraph) -> (usize, Vec<(u32, Vec<u32>)>) {
    let mut sig: Vec<(u32, Vec<u32>)> = g
        .edges()
        .iter()
        .map(|e| (e.source.0, e.range.iter().map(|v| v.0).collect()))
        .collect();
    sig.sort();
    (g.vertex_count(), sig)
}

/// Vertices reachable from `v`: the reflexive forward closure of `v`
/// under "take any edge sourced here, land anywhere in its range".
pub fn forward_closure(g: &Ultragraph, v: VertexId) -> BTreeSet<VertexId> {
    let mut reach = BTreeSet::from_iter([v]);
    let mut queue = vec![v];
    while let Some(u) = queue.pop() {
        for &e in g.out_edges(u) {
            for &w in &g.edge(e).range {
                if reach.insert(w) {
                    queue.push(w);
                }
            }
        }
    }
    reach
}

/// The out-neighbour map of the source-transition digraph: `u -> w` when
/// some edge with source `u` has `w` in its range.  Arcs carry the witness
/// edge index.
pub(crate) fn source_digraph(g: &Ultragraph) -> Vec<Vec<(VertexId, usize)>> {
    let mut arcs: Vec<BTreeMap<VertexId, usize>> = vec![BTreeMap::new(); g.vertex_count()];
    for (i, e) in g.edges().iter().enumerate() {
        for &w in &e.range {
            arcs[e.source.index()].entry(w).or_insert(i);
        }
    }
    arcs.into_iter().map(|m| m.into_iter().collect()).collect()
}
