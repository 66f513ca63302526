//! Matrix bridges: the ultragraph of a {0,1} matrix, the ordinary graph of
//! a {0,1} matrix, and the edge matrix of a finite ultragraph.
//!
//! For a square matrix `A` over `{0,1}` there are two associated objects:
//! the ultragraph with one vertex and one edge per index, where edge `i`
//! runs from `v_i` to `{v_j : A(i,j) = 1}` (so the edge matrix of that
//! ultragraph is `A` again), and the ordinary directed graph with one edge
//! per nonzero entry.  Both constructions also exist for symbolic
//! (eventually-affine infinite) matrices.

use std::collections::BTreeSet;

use super::symbolic::{EdgeFamily, SymRange, SymRef, SymVertex, SymbolicUltragraph, TailSpec};
use super::{Edge, ModelError, Ultragraph, VertexId};
use crate::setalg::{Polarity, VertexSet};

/// A finite square matrix over {0,1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseZeroOne {
    rows: Vec<Vec<bool>>,
}

impl DenseZeroOne {
    pub fn new(rows: Vec<Vec<bool>>) -> Result<Self, ModelError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(ModelError::InvalidMatrix("matrix is not square".into()));
        }
        Ok(DenseZeroOne { rows })
    }

    pub fn from_ints(rows: &[&[u8]]) -> Result<Self, ModelError> {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&x| match x {
                        0 => Ok(false),
                        1 => Ok(true),
                        other => Err(ModelError::InvalidMatrix(format!(
                            "entry {other} is not 0/1"
                        ))),
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(rows)
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }
}

/// One vertex and one edge per matrix index; rejects all-zero rows, which
/// would produce an empty range.
pub fn ultragraph_from_matrix(a: &DenseZeroOne) -> Result<Ultragraph, ModelError> {
    let n = a.size();
    let names = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::with_capacity(n);
    for i in 0..n {
        let range: BTreeSet<VertexId> = (0..n)
            .filter(|&j| a.get(i, j))
            .map(|j| VertexId(j as u32))
            .collect();
        if range.is_empty() {
            return Err(ModelError::EmptyRange(format!("e{i}")));
        }
        edges.push(Edge {
            name: format!("e{i}"),
            source: VertexId(i as u32),
            range,
            infinite_range: false,
        });
    }
    Ultragraph::new(names, edges)
}

/// The ordinary directed graph of a matrix, encoded as an ultragraph with
/// singleton ranges; all-zero rows simply produce sinks.
pub fn graph_from_matrix(a: &DenseZeroOne) -> Ultragraph {
    let n = a.size();
    let names = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if a.get(i, j) {
                edges.push(Edge {
                    name: format!("e{i}_{j}"),
                    source: VertexId(i as u32),
                    range: BTreeSet::from_iter([VertexId(j as u32)]),
                    infinite_range: false,
                });
            }
        }
    }
    Ultragraph::new(names, edges).expect("singleton ranges are always valid")
}

/// The edge matrix of a finite ultragraph: `A(e,f) = 1` iff `s(f) ∈ r(e)`.
pub fn edge_matrix(g: &Ultragraph) -> DenseZeroOne {
    let m = g.edges().len();
    let rows = (0..m)
        .map(|e| {
            (0..m)
                .map(|f| g.edge(e).range.contains(&g.edge(f).source))
                .collect()
        })
        .collect();
    DenseZeroOne::new(rows).expect("square by construction")
}

/// A symbolic {0,1} matrix over the index set `first_index, first_index+1, …`.
///
/// Rows below `tail_start` are given explicitly as finite-or-cofinite
/// column sets; every row `n ≥ tail_start` has ones exactly at the columns
/// `n + d` for the tail offsets `d` plus the fixed columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicZeroOne {
    pub first_index: i64,
    pub tail_start: i64,
    /// One column set per index in `first_index..tail_start`, absolute indices.
    pub prefix: Vec<VertexSet<i64>>,
    pub tail_offsets: BTreeSet<i64>,
    /// Absolute fixed columns of every tail row.
    pub tail_fixed: BTreeSet<i64>,
}

impl SymbolicZeroOne {
    pub fn new(
        first_index: i64,
        tail_start: i64,
        prefix: Vec<VertexSet<i64>>,
        tail_offsets: BTreeSet<i64>,
        tail_fixed: BTreeSet<i64>,
    ) -> Result<Self, ModelError> {
        if tail_start < first_index {
            return Err(ModelError::InvalidMatrix(
                "tail starts before the first index".into(),
            ));
        }
        if prefix.len() as i64 != tail_start - first_index {
            return Err(ModelError::InvalidMatrix(format!(
                "expected {} explicit rows, got {}",
                tail_start - first_index,
                prefix.len()
            )));
        }
        let m = SymbolicZeroOne {
            first_index,
            tail_start,
            prefix,
            tail_offsets,
            tail_fixed,
        };
        for set in &m.prefix {
            if set.support().iter().any(|&c| c < first_index) {
                return Err(ModelError::InvalidMatrix(
                    "column below the first index".into(),
                ));
            }
        }
        if m.tail_offsets.iter().any(|&d| tail_start + d < first_index) {
            return Err(ModelError::InvalidMatrix(
                "a tail offset reaches below the first index".into(),
            ));
        }
        if m.tail_fixed.iter().any(|&c| c < first_index) {
            return Err(ModelError::InvalidMatrix(
                "fixed column below the first index".into(),
            ));
        }
        Ok(m)
    }

    /// Largest absolute offset used by tail rows; truncated kernels are
    /// restricted to coordinates clear of this reach.
    pub fn max_offset_reach(&self) -> usize {
        self.tail_offsets
            .iter()
            .map(|d| d.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Smallest truncation size that contains the whole explicit block.
    pub fn min_truncation(&self) -> usize {
        let prefix = (self.tail_start - self.first_index) as usize;
        let support = self
            .prefix
            .iter()
            .flat_map(|s| s.support().iter())
            .chain(self.tail_fixed.iter())
            .map(|&c| (c - self.first_index + 1) as usize)
            .max()
            .unwrap_or(0);
        prefix.max(support).max(1) + self.max_offset_reach()
    }

    /// The leading `n × n` corner as a dense matrix.
    pub fn truncate(&self, n: usize) -> Result<DenseZeroOne, ModelError> {
        if n < self.min_truncation() {
            return Err(ModelError::WindowTooSmall(
                self.first_index + n as i64 - 1,
                self.first_index + self.min_truncation() as i64 - 1,
            ));
        }
        let mut rows = vec![vec![false; n]; n];
        for (p, set) in self.prefix.iter().enumerate() {
            for (j, cell) in rows[p].iter_mut().enumerate() {
                *cell = set.contains(&(self.first_index + j as i64));
            }
        }
        let prefix = self.prefix.len();
        for (p, row) in rows.iter_mut().enumerate().skip(prefix) {
            let idx = self.first_index + p as i64;
            for &d in &self.tail_offsets {
                let col = idx + d - self.first_index;
                if (0..n as i64).contains(&col) {
                    row[col as usize] = true;
                }
            }
            for &c in &self.tail_fixed {
                let col = c - self.first_index;
                if (0..n as i64).contains(&col) {
                    row[col as usize] = true;
                }
            }
        }
        DenseZeroOne::new(rows)
    }

    fn vertex_of_index(&self, idx: i64) -> SymVertex {
        if idx >= self.tail_start {
            SymVertex::Tail(idx)
        } else {
            SymVertex::Named((idx - self.first_index) as usize)
        }
    }

    fn symbolic_set(&self, set: &VertexSet<i64>) -> VertexSet<SymVertex> {
        let mapped = set.support().iter().map(|&c| self.vertex_of_index(c));
        match set.polarity() {
            Polarity::Finite => VertexSet::finite(mapped),
            Polarity::Cofinite => VertexSet::cofinite(mapped),
        }
    }

    fn named_vertices(&self) -> Vec<String> {
        (self.first_index..self.tail_start)
            .map(|i| format!("v{i}"))
            .collect()
    }
}

/// The symbolic ultragraph with one vertex and one edge per index.
pub fn ultragraph_from_symbolic_matrix(
    a: &SymbolicZeroOne,
) -> Result<SymbolicUltragraph, ModelError> {
    let mut concrete = Vec::new();
    for (p, set) in a.prefix.iter().enumerate() {
        if set.is_empty() {
            return Err(ModelError::EmptyRange(format!(
                "e{}",
                a.first_index + p as i64
            )));
        }
        concrete.push((
            format!("e{}", a.first_index + p as i64),
            SymVertex::Named(p),
            a.symbolic_set(set),
        ));
    }
    let mut families = Vec::new();
    if a.tail_offsets.is_empty() && a.tail_fixed.is_empty() {
        return Err(ModelError::EmptyRange("tail rows".into()));
    }
    let range: Vec<SymRef> = a
        .tail_offsets
        .iter()
        .map(|&d| SymRef::Offset(d))
        .chain(
            a.tail_fixed
                .iter()
                .map(|&c| SymRef::Fixed(a.vertex_of_index(c))),
        )
        .collect();
    families.push(EdgeFamily {
        name: "e".into(),
        start: a.tail_start,
        skip: BTreeSet::new(),
        source: SymRef::Offset(0),
        range: SymRange::Finite(range),
    });
    SymbolicUltragraph::new(
        a.named_vertices(),
        TailSpec {
            prefix: "v".into(),
            start: a.tail_start,
        },
        concrete,
        families,
    )
}

/// The symbolic ordinary graph: one singleton-range edge per nonzero
/// entry.  Cofinite rows become edge families with a fixed source, making
/// their source an infinite emitter.
pub fn graph_from_symbolic_matrix(a: &SymbolicZeroOne) -> Result<SymbolicUltragraph, ModelError> {
    let mut concrete = Vec::new();
    let mut families = Vec::new();
    for (p, set) in a.prefix.iter().enumerate() {
        let row = a.first_index + p as i64;
        match set.polarity() {
            Polarity::Finite => {
                for &c in set.support() {
                    concrete.push((
                        format!("e{row}_{c}"),
                        SymVertex::Named(p),
                        VertexSet::singleton(a.vertex_of_index(c)),
                    ));
                }
            }
            Polarity::Cofinite => {
                for idx in a.first_index..a.tail_start {
                    if set.contains(&idx) {
                        concrete.push((
                            format!("e{row}_{idx}"),
                            SymVertex::Named(p),
                            VertexSet::singleton(a.vertex_of_index(idx)),
                        ));
                    }
                }
                let skip: BTreeSet<i64> = set
                    .support()
                    .iter()
                    .copied()
                    .filter(|&c| c >= a.tail_start)
                    .collect();
                families.push(EdgeFamily {
                    name: format!("e{row}x"),
                    start: a.tail_start,
                    skip,
                    source: SymRef::Fixed(SymVertex::Named(p)),
                    range: SymRange::Finite(vec![SymRef::Offset(0)]),
                });
            }
        }
    }
    for &d in &a.tail_offsets {
        let name = if d < 0 {
            format!("em{}", -d)
        } else {
            format!("ep{d}")
        };
        families.push(EdgeFamily {
            name,
            start: a.tail_start,
            skip: BTreeSet::new(),
            source: SymRef::Offset(0),
            range: SymRange::Finite(vec![SymRef::Offset(d)]),
        });
    }
    for &c in &a.tail_fixed {
        families.push(EdgeFamily {
            name: format!("ef{c}"),
            start: a.tail_start,
            skip: BTreeSet::new(),
            source: SymRef::Offset(0),
            range: SymRange::Finite(vec![SymRef::Fixed(a.vertex_of_index(c))]),
        });
    }
    SymbolicUltragraph::new(
        a.named_vertices(),
        TailSpec {
            prefix: "v".into(),
            start: a.tail_start,
        },
        concrete,
        families,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::structural_signature;

    #[test]
    fn full_two_by_two() {
        let a = DenseZeroOne::from_ints(&[&[1, 1], &[1, 1]]).unwrap();
        let g = ultragraph_from_matrix(&a).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edges().len(), 2);
        assert_eq!(
            g.edge(0).range,
            BTreeSet::from_iter([VertexId(0), VertexId(1)])
        );
        assert_eq!(edge_matrix(&g), a);

        let gr = graph_from_matrix(&a);
        assert_eq!(gr.edges().len(), 4);
        assert!(gr.edges().iter().all(|e| e.range.len() == 1));
    }

    #[test]
    fn identity_one_by_one() {
        let a = DenseZeroOne::from_ints(&[&[1]]).unwrap();
        let g = ultragraph_from_matrix(&a).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge(0).range, BTreeSet::from_iter([VertexId(0)]));
    }

    #[test]
    fn zero_row_is_rejected_for_ultragraphs_but_not_graphs() {
        let a = DenseZeroOne::from_ints(&[&[0, 1], &[0, 0]]).unwrap();
        assert_eq!(
            ultragraph_from_matrix(&a).unwrap_err(),
            ModelError::EmptyRange("e1".into())
        );
        let gr = graph_from_matrix(&a);
        assert_eq!(gr.edges().len(), 1);
        assert!(gr.is_sink(VertexId(1)));
    }

    #[test]
    fn edge_matrix_of_a_sink_edge() {
        let g = Ultragraph::from_parts(2, [("e".to_string(), 0, vec![1])]).unwrap();
        assert_eq!(edge_matrix(&g), DenseZeroOne::from_ints(&[&[0]]).unwrap());
    }

    #[test]
    fn roundtrip_matches_on_no_zero_row_matrices() {
        // every 3x3 {0,1} matrix with no zero rows
        for bits in 0u32..(1 << 9) {
            let rows: Vec<Vec<bool>> = (0..3)
                .map(|i| (0..3).map(|j| bits & (1 << (3 * i + j)) != 0).collect())
                .collect();
            if rows.iter().any(|r| r.iter().all(|&b| !b)) {
                continue;
            }
            let a = DenseZeroOne::new(rows).unwrap();
            let g = ultragraph_from_matrix(&a).unwrap();
            assert_eq!(edge_matrix(&g), a);
        }
    }

    #[test]
    fn constructions_agree_exactly_on_permutation_rows() {
        for n in 2usize..=3 {
            for bits in 0u32..(1 << (n * n)) {
                let rows: Vec<Vec<bool>> = (0..n)
                    .map(|i| (0..n).map(|j| bits & (1 << (n * i + j)) != 0).collect())
                    .collect();
                if rows.iter().any(|r| r.iter().all(|&b| !b)) {
                    continue;
                }
                let a = DenseZeroOne::new(rows).unwrap();
                let ug = ultragraph_from_matrix(&a).unwrap();
                let gr = graph_from_matrix(&a);
                let every_row_single = a
                    .rows()
                    .iter()
                    .all(|r| r.iter().filter(|&&b| b).count() == 1);
                assert_eq!(
                    structural_signature(&ug) == structural_signature(&gr),
                    every_row_single
                );
            }
        }
    }

    #[test]
    fn symbolic_truncation() {
        // explicit rows ~{0} and ~{0,1}; tail rows have a single one at n-1
        let m = SymbolicZeroOne::new(
            0,
            2,
            vec![VertexSet::cofinite([0]), VertexSet::cofinite([0, 1])],
            BTreeSet::from_iter([-1]),
            BTreeSet::new(),
        )
        .unwrap();
        let d = m.truncate(5).unwrap();
        assert_eq!(d.size(), 5);
        assert!(!d.get(0, 0) && d.get(0, 1) && d.get(0, 4));
        assert!(!d.get(1, 1) && d.get(1, 2));
        assert!(d.get(3, 2) && !d.get(3, 3));
    }
}
