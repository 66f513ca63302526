//! Shared fixtures for the integration suites.

use std::collections::BTreeSet;

use ultragraph::model::symbolic::{EdgeFamily, SymRange, SymRef, SymVertex, TailSpec};
use ultragraph::model::{SymbolicUltragraph, SymbolicZeroOne};
use ultragraph::setalg::VertexSet;

/// Named v0, v1 with a tail from 2: `e : v1 -> ~{v0,v1}`,
/// `f : v0 -> ~{v0}`, `g[n] : v[n+1] -> {v[n]}`.
pub fn descending_chain() -> SymbolicUltragraph {
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

/// The edge matrix of the descending chain: rows `~{0}`, `~{0,1}`, then
/// one entry at `n-1` per tail row.
pub fn chain_matrix() -> SymbolicZeroOne {
    SymbolicZeroOne::new(
        0,
        2,
        vec![VertexSet::cofinite([0]), VertexSet::cofinite([0, 1])],
        BTreeSet::from_iter([-1]),
        BTreeSet::new(),
    )
    .unwrap()
}

/// Three cofinite block rows over a shift-by-three tail, indices from 1.
pub fn shift_by_three_matrix() -> SymbolicZeroOne {
    SymbolicZeroOne::new(
        1,
        4,
        vec![
            VertexSet::cofinite([2, 3]),
            VertexSet::cofinite([1, 3]),
            VertexSet::cofinite([1, 2]),
        ],
        BTreeSet::from_iter([-3, 0]),
        BTreeSet::new(),
    )
    .unwrap()
}

/// The shift-by-three ultragraph extended by one vertex `w` that emits
/// infinitely many edges onto everything else.
pub fn augmented_shift() -> SymbolicUltragraph {
    let w = SymVertex::Named(0);
    let v = |i: usize| SymVertex::Named(i);
    SymbolicUltragraph::new(
        vec!["w".into(), "v1".into(), "v2".into(), "v3".into()],
        TailSpec {
            prefix: "v".into(),
            start: 4,
        },
        vec![
            ("a1".into(), v(1), VertexSet::cofinite([w, v(2), v(3)])),
            ("a2".into(), v(2), VertexSet::cofinite([w, v(1), v(3)])),
            ("a3".into(), v(3), VertexSet::cofinite([w, v(1), v(2)])),
        ],
        vec![
            EdgeFamily {
                name: "g".into(),
                start: 4,
                skip: BTreeSet::new(),
                source: SymRef::Offset(0),
                range: SymRange::Finite(vec![SymRef::Offset(-3), SymRef::Offset(0)]),
            },
            EdgeFamily {
                name: "h".into(),
                start: 1,
                skip: BTreeSet::new(),
                source: SymRef::Fixed(w),
                range: SymRange::Cofinite(vec![SymRef::Fixed(w)]),
            },
        ],
    )
    .unwrap()
}
