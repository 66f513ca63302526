//! Decision procedures on finite ultragraphs (including window
//! resolutions of symbolic ones, whose truncation flags are honored).

use std::collections::BTreeSet;

use crate::ideals::{hereditary_closure, saturate};
use crate::model::{forward_closure, source_digraph, Loop, Ultragraph, VertexId};

use super::ClassifyError;

/// An exit of a loop: an alternative edge leaving some range set, or a
/// sink inside some range set.  Positions are 0-based into the loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Exit {
    Edge { edge: usize, position: usize },
    Sink { vertex: VertexId, position: usize },
}

/// First exit of a loop among the materialized edges and true sinks.
pub fn loop_exit(g: &Ultragraph, l: &Loop) -> Option<Exit> {
    let edges = l.edges();
    for (i, &ei) in edges.iter().enumerate() {
        let next = edges[(i + 1) % edges.len()];
        for &v in &g.edge(ei).range {
            if g.is_sink(v) {
                return Some(Exit::Sink {
                    vertex: v,
                    position: i,
                });
            }
            for &f in g.out_edges(v) {
                if f != next {
                    return Some(Exit::Edge {
                        edge: f,
                        position: i,
                    });
                }
            }
        }
    }
    None
}

/// Exit check including truncation knowledge: an infinite emitter or a
/// deficient vertex in a range set guarantees an alternative edge in the
/// full graph even when it is not materialized in the window.
pub(crate) fn exit_exists(g: &Ultragraph, l: &Loop) -> bool {
    if loop_exit(g, l).is_some() {
        return true;
    }
    l.edges().iter().any(|&ei| {
        g.edge(ei)
            .range
            .iter()
            .any(|&v| g.is_infinite_emitter(v) || g.is_deficient(v))
    })
}

/// Least (by canonical loop order) first-return loop without an exit.
pub fn first_exitless_loop(g: &Ultragraph, budget: u64) -> Result<Option<Loop>, ClassifyError> {
    let loops = crate::model::find_loops(g, crate::model::LoopMode::FirstReturn, budget)?;
    Ok(loops.into_iter().find(|l| !exit_exists(g, l)))
}

/// Least loop in canonical order, if any.
pub fn first_loop(g: &Ultragraph, budget: u64) -> Result<Option<Loop>, ClassifyError> {
    let mut loops = crate::model::find_loops(g, crate::model::LoopMode::FirstReturn, budget)?;
    Ok(if loops.is_empty() {
        None
    } else {
        Some(loops.remove(0))
    })
}

/// Oracle: hunts for an exitless loop of length at most `max_len` by
/// following forced chains.  A loop without exits forces singleton range
/// sets and unique continuations, so the search is linear per starting
/// edge rather than an enumeration of all bounded loops.
pub fn exitless_loop_within(g: &Ultragraph, max_len: usize) -> Option<Vec<usize>> {
    'starts: for start in 0..g.edges().len() {
        let mut path = vec![start];
        loop {
            let cur = *path.last().expect("path is nonempty");
            let range = &g.edge(cur).range;
            let mut continuation: Option<usize> = None;
            for &v in range {
                if g.is_sink(v) || g.is_infinite_emitter(v) || g.is_deficient(v) {
                    continue 'starts; // a sink or unseen edges give an exit
                }
                for &f in g.out_edges(v) {
                    if continuation.replace(f).is_some() {
                        continue 'starts; // two departures: one is an exit
                    }
                }
            }
            let Some(f) = continuation else {
                continue 'starts;
            };
            if f == path[0] {
                return Some(path);
            }
            if path.contains(&f) || path.len() >= max_len {
                continue 'starts;
            }
            path.push(f);
        }
    }
    None
}

/// `w ≥ v`: reflexive, or some positive-length path from `w` contains `v`
/// in its range.
pub fn reaches(g: &Ultragraph, w: VertexId, v: VertexId) -> bool {
    forward_closure(g, w).contains(&v)
}

/// Strict variant: `v` must appear in the range of a positive-length path.
pub fn reaches_strictly(g: &Ultragraph, w: VertexId, v: VertexId) -> bool {
    let sources = forward_closure(g, w);
    g.edges()
        .iter()
        .any(|e| sources.contains(&e.source) && e.range.contains(&v))
}

/// `v → A` for finite `A`: every member of `A` is reached, so finitely
/// many path ranges cover it.
pub fn reaches_set(g: &Ultragraph, v: VertexId, a: &BTreeSet<VertexId>) -> bool {
    let reach = forward_closure(g, v);
    a.iter().all(|w| reach.contains(w))
}

/// A cofinality violation: a vertex `v` together with an infinite path
/// whose sources all avoid the reach of `v`.  The path is either a cycle
/// in the restricted source digraph or, in window resolutions, an escape
/// through a family whose instances continue beyond every window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CofinalityViolation {
    Cycle { vertex: VertexId, cycle: Vec<usize> },
    Escape { vertex: VertexId, via: VertexId },
}

/// Least cofinality violation, if any.  The graph fails to be cofinal
/// exactly when for some vertex `v` the source digraph restricted to the
/// complement of the reach of `v` still supports an infinite path.
pub fn cofinality_violation(g: &Ultragraph) -> Option<CofinalityViolation> {
    let arcs = source_digraph(g);
    for v in g.vertex_ids() {
        let reach = forward_closure(g, v);
        let allowed = |u: VertexId| !reach.contains(&u);
        if let Some(cycle) = restricted_cycle(g, &arcs, &allowed) {
            return Some(CofinalityViolation::Cycle { vertex: v, cycle });
        }
        if let Some(d) = g.vertex_ids().find(|&u| allowed(u) && g.is_deficient(u)) {
            return Some(CofinalityViolation::Escape { vertex: v, via: d });
        }
    }
    None
}

/// First cycle (as an edge list) of the source digraph restricted to the
/// allowed vertices, found by depth-first search.
fn restricted_cycle(
    g: &Ultragraph,
    arcs: &[Vec<(VertexId, usize)>],
    allowed: &dyn Fn(VertexId) -> bool,
) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    let mut color = vec![0u8; n];
    for root in g.vertex_ids() {
        if !allowed(root) || color[root.index()] != 0 {
            continue;
        }
        // stack of (vertex, arc cursor); trail of taken arcs
        let mut stack: Vec<(VertexId, usize)> = vec![(root, 0)];
        let mut trail: Vec<usize> = Vec::new();
        color[root.index()] = 1;
        while let Some(&mut (u, ref mut cursor)) = stack.last_mut() {
            let next = arcs[u.index()].get(*cursor).copied();
            *cursor += 1;
            match next {
                Some((w, e)) if allowed(w) => match color[w.index()] {
                    0 => {
                        color[w.index()] = 1;
                        stack.push((w, 0));
                        trail.push(e);
                    }
                    1 => {
                        // cycle: slice the trail from w's stack position
                        let pos = stack
                            .iter()
                            .position(|&(x, _)| x == w)
                            .expect("w is active");
                        let mut cycle: Vec<usize> = trail[pos..].to_vec();
                        cycle.push(e);
                        return Some(cycle);
                    }
                    _ => {}
                },
                Some(_) => {}
                None => {
                    color[u.index()] = 2;
                    stack.pop();
                    trail.pop();
                }
            }
        }
    }
    None
}

/// Oracle for cofinality: enumerates the source cycles of the graph
/// directly (every eventually-periodic infinite path is an approach walk
/// followed by such a cycle, and dropping the approach only shrinks the
/// source set, so pure cycles witness every violation) and asks whether
/// some vertex fails to reach all of a cycle's sources.
pub fn cofinality_oracle(g: &Ultragraph, budget: u64) -> Result<bool, ClassifyError> {
    let cycles = crate::model::find_loops(g, crate::model::LoopMode::FirstReturn, budget)?;
    for cycle in &cycles {
        let sources: BTreeSet<VertexId> = cycle.sources(g).into_iter().collect();
        for v in g.vertex_ids() {
            let reach = forward_closure(g, v);
            if sources.iter().all(|s| !reach.contains(s)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Vertices that occur as the source of some loop edge: exactly the
/// vertices lying on a cycle of the source digraph.
pub fn loop_source_vertices(g: &Ultragraph) -> BTreeSet<VertexId> {
    let arcs = source_digraph(g);
    g.vertex_ids()
        .filter(|&u| {
            arcs[u.index()]
                .iter()
                .any(|&(x, _)| forward_closure(g, x).contains(&u))
        })
        .collect()
}

/// True when a positive-length path from `v` hits a loop source.  A sink
/// sitting inside a loop's range does not connect.
pub fn connects_to_loop(g: &Ultragraph, v: VertexId) -> bool {
    let loop_sources = loop_source_vertices(g);
    let sources = forward_closure(g, v);
    g.edges()
        .iter()
        .any(|e| sources.contains(&e.source) && e.range.iter().any(|w| loop_sources.contains(w)))
}

/// Least vertex that does not connect to any loop.
pub fn unconnected_vertex(g: &Ultragraph) -> Option<VertexId> {
    let loop_sources = loop_source_vertices(g);
    if loop_sources.is_empty() {
        return g.vertex_ids().next();
    }
    g.vertex_ids().find(|&v| {
        let sources = forward_closure(g, v);
        !g.edges().iter().any(|e| {
            sources.contains(&e.source) && e.range.iter().any(|w| loop_sources.contains(w))
        })
    })
}

/// Least proper saturated hereditary support, phrased through the closure
/// pipeline: the lattice of saturated hereditary supports is trivial
/// exactly when every singleton saturates to the full vertex set.
pub fn lattice_violation(
    g: &Ultragraph,
) -> Result<Option<(VertexId, BTreeSet<VertexId>)>, ClassifyError> {
    let all = g.all_vertices();
    for v in g.vertex_ids() {
        let k = hereditary_closure(g, &BTreeSet::from_iter([v]));
        let closure = saturate(g, &k)?.closure;
        if closure != all {
            return Ok(Some((v, closure)));
        }
    }
    Ok(None)
}

/// A failed condition of the reachability characterization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReachViolation {
    ExitlessLoop(Vec<usize>),
    NotCofinal(CofinalityViolation),
    SingularUnreached {
        from: VertexId,
        to: VertexId,
    },
    /// An edge with infinite true range no cofinite part of which is
    /// coverable from `from` (window resolutions only).
    InfiniteRangeUncovered {
        edge: usize,
        from: VertexId,
    },
}

/// Reachability-based simplicity: condition (L), cofinality, every
/// singular vertex reached from everywhere, and every infinite-range edge
/// cofinitely coverable from everywhere.  Also reports whether the
/// singular-vertex condition is sensitive to reading reachability
/// strictly.
pub fn reach_violation(
    g: &Ultragraph,
    budget: u64,
) -> Result<(Option<ReachViolation>, bool), ClassifyError> {
    let sensitive = singular_condition_sensitivity(g);
    if let Some(l) = first_exitless_loop(g, budget)? {
        return Ok((
            Some(ReachViolation::ExitlessLoop(l.edges().to_vec())),
            sensitive,
        ));
    }
    if let Some(cv) = cofinality_violation(g) {
        return Ok((Some(ReachViolation::NotCofinal(cv)), sensitive));
    }
    let singular = g.singular_vertices();
    for from in g.vertex_ids() {
        for &to in &singular {
            if !reaches(g, from, to) {
                return Ok((
                    Some(ReachViolation::SingularUnreached { from, to }),
                    sensitive,
                ));
            }
        }
    }
    for (i, e) in g.edges().iter().enumerate() {
        if !e.infinite_range {
            continue;
        }
        for from in g.vertex_ids() {
            let sources = forward_closure(g, from);
            let covered = g
                .edges()
                .iter()
                .any(|f| f.infinite_range && sources.contains(&f.source));
            if !covered {
                return Ok((
                    Some(ReachViolation::InfiniteRangeUncovered { edge: i, from }),
                    sensitive,
                ));
            }
        }
    }
    Ok((None, sensitive))
}

/// Does the singular-vertex condition change when reachability is read
/// strictly (no zero-length paths)?
fn singular_condition_sensitivity(g: &Ultragraph) -> bool {
    let singular = g.singular_vertices();
    let reflexive = singular
        .iter()
        .all(|&to| g.vertex_ids().all(|from| reaches(g, from, to)));
    let strict = singular
        .iter()
        .all(|&to| g.vertex_ids().all(|from| reaches_strictly(g, from, to)));
    reflexive != strict
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ultragraph_from_matrix, DenseZeroOne, Ultragraph};

    fn full2() -> Ultragraph {
        ultragraph_from_matrix(&DenseZeroOne::from_ints(&[&[1, 1], &[1, 1]]).unwrap()).unwrap()
    }

    #[test]
    fn lone_self_loop_has_no_exit() {
        let g = Ultragraph::from_parts(1, [("e".to_string(), 0, vec![0])]).unwrap();
        let l = first_exitless_loop(&g, 10_000).unwrap().unwrap();
        assert_eq!(l.edges(), &[0]);
        assert_eq!(exitless_loop_within(&g, 2), Some(vec![0]));
    }

    #[test]
    fn full_matrix_satisfies_condition_l() {
        let g = full2();
        assert!(first_exitless_loop(&g, 10_000).unwrap().is_none());
        assert!(exitless_loop_within(&g, 4).is_none());
    }

    #[test]
    fn sink_in_range_is_an_exit() {
        // e : v -> {v, w}; the loop (e) exits through the sink w
        let g = Ultragraph::from_parts(2, [("e".to_string(), 0, vec![0, 1])]).unwrap();
        assert!(first_exitless_loop(&g, 10_000).unwrap().is_none());
        let l = Loop::from_edges(&g, vec![0]).unwrap();
        assert_eq!(
            loop_exit(&g, &l),
            Some(Exit::Sink {
                vertex: VertexId(1),
                position: 0
            })
        );
    }

    #[test]
    fn reach_is_reflexive() {
        let g = Ultragraph::from_parts(2, [("e".to_string(), 0, vec![1])]).unwrap();
        assert!(reaches(&g, VertexId(1), VertexId(1)));
        assert!(reaches(&g, VertexId(0), VertexId(1)));
        assert!(!reaches(&g, VertexId(1), VertexId(0)));
        assert!(!reaches_strictly(&g, VertexId(1), VertexId(1)));
    }

    #[test]
    fn reaches_set_examples() {
        let g = full2();
        let all = g.all_vertices();
        assert!(reaches_set(&g, VertexId(0), &all));
        assert!(reaches_set(&g, VertexId(0), &BTreeSet::new()));
    }

    #[test]
    fn cofinality() {
        let loop1 = Ultragraph::from_parts(1, [("e".to_string(), 0, vec![0])]).unwrap();
        assert_eq!(cofinality_violation(&loop1), None);
        assert!(cofinality_oracle(&loop1, 10_000).unwrap());

        let two_loops = Ultragraph::from_parts(
            2,
            [("a".to_string(), 0, vec![0]), ("b".to_string(), 1, vec![1])],
        )
        .unwrap();
        let cv = cofinality_violation(&two_loops).unwrap();
        assert_eq!(
            cv,
            CofinalityViolation::Cycle {
                vertex: VertexId(0),
                cycle: vec![1]
            }
        );
        assert!(!cofinality_oracle(&two_loops, 10_000).unwrap());
    }

    #[test]
    fn connectivity_to_loops() {
        let g = Ultragraph::from_parts(1, [("e".to_string(), 0, vec![0])]).unwrap();
        assert!(connects_to_loop(&g, VertexId(0)));

        // sink on a loop does not connect
        let h = Ultragraph::from_parts(2, [("e".to_string(), 0, vec![0, 1])]).unwrap();
        assert!(connects_to_loop(&h, VertexId(0)));
        assert!(!connects_to_loop(&h, VertexId(1)));
        assert_eq!(unconnected_vertex(&h), Some(VertexId(1)));

        let sink = Ultragraph::from_parts(2, [("e".to_string(), 0, vec![1])]).unwrap();
        assert!(!connects_to_loop(&sink, VertexId(0)));
        assert!(!connects_to_loop(&sink, VertexId(1)));
    }

    #[test]
    fn lattice_violation_examples() {
        assert_eq!(lattice_violation(&full2()).unwrap(), None);
        let two_sinks = Ultragraph::from_parts(
            3,
            [("a".to_string(), 0, vec![1]), ("b".to_string(), 0, vec![2])],
        )
        .unwrap();
        let (seed, k) = lattice_violation(&two_sinks).unwrap().unwrap();
        assert_eq!(seed, VertexId(1));
        assert_eq!(k, BTreeSet::from_iter([VertexId(1)]));
    }

    #[test]
    fn reach_violation_two_sinks() {
        let two_sinks = Ultragraph::from_parts(
            3,
            [("a".to_string(), 0, vec![1]), ("b".to_string(), 0, vec![2])],
        )
        .unwrap();
        let (violation, _) = reach_violation(&two_sinks, 10_000).unwrap();
        assert_eq!(
            violation,
            Some(ReachViolation::SingularUnreached {
                from: VertexId(1),
                to: VertexId(2)
            })
        );
    }

    #[test]
    fn single_edge_is_sensitive_to_strict_reading() {
        let g = Ultragraph::from_parts(2, [("e".to_string(), 0, vec![1])]).unwrap();
        let (violation, sensitive) = reach_violation(&g, 10_000).unwrap();
        assert_eq!(violation, None);
        assert!(sensitive);
    }
}
