//! Loop enumeration.

use std::collections::BTreeSet;

use super::{Loop, ModelError, Path, Ultragraph, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoopMode {
    /// Loops whose edge sources are pairwise distinct.  Every loop contains
    /// one of these, so they suffice for exit checking; this is the default.
    FirstReturn,
    /// All loops of length at most the bound, sources may repeat.  Oracle
    /// mode for validating the first-return reduction.
    Bounded(usize),
}

/// Enumerates loops in canonical order: by length, then lexicographically
/// by edge index sequence.  Rotations of a loop are distinct values.  Every
/// returned value is re-validated against the loop predicate.
pub fn find_loops(g: &Ultragraph, mode: LoopMode, budget: u64) -> Result<Vec<Loop>, ModelError> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut visited_nodes: u64 = 0;
    for start in 0..g.edges().len() {
        let mut stack = vec![start];
        let mut sources: BTreeSet<VertexId> = BTreeSet::from_iter([g.edge(start).source]);
        dfs(
            g,
            mode,
            budget,
            &mut visited_nodes,
            &mut stack,
            &mut sources,
            &mut out,
        )?;
    }
    out.sort_by(|a, b| (a.len(), a.as_slice()).cmp(&(b.len(), b.as_slice())));
    out.into_iter()
        .map(|edges| {
            let l = Loop::new(g, Path::new(g, edges)?)?;
            Ok(l)
        })
        .collect()
}

fn dfs(
    g: &Ultragraph,
    mode: LoopMode,
    budget: u64,
    visited: &mut u64,
    stack: &mut Vec<usize>,
    sources: &mut BTreeSet<VertexId>,
    out: &mut Vec<Vec<usize>>,
) -> Result<(), ModelError> {
    *visited += 1;
    if *visited > budget {
        return Err(ModelError::BudgetExceeded(budget));
    }
    let last = *stack.last().expect("stack is nonempty");
    let first_source = g.edge(stack[0]).source;
    if g.edge(last).range.contains(&first_source) {
        out.push(stack.clone());
    }
    let deep_enough = match mode {
        LoopMode::FirstReturn => stack.len() >= g.vertex_count(),
        LoopMode::Bounded(max) => stack.len() >= max,
    };
    if deep_enough {
        return Ok(());
    }
    for next in 0..g.edges().len() {
        let src = g.edge(next).source;
        if !g.edge(last).range.contains(&src) {
            continue;
        }
        if mode == LoopMode::FirstReturn && sources.contains(&src) {
            continue;
        }
        stack.push(next);
        let inserted = sources.insert(src);
        dfs(g, mode, budget, visited, stack, sources, out)?;
        stack.pop();
        if inserted {
            sources.remove(&src);
        }
    }
    Ok(())
}

/// True when the graph contains any loop at all (equivalently, a
/// first-return loop).
pub fn has_loop(g: &Ultragraph) -> bool {
    // cycle in the source-transition digraph
    let arcs = super::source_digraph(g);
    let n = g.vertex_count();
    let mut color = vec![0u8; n]; // 0 unseen, 1 active, 2 done
    for root in 0..n {
        if color[root] != 0 {
            continue;
        }
        // iterative dfs with explicit arc cursors
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        color[root] = 1;
        while let Some(&mut (v, ref mut cursor)) = stack.last_mut() {
            if *cursor < arcs[v].len() {
                let (w, _) = arcs[v][*cursor];
                *cursor += 1;
                match color[w.index()] {
                    0 => {
                        color[w.index()] = 1;
                        stack.push((w.index(), 0));
                    }
                    1 => return true,
                    _ => {}
                }
            } else {
                color[v] = 2;
                stack.pop();
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ultragraph_from_matrix, DenseZeroOne};

    #[test]
    fn self_loop() {
        let g = Ultragraph::from_parts(1, [("e".to_string(), 0, vec![0])]).unwrap();
        let loops = find_loops(&g, LoopMode::FirstReturn, 10_000).unwrap();
        assert_eq!(loops.len(), 1);
        assert_eq!(loops[0].edges(), &[0]);
        assert!(has_loop(&g));
    }

    #[test]
    fn sink_edge_has_no_loops() {
        let g = Ultragraph::from_parts(2, [("e".to_string(), 0, vec![1])]).unwrap();
        assert!(find_loops(&g, LoopMode::FirstReturn, 10_000)
            .unwrap()
            .is_empty());
        assert!(!has_loop(&g));
    }

    #[test]
    fn full_two_by_two_first_return() {
        let a = DenseZeroOne::from_ints(&[&[1, 1], &[1, 1]]).unwrap();
        let g = ultragraph_from_matrix(&a).unwrap();
        let loops = find_loops(&g, LoopMode::FirstReturn, 10_000).unwrap();
        let seqs: Vec<&[usize]> = loops.iter().map(|l| l.edges()).collect();
        assert_eq!(seqs, vec![&[0][..], &[1][..], &[0, 1][..], &[1, 0][..]]);
    }

    #[test]
    fn bounded_mode_contains_repeats() {
        let a = DenseZeroOne::from_ints(&[&[1]]).unwrap();
        let g = ultragraph_from_matrix(&a).unwrap();
        let loops = find_loops(&g, LoopMode::Bounded(3), 10_000).unwrap();
        assert_eq!(loops.len(), 3); // e, ee, eee
    }

    #[test]
    fn budget_is_enforced() {
        let a = DenseZeroOne::from_ints(&[&[1, 1], &[1, 1]]).unwrap();
        let g = ultragraph_from_matrix(&a).unwrap();
        assert!(matches!(
            find_loops(&g, LoopMode::Bounded(30), 100),
            Err(ModelError::BudgetExceeded(100))
        ));
    }
}
