//! The collection of vertex sets generated by singletons and edge ranges
//! under finite unions and intersections.
//!
//! Each element carries a decomposition
//! `⋃_i ⋂_{e ∈ X_i} r(e) ∪ F` with `F` a finite vertex set disjoint from
//! the range part; decompositions compose under union and intersection, so
//! the closure computation tracks them alongside the values.

use std::collections::{BTreeMap, BTreeSet};

use super::SetAlgError;
use crate::model::{Ultragraph, VertexId};

/// An element of the generated collection together with one valid
/// decomposition into range intersections and a disjoint finite part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeElement {
    value: BTreeSet<VertexId>,
    /// Each term is a nonempty finite set of edge indices `X`; the term
    /// denotes `⋂_{e ∈ X} r(e)`.
    terms: Vec<BTreeSet<usize>>,
    fixed: BTreeSet<VertexId>,
}

impl LatticeElement {
    pub fn value(&self) -> &BTreeSet<VertexId> {
        &self.value
    }

    pub fn terms(&self) -> &[BTreeSet<usize>] {
        &self.terms
    }

    pub fn fixed(&self) -> &BTreeSet<VertexId> {
        &self.fixed
    }

    fn range_part(&self, g: &Ultragraph) -> BTreeSet<VertexId> {
        let mut acc = BTreeSet::new();
        for term in &self.terms {
            let mut inter: Option<BTreeSet<VertexId>> = None;
            for &e in term {
                let r = &g.edge(e).range;
                inter = Some(match inter {
                    None => r.clone(),
                    Some(i) => i.intersection(r).cloned().collect(),
                });
            }
            if let Some(i) = inter {
                acc.extend(i);
            }
        }
        acc
    }

    /// Re-evaluates the decomposition and checks the disjointness of the
    /// finite part.
    pub fn verify(&self, g: &Ultragraph) -> bool {
        let ranges = self.range_part(g);
        if !self.fixed.is_disjoint(&ranges) {
            return false;
        }
        let rebuilt: BTreeSet<VertexId> = ranges.union(&self.fixed).cloned().collect();
        rebuilt == self.value
    }
}

fn union_elem(a: &LatticeElement, b: &LatticeElement, g: &Ultragraph) -> LatticeElement {
    let value: BTreeSet<VertexId> = a.value.union(&b.value).cloned().collect();
    let mut terms = a.terms.clone();
    for t in &b.terms {
        if !terms.contains(t) {
            terms.push(t.clone());
        }
    }
    let mut elem = LatticeElement {
        value,
        terms,
        fixed: BTreeSet::new(),
    };
    let ranges = elem.range_part(g);
    elem.fixed = elem.value.difference(&ranges).cloned().collect();
    elem
}

fn intersect_elem(a: &LatticeElement, b: &LatticeElement, g: &Ultragraph) -> LatticeElement {
    let value: BTreeSet<VertexId> = a.value.intersection(&b.value).cloned().collect();
    // cross the range terms; the finite leftovers land in `fixed`
    let mut terms: Vec<BTreeSet<usize>> = Vec::new();
    for ta in &a.terms {
        for tb in &b.terms {
            let merged: BTreeSet<usize> = ta.union(tb).cloned().collect();
            if !terms.contains(&merged) {
                terms.push(merged);
            }
        }
    }
    let mut elem = LatticeElement {
        value,
        terms,
        fixed: BTreeSet::new(),
    };
    let ranges = elem.range_part(g);
    // terms may overshoot the intersection value; keep only covered ones
    if !ranges.is_subset(&elem.value) {
        elem.terms.retain(|t| {
            let keep = LatticeElement {
                value: BTreeSet::new(),
                terms: vec![t.clone()],
                fixed: BTreeSet::new(),
            };
            keep.range_part(g).is_subset(&elem.value)
        });
    }
    let ranges = elem.range_part(g);
    elem.fixed = elem.value.difference(&ranges).cloned().collect();
    elem
}

/// Generates the full collection as the closure of singletons and edge
/// ranges under pairwise union and intersection.  The empty set is always
/// included as the degenerate element.  Errors out when the collection
/// would exceed `max_elements`.
pub fn generate_lattice(
    g: &Ultragraph,
    max_elements: u64,
) -> Result<Vec<LatticeElement>, SetAlgError> {
    let mut by_value: BTreeMap<BTreeSet<VertexId>, LatticeElement> = BTreeMap::new();
    let mut queue: Vec<LatticeElement> = Vec::new();

    let push = |elem: LatticeElement,
                by_value: &mut BTreeMap<BTreeSet<VertexId>, LatticeElement>,
                queue: &mut Vec<LatticeElement>|
     -> Result<(), SetAlgError> {
        if !by_value.contains_key(&elem.value) {
            if by_value.len() as u64 >= max_elements {
                return Err(SetAlgError::BudgetExceeded(max_elements));
            }
            by_value.insert(elem.value.clone(), elem.clone());
            queue.push(elem);
        }
        Ok(())
    };

    push(
        LatticeElement {
            value: BTreeSet::new(),
            terms: Vec::new(),
            fixed: BTreeSet::new(),
        },
        &mut by_value,
        &mut queue,
    )?;
    for v in g.vertex_ids() {
        push(
            LatticeElement {
                value: BTreeSet::from_iter([v]),
                terms: Vec::new(),
                fixed: BTreeSet::from_iter([v]),
            },
            &mut by_value,
            &mut queue,
        )?;
    }
    for (i, e) in g.edges().iter().enumerate() {
        push(
            LatticeElement {
                value: e.range.clone(),
                terms: vec![BTreeSet::from_iter([i])],
                fixed: BTreeSet::new(),
            },
            &mut by_value,
            &mut queue,
        )?;
    }

    while let Some(elem) = queue.pop() {
        let snapshot: Vec<LatticeElement> = by_value.values().cloned().collect();
        for other in &snapshot {
            let u = union_elem(&elem, other, g);
            push(u, &mut by_value, &mut queue)?;
            let i = intersect_elem(&elem, other, g);
            push(i, &mut by_value, &mut queue)?;
        }
    }

    let mut out: Vec<LatticeElement> = by_value.into_values().collect();
    out.sort_by(|a, b| (a.value.len(), &a.value).cmp(&(b.value.len(), &b.value)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge_lattice() {
        let g = Ultragraph::from_parts(2, [("e".to_string(), 0, vec![1])]).unwrap();
        let lat = generate_lattice(&g, 1 << 20).unwrap();
        let values: Vec<Vec<u32>> = lat
            .iter()
            .map(|e| e.value().iter().map(|v| v.0).collect())
            .collect();
        assert_eq!(values, vec![vec![], vec![0], vec![1], vec![0, 1]]);
        assert!(lat.iter().all(|e| e.verify(&g)));
    }

    #[test]
    fn three_vertices_with_a_two_element_range() {
        let g = Ultragraph::from_parts(3, [("e".to_string(), 2, vec![0, 1])]).unwrap();
        let lat = generate_lattice(&g, 1 << 20).unwrap();
        assert_eq!(lat.len(), 8);
        assert!(lat.iter().all(|e| e.verify(&g)));
        // the two-element range is decomposed without any finite leftover
        let range_elem = lat
            .iter()
            .find(|e| e.value() == &BTreeSet::from_iter([VertexId(0), VertexId(1)]))
            .unwrap();
        assert!(range_elem.verify(&g));
    }

    #[test]
    fn all_subsets_appear_for_finite_graphs() {
        let g = Ultragraph::from_parts(
            3,
            [
                ("a".to_string(), 0, vec![1, 2]),
                ("b".to_string(), 1, vec![0]),
            ],
        )
        .unwrap();
        let lat = generate_lattice(&g, 1 << 20).unwrap();
        assert_eq!(lat.len(), 8);
        assert!(lat.iter().all(|e| e.verify(&g)));
    }

    #[test]
    fn closed_under_union_and_intersection() {
        let g = Ultragraph::from_parts(
            4,
            [
                ("a".to_string(), 0, vec![1, 2]),
                ("b".to_string(), 3, vec![2, 3]),
            ],
        )
        .unwrap();
        let lat = generate_lattice(&g, 1 << 20).unwrap();
        let values: BTreeSet<BTreeSet<VertexId>> = lat.iter().map(|e| e.value().clone()).collect();
        for a in &values {
            for b in &values {
                assert!(values.contains(&a.union(b).cloned().collect()));
                assert!(values.contains(&a.intersection(b).cloned().collect()));
            }
        }
    }

    #[test]
    fn budget() {
        let g = Ultragraph::from_parts(5, []).unwrap();
        assert!(matches!(
            generate_lattice(&g, 8),
            Err(SetAlgError::BudgetExceeded(8))
        ));
    }
}
