//! Commutative projection calculus over vertex sets.
//!
//! A projection combination is a formal rational linear combination of
//! indicator projections `p_A` with `A` a vertex set.  Such a combination
//! can always be rewritten as a combination of mutually orthogonal atoms
//! `Q(B, C) = p_B - p_B p_C`, the indicator of `B \ C`: the atom for a
//! subset `I` of the index set is `Q(∩_{i∈I} A_i, ∪_{i∉I} A_i)` with
//! coefficient `Σ_{i∈I} λ_i`.  Evaluation is pointwise and exact.

use num_rational::BigRational;
use num_traits::Zero;

use super::{SetAlgError, SetUniverse, VertexSet};

/// A finite rational linear combination of set projections, canonicalized:
/// duplicate sets merged, zero coefficients and empty sets dropped, terms
/// sorted by set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionCombo<V: Ord> {
    terms: Vec<(BigRational, VertexSet<V>)>,
}

impl<V: Ord + Clone> ProjectionCombo<V> {
    pub fn new(terms: impl IntoIterator<Item = (BigRational, VertexSet<V>)>) -> Self {
        let mut merged: Vec<(BigRational, VertexSet<V>)> = Vec::new();
        let mut sorted: Vec<(BigRational, VertexSet<V>)> = terms.into_iter().collect();
        sorted.sort_by(|a, b| a.1.cmp(&b.1));
        for (coeff, set) in sorted {
            if set.is_empty() {
                continue; // p of the empty set is 0
            }
            match merged.last_mut() {
                Some((c, s)) if *s == set => *c += coeff,
                _ => merged.push((coeff, set)),
            }
        }
        merged.retain(|(c, _)| !c.is_zero());
        ProjectionCombo { terms: merged }
    }

    pub fn terms(&self) -> &[(BigRational, VertexSet<V>)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Pointwise value at a vertex of the universe.
    pub fn evaluate(&self, v: &V) -> BigRational {
        let mut acc = BigRational::zero();
        for (coeff, set) in &self.terms {
            if set.contains(v) {
                acc += coeff;
            }
        }
        acc
    }
}

/// One orthogonal atom `Q(B, C)`, the indicator of `B \ C`, with a rational
/// coefficient.  Atoms produced by [`orthogonalize`] and
/// [`partition_identity`] are pairwise disjoint as sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthoAtom<V: Ord> {
    pub coefficient: BigRational,
    kept: VertexSet<V>,
    removed: VertexSet<V>,
}

impl<V: Ord + Clone> OrthoAtom<V> {
    pub fn new(coefficient: BigRational, kept: VertexSet<V>, removed: VertexSet<V>) -> Self {
        OrthoAtom {
            coefficient,
            kept,
            removed,
        }
    }

    /// The `B` of `Q(B, C)`.
    pub fn kept(&self) -> &VertexSet<V> {
        &self.kept
    }

    /// The `C` of `Q(B, C)`.
    pub fn removed(&self) -> &VertexSet<V> {
        &self.removed
    }

    /// The set `B \ C` that the atom is the indicator of.
    pub fn support_set(&self) -> VertexSet<V> {
        self.kept.difference(&self.removed)
    }

    pub fn contains(&self, v: &V) -> bool {
        self.kept.contains(v) && !self.removed.contains(v)
    }
}

/// Pointwise value of an atom list at a vertex.
pub fn evaluate_atoms<V: Ord + Clone>(atoms: &[OrthoAtom<V>], v: &V) -> BigRational {
    let mut acc = BigRational::zero();
    for atom in atoms {
        if atom.contains(v) {
            acc += &atom.coefficient;
        }
    }
    acc
}

/// Rewrites a combination as mutually orthogonal atoms.
///
/// Atoms are indexed by the nonempty subsets `I` of the term list, in
/// lexicographic order of the sorted subsets; zero-coefficient and empty
/// atoms are dropped.  The empty subset would carry coefficient 0, so no
/// unit is ever required here.
pub fn orthogonalize<V: Ord + Clone>(
    combo: &ProjectionCombo<V>,
    budget: u64,
) -> Result<Vec<OrthoAtom<V>>, SetAlgError> {
    let n = combo.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n >= 63 || (1u64 << n) > budget {
        return Err(SetAlgError::BudgetExceeded(budget));
    }
    let mut out: Vec<(Vec<usize>, OrthoAtom<V>)> = Vec::new();
    for mask in 1u64..(1u64 << n) {
        let subset: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let mut coefficient = BigRational::zero();
        let mut kept: Option<VertexSet<V>> = None;
        let mut removed = VertexSet::empty();
        for (i, (c, set)) in combo.terms().iter().enumerate() {
            if mask & (1 << i) != 0 {
                coefficient += c;
                kept = Some(match kept {
                    None => set.clone(),
                    Some(k) => k.intersect(set),
                });
            } else {
                removed = removed.union(set);
            }
        }
        let kept = kept.expect("subset is nonempty");
        if coefficient.is_zero() || kept.difference(&removed).is_empty() {
            continue;
        }
        out.push((
            subset,
            OrthoAtom {
                coefficient,
                kept,
                removed,
            },
        ));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out.into_iter().map(|(_, atom)| atom).collect())
}

/// The `2^n` atoms of a set family, which partition the universe.
///
/// The subset `I = ∅` contributes `Q(G⁰, ∪ A_i)`, so the universe must
/// have a representable unit.  Empty atoms are dropped; the indicator sum
/// of the result is identically 1.
pub fn partition_identity<V: Ord + Clone + std::fmt::Display>(
    universe: &SetUniverse<V>,
    sets: &[VertexSet<V>],
    budget: u64,
) -> Result<Vec<OrthoAtom<V>>, SetAlgError> {
    let unit = universe.unit()?;
    for set in sets {
        universe.validate(set)?;
    }
    let n = sets.len();
    if n >= 63 || (1u64 << n) > budget {
        return Err(SetAlgError::BudgetExceeded(budget));
    }
    let one = BigRational::from_integer(1.into());
    let mut out: Vec<(Vec<usize>, OrthoAtom<V>)> = Vec::new();
    for mask in 0u64..(1u64 << n) {
        let subset: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let mut kept = unit.clone();
        let mut removed = VertexSet::empty();
        for (i, set) in sets.iter().enumerate() {
            if mask & (1 << i) != 0 {
                kept = kept.intersect(set);
            } else {
                removed = removed.union(set);
            }
        }
        if kept.difference(&removed).is_empty() {
            continue;
        }
        out.push((
            subset,
            OrthoAtom {
                coefficient: one.clone(),
                kept,
                removed,
            },
        ));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out.into_iter().map(|(_, atom)| atom).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn fin(vs: &[u32]) -> VertexSet<u32> {
        VertexSet::finite(vs.iter().copied())
    }

    #[test]
    fn single_term() {
        let combo = ProjectionCombo::new([(rat(5), fin(&[1, 2]))]);
        let atoms = orthogonalize(&combo, 1 << 20).unwrap();
        assert_eq!(atoms.len(), 1);
        assert_eq!(atoms[0].coefficient, rat(5));
        assert_eq!(atoms[0].support_set(), fin(&[1, 2]));
        assert!(atoms[0].removed().is_empty());
    }

    #[test]
    fn two_overlapping_terms() {
        // 1·p_{1,2} + 1·p_{2,3} = 1·Q(A,B) + 1·Q(B,A) + 2·Q(A∩B, ∅)
        let a = fin(&[1, 2]);
        let b = fin(&[2, 3]);
        let combo = ProjectionCombo::new([(rat(1), a.clone()), (rat(1), b.clone())]);
        let atoms = orthogonalize(&combo, 1 << 20).unwrap();
        assert_eq!(atoms.len(), 3);
        // subsets in lexicographic order: {0}, {0,1}, {1}
        assert_eq!(atoms[0].support_set(), fin(&[1]));
        assert_eq!(atoms[0].coefficient, rat(1));
        assert_eq!(atoms[1].support_set(), fin(&[2]));
        assert_eq!(atoms[1].coefficient, rat(2));
        assert_eq!(atoms[2].support_set(), fin(&[3]));
        assert_eq!(atoms[2].coefficient, rat(1));
        for v in [1u32, 2, 3, 4] {
            assert_eq!(evaluate_atoms(&atoms, &v), combo.evaluate(&v));
        }
    }

    #[test]
    fn cancellation() {
        let a = fin(&[1, 2]);
        let combo = ProjectionCombo::new([(rat(1), a.clone()), (rat(-1), a)]);
        assert!(combo.is_empty());
        assert!(orthogonalize(&combo, 1 << 20).unwrap().is_empty());
    }

    #[test]
    fn partition_single_set() {
        let u = SetUniverse::Finite(BTreeSet::from_iter([1u32, 2, 3]));
        let atoms = partition_identity(&u, &[fin(&[1])], 1 << 20).unwrap();
        assert_eq!(atoms.len(), 2);
        // I = {} first: complement of A, then I = {0}: A itself
        assert_eq!(atoms[0].support_set(), fin(&[2, 3]));
        assert_eq!(atoms[1].support_set(), fin(&[1]));
        for v in [1u32, 2, 3] {
            assert_eq!(evaluate_atoms(&atoms, &v), rat(1));
        }
    }

    #[test]
    fn partition_equal_singletons() {
        let u = SetUniverse::Finite(BTreeSet::from_iter([1u32, 2]));
        let atoms = partition_identity(&u, &[fin(&[1]), fin(&[1])], 1 << 20).unwrap();
        assert_eq!(atoms.len(), 2);
        assert_eq!(atoms[0].support_set(), fin(&[2]));
        assert_eq!(atoms[1].support_set(), fin(&[1]));
        for v in [1u32, 2] {
            assert_eq!(evaluate_atoms(&atoms, &v), rat(1));
        }
    }

    #[test]
    fn partition_empty_family_is_the_unit() {
        let u = SetUniverse::Finite(BTreeSet::from_iter([1u32, 2]));
        let atoms = partition_identity(&u, &[], 1 << 20).unwrap();
        assert_eq!(atoms.len(), 1);
        assert_eq!(atoms[0].support_set(), fin(&[1, 2]));
    }

    #[test]
    fn evaluate_counts_multiplicity() {
        let combo = ProjectionCombo::new([(rat(2), fin(&[7]))]);
        assert_eq!(combo.evaluate(&7), rat(2));
        assert_eq!(combo.evaluate(&8), rat(0));
    }

    #[test]
    fn cofinite_combos_work_without_a_unit() {
        let a: VertexSet<u32> = VertexSet::cofinite([1]);
        let b: VertexSet<u32> = VertexSet::cofinite([2]);
        let combo = ProjectionCombo::new([(rat(1), a), (rat(-1), b)]);
        let atoms = orthogonalize(&combo, 1 << 20).unwrap();
        for v in 0u32..8 {
            assert_eq!(evaluate_atoms(&atoms, &v), combo.evaluate(&v));
        }
    }

    #[test]
    fn budget_guard() {
        let sets: Vec<_> = (0..30).map(|i| fin(&[i])).collect();
        let combo = ProjectionCombo::new(sets.into_iter().map(|s| (rat(1), s)));
        assert!(matches!(
            orthogonalize(&combo, 16),
            Err(SetAlgError::BudgetExceeded(16))
        ));
    }
}
