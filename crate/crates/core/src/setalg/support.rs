//! The support of the regular part of an ultragraph with no sinks: the
//! vertices that emit finitely many (but at least one) edges.  Its
//! indicator functions form the commutative ideal `C₀(T)` of the
//! projection algebra.

use std::collections::BTreeSet;

use super::{SetAlgError, VertexSet};
use crate::model::symbolic::{singular_vertices_symbolic, SymVertex};
use crate::model::{SymbolicUltragraph, Ultragraph, VertexId};

/// `T = {v : 0 < |s⁻¹(v)| < ∞}` for a finite ultragraph with no sinks.
pub fn regular_ideal_support(g: &Ultragraph) -> Result<BTreeSet<VertexId>, SetAlgError> {
    let sinks: Vec<String> = g
        .vertex_ids()
        .filter(|&v| g.is_sink(v))
        .map(|v| g.name(v).to_string())
        .collect();
    if !sinks.is_empty() {
        return Err(SetAlgError::HasSinks(sinks.join(", ")));
    }
    Ok(g.vertex_ids().filter(|&v| g.is_regular(v)).collect())
}

/// Exact symbolic version; the result is finite or cofinite over the full
/// vertex universe.
pub fn regular_ideal_support_symbolic(
    g: &SymbolicUltragraph,
) -> Result<VertexSet<SymVertex>, SetAlgError> {
    let singular = singular_vertices_symbolic(g);
    let emitters = g.infinite_emitters();
    let sinks = singular.difference(&VertexSet::finite(emitters.iter().copied()));
    if !sinks.is_empty() {
        let label = g.set_label(&sinks);
        return Err(SetAlgError::HasSinks(label));
    }
    // no sinks: the support is everything except the infinite emitters
    Ok(singular.complement())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ultragraph_from_matrix, DenseZeroOne};

    #[test]
    fn full_matrix_has_full_support() {
        let a = DenseZeroOne::from_ints(&[&[1, 1], &[1, 1]]).unwrap();
        let g = ultragraph_from_matrix(&a).unwrap();
        let t = regular_ideal_support(&g).unwrap();
        assert_eq!(t, g.all_vertices());
    }

    #[test]
    fn sinks_are_reported() {
        let g = Ultragraph::from_parts(2, [("e".to_string(), 0, vec![1])]).unwrap();
        assert_eq!(
            regular_ideal_support(&g).unwrap_err(),
            SetAlgError::HasSinks("v1".into())
        );
    }
}
