//! Exact combinatorial invariants of ultragraphs.
//!
//! An ultragraph is a directed graph in which every edge has a single source
//! vertex but a nonempty *set* of range vertices.  This crate decides
//! structural properties of such graphs — simplicity of the associated
//! algebra (by two independent characterizations that are cross-checked
//! against each other), approximate finite-dimensionality, pure
//! infiniteness, the generators of the ideal lattice, and the K-groups of
//! the edge matrix — with exact arithmetic throughout.
//!
//! Graphs come in two flavours:
//!
//! * [`model::Ultragraph`] — an honest finite ultragraph;
//! * [`model::SymbolicUltragraph`] — a finitely described infinite
//!   ultragraph (finitely many named vertices plus an infinite tail, with
//!   edge families given by index offsets).  Questions about symbolic
//!   graphs are answered by resolving the description on two finite
//!   windows and insisting that the answers agree; when they do not, the
//!   verdict is reported as inconclusive rather than guessed.
//!
//! All set algebra is exact finite/cofinite bookkeeping ([`setalg`]), all
//! coefficients are rationals, and all matrix arithmetic is
//! arbitrary-precision ([`ktheory`]).
//!
//! ```
//! use ultragraph::classify::{self, Status};
//! use ultragraph::model::{ultragraph_from_matrix, DenseZeroOne, Description};
//! use ultragraph::Options;
//!
//! let a = DenseZeroOne::from_ints(&[&[1, 1], &[1, 1]])?;
//! let d = Description::Finite(ultragraph_from_matrix(&a)?);
//! let verdict = classify::is_simple(&d, &Options::default())?;
//! assert_eq!(verdict.status, Status::Holds);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod classify;
pub mod corpus;
pub mod ideals;
pub mod ktheory;
pub mod model;
pub mod setalg;

/// Default enumeration budget (number of nodes an enumeration may visit or
/// elements it may produce before giving up with a budget error).
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Tuning knobs shared by the checkers.
#[derive(Debug, Clone)]
pub struct Options {
    /// Budget for enumerations (loops, subsets, lattice elements).
    pub budget: u64,
    /// Window top for symbolic inputs.  `None` picks a default derived
    /// from the description (tail start plus a fixed slack).
    pub horizon: Option<i64>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            budget: DEFAULT_BUDGET,
            horizon: None,
        }
    }
}

impl Options {
    pub fn with_budget(budget: u64) -> Self {
        Options {
            budget,
            ..Options::default()
        }
    }

    pub fn with_horizon(horizon: i64) -> Self {
        Options {
            horizon: Some(horizon),
            ..Options::default()
        }
    }
}
