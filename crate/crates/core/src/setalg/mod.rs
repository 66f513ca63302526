//! Exact algebra of finite and cofinite vertex sets.
//!
//! A [`VertexSet`] stores a polarity together with a finite support: the
//! set itself when the polarity is [`Polarity::Finite`], its complement
//! when the polarity is [`Polarity::Cofinite`].  Unions, intersections and
//! differences are computed by De Morgan bookkeeping on the supports, so
//! every operation is exact.  Cofinite sets are only meaningful over an
//! infinite universe; [`SetUniverse`] performs that validation where a
//! universe is known.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

mod lattice;
mod projections;
mod support;

pub use lattice::{generate_lattice, LatticeElement};
pub use projections::{
    evaluate_atoms, orthogonalize, partition_identity, OrthoAtom, ProjectionCombo,
};
pub use support::{regular_ideal_support, regular_ideal_support_symbolic};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SetAlgError {
    #[error("universe mismatch: {0}")]
    UniverseMismatch(String),
    #[error("universe has no unit: {0}")]
    NoUnit(String),
    #[error("enumeration budget of {0} exceeded")]
    BudgetExceeded(u64),
    #[error("ultragraph has sinks: {0}")]
    HasSinks(String),
}

/// Whether the support of a [`VertexSet`] lists members or non-members.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Finite,
    Cofinite,
}

/// An exact finite-or-cofinite subset of a vertex universe.
///
/// Two sets may be combined only when they live over the same universe;
/// the operations themselves do not carry the universe around, callers
/// that mix universes are expected to validate via [`SetUniverse`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet<V: Ord> {
    polarity: Polarity,
    support: BTreeSet<V>,
}

impl<V: Ord> VertexSet<V> {
    pub fn empty() -> Self {
        VertexSet {
            polarity: Polarity::Finite,
            support: BTreeSet::new(),
        }
    }

    /// The whole (infinite) universe.
    pub fn full() -> Self {
        VertexSet {
            polarity: Polarity::Cofinite,
            support: BTreeSet::new(),
        }
    }

    pub fn finite(members: impl IntoIterator<Item = V>) -> Self {
        VertexSet {
            polarity: Polarity::Finite,
            support: members.into_iter().collect(),
        }
    }

    pub fn cofinite(excluded: impl IntoIterator<Item = V>) -> Self {
        VertexSet {
            polarity: Polarity::Cofinite,
            support: excluded.into_iter().collect(),
        }
    }

    pub fn singleton(v: V) -> Self {
        VertexSet {
            polarity: Polarity::Finite,
            support: BTreeSet::from_iter([v]),
        }
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    /// The member list (`Finite`) or the non-member list (`Cofinite`).
    pub fn support(&self) -> &BTreeSet<V> {
        &self.support
    }

    pub fn contains(&self, v: &V) -> bool {
        match self.polarity {
            Polarity::Finite => self.support.contains(v),
            Polarity::Cofinite => !self.support.contains(v),
        }
    }

    /// Emptiness is exact: a cofinite set is never empty over an infinite
    /// universe.
    pub fn is_empty(&self) -> bool {
        self.polarity == Polarity::Finite && self.support.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.polarity == Polarity::Finite
    }

    /// Number of members for finite sets, `None` for cofinite ones.
    pub fn len(&self) -> Option<usize> {
        match self.polarity {
            Polarity::Finite => Some(self.support.len()),
            Polarity::Cofinite => None,
        }
    }
}

impl<V: Ord + Clone> VertexSet<V> {
    pub fn union(&self, other: &Self) -> Self {
        use Polarity::*;
        match (self.polarity, other.polarity) {
            (Finite, Finite) => VertexSet::finite(self.support.union(&other.support).cloned()),
            (Finite, Cofinite) => {
                VertexSet::cofinite(other.support.difference(&self.support).cloned())
            }
            (Cofinite, Finite) => {
                VertexSet::cofinite(self.support.difference(&other.support).cloned())
            }
            (Cofinite, Cofinite) => {
                VertexSet::cofinite(self.support.intersection(&other.support).cloned())
            }
        }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        use Polarity::*;
        match (self.polarity, other.polarity) {
            (Finite, Finite) => {
                VertexSet::finite(self.support.intersection(&other.support).cloned())
            }
            (Finite, Cofinite) => {
                VertexSet::finite(self.support.difference(&other.support).cloned())
            }
            (Cofinite, Finite) => {
                VertexSet::finite(other.support.difference(&self.support).cloned())
            }
            (Cofinite, Cofinite) => {
                VertexSet::cofinite(self.support.union(&other.support).cloned())
            }
        }
    }

    pub fn difference(&self, other: &Self) -> Self {
        use Polarity::*;
        match (self.polarity, other.polarity) {
            (Finite, Finite) => VertexSet::finite(self.support.difference(&other.support).cloned()),
            // x in self and x in other.support
            (Finite, Cofinite) => {
                VertexSet::finite(self.support.intersection(&other.support).cloned())
            }
            (Cofinite, Finite) => VertexSet::cofinite(self.support.union(&other.support).cloned()),
            // x outside self.support and x listed by other.support
            (Cofinite, Cofinite) => {
                VertexSet::finite(other.support.difference(&self.support).cloned())
            }
        }
    }

    /// Complement within an infinite universe: flips the polarity.
    pub fn complement(&self) -> Self {
        VertexSet {
            polarity: match self.polarity {
                Polarity::Finite => Polarity::Cofinite,
                Polarity::Cofinite => Polarity::Finite,
            },
            support: self.support.clone(),
        }
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        use Polarity::*;
        match (self.polarity, other.polarity) {
            (Finite, Finite) => self.support.is_subset(&other.support),
            (Finite, Cofinite) => self.support.is_disjoint(&other.support),
            // a cofinite set is infinite, a finite set cannot contain it
            (Cofinite, Finite) => false,
            (Cofinite, Cofinite) => other.support.is_subset(&self.support),
        }
    }

    pub fn is_disjoint_from(&self, other: &Self) -> bool {
        self.intersect(other).is_empty()
    }
}

impl<V: Ord + fmt::Display> fmt::Display for VertexSet<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.polarity == Polarity::Cofinite {
            write!(f, "~")?;
        }
        write!(f, "{{")?;
        for (i, v) in self.support.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// The vertex universe a family of sets lives over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetUniverse<V: Ord> {
    Finite(BTreeSet<V>),
    /// Countably infinite universe; cofinite sets are representable.
    Infinite,
}

impl<V: Ord + Clone + fmt::Display> SetUniverse<V> {
    pub fn contains(&self, v: &V) -> bool {
        match self {
            SetUniverse::Finite(u) => u.contains(v),
            SetUniverse::Infinite => true,
        }
    }

    /// Checks that `set` is representable over this universe.
    pub fn validate(&self, set: &VertexSet<V>) -> Result<(), SetAlgError> {
        match self {
            SetUniverse::Finite(u) => {
                if set.polarity() == Polarity::Cofinite {
                    return Err(SetAlgError::UniverseMismatch(
                        "cofinite set over a finite universe".into(),
                    ));
                }
                if let Some(v) = set.support().iter().find(|v| !u.contains(v)) {
                    return Err(SetAlgError::UniverseMismatch(format!(
                        "vertex {v} is not in the universe"
                    )));
                }
                Ok(())
            }
            SetUniverse::Infinite => Ok(()),
        }
    }

    /// The full vertex set, i.e. the unit of the projection calculus.
    pub fn unit(&self) -> Result<VertexSet<V>, SetAlgError> {
        match self {
            SetUniverse::Finite(u) if u.is_empty() => {
                Err(SetAlgError::NoUnit("the universe is empty".into()))
            }
            SetUniverse::Finite(u) => Ok(VertexSet::finite(u.iter().cloned())),
            SetUniverse::Infinite => Ok(VertexSet::full()),
        }
    }
}
