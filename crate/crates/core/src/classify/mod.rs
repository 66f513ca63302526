//! Structural verdicts: condition (L), reachability, cofinality, the two
//! simplicity characterizations, AF-ness, pure infiniteness and the
//! simple dichotomy.
//!
//! Every negative verdict carries a checkable witness (an exitless loop, a
//! vertex pair, a proper saturated hereditary support, a cycle avoiding a
//! reach set), and [`verify_witness`] re-checks any witness through the
//! public predicates.  The two simplicity characterizations are always run
//! against each other; a decided disagreement is reported as an internal
//! error rather than papered over.
//!
//! Symbolic graphs are decided through two-window agreement; a verdict
//! that does not stabilize is reported as [`Status::Inconclusive`].

pub mod finite;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::ideals::IdealsError;
use crate::model::symbolic::{stabilize, StabilizeOutcome, SymVertex, SymbolicUltragraph, Window};
use crate::model::{Description, ModelError, Ultragraph, VertexId};
use crate::setalg::{Polarity, VertexSet};
use crate::Options;

pub use finite::{CofinalityViolation, Exit, ReachViolation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error(
        "the simplicity characterizations disagree (lattice: {lattice}, reachability: {reach})"
    )]
    InternalDisagreement { lattice: bool, reach: bool },
    #[error("dichotomy violated on a simple graph (af: {af}, purely infinite: {pi})")]
    DichotomyViolated { af: bool, pi: bool },
    #[error("the ultragraph has no vertices")]
    EmptyGraph,
    #[error("unknown vertex: {0}")]
    UnknownVertex(String),
    #[error(transparent)]
    Ideals(#[from] IdealsError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flag {
    /// The singular-vertex reachability condition flips under the strict
    /// (no zero-length paths) reading of reachability.
    ReflexivitySensitive,
}

/// A structured, re-checkable certificate for a negative verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    ExitlessLoop {
        edges: Vec<String>,
    },
    LoopFound {
        edges: Vec<String>,
    },
    NotCofinal {
        vertex: String,
        cycle: Vec<String>,
        escape_family: Option<String>,
    },
    SingularUnreached {
        from: String,
        to: String,
    },
    ProperSaturatedHereditary {
        cofinite: bool,
        members: Vec<String>,
    },
    NotConnectedToLoop {
        vertex: String,
    },
    InfiniteRangeUncovered {
        edge: String,
        from: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<Witness>,
    /// Window top used to decide a symbolic input.
    pub horizon: Option<i64>,
    pub flags: Vec<Flag>,
}

impl Verdict {
    pub fn holds() -> Self {
        Verdict {
            status: Status::Holds,
            witness: None,
            horizon: None,
            flags: Vec::new(),
        }
    }

    pub fn fails(witness: Witness) -> Self {
        Verdict {
            status: Status::Fails,
            witness: Some(witness),
            horizon: None,
            flags: Vec::new(),
        }
    }

    pub fn inconclusive(horizon: i64) -> Self {
        Verdict {
            status: Status::Inconclusive,
            witness: None,
            horizon: Some(horizon),
            flags: Vec::new(),
        }
    }

    pub fn decided(&self) -> Option<bool> {
        match self.status {
            Status::Holds => Some(true),
            Status::Fails => Some(false),
            Status::Inconclusive => None,
        }
    }

    fn at_horizon(mut self, horizon: i64) -> Self {
        self.horizon = Some(horizon);
        self
    }

    fn with_flag(mut self, flag: Flag) -> Self {
        if !self.flags.contains(&flag) {
            self.flags.push(flag);
        }
        self
    }
}

fn guard_nonempty(g: &Ultragraph) -> Result<(), ClassifyError> {
    if g.vertex_count() == 0 {
        return Err(ClassifyError::EmptyGraph);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// finite assemblies
// ---------------------------------------------------------------------------

fn loop_witness(g: &Ultragraph, edges: &[usize]) -> Vec<String> {
    edges.iter().map(|&i| g.edge(i).name.clone()).collect()
}

fn condition_l_finite(g: &Ultragraph, budget: u64) -> Result<Verdict, ClassifyError> {
    guard_nonempty(g)?;
    Ok(match finite::first_exitless_loop(g, budget)? {
        None => Verdict::holds(),
        Some(l) => Verdict::fails(Witness::ExitlessLoop {
            edges: loop_witness(g, l.edges()),
        }),
    })
}

fn is_af_finite(g: &Ultragraph, budget: u64) -> Result<Verdict, ClassifyError> {
    guard_nonempty(g)?;
    Ok(match finite::first_loop(g, budget)? {
        None => Verdict::holds(),
        Some(l) => Verdict::fails(Witness::LoopFound {
            edges: loop_witness(g, l.edges()),
        }),
    })
}

fn is_cofinal_finite(g: &Ultragraph) -> Result<Verdict, ClassifyError> {
    guard_nonempty(g)?;
    Ok(match finite::cofinality_violation(g) {
        None => Verdict::holds(),
        Some(CofinalityViolation::Cycle { vertex, cycle }) => Verdict::fails(Witness::NotCofinal {
            vertex: g.name(vertex).to_string(),
            cycle: loop_witness(g, &cycle),
            escape_family: None,
        }),
        Some(CofinalityViolation::Escape { vertex, .. }) => {
            // honest finite graphs never take this branch; window wrappers
            // translate it before it reaches here
            Verdict::fails(Witness::NotCofinal {
                vertex: g.name(vertex).to_string(),
                cycle: Vec::new(),
                escape_family: None,
            })
        }
    })
}

fn is_purely_infinite_finite(g: &Ultragraph, budget: u64) -> Result<Verdict, ClassifyError> {
    guard_nonempty(g)?;
    if let Some(l) = finite::first_exitless_loop(g, budget)? {
        return Ok(Verdict::fails(Witness::ExitlessLoop {
            edges: loop_witness(g, l.edges()),
        }));
    }
    Ok(match finite::unconnected_vertex(g) {
        None => Verdict::holds(),
        Some(v) => Verdict::fails(Witness::NotConnectedToLoop {
            vertex: g.name(v).to_string(),
        }),
    })
}

fn is_simple_lattice_finite(g: &Ultragraph, budget: u64) -> Result<Verdict, ClassifyError> {
    guard_nonempty(g)?;
    if let Some(l) = finite::first_exitless_loop(g, budget)? {
        return Ok(Verdict::fails(Witness::ExitlessLoop {
            edges: loop_witness(g, l.edges()),
        }));
    }
    Ok(match finite::lattice_violation(g)? {
        None => Verdict::holds(),
        Some((_, k)) => Verdict::fails(Witness::ProperSaturatedHereditary {
            cofinite: false,
            members: g.vertex_names(&k),
        }),
    })
}

fn reach_violation_witness(g: &Ultragraph, v: &ReachViolation) -> Witness {
    match v {
        ReachViolation::ExitlessLoop(edges) => Witness::ExitlessLoop {
            edges: loop_witness(g, edges),
        },
        ReachViolation::NotCofinal(CofinalityViolation::Cycle { vertex, cycle }) => {
            Witness::NotCofinal {
                vertex: g.name(*vertex).to_string(),
                cycle: loop_witness(g, cycle),
                escape_family: None,
            }
        }
        ReachViolation::NotCofinal(CofinalityViolation::Escape { vertex, .. }) => {
            Witness::NotCofinal {
                vertex: g.name(*vertex).to_string(),
                cycle: Vec::new(),
                escape_family: None,
            }
        }
        ReachViolation::SingularUnreached { from, to } => Witness::SingularUnreached {
            from: g.name(*from).to_string(),
            to: g.name(*to).to_string(),
        },
        ReachViolation::InfiniteRangeUncovered { edge, from } => Witness::InfiniteRangeUncovered {
            edge: g.edge(*edge).name.clone(),
            from: g.name(*from).to_string(),
        },
    }
}

fn is_simple_reach_finite(g: &Ultragraph, budget: u64) -> Result<Verdict, ClassifyError> {
    guard_nonempty(g)?;
    let (violation, sensitive) = finite::reach_violation(g, budget)?;
    let verdict = match violation {
        None => Verdict::holds(),
        Some(v) => Verdict::fails(reach_violation_witness(g, &v)),
    };
    Ok(if sensitive {
        verdict.with_flag(Flag::ReflexivitySensitive)
    } else {
        verdict
    })
}

// ---------------------------------------------------------------------------
// symbolic drivers
// ---------------------------------------------------------------------------

fn drive<T, FW, FV>(
    g: &SymbolicUltragraph,
    opts: &Options,
    extra_min: i64,
    per_window: FW,
    to_verdict: FV,
) -> Result<Verdict, ClassifyError>
where
    T: PartialEq,
    FW: Fn(&Window) -> Result<Option<T>, ClassifyError>,
    FV: FnOnce(T) -> Verdict,
{
    match stabilize(g, opts, extra_min, per_window)? {
        StabilizeOutcome::Stable(s) => Ok(to_verdict(s.value).at_horizon(s.horizon)),
        StabilizeOutcome::Unstable(h) => Ok(Verdict::inconclusive(h)),
    }
}

fn lift_vertex_label(w: &Window, v: VertexId) -> Option<String> {
    w.lift_vertex(v).map(|_| w.graph.name(v).to_string())
}

/// Window outcome of a yes/no check with a liftable failure description.
#[derive(PartialEq, Debug)]
enum L<T: PartialEq> {
    Holds,
    Fails(T),
}

fn lift_cof_violation(
    w: &Window,
    cv: &CofinalityViolation,
) -> Option<(String, Vec<String>, Option<String>)> {
    match cv {
        CofinalityViolation::Cycle { vertex, cycle } => Some((
            lift_vertex_label(w, *vertex)?,
            w.lift_edge_names(cycle)?,
            None,
        )),
        CofinalityViolation::Escape { vertex, via } => {
            let fam = w.escape_family(*via)?.to_string();
            Some((lift_vertex_label(w, *vertex)?, Vec::new(), Some(fam)))
        }
    }
}

fn condition_l_symbolic(g: &SymbolicUltragraph, opts: &Options) -> Result<Verdict, ClassifyError> {
    let budget = opts.budget;
    drive(
        g,
        opts,
        0,
        |w| {
            Ok(match finite::first_exitless_loop(&w.graph, budget)? {
                None => Some(L::Holds),
                Some(l) => w.lift_edge_names(l.edges()).map(L::Fails),
            })
        },
        |value| match value {
            L::Holds => Verdict::holds(),
            L::Fails(edges) => Verdict::fails(Witness::ExitlessLoop { edges }),
        },
    )
}

fn is_af_symbolic(g: &SymbolicUltragraph, opts: &Options) -> Result<Verdict, ClassifyError> {
    let budget = opts.budget;
    drive(
        g,
        opts,
        0,
        |w| {
            Ok(match finite::first_loop(&w.graph, budget)? {
                None => Some(L::Holds),
                Some(l) => w.lift_edge_names(l.edges()).map(L::Fails),
            })
        },
        |value| match value {
            L::Holds => Verdict::holds(),
            L::Fails(edges) => Verdict::fails(Witness::LoopFound { edges }),
        },
    )
}

fn is_cofinal_symbolic(g: &SymbolicUltragraph, opts: &Options) -> Result<Verdict, ClassifyError> {
    drive(
        g,
        opts,
        0,
        |w| {
            Ok(match finite::cofinality_violation(&w.graph) {
                None => Some(L::Holds),
                Some(cv) => lift_cof_violation(w, &cv).map(L::Fails),
            })
        },
        |value| match value {
            L::Holds => Verdict::holds(),
            L::Fails((vertex, cycle, escape_family)) => Verdict::fails(Witness::NotCofinal {
                vertex,
                cycle,
                escape_family,
            }),
        },
    )
}

#[derive(PartialEq, Debug)]
enum PiFail {
    Loop(Vec<String>),
    Vertex(String),
}

fn is_purely_infinite_symbolic(
    g: &SymbolicUltragraph,
    opts: &Options,
) -> Result<Verdict, ClassifyError> {
    let budget = opts.budget;
    drive(
        g,
        opts,
        0,
        |w| {
            if let Some(l) = finite::first_exitless_loop(&w.graph, budget)? {
                return Ok(w
                    .lift_edge_names(l.edges())
                    .map(|e| L::Fails(PiFail::Loop(e))));
            }
            Ok(match finite::unconnected_vertex(&w.graph) {
                None => Some(L::Holds),
                Some(v) => lift_vertex_label(w, v).map(|l| L::Fails(PiFail::Vertex(l))),
            })
        },
        |value| match value {
            L::Holds => Verdict::holds(),
            L::Fails(PiFail::Loop(edges)) => Verdict::fails(Witness::ExitlessLoop { edges }),
            L::Fails(PiFail::Vertex(vertex)) => {
                Verdict::fails(Witness::NotConnectedToLoop { vertex })
            }
        },
    )
}

#[derive(PartialEq, Debug)]
enum LatFail {
    Loop(Vec<String>),
    Support(VertexSet<SymVertex>),
}

fn is_simple_lattice_symbolic(
    g: &SymbolicUltragraph,
    opts: &Options,
) -> Result<Verdict, ClassifyError> {
    let budget = opts.budget;
    let labels = |s: &VertexSet<SymVertex>| -> (bool, Vec<String>) {
        (
            s.polarity() == Polarity::Cofinite,
            s.support().iter().map(|&v| g.vertex_label(v)).collect(),
        )
    };
    drive(
        g,
        opts,
        0,
        |w| {
            if let Some(l) = finite::first_exitless_loop(&w.graph, budget)? {
                return Ok(w
                    .lift_edge_names(l.edges())
                    .map(|e| L::Fails(LatFail::Loop(e))));
            }
            Ok(match finite::lattice_violation(&w.graph)? {
                None => Some(L::Holds),
                Some((_, k)) => w.lift_set(&k).map(|s| L::Fails(LatFail::Support(s))),
            })
        },
        |value| match value {
            L::Holds => Verdict::holds(),
            L::Fails(LatFail::Loop(edges)) => Verdict::fails(Witness::ExitlessLoop { edges }),
            L::Fails(LatFail::Support(s)) => {
                let (cofinite, members) = labels(&s);
                Verdict::fails(Witness::ProperSaturatedHereditary { cofinite, members })
            }
        },
    )
}

#[derive(PartialEq, Debug)]
enum ReachFail {
    Loop(Vec<String>),
    Cofinal(String, Vec<String>, Option<String>),
    Singular { from: String, to: String },
    Cover { edge: String, from: String },
}

fn is_simple_reach_symbolic(
    g: &SymbolicUltragraph,
    opts: &Options,
) -> Result<Verdict, ClassifyError> {
    let budget = opts.budget;
    drive(
        g,
        opts,
        0,
        |w| {
            let (violation, sensitive) = finite::reach_violation(&w.graph, budget)?;
            let lifted = match violation {
                None => Some(L::Holds),
                Some(ReachViolation::ExitlessLoop(edges)) => w
                    .lift_edge_names(&edges)
                    .map(|e| L::Fails(ReachFail::Loop(e))),
                Some(ReachViolation::NotCofinal(cv)) => lift_cof_violation(w, &cv)
                    .map(|(v, c, e)| L::Fails(ReachFail::Cofinal(v, c, e))),
                Some(ReachViolation::SingularUnreached { from, to }) => {
                    match (lift_vertex_label(w, from), lift_vertex_label(w, to)) {
                        (Some(from), Some(to)) => Some(L::Fails(ReachFail::Singular { from, to })),
                        _ => None,
                    }
                }
                Some(ReachViolation::InfiniteRangeUncovered { edge, from }) => {
                    match (w.lift_edge_names(&[edge]), lift_vertex_label(w, from)) {
                        (Some(mut names), Some(from)) => Some(L::Fails(ReachFail::Cover {
                            edge: names.remove(0),
                            from,
                        })),
                        _ => None,
                    }
                }
            };
            Ok(lifted.map(|l| (l, sensitive)))
        },
        |(value, sensitive)| {
            let verdict = match value {
                L::Holds => Verdict::holds(),
                L::Fails(ReachFail::Loop(edges)) => Verdict::fails(Witness::ExitlessLoop { edges }),
                L::Fails(ReachFail::Cofinal(vertex, cycle, escape_family)) => {
                    Verdict::fails(Witness::NotCofinal {
                        vertex,
                        cycle,
                        escape_family,
                    })
                }
                L::Fails(ReachFail::Singular { from, to }) => {
                    Verdict::fails(Witness::SingularUnreached { from, to })
                }
                L::Fails(ReachFail::Cover { edge, from }) => {
                    Verdict::fails(Witness::InfiniteRangeUncovered { edge, from })
                }
            };
            if sensitive {
                verdict.with_flag(Flag::ReflexivitySensitive)
            } else {
                verdict
            }
        },
    )
}

// ---------------------------------------------------------------------------
// public interface over descriptions
// ---------------------------------------------------------------------------

/// Every loop has an exit.
pub fn condition_l(d: &Description, opts: &Options) -> Result<Verdict, ClassifyError> {
    match d {
        Description::Finite(g) => condition_l_finite(g, opts.budget),
        Description::Symbolic(g) => condition_l_symbolic(g, opts),
    }
}

/// No loops at all.
pub fn is_af(d: &Description, opts: &Options) -> Result<Verdict, ClassifyError> {
    match d {
        Description::Finite(g) => is_af_finite(g, opts.budget),
        Description::Symbolic(g) => is_af_symbolic(g, opts),
    }
}

/// Every vertex eventually reaches a source on every infinite path.
pub fn is_cofinal(d: &Description, opts: &Options) -> Result<Verdict, ClassifyError> {
    match d {
        Description::Finite(g) => is_cofinal_finite(g),
        Description::Symbolic(g) => is_cofinal_symbolic(g, opts),
    }
}

/// Condition (L) plus every vertex connecting to a loop.
pub fn is_purely_infinite(d: &Description, opts: &Options) -> Result<Verdict, ClassifyError> {
    match d {
        Description::Finite(g) => is_purely_infinite_finite(g, opts.budget),
        Description::Symbolic(g) => is_purely_infinite_symbolic(g, opts),
    }
}

/// Simplicity through triviality of the saturated hereditary lattice.
pub fn is_simple_lattice(d: &Description, opts: &Options) -> Result<Verdict, ClassifyError> {
    match d {
        Description::Finite(g) => is_simple_lattice_finite(g, opts.budget),
        Description::Symbolic(g) => is_simple_lattice_symbolic(g, opts),
    }
}

/// Simplicity through condition (L), cofinality and reachability of
/// singular vertices.
pub fn is_simple_reach(d: &Description, opts: &Options) -> Result<Verdict, ClassifyError> {
    match d {
        Description::Finite(g) => is_simple_reach_finite(g, opts.budget),
        Description::Symbolic(g) => is_simple_reach_symbolic(g, opts),
    }
}

/// Both simplicity characterizations, in order (lattice, reachability).
pub fn simplicity_methods(
    d: &Description,
    opts: &Options,
) -> Result<(Verdict, Verdict), ClassifyError> {
    Ok((is_simple_lattice(d, opts)?, is_simple_reach(d, opts)?))
}

/// Runs both characterizations and returns their common verdict; a decided
/// disagreement is an internal error.
pub fn is_simple(d: &Description, opts: &Options) -> Result<Verdict, ClassifyError> {
    let (lattice, reach) = simplicity_methods(d, opts)?;
    match (lattice.decided(), reach.decided()) {
        (Some(a), Some(b)) if a != b => Err(ClassifyError::InternalDisagreement {
            lattice: a,
            reach: b,
        }),
        (Some(_), Some(_)) => {
            let mut verdict = lattice;
            for f in reach.flags {
                verdict = verdict.with_flag(f);
            }
            Ok(verdict)
        }
        _ => {
            let horizon = lattice.horizon.or(reach.horizon).unwrap_or_default();
            Ok(Verdict::inconclusive(horizon))
        }
    }
}

/// `w ≥ v`: does `w` reach `v`?
pub fn reaches(
    d: &Description,
    from: &str,
    to: &str,
    opts: &Options,
) -> Result<Verdict, ClassifyError> {
    match d {
        Description::Finite(g) => {
            let w = g
                .vertex_named(from)
                .ok_or_else(|| ClassifyError::UnknownVertex(from.into()))?;
            let v = g
                .vertex_named(to)
                .ok_or_else(|| ClassifyError::UnknownVertex(to.into()))?;
            Ok(if finite::reaches(g, w, v) {
                Verdict::holds()
            } else {
                Verdict {
                    status: Status::Fails,
                    witness: None,
                    horizon: None,
                    flags: vec![],
                }
            })
        }
        Description::Symbolic(g) => {
            let a = g
                .vertex_from_label(from)
                .ok_or_else(|| ClassifyError::UnknownVertex(from.into()))?;
            let b = g
                .vertex_from_label(to)
                .ok_or_else(|| ClassifyError::UnknownVertex(to.into()))?;
            let extra = g.min_window_for_sets(&[&VertexSet::finite([a, b])]);
            drive(
                g,
                opts,
                extra,
                |w| {
                    let (Some(x), Some(y)) = (w.vertex_of(a), w.vertex_of(b)) else {
                        return Ok(None);
                    };
                    Ok(Some(finite::reaches(&w.graph, x, y)))
                },
                |yes| {
                    if yes {
                        Verdict::holds()
                    } else {
                        Verdict {
                            status: Status::Fails,
                            witness: None,
                            horizon: None,
                            flags: vec![],
                        }
                    }
                },
            )
        }
    }
}

/// `v → A` for a symbolic target set.  Finite sets require all members to
/// be reached; cofinite sets require a path ending in an edge whose true
/// range is infinite, which covers the target up to a finite remainder.
pub fn reaches_set_symbolic(
    g: &SymbolicUltragraph,
    from: &str,
    target: &VertexSet<SymVertex>,
    opts: &Options,
) -> Result<Verdict, ClassifyError> {
    let a = g
        .vertex_from_label(from)
        .ok_or_else(|| ClassifyError::UnknownVertex(from.into()))?;
    let extra = g.min_window_for_sets(&[&VertexSet::finite([a]), target]);
    drive(
        g,
        opts,
        extra,
        |w| {
            let Some(x) = w.vertex_of(a) else {
                return Ok(None);
            };
            let yes = match target.polarity() {
                Polarity::Finite => {
                    let Some(lowered) = w.lower_set(target) else {
                        return Ok(None);
                    };
                    finite::reaches_set(&w.graph, x, &lowered)
                }
                Polarity::Cofinite => {
                    let sources = crate::model::forward_closure(&w.graph, x);
                    w.graph
                        .edges()
                        .iter()
                        .any(|e| e.infinite_range && sources.contains(&e.source))
                }
            };
            Ok(Some(yes))
        },
        |yes| {
            if yes {
                Verdict::holds()
            } else {
                Verdict {
                    status: Status::Fails,
                    witness: None,
                    horizon: None,
                    flags: vec![],
                }
            }
        },
    )
}

/// Whether a positive-length path from the vertex hits a loop source.
pub fn connects_to_loop(
    d: &Description,
    vertex: &str,
    opts: &Options,
) -> Result<Verdict, ClassifyError> {
    match d {
        Description::Finite(g) => {
            let v = g
                .vertex_named(vertex)
                .ok_or_else(|| ClassifyError::UnknownVertex(vertex.into()))?;
            Ok(if finite::connects_to_loop(g, v) {
                Verdict::holds()
            } else {
                Verdict::fails(Witness::NotConnectedToLoop {
                    vertex: vertex.into(),
                })
            })
        }
        Description::Symbolic(g) => {
            let a = g
                .vertex_from_label(vertex)
                .ok_or_else(|| ClassifyError::UnknownVertex(vertex.into()))?;
            let extra = g.min_window_for_sets(&[&VertexSet::finite([a])]);
            drive(
                g,
                opts,
                extra,
                |w| {
                    let Some(x) = w.vertex_of(a) else {
                        return Ok(None);
                    };
                    Ok(Some(finite::connects_to_loop(&w.graph, x)))
                },
                |yes| {
                    if yes {
                        Verdict::holds()
                    } else {
                        Verdict::fails(Witness::NotConnectedToLoop {
                            vertex: vertex.into(),
                        })
                    }
                },
            )
        }
    }
}

/// The classification of a simple algebra: AF when loop-free, purely
/// infinite when a loop exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Dichotomy {
    Af,
    PurelyInfinite,
    NotSimple(Box<Verdict>),
    Inconclusive(Option<i64>),
}

pub fn dichotomy(d: &Description, opts: &Options) -> Result<Dichotomy, ClassifyError> {
    let simple = is_simple(d, opts)?;
    match simple.status {
        Status::Inconclusive => Ok(Dichotomy::Inconclusive(simple.horizon)),
        Status::Fails => Ok(Dichotomy::NotSimple(Box::new(simple))),
        Status::Holds => {
            let af = is_af(d, opts)?;
            let pi = is_purely_infinite(d, opts)?;
            match (af.decided(), pi.decided()) {
                (Some(a), Some(p)) if a == p => {
                    Err(ClassifyError::DichotomyViolated { af: a, pi: p })
                }
                (Some(true), Some(false)) => Ok(Dichotomy::Af),
                (Some(false), Some(true)) => Ok(Dichotomy::PurelyInfinite),
                _ => Ok(Dichotomy::Inconclusive(af.horizon.or(pi.horizon))),
            }
        }
    }
}

// ---------------------------------------------------------------------------
// witness re-checking
// ---------------------------------------------------------------------------

fn witness_graph(
    d: &Description,
    verdict: &Verdict,
    opts: &Options,
) -> Result<(Ultragraph, Option<Window>), String> {
    match d {
        Description::Finite(g) => Ok((g.clone(), None)),
        Description::Symbolic(g) => {
            let top = verdict
                .horizon
                .or(opts.horizon)
                .unwrap_or_else(|| g.default_horizon())
                .max(g.min_window());
            let w = g.resolve(top).map_err(|e| e.to_string())?;
            Ok((w.graph.clone(), Some(w)))
        }
    }
}

/// Re-checks a negative verdict's witness through the public predicates.
/// Returns an error description when the witness does not certify the
/// verdict; positives and witness-free verdicts pass vacuously.
pub fn verify_witness(d: &Description, verdict: &Verdict, opts: &Options) -> Result<(), String> {
    let Some(witness) = &verdict.witness else {
        return Ok(());
    };
    let (g, window) = witness_graph(d, verdict, opts)?;
    let vertex = |name: &str| -> Result<VertexId, String> {
        g.vertex_named(name)
            .ok_or_else(|| format!("witness names unknown vertex {name}"))
    };
    match witness {
        Witness::ExitlessLoop { edges } => {
            let l = crate::model::Loop::from_edge_names(&g, edges)
                .map_err(|e| format!("witness loop invalid: {e}"))?;
            if finite::exit_exists(&g, &l) {
                return Err("witness loop has an exit".into());
            }
            Ok(())
        }
        Witness::LoopFound { edges } => {
            crate::model::Loop::from_edge_names(&g, edges)
                .map_err(|e| format!("witness loop invalid: {e}"))?;
            Ok(())
        }
        Witness::NotCofinal {
            vertex: v,
            cycle,
            escape_family,
        } => {
            let v = vertex(v)?;
            let reach = crate::model::forward_closure(&g, v);
            if !cycle.is_empty() {
                let l = crate::model::Loop::from_edge_names(&g, cycle)
                    .map_err(|e| format!("witness cycle invalid: {e}"))?;
                if l.sources(&g).iter().any(|s| reach.contains(s)) {
                    return Err("witness cycle is reachable from the vertex".into());
                }
                return Ok(());
            }
            match (escape_family, &window) {
                (Some(fam), Some(w)) => {
                    let escapes = g.vertex_ids().any(|u| {
                        !reach.contains(&u)
                            && g.is_deficient(u)
                            && w.escape_family(u) == Some(fam.as_str())
                    });
                    if escapes {
                        Ok(())
                    } else {
                        Err("no escape through the named family".into())
                    }
                }
                _ => Err("escape witness without a window".into()),
            }
        }
        Witness::SingularUnreached { from, to } => {
            let from = vertex(from)?;
            let to = vertex(to)?;
            if !g.singular_vertices().contains(&to) {
                return Err("witness target is not singular".into());
            }
            if finite::reaches(&g, from, to) {
                return Err("witness pair is actually connected".into());
            }
            Ok(())
        }
        Witness::ProperSaturatedHereditary { cofinite, members } => match d {
            Description::Finite(g) => {
                if *cofinite {
                    return Err("cofinite support over a finite graph".into());
                }
                let k: BTreeSet<VertexId> = members
                    .iter()
                    .map(|m| vertex(m))
                    .collect::<Result<_, _>>()?;
                if k.is_empty() || k.len() == g.vertex_count() {
                    return Err("witness support is not proper".into());
                }
                match crate::ideals::is_saturated(g, &k) {
                    Ok(check) if check.holds() => Ok(()),
                    Ok(_) => Err("witness support is not saturated".into()),
                    Err(e) => Err(format!("witness support rejected: {e}")),
                }
            }
            Description::Symbolic(sg) => {
                let syms: Vec<SymVertex> = members
                    .iter()
                    .map(|m| {
                        sg.vertex_from_label(m)
                            .ok_or_else(|| format!("unknown vertex {m}"))
                    })
                    .collect::<Result<_, _>>()?;
                let k = if *cofinite {
                    VertexSet::cofinite(syms)
                } else {
                    VertexSet::finite(syms)
                };
                if k.is_empty() || k.complement().is_empty() {
                    return Err("witness support is not proper".into());
                }
                match crate::ideals::is_saturated_symbolic(sg, &k) {
                    Ok(check) if check.holds() => Ok(()),
                    Ok(_) => Err("witness support is not saturated".into()),
                    Err(e) => Err(format!("witness support rejected: {e}")),
                }
            }
        },
        Witness::NotConnectedToLoop { vertex: v } => {
            let v = vertex(v)?;
            if finite::connects_to_loop(&g, v) {
                return Err("witness vertex does connect to a loop".into());
            }
            Ok(())
        }
        Witness::InfiniteRangeUncovered { edge, from } => {
            let e = g
                .edge_named(edge)
                .ok_or_else(|| format!("witness names unknown edge {edge}"))?;
            if !g.edge(e).infinite_range {
                return Err("witness edge does not have an infinite range".into());
            }
            let from = vertex(from)?;
            let sources = crate::model::forward_closure(&g, from);
            if g.edges()
                .iter()
                .any(|f| f.infinite_range && sources.contains(&f.source))
            {
                return Err("the vertex covers a cofinite part after all".into());
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ultragraph_from_matrix, DenseZeroOne};

    fn fin(g: Ultragraph) -> Description {
        Description::Finite(g)
    }

    fn full2() -> Description {
        fin(ultragraph_from_matrix(&DenseZeroOne::from_ints(&[&[1, 1], &[1, 1]]).unwrap()).unwrap())
    }

    #[test]
    fn condition_l_examples() {
        let opts = Options::default();
        let lone = fin(Ultragraph::from_parts(1, [("e".to_string(), 0, vec![0])]).unwrap());
        let v = condition_l(&lone, &opts).unwrap();
        assert_eq!(v.status, Status::Fails);
        assert_eq!(
            v.witness,
            Some(Witness::ExitlessLoop {
                edges: vec!["e".into()]
            })
        );
        assert!(verify_witness(&lone, &v, &opts).is_ok());

        assert_eq!(condition_l(&full2(), &opts).unwrap().status, Status::Holds);
    }

    #[test]
    fn simplicity_on_small_graphs() {
        let opts = Options::default();
        assert_eq!(is_simple(&full2(), &opts).unwrap().status, Status::Holds);

        // one edge into a sink: simple, and flagged as sensitive to the
        // strict reachability reading
        let single = fin(Ultragraph::from_parts(2, [("e".to_string(), 0, vec![1])]).unwrap());
        let v = is_simple(&single, &opts).unwrap();
        assert_eq!(v.status, Status::Holds);
        assert!(v.flags.contains(&Flag::ReflexivitySensitive));

        // two sinks: not simple
        let two_sinks = fin(Ultragraph::from_parts(
            3,
            [("a".to_string(), 0, vec![1]), ("b".to_string(), 0, vec![2])],
        )
        .unwrap());
        let v = is_simple(&two_sinks, &opts).unwrap();
        assert_eq!(v.status, Status::Fails);
        assert!(verify_witness(&two_sinks, &v, &opts).is_ok());

        // an empty-edge ultragraph with two vertices has two sinks
        let empty = fin(Ultragraph::from_parts(2, []).unwrap());
        assert_eq!(is_simple(&empty, &opts).unwrap().status, Status::Fails);
    }

    #[test]
    fn dichotomy_examples() {
        let opts = Options::default();
        assert_eq!(
            dichotomy(&full2(), &opts).unwrap(),
            Dichotomy::PurelyInfinite
        );

        let single = fin(Ultragraph::from_parts(2, [("e".to_string(), 0, vec![1])]).unwrap());
        assert_eq!(dichotomy(&single, &opts).unwrap(), Dichotomy::Af);

        let two_loops = fin(Ultragraph::from_parts(
            2,
            [("a".to_string(), 0, vec![0]), ("b".to_string(), 1, vec![1])],
        )
        .unwrap());
        assert!(matches!(
            dichotomy(&two_loops, &opts).unwrap(),
            Dichotomy::NotSimple(_)
        ));
    }

    #[test]
    fn purely_infinite_examples() {
        let opts = Options::default();
        assert_eq!(
            is_purely_infinite(&full2(), &opts).unwrap().status,
            Status::Holds
        );
        let single = fin(Ultragraph::from_parts(2, [("e".to_string(), 0, vec![1])]).unwrap());
        let v = is_purely_infinite(&single, &opts).unwrap();
        assert_eq!(v.status, Status::Fails);
        assert!(verify_witness(&single, &v, &opts).is_ok());
    }

    #[test]
    fn af_examples() {
        let opts = Options::default();
        let single = fin(Ultragraph::from_parts(2, [("e".to_string(), 0, vec![1])]).unwrap());
        assert_eq!(is_af(&single, &opts).unwrap().status, Status::Holds);
        let lone = fin(Ultragraph::from_parts(1, [("e".to_string(), 0, vec![0])]).unwrap());
        let v = is_af(&lone, &opts).unwrap();
        assert_eq!(v.status, Status::Fails);
        assert!(verify_witness(&lone, &v, &opts).is_ok());
    }

    #[test]
    fn reaches_names() {
        let opts = Options::default();
        let single = fin(Ultragraph::from_parts(2, [("e".to_string(), 0, vec![1])]).unwrap());
        assert_eq!(
            reaches(&single, "v0", "v1", &opts).unwrap().status,
            Status::Holds
        );
        assert_eq!(
            reaches(&single, "v1", "v0", &opts).unwrap().status,
            Status::Fails
        );
        assert_eq!(
            reaches(&single, "v1", "v1", &opts).unwrap().status,
            Status::Holds
        );
    }
}
