//! Command dispatch: reads a document, runs the requested checkers and
//! assembles a [`Report`].
//!
//! Exit codes: 0 the property holds, 1 it fails, 2 inconclusive, 3 input
//! error, 4 internal error (a witness failed re-verification or the two
//! simplicity characterizations disagreed).

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;

use ultragraph::classify::{self, ClassifyError, Dichotomy, Status, Verdict};
use ultragraph::ideals;
use ultragraph::ktheory;
use ultragraph::model::symbolic::singular_vertices_symbolic;
use ultragraph::model::{
    graph_from_matrix, graph_from_symbolic_matrix, ultragraph_from_matrix,
    ultragraph_from_symbolic_matrix, Description,
};
use ultragraph::setalg;
use ultragraph::Options;

use crate::parse::{parse_matrix, parse_ultragraph, ZeroOneMatrixKind};
use crate::report::{apply_verdict, status_str, witness_json, Report};

#[derive(Debug)]
pub enum CliError {
    /// Bad input: parse errors, precondition violations, exhausted budgets.
    Input(String),
    /// The tool contradicted itself; never expected.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 3,
            CliError::Internal(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Internal(m) => m,
        }
    }
}

fn classify_error(e: ClassifyError) -> CliError {
    match e {
        ClassifyError::InternalDisagreement { .. } | ClassifyError::DichotomyViolated { .. } => {
            CliError::Internal(e.to_string())
        }
        other => CliError::Input(other.to_string()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    Simplicity,
    ConditionL,
    Cofinality,
    Af,
    PurelyInfinite,
    Dichotomy,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::Simplicity => "simplicity",
            Property::ConditionL => "condition-l",
            Property::Cofinality => "cofinality",
            Property::Af => "af",
            Property::PurelyInfinite => "purely-infinite",
            Property::Dichotomy => "dichotomy",
        }
    }

    fn citations(self) -> Vec<String> {
        let names: &[&str] = match self {
            Property::Simplicity => &[
                "simplicity-via-saturated-hereditary-lattice",
                "simplicity-via-reachability",
            ],
            Property::ConditionL => &["loop-exit-condition"],
            Property::Cofinality => &["cofinality-via-restricted-cycles"],
            Property::Af => &["af-iff-no-loops"],
            Property::PurelyInfinite => &["purely-infinite-iff-exits-and-loop-connectivity"],
            Property::Dichotomy => &["simple-dichotomy"],
        };
        names.iter().map(|s| s.to_string()).collect()
    }
}

#[derive(Debug, Clone)]
pub enum Command {
    Check { property: Property, file: PathBuf },
    CompareMatrix { file: PathBuf },
    Ktheory { file: PathBuf, sizes: Vec<usize> },
    Ideals { file: PathBuf },
    Singular { file: PathBuf },
    RegularIdeal { file: PathBuf },
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub horizon: Option<i64>,
    pub budget: Option<u64>,
    pub verify_witness: bool,
}

impl RunOptions {
    fn core_options(&self) -> Options {
        let budget = self
            .budget
            .or_else(|| {
                std::env::var("ULTRA_BUDGET")
                    .ok()
                    .and_then(|s| s.parse().ok())
            })
            .unwrap_or(ultragraph::DEFAULT_BUDGET);
        Options {
            budget,
            horizon: self.horizon,
        }
    }
}

fn read(file: &Path) -> Result<String, CliError> {
    fs::read_to_string(file)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", file.display())))
}

fn load_description(file: &Path) -> Result<Description, CliError> {
    let text = read(file)?;
    let first = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#'));
    if first.is_some_and(|l| l.starts_with("matrix") || l.starts_with(['0', '1'])) {
        return Err(CliError::Input(
            "this looks like a matrix document; use compare-matrix or ktheory".into(),
        ));
    }
    let doc = parse_ultragraph(&text).map_err(|d| CliError::Input(d.to_string()))?;
    doc.build().map_err(|d| CliError::Input(d.to_string()))
}

fn load_matrix(file: &Path) -> Result<ZeroOneMatrixKind, CliError> {
    let text = read(file)?;
    let doc = parse_matrix(&text).map_err(|d| CliError::Input(d.to_string()))?;
    doc.build().map_err(|d| CliError::Input(d.to_string()))
}

fn verdict_json(v: &Verdict) -> serde_json::Value {
    json!({
        "verdict": status_str(v.status),
        "witness": v.witness.as_ref().map(witness_json),
        "horizon": v.horizon,
    })
}

fn maybe_verify(
    report: &mut Report,
    d: &Description,
    verdict: &Verdict,
    opts: &Options,
    requested: bool,
) -> Result<(), CliError> {
    if !requested || verdict.witness.is_none() {
        return Ok(());
    }
    classify::verify_witness(d, verdict, opts)
        .map_err(|e| CliError::Internal(format!("witness failed re-verification: {e}")))?;
    report.witness_verified = Some(true);
    Ok(())
}

pub fn run(cmd: &Command, run_opts: &RunOptions) -> Result<Report, CliError> {
    let opts = run_opts.core_options();
    match cmd {
        Command::Check { property, file } => {
            let d = load_description(file)?;
            let mut report = Report::new("check", &file.display().to_string());
            report.property = Some(property.name().to_string());
            report.citations = property.citations();
            match property {
                Property::Simplicity => {
                    let (lattice, reach) =
                        classify::simplicity_methods(&d, &opts).map_err(classify_error)?;
                    let verdict = classify::is_simple(&d, &opts).map_err(classify_error)?;
                    report.details = Some(json!({
                        "lattice": verdict_json(&lattice),
                        "reachability": verdict_json(&reach),
                    }));
                    apply_verdict(&mut report, &verdict);
                    maybe_verify(&mut report, &d, &verdict, &opts, run_opts.verify_witness)?;
                }
                Property::Dichotomy => {
                    let outcome = classify::dichotomy(&d, &opts).map_err(classify_error)?;
                    let (class, code) = match &outcome {
                        Dichotomy::Af => ("af", 0),
                        Dichotomy::PurelyInfinite => ("purely-infinite", 0),
                        Dichotomy::NotSimple(_) => ("not-simple", 1),
                        Dichotomy::Inconclusive(_) => ("inconclusive", 2),
                    };
                    report.classification = Some(class.to_string());
                    report.exit_code = code;
                    if let Dichotomy::NotSimple(v) = &outcome {
                        report.witness = v.witness.as_ref().map(witness_json);
                        report.horizon = v.horizon;
                        maybe_verify(&mut report, &d, v, &opts, run_opts.verify_witness)?;
                    }
                    if let Dichotomy::Inconclusive(h) = &outcome {
                        report.horizon = *h;
                    }
                }
                simple => {
                    let verdict = match simple {
                        Property::ConditionL => classify::condition_l(&d, &opts),
                        Property::Cofinality => classify::is_cofinal(&d, &opts),
                        Property::Af => classify::is_af(&d, &opts),
                        Property::PurelyInfinite => classify::is_purely_infinite(&d, &opts),
                        _ => unreachable!("handled above"),
                    }
                    .map_err(classify_error)?;
                    apply_verdict(&mut report, &verdict);
                    maybe_verify(&mut report, &d, &verdict, &opts, run_opts.verify_witness)?;
                }
            }
            Ok(report)
        }
        Command::CompareMatrix { file } => {
            let kind = load_matrix(file)?;
            let (ga, gr) = match &kind {
                ZeroOneMatrixKind::Dense(a) => (
                    Description::Finite(
                        ultragraph_from_matrix(a).map_err(|e| CliError::Input(e.to_string()))?,
                    ),
                    Description::Finite(graph_from_matrix(a)),
                ),
                ZeroOneMatrixKind::Symbolic(a) => (
                    Description::Symbolic(
                        ultragraph_from_symbolic_matrix(a)
                            .map_err(|e| CliError::Input(e.to_string()))?,
                    ),
                    Description::Symbolic(
                        graph_from_symbolic_matrix(a)
                            .map_err(|e| CliError::Input(e.to_string()))?,
                    ),
                ),
            };
            let va = classify::is_simple(&ga, &opts).map_err(classify_error)?;
            let vg = classify::is_simple(&gr, &opts).map_err(classify_error)?;
            if run_opts.verify_witness {
                let mut scratch = Report::new("", "");
                maybe_verify(&mut scratch, &ga, &va, &opts, true)?;
                maybe_verify(&mut scratch, &gr, &vg, &opts, true)?;
            }
            let mut report = Report::new("compare-matrix", &file.display().to_string());
            report.property = Some("simplicity".to_string());
            report.citations = Property::Simplicity.citations();
            report.details = Some(json!({
                "ultragraph": verdict_json(&va),
                "graph": verdict_json(&vg),
            }));
            report.exit_code =
                if va.status == Status::Inconclusive || vg.status == Status::Inconclusive {
                    2
                } else {
                    0
                };
            Ok(report)
        }
        Command::Ktheory { file, sizes } => {
            let kind = load_matrix(file)?;
            let mut report = Report::new("ktheory", &file.display().to_string());
            report.citations = vec!["kernel-cokernel-of-edge-matrix".to_string()];
            match kind {
                ZeroOneMatrixKind::Dense(a) => {
                    let k = ktheory::k_groups(&a);
                    report.details = Some(json!({
                        "k0": {
                            "invariant_factors":
                                k.k0_invariant_factors.iter().map(|x| x.to_string())
                                    .collect::<Vec<_>>(),
                            "free_rank": k.k0_free_rank,
                        },
                        "k1": {
                            "free_rank": k.k1_free_rank,
                            "basis": k.k1_basis.iter()
                                .map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>())
                                .collect::<Vec<_>>(),
                        },
                    }));
                    report.exit_code = 0;
                }
                ZeroOneMatrixKind::Symbolic(a) => {
                    let stab = ktheory::truncated_kernel_stabilization(&a, sizes)
                        .map_err(|e| CliError::Input(e.to_string()))?;
                    report.details = Some(json!({
                        "sizes": stab.per_size,
                        "stabilized": stab.stabilized,
                        "interior_kernel_rank": stab.rank,
                        "basis": stab.basis.iter()
                            .map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>())
                            .collect::<Vec<_>>(),
                        "boundary_guard": stab.guard,
                    }));
                    report.exit_code = if stab.stabilized { 0 } else { 2 };
                }
            }
            Ok(report)
        }
        Command::Ideals { file } => {
            let d = load_description(file)?;
            let g = d.as_finite().ok_or_else(|| {
                CliError::Input("saturated-hereditary enumeration needs a finite ultragraph".into())
            })?;
            let all = ideals::enumerate_saturated_hereditary(g, opts.budget)
                .map_err(|e| CliError::Input(e.to_string()))?;
            let mut report = Report::new("ideals", &file.display().to_string());
            report.citations = vec!["saturated-hereditary-supports".to_string()];
            report.details = Some(json!({
                "count": all.len(),
                "supports": all.iter().map(|k| g.vertex_names(k)).collect::<Vec<_>>(),
                "note": "each support generates a gauge-invariant ideal of the algebra",
            }));
            Ok(report)
        }
        Command::Singular { file } => {
            let d = load_description(file)?;
            let mut report = Report::new("singular", &file.display().to_string());
            report.citations = vec!["sinks-and-infinite-emitters".to_string()];
            report.details = Some(match &d {
                Description::Finite(g) => {
                    json!({ "cofinite": false, "members": g.vertex_names(&g.singular_vertices()) })
                }
                Description::Symbolic(g) => {
                    let s = singular_vertices_symbolic(g);
                    json!({
                        "cofinite": !s.is_finite(),
                        "members": s.support().iter().map(|&v| g.vertex_label(v))
                            .collect::<Vec<_>>(),
                    })
                }
            });
            Ok(report)
        }
        Command::RegularIdeal { file } => {
            let d = load_description(file)?;
            let mut report = Report::new("regular-ideal", &file.display().to_string());
            report.citations = vec!["finite-emitter-support".to_string()];
            report.details = Some(match &d {
                Description::Finite(g) => {
                    let t = setalg::regular_ideal_support(g)
                        .map_err(|e| CliError::Input(e.to_string()))?;
                    json!({ "cofinite": false, "members": g.vertex_names(&t) })
                }
                Description::Symbolic(g) => {
                    let t = setalg::regular_ideal_support_symbolic(g)
                        .map_err(|e| CliError::Input(e.to_string()))?;
                    json!({
                        "cofinite": !t.is_finite(),
                        "members": t.support().iter().map(|&v| g.vertex_label(v))
                            .collect::<Vec<_>>(),
                    })
                }
            });
            Ok(report)
        }
    }
}
