use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ultragraph_cli::commands::{run, Command, Property, RunOptions};

#[derive(Parser)]
#[command(
    name = "ultra",
    about = "Structural invariants of ultragraphs and their edge matrices",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write the machine-readable report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Enumeration budget (default from ULTRA_BUDGET, then 1000000).
    #[arg(long, global = true, value_name = "N")]
    budget: Option<u64>,
    /// Window top for symbolic inputs.
    #[arg(long, global = true, value_name = "N")]
    horizon: Option<i64>,
    /// Re-verify every negative witness through the public predicates.
    #[arg(long, global = true)]
    verify_witness: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum PropertyArg {
    Simplicity,
    ConditionL,
    Cofinality,
    Af,
    PurelyInfinite,
    Dichotomy,
}

impl From<PropertyArg> for Property {
    fn from(p: PropertyArg) -> Property {
        match p {
            PropertyArg::Simplicity => Property::Simplicity,
            PropertyArg::ConditionL => Property::ConditionL,
            PropertyArg::Cofinality => Property::Cofinality,
            PropertyArg::Af => Property::Af,
            PropertyArg::PurelyInfinite => Property::PurelyInfinite,
            PropertyArg::Dichotomy => Property::Dichotomy,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide a structural property of an ultragraph document.
    Check {
        #[arg(value_enum)]
        property: PropertyArg,
        file: PathBuf,
    },
    /// Compare the simplicity of the ultragraph and the ordinary graph of
    /// one {0,1} matrix.
    CompareMatrix { file: PathBuf },
    /// K-groups of a dense matrix, or the truncated kernel stabilization
    /// report for a symbolic one.
    Ktheory {
        file: PathBuf,
        /// Truncation sizes for symbolic matrices.
        #[arg(long, value_delimiter = ',', default_values_t = [12usize, 24, 36, 48])]
        sizes: Vec<usize>,
    },
    /// Enumerate the saturated hereditary supports of a finite ultragraph.
    Ideals { file: PathBuf },
    /// List the singular vertices (sinks and infinite emitters).
    Singular { file: PathBuf },
    /// The support of the regular part (needs a sink-free ultragraph).
    RegularIdeal { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = RunOptions {
        horizon: cli.horizon,
        budget: cli.budget,
        verify_witness: cli.verify_witness,
    };
    let cmd = match cli.cmd {
        Cmd::Check { property, file } => Command::Check {
            property: property.into(),
            file,
        },
        Cmd::CompareMatrix { file } => Command::CompareMatrix { file },
        Cmd::Ktheory { file, sizes } => Command::Ktheory { file, sizes },
        Cmd::Ideals { file } => Command::Ideals { file },
        Cmd::Singular { file } => Command::Singular { file },
        Cmd::RegularIdeal { file } => Command::RegularIdeal { file },
    };
    match run(&cmd, &opts) {
        Ok(report) => {
            print!("{}", report.human());
            if let Some(path) = cli.json {
                let body = serde_json::to_string_pretty(&report).expect("reports always serialize");
                if let Err(e) = std::fs::write(&path, body) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(3);
                }
            }
            ExitCode::from(u8::try_from(report.exit_code).unwrap_or(3))
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(u8::try_from(e.exit_code()).unwrap_or(3))
        }
    }
}
