//! Batch verification front end. Every reporting subcommand emits one run
//! manifest (JSON by default, flat CSV rows on request) and exits 0 exactly
//! when all verdicts in the run agree; usage and parameter errors exit 2
//! with a message on the error stream, and a completed run with any
//! disagreement exits 1.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use msh::cache::DiskCache;
use msh::commands::{self, CommandOutput};
use msh::output::{now_ms, to_csv, RunHeader, RunManifest};
use msh_core::session::Session;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "msh",
    version,
    about = "Exact verification of multistep boundary maps on subset lattices over prime fields"
)]
struct Cli {
    /// Directory for the persistent elimination cache; falls back to the
    /// MSH_CACHE_DIR environment variable, and caching is off when neither
    /// is set.
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,

    /// Worker threads for sweep commands.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..=512))]
    jobs: u16,

    /// Output encoding for reporting commands.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Print one boundary-map matrix in the triplet interchange format.
    PhiMatrix {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        p: u8,
        /// Emit the upward (transposed) map into degree k instead.
        #[arg(long)]
        dual: bool,
    },

    /// Homology of the arithmetic-progression complexes at one (n, p, t);
    /// sweeps every base residue unless --a picks one.
    Homology {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: u8,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        a: Option<u32>,
    },

    /// Closed-form exactness predicate against brute-force elimination for
    /// every (n, t, k) up to --n-max.
    ExactnessTable {
        #[arg(long)]
        n_max: u32,
    },

    /// Closed-form split-exactness predicate against full complex profiles
    /// for every (n, t, a) up to --n-max.
    SplitTable {
        #[arg(long)]
        n_max: u32,
    },

    /// Structure of the induced middle endomorphism at one even n.
    Theta {
        #[arg(long)]
        n: u32,
    },

    /// Run one named verification sweep and exit 0 iff it fully agrees.
    Verify {
        #[arg(value_enum)]
        target: VerifyTarget,
        /// Largest ground-set size; each target has a documented default.
        #[arg(long)]
        n_max: Option<u32>,
    },

    /// Write one boundary-map matrix to a file in the triplet format.
    Export {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        p: u8,
        /// Export the upward (transposed) map into degree k instead.
        #[arg(long)]
        dual: bool,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyTarget {
    /// Two-step homology dimension table (default --n-max 14).
    Thm1,
    /// Exactness predicate equivalence sweep (default --n-max 12).
    Thm2,
    /// Split-exactness equivalence with homotopy witnesses (default --n-max 12).
    Thm3,
    /// Designated elements generate homology (default --n-max 14).
    #[value(name = "conj7.2")]
    Conj72,
    /// Restricted-homology dimension pattern (default --n-max 12).
    #[value(name = "conj7.3")]
    Conj73,
    /// Restricted-homology exactness pattern (default --n-max 12).
    #[value(name = "conj7.4")]
    Conj74,
    /// Characteristic-3 sign-dimension pattern (default --n-max 12).
    #[value(name = "conj7.5")]
    Conj75,
    /// Characteristic-5 Fibonacci dimensions (default --n-max 12).
    #[value(name = "conj7.6")]
    Conj76,
    /// Exact-integer identity suite on the default ranges.
    Identities,
}

impl VerifyTarget {
    fn tag(self) -> &'static str {
        match self {
            VerifyTarget::Thm1 => "thm1",
            VerifyTarget::Thm2 => "thm2",
            VerifyTarget::Thm3 => "thm3",
            VerifyTarget::Conj72 => "conj7.2",
            VerifyTarget::Conj73 => "conj7.3",
            VerifyTarget::Conj74 => "conj7.4",
            VerifyTarget::Conj75 => "conj7.5",
            VerifyTarget::Conj76 => "conj7.6",
            VerifyTarget::Identities => "identities",
        }
    }
}

enum Rendered {
    /// Raw text that is itself the interchange payload.
    Raw(String),
    /// A reporting command's structured output.
    Report(CommandOutput),
}

fn build_session(cli: &Cli) -> Session {
    let dir = cli
        .cache_dir
        .clone()
        .or_else(|| std::env::var_os("MSH_CACHE_DIR").map(PathBuf::from));
    match dir {
        Some(dir) => Session::with_store(Box::new(DiskCache::open(&dir, VERSION))),
        None => Session::new(),
    }
}

/// Retags a sweep reused by `verify` so the manifest names the actual
/// invocation.
fn as_verify(mut out: CommandOutput, target: VerifyTarget, n_max: u32) -> CommandOutput {
    out.command = "verify".to_string();
    out.parameters = BTreeMap::from([
        ("target".to_string(), target.tag().to_string()),
        ("n_max".to_string(), n_max.to_string()),
    ]);
    out
}

fn run(cli: &Cli) -> msh_core::Result<Rendered> {
    let ses = build_session(cli);
    let jobs = cli.jobs as usize;
    let rendered = match &cli.command {
        Command::PhiMatrix { n, t, k, p, dual } => {
            Rendered::Raw(commands::phi_matrix_text(*n, *t, *k, *p, *dual)?)
        }
        Command::Homology { n, p, t, a } => {
            Rendered::Report(commands::homology_profiles(&ses, *n, *p, *t, *a)?)
        }
        Command::ExactnessTable { n_max } => {
            Rendered::Report(commands::exactness_table(&ses, *n_max, jobs)?)
        }
        Command::SplitTable { n_max } => {
            Rendered::Report(commands::split_table(&ses, *n_max, jobs, false)?)
        }
        Command::Theta { n } => Rendered::Report(commands::theta_report(*n)?),
        Command::Verify { target, n_max } => {
            let cap = |default: u32| n_max.unwrap_or(default);
            let out = match target {
                VerifyTarget::Thm1 => {
                    as_verify(commands::two_step_table(&ses, cap(14), jobs)?, *target, cap(14))
                }
                VerifyTarget::Thm2 => {
                    as_verify(commands::exactness_table(&ses, cap(12), jobs)?, *target, cap(12))
                }
                VerifyTarget::Thm3 => {
                    as_verify(commands::split_table(&ses, cap(12), jobs, true)?, *target, cap(12))
                }
                VerifyTarget::Conj72 => commands::conj72_sweep(&ses, cap(14), jobs)?,
                VerifyTarget::Conj73 => commands::restricted_sweep(cap(12), jobs, "7.3")?,
                VerifyTarget::Conj74 => commands::restricted_sweep(cap(12), jobs, "7.4")?,
                VerifyTarget::Conj75 => commands::odd_sweep(&ses, cap(12), jobs, "7.5")?,
                VerifyTarget::Conj76 => commands::odd_sweep(&ses, cap(12), jobs, "7.6")?,
                VerifyTarget::Identities => commands::identities_suite(*n_max)?,
            };
            Rendered::Report(out)
        }
        Command::Export { n, t, k, p, dual, out } => {
            Rendered::Report(commands::export_matrix(*n, *t, *k, *p, *dual, out)?)
        }
    };
    Ok(rendered)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = now_ms();
    match run(&cli) {
        Ok(Rendered::Raw(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok(Rendered::Report(out)) => {
            let finished = now_ms();
            match cli.format {
                Format::Json => {
                    let manifest = RunManifest {
                        header: RunHeader {
                            started_unix_ms: started,
                            finished_unix_ms: finished,
                            timings_ms: BTreeMap::from([(
                                "total".to_string(),
                                finished.saturating_sub(started),
                            )]),
                        },
                        command: out.command.clone(),
                        parameters: out.parameters.clone(),
                        tool_version: VERSION.to_string(),
                        results: out.results.clone(),
                    };
                    println!("{}", manifest.to_json());
                }
                Format::Csv => print!("{}", to_csv(&out.rows)),
            }
            if out.agrees {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
