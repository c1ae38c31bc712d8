//! Command-line front end for the canonical-extension laboratory.
//!
//! Subcommands run the boolean pipeline, the vector pipeline, poset
//! operations, the full verification suite, exports, instance generation,
//! and replay of a saved report.  Exit code 0 means every check passed,
//! 1 means a check failed, and 2 means the invocation itself was invalid.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use canext_core::gen::Sampler;
use canext_core::io::{
    self, boolalg_to_json, envelope_table_csv, ideal_table_csv, poset_from_json, poset_fn_from_json,
    poset_fn_to_json, poset_to_dot, poset_to_json, vector_from_json, vector_to_json, Kind,
};
use canext_core::normal::{gamma, ideal_space};
use canext_core::poset::regular_opens;
use canext_core::report::Report;
use canext_core::suite::{self, InstanceSpec, SuiteConfig};
use canext_core::{fault, Error};

#[derive(Parser)]
#[command(name = "canext", version, about = "Canonical extensions of finite boolean and vector algebras, verified exactly")]
struct Cli {
    /// Inject a named defect for sensitivity testing (hidden).
    #[arg(long, global = true, hide = true)]
    mutant: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the boolean-algebra extension checks at a fixed atom count.
    Ba(BaArgs),
    /// Run the vector-algebra extension checks at a fixed dimension.
    Bal(BalArgs),
    /// Operate on a poset or poset-function document.
    Poset(PosetArgs),
    /// Run the whole verification suite from a configuration file.
    Suite(SuiteArgs),
    /// Export a document as DOT, CSV, or canonical JSON.
    Export(ExportArgs),
    /// Generate example input documents.
    Generate(GenerateArgs),
    /// Re-run the instance stored in a report.
    Replay(ReplayArgs),
}

#[derive(Args)]
struct BaArgs {
    /// Number of atoms of the base algebra.
    #[arg(long)]
    atoms: usize,
    /// Sample count for compactness families past the exhaustive range.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Seed for sampled families.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BalArgs {
    /// Dimension of the vector algebra.
    #[arg(long)]
    dim: usize,
    /// Number of seeded sample vectors.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Seed for the sample family.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Comma-separated compactness tolerances.
    #[arg(long, default_value = "1/2,1/4,1/8", value_delimiter = ',')]
    eps: Vec<String>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum PosetOp {
    /// List the regular open sets of a poset.
    RegularOpens,
    /// Compute the envelopes and normalization of a poset function.
    Normalize,
}

#[derive(Args)]
struct PosetArgs {
    /// Input document: a poset, or a poset function for normalization.
    #[arg(long)]
    file: PathBuf,
    #[arg(long, value_enum)]
    op: PosetOp,
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SuiteArgs {
    /// Configuration file; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write per-instance reports into this directory (overrides the
    /// configuration's output path).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ExportFormat {
    Dot,
    Csv,
    Json,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long, value_enum)]
    format: ExportFormat,
    /// Input document.
    #[arg(long)]
    file: PathBuf,
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum GenerateKind {
    Poset,
    Vector,
    Config,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: GenerateKind,
    /// Poset size or vector dimension.
    #[arg(long, default_value_t = 4)]
    size: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write the document here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReplayArgs {
    /// A report produced by an earlier run.
    #[arg(long)]
    file: PathBuf,
    /// Narrow to one named check.
    #[arg(long)]
    check: Option<String>,
    /// Write the replayed report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(name) = &cli.mutant {
        match fault::Fault::from_name(name) {
            Some(f) => fault::set(Some(f)),
            None => {
                eprintln!("unknown mutant: {name}");
                return ExitCode::from(2);
            }
        }
    }
    match run(cli.command) {
        Ok(pass) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<bool, Error> {
    match command {
        Command::Ba(args) => {
            let spec = InstanceSpec::BooleanExtension {
                atoms: args.atoms,
                samples: args.samples,
                seed: args.seed,
            };
            emit_report(&suite::run_instance(&spec), args.out.as_deref())
        }
        Command::Bal(args) => {
            let spec = InstanceSpec::VectorExtension {
                dim: args.dim,
                samples: args.samples,
                seed: args.seed,
                eps_grid: args.eps,
            };
            emit_report(&suite::run_instance(&spec), args.out.as_deref())
        }
        Command::Poset(args) => {
            let doc = read_json(&args.file)?;
            let text = match args.op {
                PosetOp::RegularOpens => {
                    let poset_json = match io::detect_kind(&doc)? {
                        Kind::Poset => from_value::<io::PosetJson>(doc)?,
                        other => {
                            return Err(Error::BadInput(format!(
                                "regular-opens expects a poset document, found {other:?}"
                            )))
                        }
                    };
                    let poset = Arc::new(poset_from_json(&poset_json)?);
                    let ro = regular_opens(Arc::clone(&poset))?;
                    let sets: Vec<Vec<&str>> = ro
                        .elements()
                        .iter()
                        .map(|u| u.iter().map(|&i| poset.label(i)).collect())
                        .collect();
                    pretty(&json!({
                        "poset": poset_to_json(&poset),
                        "regularOpens": sets,
                        "count": sets.len(),
                    }))
                }
                PosetOp::Normalize => {
                    let f = poset_fn_from_json(&from_value(doc)?)?;
                    let envelope = |g: &canext_core::normal::NormalFn| {
                        poset_fn_to_json(g).values
                    };
                    pretty(&json!({
                        "poset": poset_to_json(f.poset()),
                        "value": envelope(&f),
                        "upper": envelope(&f.upper()),
                        "lower": envelope(&f.lower()),
                        "normalized": envelope(&f.normalize()),
                        "isNormal": f.is_normal(),
                    }))
                }
            };
            write_out(&text, args.out.as_deref())?;
            Ok(true)
        }
        Command::Suite(args) => {
            let mut config = match &args.config {
                Some(path) => SuiteConfig::from_json_str(&read_text(path)?)?,
                None => SuiteConfig::default(),
            };
            config.apply_env_seed()?;
            if let Some(dir) = &args.out {
                config.output_path = Some(dir.display().to_string());
            }
            let start = Instant::now();
            let outcome = suite::run_suite(&config)?;
            eprintln!(
                "suite: {} instances in {:.2}s",
                outcome.reports.len(),
                start.elapsed().as_secs_f64()
            );
            let summary = serde_json::to_string_pretty(&outcome.summary(&config))
                .expect("summary serializes")
                + "\n";
            print!("{summary}");
            Ok(outcome.pass)
        }
        Command::Export(args) => {
            let doc = read_json(&args.file)?;
            let kind = io::detect_kind(&doc)?;
            let text = match (args.format, kind) {
                (ExportFormat::Dot, Kind::Poset) => {
                    poset_to_dot(&poset_from_json(&from_value(doc)?)?)
                }
                (ExportFormat::Dot, Kind::PosetFn) => {
                    let f = poset_fn_from_json(&from_value(doc)?)?;
                    poset_to_dot(f.poset())
                }
                (ExportFormat::Csv, Kind::PosetFn) => {
                    envelope_table_csv(&poset_fn_from_json(&from_value(doc)?)?)?
                }
                (ExportFormat::Csv, Kind::Vector) => {
                    let v = vector_from_json(&from_value(doc)?)?;
                    let space = ideal_space(v.dim())?;
                    ideal_table_csv(&gamma(v.dim(), &space, &v)?)?
                }
                (ExportFormat::Json, _) => canonical_json(&doc, kind)?,
                (_, k) => {
                    return Err(Error::BadInput(format!(
                        "cannot export a {k:?} document in that format"
                    )))
                }
            };
            write_out(&text, args.out.as_deref())?;
            Ok(true)
        }
        Command::Generate(args) => {
            let text = match args.kind {
                GenerateKind::Poset => {
                    let mut sampler = Sampler::new(args.seed);
                    pretty(&serde_json::to_value(poset_to_json(&sampler.poset(args.size)?))
                        .expect("poset serializes"))
                }
                GenerateKind::Vector => {
                    let mut sampler = Sampler::new(args.seed);
                    pretty(&serde_json::to_value(vector_to_json(&sampler.lvec(args.size)))
                        .expect("vector serializes"))
                }
                GenerateKind::Config => pretty(
                    &serde_json::to_value(SuiteConfig::default()).expect("config serializes"),
                ),
            };
            write_out(&text, args.out.as_deref())?;
            Ok(true)
        }
        Command::Replay(args) => {
            let doc = read_json(&args.file)?;
            let report = suite::replay(&doc, args.check.as_deref())?;
            emit_report(&report, args.out.as_deref())
        }
    }
}

fn emit_report(report: &Report, out: Option<&std::path::Path>) -> Result<bool, Error> {
    write_out(&report.to_canonical_json(), out)?;
    Ok(report.all_pass())
}

fn read_text(path: &std::path::Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::BadInput(format!("cannot read {}: {e}", path.display())))
}

fn read_json(path: &std::path::Path) -> Result<Value, Error> {
    serde_json::from_str(&read_text(path)?)
        .map_err(|e| Error::BadInput(format!("{} is not valid JSON: {e}", path.display())))
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value) -> Result<T, Error> {
    serde_json::from_value(v).map_err(|e| Error::BadInput(format!("malformed document: {e}")))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize") + "\n"
}

/// Validates a document of the detected kind and re-emits it canonically.
fn canonical_json(doc: &Value, kind: Kind) -> Result<String, Error> {
    let norm = match kind {
        Kind::Poset => serde_json::to_value(poset_to_json(&poset_from_json(&from_value(
            doc.clone(),
        )?)?)),
        Kind::BoolAlg => {
            let b = io::boolalg_from_json(&from_value(doc.clone())?)?;
            serde_json::to_value(boolalg_to_json(&b))
        }
        Kind::Vector => {
            let v = vector_from_json(&from_value(doc.clone())?)?;
            serde_json::to_value(vector_to_json(&v))
        }
        Kind::Ideal => {
            let i = io::ideal_from_json(&from_value(doc.clone())?)?;
            serde_json::to_value(io::ideal_to_json(&i))
        }
        Kind::PosetFn => {
            let f = poset_fn_from_json(&from_value(doc.clone())?)?;
            serde_json::to_value(poset_fn_to_json(&f))
        }
    };
    Ok(pretty(&norm.expect("documents serialize")))
}

fn write_out(text: &str, out: Option<&std::path::Path>) -> Result<(), Error> {
    match out {
        Some(path) => {
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent).map_err(|e| {
                        Error::BadInput(format!("cannot create {}: {e}", parent.display()))
                    })?;
                }
            }
            std::fs::write(path, text)
                .map_err(|e| Error::BadInput(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
