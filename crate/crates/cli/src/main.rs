mod commands;
mod experiment;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use rgcount::estimators::{SampleConfig, SampleMode, Target};
use rgcount::graph::{generate_gnp, GenSpec};
use rgcount::EdgeProb;

use commands::Query;
use report::Format;

#[derive(Parser)]
#[command(
    name = "rgcount",
    version,
    about = "Approximate and exact counting of cliques, independent sets and clique covers in random graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample G(n, p) and write it as an edge list.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: EdgeProb,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout if omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Count exactly by enumeration.
    Exact {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        target: Target,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "text")]
        format: Format,
    },
    /// Run the sampling estimator.
    Estimate(EstimateArgs),
    /// Closed-form moment, nesting and critical-ratio queries.
    Analytic {
        #[command(subcommand)]
        query: AnalyticCommand,
    },
    /// Run a parameter grid and write a report.
    Experiment {
        #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
        preset: Option<String>,
        /// Flat "key = value" experiment file.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Maximum number of concurrently running grid cells.
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        format: Option<Format>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct EstimateArgs {
    /// Edge-list file; otherwise a graph is generated from --n, --p and --graph-seed.
    #[arg(long, conflicts_with_all = ["n", "graph_seed"])]
    graph: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    /// Edge probability; also used to derive rho analytically.
    #[arg(long)]
    p: Option<EdgeProb>,
    #[arg(long)]
    graph_seed: Option<u64>,
    #[arg(long)]
    target: Target,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "fixed")]
    mode: SampleMode,
    /// Bound on the critical ratio; derived from --p when omitted.
    #[arg(long)]
    rho: Option<f64>,
    /// Carry sample values as exact rationals.
    #[arg(long)]
    exact_mode: bool,
    #[arg(long, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum AnalyticCommand {
    /// Expected number of k-cliques' binomial moment closed form.
    Moment {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: EdgeProb,
    },
    Nesting {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: EdgeProb,
    },
    /// Nesting polynomial as "exponent:coefficient" terms, or its value at --p.
    Fpoly {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        p: Option<EdgeProb>,
    },
    Crr {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: EdgeProb,
    },
    /// Cover critical ratio: the full product, one step by residual size, or
    /// one step by literal index.
    CoverCrr {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: EdgeProb,
        #[arg(long)]
        step: Option<u64>,
        #[arg(long)]
        literal: Option<u64>,
    },
    Stirling {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        j: usize,
    },
    H {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        ell: f64,
        #[arg(long)]
        p: f64,
    },
    /// Exponent g(i); without --i prints the maximizing integer and its value.
    G {
        #[arg(long)]
        n: f64,
        #[arg(long)]
        i: Option<f64>,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        p: f64,
    },
}

impl From<AnalyticCommand> for Query {
    fn from(c: AnalyticCommand) -> Self {
        match c {
            AnalyticCommand::Moment { n, k, p } => Query::Moment { n, k, p },
            AnalyticCommand::Nesting { k, n, p } => Query::Nesting { k, n, p },
            AnalyticCommand::Fpoly { k, j, p } => Query::Fpoly { k, j, p },
            AnalyticCommand::Crr { k, n, p } => Query::Crr { k, n, p },
            AnalyticCommand::CoverCrr {
                k,
                n,
                p,
                step,
                literal,
            } => Query::CoverCrr {
                k,
                n,
                p,
                step,
                literal,
            },
            AnalyticCommand::Stirling { k, j } => Query::Stirling { k, j },
            AnalyticCommand::H { k, i, ell, p } => Query::H { k, i, ell, p },
            AnalyticCommand::G { n, i, eps, p } => Query::G { n, i, eps, p },
        }
    }
}

fn estimate(args: EstimateArgs) -> Result<()> {
    let g = match (&args.graph, args.n, args.p, args.graph_seed) {
        (Some(path), ..) => commands::load(path)?,
        (None, Some(n), Some(p), seed) => generate_gnp(&GenSpec {
            n,
            p,
            seed: seed.unwrap_or(0),
        }),
        _ => bail!("give either --graph or both --n and --p"),
    };
    let mut cfg = SampleConfig::new(args.epsilon, args.delta)?
        .with_mode(args.mode)
        .with_exact(args.exact_mode);
    if let Some(p) = args.p {
        cfg = cfg.with_edge_probability(p);
    }
    if let Some(rho) = args.rho {
        cfg = cfg.with_rho(rho)?;
    }
    let mut row = commands::estimate_row(&g, args.target, args.k, &cfg, args.seed)?;
    row.id = "estimate-0000".into();
    report::emit(&[row], args.format, None)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen { n, p, seed, out } => commands::gen(&GenSpec { n, p, seed }, out.as_deref())?,
        Command::Exact {
            graph,
            target,
            k,
            format,
        } => {
            let g = commands::load(&graph)?;
            let mut row = commands::exact_row(&g, target, k)?;
            row.id = "exact-0000".into();
            match format {
                Format::Text => println!("{}", row.oracle.unwrap_or_default()),
                f => report::emit(&[row], f, None)?,
            }
        }
        Command::Estimate(args) => estimate(args)?,
        Command::Analytic { query } => {
            let (value, note) = commands::analytic_query(&query.into())?;
            if let Some(note) = note {
                eprintln!("note: {note}");
            }
            println!("{value}");
        }
        Command::Experiment {
            preset,
            spec,
            jobs,
            format,
            out,
        } => {
            let mut exp = match (preset, spec) {
                (Some(name), _) => experiment::preset(&name)?,
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    experiment::parse_spec(&text)
                        .with_context(|| format!("in {}", path.display()))?
                }
                (None, None) => unreachable!("clap requires one of --preset and --spec"),
            };
            if jobs == Some(0) {
                bail!("--jobs must be positive");
            }
            if out.is_some() {
                exp.out = out;
            }
            let format = format.or(exp.format).unwrap_or(Format::Csv);
            let rows = experiment::run(&exp, jobs)?;
            report::emit(&rows, format, exp.out.as_deref())?;
            if report::report_failures(&rows) {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            // Configuration mistakes are usage errors.
            match err.downcast_ref::<rgcount::Error>() {
                Some(rgcount::Error::Config(_) | rgcount::Error::InvalidArgument(_)) => {
                    ExitCode::from(2)
                }
                _ => ExitCode::FAILURE,
            }
        }
    }
}
