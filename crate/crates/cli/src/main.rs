//! `modsep` command-line interface.
//!
//! Exit codes: 0 on success, 1 when a verification or audit check fails,
//! 2 on usage, parse or I/O errors.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use modsep::corpus;
use modsep::experiment::{run_experiment, write_csv, ExperimentSpec};
use modsep::generators::{generate, Family, GeneratorSpec};
use modsep::io::{graph_to_string, load_graph, Format};
use modsep::modularity::{
    assemble_bound, brute_force_modularity, lower_bound_with_run, parse_partition, score_partition,
    Partition, BRUTE_FORCE_LIMIT,
};
use modsep::partitioner::{audit_run, run_separator, SeparatorConfig};
use modsep::spectral::SolverConfig;
use modsep::suites::{run_suite, Suite};
use modsep::Graph;

#[derive(Parser)]
#[command(
    name = "modsep",
    version,
    about = "Modularity lower bounds via recursive Cheeger cuts"
)]
struct Cli {
    #[command(flatten)]
    solver: SolverArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SolverArgs {
    /// Eigensolver residual tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Eigensolver operator-application budget (default 10n + 1000).
    #[arg(long = "max-iters", global = true)]
    max_iters: Option<usize>,
    /// Graphs with at most this many vertices use the dense eigensolver.
    #[arg(long = "dense-cutoff", global = true, default_value_t = 64)]
    dense_cutoff: usize,
    /// Seed for generators and eigensolver start vectors.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            tolerance: self.tol,
            max_iterations: self.max_iters,
            dense_cutoff: self.dense_cutoff,
            seed: self.seed,
            ..SolverConfig::default()
        }
    }
}

#[derive(Args)]
struct GraphInput {
    /// Graph file, or `-` for standard input.
    graph: PathBuf,
    /// Input format: edge-list or metis.
    #[arg(long, default_value = "edge-list")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph from one of the built-in families.
    Generate {
        /// star, cycle, path, grid, torus-grid, apollonian, complete,
        /// random-cubic or two-triangles-bridge.
        family: Family,
        /// Size parameter (leaves, vertices, side length or depth).
        size: Option<usize>,
        #[arg(long, default_value = "edge-list")]
        format: Format,
        /// Output file (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score a partition given as one block id per line.
    Score {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long = "partition-file")]
        partition_file: PathBuf,
    },
    /// Exact maximum modularity by exhaustive enumeration.
    Oracle {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long = "max-n", default_value_t = BRUTE_FORCE_LIMIT)]
        max_n: usize,
    },
    /// Modularity lower bound from the separator partition.
    Bound {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
    },
    /// Run the recursive separator and print the run as JSON.
    Partition {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        /// Keep the full charge ledger and audit the run.
        #[arg(long)]
        audit: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a property suite over the built-in corpus.
    Verify {
        /// cheeger, lambda-order, oracle or audit.
        suite: Suite,
    },
    /// Sweep a family over sizes, epsilons and seeds and write CSV.
    Experiment {
        family: Family,
        /// Comma-separated size parameters.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0.1")]
        epsilon: Vec<f64>,
        /// Comma-separated generator seeds (overrides --seed).
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<u64>,
        /// Append a wall_ms column (makes output non-reproducible).
        #[arg(long)]
        timing: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Check(String),
    Usage(String),
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn open_output(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_input(path: &Path) -> Result<Vec<u8>, Failure> {
    let mut buf = Vec::new();
    if path == Path::new("-") {
        io::stdin().read_to_end(&mut buf)?;
    } else {
        File::open(path)
            .and_then(|mut f| f.read_to_end(&mut buf))
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    Ok(buf)
}

fn load(input: &GraphInput) -> Result<Graph, Failure> {
    let bytes = read_input(&input.graph)?;
    load_graph(bytes.as_slice(), input.format)
        .map_err(|e| Failure::Usage(format!("{}: {e}", input.graph.display())))
}

fn separator_config(
    epsilon: f64,
    solver: &SolverArgs,
    audit: bool,
) -> Result<SeparatorConfig, Failure> {
    let cfg = SeparatorConfig {
        epsilon,
        spectral: solver.config(),
        charge_audit: audit,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn print_json(value: &serde_json::Value, out: &mut dyn Write) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let solver = cli.solver;
    solver.config().validate()?;
    match cli.command {
        Command::Generate {
            family,
            size,
            format,
            out,
        } => {
            let size = match (family, size) {
                (Family::TwoTrianglesBridge, _) => size.unwrap_or(0),
                (_, Some(s)) => s,
                (_, None) => return Err(Failure::Usage(format!("family {family} needs a size"))),
            };
            let g = generate(&GeneratorSpec::new(family, size).with_seed(solver.seed))?;
            let mut w = open_output(&out)?;
            w.write_all(graph_to_string(&g, format).as_bytes())?;
            w.flush()?;
            eprintln!("n={} m={} max_degree={}", g.n(), g.m(), g.max_degree());
        }
        Command::Score {
            input,
            partition_file,
        } => {
            let g = load(&input)?;
            let text = String::from_utf8(read_input(&partition_file)?)
                .map_err(|e| Failure::Usage(format!("{}: {e}", partition_file.display())))?;
            let p = Partition::from_labels(&g, &parse_partition(&text)?)?;
            let report = score_partition(&g, &p)?;
            print_json(&serde_json::to_value(&report)?, &mut io::stdout().lock())?;
        }
        Command::Oracle { input, max_n } => {
            let g = load(&input)?;
            if g.n() > max_n.min(BRUTE_FORCE_LIMIT) {
                return Err(Failure::Usage(format!(
                    "graph has {} vertices, oracle limit is {}",
                    g.n(),
                    max_n.min(BRUTE_FORCE_LIMIT)
                )));
            }
            let best = brute_force_modularity(&g)?;
            print_json(&serde_json::to_value(&best)?, &mut io::stdout().lock())?;
        }
        Command::Bound { input, epsilon } => {
            let g = load(&input)?;
            let cfg = separator_config(epsilon, &solver, false)?;
            let (report, run) = lower_bound_with_run(&g, &cfg)?;
            let decomposition = match &run {
                Some(run) => Some(assemble_bound(run, &g)?),
                None => None,
            };
            let value = json!({
                "epsilon": epsilon,
                "report": report,
                "bound": decomposition,
            });
            print_json(&value, &mut io::stdout().lock())?;
        }
        Command::Partition {
            input,
            epsilon,
            audit,
            out,
        } => {
            let g = load(&input)?;
            let cfg = separator_config(epsilon, &solver, audit)?;
            let run = run_separator(&g, &cfg)?;
            let report = audit.then(|| audit_run(&run, &g, &cfg));
            let value = json!({
                "n": run.n,
                "m": run.m,
                "epsilon": run.epsilon,
                "deleted": run.deleted_edges.len(),
                "deleted_fraction": run.deleted_fraction(),
                "max_root_weight": run.max_root_weight(),
                "charge_bound": cfg.charge_bound(),
                "max_charge_count": run.ledger.max_count(),
                "total_charge": run.ledger.total_charge(),
                "components": run.components,
                "root_weights": run.root_weights,
                "deleted_edges": run.deleted_edges,
                "charge_counts": run.ledger.counts,
                "trace": run.trace,
                "audit": report,
            });
            let mut w = open_output(&out)?;
            print_json(&value, &mut *w)?;
            if let Some(report) = report {
                if !report.passed() {
                    let names: Vec<&str> = report.failures().map(|c| c.name).collect();
                    return Err(Failure::Check(format!(
                        "audit failed: {}",
                        names.join(", ")
                    )));
                }
            }
        }
        Command::Verify { suite } => {
            let corpus = corpus::builtin();
            let report = run_suite(suite, &corpus, &solver.config());
            println!(
                "suite {}: {} checks, {} failed",
                report.suite,
                report.checks,
                report.failures.len()
            );
            for f in &report.failures {
                println!("FAIL {f}");
            }
            if !report.passed() {
                return Err(Failure::Check(format!("suite {} failed", report.suite)));
            }
        }
        Command::Experiment {
            family,
            sizes,
            epsilon,
            seeds,
            timing,
            out,
        } => {
            let spec = ExperimentSpec {
                family,
                sizes,
                epsilons: epsilon,
                seeds: if seeds.is_empty() {
                    vec![solver.seed]
                } else {
                    seeds
                },
            };
            let rows = run_experiment(&spec, &solver.config(), timing)?;
            write_csv(&rows, open_output(&out)?)?;
            if let Some(bad) = rows.iter().find(|r| !r.audit_passed) {
                return Err(Failure::Check(format!(
                    "audit failed for {} size {} epsilon {}",
                    bad.family, bad.size, bad.epsilon
                )));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
