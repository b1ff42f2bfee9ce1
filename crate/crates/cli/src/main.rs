use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use vertex_proximity::axioms::CorpusConfig;
use vertex_proximity::{MeasureKind, WeightedMultigraph};
use vertex_proximity_cli::commands::{
    check, compute, corpus_files, examples, parse_properties, parse_regime, parse_vertex_set,
};
use vertex_proximity_cli::{parse_graph, CliError, Format, Outcome, RunConfig, Selector};

/// Proximity measures for weighted multigraphs and checks of their properties.
#[derive(Parser)]
#[command(name = "vproximity", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a proximity matrix for a graph file.
    Compute {
        /// paths, reliability, routes, forests, dense-forests, laplacian-pinv or qk
        measure: Selector,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        /// Dense-forest parameter; defaults to half the graph's threshold.
        #[arg(long)]
        alpha: Option<f64>,
        /// Multiply every weight by this factor first.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long, default_value = "matrix")]
        format: Format,
    },
    /// Check properties on a graph file, or over the seeded corpus without --graph.
    Check {
        measure: MeasureKind,
        /// Comma-separated property names, or `all` for the ten table rows.
        properties: String,
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Comma-separated 1-based vertices for the macrovertex check.
        #[arg(long)]
        set: Option<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
    },
    /// Reproduce the worked example orderings and pseudoinverse changes.
    Examples,
    /// Write seeded random graphs as edge-list files.
    Corpus {
        /// paths, routes, route-triangle, forests or integer-forests
        regime: String,
        #[arg(long)]
        directed: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Directory for one file per graph; standard output otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(path: &Path) -> Result<WeightedMultigraph, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    parse_graph(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Compute {
            measure,
            graph,
            tau,
            alpha,
            scale,
            format,
        } => {
            let cfg = RunConfig {
                tau,
                alpha,
                scale,
                format,
            };
            compute(measure, &load(&graph)?, &cfg)
        }
        Command::Check {
            measure,
            properties,
            graph,
            set,
            seed,
            count,
            tau,
            alpha,
            scale,
        } => {
            let properties = parse_properties(&properties)?;
            let set = set.as_deref().map(parse_vertex_set).transpose()?;
            let g = graph.as_deref().map(load).transpose()?;
            let corpus = CorpusConfig {
                seed,
                count,
                ..CorpusConfig::default()
            };
            let cfg = RunConfig {
                tau,
                alpha,
                scale,
                format: Format::Report,
            };
            check(
                measure,
                &properties,
                g.as_ref(),
                set.as_deref(),
                &corpus,
                &cfg,
            )
        }
        Command::Examples => examples(),
        Command::Corpus {
            regime,
            directed,
            seed,
            count,
            out,
        } => {
            let cfg = CorpusConfig {
                seed,
                count,
                ..CorpusConfig::default()
            };
            let files = corpus_files(parse_regime(&regime)?, directed, &cfg);
            let mut stdout = String::new();
            match out {
                Some(dir) => {
                    std::fs::create_dir_all(&dir)
                        .map_err(|e| CliError::Precondition(format!("{}: {e}", dir.display())))?;
                    for (name, text) in &files {
                        let path = dir.join(name);
                        std::fs::write(&path, text).map_err(|e| {
                            CliError::Precondition(format!("{}: {e}", path.display()))
                        })?;
                    }
                    stdout.push_str(&format!(
                        "wrote {} graphs to {}\n",
                        files.len(),
                        dir.display()
                    ));
                }
                None => {
                    for (_, text) in &files {
                        stdout.push_str(text);
                        stdout.push('\n');
                    }
                }
            }
            Ok(Outcome {
                stdout,
                stderr: String::new(),
                success: true,
            })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            eprint!("{}", outcome.stderr);
            if outcome.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
