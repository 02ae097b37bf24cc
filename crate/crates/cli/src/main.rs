use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use netrank_core::centrality::{compute_all, to_csv};
use netrank_core::generators::{
    ensure_connected, enumerate_all_nonisomorphic, enumerate_connected_nonisomorphic,
    load_initiators, mix_seed, write_corpus_dir, CorpusSample, DEFAULT_MAX_RETRIES,
};
use netrank_core::graph6::{to_graph6, HEADER};
use netrank_core::harness::{
    correlation_matrix, emit_all_tables, emit_heatmap, emit_tables, load_results, plan_experiments,
    run_experiment, write_results, Family, HarnessError, RunOptions, TableKind, DEFAULT_CONFIDENCE,
};
use netrank_core::stats::kendall_tau_b;
use netrank_core::{Graph, Measure, ModelConfig, ModelParams};

#[derive(Parser)]
#[command(name = "netrank", version, about = "Vertex centrality experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a connected network (or a directory of them) as edge lists
    Generate(GenerateArgs),
    /// Compute centrality measures for an edge-list file
    Compute {
        input: PathBuf,
        /// Comma-separated measure names or labels; all eight by default
        #[arg(long, value_delimiter = ',')]
        metrics: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Kendall tau-b between two columns of a CSV file
    Correlate {
        input: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Write all non-isomorphic connected graphs on n vertices as graph6
    Enumerate {
        n: usize,
        /// Include disconnected graphs
        #[arg(long)]
        all: bool,
        #[arg(long)]
        header: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an experiment configuration and write results plus tables
    Experiment {
        config: PathBuf,
        /// Worker threads (0 uses every core)
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long)]
        keep_vectors: bool,
        /// Overrides the configured output directory
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Rebuild report tables from a results directory
    Tables {
        results: PathBuf,
        /// correlation, granularity or best; writes every table when omitted
        #[arg(long)]
        which: Option<String>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Render the pooled correlation heatmap of a results directory as SVG
    Heatmap {
        results: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Restrict to one family key (ni, cs, sf, sw, gr, er, kg)
        #[arg(long)]
        family: Option<String>,
    },
}

#[derive(Args)]
struct GenerateArgs {
    /// cs, er, gr, sf, sw or kg
    #[arg(long)]
    model: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    p_c: Option<f64>,
    #[arg(long)]
    c: Option<usize>,
    #[arg(long)]
    covering: bool,
    #[arg(long)]
    initiator: Option<String>,
    #[arg(long)]
    initiators_file: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_RETRIES)]
    max_retries: usize,
    /// Number of samples; more than one requires --out-dir
    #[arg(long, default_value_t = 1)]
    samples: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

fn need<T>(value: Option<T>, flag: &str, model: &str) -> Result<T> {
    value.with_context(|| format!("model {model} needs --{flag}"))
}

fn model_params(a: &GenerateArgs) -> Result<ModelParams> {
    let m = a.model.as_str();
    Ok(match m {
        "er" => ModelParams::Er {
            n: need(a.n, "n", m)?,
            p: need(a.p, "p", m)?,
        },
        "gr" => ModelParams::Gr {
            n: need(a.n, "n", m)?,
            kappa: need(a.kappa, "kappa", m)?,
        },
        "sf" => ModelParams::Sf {
            n: need(a.n, "n", m)?,
            k: need(a.k, "k", m)?,
        },
        "sw" => ModelParams::Sw {
            n: need(a.n, "n", m)?,
            k: need(a.k, "k", m)?,
            p: need(a.p, "p", m)?,
        },
        "cs" => ModelParams::Cs {
            n: need(a.n, "n", m)?,
            p_c: need(a.p_c, "p-c", m)?,
            p: need(a.p, "p", m)?,
            c: need(a.c, "c", m)?,
            covering: a.covering,
        },
        "kg" => {
            let file = need(a.initiators_file.as_ref(), "initiators-file", m)?;
            let name = need(a.initiator.as_ref(), "initiator", m)?;
            let initiator = load_initiators(file)?
                .into_iter()
                .find(|i| &i.name == name)
                .with_context(|| format!("no initiator named {name}"))?;
            ModelParams::Kg {
                initiator,
                k: need(a.k, "k", m)? as u32,
            }
        }
        other => bail!("unknown model {other}"),
    })
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => io::stdout()
            .write_all(text.as_bytes())
            .context("writing to stdout"),
    }
}

fn generate(a: GenerateArgs) -> Result<()> {
    let params = model_params(&a)?;
    params.validate()?;
    if a.samples == 0 {
        bail!("--samples must be at least 1");
    }
    match &a.out_dir {
        Some(dir) => {
            let mut samples = Vec::with_capacity(a.samples);
            for i in 0..a.samples {
                let config = ModelConfig::new(params.clone(), mix_seed(&[a.seed, i as u64]));
                let drawn = ensure_connected(&config, a.max_retries)?;
                samples.push(CorpusSample {
                    config,
                    graph: drawn.graph,
                    retries: drawn.retries,
                });
            }
            write_corpus_dir(dir, &samples)?;
            eprintln!("wrote {} networks to {}", samples.len(), dir.display());
        }
        None => {
            if a.samples > 1 {
                bail!("--samples above 1 needs --out-dir");
            }
            let drawn = ensure_connected(&ModelConfig::new(params, a.seed), a.max_retries)?;
            eprintln!(
                "n={} m={} retries={}",
                drawn.graph.n(),
                drawn.graph.m(),
                drawn.retries
            );
            write_output(a.out.as_deref(), &drawn.graph.to_edge_list())?;
        }
    }
    Ok(())
}

fn parse_metrics(names: &[String]) -> Result<Vec<Measure>> {
    if names.is_empty() {
        return Ok(Measure::ALL.to_vec());
    }
    names
        .iter()
        .map(|s| s.trim().parse::<Measure>().map_err(anyhow::Error::from))
        .collect()
}

fn compute(input: &Path, metrics: &[String], out: Option<&Path>) -> Result<()> {
    let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let graph = Graph::from_edge_list(&text, None)?;
    let vectors = compute_all(&graph, &parse_metrics(metrics)?)?;
    write_output(out, &to_csv(&vectors))
}

fn csv_column(header: &[&str], name: &str) -> Result<usize> {
    header
        .iter()
        .position(|h| h.trim() == name)
        .with_context(|| format!("no column named {name}"))
}

fn correlate(input: &Path, x: &str, y: &str) -> Result<()> {
    let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<&str> = lines.next().context("empty CSV")?.split(',').collect();
    let (ix, iy) = (csv_column(&header, x)?, csv_column(&header, y)?);
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (row, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        let value = |i: usize| -> Result<f64> {
            let raw = fields
                .get(i)
                .with_context(|| format!("row {} is short", row + 2))?;
            raw.trim()
                .parse()
                .with_context(|| format!("row {}: bad number {raw:?}", row + 2))
        };
        xs.push(value(ix)?);
        ys.push(value(iy)?);
    }
    println!("{}", kendall_tau_b(&xs, &ys)?);
    Ok(())
}

fn enumerate(n: usize, all: bool, header: bool, out: Option<&Path>) -> Result<()> {
    let graphs = if all {
        enumerate_all_nonisomorphic(n)?
    } else {
        enumerate_connected_nonisomorphic(n)?
    };
    let mut text = String::new();
    for (i, g) in graphs.iter().enumerate() {
        if header && i == 0 {
            text.push_str(HEADER);
        }
        text.push_str(&to_graph6(g)?);
        text.push('\n');
    }
    eprintln!("{} graphs", graphs.len());
    write_output(out, &text)
}

fn experiment(
    config: &Path,
    workers: usize,
    keep_vectors: bool,
    output_dir: Option<PathBuf>,
) -> Result<ExitCode, HarnessError> {
    let plan = plan_experiments(config)?;
    let dir = output_dir.unwrap_or_else(|| plan.output_dir.clone());
    eprintln!(
        "{} cells, {} networks -> {}",
        plan.cells.len(),
        plan.total_networks(),
        dir.display()
    );
    let results = run_experiment(
        &plan,
        &RunOptions {
            workers,
            keep_vectors,
        },
    )?;
    write_results(&dir, &plan, &results)?;
    let failed = results.iter().filter(|r| !r.is_ok()).count();
    if failed < results.len() {
        emit_all_tables(&dir, &results, plan.confidence)?;
    }
    if failed > 0 {
        eprintln!("{failed} of {} samples failed", results.len());
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn tables(results_dir: &Path, which: Option<&str>, out_dir: Option<&Path>) -> Result<()> {
    let (results, confidence) = load_results(results_dir)?;
    let confidence = confidence.unwrap_or(DEFAULT_CONFIDENCE);
    match which {
        Some(kind) => {
            let kind: TableKind = kind.parse().map_err(anyhow::Error::msg)?;
            let csv = emit_tables(&results, kind, confidence)?;
            let out = out_dir.map(|d| d.join(format!("{}.csv", which.unwrap_or_default())));
            write_output(out.as_deref(), &csv)
        }
        None => {
            for path in emit_all_tables(out_dir.unwrap_or(results_dir), &results, confidence)? {
                eprintln!("wrote {}", path.display());
            }
            Ok(())
        }
    }
}

fn heatmap(results_dir: &Path, out: Option<&Path>, family: Option<&str>) -> Result<()> {
    let (results, confidence) = load_results(results_dir)?;
    let family = match family {
        Some(key) => Some(Family::from_key(key).with_context(|| format!("unknown family {key}"))?),
        None => None,
    };
    let matrix = correlation_matrix(
        &results,
        |r| family.map_or(true, |f| r.family == f),
        confidence.unwrap_or(DEFAULT_CONFIDENCE),
    );
    let path = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| results_dir.join("heatmap.svg"));
    emit_heatmap(&matrix, &path)?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Experiment {
            config,
            workers,
            keep_vectors,
            output_dir,
        } => match experiment(&config, workers, keep_vectors, output_dir) {
            Ok(code) => return code,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(e.exit_code() as u8);
            }
        },
        Command::Generate(args) => generate(args),
        Command::Compute {
            input,
            metrics,
            out,
        } => compute(&input, &metrics, out.as_deref()),
        Command::Correlate { input, x, y } => correlate(&input, &x, &y),
        Command::Enumerate {
            n,
            all,
            header,
            out,
        } => enumerate(n, all, header, out.as_deref()),
        Command::Tables {
            results,
            which,
            out_dir,
        } => tables(&results, which.as_deref(), out_dir.as_deref()),
        Command::Heatmap {
            results,
            out,
            family,
        } => heatmap(&results, out.as_deref(), family.as_deref()),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
