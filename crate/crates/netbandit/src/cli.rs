//! Command-line interface: `run` one (dataset, design, alpha) experiment,
//! `sweep` a range of alphas over designs, `plot` stored results, and
//! `gen` a synthetic dataset in Planetoid format.

use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::designs::DesignKind;
use crate::harness::{
    run_alpha_sweep, run_experiment, read_sweep_csv, ExperimentConfig, SweepConfig,
    DATA_DIR_ENV,
};
use crate::mcl::MclParams;
use crate::plot::{emit_tradeoff_svg, emit_trace_svg, read_trace_series};
use crate::synth::{generate, write_planetoid, SynthConfig};

#[derive(Parser)]
#[command(name = "netbandit", version, about = "Network experiments under interference: A/B vs UCB bandit designs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment (S runs of one design) and write results.
    Run(RunArgs),
    /// Sweep alpha values across designs and write a sweep table.
    Sweep(SweepArgs),
    /// Render SVG figures from stored results.
    Plot(PlotArgs),
    /// Generate a synthetic attributed network in Planetoid format.
    Gen(GenArgs),
}

/// Flat key-value config file mirroring the CLI flags; CLI overrides file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    dataset: Option<String>,
    data_dir: Option<PathBuf>,
    design: Option<String>,
    alpha: Option<f64>,
    runs: Option<usize>,
    interval: Option<usize>,
    p_treated: Option<f64>,
    p_control: Option<f64>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    explore_fraction: Option<f64>,
    mcl_inflation: Option<f64>,
    mcl_expansion: Option<u32>,
    mcl_max_iterations: Option<usize>,
    gamma_sample_cap: Option<usize>,
}

#[derive(Args)]
struct CommonArgs {
    /// Dataset name; expects <name>.content / <name>.cites under the data dir.
    #[arg(long)]
    dataset: Option<String>,

    /// Directory holding dataset files.
    #[arg(long, env = DATA_DIR_ENV)]
    data_dir: Option<PathBuf>,

    #[arg(long)]
    alpha: Option<f64>,

    /// Number of runs S.
    #[arg(long)]
    runs: Option<usize>,

    /// Checkpoint interval in arrivals.
    #[arg(long)]
    interval: Option<usize>,

    #[arg(long)]
    p_treated: Option<f64>,

    #[arg(long)]
    p_control: Option<f64>,

    /// Master seed; all run seeds derive from it.
    #[arg(long)]
    seed: Option<u64>,

    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Stop each run after this fraction of the network has arrived.
    #[arg(long)]
    explore_fraction: Option<f64>,

    /// Recompute clustering/matching even if a cache exists.
    #[arg(long)]
    recluster: bool,

    /// TOML config file with the same keys as the flags above.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// node-ab | cluster-ab | cmatch-ab | node-mab | cluster-mab | cmatch-mab
    #[arg(long)]
    design: Option<String>,

    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Alphas, e.g. `1..30` (inclusive integers) or `1,4,8,15,30`.
    #[arg(long, default_value = "1..30")]
    alphas: String,

    /// Comma-separated designs to sweep; defaults to all six.
    #[arg(long)]
    designs: Option<String>,

    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct PlotArgs {
    /// Results directory containing sweep.csv and/or aggregate.csv.
    #[arg(long)]
    input: PathBuf,

    /// tradeoff | trace
    #[arg(long)]
    figure: String,

    /// Output directory; defaults to the input directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// Dataset name to write.
    #[arg(long)]
    name: String,

    /// Directory to write <name>.content / <name>.cites into.
    #[arg(long, env = DATA_DIR_ENV)]
    data_dir: PathBuf,

    #[arg(long, default_value_t = 30)]
    communities: usize,

    #[arg(long, default_value_t = 12)]
    community_size: usize,

    #[arg(long, default_value_t = 0.5)]
    p_intra: f64,

    #[arg(long, default_value_t = 0.004)]
    p_inter: f64,

    /// Communities with private noise pools (zero cross-community
    /// similarity); defaults to a quarter of the communities.
    #[arg(long)]
    isolated_communities: Option<usize>,

    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn load_file_config(path: Option<&PathBuf>) -> anyhow::Result<FileConfig> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => {
            let raw = std::fs::read_to_string(p)
                .with_context(|| format!("reading config {}", p.display()))?;
            toml::from_str(&raw).with_context(|| format!("parsing config {}", p.display()))
        }
    }
}

fn build_experiment_config(
    common: &CommonArgs,
    design: Option<&str>,
) -> anyhow::Result<ExperimentConfig> {
    let file = load_file_config(common.config.as_ref())?;
    let dataset = common
        .dataset
        .clone()
        .or(file.dataset)
        .context("--dataset is required")?;
    let data_dir = common
        .data_dir
        .clone()
        .or(file.data_dir)
        .with_context(|| format!("--data-dir or ${DATA_DIR_ENV} is required"))?;
    let out = common
        .out
        .clone()
        .or(file.out)
        .unwrap_or_else(|| PathBuf::from("results"));

    let mut config = ExperimentConfig::new(&dataset, data_dir, out);
    if let Some(d) = design.map(str::to_owned).or(file.design) {
        config.design = d.parse()?;
    }
    let mut mcl = MclParams::default();
    if let Some(v) = file.mcl_inflation {
        mcl.inflation = v;
    }
    if let Some(v) = file.mcl_expansion {
        mcl.expansion = v;
    }
    if let Some(v) = file.mcl_max_iterations {
        mcl.max_iterations = v;
    }
    config.mcl = mcl;
    if let Some(v) = file.gamma_sample_cap {
        config.gamma_sample_cap = v;
    }
    if let Some(v) = common.alpha.or(file.alpha) {
        config.alpha = v;
    }
    if let Some(v) = common.runs.or(file.runs) {
        config.runs = v;
    }
    if let Some(v) = common.interval.or(file.interval) {
        config.interval = v;
    }
    if let Some(v) = common.p_treated.or(file.p_treated) {
        config.p_treated = v;
    }
    if let Some(v) = common.p_control.or(file.p_control) {
        config.p_control = v;
    }
    if let Some(v) = common.seed.or(file.seed) {
        config.master_seed = v;
    }
    if let Some(v) = common.explore_fraction.or(file.explore_fraction) {
        config.explore_fraction = v;
    }
    config.recluster = common.recluster;
    config.validate()?;
    Ok(config)
}

fn parse_alphas(spec: &str) -> anyhow::Result<Vec<f64>> {
    if let Some((lo, hi)) = spec.split_once("..") {
        let lo: i64 = lo.trim().parse().context("bad alpha range start")?;
        let hi: i64 = hi.trim().parse().context("bad alpha range end")?;
        if lo > hi {
            bail!("empty alpha range {spec}");
        }
        return Ok((lo..=hi).map(|a| a as f64).collect());
    }
    spec.split(',')
        .map(|s| s.trim().parse::<f64>().context("bad alpha value"))
        .collect()
}

fn parse_designs(spec: Option<&str>) -> anyhow::Result<Vec<DesignKind>> {
    match spec {
        None => Ok(DesignKind::ALL.to_vec()),
        Some(s) => s
            .split(',')
            .map(|d| d.trim().parse::<DesignKind>().map_err(Into::into))
            .collect(),
    }
}

pub fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Run(args) => {
            let config = build_experiment_config(&args.common, args.design.as_deref())?;
            let output = run_experiment(&config)?;
            let last = output.final_row();
            println!(
                "{} {} alpha={} runs={}: final arrivals={} rmse_pct={} mean_ra={:.4}",
                config.dataset,
                config.design,
                config.alpha,
                config.runs,
                last.arrivals,
                last.rmse_pct
                    .map_or("undefined".to_string(), |v| format!("{v:.2}")),
                last.mean_ra,
            );
            println!("results written to {}", config.out_dir.display());
        }
        Command::Sweep(args) => {
            let base = build_experiment_config(&args.common, None)?;
            let sweep = SweepConfig {
                base: base.clone(),
                alphas: parse_alphas(&args.alphas)?,
                designs: parse_designs(args.designs.as_deref())?,
            };
            let rows = run_alpha_sweep(&sweep)?;
            println!(
                "{} sweep cells written to {}",
                rows.len(),
                base.out_dir.join("sweep.csv").display()
            );
        }
        Command::Plot(args) => {
            let out = args.out.clone().unwrap_or_else(|| args.input.clone());
            std::fs::create_dir_all(&out)?;
            match args.figure.as_str() {
                "tradeoff" => {
                    let rows = read_sweep_csv(&args.input.join("sweep.csv"))?;
                    match emit_tradeoff_svg(&rows, &out)? {
                        Some(path) => println!("wrote {}", path.display()),
                        None => println!("nothing to plot"),
                    }
                }
                "trace" => {
                    let series = read_trace_series(&args.input.join("aggregate.csv"))?;
                    let written = emit_trace_svg(&series, &out)?;
                    for path in written {
                        println!("wrote {}", path.display());
                    }
                }
                other => bail!("unknown figure `{other}` (expected tradeoff|trace)"),
            }
        }
        Command::Gen(args) => {
            let config = SynthConfig {
                communities: args.communities,
                community_size: args.community_size,
                p_intra: args.p_intra,
                p_inter: args.p_inter,
                isolated_communities: args
                    .isolated_communities
                    .unwrap_or(args.communities / 4),
                seed: args.seed,
                ..SynthConfig::default()
            };
            let graph = generate(&config);
            write_planetoid(&graph, &args.data_dir, &args.name)?;
            println!(
                "wrote {} ({} nodes, {} edges, d={}) to {}",
                args.name,
                graph.node_count(),
                graph.edge_count(),
                graph.attribute_dim(),
                args.data_dir.display()
            );
        }
    }
    Ok(())
}
