//! Experiment orchestration: dataset loading, clustering/matching caches,
//! multi-run experiments, alpha sweeps, and CSV/JSON outputs.

use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cmatch::{build_matching, ClusterMatchMap, MatchArtifacts, DEFAULT_GAMMA_SAMPLE};
use crate::designs::DesignKind;
use crate::error::{Error, Result};
use crate::graph::{load_citation_dataset, AttributedGraph};
use crate::mcl::{mcl_cluster, validate_partition, Clustering, MclParams};
use crate::metrics::{aggregate, AggregateRow, RunTrace};
use crate::runner::{run_single, RunParams};

/// Environment variable naming the directory that holds dataset folders.
pub const DATA_DIR_ENV: &str = "NETBANDIT_DATA_DIR";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dataset: String,
    /// Directory containing `<dataset>.content` / `<dataset>.cites`
    /// (directly or under a `<dataset>/` subdirectory).
    pub data_dir: PathBuf,
    pub design: DesignKind,
    pub alpha: f64,
    pub runs: usize,
    pub interval: usize,
    pub p_treated: f64,
    pub p_control: f64,
    pub master_seed: u64,
    pub mcl: MclParams,
    pub gamma_sample_cap: usize,
    pub explore_fraction: f64,
    pub out_dir: PathBuf,
    pub recluster: bool,
}

impl ExperimentConfig {
    pub fn new(dataset: &str, data_dir: impl Into<PathBuf>, out_dir: impl Into<PathBuf>) -> Self {
        ExperimentConfig {
            dataset: dataset.to_string(),
            data_dir: data_dir.into(),
            design: DesignKind::NodeAb,
            alpha: 8.0,
            runs: 10,
            interval: 50,
            p_treated: 0.6,
            p_control: 0.2,
            master_seed: 42,
            mcl: MclParams::default(),
            gamma_sample_cap: DEFAULT_GAMMA_SAMPLE,
            explore_fraction: 1.0,
            out_dir: out_dir.into(),
            recluster: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs < 1 {
            return Err(Error::Config("runs must be >= 1".into()));
        }
        if self.interval < 1 {
            return Err(Error::Config("interval must be >= 1".into()));
        }
        if self.alpha < 0.0 {
            return Err(Error::Config("alpha must be >= 0".into()));
        }
        if !(0.0..=1.0).contains(&self.explore_fraction) || self.explore_fraction == 0.0 {
            return Err(Error::Config("explore-fraction must be in (0, 1]".into()));
        }
        Ok(())
    }

    pub fn true_tte(&self) -> f64 {
        self.p_treated - self.p_control
    }
}

/// Derive a child seed from the master seed and a context tag.
pub fn derive_seed(master: u64, tag: &str, index: u64) -> u64 {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update(tag.as_bytes());
    h.update(index.to_le_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().unwrap())
}

/// Locate `<name>.content` / `<name>.cites` under the data directory.
pub fn dataset_paths(data_dir: &Path, name: &str) -> Result<(PathBuf, PathBuf)> {
    for base in [data_dir.to_path_buf(), data_dir.join(name)] {
        let content = base.join(format!("{name}.content"));
        let cites = base.join(format!("{name}.cites"));
        if content.exists() && cites.exists() {
            return Ok((content, cites));
        }
    }
    Err(Error::Config(format!(
        "dataset `{name}` not found under {}",
        data_dir.display()
    )))
}

pub fn load_dataset(data_dir: &Path, name: &str) -> Result<AttributedGraph> {
    let (content_path, cites_path) = dataset_paths(data_dir, name)?;
    let content = fs::File::open(&content_path).map_err(|e| Error::io(&content_path, e))?;
    let cites = fs::File::open(&cites_path).map_err(|e| Error::io(&cites_path, e))?;
    let (graph, _stats) =
        load_citation_dataset(BufReader::new(content), BufReader::new(cites))?;
    Ok(graph)
}

/// Graph plus the cached derived artifacts every design shares.
#[derive(Debug, Clone)]
pub struct PreparedDataset {
    pub graph: AttributedGraph,
    pub clustering: Clustering,
    pub mcl_converged: bool,
    pub matching: MatchArtifacts,
    pub cache_key: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheFile {
    cache_key: String,
    dataset: String,
    mcl: MclParams,
    gamma_sample_cap: usize,
    mcl_converged: bool,
    assignment: Vec<usize>,
    matching: MatchArtifacts,
}

fn cache_key(graph: &AttributedGraph, mcl: &MclParams, gamma_sample_cap: usize) -> String {
    let mut h = Sha256::new();
    h.update(graph.content_digest().as_bytes());
    h.update(serde_json::to_vec(mcl).unwrap());
    h.update((gamma_sample_cap as u64).to_le_bytes());
    let digest = h.finalize();
    digest[..16].iter().map(|b| format!("{b:02x}")).collect()
}

/// Load the dataset and compute (or reuse) its clustering and matching.
///
/// The cache file lives at `<out_dir>/cache/<dataset>.cluster.json`. A
/// cache whose key no longer matches the dataset content and parameters
/// is an error unless `recluster` is set.
pub fn prepare_dataset(config: &ExperimentConfig) -> Result<PreparedDataset> {
    let graph = load_dataset(&config.data_dir, &config.dataset)?;
    prepare_graph(config, graph)
}

/// As [`prepare_dataset`] but for a graph already in memory.
pub fn prepare_graph(
    config: &ExperimentConfig,
    graph: AttributedGraph,
) -> Result<PreparedDataset> {
    let key = cache_key(&graph, &config.mcl, config.gamma_sample_cap);
    let cache_dir = config.out_dir.join("cache");
    let cache_path = cache_dir.join(format!("{}.cluster.json", config.dataset));

    if cache_path.exists() && !config.recluster {
        let raw = fs::read_to_string(&cache_path).map_err(|e| Error::io(&cache_path, e))?;
        let cached: CacheFile =
            serde_json::from_str(&raw).map_err(|e| Error::Serde(e.to_string()))?;
        if cached.cache_key != key {
            return Err(Error::StaleCache {
                name: config.dataset.clone(),
            });
        }
        let clustering = Clustering::from_assignment(cached.assignment);
        return Ok(PreparedDataset {
            graph,
            clustering,
            mcl_converged: cached.mcl_converged,
            matching: cached.matching,
            cache_key: key,
        });
    }

    let outcome = mcl_cluster(&graph, &config.mcl);
    debug_assert!(validate_partition(&outcome.clustering, &graph));
    let matching = build_matching(
        &graph,
        &outcome.clustering,
        config.gamma_sample_cap,
        derive_seed(config.master_seed, "gamma-sample", 0),
    );

    fs::create_dir_all(&cache_dir).map_err(|e| Error::io(&cache_dir, e))?;
    let file = CacheFile {
        cache_key: key.clone(),
        dataset: config.dataset.clone(),
        mcl: config.mcl,
        gamma_sample_cap: config.gamma_sample_cap,
        mcl_converged: outcome.converged,
        assignment: outcome.clustering.assignment.clone(),
        matching: matching.clone(),
    };
    let json = serde_json::to_string(&file).map_err(|e| Error::Serde(e.to_string()))?;
    fs::write(&cache_path, json).map_err(|e| Error::io(&cache_path, e))?;

    Ok(PreparedDataset {
        graph,
        clustering: outcome.clustering,
        mcl_converged: outcome.converged,
        matching,
        cache_key: key,
    })
}

/// Traces and aggregate for one (design, alpha) cell.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub config: ExperimentConfig,
    pub traces: Vec<RunTrace>,
    pub aggregate: Vec<AggregateRow>,
}

impl ExperimentOutput {
    pub fn final_row(&self) -> &AggregateRow {
        self.aggregate.last().expect("nonempty aggregate")
    }
}

fn run_params(config: &ExperimentConfig, run: usize) -> RunParams {
    let s = run as u64;
    RunParams {
        design: config.design,
        alpha: config.alpha,
        interval: config.interval,
        p_treated: config.p_treated,
        p_control: config.p_control,
        // shared across designs and alphas: paired comparisons
        arrival_seed: derive_seed(config.master_seed, "arrival", s),
        world_seed: derive_seed(config.master_seed, "world", s),
        assign_seed: derive_seed(
            config.master_seed,
            &format!("assign:{}", config.design),
            s,
        ),
        explore_fraction: config.explore_fraction,
    }
}

/// Run all S runs of one design over a prepared dataset.
pub fn run_cell(config: &ExperimentConfig, prepared: &PreparedDataset) -> Result<ExperimentOutput> {
    config.validate()?;
    let clustering = config.design.needs_clustering().then_some(&prepared.clustering);
    let match_map: Option<&ClusterMatchMap> = config
        .design
        .needs_match_map()
        .then_some(&prepared.matching.match_map);

    let traces: Result<Vec<RunTrace>> = (0..config.runs)
        .into_par_iter()
        .map(|run| {
            let params = run_params(config, run);
            run_single(&prepared.graph, clustering, match_map, &params, run)
                .map(|out| out.trace)
        })
        .collect();
    let traces = traces?;
    let agg = aggregate(&traces, config.true_tte());
    Ok(ExperimentOutput {
        config: config.clone(),
        traces,
        aggregate: agg,
    })
}

/// Prepare the dataset, run the configured design, and write `trace.csv`,
/// `aggregate.csv`, and `manifest.json` to the output directory.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let prepared = prepare_dataset(config)?;
    let output = run_cell(config, &prepared)?;
    write_outputs(&output, &prepared)?;
    Ok(output)
}

fn write_outputs(output: &ExperimentOutput, prepared: &PreparedDataset) -> Result<()> {
    let dir = &output.config.out_dir;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_trace_csv(&dir.join("trace.csv"), &[output])?;
    write_aggregate_csv(&dir.join("aggregate.csv"), &[output])?;

    let manifest = serde_json::json!({
        "config": output.config,
        "cache_key": prepared.cache_key,
        "cluster_count": prepared.clustering.cluster_count(),
        "mcl_converged": prepared.mcl_converged,
        "gamma": prepared.matching.gamma,
        "beta": prepared.matching.beta,
        "gamma_sample_size": prepared.matching.gamma_sample_size,
        "gamma_sample_seed": prepared.matching.gamma_sample_seed,
        "matched_cluster_pairs": prepared.matching.match_map.pairs().len(),
        "node_pair_count": prepared.matching.node_pair_count,
    });
    let path = dir.join("manifest.json");
    fs::write(&path, serde_json::to_string_pretty(&manifest).unwrap())
        .map_err(|e| Error::io(&path, e))?;
    Ok(())
}

/// Write per-run checkpoint rows for one or more cells.
pub fn write_trace_csv(path: &Path, outputs: &[&ExperimentOutput]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Serde(e.to_string()))?;
    w.write_record([
        "dataset",
        "design",
        "alpha",
        "run",
        "arrivals",
        "n_treated",
        "n_control",
        "tte_estimate",
        "tte_error_pct",
        "ra_ratio",
    ])
    .map_err(|e| Error::Serde(e.to_string()))?;
    for output in outputs {
        let cfg = &output.config;
        let truth = cfg.true_tte();
        for trace in &output.traces {
            for cp in &trace.checkpoints {
                let (estimate, error_pct) = match cp.tte_estimate {
                    Some(e) => (
                        format!("{e}"),
                        format!("{}", (truth - e).abs() / truth * 100.0),
                    ),
                    None => (String::new(), String::new()),
                };
                w.write_record([
                    cfg.dataset.as_str(),
                    cfg.design.as_str(),
                    &format!("{}", cfg.alpha),
                    &format!("{}", trace.run),
                    &format!("{}", cp.arrivals),
                    &format!("{}", cp.n_treated),
                    &format!("{}", cp.n_control),
                    &estimate,
                    &error_pct,
                    &format!("{}", cp.ra_ratio),
                ])
                .map_err(|e| Error::Serde(e.to_string()))?;
            }
        }
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Write per-checkpoint cross-run aggregates for one or more cells.
pub fn write_aggregate_csv(path: &Path, outputs: &[&ExperimentOutput]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Serde(e.to_string()))?;
    w.write_record([
        "dataset",
        "design",
        "alpha",
        "arrivals",
        "rmse_pct",
        "mean_ra",
        "defined_runs",
        "total_runs",
    ])
    .map_err(|e| Error::Serde(e.to_string()))?;
    for output in outputs {
        let cfg = &output.config;
        for row in &output.aggregate {
            w.write_record([
                cfg.dataset.as_str(),
                cfg.design.as_str(),
                &format!("{}", cfg.alpha),
                &format!("{}", row.arrivals),
                &row.rmse_pct.map_or(String::new(), |v| format!("{v}")),
                &format!("{}", row.mean_ra),
                &format!("{}", row.defined_runs),
                &format!("{}", row.total_runs),
            ])
            .map_err(|e| Error::Serde(e.to_string()))?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// An alpha sweep over one or more designs.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub base: ExperimentConfig,
    pub alphas: Vec<f64>,
    pub designs: Vec<DesignKind>,
}

/// Final-checkpoint summary for one (design, alpha) cell.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub dataset: String,
    pub design: DesignKind,
    /// `None` for A/B designs, which ignore alpha.
    pub alpha: Option<f64>,
    pub rmse_pct: Option<f64>,
    pub mean_ra: f64,
}

/// Run every (design, alpha) cell; A/B designs run once since alpha has
/// no effect on them. Writes `sweep.csv` to the output directory.
pub fn run_alpha_sweep(sweep: &SweepConfig) -> Result<Vec<SweepRow>> {
    if sweep.alphas.is_empty() {
        return Err(Error::Config("alpha sweep needs at least one alpha".into()));
    }
    let prepared = prepare_dataset(&sweep.base)?;
    let mut rows = Vec::new();
    for &design in &sweep.designs {
        let alphas: Vec<Option<f64>> = if design.is_bandit() {
            sweep.alphas.iter().map(|&a| Some(a)).collect()
        } else {
            vec![None]
        };
        for alpha in alphas {
            let mut config = sweep.base.clone();
            config.design = design;
            if let Some(a) = alpha {
                config.alpha = a;
            }
            let output = run_cell(&config, &prepared)?;
            let last = output.final_row();
            rows.push(SweepRow {
                dataset: config.dataset.clone(),
                design,
                alpha,
                rmse_pct: last.rmse_pct,
                mean_ra: last.mean_ra,
            });
        }
    }
    let dir = &sweep.base.out_dir;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_sweep_csv(&dir.join("sweep.csv"), &rows)?;
    Ok(rows)
}

pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Serde(e.to_string()))?;
    w.write_record(["dataset", "design", "alpha", "rmse_pct", "mean_ra"])
        .map_err(|e| Error::Serde(e.to_string()))?;
    for row in rows {
        w.write_record([
            row.dataset.as_str(),
            row.design.as_str(),
            &row.alpha.map_or(String::new(), |a| format!("{a}")),
            &row.rmse_pct.map_or(String::new(), |v| format!("{v}")),
            &format!("{}", row.mean_ra),
        ])
        .map_err(|e| Error::Serde(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

pub fn read_sweep_csv(path: &Path) -> Result<Vec<SweepRow>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::Serde(e.to_string()))?;
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record.map_err(|e| Error::Serde(e.to_string()))?;
        let parse_opt = |s: &str| -> Option<f64> {
            if s.is_empty() {
                None
            } else {
                s.parse().ok()
            }
        };
        rows.push(SweepRow {
            dataset: record[0].to_string(),
            design: record[1].parse()?,
            alpha: parse_opt(&record[2]),
            rmse_pct: parse_opt(&record[3]),
            mean_ra: record[4]
                .parse()
                .map_err(|_| Error::Serde("bad mean_ra".into()))?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{generate, write_planetoid, SynthConfig};

    fn small_synth_dir() -> (tempfile::TempDir, SynthConfig) {
        let cfg = SynthConfig {
            communities: 6,
            community_size: 6,
            seed: 5,
            ..SynthConfig::default()
        };
        let g = generate(&cfg);
        let dir = tempfile::tempdir().unwrap();
        write_planetoid(&g, dir.path(), "toy").unwrap();
        (dir, cfg)
    }

    fn config(dir: &Path, out: &Path) -> ExperimentConfig {
        let mut c = ExperimentConfig::new("toy", dir, out);
        c.runs = 2;
        c.interval = 10;
        c
    }

    #[test]
    fn run_experiment_is_byte_deterministic() {
        let (data, _) = small_synth_dir();
        let out1 = tempfile::tempdir().unwrap();
        let out2 = tempfile::tempdir().unwrap();
        let mut c1 = config(data.path(), out1.path());
        c1.design = DesignKind::ClusterMab;
        let mut c2 = c1.clone();
        c2.out_dir = out2.path().to_path_buf();
        run_experiment(&c1).unwrap();
        run_experiment(&c2).unwrap();
        for file in ["trace.csv", "aggregate.csv"] {
            let a = fs::read(out1.path().join(file)).unwrap();
            let b = fs::read(out2.path().join(file)).unwrap();
            assert_eq!(a, b, "{file} differs");
        }
    }

    #[test]
    fn cache_is_reused_and_stale_cache_is_rejected() {
        let (data, _) = small_synth_dir();
        let out = tempfile::tempdir().unwrap();
        let c = config(data.path(), out.path());
        let p1 = prepare_dataset(&c).unwrap();
        let p2 = prepare_dataset(&c).unwrap();
        assert_eq!(p1.clustering, p2.clustering);

        // changing MCL params without --recluster must fail
        let mut changed = c.clone();
        changed.mcl.inflation = 3.0;
        let err = prepare_dataset(&changed).unwrap_err();
        assert!(matches!(err, Error::StaleCache { .. }));

        // with recluster it succeeds and rewrites the cache
        changed.recluster = true;
        let p3 = prepare_dataset(&changed).unwrap();
        assert_ne!(p3.cache_key, p1.cache_key);
    }

    #[test]
    fn missing_dataset_is_an_io_style_error() {
        let out = tempfile::tempdir().unwrap();
        let c = ExperimentConfig::new("nope", out.path(), out.path());
        assert!(matches!(prepare_dataset(&c), Err(Error::Config(_))));
    }

    #[test]
    fn ab_designs_ignore_alpha_in_sweeps() {
        let (data, _) = small_synth_dir();
        let out = tempfile::tempdir().unwrap();
        let mut base = config(data.path(), out.path());
        base.design = DesignKind::NodeAb;
        let prepared = prepare_dataset(&base).unwrap();
        let mut low = base.clone();
        low.alpha = 1.0;
        let mut high = base.clone();
        high.alpha = 30.0;
        let a = run_cell(&low, &prepared).unwrap();
        let b = run_cell(&high, &prepared).unwrap();
        for (x, y) in a.aggregate.iter().zip(&b.aggregate) {
            assert_eq!(x.rmse_pct, y.rmse_pct);
            assert_eq!(x.mean_ra, y.mean_ra);
        }
    }

    #[test]
    fn sweep_with_single_alpha_matches_run_cell() {
        let (data, _) = small_synth_dir();
        let out = tempfile::tempdir().unwrap();
        let mut base = config(data.path(), out.path());
        base.design = DesignKind::NodeMab;
        let sweep = SweepConfig {
            base: base.clone(),
            alphas: vec![8.0],
            designs: vec![DesignKind::NodeMab],
        };
        let rows = run_alpha_sweep(&sweep).unwrap();
        assert_eq!(rows.len(), 1);
        let prepared = prepare_dataset(&base).unwrap();
        let direct = run_cell(&base, &prepared).unwrap();
        let last = direct.final_row();
        assert_eq!(rows[0].rmse_pct, last.rmse_pct);
        assert_eq!(rows[0].mean_ra, last.mean_ra);

        // round trip through the CSV
        let read = read_sweep_csv(&base.out_dir.join("sweep.csv")).unwrap();
        assert_eq!(read.len(), 1);
        assert_eq!(read[0].design, DesignKind::NodeMab);
    }
}
