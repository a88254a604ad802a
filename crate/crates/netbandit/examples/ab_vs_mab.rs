//! Compare all six designs on a synthetic network at alpha = 8:
//! final TTE error and reward-action ratio per design.

use netbandit::designs::DesignKind;
use netbandit::harness::{prepare_graph, run_cell, ExperimentConfig};
use netbandit::synth::{generate, SynthConfig};

fn main() -> anyhow::Result<()> {
    let synth = SynthConfig {
        seed: 7,
        ..SynthConfig::default()
    };
    let graph = generate(&synth);
    println!(
        "synthetic network: {} nodes, {} edges, {} communities planted",
        graph.node_count(),
        graph.edge_count(),
        synth.communities
    );

    let out = tempfile::tempdir()?;
    let mut config = ExperimentConfig::new("demo", out.path(), out.path());
    config.runs = 10;
    config.alpha = 8.0;

    let prepared = prepare_graph(&config, graph)?;
    println!(
        "MCL found {} clusters; {} matched cluster pairs (gamma={:.3}, beta={:.3})",
        prepared.clustering.cluster_count(),
        prepared.matching.match_map.pairs().len(),
        prepared.matching.gamma,
        prepared.matching.beta
    );
    println!();
    println!("{:<12} {:>12} {:>10}", "design", "tte_err_pct", "mean_ra");

    for design in DesignKind::ALL {
        let mut cell = config.clone();
        cell.design = design;
        let output = run_cell(&cell, &prepared)?;
        let last = output.final_row();
        println!(
            "{:<12} {:>12} {:>10.4}",
            design.to_string(),
            last.rmse_pct
                .map_or("undefined".to_string(), |v| format!("{v:.2}")),
            last.mean_ra
        );
    }
    Ok(())
}
