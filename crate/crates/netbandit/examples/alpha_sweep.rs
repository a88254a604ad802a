//! Sweep the exploration weight alpha and render the trade-off figure.
//!
//! Writes `sweep.csv` and `tradeoff.svg` into ./sweep-out. Lower alpha
//! exploits harder: the reward-action ratio rises while the TTE estimate
//! degrades.

use netbandit::designs::DesignKind;
use netbandit::harness::{run_alpha_sweep, ExperimentConfig, SweepConfig};
use netbandit::plot::emit_tradeoff_svg;
use netbandit::synth::{generate, write_planetoid, SynthConfig};

fn main() -> anyhow::Result<()> {
    let data = tempfile::tempdir()?;
    let synth = SynthConfig {
        communities: 100,
        community_size: 6,
        isolated_communities: 25,
        seed: 5,
        ..SynthConfig::default()
    };
    write_planetoid(&generate(&synth), data.path(), "demo")?;

    let out = std::path::PathBuf::from("sweep-out");
    let mut base = ExperimentConfig::new("demo", data.path(), &out);
    base.runs = 10;

    let sweep = SweepConfig {
        base,
        alphas: vec![1.0, 2.0, 4.0, 8.0, 15.0, 30.0],
        designs: vec![DesignKind::NodeMab, DesignKind::NodeAb],
    };
    let rows = run_alpha_sweep(&sweep)?;

    println!("{:<10} {:>6} {:>10} {:>9}", "design", "alpha", "rmse_pct", "mean_ra");
    for row in &rows {
        println!(
            "{:<10} {:>6} {:>10} {:>9.4}",
            row.design.to_string(),
            row.alpha.map_or("-".into(), |a| format!("{a}")),
            row.rmse_pct.map_or("-".into(), |v| format!("{v:.2}")),
            row.mean_ra
        );
    }

    if let Some(path) = emit_tradeoff_svg(&rows, &out)? {
        println!("\nfigure written to {}", path.display());
    }
    Ok(())
}
