//! Run a node-granularity UCB bandit and inspect its state.
//!
//! With a positive treatment effect the bandit drifts toward the
//! Treatment arm as evidence accumulates; alpha controls how strongly
//! the exploration bonus resists that drift.

use netbandit::designs::{ucb_score, Arm, DesignKind};
use netbandit::runner::{run_single, RunParams};
use netbandit::synth::{generate, SynthConfig};

fn main() -> anyhow::Result<()> {
    let graph = generate(&SynthConfig {
        communities: 100,
        community_size: 6,
        isolated_communities: 25,
        seed: 5,
        ..SynthConfig::default()
    });

    for alpha in [1.0, 8.0, 30.0] {
        let params = RunParams {
            design: DesignKind::NodeMab,
            alpha,
            interval: 50,
            p_treated: 0.6,
            p_control: 0.2,
            arrival_seed: 1,
            world_seed: 2,
            assign_seed: 3,
            explore_fraction: 1.0,
        };
        let out = run_single(&graph, None, None, &params, 0)?;
        let bandit = out.bandit.expect("bandit design");

        let treated = out.world.explored_count(Arm::Treatment);
        let control = out.world.explored_count(Arm::Control);
        println!("alpha = {alpha}:");
        println!("  arm pulls: {treated} treated / {control} control");
        for arm in Arm::BOTH {
            let a = arm.index();
            println!(
                "  {:?}: mu_hat = {:.4}, m = {}, final UCB score = {:.4}",
                arm,
                bandit.mu_hat[a],
                bandit.m[a],
                ucb_score(bandit.mu_hat[a], bandit.m[a], bandit.t, alpha)
            );
        }
        let last = out.trace.checkpoints.last().unwrap();
        println!(
            "  final estimate = {:.4}, R/A = {:.4}\n",
            last.tte_estimate.unwrap(),
            last.ra_ratio
        );
    }
    Ok(())
}
