//! Watch the interference simulator process single arrivals.
//!
//! Each arriving node goes through three phases: a direct activation
//! draw at its arm's rate, inbound contagion from active explored
//! neighbors on the opposite arm, and outbound contagion to inactive
//! ones. Rewards count the arrival's own activation plus any outbound
//! activations it caused.

use netbandit::designs::Arm;
use netbandit::runner::arrival_permutation;
use netbandit::sim::{SimulationWorld, WorldConfig};
use netbandit::synth::{generate, SynthConfig};

fn main() {
    let graph = generate(&SynthConfig {
        communities: 10,
        community_size: 6,
        isolated_communities: 0,
        seed: 8,
        ..SynthConfig::default()
    });
    let n = graph.node_count();

    let mut world = SimulationWorld::new(n, WorldConfig::new(0.6, 0.2, 123));
    let order = arrival_permutation(n, 7);

    println!("arrival  node  arm        direct inbound outbound reward");
    for (i, &node) in order.iter().enumerate() {
        // alternate arms so cross-arm edges appear quickly
        let arm = if i % 2 == 0 { Arm::Treatment } else { Arm::Control };
        let r = world.process_arrival(node, arm, &graph);
        if i < 15 || !r.outbound_activations.is_empty() {
            println!(
                "{i:>7}  {:>4}  {:<9} {:>6} {:>7} {:>8} {:>6}",
                r.node,
                format!("{:?}", r.arm),
                r.direct_activated,
                r.inbound_contagion,
                r.outbound_activations.len(),
                r.reward
            );
        }
    }

    println!(
        "\nexplored {} nodes, {} active ({} treated / {} control)",
        world.total_explored(),
        world.total_active(),
        world.active_count(Arm::Treatment),
        world.active_count(Arm::Control)
    );
}
