//! Partition a network with Markov clustering (MCL).

use netbandit::mcl::{mcl_cluster, validate_partition, MclParams};
use netbandit::synth::{generate, SynthConfig};

fn main() {
    let graph = generate(&SynthConfig {
        communities: 30,
        community_size: 8,
        isolated_communities: 8,
        seed: 2,
        ..SynthConfig::default()
    });

    let params = MclParams::default();
    let outcome = mcl_cluster(&graph, &params);
    assert!(validate_partition(&outcome.clustering, &graph));

    println!(
        "{} nodes -> {} clusters in {} iterations (converged: {})",
        graph.node_count(),
        outcome.clustering.cluster_count(),
        outcome.iterations,
        outcome.converged
    );

    let mut sizes: Vec<usize> = outcome
        .clustering
        .clusters
        .iter()
        .map(|c| c.len())
        .collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    println!("largest clusters: {:?}", &sizes[..sizes.len().min(10)]);
    println!(
        "singletons: {}",
        sizes.iter().filter(|&&s| s == 1).count()
    );
}
