//! Synthetic attributed networks in Planetoid format.
//!
//! Planted-partition graphs with attribute vectors built from a shared
//! base block, a per-community block, and random noise bits, so that
//! same-community pairs are more similar than cross-community pairs but
//! every connected pair keeps a nontrivial spillover probability.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{compute_spillover_weights, AttributedGraph, Attributes};

#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub communities: usize,
    pub community_size: usize,
    /// Edge probability inside a community.
    pub p_intra: f64,
    /// Edge probability across communities.
    pub p_inter: f64,
    /// Attribute bits shared by every node.
    pub base_bits: usize,
    /// Attribute bits shared within a community.
    pub community_bits: usize,
    /// Bits drawn per node from a shared noise pool.
    pub noise_bits: usize,
    pub noise_pool: usize,
    /// The first `isolated_communities` communities draw their noise bits
    /// from a private per-community pool instead of the shared one, so
    /// their cross-community similarity is exactly zero and the clusters
    /// they produce stay unmatched by similarity-threshold matching.
    pub isolated_communities: usize,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            communities: 300,
            community_size: 6,
            p_intra: 0.8,
            p_inter: 0.0008,
            base_bits: 0,
            community_bits: 4,
            noise_bits: 14,
            noise_pool: 120,
            isolated_communities: 75,
            seed: 0,
        }
    }
}

impl SynthConfig {
    pub fn node_count(&self) -> usize {
        self.communities * self.community_size
    }

    fn attribute_dim(&self) -> usize {
        // shared pool first, then one private pool per isolated community
        self.base_bits
            + self.communities * self.community_bits
            + (1 + self.isolated_communities) * self.noise_pool
    }
}

/// Generate the graph in memory, with spillover weights already computed.
pub fn generate(config: &SynthConfig) -> AttributedGraph {
    let n = config.node_count();
    let dim = config.attribute_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut attrs = Vec::with_capacity(n);
    for node in 0..n {
        let community = node / config.community_size;
        let mut ones: Vec<u32> = (0..config.base_bits as u32).collect();
        let block = config.base_bits + community * config.community_bits;
        ones.extend((block..block + config.community_bits).map(|i| i as u32));
        let shared_pool = config.base_bits + config.communities * config.community_bits;
        let pool_start = if community < config.isolated_communities {
            shared_pool + (1 + community) * config.noise_pool
        } else {
            shared_pool
        };
        let picked = rand::seq::index::sample(
            &mut rng,
            config.noise_pool,
            config.noise_bits.min(config.noise_pool),
        );
        ones.extend(picked.iter().map(|i| (pool_start + i) as u32));
        attrs.push(Attributes::from_ones(dim, ones));
    }

    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let same = u / config.community_size == v / config.community_size;
            let p = if same { config.p_intra } else { config.p_inter };
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }

    let ids = (0..n).map(|i| format!("n{i}")).collect();
    let labels = (0..n)
        .map(|i| format!("c{}", i / config.community_size))
        .collect();
    let mut graph = AttributedGraph::new(ids, labels, attrs, &edges);
    compute_spillover_weights(&mut graph);
    graph
}

/// Write a graph as `<name>.content` / `<name>.cites` under `dir`.
pub fn write_planetoid(graph: &AttributedGraph, dir: &Path, name: &str) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let d = graph.attribute_dim();
    let mut content = String::new();
    for node in 0..graph.node_count() {
        content.push_str(graph.id(node));
        let ones = graph.attributes(node).ones();
        let mut next = 0usize;
        for j in 0..d {
            let bit = if next < ones.len() && ones[next] as usize == j {
                next += 1;
                '1'
            } else {
                '0'
            };
            let _ = write!(content, "\t{bit}");
        }
        let _ = writeln!(content, "\t{}", graph.label(node));
    }
    let content_path = dir.join(format!("{name}.content"));
    fs::write(&content_path, content).map_err(|e| Error::io(&content_path, e))?;

    let mut cites = String::new();
    for &(u, v) in graph.edges() {
        let _ = writeln!(cites, "{}\t{}", graph.id(u), graph.id(v));
    }
    let cites_path = dir.join(format!("{name}.cites"));
    fs::write(&cites_path, cites).map_err(|e| Error::io(&cites_path, e))?;
    Ok(())
}
