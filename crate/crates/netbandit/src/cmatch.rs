//! Cross-cluster node matching and matched cluster pairing.
//!
//! Nodes in different clusters are matched when their attribute similarity
//! exceeds a threshold gamma; clusters are then paired greedily by the mean
//! similarity of their matched nodes, above a threshold beta. Both
//! thresholds default to the median of the relevant similarity population.

use std::collections::HashMap;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::AttributedGraph;
use crate::mcl::Clustering;

/// Second quartile (median) of a nonempty sample, linearly interpolated.
pub fn compute_threshold(similarity_sample: &[f64]) -> f64 {
    assert!(!similarity_sample.is_empty(), "empty similarity sample");
    let mut sorted = similarity_sample.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Cross-cluster node pairs with similarity strictly above gamma.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NodeMatching {
    /// (node_k, node_l, similarity) with node_k < node_l.
    pub pairs: Vec<(usize, usize, f64)>,
}

/// Involutive partial map between cluster ids.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ClusterMatchMap {
    map: HashMap<usize, usize>,
}

impl ClusterMatchMap {
    pub fn matched(&self, cluster: usize) -> Option<usize> {
        self.map.get(&cluster).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.map.iter().map(|(&a, &b)| (a, b))
    }

    /// Matched pairs listed once, as (low id, high id).
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .map
            .iter()
            .filter(|(&a, &b)| a < b)
            .map(|(&a, &b)| (a, b))
            .collect();
        out.sort_unstable();
        out
    }
}

/// Draw up to `max_pairs` distinct cross-cluster node pairs uniformly at
/// random (seeded) and return their similarities. Used to estimate the
/// gamma threshold without touching all O(n^2) pairs.
pub fn sample_cross_cluster_similarities(
    graph: &AttributedGraph,
    clustering: &Clustering,
    max_pairs: usize,
    seed: u64,
) -> Vec<f64> {
    let n = graph.node_count();
    let total = n * (n - 1) / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let push_if_cross = |idx: usize, out: &mut Vec<f64>| {
        let (u, v) = pair_from_index(idx, n);
        if clustering.cluster_of(u) != clustering.cluster_of(v) {
            out.push(graph.similarity(u, v));
        }
    };
    if total <= max_pairs {
        for idx in 0..total {
            push_if_cross(idx, &mut out);
        }
    } else {
        for idx in sample(&mut rng, total, max_pairs) {
            push_if_cross(idx, &mut out);
        }
    }
    out
}

/// Map a flat index in [0, n*(n-1)/2) to an unordered pair (u, v), u < v.
fn pair_from_index(idx: usize, n: usize) -> (usize, usize) {
    // row u holds (n - 1 - u) pairs
    let mut u = 0usize;
    let mut remaining = idx;
    loop {
        let row = n - 1 - u;
        if remaining < row {
            return (u, u + 1 + remaining);
        }
        remaining -= row;
        u += 1;
    }
}

/// All cross-cluster node pairs whose similarity strictly exceeds gamma.
pub fn match_nodes(
    graph: &AttributedGraph,
    clustering: &Clustering,
    gamma: f64,
) -> NodeMatching {
    let n = graph.node_count();
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if clustering.cluster_of(u) == clustering.cluster_of(v) {
                continue;
            }
            let sim = graph.similarity(u, v);
            if sim > gamma {
                pairs.push((u, v, sim));
            }
        }
    }
    NodeMatching { pairs }
}

/// Mean similarity over matched pairs spanning clusters `c_i` and `c_j`;
/// 0 when no matched pair spans them.
pub fn cluster_similarity(
    c_i: usize,
    c_j: usize,
    matching: &NodeMatching,
    clustering: &Clustering,
) -> f64 {
    assert_ne!(c_i, c_j);
    let mut sum = 0.0;
    let mut count = 0usize;
    for &(u, v, sim) in &matching.pairs {
        let (cu, cv) = (clustering.cluster_of(u), clustering.cluster_of(v));
        if (cu == c_i && cv == c_j) || (cu == c_j && cv == c_i) {
            sum += sim;
            count += 1;
        }
    }
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}

/// Mean matched-node similarity for every cluster pair spanned by at least
/// one matched node pair. Keys are (low cluster id, high cluster id).
pub fn cluster_pair_weights(
    matching: &NodeMatching,
    clustering: &Clustering,
) -> HashMap<(usize, usize), f64> {
    let mut sums: HashMap<(usize, usize), (f64, usize)> = HashMap::new();
    for &(u, v, sim) in &matching.pairs {
        let (cu, cv) = (clustering.cluster_of(u), clustering.cluster_of(v));
        let key = (cu.min(cv), cu.max(cv));
        let entry = sums.entry(key).or_insert((0.0, 0));
        entry.0 += sim;
        entry.1 += 1;
    }
    sums.into_iter()
        .map(|(k, (s, c))| (k, s / c as f64))
        .collect()
}

/// Greedy one-to-one cluster matching: candidate pairs with weight
/// strictly above beta, taken in descending weight (ties by lexicographic
/// cluster-id pair), each added only if both clusters are still free.
pub fn match_clusters(
    weights: &HashMap<(usize, usize), f64>,
    beta: f64,
) -> ClusterMatchMap {
    let mut candidates: Vec<(usize, usize, f64)> = weights
        .iter()
        .filter(|(_, &w)| w > beta)
        .map(|(&(a, b), &w)| (a.min(b), a.max(b), w))
        .collect();
    candidates.sort_by(|x, y| {
        y.2.partial_cmp(&x.2)
            .unwrap()
            .then_with(|| (x.0, x.1).cmp(&(y.0, y.1)))
    });
    let mut map = HashMap::new();
    for (a, b, _) in candidates {
        if !map.contains_key(&a) && !map.contains_key(&b) {
            map.insert(a, b);
            map.insert(b, a);
        }
    }
    ClusterMatchMap { map }
}

/// Thresholds plus the sampling metadata they were derived from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatchArtifacts {
    pub gamma: f64,
    pub beta: f64,
    pub node_pair_count: usize,
    pub gamma_sample_size: usize,
    pub gamma_sample_seed: u64,
    pub match_map: ClusterMatchMap,
}

/// Default cap on the cross-cluster pair sample used for gamma.
pub const DEFAULT_GAMMA_SAMPLE: usize = 200_000;

/// Full matching pipeline: sample similarities for gamma, match nodes,
/// derive beta from the nonzero cluster-pair weights, pair clusters.
pub fn build_matching(
    graph: &AttributedGraph,
    clustering: &Clustering,
    gamma_sample_cap: usize,
    seed: u64,
) -> MatchArtifacts {
    let sample = sample_cross_cluster_similarities(graph, clustering, gamma_sample_cap, seed);
    let gamma = if sample.is_empty() {
        1.0
    } else {
        compute_threshold(&sample)
    };
    let matching = match_nodes(graph, clustering, gamma);
    let weights = cluster_pair_weights(&matching, clustering);
    let nonzero: Vec<f64> = weights.values().copied().filter(|&w| w > 0.0).collect();
    let beta = if nonzero.is_empty() {
        1.0
    } else {
        compute_threshold(&nonzero)
    };
    let match_map = match_clusters(&weights, beta);
    MatchArtifacts {
        gamma,
        beta,
        node_pair_count: matching.pairs.len(),
        gamma_sample_size: sample.len(),
        gamma_sample_seed: seed,
        match_map,
    }
}
