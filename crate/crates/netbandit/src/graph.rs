//! Attributed graphs with per-edge spillover probabilities.
//!
//! Graphs are loaded from Planetoid-style `.content` / `.cites` text files.
//! Attributes are binary bag-of-words vectors stored sparsely as sorted
//! indices of the set bits. Each undirected edge carries a spillover
//! probability, set to the cosine similarity of its endpoints' attributes.

use std::collections::HashMap;
use std::io::BufRead;

use crate::error::{Error, Result};

/// Binary attribute vector, stored as the sorted indices of its ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attributes {
    dim: usize,
    ones: Vec<u32>,
}

impl Attributes {
    pub fn from_bits(bits: &[u8]) -> Self {
        let ones = bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b != 0)
            .map(|(i, _)| i as u32)
            .collect();
        Attributes {
            dim: bits.len(),
            ones,
        }
    }

    pub fn from_ones(dim: usize, mut ones: Vec<u32>) -> Self {
        ones.sort_unstable();
        ones.dedup();
        assert!(
            ones.last().map_or(true, |&i| (i as usize) < dim),
            "attribute index out of range"
        );
        Attributes { dim, ones }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ones(&self) -> &[u32] {
        &self.ones
    }

    pub fn count_ones(&self) -> usize {
        self.ones.len()
    }
}

/// Cosine similarity of two binary attribute vectors.
///
/// Returns 0 when either vector is all-zero; featureless nodes are treated
/// as non-interacting. Panics on dimension mismatch.
pub fn cosine_similarity(a: &Attributes, b: &Attributes) -> f64 {
    assert_eq!(a.dim, b.dim, "attribute dimension mismatch");
    if a.ones.is_empty() || b.ones.is_empty() {
        return 0.0;
    }
    let mut dot = 0usize;
    let (mut i, mut j) = (0, 0);
    while i < a.ones.len() && j < b.ones.len() {
        match a.ones[i].cmp(&b.ones[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                dot += 1;
                i += 1;
                j += 1;
            }
        }
    }
    dot as f64 / ((a.ones.len() * b.ones.len()) as f64).sqrt()
}

/// Immutable attributed graph. Nodes are indexed `0..n` internally; the
/// original string identifiers are kept for reporting.
#[derive(Debug, Clone)]
pub struct AttributedGraph {
    ids: Vec<String>,
    labels: Vec<String>,
    attributes: Vec<Attributes>,
    /// Unordered distinct pairs, stored as (min, max).
    edges: Vec<(usize, usize)>,
    /// Spillover probability per edge, parallel to `edges`.
    weights: Vec<f64>,
    /// Per node: sorted (neighbor, edge index) pairs.
    adjacency: Vec<Vec<(usize, usize)>>,
}

/// Counts of irregularities tolerated during loading.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadStats {
    /// Cite lines referencing an id absent from the content file.
    pub dangling_refs: usize,
    /// Cite lines collapsed into an already-present undirected edge.
    pub duplicate_edges: usize,
    /// Self-citations dropped.
    pub self_loops: usize,
}

impl AttributedGraph {
    /// Build a graph from explicit parts. Edges are deduplicated and
    /// self-loops rejected. Initial spillover weights are zero until
    /// [`compute_spillover_weights`] runs.
    pub fn new(
        ids: Vec<String>,
        labels: Vec<String>,
        attributes: Vec<Attributes>,
        edge_list: &[(usize, usize)],
    ) -> Self {
        let n = ids.len();
        assert_eq!(labels.len(), n);
        assert_eq!(attributes.len(), n);
        if n > 0 {
            let d = attributes[0].dim();
            assert!(d >= 1, "attribute dimension must be at least 1");
            assert!(
                attributes.iter().all(|a| a.dim() == d),
                "inconsistent attribute dimensions"
            );
        }
        let mut edges: Vec<(usize, usize)> = Vec::with_capacity(edge_list.len());
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in edge_list {
            assert!(u < n && v < n, "edge endpoint out of range");
            assert_ne!(u, v, "self-loop");
            let key = (u.min(v), u.max(v));
            if seen.insert(key) {
                edges.push(key);
            }
        }
        edges.sort_unstable();
        let weights = vec![0.0; edges.len()];
        let adjacency = build_adjacency(n, &edges);
        AttributedGraph {
            ids,
            labels,
            attributes,
            edges,
            weights,
            adjacency,
        }
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn attribute_dim(&self) -> usize {
        self.attributes.first().map_or(0, |a| a.dim())
    }

    pub fn id(&self, node: usize) -> &str {
        &self.ids[node]
    }

    pub fn label(&self, node: usize) -> &str {
        &self.labels[node]
    }

    pub fn attributes(&self, node: usize) -> &Attributes {
        &self.attributes[node]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_weight(&self, edge_index: usize) -> f64 {
        self.weights[edge_index]
    }

    /// Neighbors of `node` in ascending node id, with the index of the
    /// connecting edge.
    pub fn neighbors(&self, node: usize) -> &[(usize, usize)] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn similarity(&self, u: usize, v: usize) -> f64 {
        cosine_similarity(&self.attributes[u], &self.attributes[v])
    }

    /// Stable content digest over ids, attributes, and edges; used as a
    /// cache key for derived artifacts.
    pub fn content_digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        for (id, attrs) in self.ids.iter().zip(&self.attributes) {
            h.update(id.as_bytes());
            h.update([0u8]);
            for &one in attrs.ones() {
                h.update(one.to_le_bytes());
            }
            h.update([1u8]);
        }
        for &(u, v) in &self.edges {
            h.update((u as u64).to_le_bytes());
            h.update((v as u64).to_le_bytes());
        }
        hex_string(&h.finalize())
    }
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn build_adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    let mut adjacency = vec![Vec::new(); n];
    for (idx, &(u, v)) in edges.iter().enumerate() {
        adjacency[u].push((v, idx));
        adjacency[v].push((u, idx));
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    adjacency
}

/// Set every edge's spillover probability to the cosine similarity of its
/// endpoints. Idempotent.
pub fn compute_spillover_weights(graph: &mut AttributedGraph) {
    for i in 0..graph.edges.len() {
        let (u, v) = graph.edges[i];
        graph.weights[i] = cosine_similarity(&graph.attributes[u], &graph.attributes[v]);
    }
}

/// Load a citation graph from Planetoid-style content and cites streams.
///
/// Content lines are `<id> <attr_1 ... attr_d> <label>`, cites lines are
/// `<cited_id> <citing_id>`. Directed citations collapse to undirected
/// edges; references to unknown ids are dropped and counted.
pub fn load_citation_dataset(
    content: impl BufRead,
    cites: impl BufRead,
) -> Result<(AttributedGraph, LoadStats)> {
    let mut ids = Vec::new();
    let mut labels = Vec::new();
    let mut attributes: Vec<Attributes> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut dim: Option<usize> = None;

    for (lineno, line) in content.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse {
            line: lineno + 1,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 3 {
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!("expected `<id> <attrs...> <label>`, got {} fields", fields.len()),
            });
        }
        let id = fields[0].to_string();
        let label = fields[fields.len() - 1].to_string();
        let attr_fields = &fields[1..fields.len() - 1];
        match dim {
            None => dim = Some(attr_fields.len()),
            Some(d) if d != attr_fields.len() => {
                return Err(Error::Format(format!(
                    "inconsistent attribute dimension at line {}: expected {}, got {}",
                    lineno + 1,
                    d,
                    attr_fields.len()
                )));
            }
            Some(_) => {}
        }
        let mut ones = Vec::new();
        for (j, f) in attr_fields.iter().enumerate() {
            match *f {
                "0" => {}
                "1" => ones.push(j as u32),
                other => {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        message: format!("non-binary attribute value `{other}`"),
                    });
                }
            }
        }
        if index.insert(id.clone(), ids.len()).is_some() {
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!("duplicate node id `{id}`"),
            });
        }
        attributes.push(Attributes::from_ones(attr_fields.len(), ones));
        ids.push(id);
        labels.push(label);
    }

    let mut stats = LoadStats::default();
    let mut seen = std::collections::HashSet::new();
    let mut edges = Vec::new();
    for (lineno, line) in cites.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse {
            line: lineno + 1,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!("expected `<cited> <citing>`, got {} fields", fields.len()),
            });
        }
        let (a, b) = (index.get(fields[0]), index.get(fields[1]));
        let (&u, &v) = match (a, b) {
            (Some(u), Some(v)) => (u, v),
            _ => {
                stats.dangling_refs += 1;
                continue;
            }
        };
        if u == v {
            stats.self_loops += 1;
            continue;
        }
        let key = (u.min(v), u.max(v));
        if seen.insert(key) {
            edges.push(key);
        } else {
            stats.duplicate_edges += 1;
        }
    }

    let mut graph = AttributedGraph::new(ids, labels, attributes, &edges);
    compute_spillover_weights(&mut graph);
    Ok((graph, stats))
}
