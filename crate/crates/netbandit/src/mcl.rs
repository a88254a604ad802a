//! Unweighted Markov Clustering (MCL) over a sparse column-stochastic matrix.
//!
//! Flow simulation alternates expansion (matrix squaring) and inflation
//! (elementwise power then column renormalization) until the matrix stops
//! changing. Clusters are read off the converged matrix's attractor rows.

use serde::{Deserialize, Serialize};

use crate::graph::AttributedGraph;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MclParams {
    /// Matrix power per expansion step.
    pub expansion: u32,
    /// Elementwise power per inflation step.
    pub inflation: f64,
    /// Entries below this are dropped after inflation.
    pub prune_threshold: f64,
    pub max_iterations: usize,
    /// Converged when no entry moves by more than this between iterations.
    pub convergence_epsilon: f64,
}

impl Default for MclParams {
    fn default() -> Self {
        MclParams {
            expansion: 2,
            inflation: 2.0,
            prune_threshold: 1e-5,
            max_iterations: 100,
            convergence_epsilon: 1e-6,
        }
    }
}

impl MclParams {
    pub fn validate(&self) {
        assert!(self.expansion >= 2, "expansion must be >= 2");
        assert!(self.inflation > 1.0, "inflation must be > 1");
        assert!(self.max_iterations >= 1, "max_iterations must be >= 1");
        assert!(self.prune_threshold >= 0.0);
        assert!(self.convergence_epsilon > 0.0);
    }
}

/// A total partition of the graph's nodes into disjoint clusters with
/// contiguous ids from 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clustering {
    pub assignment: Vec<usize>,
    pub clusters: Vec<Vec<usize>>,
}

impl Clustering {
    pub fn from_assignment(assignment: Vec<usize>) -> Self {
        let k = assignment.iter().copied().max().map_or(0, |m| m + 1);
        let mut clusters = vec![Vec::new(); k];
        for (node, &c) in assignment.iter().enumerate() {
            clusters[c].push(node);
        }
        Clustering {
            assignment,
            clusters,
        }
    }

    pub fn cluster_count(&self) -> usize {
        self.clusters.len()
    }

    pub fn cluster_of(&self, node: usize) -> usize {
        self.assignment[node]
    }
}

/// Result of one clustering run; `converged` is false when the iteration
/// cap was hit before the matrix settled.
#[derive(Debug, Clone)]
pub struct MclOutcome {
    pub clustering: Clustering,
    pub converged: bool,
    pub iterations: usize,
}

/// True iff `clustering` is a total, disjoint cover of the graph's nodes.
pub fn validate_partition(clustering: &Clustering, graph: &AttributedGraph) -> bool {
    let n = graph.node_count();
    if clustering.assignment.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for (cid, cluster) in clustering.clusters.iter().enumerate() {
        for &node in cluster {
            if node >= n || seen[node] || clustering.assignment[node] != cid {
                return false;
            }
            seen[node] = true;
        }
    }
    seen.into_iter().all(|s| s)
}

/// Sparse column-major matrix; each column holds (row, value) sorted by row.
struct Columns {
    cols: Vec<Vec<(u32, f64)>>,
}

impl Columns {
    fn normalize(&mut self) {
        for col in &mut self.cols {
            let sum: f64 = col.iter().map(|&(_, v)| v).sum();
            if sum > 0.0 {
                for entry in col.iter_mut() {
                    entry.1 /= sum;
                }
            }
        }
    }
}

/// Partition the graph with unweighted MCL. Edge weights are ignored;
/// self-loops of weight 1 are added before normalization. Isolated nodes
/// come out as singleton clusters.
pub fn mcl_cluster(graph: &AttributedGraph, params: &MclParams) -> MclOutcome {
    params.validate();
    let n = graph.node_count();
    assert!(n > 0, "mcl_cluster needs a nonempty graph");

    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut col: Vec<(u32, f64)> = graph
            .neighbors(j)
            .iter()
            .map(|&(nb, _)| (nb as u32, 1.0))
            .collect();
        col.push((j as u32, 1.0));
        col.sort_unstable_by_key(|&(r, _)| r);
        cols.push(col);
    }
    let mut m = Columns { cols };
    m.normalize();

    let mut scratch = vec![0.0f64; n];
    let mut touched: Vec<u32> = Vec::with_capacity(n);
    let mut converged = false;
    let mut iterations = 0;

    for iter in 0..params.max_iterations {
        iterations = iter + 1;
        let mut max_change = 0.0f64;
        let mut next_cols: Vec<Vec<(u32, f64)>> = Vec::with_capacity(n);
        for j in 0..n {
            // Expansion: column j of M^expansion, built by repeated
            // sparse matrix-vector products.
            let mut current: Vec<(u32, f64)> = m.cols[j].clone();
            for _ in 1..params.expansion {
                touched.clear();
                for &(k, w) in &current {
                    for &(r, v) in &m.cols[k as usize] {
                        if scratch[r as usize] == 0.0 {
                            touched.push(r);
                        }
                        scratch[r as usize] += w * v;
                    }
                }
                touched.sort_unstable();
                current = touched
                    .iter()
                    .map(|&r| {
                        let v = scratch[r as usize];
                        scratch[r as usize] = 0.0;
                        (r, v)
                    })
                    .collect();
            }

            // Inflation, pruning, renormalization.
            let mut sum = 0.0;
            for entry in current.iter_mut() {
                entry.1 = entry.1.powf(params.inflation);
                sum += entry.1;
            }
            let mut col: Vec<(u32, f64)> = current
                .into_iter()
                .filter_map(|(r, v)| {
                    let v = v / sum;
                    (v >= params.prune_threshold).then_some((r, v))
                })
                .collect();
            let resum: f64 = col.iter().map(|&(_, v)| v).sum();
            if resum > 0.0 {
                for entry in col.iter_mut() {
                    entry.1 /= resum;
                }
            }

            max_change = max_change.max(column_change(&m.cols[j], &col));
            next_cols.push(col);
        }
        m.cols = next_cols;
        if max_change < params.convergence_epsilon {
            converged = true;
            break;
        }
    }

    let clustering = interpret_clusters(&m, n);
    MclOutcome {
        clustering,
        converged,
        iterations,
    }
}

fn column_change(old: &[(u32, f64)], new: &[(u32, f64)]) -> f64 {
    let mut change = 0.0f64;
    let (mut i, mut j) = (0, 0);
    while i < old.len() || j < new.len() {
        match (old.get(i), new.get(j)) {
            (Some(&(ro, vo)), Some(&(rn, vn))) => match ro.cmp(&rn) {
                std::cmp::Ordering::Less => {
                    change = change.max(vo);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    change = change.max(vn);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    change = change.max((vo - vn).abs());
                    i += 1;
                    j += 1;
                }
            },
            (Some(&(_, vo)), None) => {
                change = change.max(vo);
                i += 1;
            }
            (None, Some(&(_, vn))) => {
                change = change.max(vn);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    change
}

/// Read clusters off the converged matrix: attractor rows (nonzero
/// diagonal) claim the columns they support. Attractors sharing a column
/// form one system; a node claimed by several systems joins the
/// lowest-numbered cluster. Unclaimed nodes fall back to the row with the
/// largest mass in their column, or a singleton.
fn interpret_clusters(m: &Columns, n: usize) -> Clustering {
    let mut is_attractor = vec![false; n];
    for (j, col) in m.cols.iter().enumerate() {
        if col.iter().any(|&(r, v)| r as usize == j && v > 0.0) {
            is_attractor[j] = true;
        }
    }

    // Union attractors that co-occur in any column's support.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        let mut root = x;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = x;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }
    for col in &m.cols {
        let attractors: Vec<usize> = col
            .iter()
            .filter(|&&(r, v)| v > 0.0 && is_attractor[r as usize])
            .map(|&(r, _)| r as usize)
            .collect();
        for w in attractors.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }

    let mut assignment = vec![usize::MAX; n];
    for j in 0..n {
        let claimants: Vec<usize> = m.cols[j]
            .iter()
            .filter(|&&(r, v)| v > 0.0 && is_attractor[r as usize])
            .map(|&(r, _)| find(&mut parent, r as usize))
            .collect();
        if let Some(&root) = claimants.iter().min() {
            assignment[j] = root;
        } else if let Some(&(r, _)) = m.cols[j]
            .iter()
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        {
            assignment[j] = find(&mut parent, r as usize);
        } else {
            assignment[j] = j; // empty column: singleton
        }
    }

    // Relabel roots to contiguous ids ordered by smallest member node.
    let mut label_of_root: std::collections::BTreeMap<usize, usize> =
        std::collections::BTreeMap::new();
    let mut first_member: std::collections::BTreeMap<usize, usize> =
        std::collections::BTreeMap::new();
    for (node, &root) in assignment.iter().enumerate() {
        first_member.entry(root).or_insert(node);
    }
    let mut roots: Vec<(usize, usize)> =
        first_member.into_iter().map(|(r, f)| (f, r)).collect();
    roots.sort_unstable();
    for (next, &(_, root)) in roots.iter().enumerate() {
        label_of_root.insert(root, next);
    }
    let assignment: Vec<usize> = assignment.into_iter().map(|r| label_of_root[&r]).collect();
    Clustering::from_assignment(assignment)
}
