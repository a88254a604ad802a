//! Acceptance suite: one test per criterion, each printing a single
//! `criterion N (...): PASS` line (visible with `--nocapture`).
//!
//! Criteria 1-3 run on three deterministic synthetic benchmark networks
//! ("cora-like", "citeseer-like", "webkb-like") generated by the `synth`
//! module; criterion 4 checks the simulator against an independent
//! brute-force enumeration of the outcome tree on a hand-built 6-node
//! graph.

use std::collections::HashMap;

use netbandit::cmatch::{build_matching, match_clusters};
use netbandit::designs::{
    ucb_score, ucb_select, ucb_update, Arm, BanditState, DesignKind,
};
use netbandit::graph::{
    compute_spillover_weights, cosine_similarity, AttributedGraph, Attributes,
};
use netbandit::harness::{
    prepare_graph, run_cell, run_experiment, ExperimentConfig,
};
use netbandit::mcl::{mcl_cluster, validate_partition, Clustering, MclParams};
use netbandit::metrics::{
    checkpoint_marks, estimate_tte, reward_action_ratio, rmse_percent,
};
use netbandit::runner::{arrival_permutation, run_single, RunParams};
use netbandit::sim::{SimulationWorld, WorldConfig};
use netbandit::synth::{generate, write_planetoid, SynthConfig};

fn report(num: u32, name: &str, pass: bool) {
    println!("criterion {num} ({name}): {}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {num} ({name}) failed");
}

/// The three synthetic benchmark networks used in place of the citation
/// datasets. Sizes echo the originals' ordering (webkb < cora < citeseer).
fn standins() -> Vec<(&'static str, SynthConfig)> {
    let make = |communities, isolated, seed| SynthConfig {
        communities,
        isolated_communities: isolated,
        seed,
        ..SynthConfig::default()
    };
    vec![
        ("cora-like", make(300, 75, 11)),
        ("citeseer-like", make(360, 90, 22)),
        ("webkb-like", make(200, 50, 33)),
    ]
}

// ---------------------------------------------------------------------
// Criterion 1: directional orderings at alpha = 8, S = 10 runs, over 10
// master seeds per dataset; each sub-criterion must hold in >= 8 of 10.
// ---------------------------------------------------------------------
#[test]
fn criterion_1_directional_orderings() {
    let mut all_ok = true;
    for (name, synth) in standins() {
        let out = tempfile::tempdir().unwrap();
        let mut base = ExperimentConfig::new(name, out.path(), out.path());
        base.runs = 10;
        base.alpha = 8.0;
        let prepared = prepare_graph(&base, generate(&synth)).unwrap();

        let mut pass = [0usize; 4];
        for seed in 0..10u64 {
            let mut res: HashMap<DesignKind, (f64, f64)> = HashMap::new();
            for design in DesignKind::ALL {
                let mut c = base.clone();
                c.design = design;
                c.master_seed = 1000 + seed;
                let o = run_cell(&c, &prepared).unwrap();
                let last = o.final_row();
                res.insert(design, (last.rmse_pct.unwrap(), last.mean_ra));
            }
            let g = |d: DesignKind| res[&d];
            let checks = [
                // a: node-MAB beats node-AB on R/A by >= 0.03
                g(DesignKind::NodeMab).1 - g(DesignKind::NodeAb).1 >= 0.03,
                // b: node-MAB error exceeds both cluster bandits by >= 10pp
                g(DesignKind::NodeMab).0 - g(DesignKind::ClusterMab).0 >= 10.0
                    && g(DesignKind::NodeMab).0 - g(DesignKind::CmatchMab).0 >= 10.0,
                // c: cluster bandits within 10pp of their A/B counterparts
                (g(DesignKind::ClusterMab).0 - g(DesignKind::ClusterAb).0).abs() <= 10.0
                    && (g(DesignKind::CmatchMab).0 - g(DesignKind::CmatchAb).0).abs() <= 10.0,
                // d: cluster bandits match or beat A/B on R/A
                g(DesignKind::ClusterMab).1 >= g(DesignKind::ClusterAb).1
                    && g(DesignKind::CmatchMab).1 >= g(DesignKind::CmatchAb).1,
            ];
            for (i, ok) in checks.iter().enumerate() {
                pass[i] += *ok as usize;
            }
        }
        for (label, count) in ["a", "b", "c", "d"].iter().zip(pass) {
            if count < 8 {
                eprintln!("criterion 1{label} on {name}: only {count}/10 master seeds");
                all_ok = false;
            }
        }
    }
    report(1, "directional orderings", all_ok);
}

// ---------------------------------------------------------------------
// Criterion 2: alpha-sweep monotone trend for node-MAB: Spearman rho of
// alpha against final R/A and against final error both <= -0.5.
// ---------------------------------------------------------------------
fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    let rank = |v: &[f64]| -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
        let mut r = vec![0.0; v.len()];
        for (pos, &i) in idx.iter().enumerate() {
            r[i] = pos as f64;
        }
        r
    };
    let (rx, ry) = (rank(xs), rank(ys));
    let n = xs.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let (mut num, mut dx, mut dy) = (0.0, 0.0, 0.0);
    for i in 0..xs.len() {
        num += (rx[i] - mx) * (ry[i] - my);
        dx += (rx[i] - mx).powi(2);
        dy += (ry[i] - my).powi(2);
    }
    num / (dx * dy).sqrt()
}

#[test]
fn criterion_2_alpha_sweep_trend() {
    let (name, synth) = standins().remove(0);
    let out = tempfile::tempdir().unwrap();
    let mut base = ExperimentConfig::new(name, out.path(), out.path());
    base.runs = 10;
    base.design = DesignKind::NodeMab;
    let prepared = prepare_graph(&base, generate(&synth)).unwrap();

    let alphas = [1.0, 4.0, 8.0, 15.0, 30.0];
    let mut ras = Vec::new();
    let mut errs = Vec::new();
    for &alpha in &alphas {
        let mut c = base.clone();
        c.alpha = alpha;
        let o = run_cell(&c, &prepared).unwrap();
        let last = o.final_row();
        ras.push(last.mean_ra);
        errs.push(last.rmse_pct.unwrap());
    }
    let rho_ra = spearman(&alphas, &ras);
    let rho_err = spearman(&alphas, &errs);
    report(
        2,
        "alpha sweep trend",
        rho_ra <= -0.5 && rho_err <= -0.5,
    );
}

// ---------------------------------------------------------------------
// Criterion 3: single-arm worlds have no cross-arm edges, so contagion
// never fires and the mean outcome is binomial at the arm's rate.
// ---------------------------------------------------------------------
#[test]
fn criterion_3_single_arm_calibration() {
    let mut ok = true;
    for (name, synth) in standins() {
        let graph = generate(&synth);
        let n = graph.node_count();
        for (arm, p) in [(Arm::Treatment, 0.6), (Arm::Control, 0.2)] {
            let mut world = SimulationWorld::new(n, WorldConfig::new(0.6, 0.2, 77));
            for node in arrival_permutation(n, 7) {
                let r = world.process_arrival(node, arm, &graph);
                if r.inbound_contagion || !r.outbound_activations.is_empty() {
                    eprintln!("criterion 3 on {name}: cross-arm contagion event");
                    ok = false;
                }
            }
            let mean = world.total_active() as f64 / n as f64;
            let se = (p * (1.0 - p) / n as f64).sqrt();
            if (mean - p).abs() >= 3.0 * se {
                eprintln!("criterion 3 on {name}: mean {mean:.4} vs {p} (se {se:.4})");
                ok = false;
            }
        }
    }
    report(3, "single-arm calibration", ok);
}

// ---------------------------------------------------------------------
// Criterion 4: brute-force oracle on a 6-node graph. The oracle below
// re-derives the whole process (assignment distributions, UCB selection,
// and the three contagion phases) from scratch and enumerates the exact
// outcome tree; 1000 seeded replays must agree within 3 sigma on total
// reward, final activations, and treated count, and the incremental
// mu-hat must equal a log-recomputed mean.
// ---------------------------------------------------------------------
const P_TREATED: f64 = 0.6;
const P_CONTROL: f64 = 0.2;
const ALPHA: f64 = 8.0;

fn six_node_graph() -> AttributedGraph {
    let bits: [&[u8]; 6] = [
        &[1, 1, 0, 0],
        &[1, 0, 1, 0],
        &[0, 1, 1, 1],
        &[1, 1, 1, 0],
        &[0, 0, 1, 1],
        &[1, 0, 0, 1],
    ];
    let edges = [(0, 1), (0, 5), (1, 2), (1, 4), (2, 3), (3, 4), (4, 5)];
    let ids = (0..6).map(|i| i.to_string()).collect();
    let attrs = bits.iter().map(|b| Attributes::from_bits(b)).collect();
    let mut g = AttributedGraph::new(ids, vec![String::new(); 6], attrs, &edges);
    compute_spillover_weights(&mut g);
    g
}

#[derive(Clone)]
struct OracleState {
    explored: [bool; 6],
    active: [bool; 6],
    arm: [Option<Arm>; 6],
    mu: [f64; 2],
    m: [u64; 2],
    t: u64,
    cluster_arm: [Option<Arm>; 2],
}

impl OracleState {
    fn fresh() -> Self {
        OracleState {
            explored: [false; 6],
            active: [false; 6],
            arm: [None; 6],
            mu: [0.0; 2],
            m: [1; 2],
            t: 0,
            cluster_arm: [None; 2],
        }
    }
}

/// Accumulated first and second moments of (total reward, total active,
/// treated count) over the exact outcome distribution.
#[derive(Default)]
struct Moments {
    e: [f64; 3],
    e2: [f64; 3],
    mass: f64,
}

impl Moments {
    fn leaf(&mut self, prob: f64, reward: f64, active: f64, treated: f64) {
        for (i, x) in [reward, active, treated].into_iter().enumerate() {
            self.e[i] += prob * x;
            self.e2[i] += prob * x * x;
        }
        self.mass += prob;
    }

    fn variance(&self, i: usize) -> f64 {
        (self.e2[i] - self.e[i] * self.e[i]).max(0.0)
    }
}

struct Oracle<'a> {
    graph: &'a AttributedGraph,
    order: &'a [usize],
    design: DesignKind,
    cluster_of: [usize; 6],
    mate: [Option<usize>; 2],
    preassigned: Option<[Arm; 6]>,
}

impl Oracle<'_> {
    /// Independent UCB re-derivation: score both arms at the advanced
    /// arrival counter; strict inequality favors Treatment, ties Control.
    fn select(&self, s: &OracleState) -> Arm {
        let bonus = |m: u64| ALPHA * (2.0 * (s.t as f64).ln() / m as f64).sqrt();
        if s.mu[1] + bonus(s.m[1]) > s.mu[0] + bonus(s.m[0]) {
            Arm::Treatment
        } else {
            Arm::Control
        }
    }

    fn arm_for(&self, node: usize, s: &OracleState) -> Arm {
        if let Some(arms) = &self.preassigned {
            return arms[node];
        }
        let c = self.cluster_of[node];
        match self.design {
            DesignKind::NodeMab => self.select(s),
            DesignKind::ClusterMab => s.cluster_arm[c].unwrap_or_else(|| self.select(s)),
            DesignKind::CmatchMab => s.cluster_arm[c].unwrap_or_else(|| {
                self.mate[c]
                    .and_then(|mc| s.cluster_arm[mc])
                    .map(Arm::opposite)
                    .unwrap_or_else(|| self.select(s))
            }),
            _ => unreachable!("A/B designs are preassigned"),
        }
    }

    fn walk(&self, step: usize, s: OracleState, prob: f64, reward_sum: f64, out: &mut Moments) {
        if step == self.order.len() {
            let active = s.active.iter().filter(|&&a| a).count() as f64;
            let treated = s
                .arm
                .iter()
                .filter(|a| **a == Some(Arm::Treatment))
                .count() as f64;
            out.leaf(prob, reward_sum, active, treated);
            return;
        }
        let node = self.order[step];
        let mut s = s;
        s.t += 1;
        let arm = self.arm_for(node, &s);
        s.arm[node] = Some(arm);
        if self.design.needs_clustering() {
            s.cluster_arm[self.cluster_of[node]] = Some(arm);
        }
        let p_direct = match arm {
            Arm::Treatment => P_TREATED,
            Arm::Control => P_CONTROL,
        };

        // Eligible cross-arm neighbors (ascending id by construction).
        let opp = |s: &OracleState, nb: usize| s.arm[nb] == Some(arm.opposite());
        let inbound: Vec<(usize, f64)> = self
            .graph
            .neighbors(node)
            .iter()
            .filter(|&&(nb, _)| s.explored[nb] && s.active[nb] && opp(&s, nb))
            .map(|&(nb, e)| (nb, self.graph.edge_weight(e)))
            .collect();
        let outbound: Vec<(usize, f64)> = self
            .graph
            .neighbors(node)
            .iter()
            .filter(|&&(nb, _)| s.explored[nb] && !s.active[nb] && opp(&s, nb))
            .map(|&(nb, e)| (nb, self.graph.edge_weight(e)))
            .collect();

        // (probability, node became active) branches after phases 1-2.
        let mut activation_branches: Vec<(f64, bool)> = Vec::new();
        if p_direct > 0.0 {
            activation_branches.push((p_direct, true));
        }
        if p_direct < 1.0 {
            let mut all_fail = 1.0;
            for &(_, w) in &inbound {
                if w > 0.0 {
                    activation_branches.push(((1.0 - p_direct) * all_fail * w, true));
                }
                all_fail *= 1.0 - w;
            }
            if all_fail > 0.0 {
                activation_branches.push(((1.0 - p_direct) * all_fail, false));
            }
        }

        for (p_act, became_active) in activation_branches {
            if !became_active {
                let mut next = s.clone();
                next.explored[node] = true;
                self.finish_arrival(&mut next, arm, 0);
                self.walk(step + 1, next, prob * p_act, reward_sum, out);
                continue;
            }
            // Phase 3: every subset of outbound neighbors independently.
            for mask in 0u32..(1 << outbound.len()) {
                let mut p_sub = 1.0;
                for (i, &(_, w)) in outbound.iter().enumerate() {
                    p_sub *= if mask >> i & 1 == 1 { w } else { 1.0 - w };
                }
                if p_sub == 0.0 {
                    continue;
                }
                let mut next = s.clone();
                next.explored[node] = true;
                next.active[node] = true;
                let mut fired = 0u64;
                for (i, &(nb, _)) in outbound.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        next.active[nb] = true;
                        fired += 1;
                    }
                }
                let reward = 1 + fired;
                self.finish_arrival(&mut next, arm, reward);
                self.walk(
                    step + 1,
                    next,
                    prob * p_act * p_sub,
                    reward_sum + reward as f64,
                    out,
                );
            }
        }
    }

    fn finish_arrival(&self, s: &mut OracleState, arm: Arm, reward: u64) {
        if self.design.is_bandit() {
            let a = arm.index();
            s.m[a] += 1;
            s.mu[a] = (reward as f64 + (s.m[a] - 1) as f64 * s.mu[a]) / s.m[a] as f64;
        }
    }

    fn moments(&self) -> Moments {
        let mut out = Moments::default();
        self.walk(0, OracleState::fresh(), 1.0, 0.0, &mut out);
        assert!((out.mass - 1.0).abs() < 1e-9, "probability mass {}", out.mass);
        out
    }
}

/// Exact distribution over pre-assignments for the A/B designs.
fn ab_assignments(design: DesignKind, cluster_of: &[usize; 6]) -> Vec<(f64, [Arm; 6])> {
    match design {
        DesignKind::NodeAb => {
            // uniform over all balanced 3/3 splits
            let mut out = Vec::new();
            for mask in 0u32..64 {
                if mask.count_ones() != 3 {
                    continue;
                }
                let mut arms = [Arm::Control; 6];
                for (node, arm) in arms.iter_mut().enumerate() {
                    if mask >> node & 1 == 1 {
                        *arm = Arm::Treatment;
                    }
                }
                out.push((1.0 / 20.0, arms));
            }
            out
        }
        DesignKind::ClusterAb | DesignKind::CmatchAb => {
            // two clusters: one treated, one control, either way. For
            // CMatch the clusters are a matched pair, same two outcomes.
            let mut out = Vec::new();
            for first in Arm::BOTH {
                let mut arms = [Arm::Control; 6];
                for (node, arm) in arms.iter_mut().enumerate() {
                    *arm = if cluster_of[node] == 0 {
                        first
                    } else {
                        first.opposite()
                    };
                }
                out.push((0.5, arms));
            }
            out
        }
        _ => unreachable!(),
    }
}

#[test]
fn criterion_4_oracle_equivalence() {
    let graph = six_node_graph();
    let cluster_of = [0usize, 0, 0, 1, 1, 1];
    let clustering = Clustering::from_assignment(cluster_of.to_vec());
    let mut weights = HashMap::new();
    weights.insert((0usize, 1usize), 0.9);
    let match_map = match_clusters(&weights, 0.1);
    assert_eq!(match_map.matched(0), Some(1));

    let arrival_seed = 5u64;
    let order = arrival_permutation(6, arrival_seed);
    let replays = 1000usize;
    let mut ok = true;

    for design in DesignKind::ALL {
        // exact moments from the brute-force tree
        let mut exact = Moments::default();
        if design.is_bandit() {
            let oracle = Oracle {
                graph: &graph,
                order: &order,
                design,
                cluster_of,
                mate: [Some(1), Some(0)],
                preassigned: None,
            };
            exact = oracle.moments();
        } else {
            for (p_assign, arms) in ab_assignments(design, &cluster_of) {
                let oracle = Oracle {
                    graph: &graph,
                    order: &order,
                    design,
                    cluster_of,
                    mate: [Some(1), Some(0)],
                    preassigned: Some(arms),
                };
                let mut part = Moments::default();
                oracle.walk(0, OracleState::fresh(), p_assign, 0.0, &mut part);
                for i in 0..3 {
                    exact.e[i] += part.e[i];
                    exact.e2[i] += part.e2[i];
                }
                exact.mass += part.mass;
            }
            assert!((exact.mass - 1.0).abs() < 1e-9);
        }

        // 1000 seeded replays through the library
        let mut sums = [0.0f64; 3];
        for rep in 0..replays {
            let params = RunParams {
                design,
                alpha: ALPHA,
                interval: 50,
                p_treated: P_TREATED,
                p_control: P_CONTROL,
                arrival_seed,
                world_seed: 10_000 + rep as u64,
                assign_seed: 20_000 + rep as u64,
                explore_fraction: 1.0,
            };
            let out = run_single(
                &graph,
                design.needs_clustering().then_some(&clustering),
                design.needs_match_map().then_some(&match_map),
                &params,
                rep,
            )
            .unwrap();
            sums[0] += out.reports.iter().map(|r| r.reward).sum::<u64>() as f64;
            sums[1] += out.world.total_active() as f64;
            sums[2] += out.world.explored_count(Arm::Treatment) as f64;

            // incremental mu-hat vs log recomputation (phantom zero at m=1)
            if let Some(bandit) = &out.bandit {
                for arm in Arm::BOTH {
                    let rewards: Vec<u64> = out
                        .reports
                        .iter()
                        .filter(|r| r.arm == arm)
                        .map(|r| r.reward)
                        .collect();
                    let mean =
                        rewards.iter().sum::<u64>() as f64 / (rewards.len() + 1) as f64;
                    if (bandit.mu_hat[arm.index()] - mean).abs() > 1e-12 {
                        eprintln!("criterion 4: mu-hat drift on {design}");
                        ok = false;
                    }
                }
            }
        }

        for (i, stat) in ["total reward", "total active", "treated count"]
            .iter()
            .enumerate()
        {
            let mean = sums[i] / replays as f64;
            let sigma = (exact.variance(i) / replays as f64).sqrt();
            let tol = if sigma > 0.0 { 3.0 * sigma } else { 1e-9 };
            if (mean - exact.e[i]).abs() > tol {
                eprintln!(
                    "criterion 4: {design} {stat}: empirical {mean:.4} vs exact {:.4} (tol {tol:.4})",
                    exact.e[i]
                );
                ok = false;
            }
        }
    }
    report(4, "oracle equivalence", ok);
}

// ---------------------------------------------------------------------
// Criterion 5: invariant suite.
// ---------------------------------------------------------------------
#[test]
fn criterion_5_invariants() {
    let mut ok = true;

    // partition validity and match-map involution on a benchmark network
    let (_, synth) = standins().remove(2);
    let graph = generate(&synth);
    let outcome = mcl_cluster(&graph, &MclParams::default());
    if !validate_partition(&outcome.clustering, &graph) {
        eprintln!("criterion 5: MCL output is not a valid partition");
        ok = false;
    }
    let artifacts = build_matching(&graph, &outcome.clustering, 200_000, 9);
    for (a, b) in artifacts.match_map.iter() {
        if artifacts.match_map.matched(b) != Some(a) || a == b {
            eprintln!("criterion 5: match map not involutive at ({a}, {b})");
            ok = false;
        }
    }

    // cluster arm consistency and CMatch complementarity, re-checked
    // from the event log after every arrival
    for design in [DesignKind::ClusterMab, DesignKind::CmatchMab, DesignKind::CmatchAb] {
        let params = RunParams {
            design,
            alpha: 8.0,
            interval: 50,
            p_treated: 0.6,
            p_control: 0.2,
            arrival_seed: 3,
            world_seed: 4,
            assign_seed: 5,
            explore_fraction: 1.0,
        };
        let out = run_single(
            &graph,
            Some(&outcome.clustering),
            design.needs_match_map().then_some(&artifacts.match_map),
            &params,
            0,
        )
        .unwrap();
        let mut seen: HashMap<usize, Arm> = HashMap::new();
        for report in &out.reports {
            let cluster = outcome.clustering.cluster_of(report.node);
            if *seen.entry(cluster).or_insert(report.arm) != report.arm {
                eprintln!("criterion 5: {design} split cluster {cluster} across arms");
                ok = false;
            }
            if design.needs_match_map() {
                if let Some(mate) = artifacts.match_map.matched(cluster) {
                    if let Some(&mate_arm) = seen.get(&mate) {
                        if mate_arm != report.arm.opposite() {
                            eprintln!(
                                "criterion 5: {design} matched pair ({cluster}, {mate}) not complementary"
                            );
                            ok = false;
                        }
                    }
                }
            }
        }
    }

    // one-hop contagion bound: every outbound activation is a direct
    // neighbor of the arriving node
    let params = RunParams {
        design: DesignKind::NodeMab,
        alpha: 8.0,
        interval: 50,
        p_treated: 0.6,
        p_control: 0.2,
        arrival_seed: 6,
        world_seed: 7,
        assign_seed: 8,
        explore_fraction: 1.0,
    };
    let out = run_single(&graph, None, None, &params, 0).unwrap();
    for report in &out.reports {
        let neighbors: Vec<usize> =
            graph.neighbors(report.node).iter().map(|&(nb, _)| nb).collect();
        for &hit in &report.outbound_activations {
            if !neighbors.contains(&hit) {
                eprintln!("criterion 5: contagion beyond one hop ({} -> {hit})", report.node);
                ok = false;
            }
        }
    }

    // deterministic byte-identical replay through the full harness
    let small = SynthConfig {
        communities: 12,
        community_size: 6,
        isolated_communities: 3,
        seed: 4,
        ..SynthConfig::default()
    };
    let data = tempfile::tempdir().unwrap();
    write_planetoid(&generate(&small), data.path(), "toy").unwrap();
    let out_a = tempfile::tempdir().unwrap();
    let out_b = tempfile::tempdir().unwrap();
    let mut config = ExperimentConfig::new("toy", data.path(), out_a.path());
    config.runs = 3;
    config.design = DesignKind::CmatchMab;
    run_experiment(&config).unwrap();
    config.out_dir = out_b.path().to_path_buf();
    run_experiment(&config).unwrap();
    for file in ["trace.csv", "aggregate.csv"] {
        let a = std::fs::read(out_a.path().join(file)).unwrap();
        let b = std::fs::read(out_b.path().join(file)).unwrap();
        if a != b {
            eprintln!("criterion 5: {file} not byte-identical across replays");
            ok = false;
        }
    }

    report(5, "invariant suite", ok);
}

// ---------------------------------------------------------------------
// Criterion 6: the estimator, ratio, UCB, and RMSE formulas reproduce
// their documented examples exactly.
// ---------------------------------------------------------------------
#[test]
fn criterion_6_formula_checks() {
    let mut ok = true;
    let mut check = |cond: bool, what: &str| {
        if !cond {
            eprintln!("criterion 6: {what}");
            ok = false;
        }
    };

    // TTE estimator (Eq. 1)
    let world_with = |treated: &[bool], control: &[bool]| {
        let mut w = SimulationWorld::new(treated.len() + control.len(), WorldConfig::default());
        let mut node = 0;
        for &(outcomes, arm) in &[(treated, Arm::Treatment), (control, Arm::Control)] {
            for &y in outcomes {
                w.plant_explored(node, arm, y);
                node += 1;
            }
        }
        w
    };
    let w = world_with(&[true, true, false], &[false, true]);
    check(
        estimate_tte(&w) == Some(2.0 / 3.0 - 0.5),
        "tte {1,1,0} vs {0,1} != 1/6",
    );
    check(
        estimate_tte(&world_with(&[true, false], &[])).is_none(),
        "tte without control not undefined",
    );
    check(
        estimate_tte(&world_with(&[true, true], &[false, false])) == Some(1.0),
        "maximal tte != 1",
    );

    // reward-action ratio (Eq. 2)
    check(
        reward_action_ratio(&world_with(&[true, true, false], &[true, false])) == 0.6,
        "R/A 3 of 5 != 0.6",
    );
    check(
        reward_action_ratio(&world_with(&[false], &[false])) == 0.0,
        "R/A none active != 0",
    );
    check(
        reward_action_ratio(&world_with(&[true], &[true])) == 1.0,
        "R/A all active != 1",
    );

    // UCB score, selection, and update (Eq. 3)
    check(ucb_score(0.0, 1, 1, 123.0) == 0.0, "ucb at t=1 != mu");
    // analytic: with 2 ln t = 4 and m = 4 the bonus is exactly 1
    let analytic = 0.5 + 1.0 * (2.0 * 2.0 / 4.0f64).sqrt();
    check(analytic == 1.5, "analytic ucb example != 1.5");
    let deep = 0.3 + 8.0 * (2.0 * 10f64.ln() / 2.0).sqrt();
    check(
        (ucb_score(0.3, 2, 10, 8.0) - deep).abs() < 1e-15,
        "ucb(0.3, 2, 10, 8) drifts from direct evaluation",
    );
    let tie = BanditState {
        mu_hat: [0.4, 0.4],
        m: [3, 3],
        t: 9,
        alpha: 2.0,
    };
    check(ucb_select(&tie) == Arm::Control, "tie not broken to Control");
    let greedy = BanditState {
        mu_hat: [0.1, 0.9],
        m: [100, 100],
        t: 101,
        alpha: 0.0,
    };
    check(ucb_select(&greedy) == Arm::Treatment, "alpha=0 not greedy");
    let mut st = BanditState::new(1.0);
    ucb_update(&mut st, Arm::Treatment, 1);
    check(st.mu_hat[1] == 0.5 && st.m[1] == 2, "update r=1 != (0.5, 2)");
    ucb_update(&mut st, Arm::Treatment, 0);
    check((st.mu_hat[1] - 1.0 / 3.0).abs() < 1e-15, "update r=0 != 1/3");
    ucb_update(&mut st, Arm::Treatment, 2);
    check(st.mu_hat[1] == 0.75 && st.m[1] == 4, "update r=2 != (0.75, 4)");

    // RMSE percentage (Eq. 4)
    check(
        (rmse_percent(&[0.3, 0.5], 0.4) - 25.0).abs() < 1e-12,
        "rmse [0.3, 0.5] != 25%",
    );
    check(rmse_percent(&[0.4, 0.4], 0.4) == 0.0, "rmse exact != 0%");
    check(
        (rmse_percent(&[0.0], 0.4) - 100.0).abs() < 1e-12,
        "rmse [0.0] != 100%",
    );

    // checkpoint schedule
    check(
        checkpoint_marks(120, 50) == vec![50, 100, 120],
        "marks(120, 50) wrong",
    );
    check(
        checkpoint_marks(3, 1) == vec![1, 2, 3],
        "marks(3, 1) wrong",
    );

    // edge spillover probability (cosine similarity)
    let a = Attributes::from_bits(&[1, 1, 0]);
    check(cosine_similarity(&a, &a) == 1.0, "self-similarity != 1");
    check(
        cosine_similarity(
            &Attributes::from_bits(&[1, 0]),
            &Attributes::from_bits(&[0, 1]),
        ) == 0.0,
        "orthogonal similarity != 0",
    );
    check(
        cosine_similarity(
            &Attributes::from_bits(&[1, 1, 0]),
            &Attributes::from_bits(&[1, 0, 1]),
        ) == 0.5,
        "half-overlap similarity != 0.5",
    );

    report(6, "formula checks", ok);
}
