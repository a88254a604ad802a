//! Arm assignment policies: randomized A/B designs and UCB bandits at
//! node, cluster, and matched-cluster granularity.

use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cmatch::ClusterMatchMap;
use crate::error::{Error, Result};
use crate::graph::AttributedGraph;
use crate::mcl::Clustering;

/// The two arms of the experiment. Control is arm index 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Arm {
    Control = 0,
    Treatment = 1,
}

impl Arm {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn opposite(self) -> Arm {
        match self {
            Arm::Control => Arm::Treatment,
            Arm::Treatment => Arm::Control,
        }
    }

    pub const BOTH: [Arm; 2] = [Arm::Control, Arm::Treatment];
}

/// The six experiment designs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DesignKind {
    NodeAb,
    ClusterAb,
    CmatchAb,
    NodeMab,
    ClusterMab,
    CmatchMab,
}

impl DesignKind {
    pub const ALL: [DesignKind; 6] = [
        DesignKind::NodeAb,
        DesignKind::ClusterAb,
        DesignKind::CmatchAb,
        DesignKind::NodeMab,
        DesignKind::ClusterMab,
        DesignKind::CmatchMab,
    ];

    pub fn is_bandit(self) -> bool {
        matches!(
            self,
            DesignKind::NodeMab | DesignKind::ClusterMab | DesignKind::CmatchMab
        )
    }

    pub fn needs_clustering(self) -> bool {
        !matches!(self, DesignKind::NodeAb | DesignKind::NodeMab)
    }

    pub fn needs_match_map(self) -> bool {
        matches!(self, DesignKind::CmatchAb | DesignKind::CmatchMab)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DesignKind::NodeAb => "node-ab",
            DesignKind::ClusterAb => "cluster-ab",
            DesignKind::CmatchAb => "cmatch-ab",
            DesignKind::NodeMab => "node-mab",
            DesignKind::ClusterMab => "cluster-mab",
            DesignKind::CmatchMab => "cmatch-mab",
        }
    }
}

impl std::fmt::Display for DesignKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DesignKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "node-ab" => Ok(DesignKind::NodeAb),
            "cluster-ab" => Ok(DesignKind::ClusterAb),
            "cmatch-ab" => Ok(DesignKind::CmatchAb),
            "node-mab" => Ok(DesignKind::NodeMab),
            "cluster-mab" => Ok(DesignKind::ClusterMab),
            "cmatch-mab" => Ok(DesignKind::CmatchMab),
            other => Err(Error::Config(format!("unknown design `{other}`"))),
        }
    }
}

/// Two-arm UCB state. Both arms start with one phantom zero-reward
/// observation (mu = 0, m = 1).
#[derive(Debug, Clone)]
pub struct BanditState {
    pub mu_hat: [f64; 2],
    pub m: [u64; 2],
    pub t: u64,
    pub alpha: f64,
}

impl BanditState {
    pub fn new(alpha: f64) -> Self {
        assert!(alpha >= 0.0, "alpha must be nonnegative");
        BanditState {
            mu_hat: [0.0; 2],
            m: [1; 2],
            t: 0,
            alpha,
        }
    }

    /// Advance the arrival counter; call once per arrival before selection.
    pub fn begin_arrival(&mut self) {
        self.t += 1;
    }
}

/// Optimistic arm value: mu + alpha * sqrt(2 ln t / m).
pub fn ucb_score(mu_hat: f64, m: u64, t: u64, alpha: f64) -> f64 {
    debug_assert!(m >= 1 && t >= 1);
    mu_hat + alpha * (2.0 * (t as f64).ln() / m as f64).sqrt()
}

/// Argmax of the UCB scores; exact ties go to Control (arm index 0).
pub fn ucb_select(state: &BanditState) -> Arm {
    let control = ucb_score(state.mu_hat[0], state.m[0], state.t, state.alpha);
    let treatment = ucb_score(state.mu_hat[1], state.m[1], state.t, state.alpha);
    if treatment > control {
        Arm::Treatment
    } else {
        Arm::Control
    }
}

/// As [`ucb_select`], but ties are broken by a seeded coin instead of
/// always taking Control.
pub fn ucb_select_random_ties(state: &BanditState, rng: &mut impl Rng) -> Arm {
    let control = ucb_score(state.mu_hat[0], state.m[0], state.t, state.alpha);
    let treatment = ucb_score(state.mu_hat[1], state.m[1], state.t, state.alpha);
    if treatment > control {
        Arm::Treatment
    } else if treatment < control {
        Arm::Control
    } else if rng.gen::<bool>() {
        Arm::Treatment
    } else {
        Arm::Control
    }
}

/// Record an observed payoff: m_a <- m_a + 1, then
/// mu_a <- (r + (m_a - 1) * mu_a) / m_a. The arrival counter is untouched.
pub fn ucb_update(state: &mut BanditState, arm: Arm, reward: u64) {
    let a = arm.index();
    state.m[a] += 1;
    let m = state.m[a] as f64;
    state.mu_hat[a] = (reward as f64 + (m - 1.0) * state.mu_hat[a]) / m;
}

/// Pre-assign every node an arm for the A/B designs.
///
/// Node: seeded shuffle, first half Treatment. Cluster: seeded shuffle of
/// clusters, first half Treatment, nodes inherit. CMatch: a fair coin
/// orients each matched pair; unmatched clusters get independent coins.
pub fn assign_ab(
    design: DesignKind,
    graph: &AttributedGraph,
    clustering: Option<&Clustering>,
    match_map: Option<&ClusterMatchMap>,
    rng: &mut impl Rng,
) -> Result<Vec<Arm>> {
    let n = graph.node_count();
    match design {
        DesignKind::NodeAb => {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(rng);
            let mut arms = vec![Arm::Control; n];
            for &node in order.iter().take(n / 2) {
                arms[node] = Arm::Treatment;
            }
            Ok(arms)
        }
        DesignKind::ClusterAb => {
            let clustering = clustering
                .ok_or_else(|| Error::Config("cluster-ab requires a clustering".into()))?;
            let k = clustering.cluster_count();
            let mut order: Vec<usize> = (0..k).collect();
            order.shuffle(rng);
            let mut cluster_arm = vec![Arm::Control; k];
            for &c in order.iter().take(k / 2) {
                cluster_arm[c] = Arm::Treatment;
            }
            Ok((0..n).map(|v| cluster_arm[clustering.cluster_of(v)]).collect())
        }
        DesignKind::CmatchAb => {
            let clustering = clustering
                .ok_or_else(|| Error::Config("cmatch-ab requires a clustering".into()))?;
            let match_map = match_map
                .ok_or_else(|| Error::Config("cmatch-ab requires a cluster match map".into()))?;
            let k = clustering.cluster_count();
            let mut cluster_arm = vec![Arm::Control; k];
            for (a, b) in match_map.pairs() {
                let first = if rng.gen::<bool>() {
                    Arm::Treatment
                } else {
                    Arm::Control
                };
                cluster_arm[a] = first;
                cluster_arm[b] = first.opposite();
            }
            for c in 0..k {
                if match_map.matched(c).is_none() {
                    cluster_arm[c] = if rng.gen::<bool>() {
                        Arm::Treatment
                    } else {
                        Arm::Control
                    };
                }
            }
            Ok((0..n).map(|v| cluster_arm[clustering.cluster_of(v)]).collect())
        }
        other => Err(Error::Config(format!(
            "assign_ab called with bandit design `{other}`"
        ))),
    }
}

/// Per-run record of which arm each cluster has committed to.
#[derive(Debug, Clone)]
pub struct ClusterArms {
    arms: Vec<Option<Arm>>,
}

impl ClusterArms {
    pub fn new(cluster_count: usize) -> Self {
        ClusterArms {
            arms: vec![None; cluster_count],
        }
    }

    pub fn get(&self, cluster: usize) -> Option<Arm> {
        self.arms[cluster]
    }

    pub fn record(&mut self, cluster: usize, arm: Arm) {
        match self.arms[cluster] {
            None => self.arms[cluster] = Some(arm),
            Some(existing) => assert_eq!(
                existing, arm,
                "cluster {cluster} recorded with two different arms"
            ),
        }
    }
}

/// Choose an arm for an arriving node under a bandit design.
///
/// The arrival counter must already be advanced. For cluster and CMatch
/// designs the chosen arm is committed as the cluster's arm.
pub fn mab_select(
    design: DesignKind,
    node: usize,
    state: &BanditState,
    clustering: Option<&Clustering>,
    match_map: Option<&ClusterMatchMap>,
    cluster_arms: &mut ClusterArms,
) -> Arm {
    debug_assert!(state.t >= 1, "begin_arrival must run before selection");
    match design {
        DesignKind::NodeMab => ucb_select(state),
        DesignKind::ClusterMab => {
            let cluster = clustering.expect("cluster-mab requires clustering").cluster_of(node);
            let arm = cluster_arms.get(cluster).unwrap_or_else(|| ucb_select(state));
            cluster_arms.record(cluster, arm);
            arm
        }
        DesignKind::CmatchMab => {
            let clustering = clustering.expect("cmatch-mab requires clustering");
            let match_map = match_map.expect("cmatch-mab requires match map");
            let cluster = clustering.cluster_of(node);
            let arm = if let Some(arm) = cluster_arms.get(cluster) {
                arm
            } else if let Some(mate_arm) =
                match_map.matched(cluster).and_then(|mate| cluster_arms.get(mate))
            {
                mate_arm.opposite()
            } else {
                ucb_select(state)
            };
            cluster_arms.record(cluster, arm);
            arm
        }
        other => panic!("mab_select called with A/B design `{other}`"),
    }
}
