//! Outcome simulation for one experiment run.
//!
//! Each arrival is processed in three phases: a direct activation draw at
//! its arm's probability (within-arm spillover is folded into that
//! probability), inbound cross-arm contagion from already-active explored
//! neighbors, and outbound cross-arm contagion to inactive explored
//! neighbors. Contagion never chains beyond the arrival's direct
//! neighborhood.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::designs::Arm;
use crate::graph::AttributedGraph;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WorldConfig {
    pub p_treated: f64,
    pub p_control: f64,
    pub seed: u64,
}

impl WorldConfig {
    pub fn new(p_treated: f64, p_control: f64, seed: u64) -> Self {
        assert!(
            (0.0..=1.0).contains(&p_control)
                && (0.0..=1.0).contains(&p_treated)
                && p_control <= p_treated,
            "need 0 <= p_control <= p_treated <= 1"
        );
        WorldConfig {
            p_treated,
            p_control,
            seed,
        }
    }

    pub fn true_tte(&self) -> f64 {
        self.p_treated - self.p_control
    }

    pub fn activation_probability(&self, arm: Arm) -> f64 {
        match arm {
            Arm::Treatment => self.p_treated,
            Arm::Control => self.p_control,
        }
    }
}

impl Default for WorldConfig {
    fn default() -> Self {
        WorldConfig::new(0.6, 0.2, 0)
    }
}

/// Mean outcome in the counterfactual single-arm world: with every node on
/// one arm there are no cross-arm edges, so the mean is the arm's
/// activation probability and the estimand's truth is their difference.
pub fn ground_truth_outcome_mean(arm: Arm, config: &WorldConfig) -> f64 {
    config.activation_probability(arm)
}

/// What happened when one node arrived.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrivalReport {
    pub node: usize,
    pub arm: Arm,
    pub direct_activated: bool,
    pub inbound_contagion: bool,
    pub outbound_activations: Vec<usize>,
    pub reward: u64,
}

/// Evolving state of one experiment run. Owned by exactly one run; the
/// graph is shared read-only.
#[derive(Debug, Clone)]
pub struct SimulationWorld {
    arm: Vec<Option<Arm>>,
    outcome: Vec<bool>,
    explored: Vec<bool>,
    explored_count: [usize; 2],
    active_count: [usize; 2],
    rng: ChaCha8Rng,
    config: WorldConfig,
}

impl SimulationWorld {
    pub fn new(node_count: usize, config: WorldConfig) -> Self {
        SimulationWorld {
            arm: vec![None; node_count],
            outcome: vec![false; node_count],
            explored: vec![false; node_count],
            explored_count: [0; 2],
            active_count: [0; 2],
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            config,
        }
    }

    pub fn config(&self) -> &WorldConfig {
        &self.config
    }

    pub fn arm(&self, node: usize) -> Option<Arm> {
        self.arm[node]
    }

    pub fn outcome(&self, node: usize) -> bool {
        self.outcome[node]
    }

    pub fn is_explored(&self, node: usize) -> bool {
        self.explored[node]
    }

    /// Explored nodes on `arm`.
    pub fn explored_count(&self, arm: Arm) -> usize {
        self.explored_count[arm.index()]
    }

    pub fn total_explored(&self) -> usize {
        self.explored_count[0] + self.explored_count[1]
    }

    /// Explored, activated nodes on `arm`.
    pub fn active_count(&self, arm: Arm) -> usize {
        self.active_count[arm.index()]
    }

    pub fn total_active(&self) -> usize {
        self.active_count[0] + self.active_count[1]
    }

    /// Mark a node explored with a fixed arm and outcome, bypassing the
    /// stochastic phases. Intended for tests and calibration checks.
    pub fn plant_explored(&mut self, node: usize, arm: Arm, outcome: bool) {
        assert!(!self.explored[node]);
        self.arm[node] = Some(arm);
        self.outcome[node] = outcome;
        self.explored[node] = true;
        self.explored_count[arm.index()] += 1;
        if outcome {
            self.active_count[arm.index()] += 1;
        }
    }

    /// Process one arriving node on `arm`; see the module docs for the
    /// three phases. RNG draws happen in a fixed order (direct draw, then
    /// neighbors in ascending node id for each contagion phase) so runs
    /// replay exactly.
    pub fn process_arrival(
        &mut self,
        node: usize,
        arm: Arm,
        graph: &AttributedGraph,
    ) -> ArrivalReport {
        assert!(!self.explored[node], "node {node} already explored");

        self.arm[node] = Some(arm);

        // Phase 1: direct treatment (+ allowable interference, folded in).
        let p = self.config.activation_probability(arm);
        let direct_activated = self.rng.gen::<f64>() < p;
        let mut active = direct_activated;

        // Phase 2: inbound cross-arm contagion, skipped once active.
        let mut inbound_contagion = false;
        if !active {
            for &(nb, edge) in graph.neighbors(node) {
                if self.explored[nb]
                    && self.outcome[nb]
                    && self.arm[nb] == Some(arm.opposite())
                {
                    if self.rng.gen::<f64>() < graph.edge_weight(edge) {
                        active = true;
                        inbound_contagion = true;
                        break;
                    }
                }
            }
        }

        // Phase 3: outbound cross-arm contagion, one hop only.
        let mut outbound_activations = Vec::new();
        if active {
            for &(nb, edge) in graph.neighbors(node) {
                if self.explored[nb]
                    && !self.outcome[nb]
                    && self.arm[nb] == Some(arm.opposite())
                {
                    if self.rng.gen::<f64>() < graph.edge_weight(edge) {
                        self.outcome[nb] = true;
                        self.active_count[arm.opposite().index()] += 1;
                        outbound_activations.push(nb);
                    }
                }
            }
        }

        self.outcome[node] = active;
        self.explored[node] = true;
        self.explored_count[arm.index()] += 1;
        if active {
            self.active_count[arm.index()] += 1;
        }

        let reward = active as u64 + outbound_activations.len() as u64;
        ArrivalReport {
            node,
            arm,
            direct_activated,
            inbound_contagion,
            outbound_activations,
            reward,
        }
    }
}
