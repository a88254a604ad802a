//! Executes one experiment run: a seeded arrival permutation over the
//! whole graph, arm selection per the chosen design, outcome simulation,
//! and checkpointed metrics.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cmatch::ClusterMatchMap;
use crate::designs::{
    assign_ab, mab_select, BanditState, ClusterArms, DesignKind,
};
use crate::error::Result;
use crate::graph::AttributedGraph;
use crate::mcl::Clustering;
use crate::metrics::{checkpoint_marks, Checkpoint, RunTrace};
use crate::sim::{ArrivalReport, SimulationWorld, WorldConfig};

/// Parameters for a single run.
#[derive(Debug, Clone)]
pub struct RunParams {
    pub design: DesignKind,
    pub alpha: f64,
    pub interval: usize,
    pub p_treated: f64,
    pub p_control: f64,
    /// Seed for the arrival permutation; shared across designs so runs
    /// with the same run index are paired.
    pub arrival_seed: u64,
    /// Seed for the outcome draws.
    pub world_seed: u64,
    /// Seed for A/B pre-assignment.
    pub assign_seed: u64,
    /// Stop after this fraction of the network has arrived (1.0 = all).
    pub explore_fraction: f64,
}

/// Full output of one run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub trace: RunTrace,
    pub reports: Vec<ArrivalReport>,
    pub world: SimulationWorld,
    pub bandit: Option<BanditState>,
    pub arrival_order: Vec<usize>,
}

/// Uniform random arrival permutation of all nodes.
pub fn arrival_permutation(node_count: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..node_count).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    order
}

pub fn run_single(
    graph: &AttributedGraph,
    clustering: Option<&Clustering>,
    match_map: Option<&ClusterMatchMap>,
    params: &RunParams,
    run_index: usize,
) -> Result<RunOutput> {
    assert!((0.0..=1.0).contains(&params.explore_fraction));
    let n = graph.node_count();
    let order = arrival_permutation(n, params.arrival_seed);
    let limit = ((n as f64) * params.explore_fraction).round() as usize;
    let limit = limit.clamp(1, n);

    let world_config = WorldConfig::new(params.p_treated, params.p_control, params.world_seed);
    let mut world = SimulationWorld::new(n, world_config);

    let preassigned = if params.design.is_bandit() {
        None
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(params.assign_seed);
        Some(assign_ab(
            params.design,
            graph,
            clustering,
            match_map,
            &mut rng,
        )?)
    };

    let mut bandit = params
        .design
        .is_bandit()
        .then(|| BanditState::new(params.alpha));
    let mut cluster_arms =
        ClusterArms::new(clustering.map_or(0, |c| c.cluster_count()));

    let marks = checkpoint_marks(limit, params.interval);
    let mut next_mark = 0usize;
    let mut checkpoints = Vec::with_capacity(marks.len());
    let mut reports = Vec::with_capacity(limit);

    for (arrived, &node) in order.iter().take(limit).enumerate() {
        let arm = match (&mut bandit, &preassigned) {
            (Some(state), None) => {
                state.begin_arrival();
                mab_select(
                    params.design,
                    node,
                    state,
                    clustering,
                    match_map,
                    &mut cluster_arms,
                )
            }
            (None, Some(arms)) => arms[node],
            _ => unreachable!(),
        };
        let report = world.process_arrival(node, arm, graph);
        if let Some(state) = &mut bandit {
            crate::designs::ucb_update(state, arm, report.reward);
        }
        reports.push(report);

        if next_mark < marks.len() && arrived + 1 == marks[next_mark] {
            checkpoints.push(Checkpoint::capture(&world));
            next_mark += 1;
        }
    }

    Ok(RunOutput {
        trace: RunTrace {
            run: run_index,
            checkpoints,
        },
        reports,
        world,
        bandit,
        arrival_order: order[..limit].to_vec(),
    })
}
