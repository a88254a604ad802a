//! Treatment-effect estimation, reward-action ratio, and cross-run RMSE.

use serde::{Deserialize, Serialize};

use crate::designs::Arm;
use crate::sim::SimulationWorld;

/// Difference of mean outcomes over explored treatment and control nodes;
/// `None` until both arms have at least one explored node.
pub fn estimate_tte(world: &SimulationWorld) -> Option<f64> {
    let n1 = world.explored_count(Arm::Treatment);
    let n0 = world.explored_count(Arm::Control);
    if n1 == 0 || n0 == 0 {
        return None;
    }
    let y1 = world.active_count(Arm::Treatment) as f64 / n1 as f64;
    let y0 = world.active_count(Arm::Control) as f64 / n0 as f64;
    Some(y1 - y0)
}

/// Fraction of explored nodes that are activated.
pub fn reward_action_ratio(world: &SimulationWorld) -> f64 {
    let explored = world.total_explored();
    assert!(explored > 0, "reward_action_ratio needs explored nodes");
    world.total_active() as f64 / explored as f64
}

/// RMSE of the estimates against the truth, as a percentage of the truth.
pub fn rmse_percent(estimates: &[f64], true_tte: f64) -> f64 {
    assert!(!estimates.is_empty(), "rmse_percent needs estimates");
    assert!(true_tte != 0.0, "true TTE must be nonzero");
    let mse = estimates
        .iter()
        .map(|e| (true_tte - e) * (true_tte - e))
        .sum::<f64>()
        / estimates.len() as f64;
    mse.sqrt() / true_tte * 100.0
}

/// Cumulative metric snapshot after a prefix of arrivals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub arrivals: usize,
    pub n_treated: usize,
    pub n_control: usize,
    /// `None` while one arm is still unexplored.
    pub tte_estimate: Option<f64>,
    pub ra_ratio: f64,
}

impl Checkpoint {
    pub fn capture(world: &SimulationWorld) -> Self {
        Checkpoint {
            arrivals: world.total_explored(),
            n_treated: world.explored_count(Arm::Treatment),
            n_control: world.explored_count(Arm::Control),
            tte_estimate: estimate_tte(world),
            ra_ratio: reward_action_ratio(world),
        }
    }
}

/// Checkpoint arrival counts for a run of `total` arrivals at the given
/// interval: every multiple of `interval` plus a final checkpoint.
pub fn checkpoint_marks(total: usize, interval: usize) -> Vec<usize> {
    assert!(interval >= 1);
    let mut marks: Vec<usize> = (1..=total / interval).map(|k| k * interval).collect();
    if marks.last() != Some(&total) && total > 0 {
        marks.push(total);
    }
    marks
}

/// One run's checkpointed trace.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunTrace {
    pub run: usize,
    pub checkpoints: Vec<Checkpoint>,
}

/// Cross-run aggregate at one checkpoint index.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AggregateRow {
    pub arrivals: usize,
    /// RMSE as a percentage of the true TTE, over runs with a defined
    /// estimate at this checkpoint; `None` when no run had one.
    pub rmse_pct: Option<f64>,
    pub mean_ra: f64,
    /// Runs contributing to `rmse_pct`.
    pub defined_runs: usize,
    pub total_runs: usize,
}

/// Aggregate run traces checkpoint-by-checkpoint. Runs are aligned by
/// checkpoint index; all runs are expected to share the same arrival
/// schedule.
pub fn aggregate(traces: &[RunTrace], true_tte: f64) -> Vec<AggregateRow> {
    assert!(!traces.is_empty());
    let len = traces[0].checkpoints.len();
    assert!(
        traces.iter().all(|t| t.checkpoints.len() == len),
        "misaligned run traces"
    );
    (0..len)
        .map(|i| {
            let estimates: Vec<f64> = traces
                .iter()
                .filter_map(|t| t.checkpoints[i].tte_estimate)
                .collect();
            let rmse_pct = if estimates.is_empty() {
                None
            } else {
                Some(rmse_percent(&estimates, true_tte))
            };
            let mean_ra = traces.iter().map(|t| t.checkpoints[i].ra_ratio).sum::<f64>()
                / traces.len() as f64;
            AggregateRow {
                arrivals: traces[0].checkpoints[i].arrivals,
                rmse_pct,
                mean_ra,
                defined_runs: estimates.len(),
                total_runs: traces.len(),
            }
        })
        .collect()
}
