//! Simulation library for estimating the total treatment effect (TTE) in
//! networks under interference, comparing randomized A/B designs against
//! UCB bandit designs at node, cluster, and matched-cluster granularity.
//!
//! The pipeline: load an attributed citation graph ([`graph`]), partition
//! it with Markov Clustering ([`mcl`]), pair similar clusters ([`cmatch`]),
//! then replay seeded node arrivals under one of six assignment designs
//! ([`designs`]) while simulating cross-arm contagion ([`sim`]) and
//! checkpointing TTE error and reward-action ratio ([`metrics`]). The
//! [`harness`] module orchestrates multi-run experiments and alpha sweeps;
//! [`plot`] renders the results as SVG.
//!
//! See the `examples/` directory for a runnable tour of each capability.

pub mod cli;
pub mod cmatch;
pub mod designs;
pub mod error;
pub mod graph;
pub mod harness;
pub mod mcl;
pub mod metrics;
pub mod plot;
pub mod runner;
pub mod sim;
pub mod synth;

pub use designs::{Arm, BanditState, DesignKind};
pub use error::{Error, Result};
pub use graph::{cosine_similarity, AttributedGraph};
pub use harness::ExperimentConfig;
pub use mcl::{Clustering, MclParams};
pub use sim::{SimulationWorld, WorldConfig};
