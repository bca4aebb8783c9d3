//! Planning and simulation core for energy-constrained decentralized binary
//! detection in one-dimensional wireless sensor networks.
//!
//! Sensors quantize Gaussian observations with threshold quantizers and send
//! the quantized messages to a fusion node, either directly (parallel
//! configuration) or relayed through chains of other sensors (multi-hop
//! configuration). Transmitting `b` bits over distance `d` costs `b * d^2`.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs; file formats, the CLI and parallel sweeps live in
//! the `hopdetect` crate.
//!
//! Layout:
//!
//! - [`normal`], [`golden`]: numeric building blocks.
//! - [`detection`]: hypothesis pairs, quantizers, Chernoff information and
//!   KL divergence of the induced message distributions.
//! - [`thresholds`]: optimal quantizer thresholds and per-sensor info curves.
//! - [`network`]: line geometry, deployments, the energy law.
//! - [`parallel`]: bit allocation when every sensor talks to the fusion node.
//! - [`multihop`]: relay chain formation with bit allocation.
//! - [`evaluate`]: information, energy, lifetime and failure metrics.
//! - [`montecarlo`]: simulated detection error of an allocation.
//! - [`sweep`]: the comparison experiments across budgets and sizes.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod detection;
pub mod error;
pub mod evaluate;
pub mod golden;
pub mod montecarlo;
pub mod multihop;
pub mod network;
pub mod normal;
pub mod parallel;
pub mod sweep;
pub mod thresholds;

pub use detection::{
    cell_probabilities, chernoff_information, info_upper_bound, kl_divergence, ConditionalPmf,
    GaussianHypothesisPair, InfoCurve, Metric, Quantizer,
};
pub use error::{Error, Result};
pub use evaluate::{
    evaluate, failure_impact, fusion_information, network_lifetime, Configuration,
    EvaluationReport, Lifetime,
};
pub use montecarlo::{monte_carlo_detection, DetectionStats, QuantizerBank};
pub use multihop::{form_groups, plan_energy, plan_multihop, Group, MultihopPlan, PlanEnergy};
pub use network::{
    deploy, split_at_fusion, transmit_energy, Allocation, Deployment, Network, Node, NodeId,
};
pub use parallel::{allocate_info_max, allocate_lifetime_max, AllocationResult, Objective};
pub use sweep::{run_sweep, Strategy, SweepKind, SweepParams, SweepRecord};
pub use thresholds::{build_info_curve, optimize_thresholds, ThresholdSearch, ThresholdSolution};

/// Largest number of quantization bits a sensor may use.
pub const DEFAULT_MAX_BITS: u32 = 8;

/// `floor(x)` that treats values within a relative 1e-9 of an integer as that
/// integer, so `floor((E/L) / d^2)` with `d = sqrt(E/L)` yields 1 and not 0.
pub(crate) fn snapped_floor(x: f64) -> f64 {
    let r = libm::round(x);
    if libm::fabs(x - r) <= 1e-9 * libm::fmax(libm::fabs(r), 1.0) {
        r
    } else {
        libm::floor(x)
    }
}
