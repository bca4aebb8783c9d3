//! Parallel-vs-multihop comparison sweeps over budgets and network sizes.
//!
//! Every grid point is evaluated on `repetitions` deployments; repetition `r`
//! uses seed `root_seed + r`, so all grid points share the same deployments
//! and the result does not depend on evaluation order.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::detection::InfoCurve;
use crate::error::{Error, Result};
use crate::evaluate::fusion_information;
use crate::multihop::{plan_energy, plan_multihop};
use crate::network::{deploy, Deployment, Network};
use crate::parallel::{allocate_info_max, allocate_lifetime_max};

/// Ordered by name, which is also the canonical output order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    Multihop,
    ParallelInfo,
    ParallelLifetime,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [
        Strategy::Multihop,
        Strategy::ParallelInfo,
        Strategy::ParallelLifetime,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Multihop => "multihop",
            Strategy::ParallelInfo => "parallel-info",
            Strategy::ParallelLifetime => "parallel-lifetime",
        }
    }
}

impl core::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or(Error::InvalidParameter(
                "strategy must be multihop, parallel-info or parallel-lifetime",
            ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    InfoVsEnergy,
    InfoVsBits,
    InfoVsSize,
}

impl SweepKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepKind::InfoVsEnergy => "info-vs-energy",
            SweepKind::InfoVsBits => "info-vs-bits",
            SweepKind::InfoVsSize => "info-vs-size",
        }
    }
}

impl core::str::FromStr for SweepKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            SweepKind::InfoVsEnergy,
            SweepKind::InfoVsBits,
            SweepKind::InfoVsSize,
        ]
        .into_iter()
        .find(|k| k.as_str() == s)
        .ok_or(Error::InvalidParameter("unknown sweep kind"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepParams {
    pub kind: SweepKind,
    pub deployment: Deployment,
    pub length: f64,
    pub fusion_offset: f64,
    /// Network sizes; a single entry for the energy and bit sweeps.
    pub sizes: Vec<usize>,
    /// Energy budgets; a single entry for the size sweep.
    pub energies: Vec<f64>,
    pub repetitions: usize,
    pub strategies: Vec<Strategy>,
}

impl SweepParams {
    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() || self.energies.is_empty() || self.strategies.is_empty() {
            return Err(Error::EmptyGrid);
        }
        if self.repetitions == 0 {
            return Err(Error::InvalidParameter("repetitions must be at least 1"));
        }
        if self.sizes.contains(&0) {
            return Err(Error::InvalidParameter("network sizes must be positive"));
        }
        if self.energies.iter().any(|e| !(*e >= 0.0) || !e.is_finite()) {
            return Err(Error::InvalidParameter(
                "energy budgets must be finite and nonnegative",
            ));
        }
        let single = match self.kind {
            SweepKind::InfoVsEnergy | SweepKind::InfoVsBits => self.sizes.len() == 1,
            SweepKind::InfoVsSize => self.energies.len() == 1,
        };
        if !single {
            return Err(Error::InvalidParameter(
                "energy/bit sweeps take one size; size sweeps take one energy",
            ));
        }
        Ok(())
    }

    /// Grid points `(L, E)` in canonical order.
    pub fn points(&self) -> Vec<(usize, f64)> {
        let mut v: Vec<(usize, f64)> = self
            .sizes
            .iter()
            .flat_map(|&l| self.energies.iter().map(move |&e| (l, e)))
            .collect();
        v.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
        v.dedup();
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub strategy: Strategy,
    pub nodes: usize,
    pub energy: f64,
    pub mean_info: f64,
    pub mean_bits: f64,
    pub mean_energy: f64,
    /// Standard error of `mean_info` across repetitions.
    pub stderr_info: f64,
}

/// Fusion information, total bits and energy used by one strategy on one
/// network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome {
    pub info: f64,
    pub bits: u64,
    pub energy: f64,
}

pub fn run_strategy(net: &Network, strategy: Strategy, curve: &InfoCurve) -> Result<Outcome> {
    let (alloc, energy) = match strategy {
        Strategy::ParallelInfo => {
            let r = allocate_info_max(net, curve);
            (r.allocation, r.total_energy)
        }
        Strategy::ParallelLifetime => {
            let r = allocate_lifetime_max(net, curve.max_bits());
            (r.allocation, r.total_energy)
        }
        Strategy::Multihop => {
            let plan = plan_multihop(net, curve)?;
            let energy = plan_energy(&plan, net)?.total;
            (plan.allocation(), energy)
        }
    };
    Ok(Outcome {
        info: fusion_information(&alloc, curve),
        bits: alloc.total_bits(),
        energy,
    })
}

/// Records for one grid point, one per strategy in canonical order.
pub fn evaluate_point(
    params: &SweepParams,
    nodes: usize,
    energy: f64,
    curve: &InfoCurve,
    root_seed: u64,
) -> Result<Vec<SweepRecord>> {
    let mut strategies = params.strategies.clone();
    strategies.sort();
    strategies.dedup();
    let mut sums: Vec<(f64, f64, f64, f64)> = alloc::vec![(0.0, 0.0, 0.0, 0.0); strategies.len()];
    for r in 0..params.repetitions {
        let seed = root_seed.wrapping_add(r as u64);
        let net = deploy(
            params.deployment,
            nodes,
            params.length,
            params.fusion_offset,
            energy,
            seed,
        )?;
        for (k, &s) in strategies.iter().enumerate() {
            let o = run_strategy(&net, s, curve)?;
            let acc = &mut sums[k];
            acc.0 += o.info;
            acc.1 += o.info * o.info;
            acc.2 += o.bits as f64;
            acc.3 += o.energy;
        }
    }
    let n = params.repetitions as f64;
    Ok(strategies
        .iter()
        .zip(sums)
        .map(|(&strategy, (si, sii, sb, se))| {
            let mean = si / n;
            let stderr = if params.repetitions > 1 {
                let var = ((sii - n * mean * mean) / (n - 1.0)).max(0.0);
                libm::sqrt(var / n)
            } else {
                0.0
            };
            SweepRecord {
                strategy,
                nodes,
                energy,
                mean_info: mean,
                mean_bits: sb / n,
                mean_energy: se / n,
                stderr_info: stderr,
            }
        })
        .collect())
}

/// Sorts records by strategy, then network size, then energy.
pub fn canonical_order(records: &mut [SweepRecord]) {
    records.sort_by(|a, b| {
        a.strategy
            .cmp(&b.strategy)
            .then(a.nodes.cmp(&b.nodes))
            .then(a.energy.partial_cmp(&b.energy).unwrap_or(Ordering::Equal))
    });
}

pub fn run_sweep(
    params: &SweepParams,
    curve: &InfoCurve,
    root_seed: u64,
) -> Result<Vec<SweepRecord>> {
    params.validate()?;
    let mut out = Vec::new();
    for (nodes, energy) in params.points() {
        out.extend(evaluate_point(params, nodes, energy, curve, root_seed)?);
    }
    canonical_order(&mut out);
    Ok(out)
}
