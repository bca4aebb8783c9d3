//! Scoring allocations and plans.

use alloc::collections::BTreeMap;

use crate::detection::InfoCurve;
use crate::error::{Error, Result};
use crate::multihop::{plan_energy, MultihopPlan};
use crate::network::{transmit_energy, Allocation, Network, NodeId};
use crate::snapped_floor;

/// A bit assignment together with how its bits travel to the fusion node.
#[derive(Debug, Clone, Copy)]
pub enum Configuration<'a> {
    Parallel(&'a Allocation),
    Multihop(&'a MultihopPlan),
}

impl Configuration<'_> {
    pub fn allocation(&self) -> Allocation {
        match self {
            Configuration::Parallel(a) => (*a).clone(),
            Configuration::Multihop(p) => p.allocation(),
        }
    }

    /// Transmit energy per node per detection round.
    pub fn per_node_energy(&self, net: &Network) -> Result<BTreeMap<NodeId, f64>> {
        match self {
            Configuration::Parallel(a) => {
                if !a.covers(net) {
                    return Err(Error::InconsistentPlan(
                        "allocation does not match network nodes",
                    ));
                }
                a.iter()
                    .map(|(id, b)| {
                        Ok((
                            id,
                            transmit_energy(b, net.distance_to_fusion(net.node(id)?)),
                        ))
                    })
                    .collect()
            }
            Configuration::Multihop(p) => Ok(plan_energy(p, net)?.per_node),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Lifetime {
    Rounds(u64),
    /// No node ever transmits.
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub fusion_info: f64,
    pub total_energy: f64,
    pub lifetime: Lifetime,
    pub per_node_energy: BTreeMap<NodeId, f64>,
}

/// Additive information at the fusion node: `sum_l C(M_l)`.
pub fn fusion_information(alloc: &Allocation, curve: &InfoCurve) -> f64 {
    alloc.iter().map(|(_, b)| curve.value(b)).sum()
}

/// Rounds until the first transmitting node exhausts `battery`.
pub fn network_lifetime(
    net: &Network,
    config: Configuration<'_>,
    battery: f64,
) -> Result<Lifetime> {
    if !(battery > 0.0) {
        return Err(Error::InvalidParameter("battery must be positive"));
    }
    Ok(lifetime_from_energy(&config.per_node_energy(net)?, battery))
}

fn lifetime_from_energy(per_node: &BTreeMap<NodeId, f64>, battery: f64) -> Lifetime {
    per_node
        .values()
        .filter(|&&e| e > 0.0)
        .map(|&e| snapped_floor(battery / e) as u64)
        .min()
        .map_or(Lifetime::Unbounded, Lifetime::Rounds)
}

/// Information lost at the fusion node when `failed` stops transmitting:
/// its own contribution plus, in a relay chain, everything upstream of it.
pub fn failure_impact(config: Configuration<'_>, failed: NodeId, curve: &InfoCurve) -> Result<f64> {
    match config {
        Configuration::Parallel(a) => {
            if !a.as_map().contains_key(&failed) {
                return Err(Error::UnknownNode(failed));
            }
            Ok(curve.value(a.get(failed)))
        }
        Configuration::Multihop(p) => {
            let (group, pos) = p.locate(failed).ok_or(Error::UnknownNode(failed))?;
            Ok(group.bits[..=pos].iter().map(|&b| curve.value(b)).sum())
        }
    }
}

pub fn evaluate(
    net: &Network,
    config: Configuration<'_>,
    curve: &InfoCurve,
    battery: f64,
) -> Result<EvaluationReport> {
    if !(battery > 0.0) {
        return Err(Error::InvalidParameter("battery must be positive"));
    }
    let per_node_energy = config.per_node_energy(net)?;
    Ok(EvaluationReport {
        fusion_info: fusion_information(&config.allocation(), curve),
        total_energy: per_node_energy.values().sum(),
        lifetime: lifetime_from_energy(&per_node_energy, battery),
        per_node_energy,
    })
}
