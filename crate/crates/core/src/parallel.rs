//! Bit allocation when every sensor transmits straight to the fusion node.

use alloc::vec::Vec;

use crate::detection::InfoCurve;
use crate::network::{transmit_energy, Allocation, Network, Node};
use crate::snapped_floor;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    InfoMax,
    LifetimeMax,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AllocationResult {
    pub allocation: Allocation,
    pub total_energy: f64,
    pub objective: Objective,
}

/// Information-maximizing allocation.
///
/// Nodes are taken farthest-first. The farthest active node gets `M_1` bits
/// and every other node the bit count whose information per bit is closest to
/// `(d_l^2 / d_1^2) * C(M_1) / M_1`, i.e. energy spent in proportion to the
/// information delivered. `M_1` grows while the total energy stays below `E`;
/// on overshoot it steps back one bit. If even `M_1 = 1` overshoots, the
/// farthest node is dropped (zero bits) and the rest is allocated again.
pub fn allocate_info_max(net: &Network, curve: &InfoCurve) -> AllocationResult {
    let budget = net.energy_budget();
    let max_bits = curve.max_bits();
    let order = net.by_distance_desc();
    let dist: Vec<f64> = order.iter().map(|n| net.distance_to_fusion(n)).collect();
    let mut allocation = Allocation::zeros(net);

    let assign = |active: &[Node], d: &[f64], m1: u32| -> Vec<u32> {
        let d1 = d[0];
        let per_bit = curve.per_bit(m1);
        let mut bits = Vec::with_capacity(active.len());
        bits.push(m1);
        for &dl in &d[1..] {
            let target = (dl * dl) / (d1 * d1) * per_bit;
            bits.push(curve.closest_per_bit(target));
        }
        bits
    };
    let energy = |bits: &[u32], d: &[f64]| -> f64 {
        bits.iter()
            .zip(d)
            .map(|(&b, &dl)| transmit_energy(b, dl))
            .sum()
    };

    for start in 0..order.len() {
        let active = &order[start..];
        let d = &dist[start..];
        if d[0] == 0.0 {
            // every remaining node sits on the fusion node and transmits for free
            for n in active {
                allocation.set(n.id, max_bits);
            }
            break;
        }
        let mut m1 = 1;
        let mut bits = assign(active, d, m1);
        let mut e = energy(&bits, d);
        while e < budget && m1 < max_bits {
            m1 += 1;
            bits = assign(active, d, m1);
            e = energy(&bits, d);
        }
        if e > budget {
            m1 -= 1;
            if m1 == 0 {
                continue;
            }
            // the previous iteration's allocation, which was under budget
            bits = assign(active, d, m1);
        }
        for (n, &b) in active.iter().zip(&bits) {
            allocation.set(n.id, b);
        }
        break;
    }
    let total_energy = allocation.direct_energy(net).unwrap_or(0.0);
    AllocationResult {
        allocation,
        total_energy,
        objective: Objective::InfoMax,
    }
}

/// Lifetime-maximizing allocation: every node gets the same energy share
/// `E/L` and `M_l = min(max_bits, floor((E/L) / d_l^2))`. Nodes on top of the
/// fusion node get `max_bits`.
pub fn allocate_lifetime_max(net: &Network, max_bits: u32) -> AllocationResult {
    let share = net.per_node_share();
    let mut allocation = Allocation::zeros(net);
    for n in net.nodes() {
        let d = net.distance_to_fusion(n);
        let bits = if d == 0.0 {
            max_bits
        } else {
            let m = snapped_floor(share / (d * d));
            if m >= f64::from(max_bits) {
                max_bits
            } else {
                m as u32
            }
        };
        allocation.set(n.id, bits);
    }
    let total_energy = allocation.direct_energy(net).unwrap_or(0.0);
    AllocationResult {
        allocation,
        total_energy,
        objective: Objective::LifetimeMax,
    }
}
