//! Relay-chain formation with joint path and bit selection.
//!
//! Nodes are grouped into chains that run toward the fusion node. Each
//! chain node adds its own bits and forwards everything it received, so the
//! `i`-th hop carries the cumulative bits of the first `i` chain nodes. Hops
//! are sized so each node spends at most `E/L`:
//! `cumulative_bits * hop^2 <= E/L`. New relays get the bit count whose
//! information per bit best matches the energy share of their remaining path.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::detection::InfoCurve;
use crate::error::{Error, Result};
use crate::network::{node_distance, split_at_fusion, Allocation, Network, Node, NodeId};
use crate::snapped_floor;

/// A relay chain, farthest node first. The last node sends the group's
/// cumulative bits to the fusion node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    pub chain: Vec<NodeId>,
    pub bits: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultihopPlan {
    pub groups: Vec<Group>,
    /// `E/L` of the network the plan was built for.
    pub per_node_share: f64,
}

impl MultihopPlan {
    /// Own bits per node.
    pub fn allocation(&self) -> Allocation {
        let mut map = BTreeMap::new();
        for g in &self.groups {
            for (&id, &b) in g.chain.iter().zip(&g.bits) {
                map.insert(id, b);
            }
        }
        Allocation::from_map(map)
    }

    pub fn node_count(&self) -> usize {
        self.groups.iter().map(|g| g.chain.len()).sum()
    }

    /// The group containing `id` and the node's index in its chain.
    pub fn locate(&self, id: NodeId) -> Option<(&Group, usize)> {
        self.groups
            .iter()
            .find_map(|g| g.chain.iter().position(|&c| c == id).map(|i| (g, i)))
    }
}

/// Plans a network with the fusion node at one end of the line.
pub fn form_groups(net: &Network, curve: &InfoCurve) -> Result<MultihopPlan> {
    if !net.fusion_at_end() {
        return Err(Error::FusionNotAtEnd);
    }
    let share = net.per_node_share();
    let max_bits = curve.max_bits();
    let dist = |n: &Node| net.distance_to_fusion(n);
    let mut unassigned = net.by_distance_desc();
    let mut groups = Vec::new();

    while !unassigned.is_empty() {
        let first = unassigned.remove(0);
        let mut chain = vec![first];
        let mut bits = vec![1u32];
        loop {
            let sum: u32 = bits.iter().sum();
            if sum == 0 {
                // nothing left to carry and no closer node to hand over to
                break;
            }
            let current = chain[chain.len() - 1];
            let d_cur = dist(&current);
            let allowance = libm::sqrt(share / f64::from(sum));
            if !(allowance < d_cur) {
                if chain.len() == 1 {
                    bits[0] = lifetime_bits(share, d_cur, max_bits);
                }
                break;
            }
            // farthest-from-current node strictly closer to the fusion node
            // within the allowance; `unassigned` is sorted by distance desc
            let candidate = unassigned
                .iter()
                .enumerate()
                .filter(|(_, n)| dist(n) < d_cur && d_cur - dist(n) <= allowance)
                .fold(None::<(usize, f64)>, |best, (i, n)| match best {
                    Some((_, bd)) if dist(n) >= bd => best,
                    _ => Some((i, dist(n))),
                });
            match candidate {
                Some((idx, d_next)) => {
                    let next = unassigned.remove(idx);
                    let hop = node_distance(&current, &next);
                    // per-bit reference: the closest upstream node still sending its own bits
                    let reference = bits.iter().rposition(|&b| b > 0).expect("sum > 0");
                    let fraction = d_next * d_next / (hop * hop + d_next * d_next);
                    let m = curve.closest_per_bit(fraction * curve.per_bit(bits[reference]));
                    chain.push(next);
                    bits.push(m);
                }
                None => {
                    let j = argmax_first(&bits);
                    bits[j] -= 1;
                    if sum == 1 {
                        let nearest = unassigned.iter().position(|n| dist(n) < d_cur);
                        match nearest {
                            Some(idx) => {
                                chain.push(unassigned.remove(idx));
                                bits.push(1);
                            }
                            None => break,
                        }
                    }
                }
            }
        }
        groups.push(Group {
            chain: chain.iter().map(|n| n.id).collect(),
            bits,
        });
    }

    let mut plan = MultihopPlan {
        groups,
        per_node_share: share,
    };
    repair_budget(&mut plan, net)?;
    Ok(plan)
}

/// Plans any network: a fusion node inside the line splits it into two
/// sides that are planned independently with proportional budgets.
pub fn plan_multihop(net: &Network, curve: &InfoCurve) -> Result<MultihopPlan> {
    let (first, second) = split_at_fusion(net);
    let mut plan = form_groups(&first, curve)?;
    if let Some(second) = second {
        plan.groups.extend(form_groups(&second, curve)?.groups);
    }
    plan.per_node_share = net.per_node_share();
    Ok(plan)
}

fn lifetime_bits(share: f64, d: f64, max_bits: u32) -> u32 {
    if d == 0.0 {
        return max_bits;
    }
    let m = snapped_floor(share / (d * d));
    if m >= f64::from(max_bits) {
        max_bits
    } else {
        m as u32
    }
}

fn argmax_first(bits: &[u32]) -> usize {
    let mut j = 0;
    for (i, &b) in bits.iter().enumerate() {
        if b > bits[j] {
            j = i;
        }
    }
    j
}

/// Drops bits from the heaviest transmitter's upstream chain until the plan
/// fits the network budget.
fn repair_budget(plan: &mut MultihopPlan, net: &Network) -> Result<()> {
    loop {
        let energy = plan_energy(plan, net)?;
        if energy.total <= net.energy_budget() {
            return Ok(());
        }
        let (&worst, _) = energy
            .per_node
            .iter()
            .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(a.0)))
            .expect("non-empty plan");
        let (gi, pos) = plan
            .groups
            .iter()
            .enumerate()
            .find_map(|(gi, g)| g.chain.iter().position(|&c| c == worst).map(|p| (gi, p)))
            .expect("node is planned");
        let upstream = &mut plan.groups[gi].bits[..=pos];
        let j = argmax_first(upstream);
        if upstream[j] == 0 {
            return Ok(());
        }
        upstream[j] -= 1;
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PlanEnergy {
    /// Cumulative bits carried times the outgoing hop distance squared.
    pub per_node: BTreeMap<NodeId, f64>,
    pub total: f64,
    /// Own bits times the sum of squared hops from the node to the fusion node.
    pub delivered: BTreeMap<NodeId, f64>,
}

pub fn plan_energy(plan: &MultihopPlan, net: &Network) -> Result<PlanEnergy> {
    let mut out = PlanEnergy::default();
    let mut seen = 0usize;
    for g in &plan.groups {
        if g.chain.len() != g.bits.len() {
            return Err(Error::InconsistentPlan("chain and bits differ in length"));
        }
        let nodes: Vec<&Node> = g
            .chain
            .iter()
            .map(|&id| net.node(id))
            .collect::<Result<_>>()?;
        let hops: Vec<f64> = (0..nodes.len())
            .map(|i| match nodes.get(i + 1) {
                Some(next) => node_distance(nodes[i], next),
                None => net.distance_to_fusion(nodes[i]),
            })
            .collect();
        let mut carried = 0u64;
        for (i, (&id, &b)) in g.chain.iter().zip(&g.bits).enumerate() {
            carried += u64::from(b);
            let e = carried as f64 * hops[i] * hops[i];
            let path: f64 = hops[i..].iter().map(|h| h * h).sum();
            if out.per_node.insert(id, e).is_some() {
                return Err(Error::InconsistentPlan("node appears twice"));
            }
            out.delivered.insert(id, f64::from(b) * path);
            out.total += e;
            seen += 1;
        }
    }
    if seen != net.len() {
        return Err(Error::InconsistentPlan("plan does not cover every node"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::Metric;

    fn curve() -> InfoCurve {
        InfoCurve::new(
            Metric::Chernoff,
            vec![
                0.0, 0.31374, 0.43994, 0.48249, 0.49549, 0.49885, 0.49971, 0.49993, 0.49998,
            ],
            0.5,
        )
        .unwrap()
    }

    fn line(positions: &[f64], fusion: f64, e: f64) -> Network {
        let nodes = positions
            .iter()
            .enumerate()
            .map(|(i, &p)| Node {
                id: NodeId(i as u32),
                position: p,
            })
            .collect();
        Network::new(nodes, fusion, e).unwrap()
    }

    #[test]
    fn two_singletons() {
        let net = line(&[0.0, 6.0], 10.0, 200.0);
        let plan = form_groups(&net, &curve()).unwrap();
        assert_eq!(
            plan.groups,
            vec![
                Group {
                    chain: vec![NodeId(0)],
                    bits: vec![1]
                },
                Group {
                    chain: vec![NodeId(1)],
                    bits: vec![6]
                },
            ]
        );
        assert_eq!(plan_energy(&plan, &net).unwrap().total, 196.0);
    }

    #[test]
    fn zero_bit_fallback() {
        let net = line(&[0.0, 8.0], 10.0, 72.0);
        let plan = form_groups(&net, &curve()).unwrap();
        assert_eq!(
            plan.groups,
            vec![Group {
                chain: vec![NodeId(0), NodeId(1)],
                bits: vec![0, 1]
            }]
        );
        assert_eq!(plan_energy(&plan, &net).unwrap().total, 4.0);
    }

    #[test]
    fn single_node_takes_floor_bits() {
        let net = line(&[0.0], 10.0, 350.0);
        let plan = form_groups(&net, &curve()).unwrap();
        assert_eq!(plan.groups[0].bits, vec![3]);
        let net = line(&[0.0], 10.0, 5000.0);
        assert_eq!(form_groups(&net, &curve()).unwrap().groups[0].bits, vec![8]);
    }

    #[test]
    fn relay_chain_respects_share() {
        // E/L = 100: node 0 hops 10 to node 1, which then closes within 7
        let net = line(&[0.0, 10.0], 17.0, 200.0);
        let plan = form_groups(&net, &curve()).unwrap();
        assert_eq!(plan.groups.len(), 1);
        assert_eq!(plan.groups[0].chain, vec![NodeId(0), NodeId(1)]);
        let e = plan_energy(&plan, &net).unwrap();
        for v in e.per_node.values() {
            assert!(*v <= 100.0);
        }
    }

    #[test]
    fn unreachable_far_node_carries_nothing() {
        let net = line(&[0.0], 10.0, 50.0);
        let plan = form_groups(&net, &curve()).unwrap();
        assert_eq!(plan.groups[0].bits, vec![0]);
    }

    #[test]
    fn rejects_mid_line_fusion() {
        let net = line(&[0.0, 10.0], 5.0, 100.0);
        assert_eq!(form_groups(&net, &curve()), Err(Error::FusionNotAtEnd));
        let plan = plan_multihop(&net, &curve()).unwrap();
        assert_eq!(plan.node_count(), 2);
        assert!(plan_energy(&plan, &net).unwrap().total <= 100.0);
    }

    #[test]
    fn energy_of_a_two_hop_chain() {
        let net = line(&[0.0, 3.0], 7.0, 100.0);
        let plan = MultihopPlan {
            groups: vec![Group {
                chain: vec![NodeId(0), NodeId(1)],
                bits: vec![1, 1],
            }],
            per_node_share: 50.0,
        };
        let e = plan_energy(&plan, &net).unwrap();
        assert_eq!(e.per_node[&NodeId(0)], 9.0);
        assert_eq!(e.per_node[&NodeId(1)], 32.0);
        assert_eq!(e.total, 41.0);
        assert_eq!(e.delivered[&NodeId(0)], 25.0);
    }

    #[test]
    fn empty_plan_costs_nothing() {
        let plan = MultihopPlan {
            groups: vec![],
            per_node_share: 0.0,
        };
        assert_eq!(MultihopPlan::allocation(&plan).total_bits(), 0);
        let net = line(&[0.0], 1.0, 1.0);
        // not consistent with a non-empty network
        assert!(plan_energy(&plan, &net).is_err());
        assert_eq!(plan.node_count(), 0);
    }

    #[test]
    fn plan_energy_rejects_foreign_ids() {
        let net = line(&[0.0], 1.0, 1.0);
        let plan = MultihopPlan {
            groups: vec![Group {
                chain: vec![NodeId(5)],
                bits: vec![1],
            }],
            per_node_share: 1.0,
        };
        assert_eq!(plan_energy(&plan, &net), Err(Error::UnknownNode(NodeId(5))));
    }
}
