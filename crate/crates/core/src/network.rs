//! One-dimensional network geometry and the `bits * distance^2` energy law.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub id: NodeId,
    pub position: f64,
}

/// Sensors on a line, the fusion node position and the total energy budget
/// `E` in bits x distance^2.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    nodes: Vec<Node>,
    fusion_position: f64,
    energy_budget: f64,
}

impl Network {
    pub fn new(nodes: Vec<Node>, fusion_position: f64, energy_budget: f64) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidNetwork("at least one node is required"));
        }
        if !fusion_position.is_finite() || nodes.iter().any(|n| !n.position.is_finite()) {
            return Err(Error::InvalidNetwork("positions must be finite"));
        }
        if !(energy_budget >= 0.0) || !energy_budget.is_finite() {
            return Err(Error::InvalidNetwork(
                "energy budget must be finite and nonnegative",
            ));
        }
        let mut ids: Vec<NodeId> = nodes.iter().map(|n| n.id).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidNetwork("node ids must be unique"));
        }
        Ok(Self {
            nodes,
            fusion_position,
            energy_budget,
        })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn fusion_position(&self) -> f64 {
        self.fusion_position
    }

    pub fn energy_budget(&self) -> f64 {
        self.energy_budget
    }

    /// `E / L`, the per-node share of the budget.
    pub fn per_node_share(&self) -> f64 {
        self.energy_budget / self.nodes.len() as f64
    }

    pub fn with_energy_budget(&self, energy_budget: f64) -> Result<Self> {
        Self::new(self.nodes.clone(), self.fusion_position, energy_budget)
    }

    pub fn node(&self, id: NodeId) -> Result<&Node> {
        self.nodes
            .iter()
            .find(|n| n.id == id)
            .ok_or(Error::UnknownNode(id))
    }

    /// `d_l`, the distance from a node to the fusion node.
    pub fn distance_to_fusion(&self, node: &Node) -> f64 {
        libm::fabs(node.position - self.fusion_position)
    }

    /// True when no node lies strictly on each side of the fusion node.
    pub fn fusion_at_end(&self) -> bool {
        let f = self.fusion_position;
        self.nodes.iter().all(|n| n.position <= f) || self.nodes.iter().all(|n| n.position >= f)
    }

    /// Nodes ordered farthest-first from the fusion node; equal distances go
    /// to the smaller id.
    pub fn by_distance_desc(&self) -> Vec<Node> {
        let mut v = self.nodes.clone();
        v.sort_by(|a, b| {
            self.distance_to_fusion(b)
                .total_cmp(&self.distance_to_fusion(a))
                .then(a.id.cmp(&b.id))
        });
        v
    }
}

/// `d_ij`.
pub fn node_distance(a: &Node, b: &Node) -> f64 {
    libm::fabs(a.position - b.position)
}

/// Energy to send `bits` over `distance`.
pub fn transmit_energy(bits: u32, distance: f64) -> f64 {
    f64::from(bits) * distance * distance
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Deployment {
    /// `L` nodes at `i * length / (L - 1)`.
    Uniform,
    /// i.i.d. uniform positions on `[0, length]`, sorted.
    RandomUniform,
}

/// Places `count` nodes on `[0, length]` with the fusion node at
/// `length + fusion_offset`. Ids follow position order.
pub fn deploy(
    kind: Deployment,
    count: usize,
    length: f64,
    fusion_offset: f64,
    energy_budget: f64,
    seed: u64,
) -> Result<Network> {
    if count == 0 {
        return Err(Error::InvalidParameter("node count must be positive"));
    }
    if !(length >= 0.0) || !length.is_finite() {
        return Err(Error::InvalidParameter(
            "length must be finite and nonnegative",
        ));
    }
    let mut positions: Vec<f64> = match kind {
        Deployment::Uniform if count == 1 => alloc::vec![0.0],
        Deployment::Uniform => {
            let gap = length / (count - 1) as f64;
            (0..count).map(|i| i as f64 * gap).collect()
        }
        Deployment::RandomUniform => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count).map(|_| rng.random::<f64>() * length).collect()
        }
    };
    positions.sort_by(f64::total_cmp);
    let nodes = positions
        .into_iter()
        .enumerate()
        .map(|(i, position)| Node {
            id: NodeId(i as u32),
            position,
        })
        .collect();
    Network::new(nodes, length + fusion_offset, energy_budget)
}

/// Splits a network whose fusion node lies strictly inside the span of node
/// positions into one network per side. Nodes at the fusion position go left.
/// The budget is divided in proportion to node counts. A network whose fusion
/// node is already at an end comes back unchanged with `None`.
pub fn split_at_fusion(net: &Network) -> (Network, Option<Network>) {
    if net.fusion_at_end() {
        return (net.clone(), None);
    }
    let f = net.fusion_position;
    let (left, right): (Vec<Node>, Vec<Node>) = net.nodes.iter().partition(|n| n.position <= f);
    let share = net.energy_budget / net.len() as f64;
    let right_budget = share * right.len() as f64;
    let left_budget = net.energy_budget - right_budget;
    // both sides are non-empty, so construction cannot fail
    let l = Network {
        nodes: left,
        fusion_position: f,
        energy_budget: left_budget,
    };
    let r = Network {
        nodes: right,
        fusion_position: f,
        energy_budget: right_budget,
    };
    (l, Some(r))
}

/// Bits per node.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Allocation {
    bits: BTreeMap<NodeId, u32>,
}

impl Allocation {
    pub fn zeros(net: &Network) -> Self {
        Self {
            bits: net.nodes.iter().map(|n| (n.id, 0)).collect(),
        }
    }

    pub fn from_map(bits: BTreeMap<NodeId, u32>) -> Self {
        Self { bits }
    }

    pub fn get(&self, id: NodeId) -> u32 {
        self.bits.get(&id).copied().unwrap_or(0)
    }

    pub fn set(&mut self, id: NodeId, bits: u32) {
        self.bits.insert(id, bits);
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, u32)> + '_ {
        self.bits.iter().map(|(&id, &b)| (id, b))
    }

    pub fn as_map(&self) -> &BTreeMap<NodeId, u32> {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn total_bits(&self) -> u64 {
        self.bits.values().map(|&b| u64::from(b)).sum()
    }

    pub fn is_all_zero(&self) -> bool {
        self.bits.values().all(|&b| b == 0)
    }

    /// `sum_l M_l d_l^2` when every node transmits directly.
    pub fn direct_energy(&self, net: &Network) -> Result<f64> {
        let mut total = 0.0;
        for (id, b) in self.iter() {
            total += transmit_energy(b, net.distance_to_fusion(net.node(id)?));
        }
        Ok(total)
    }

    /// Every network node present and no other ids.
    pub fn covers(&self, net: &Network) -> bool {
        self.bits.len() == net.len() && net.nodes.iter().all(|n| self.bits.contains_key(&n.id))
    }
}
