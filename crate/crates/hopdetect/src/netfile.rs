//! Network description files:
//! `{"nodes": [{"id": 0, "position": 1.5}, ...], "fusion_position": 10, "energy_budget": 500}`.

use std::path::Path;

use hopdetect_core::{Network, Node, NodeId};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeEntry {
    pub id: u32,
    pub position: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkFile {
    pub nodes: Vec<NodeEntry>,
    pub fusion_position: f64,
    pub energy_budget: f64,
}

impl NetworkFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Read {
            path: path.into(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.into(),
            source,
        })
    }

    pub fn to_network(&self) -> Result<Network> {
        let nodes = self
            .nodes
            .iter()
            .map(|n| Node {
                id: NodeId(n.id),
                position: n.position,
            })
            .collect();
        Ok(Network::new(
            nodes,
            self.fusion_position,
            self.energy_budget,
        )?)
    }
}

impl From<&Network> for NetworkFile {
    fn from(net: &Network) -> Self {
        NetworkFile {
            nodes: net
                .nodes()
                .iter()
                .map(|n| NodeEntry {
                    id: n.id.0,
                    position: n.position,
                })
                .collect(),
            fusion_position: net.fusion_position(),
            energy_budget: net.energy_budget(),
        }
    }
}
