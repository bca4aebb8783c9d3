//! JSON documents written by `allocate` and `simulate`.

use hopdetect_core::{
    Allocation, DetectionStats, EvaluationReport, Lifetime, MultihopPlan, Strategy,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeBits {
    pub id: u32,
    pub bits: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupDoc {
    pub chain: Vec<u32>,
    pub bits: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeEnergy {
    pub id: u32,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub fusion_info: f64,
    pub total_energy: f64,
    /// `null` when no node transmits.
    pub lifetime_rounds: Option<u64>,
    pub per_node_energy: Vec<NodeEnergy>,
}

impl From<&EvaluationReport> for ReportDoc {
    fn from(r: &EvaluationReport) -> Self {
        ReportDoc {
            fusion_info: r.fusion_info,
            total_energy: r.total_energy,
            lifetime_rounds: match r.lifetime {
                Lifetime::Rounds(n) => Some(n),
                Lifetime::Unbounded => None,
            },
            per_node_energy: r
                .per_node_energy
                .iter()
                .map(|(id, &energy)| NodeEnergy { id: id.0, energy })
                .collect(),
        }
    }
}

/// Output of `allocate`: `allocation` for the parallel strategies, `groups`
/// (relay chains, farthest node first) for multihop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllocationDoc {
    pub config_hash: String,
    pub seed: u64,
    pub strategy: String,
    pub energy_budget: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub allocation: Option<Vec<NodeBits>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groups: Option<Vec<GroupDoc>>,
    pub report: ReportDoc,
}

impl AllocationDoc {
    pub fn parallel(
        config_hash: String,
        seed: u64,
        strategy: Strategy,
        energy_budget: f64,
        alloc: &Allocation,
        report: &EvaluationReport,
    ) -> Self {
        AllocationDoc {
            config_hash,
            seed,
            strategy: strategy.as_str().into(),
            energy_budget,
            allocation: Some(
                alloc
                    .iter()
                    .map(|(id, bits)| NodeBits { id: id.0, bits })
                    .collect(),
            ),
            groups: None,
            report: report.into(),
        }
    }

    pub fn multihop(
        config_hash: String,
        seed: u64,
        energy_budget: f64,
        plan: &MultihopPlan,
        report: &EvaluationReport,
    ) -> Self {
        AllocationDoc {
            config_hash,
            seed,
            strategy: Strategy::Multihop.as_str().into(),
            energy_budget,
            allocation: None,
            groups: Some(
                plan.groups
                    .iter()
                    .map(|g| GroupDoc {
                        chain: g.chain.iter().map(|i| i.0).collect(),
                        bits: g.bits.clone(),
                    })
                    .collect(),
            ),
            report: report.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationDoc {
    pub config_hash: String,
    pub seed: u64,
    pub strategy: String,
    pub fusion_info: f64,
    pub trials: u64,
    pub alpha: f64,
    pub beta: f64,
    pub pe: f64,
    pub stderr_alpha: f64,
    pub stderr_beta: f64,
    pub stderr_pe: f64,
}

impl SimulationDoc {
    pub fn new(
        config_hash: String,
        seed: u64,
        strategy: Strategy,
        fusion_info: f64,
        s: &DetectionStats,
    ) -> Self {
        SimulationDoc {
            config_hash,
            seed,
            strategy: strategy.as_str().into(),
            fusion_info,
            trials: s.trials,
            alpha: s.alpha,
            beta: s.beta,
            pe: s.pe,
            stderr_alpha: s.stderr_alpha,
            stderr_beta: s.stderr_beta,
            stderr_pe: s.stderr_pe,
        }
    }
}

/// Companion of a sweep CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMeta {
    pub config_hash: String,
    pub seed: u64,
    pub kind: String,
    pub repetitions: usize,
    pub rows: usize,
}
