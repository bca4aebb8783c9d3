//! Experiment configuration files.
//!
//! Every field is optional; missing fields take the defaults below and
//! unknown fields are rejected.
//!
//! ```json
//! {
//!   "hypothesis": {"mu0": -1.0, "mu1": 1.0, "sigma": 1.0, "pi0": 0.5},
//!   "max_bits": 8,
//!   "metric": "chernoff",
//!   "deployment": {"kind": "random-uniform", "nodes": 100, "length": 100.0, "fusion_offset": 2.0},
//!   "network_file": null,
//!   "energy_budget": 64000.0,
//!   "battery": 1000000.0,
//!   "strategies": ["multihop", "parallel-info", "parallel-lifetime"],
//!   "sweep": {"kind": "info-vs-energy", "energies": [1000.0, 64000.0], "sizes": [], "repetitions": 50},
//!   "trials": 100000,
//!   "seed": 0,
//!   "output": null
//! }
//! ```

use std::path::{Path, PathBuf};

use hopdetect_core::{
    deploy, Deployment, GaussianHypothesisPair, Metric, Network, Strategy, SweepKind, SweepParams,
    DEFAULT_MAX_BITS,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::netfile::NetworkFile;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HypothesisSpec {
    pub mu0: f64,
    pub mu1: f64,
    pub sigma: f64,
    pub pi0: f64,
}

impl Default for HypothesisSpec {
    fn default() -> Self {
        HypothesisSpec {
            mu0: -1.0,
            mu1: 1.0,
            sigma: 1.0,
            pi0: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DeploymentSpec {
    /// `uniform` or `random-uniform`.
    pub kind: String,
    pub nodes: usize,
    pub length: f64,
    pub fusion_offset: f64,
}

impl Default for DeploymentSpec {
    fn default() -> Self {
        DeploymentSpec {
            kind: "random-uniform".into(),
            nodes: 100,
            length: 100.0,
            fusion_offset: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSpec {
    /// `info-vs-energy`, `info-vs-bits` or `info-vs-size`.
    pub kind: String,
    /// Budgets to sweep; empty means `[energy_budget]`.
    pub energies: Vec<f64>,
    /// Network sizes to sweep; empty means `[deployment.nodes]`.
    pub sizes: Vec<usize>,
    pub repetitions: usize,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            kind: "info-vs-energy".into(),
            energies: Vec::new(),
            sizes: Vec::new(),
            repetitions: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub hypothesis: HypothesisSpec,
    pub max_bits: u32,
    /// `chernoff` or `kl`.
    pub metric: String,
    pub deployment: DeploymentSpec,
    /// Fixed network instead of a deployment. Relative paths are resolved
    /// against the config file's directory.
    pub network_file: Option<PathBuf>,
    /// Total budget `E`. Unset means the network file's budget, or 64000.
    pub energy_budget: Option<f64>,
    /// Per-node battery for lifetime reports.
    pub battery: f64,
    pub strategies: Vec<String>,
    pub sweep: Option<SweepSpec>,
    /// Monte Carlo trials for `simulate`.
    pub trials: u64,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            hypothesis: HypothesisSpec::default(),
            max_bits: DEFAULT_MAX_BITS,
            metric: "chernoff".into(),
            deployment: DeploymentSpec::default(),
            network_file: None,
            energy_budget: None,
            battery: 1e6,
            strategies: Strategy::ALL
                .iter()
                .map(|s| s.as_str().to_string())
                .collect(),
            sweep: None,
            trials: 100_000,
            seed: 0,
            output: None,
        }
    }
}

const DEFAULT_BUDGET: f64 = 64000.0;

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl ExperimentConfig {
    pub fn from_json(text: &str, path: &Path) -> Result<Self> {
        serde_json::from_str(text).map_err(|source| Error::Json {
            path: path.into(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Read {
            path: path.into(),
            source,
        })?;
        let mut cfg = Self::from_json(&text, path)?;
        if let Some(file) = &cfg.network_file {
            if file.is_relative() {
                let base = path.parent().unwrap_or(Path::new("."));
                cfg.network_file = Some(base.join(file));
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks every field so that no computation starts on a bad config.
    pub fn validate(&self) -> Result<()> {
        let h = self.hypothesis()?;
        if h.mu0 == h.mu1 {
            return Err(config_err("hypothesis means must differ"));
        }
        self.metric()?;
        self.strategies()?;
        if self.max_bits == 0 || self.max_bits > DEFAULT_MAX_BITS {
            return Err(config_err(format!(
                "max_bits must be in 1..={DEFAULT_MAX_BITS}"
            )));
        }
        if self
            .energy_budget
            .is_some_and(|e| !(e >= 0.0) || !e.is_finite())
        {
            return Err(config_err("energy_budget must be finite and nonnegative"));
        }
        if !(self.battery > 0.0) || !self.battery.is_finite() {
            return Err(config_err("battery must be positive"));
        }
        if self.trials == 0 {
            return Err(config_err("trials must be at least 1"));
        }
        self.deployment_kind()?;
        if self.deployment.nodes == 0 {
            return Err(config_err("deployment.nodes must be at least 1"));
        }
        if !(self.deployment.length >= 0.0) || !self.deployment.length.is_finite() {
            return Err(config_err(
                "deployment.length must be finite and nonnegative",
            ));
        }
        if !self.deployment.fusion_offset.is_finite() {
            return Err(config_err("deployment.fusion_offset must be finite"));
        }
        if let Some(s) = &self.sweep {
            if self.network_file.is_some() {
                return Err(config_err(
                    "sweeps deploy their own networks; drop network_file",
                ));
            }
            s.kind
                .parse::<SweepKind>()
                .map_err(|e| config_err(e.to_string()))?;
            self.sweep_params()?.validate()?;
        }
        Ok(())
    }

    pub fn hypothesis(&self) -> Result<GaussianHypothesisPair> {
        let h = &self.hypothesis;
        Ok(GaussianHypothesisPair::new(h.mu0, h.mu1, h.sigma, h.pi0)?)
    }

    pub fn metric(&self) -> Result<Metric> {
        self.metric
            .parse()
            .map_err(|e: hopdetect_core::Error| config_err(e.to_string()))
    }

    pub fn strategies(&self) -> Result<Vec<Strategy>> {
        if self.strategies.is_empty() {
            return Err(config_err("strategies must not be empty"));
        }
        self.strategies
            .iter()
            .map(|s| {
                s.parse()
                    .map_err(|e: hopdetect_core::Error| config_err(e.to_string()))
            })
            .collect()
    }

    pub fn deployment_kind(&self) -> Result<Deployment> {
        match self.deployment.kind.as_str() {
            "uniform" => Ok(Deployment::Uniform),
            "random-uniform" => Ok(Deployment::RandomUniform),
            other => Err(config_err(format!(
                "unknown deployment kind {other:?}; use uniform or random-uniform"
            ))),
        }
    }

    /// The network file if one is given, otherwise a deployment seeded with
    /// `seed`. A configured energy budget replaces the file's.
    pub fn network(&self) -> Result<Network> {
        match &self.network_file {
            Some(path) => {
                let net = NetworkFile::load(path)?.to_network()?;
                match self.energy_budget {
                    Some(e) => Ok(net.with_energy_budget(e)?),
                    None => Ok(net),
                }
            }
            None => {
                let d = &self.deployment;
                Ok(deploy(
                    self.deployment_kind()?,
                    d.nodes,
                    d.length,
                    d.fusion_offset,
                    self.energy_budget.unwrap_or(DEFAULT_BUDGET),
                    self.seed,
                )?)
            }
        }
    }

    pub fn sweep_params(&self) -> Result<SweepParams> {
        let s = self
            .sweep
            .as_ref()
            .ok_or_else(|| config_err("config has no sweep section"))?;
        let kind: SweepKind = s
            .kind
            .parse()
            .map_err(|e: hopdetect_core::Error| config_err(e.to_string()))?;
        let d = &self.deployment;
        Ok(SweepParams {
            kind,
            deployment: self.deployment_kind()?,
            length: d.length,
            fusion_offset: d.fusion_offset,
            sizes: if s.sizes.is_empty() {
                vec![d.nodes]
            } else {
                s.sizes.clone()
            },
            energies: if s.energies.is_empty() {
                vec![self.energy_budget.unwrap_or(DEFAULT_BUDGET)]
            } else {
                s.energies.clone()
            },
            repetitions: s.repetitions,
            strategies: self.strategies()?,
        })
    }

    /// SHA-256 over the canonical JSON of the config plus the bytes of the
    /// network file, if any. Paths (output, network file) do not count.
    pub fn hash(&self) -> Result<String> {
        let mut h = Sha256::new();
        let bare = ExperimentConfig {
            output: None,
            network_file: None,
            ..self.clone()
        };
        h.update(serde_json::to_vec(&bare).expect("config serializes"));
        if let Some(path) = &self.network_file {
            let bytes = std::fs::read(path).map_err(|source| Error::Read {
                path: path.clone(),
                source,
            })?;
            h.update(&bytes);
        }
        Ok(hex::encode(h.finalize()))
    }
}
