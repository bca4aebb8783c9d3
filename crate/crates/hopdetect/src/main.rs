use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hopdetect::docs::{AllocationDoc, SimulationDoc, SweepMeta};
use hopdetect::{run_sweep_parallel, table, Error, ExperimentConfig, Result};
use hopdetect_core::thresholds::{curve_from_solutions, optimize_all, optimize_thresholds_with};
use hopdetect_core::{
    allocate_info_max, allocate_lifetime_max, build_info_curve, evaluate, monte_carlo_detection,
    plan_multihop, Configuration, GaussianHypothesisPair, Metric, QuantizerBank, Strategy,
    ThresholdSearch,
};

#[derive(Parser)]
#[command(
    name = "hopdetect",
    version,
    about = "Energy-constrained decentralized detection on a line of sensors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print optimal quantizer thresholds and their information for 1..=max-bits.
    Thresholds {
        #[arg(long, default_value = "chernoff", value_parser = parse_metric)]
        metric: Metric,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..=8))]
        max_bits: u32,
        /// Restrict thresholds to multiples of this step.
        #[arg(long)]
        lattice_step: Option<f64>,
    },
    /// Allocate bits with one strategy and report information, energy and lifetime.
    Allocate {
        /// Strategy: parallel-info, parallel-lifetime or multihop.
        #[arg(long, value_parser = parse_strategy)]
        config: Strategy,
        #[command(flatten)]
        common: Common,
    },
    /// Run the comparison sweep from an experiment file and write CSV plus metadata.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        repetitions: Option<usize>,
    },
    /// Monte Carlo detection error of one strategy's allocation.
    Simulate {
        #[arg(long, default_value = "parallel-info", value_parser = parse_strategy)]
        config: Strategy,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        trials: Option<u64>,
    },
}

/// Experiment file plus overrides; flags win over the file.
#[derive(Args)]
struct Common {
    #[arg(long)]
    experiment: Option<PathBuf>,
    #[arg(long)]
    network: Option<PathBuf>,
    #[arg(long)]
    energy: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    battery: Option<f64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_metric(s: &str) -> std::result::Result<Metric, String> {
    s.parse().map_err(|e: hopdetect_core::Error| e.to_string())
}

fn parse_strategy(s: &str) -> std::result::Result<Strategy, String> {
    s.parse().map_err(|e: hopdetect_core::Error| e.to_string())
}

impl Common {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.experiment {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(p) = &self.network {
            cfg.network_file = Some(p.clone());
        }
        if let Some(e) = self.energy {
            cfg.energy_budget = Some(e);
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(b) = self.battery {
            cfg.battery = b;
        }
        if let Some(o) = &self.output {
            cfg.output = Some(o.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| Error::Write {
            path: path.into(),
            source,
        })
}

fn emit_json<T: serde::Serialize>(doc: &T, output: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(doc).expect("document serializes");
    text.push('\n');
    match output {
        Some(path) => {
            let mut w = create(path)?;
            w.write_all(text.as_bytes())
                .and_then(|_| w.flush())
                .map_err(|source| Error::Write {
                    path: path.into(),
                    source,
                })
        }
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| Error::Write {
                path: "stdout".into(),
                source,
            }),
    }
}

fn thresholds(metric: Metric, max_bits: u32, lattice_step: Option<f64>) -> Result<()> {
    let h = GaussianHypothesisPair::symmetric_unit();
    let search = match lattice_step {
        Some(step) => ThresholdSearch::Lattice { step },
        None => ThresholdSearch::Continuous,
    };
    let mut out = io::stdout().lock();
    let line = |out: &mut io::StdoutLock, s: String| {
        writeln!(out, "{s}").map_err(|source| Error::Write {
            path: "stdout".into(),
            source,
        })
    };
    line(&mut out, "M\tvalue\tthresholds".into())?;
    for m in 1..=max_bits {
        let sol = optimize_thresholds_with(&h, m, metric, search)?;
        let t: Vec<String> = sol
            .quantizer
            .thresholds()
            .iter()
            .map(|&x| {
                let x = if x.abs() < 5e-7 { 0.0 } else { x };
                format!("{x:.6}")
            })
            .collect();
        line(&mut out, format!("{m}\t{:.7}\t{}", sol.value, t.join(" ")))?;
    }
    Ok(())
}

fn allocate(strategy: Strategy, common: &Common) -> Result<()> {
    let cfg = common.resolve()?;
    let hash = cfg.hash()?;
    let net = cfg.network()?;
    let curve = build_info_curve(&cfg.hypothesis()?, cfg.max_bits, cfg.metric()?)?;
    let (doc, zero) = match strategy {
        Strategy::ParallelInfo | Strategy::ParallelLifetime => {
            let r = if strategy == Strategy::ParallelInfo {
                allocate_info_max(&net, &curve)
            } else {
                allocate_lifetime_max(&net, cfg.max_bits)
            };
            let report = evaluate(
                &net,
                Configuration::Parallel(&r.allocation),
                &curve,
                cfg.battery,
            )?;
            let doc = AllocationDoc::parallel(
                hash,
                cfg.seed,
                strategy,
                net.energy_budget(),
                &r.allocation,
                &report,
            );
            (doc, r.allocation.is_all_zero())
        }
        Strategy::Multihop => {
            let plan = plan_multihop(&net, &curve)?;
            let report = evaluate(&net, Configuration::Multihop(&plan), &curve, cfg.battery)?;
            let doc = AllocationDoc::multihop(hash, cfg.seed, net.energy_budget(), &plan, &report);
            (doc, plan.allocation().is_all_zero())
        }
    };
    emit_json(&doc, cfg.output.as_deref())?;
    if zero {
        return Err(Error::Infeasible);
    }
    Ok(())
}

fn sweep(common: &Common, repetitions: Option<usize>) -> Result<()> {
    let mut cfg = common.resolve()?;
    if common.experiment.is_none() {
        return Err(Error::Config(
            "sweep needs --experiment with a sweep section".into(),
        ));
    }
    if let (Some(r), Some(s)) = (repetitions, cfg.sweep.as_mut()) {
        s.repetitions = r;
    }
    cfg.validate()?;
    let output = cfg
        .output
        .clone()
        .ok_or_else(|| Error::Config("sweep needs an output path".into()))?;
    let params = cfg.sweep_params()?;
    let curve = build_info_curve(&cfg.hypothesis()?, cfg.max_bits, cfg.metric()?)?;
    let records = run_sweep_parallel(&params, &curve, cfg.seed)?;
    table::write_sweep(create(&output)?, &records)?;
    let meta = SweepMeta {
        config_hash: cfg.hash()?,
        seed: cfg.seed,
        kind: params.kind.as_str().into(),
        repetitions: params.repetitions,
        rows: records.len(),
    };
    let mut meta_path = output.into_os_string();
    meta_path.push(".meta.json");
    emit_json(&meta, Some(Path::new(&meta_path)))
}

fn simulate(strategy: Strategy, common: &Common, trials: Option<u64>) -> Result<()> {
    let mut cfg = common.resolve()?;
    if let Some(t) = trials {
        cfg.trials = t;
    }
    cfg.validate()?;
    let h = cfg.hypothesis()?;
    let net = cfg.network()?;
    let solutions = optimize_all(&h, cfg.max_bits, cfg.metric()?)?;
    let curve = curve_from_solutions(&h, &solutions)?;
    let bank = QuantizerBank::from_solutions(h, &solutions)?;
    let alloc = match strategy {
        Strategy::ParallelInfo => allocate_info_max(&net, &curve).allocation,
        Strategy::ParallelLifetime => allocate_lifetime_max(&net, cfg.max_bits).allocation,
        Strategy::Multihop => plan_multihop(&net, &curve)?.allocation(),
    };
    let stats = monte_carlo_detection(&alloc, &bank, cfg.trials, cfg.seed)?;
    let info = hopdetect_core::fusion_information(&alloc, &curve);
    emit_json(
        &SimulationDoc::new(cfg.hash()?, cfg.seed, strategy, info, &stats),
        cfg.output.as_deref(),
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Thresholds {
            metric,
            max_bits,
            lattice_step,
        } => thresholds(*metric, *max_bits, *lattice_step),
        Command::Allocate { config, common } => allocate(*config, common),
        Command::Sweep {
            common,
            repetitions,
        } => sweep(common, *repetitions),
        Command::Simulate {
            config,
            common,
            trials,
        } => simulate(*config, common, *trials),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hopdetect: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
