use hopdetect_core::sweep::{canonical_order, evaluate_point};
use hopdetect_core::{InfoCurve, SweepParams, SweepRecord};
use rayon::prelude::*;

use crate::error::Result;

/// Grid points run in parallel. Each point derives its deployments from
/// `root_seed` alone, so the table equals the sequential one.
pub fn run_sweep_parallel(
    params: &SweepParams,
    curve: &InfoCurve,
    root_seed: u64,
) -> Result<Vec<SweepRecord>> {
    params.validate()?;
    let chunks: Vec<Vec<SweepRecord>> = params
        .points()
        .into_par_iter()
        .map(|(nodes, energy)| evaluate_point(params, nodes, energy, curve, root_seed))
        .collect::<hopdetect_core::Result<_>>()?;
    let mut out: Vec<SweepRecord> = chunks.into_iter().flatten().collect();
    canonical_order(&mut out);
    Ok(out)
}
