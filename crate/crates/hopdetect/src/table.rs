//! Sweep tables as CSV: `strategy,L,E,mean_info,mean_bits,mean_energy,stderr_info`.

use std::io::{Read, Write};

use hopdetect_core::{Strategy, SweepRecord};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    strategy: String,
    #[serde(rename = "L")]
    nodes: usize,
    #[serde(rename = "E")]
    energy: f64,
    mean_info: f64,
    mean_bits: f64,
    mean_energy: f64,
    stderr_info: f64,
}

pub fn write_sweep<W: Write>(out: W, records: &[SweepRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(Row {
            strategy: r.strategy.as_str().into(),
            nodes: r.nodes,
            energy: r.energy,
            mean_info: r.mean_info,
            mean_bits: r.mean_bits,
            mean_energy: r.mean_energy,
            stderr_info: r.stderr_info,
        })?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn read_sweep<R: Read>(input: R) -> Result<Vec<SweepRecord>> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize()
        .map(|row| {
            let row: Row = row?;
            let strategy: Strategy = row.strategy.parse()?;
            Ok(SweepRecord {
                strategy,
                nodes: row.nodes,
                energy: row.energy,
                mean_info: row.mean_info,
                mean_bits: row.mean_bits,
                mean_energy: row.mean_energy,
                stderr_info: row.stderr_info,
            })
        })
        .collect()
}
