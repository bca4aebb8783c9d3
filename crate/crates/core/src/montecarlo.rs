//! Monte Carlo estimate of the fusion node's detection error.
//!
//! Each trial draws the true hypothesis from the prior, one observation per
//! transmitting sensor, quantizes it, and lets the fusion node run the
//! likelihood-ratio test on the joint message:
//! decide `H1` iff `sum_l ln(p(u_l|H1) / p(u_l|H0)) >= ln(pi0 / pi1)`.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::detection::{cell_probabilities, GaussianHypothesisPair, Quantizer};
use crate::error::{Error, Result};
use crate::network::Allocation;
use crate::thresholds::ThresholdSolution;

#[derive(Debug, Clone)]
struct BankEntry {
    quantizer: Quantizer,
    /// `ln(p(u|H1) / p(u|H0))` per cell.
    llr: Vec<f64>,
}

/// One quantizer per bit count, with its cell log-likelihood ratios.
#[derive(Debug, Clone)]
pub struct QuantizerBank {
    h: GaussianHypothesisPair,
    entries: Vec<Option<BankEntry>>,
}

impl QuantizerBank {
    pub fn new(
        h: GaussianHypothesisPair,
        quantizers: impl IntoIterator<Item = Quantizer>,
    ) -> Result<Self> {
        let mut entries: Vec<Option<BankEntry>> = Vec::new();
        for q in quantizers {
            let bits = q.bits() as usize;
            if bits == 0 {
                continue;
            }
            let pmf = cell_probabilities(&h, &q)?;
            let llr = pmf
                .p0()
                .iter()
                .zip(pmf.p1())
                .map(|(&a, &b)| match (a > 0.0, b > 0.0) {
                    (true, true) => libm::log(b / a),
                    (true, false) => f64::NEG_INFINITY,
                    (false, true) => f64::INFINITY,
                    (false, false) => 0.0,
                })
                .collect();
            if entries.len() <= bits {
                entries.resize(bits + 1, None);
            }
            entries[bits] = Some(BankEntry { quantizer: q, llr });
        }
        Ok(Self { h, entries })
    }

    pub fn from_solutions(
        h: GaussianHypothesisPair,
        solutions: &[ThresholdSolution],
    ) -> Result<Self> {
        Self::new(h, solutions.iter().map(|s| s.quantizer.clone()))
    }

    pub fn hypothesis(&self) -> &GaussianHypothesisPair {
        &self.h
    }

    pub fn quantizer(&self, bits: u32) -> Option<&Quantizer> {
        self.entry(bits).map(|e| &e.quantizer)
    }

    fn entry(&self, bits: u32) -> Option<&BankEntry> {
        self.entries.get(bits as usize).and_then(Option::as_ref)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionStats {
    /// False alarm rate, `P(decide H1 | H0)`.
    pub alpha: f64,
    /// Miss rate, `P(decide H0 | H1)`.
    pub beta: f64,
    /// `pi0 * alpha + pi1 * beta`.
    pub pe: f64,
    pub trials: u64,
    pub h0_trials: u64,
    pub h1_trials: u64,
    pub stderr_alpha: f64,
    pub stderr_beta: f64,
    pub stderr_pe: f64,
}

pub fn monte_carlo_detection(
    alloc: &Allocation,
    bank: &QuantizerBank,
    trials: u64,
    seed: u64,
) -> Result<DetectionStats> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1"));
    }
    let h = bank.h;
    let sensors: Vec<&BankEntry> = alloc
        .iter()
        .filter(|&(_, b)| b > 0)
        .map(|(_, b)| bank.entry(b).ok_or(Error::MissingQuantizer(b)))
        .collect::<Result<_>>()?;
    let threshold = libm::log(h.pi0 / h.pi1());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut n0, mut n1, mut false_alarms, mut misses) = (0u64, 0u64, 0u64, 0u64);
    for _ in 0..trials {
        let is_h1 = rng.random::<f64>() < h.pi1();
        let mu = h.mean(is_h1);
        let mut llr = 0.0;
        for s in &sensors {
            let z: f64 = rng.sample(StandardNormal);
            let u = s.quantizer.quantize(mu + h.sigma * z);
            llr += s.llr[u];
        }
        let decide_h1 = llr >= threshold;
        if is_h1 {
            n1 += 1;
            misses += u64::from(!decide_h1);
        } else {
            n0 += 1;
            false_alarms += u64::from(decide_h1);
        }
    }
    let rate = |k: u64, n: u64| if n == 0 { 0.0 } else { k as f64 / n as f64 };
    let var = |p: f64, n: u64| {
        if n == 0 {
            0.0
        } else {
            p * (1.0 - p) / n as f64
        }
    };
    let alpha = rate(false_alarms, n0);
    let beta = rate(misses, n1);
    let (va, vb) = (var(alpha, n0), var(beta, n1));
    Ok(DetectionStats {
        alpha,
        beta,
        pe: h.pi0 * alpha + h.pi1() * beta,
        trials,
        h0_trials: n0,
        h1_trials: n1,
        stderr_alpha: libm::sqrt(va),
        stderr_beta: libm::sqrt(vb),
        stderr_pe: libm::sqrt(h.pi0 * h.pi0 * va + h.pi1() * h.pi1() * vb),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::NodeId;
    use alloc::vec;

    fn bank() -> QuantizerBank {
        let h = GaussianHypothesisPair::symmetric_unit();
        QuantizerBank::new(h, [Quantizer::new(vec![0.0]).unwrap()]).unwrap()
    }

    #[test]
    fn silent_network_decides_by_prior() {
        let h = GaussianHypothesisPair::new(-1.0, 1.0, 1.0, 0.9).unwrap();
        let b = QuantizerBank::new(h, []).unwrap();
        let a = Allocation::from_map([(NodeId(0), 0)].into_iter().collect());
        let s = monte_carlo_detection(&a, &b, 1000, 3).unwrap();
        assert_eq!(s.alpha, 0.0);
        assert_eq!(s.beta, 1.0);
        assert!((s.pe - 0.1).abs() < 1e-15);
        assert_eq!(s.h0_trials + s.h1_trials, 1000);
    }

    #[test]
    fn missing_quantizer_is_an_error() {
        let a = Allocation::from_map([(NodeId(0), 2)].into_iter().collect());
        assert_eq!(
            monte_carlo_detection(&a, &bank(), 10, 0).unwrap_err(),
            Error::MissingQuantizer(2)
        );
    }

    #[test]
    fn seeded_runs_repeat() {
        let a = Allocation::from_map([(NodeId(0), 1), (NodeId(1), 1)].into_iter().collect());
        let x = monte_carlo_detection(&a, &bank(), 2000, 11).unwrap();
        let y = monte_carlo_detection(&a, &bank(), 2000, 11).unwrap();
        assert_eq!(x, y);
        assert!(monte_carlo_detection(&a, &bank(), 0, 11).is_err());
    }
}
