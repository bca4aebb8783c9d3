//! Observation model, quantizers and the information carried by one
//! quantized sensor message.
//!
//! Each sensor observes `y ~ N(mu_i, sigma^2)` under hypothesis `H_i` and
//! reports the index of the threshold cell containing `y`. The message
//! distributions `p(u|H0)`, `p(u|H1)` are scored by Chernoff information
//! (Bayesian error exponent) or by `D(p0 || p1)` (Neyman-Pearson miss
//! exponent). Logarithms are natural throughout.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::golden;
use crate::normal::normal_interval;

/// Probabilities below this are treated as exact zeros.
pub const PROB_FLOOR: f64 = 1e-300;

/// Bracket width at which the inner minimization over `s` stops.
pub const S_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    Chernoff,
    Kl,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Chernoff => "chernoff",
            Metric::Kl => "kl",
        }
    }
}

impl core::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chernoff" => Ok(Metric::Chernoff),
            "kl" => Ok(Metric::Kl),
            _ => Err(Error::InvalidParameter("metric must be `chernoff` or `kl`")),
        }
    }
}

/// Two equal-variance Gaussian observation densities and the prior of `H0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianHypothesisPair {
    pub mu0: f64,
    pub mu1: f64,
    pub sigma: f64,
    pub pi0: f64,
}

impl GaussianHypothesisPair {
    pub fn new(mu0: f64, mu1: f64, sigma: f64, pi0: f64) -> Result<Self> {
        if !(mu0.is_finite() && mu1.is_finite() && sigma.is_finite()) {
            return Err(Error::InvalidHypothesis("parameters must be finite"));
        }
        if sigma <= 0.0 {
            return Err(Error::InvalidHypothesis("sigma must be positive"));
        }
        if !(0.0..=1.0).contains(&pi0) {
            return Err(Error::InvalidHypothesis("pi0 must lie in [0, 1]"));
        }
        Ok(Self {
            mu0,
            mu1,
            sigma,
            pi0,
        })
    }

    /// `N(-1, 1)` against `N(1, 1)` with equal priors.
    pub fn symmetric_unit() -> Self {
        Self {
            mu0: -1.0,
            mu1: 1.0,
            sigma: 1.0,
            pi0: 0.5,
        }
    }

    pub fn pi1(&self) -> f64 {
        1.0 - self.pi0
    }

    pub fn mean(&self, h1: bool) -> f64 {
        if h1 {
            self.mu1
        } else {
            self.mu0
        }
    }

    /// Probability that an observation falls in `[lo, hi)` under `H0`/`H1`.
    pub fn interval_probability(&self, h1: bool, lo: f64, hi: f64) -> f64 {
        let mu = self.mean(h1);
        normal_interval((lo - mu) / self.sigma, (hi - mu) / self.sigma)
    }
}

/// Threshold quantizer with `2^bits` cells. Cell `k` is `[t_k, t_{k+1})` with
/// `t_0 = -inf` and `t_{2^bits} = +inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct Quantizer {
    thresholds: Vec<f64>,
    bits: u32,
}

impl Quantizer {
    /// Builds a quantizer; the bit count is implied by the threshold count,
    /// which must be `2^bits - 1`.
    pub fn new(thresholds: Vec<f64>) -> Result<Self> {
        let cells = thresholds.len() + 1;
        if !cells.is_power_of_two() {
            return Err(Error::InvalidParameter(
                "threshold count must be 2^bits - 1",
            ));
        }
        if thresholds.iter().any(|t| t.is_nan()) || thresholds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedThresholds);
        }
        Ok(Self {
            thresholds,
            bits: cells.trailing_zeros(),
        })
    }

    /// The zero-bit quantizer: no message is sent.
    pub fn empty() -> Self {
        Self {
            thresholds: Vec::new(),
            bits: 0,
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn cells(&self) -> usize {
        self.thresholds.len() + 1
    }

    /// Index of the cell containing `y`.
    pub fn quantize(&self, y: f64) -> usize {
        self.thresholds.partition_point(|&t| t <= y)
    }

    pub(crate) fn edge(&self, k: usize) -> f64 {
        if k == 0 {
            f64::NEG_INFINITY
        } else if k > self.thresholds.len() {
            f64::INFINITY
        } else {
            self.thresholds[k - 1]
        }
    }
}

/// Message distributions `p(u|H0)` and `p(u|H1)` induced by a quantizer.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalPmf {
    p0: Vec<f64>,
    p1: Vec<f64>,
}

impl ConditionalPmf {
    /// Validates lengths, nonnegativity and normalization (1e-12). Entries
    /// below [`PROB_FLOOR`] are stored as exact zeros.
    pub fn new(mut p0: Vec<f64>, mut p1: Vec<f64>) -> Result<Self> {
        if p0.is_empty() || p0.len() != p1.len() {
            return Err(Error::InvalidParameter(
                "pmf vectors must be non-empty and equally long",
            ));
        }
        for p in [&mut p0, &mut p1] {
            if p.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
                return Err(Error::InvalidParameter(
                    "pmf entries must be finite and nonnegative",
                ));
            }
            if (p.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidParameter("pmf must sum to 1"));
            }
            for x in p.iter_mut() {
                if *x < PROB_FLOOR {
                    *x = 0.0;
                }
            }
        }
        Ok(Self { p0, p1 })
    }

    pub fn p0(&self) -> &[f64] {
        &self.p0
    }

    pub fn p1(&self) -> &[f64] {
        &self.p1
    }
}

pub fn cell_probabilities(h: &GaussianHypothesisPair, q: &Quantizer) -> Result<ConditionalPmf> {
    if q.bits() == 0 {
        return Err(Error::BitsOutOfRange {
            bits: 0,
            max: u32::MAX,
        });
    }
    let cells = q.cells();
    let mut p0 = Vec::with_capacity(cells);
    let mut p1 = Vec::with_capacity(cells);
    for k in 0..cells {
        let (lo, hi) = (q.edge(k), q.edge(k + 1));
        p0.push(h.interval_probability(false, lo, hi));
        p1.push(h.interval_probability(true, lo, hi));
    }
    ConditionalPmf::new(p0, p1)
}

/// `ln sum_k p0^s p1^(1-s)` over cells where both masses are positive, given
/// their logarithms. Cells with a zero mass contribute nothing for `0 < s < 1`.
pub(crate) fn log_bhattacharyya_sum(logs: &[(f64, f64)], s: f64) -> f64 {
    let mut peak = f64::NEG_INFINITY;
    for &(a, b) in logs {
        peak = peak.max(s * a + (1.0 - s) * b);
    }
    if peak == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = logs
        .iter()
        .map(|&(a, b)| libm::exp(s * a + (1.0 - s) * b - peak))
        .sum();
    peak + libm::log(sum)
}

/// Chernoff information together with the minimizing `s`.
pub fn chernoff_with_argmin(pmf: &ConditionalPmf) -> (f64, f64) {
    if pmf.p0 == pmf.p1 {
        return (0.0, 0.5);
    }
    let logs: Vec<(f64, f64)> = pmf
        .p0
        .iter()
        .zip(&pmf.p1)
        .filter(|(&a, &b)| a > 0.0 && b > 0.0)
        .map(|(&a, &b)| (libm::log(a), libm::log(b)))
        .collect();
    if logs.is_empty() {
        // disjoint supports
        return (f64::INFINITY, 0.5);
    }
    let (s, g) = golden::minimize(|s| log_bhattacharyya_sum(&logs, s), 0.0, 1.0, S_TOLERANCE);
    // g(0) = g(1) = 0, so the exponent is never negative.
    ((-g).max(0.0), s)
}

/// `-min_{0<=s<=1} ln sum_u p(u|H0)^s p(u|H1)^(1-s)`.
pub fn chernoff_information(pmf: &ConditionalPmf) -> f64 {
    chernoff_with_argmin(pmf).0
}

/// `sum_u p(u|H0) ln(p(u|H0) / p(u|H1))`, with `0 ln(0/q) = 0`.
pub fn kl_divergence(pmf: &ConditionalPmf) -> Result<f64> {
    let mut d = 0.0;
    for (&a, &b) in pmf.p0.iter().zip(&pmf.p1) {
        if a == 0.0 {
            continue;
        }
        if b == 0.0 {
            return Err(Error::InfiniteDivergence);
        }
        d += a * libm::log(a / b);
    }
    Ok(d.max(0.0))
}

/// Evaluates `metric` on a pmf.
pub fn metric_value(pmf: &ConditionalPmf, metric: Metric) -> Result<f64> {
    match metric {
        Metric::Chernoff => Ok(chernoff_information(pmf)),
        Metric::Kl => kl_divergence(pmf),
    }
}

/// Information of an unquantized observation: `(mu1-mu0)^2 / (8 sigma^2)` for
/// Chernoff, `(mu1-mu0)^2 / (2 sigma^2)` for KL.
pub fn info_upper_bound(h: &GaussianHypothesisPair, metric: Metric) -> f64 {
    let delta = (h.mu1 - h.mu0) / h.sigma;
    match metric {
        Metric::Chernoff => delta * delta / 8.0,
        Metric::Kl => delta * delta / 2.0,
    }
}

/// Best per-sensor information as a function of the allocated bit count,
/// indexed `0..=max_bits`.
#[derive(Debug, Clone, PartialEq)]
pub struct InfoCurve {
    metric: Metric,
    values: Vec<f64>,
    upper_bound: f64,
}

impl InfoCurve {
    /// Requires `values[0] == 0`, at least one positive bit count, values
    /// nondecreasing and below `upper_bound`.
    pub fn new(metric: Metric, values: Vec<f64>, upper_bound: f64) -> Result<Self> {
        if values.len() < 2 || values[0] != 0.0 {
            return Err(Error::InvalidParameter(
                "info curve needs values[0] = 0 and max_bits >= 1",
            ));
        }
        if values.windows(2).any(|w| !(w[1] >= w[0])) {
            return Err(Error::InvalidParameter("info curve must be nondecreasing"));
        }
        if values.iter().skip(1).any(|&v| !(v < upper_bound)) {
            return Err(Error::InvalidParameter(
                "info curve must stay below its upper bound",
            ));
        }
        Ok(Self {
            metric,
            values,
            upper_bound,
        })
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn upper_bound(&self) -> f64 {
        self.upper_bound
    }

    pub fn max_bits(&self) -> u32 {
        (self.values.len() - 1) as u32
    }

    /// Value at `bits`, saturating at `max_bits`.
    pub fn value(&self, bits: u32) -> f64 {
        let i = (bits as usize).min(self.values.len() - 1);
        self.values[i]
    }

    /// Information per bit, `C(M) / M`. Undefined (infinite) at zero bits.
    pub fn per_bit(&self, bits: u32) -> f64 {
        if bits == 0 {
            f64::INFINITY
        } else {
            self.value(bits) / f64::from(bits)
        }
    }

    /// The bit count in `1..=max_bits` whose per-bit information is closest
    /// to `target`; ties go to the smaller count.
    pub fn closest_per_bit(&self, target: f64) -> u32 {
        let mut best = 1;
        let mut best_gap = f64::INFINITY;
        for m in 1..=self.max_bits() {
            let gap = (target - self.per_bit(m)).abs();
            if gap < best_gap {
                best = m;
                best_gap = gap;
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn unit() -> GaussianHypothesisPair {
        GaussianHypothesisPair::symmetric_unit()
    }

    fn pmf_for(t: &[f64]) -> ConditionalPmf {
        cell_probabilities(&unit(), &Quantizer::new(t.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn rejects_bad_hypotheses() {
        assert!(GaussianHypothesisPair::new(0.0, 1.0, 0.0, 0.5).is_err());
        assert!(GaussianHypothesisPair::new(0.0, 1.0, 1.0, 1.5).is_err());
        assert!(GaussianHypothesisPair::new(f64::NAN, 1.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn quantizer_validation() {
        assert_eq!(
            Quantizer::new(vec![1.0, 0.0, 2.0]),
            Err(Error::UnsortedThresholds)
        );
        assert_eq!(
            Quantizer::new(vec![0.0, 0.0, 2.0]),
            Err(Error::UnsortedThresholds)
        );
        assert!(Quantizer::new(vec![0.0, 1.0]).is_err());
        assert_eq!(Quantizer::new(vec![-1.0, 0.0, 1.0]).unwrap().bits(), 2);
        assert_eq!(Quantizer::empty().bits(), 0);
    }

    #[test]
    fn quantize_picks_cells() {
        let q = Quantizer::new(vec![-1.0, 0.0, 1.0]).unwrap();
        assert_eq!(q.quantize(-5.0), 0);
        assert_eq!(q.quantize(-0.5), 1);
        assert_eq!(q.quantize(0.0), 2);
        assert_eq!(q.quantize(3.0), 3);
    }

    #[test]
    fn one_threshold_cells() {
        let pmf = pmf_for(&[0.0]);
        assert!((pmf.p0()[0] - 0.841345).abs() < 5e-7);
        assert!((pmf.p0()[1] - 0.158655).abs() < 5e-7);
        assert!((pmf.p1()[0] - pmf.p0()[1]).abs() < 1e-15);
        assert!((pmf.p1()[1] - pmf.p0()[0]).abs() < 1e-15);
    }

    #[test]
    fn three_threshold_cells() {
        let pmf = pmf_for(&[-1.0, 0.0, 1.0]);
        let want = [0.5, 0.341345, 0.135905, 0.022750];
        for (got, want) in pmf.p0().iter().zip(want) {
            assert!((got - want).abs() < 5e-7, "{got} vs {want}");
        }
    }

    #[test]
    fn far_threshold_degenerates() {
        let pmf = pmf_for(&[60.0]);
        assert_eq!(pmf.p0(), &[1.0, 0.0]);
    }

    #[test]
    fn zero_bit_quantizer_has_no_cells() {
        assert!(cell_probabilities(&unit(), &Quantizer::empty()).is_err());
    }

    #[test]
    fn pmf_validation() {
        assert!(ConditionalPmf::new(vec![0.5, 0.6], vec![0.5, 0.5]).is_err());
        assert!(ConditionalPmf::new(vec![1.0], vec![0.5, 0.5]).is_err());
        assert!(ConditionalPmf::new(vec![-0.1, 1.1], vec![0.5, 0.5]).is_err());
    }

    #[test]
    fn chernoff_reference_rows() {
        assert!((chernoff_information(&pmf_for(&[0.0])) - 0.3137).abs() < 5e-5);
        assert!((chernoff_information(&pmf_for(&[-1.0, 0.0, 1.0])) - 0.4399).abs() < 5e-5);
    }

    #[test]
    fn chernoff_closed_form_for_symmetric_binary() {
        // -ln(2 sqrt(Phi(1) Phi(-1)))
        let a = crate::normal::normal_cdf(1.0);
        let want = -libm::log(2.0 * libm::sqrt(a * (1.0 - a)));
        let (got, s) = chernoff_with_argmin(&pmf_for(&[0.0]));
        assert!((got - want).abs() < 1e-12);
        assert!((s - 0.5).abs() < 1e-7);
    }

    #[test]
    fn identical_distributions_carry_nothing() {
        let pmf = ConditionalPmf::new(vec![0.2, 0.8], vec![0.2, 0.8]).unwrap();
        assert_eq!(chernoff_information(&pmf), 0.0);
        assert_eq!(kl_divergence(&pmf).unwrap(), 0.0);
    }

    #[test]
    fn kl_table_rows() {
        assert!((kl_divergence(&pmf_for(&[-0.6])).unwrap() - 1.2788).abs() < 5e-5);
        assert!((kl_divergence(&pmf_for(&[-1.7, -0.7, 0.3])).unwrap() - 1.7653).abs() < 5e-5);
    }

    #[test]
    fn kl_infinite_when_support_missing() {
        let pmf = ConditionalPmf::new(vec![0.5, 0.5], vec![1.0, 0.0]).unwrap();
        assert_eq!(kl_divergence(&pmf), Err(Error::InfiniteDivergence));
        // zero H0 mass is fine
        let pmf = ConditionalPmf::new(vec![1.0, 0.0], vec![0.5, 0.5]).unwrap();
        assert!((kl_divergence(&pmf).unwrap() - libm::log(2.0)).abs() < 1e-15);
    }

    #[test]
    fn upper_bounds() {
        assert_eq!(info_upper_bound(&unit(), Metric::Chernoff), 0.5);
        assert_eq!(info_upper_bound(&unit(), Metric::Kl), 2.0);
        let flat = GaussianHypothesisPair::new(0.3, 0.3, 2.0, 0.5).unwrap();
        assert_eq!(info_upper_bound(&flat, Metric::Chernoff), 0.0);
        assert_eq!(info_upper_bound(&flat, Metric::Kl), 0.0);
    }

    #[test]
    fn info_curve_validation_and_ratio_match() {
        assert!(InfoCurve::new(Metric::Chernoff, vec![0.1, 0.3], 0.5).is_err());
        assert!(InfoCurve::new(Metric::Chernoff, vec![0.0, 0.3, 0.2], 0.5).is_err());
        assert!(InfoCurve::new(Metric::Chernoff, vec![0.0, 0.6], 0.5).is_err());
        let c = InfoCurve::new(Metric::Chernoff, vec![0.0, 0.3137, 0.4399, 0.4824], 0.5).unwrap();
        assert_eq!(c.max_bits(), 3);
        assert_eq!(c.closest_per_bit(1.0), 1);
        assert_eq!(c.closest_per_bit(0.0), 3);
        assert_eq!(c.closest_per_bit(0.22), 2);
        assert_eq!(c.per_bit(0), f64::INFINITY);
        assert_eq!(c.value(9), 0.4824);
    }
}
