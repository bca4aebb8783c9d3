//! Optimal quantizer thresholds per bit count.
//!
//! Gaussian pairs have a monotone likelihood ratio, so the best `M`-bit
//! quantizer is an interval rule described by `2^M - 1` sorted thresholds.
//! The continuous search is coordinate ascent: each threshold is moved by a
//! golden-section line search between its neighbours, which only touches the
//! two cells adjacent to it. For Chernoff information the exponent `s` is
//! treated as one more coordinate, because
//! `max_t C(t) = max_t max_s -ln sum p0^s p1^(1-s)`.
//! Accepted steps are over-relaxed when the overshoot still improves the
//! objective, which keeps long threshold vectors from creeping.
//! Coordinate ascent stalls once the objective is flat to within its stopping
//! tolerance, so the result is finished by Newton steps on the analytic
//! gradient. The Hessian in the thresholds is tridiagonal.
//!
//! Starts are equal-mass quantiles of `N(c, k^2 3 sigma^2)`. With `k = 1` this
//! is the high-resolution optimal threshold density: `(f0^s f1^(1-s))^(1/3)`
//! for Chernoff (`s = 1/2` for equal variances, so `c` is the midpoint of the
//! means) and `f0^(1/3)` for KL (`c = mu0`). Five scales `k` around 1 are
//! run and the best result wins (ties go to the lexicographically smaller
//! thresholds).
//!
//! The lattice search restricts thresholds to integer multiples of a step and
//! climbs from the rounded continuous optimum to a lattice local optimum.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::detection::{
    self, cell_probabilities, info_upper_bound, log_bhattacharyya_sum, GaussianHypothesisPair,
    InfoCurve, Metric, Quantizer, PROB_FLOOR, S_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::golden;
use crate::normal::{invert_cdf, normal_cdf};
use crate::DEFAULT_MAX_BITS;

/// Threshold search space, in units of sigma around the two means.
const SPAN_SIGMAS: f64 = 12.0;
const COORDINATE_TOL: f64 = 1e-9;
const CONVERGENCE: f64 = 1e-9;
const MAX_SWEEPS: usize = 50_000;
const NEWTON_STEPS: usize = 40;
const NEWTON_TOL: f64 = 1e-10;
const START_SCALES: [f64; 5] = [1.0, 0.9, 1.1, 0.8, 1.25];

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum ThresholdSearch {
    /// Thresholds anywhere on the real line.
    #[default]
    Continuous,
    /// Thresholds restricted to integer multiples of `step`.
    Lattice { step: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdSolution {
    pub quantizer: Quantizer,
    pub value: f64,
    pub metric: Metric,
}

/// Continuous optimum for `bits` in `1..=8`.
pub fn optimize_thresholds(
    h: &GaussianHypothesisPair,
    bits: u32,
    metric: Metric,
) -> Result<ThresholdSolution> {
    optimize_thresholds_with(h, bits, metric, ThresholdSearch::Continuous)
}

pub fn optimize_thresholds_with(
    h: &GaussianHypothesisPair,
    bits: u32,
    metric: Metric,
    search: ThresholdSearch,
) -> Result<ThresholdSolution> {
    if bits == 0 || bits > DEFAULT_MAX_BITS {
        return Err(Error::BitsOutOfRange {
            bits,
            max: DEFAULT_MAX_BITS,
        });
    }
    if h.mu0 == h.mu1 {
        return Err(Error::EqualMeans);
    }
    let mut best: Option<(Vec<f64>, f64)> = None;
    for scale in START_SCALES {
        let start = start_quantiles(h, bits, metric, scale);
        let (t, v) = Ascent::new(h, metric, start).run();
        best = Some(match best {
            None => (t, v),
            Some(b) => pick(b, (t, v)),
        });
    }
    let (mut t, _) = best.expect("at least one start");
    if let ThresholdSearch::Lattice { step } = search {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::InvalidParameter("lattice step must be positive"));
        }
        t = lattice_climb(h, metric, &t, step)?;
    }
    let quantizer = Quantizer::new(t)?;
    let value = detection::metric_value(&cell_probabilities(h, &quantizer)?, metric)?;
    Ok(ThresholdSolution {
        quantizer,
        value,
        metric,
    })
}

/// Continuous optima for every bit count `1..=max_bits`.
pub fn optimize_all(
    h: &GaussianHypothesisPair,
    max_bits: u32,
    metric: Metric,
) -> Result<Vec<ThresholdSolution>> {
    if max_bits == 0 {
        return Err(Error::BitsOutOfRange {
            bits: 0,
            max: DEFAULT_MAX_BITS,
        });
    }
    (1..=max_bits)
        .map(|m| optimize_thresholds(h, m, metric))
        .collect()
}

pub fn build_info_curve(
    h: &GaussianHypothesisPair,
    max_bits: u32,
    metric: Metric,
) -> Result<InfoCurve> {
    curve_from_solutions(h, &optimize_all(h, max_bits, metric)?)
}

/// Curve over `0..=solutions.len()`; `solutions[i]` must be for `i + 1` bits.
pub fn curve_from_solutions(
    h: &GaussianHypothesisPair,
    solutions: &[ThresholdSolution],
) -> Result<InfoCurve> {
    let metric = solutions
        .first()
        .map(|s| s.metric)
        .ok_or(Error::EmptyGrid)?;
    let mut values = Vec::with_capacity(solutions.len() + 1);
    values.push(0.0);
    for (i, s) in solutions.iter().enumerate() {
        if s.quantizer.bits() as usize != i + 1 || s.metric != metric {
            return Err(Error::InvalidParameter(
                "solutions must cover 1..=max_bits for one metric",
            ));
        }
        values.push(s.value);
    }
    InfoCurve::new(metric, values, info_upper_bound(h, metric))
}

fn pick(a: (Vec<f64>, f64), b: (Vec<f64>, f64)) -> (Vec<f64>, f64) {
    if (a.1 - b.1).abs() <= 1e-12 {
        let lex =
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| *o != Ordering::Equal);
        if lex == Some(Ordering::Greater) {
            b
        } else {
            a
        }
    } else if b.1 > a.1 {
        b
    } else {
        a
    }
}

fn span(h: &GaussianHypothesisPair) -> (f64, f64) {
    let lo = h.mu0.min(h.mu1) - SPAN_SIGMAS * h.sigma;
    let hi = h.mu0.max(h.mu1) + SPAN_SIGMAS * h.sigma;
    (lo, hi)
}

/// Equal-mass quantiles of `N(c, scale^2 3 sigma^2)`.
fn start_quantiles(h: &GaussianHypothesisPair, bits: u32, metric: Metric, scale: f64) -> Vec<f64> {
    let cells = 1usize << bits;
    let center = match metric {
        Metric::Chernoff => 0.5 * (h.mu0 + h.mu1),
        Metric::Kl => h.mu0,
    };
    let spread = scale * libm::sqrt(3.0) * h.sigma;
    let (lo, hi) = span(h);
    (1..cells)
        .map(|k| {
            let z = invert_cdf(normal_cdf, k as f64 / cells as f64, -40.0, 40.0);
            (center + spread * z).clamp(lo + 1e-6, hi - 1e-6)
        })
        .collect()
}

/// `Phi(z)` and `Phi(-z)` for one standardized edge, each computed on its
/// accurate side.
#[derive(Clone, Copy)]
struct Tails {
    z: f64,
    lower: f64,
    upper: f64,
}

impl Tails {
    fn at(z: f64) -> Self {
        if z > 0.0 {
            let upper = normal_cdf(-z);
            Self {
                z,
                lower: 1.0 - upper,
                upper,
            }
        } else {
            let lower = normal_cdf(z);
            Self {
                z,
                lower,
                upper: 1.0 - lower,
            }
        }
    }

    fn interval(lo: &Tails, hi: &Tails) -> f64 {
        let p = if lo.z > 0.0 {
            lo.upper - hi.upper
        } else {
            hi.lower - lo.lower
        };
        p.max(0.0)
    }
}

struct Ascent<'a> {
    h: &'a GaussianHypothesisPair,
    metric: Metric,
    t: Vec<f64>,
    /// Edge tails under H0 and H1 for `-inf, t_1, ..., t_n, +inf`.
    edges: Vec<(Tails, Tails)>,
    s: f64,
    relax: f64,
    lo: f64,
    hi: f64,
}

impl<'a> Ascent<'a> {
    fn new(h: &'a GaussianHypothesisPair, metric: Metric, t: Vec<f64>) -> Self {
        let (lo, hi) = span(h);
        // successive over-relaxation factor for a chain of coupled coordinates
        let n = t.len() as f64;
        let relax = (2.0 / (1.0 + libm::sin(core::f64::consts::PI / (n + 1.0)))).min(1.9);
        let mut edges = Vec::with_capacity(t.len() + 2);
        edges.push((Tails::at(f64::NEG_INFINITY), Tails::at(f64::NEG_INFINITY)));
        for &x in &t {
            edges.push(Self::tails(h, x));
        }
        edges.push((Tails::at(f64::INFINITY), Tails::at(f64::INFINITY)));
        Self {
            h,
            metric,
            t,
            edges,
            s: 0.5,
            relax,
            lo,
            hi,
        }
    }

    fn tails(h: &GaussianHypothesisPair, x: f64) -> (Tails, Tails) {
        (
            Tails::at((x - h.mu0) / h.sigma),
            Tails::at((x - h.mu1) / h.sigma),
        )
    }

    /// Contribution of the cell between two edges: `p0^s p1^(1-s)` (to be
    /// minimized) or `p0 ln(p0/p1)` (to be maximized).
    fn term(&self, lo: &(Tails, Tails), hi: &(Tails, Tails)) -> f64 {
        let a = Tails::interval(&lo.0, &hi.0);
        let b = Tails::interval(&lo.1, &hi.1);
        match self.metric {
            Metric::Chernoff => {
                if a < PROB_FLOOR || b < PROB_FLOOR {
                    0.0
                } else {
                    libm::exp(self.s * libm::log(a) + (1.0 - self.s) * libm::log(b))
                }
            }
            Metric::Kl => {
                if a < PROB_FLOOR {
                    0.0
                } else if b < PROB_FLOOR {
                    f64::INFINITY
                } else {
                    a * libm::log(a / b)
                }
            }
        }
    }

    fn cell_masses(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.edges.windows(2).map(|w| {
            (
                Tails::interval(&w[0].0, &w[1].0),
                Tails::interval(&w[0].1, &w[1].1),
            )
        })
    }

    /// Re-optimizes `s` and returns the current objective value.
    fn refresh(&mut self) -> f64 {
        match self.metric {
            Metric::Chernoff => {
                let logs: Vec<(f64, f64)> = self
                    .cell_masses()
                    .filter(|&(a, b)| a >= PROB_FLOOR && b >= PROB_FLOOR)
                    .map(|(a, b)| (libm::log(a), libm::log(b)))
                    .collect();
                let (s, g) =
                    golden::minimize(|s| log_bhattacharyya_sum(&logs, s), 0.0, 1.0, S_TOLERANCE);
                self.s = s;
                (-g).max(0.0)
            }
            Metric::Kl => self.edges.windows(2).map(|w| self.term(&w[0], &w[1])).sum(),
        }
    }

    fn sweep(&mut self) {
        let n = self.t.len();
        for i in 0..n {
            let left = if i == 0 { self.lo } else { self.t[i - 1] };
            let right = if i + 1 == n { self.hi } else { self.t[i + 1] };
            let (outer_lo, outer_hi) = (self.edges[i], self.edges[i + 2]);
            let pair = |x: f64| {
                let e = Self::tails(self.h, x);
                self.term(&outer_lo, &e) + self.term(&e, &outer_hi)
            };
            let current =
                self.term(&outer_lo, &self.edges[i + 1]) + self.term(&self.edges[i + 1], &outer_hi);
            let better = |v: f64, than: f64| match self.metric {
                Metric::Chernoff => v < than,
                Metric::Kl => v > than,
            };
            let (x, v) = match self.metric {
                Metric::Chernoff => golden::minimize(pair, left, right, COORDINATE_TOL),
                Metric::Kl => golden::maximize(pair, left, right, COORDINATE_TOL),
            };
            if !better(v, current) || !(x > left && x < right) {
                continue;
            }
            let old = self.t[i];
            let over = old + self.relax * (x - old);
            let next = if over > left && over < right && better(pair(over), current) {
                over
            } else {
                x
            };
            self.t[i] = next;
            self.edges[i + 1] = Self::tails(self.h, next);
        }
    }

    fn run(mut self) -> (Vec<f64>, f64) {
        let mut value = self.refresh();
        for _ in 0..MAX_SWEEPS {
            self.sweep();
            let next = self.refresh();
            let gain = next - value;
            value = value.max(next);
            if gain < CONVERGENCE {
                break;
            }
        }
        let value = self.polish(value);
        (self.t, value)
    }

    /// Partial derivatives of the minimized objective (`sum p0^s p1^(1-s)`
    /// or `-KL`) with respect to the masses `(a, b)` of one cell.
    fn cell_partials(&self, a: f64, b: f64) -> (f64, f64) {
        let r = a / b;
        match self.metric {
            Metric::Chernoff => {
                let s = self.s;
                (s * libm::pow(r, s - 1.0), (1.0 - s) * libm::pow(r, s))
            }
            Metric::Kl => (-(libm::log(r) + 1.0), r),
        }
    }

    /// Derivative of the minimized objective with respect to threshold `i`,
    /// `s` held fixed. `edges` holds `-inf, t_1, ..., t_n, +inf`.
    fn partial(&self, i: usize, edges: &[(Tails, Tails)]) -> Option<f64> {
        let cell = |k: usize| {
            let a = Tails::interval(&edges[k].0, &edges[k + 1].0);
            let b = Tails::interval(&edges[k].1, &edges[k + 1].1);
            (a >= 1e-250 && b >= 1e-250).then(|| self.cell_partials(a, b))
        };
        let (left, right) = (cell(i)?, cell(i + 1)?);
        let norm = libm::sqrt(2.0 * core::f64::consts::PI) * self.h.sigma;
        let (z0, z1) = (edges[i + 1].0.z, edges[i + 1].1.z);
        let f0 = libm::exp(-0.5 * z0 * z0) / norm;
        let f1 = libm::exp(-0.5 * z1 * z1) / norm;
        Some(f0 * (left.0 - right.0) + f1 * (left.1 - right.1))
    }

    /// Newton step `H d = -g` with a finite-difference tridiagonal Hessian.
    fn newton_step(&self) -> Option<Vec<f64>> {
        let n = self.t.len();
        let g: Vec<f64> = (0..n)
            .map(|i| self.partial(i, &self.edges))
            .collect::<Option<_>>()?;
        let (mut diag, mut off) = (alloc::vec![0.0; n], alloc::vec![0.0; n.saturating_sub(1)]);
        let mut edges = self.edges.clone();
        let step = 1e-6 * self.h.sigma;
        for j in 0..n {
            let around = j.saturating_sub(1)..(j + 2).min(n);
            edges[j + 1] = Self::tails(self.h, self.t[j] + step);
            let up: Vec<f64> = around
                .clone()
                .map(|i| self.partial(i, &edges))
                .collect::<Option<_>>()?;
            edges[j + 1] = Self::tails(self.h, self.t[j] - step);
            let down: Vec<f64> = around
                .clone()
                .map(|i| self.partial(i, &edges))
                .collect::<Option<_>>()?;
            edges[j + 1] = self.edges[j + 1];
            for (k, i) in around.enumerate() {
                let d = (up[k] - down[k]) / (2.0 * step);
                if i == j {
                    diag[j] = d;
                } else {
                    off[i.min(j)] += 0.5 * d;
                }
            }
        }
        // Thomas algorithm; a non-positive pivot means we are not near a minimum
        let mut c = alloc::vec![0.0; n];
        let mut d = alloc::vec![0.0; n];
        for i in 0..n {
            let lower = if i > 0 { off[i - 1] } else { 0.0 };
            let pivot = diag[i] - if i > 0 { lower * c[i - 1] } else { 0.0 };
            if !(pivot > 0.0) {
                return None;
            }
            c[i] = if i + 1 < n { off[i] / pivot } else { 0.0 };
            d[i] = (-g[i] - if i > 0 { lower * d[i - 1] } else { 0.0 }) / pivot;
        }
        for i in (0..n.saturating_sub(1)).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        Some(d)
    }

    fn polish(&mut self, mut value: f64) -> f64 {
        for _ in 0..NEWTON_STEPS {
            let Some(d) = self.newton_step() else { break };
            let next: Vec<f64> = self.t.iter().zip(&d).map(|(x, dx)| x + dx).collect();
            let ordered = next.windows(2).all(|w| w[0] < w[1]);
            if !ordered || next[0] <= self.lo || next[next.len() - 1] >= self.hi {
                break;
            }
            let saved = (self.t.clone(), self.edges.clone(), self.s);
            for (i, &x) in next.iter().enumerate() {
                self.edges[i + 1] = Self::tails(self.h, x);
            }
            self.t = next;
            let v = self.refresh();
            if v < value - 1e-14 {
                (self.t, self.edges, self.s) = saved;
                break;
            }
            value = value.max(v);
            if d.iter().all(|dx| libm::fabs(*dx) < NEWTON_TOL) {
                break;
            }
        }
        value
    }
}

fn exact_value(h: &GaussianHypothesisPair, metric: Metric, t: &[f64]) -> Result<f64> {
    let q = Quantizer::new(t.to_vec())?;
    detection::metric_value(&cell_probabilities(h, &q)?, metric)
}

fn lattice_climb(
    h: &GaussianHypothesisPair,
    metric: Metric,
    start: &[f64],
    step: f64,
) -> Result<Vec<f64>> {
    let (lo, hi) = span(h);
    let (kmin, kmax) = (libm::ceil(lo / step) as i64, libm::floor(hi / step) as i64);
    if (kmax - kmin) < start.len() as i64 {
        return Err(Error::InvalidParameter(
            "lattice step too coarse for this many thresholds",
        ));
    }
    let mut k: Vec<i64> = start
        .iter()
        .map(|&x| libm::round(x / step) as i64)
        .collect();
    // restore strict ordering after rounding
    for i in 0..k.len() {
        let floor = if i == 0 { kmin } else { k[i - 1] + 1 };
        k[i] = k[i].max(floor);
    }
    for i in (0..k.len()).rev() {
        let ceil = if i + 1 == k.len() { kmax } else { k[i + 1] - 1 };
        k[i] = k[i].min(ceil);
    }
    let to_t = |k: &[i64]| k.iter().map(|&j| j as f64 * step).collect::<Vec<f64>>();
    let valid =
        |k: &[i64]| k.windows(2).all(|w| w[0] < w[1]) && k[0] >= kmin && k[k.len() - 1] <= kmax;
    let mut best = exact_value(h, metric, &to_t(&k))?;
    let n = k.len();
    let full = n <= 7;
    loop {
        let mut improved: Option<(Vec<i64>, f64)> = None;
        let moves: Vec<Vec<i64>> = if full {
            (0..3usize.pow(n as u32))
                .map(|mut code| {
                    (0..n)
                        .map(|_| {
                            let d = (code % 3) as i64 - 1;
                            code /= 3;
                            d
                        })
                        .collect()
                })
                .collect()
        } else {
            (0..n)
                .flat_map(|i| {
                    [-1i64, 1].into_iter().map(move |d| {
                        let mut v = alloc::vec![0i64; n];
                        v[i] = d;
                        v
                    })
                })
                .collect()
        };
        for delta in moves {
            if delta.iter().all(|&d| d == 0) {
                continue;
            }
            let cand: Vec<i64> = k.iter().zip(&delta).map(|(a, d)| a + d).collect();
            if !valid(&cand) {
                continue;
            }
            let v = exact_value(h, metric, &to_t(&cand))?;
            let bar = improved.as_ref().map_or(best, |b| b.1);
            if v > bar + 1e-15 {
                improved = Some((cand, v));
            }
        }
        match improved {
            Some((cand, v)) => {
                k = cand;
                best = v;
            }
            None => return Ok(to_t(&k)),
        }
    }
}
