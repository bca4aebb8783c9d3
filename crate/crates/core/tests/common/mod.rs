#![allow(dead_code)]

use std::sync::OnceLock;

use hopdetect_core::{build_info_curve, GaussianHypothesisPair, InfoCurve, Metric};

pub fn chernoff_curve() -> &'static InfoCurve {
    static CURVE: OnceLock<InfoCurve> = OnceLock::new();
    CURVE.get_or_init(|| {
        build_info_curve(
            &GaussianHypothesisPair::symmetric_unit(),
            8,
            Metric::Chernoff,
        )
        .unwrap()
    })
}

pub fn kl_curve() -> &'static InfoCurve {
    static CURVE: OnceLock<InfoCurve> = OnceLock::new();
    CURVE.get_or_init(|| {
        build_info_curve(&GaussianHypothesisPair::symmetric_unit(), 8, Metric::Kl).unwrap()
    })
}

/// Standard normal CDF by Marsaglia's Taylor series
/// `0.5 + phi(x) (x + x^3/3 + x^5/(3*5) + ...)`.
pub fn phi_series(x: f64) -> f64 {
    let x2 = x * x;
    let (mut term, mut sum, mut k) = (x, x, 1.0);
    loop {
        k += 2.0;
        term *= x2 / k;
        if sum + term == sum {
            break;
        }
        sum += term;
    }
    let density = (-0.5 * x2).exp() / (2.0 * std::f64::consts::PI).sqrt();
    0.5 + density * sum
}
