//! Closed forms used as oracles for the simulations.

use statrs::function::erf::erfc;

use crate::bitunit::SchemeParams;
use crate::error::{Error, Result};
use crate::phy::{Scheme, SnrConvention, SnrSpec};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Sampled closed-form curve.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticCurve {
    pub label: String,
    pub x_values: Vec<f64>,
    pub y_values: Vec<f64>,
}

impl AnalyticCurve {
    pub fn from_fn(label: impl Into<String>, xs: &[f64], f: impl Fn(f64) -> f64) -> Self {
        Self {
            label: label.into(),
            x_values: xs.to_vec(),
            y_values: xs.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.x_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x_values.is_empty()
    }
}

/// Probability that a given column is empty after `m` uniform drops into
/// `phi` columns: `((phi - 1) / phi)^m`.
pub fn unload_probability(phi: usize, m: usize) -> f64 {
    assert!(phi >= 1, "phi must be at least 1");
    if m == 0 {
        return 1.0;
    }
    let ratio = (phi - 1) as f64 / phi as f64;
    // powi takes i32; large m goes through exp/ln.
    match i32::try_from(m) {
        Ok(mi) => ratio.powi(mi),
        Err(_) => (m as f64 * ratio.ln()).exp(),
    }
}

pub fn spectral_gain(n_total: usize, k_ob: usize) -> Result<f64> {
    if k_ob >= n_total {
        return Err(Error::InvalidParams(format!(
            "k_ob ({k_ob}) must be smaller than n_total ({n_total})"
        )));
    }
    Ok(n_total as f64 / (n_total - k_ob) as f64)
}

pub fn snr_gain_db(n_total: usize, k_ob: usize) -> Result<f64> {
    Ok(10.0 * spectral_gain(n_total, k_ob)?.log10())
}

/// Gaussian tail probability.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Closed-form uncoded BER averaged over all `n_total` bits of a BU.
///
/// The proposed scheme's index-carried bits arrive error-free, so only the
/// `(n - k) / n` payload share can be wrong; under `EbN0Info` those payload
/// symbols also carry the `n / (n - k)` energy boost.
pub fn analytic_ber(scheme: Scheme, snr: SnrSpec, params: &SchemeParams, code_rate: f64) -> Result<f64> {
    if code_rate != 1.0 {
        return Err(Error::CodedAnalytic);
    }
    let lin = snr.linear();
    match scheme {
        Scheme::Conventional => Ok(q_function((2.0 * lin).sqrt())),
        Scheme::Proposed => {
            let share = params.payload_len() as f64 / params.n_total() as f64;
            let boost = match snr.convention {
                SnrConvention::EbN0Info => 1.0 / share,
                SnrConvention::EsN0 => 1.0,
            };
            Ok(share * q_function((2.0 * boost * lin).sqrt()))
        }
    }
}

/// Storage cost and latency of the falling model.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayStorageReport {
    /// Payload bits held at steady state.
    pub storage_bits: usize,
    /// BUs that must be accumulated before the first slot is sent.
    pub bus_before_first_injection: usize,
    /// Rounds elapsed before the first injection, one slot per BU arrival.
    pub rounds_to_first_injection: f64,
    /// Mean residency in rounds, filled in from a simulation.
    pub mean_residency_rounds: Option<f64>,
}

pub fn delay_storage_report(params: &SchemeParams) -> DelayStorageReport {
    DelayStorageReport {
        storage_bits: params.m_storage() * params.payload_len(),
        bus_before_first_injection: params.m_storage(),
        rounds_to_first_injection: params.m_storage() as f64 / params.phi() as f64,
        mean_residency_rounds: None,
    }
}

/// Wilson score interval for `successes` out of `trials` at normal quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

/// Binomial standard deviation of a rate estimate.
pub fn binomial_sd(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}
