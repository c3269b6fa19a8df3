//! BPSK over AWGN.
//!
//! Bit 0 maps to `+a`, bit 1 to `-a`. LLRs are positive when bit 0 is more
//! likely. Noise is drawn from `ChaCha8Rng` through `rand_distr`'s ziggurat
//! `StandardNormal`; both are pinned so a seed fully determines a run.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bitunit::SchemeParams;
use crate::error::{Error, Result};

/// Recorded in reports so a run can be reproduced bit for bit.
pub const NOISE_GENERATOR: &str = "ChaCha8Rng + rand_distr 0.5 ziggurat StandardNormal";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SnrConvention {
    /// Energy per information bit of the BU. Index-carried bits cost no
    /// energy, so the payload symbols of the proposed scheme are boosted.
    EbN0Info,
    /// Energy per transmitted channel symbol.
    EsN0,
}

impl fmt::Display for SnrConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SnrConvention::EbN0Info => "ebn0",
            SnrConvention::EsN0 => "esn0",
        })
    }
}

impl FromStr for SnrConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ebn0" | "eb_n0_info" | "ebn0info" => Ok(SnrConvention::EbN0Info),
            "esn0" | "es_n0" => Ok(SnrConvention::EsN0),
            other => Err(Error::Config(format!("unknown SNR convention '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrSpec {
    pub value_db: f64,
    pub convention: SnrConvention,
}

impl SnrSpec {
    pub fn new(value_db: f64, convention: SnrConvention) -> Self {
        Self {
            value_db,
            convention,
        }
    }

    pub fn linear(&self) -> f64 {
        10f64.powf(self.value_db / 10.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Proposed,
    Conventional,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Proposed => "proposed",
            Scheme::Conventional => "conventional",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "proposed" => Ok(Scheme::Proposed),
            "conventional" => Ok(Scheme::Conventional),
            other => Err(Error::Config(format!("unknown scheme '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymbolBlock {
    pub values: Vec<f64>,
    pub amplitude: f64,
}

pub fn bpsk_modulate(bits: &[u8], amplitude: f64) -> SymbolBlock {
    debug_assert!(amplitude > 0.0);
    SymbolBlock {
        values: bits
            .iter()
            .map(|&b| if b == 0 { amplitude } else { -amplitude })
            .collect(),
        amplitude,
    }
}

/// Channel operating point: noise deviation per real dimension and the
/// symbol amplitude that realizes the requested SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub sigma: f64,
    pub amplitude: f64,
}

/// Resolves an SNR into `(sigma, amplitude)`.
///
/// Under `EsN0` the amplitude is 1. Under `EbN0Info` the energy per
/// information bit is 1 and the symbol energy is `code_rate` times that,
/// further scaled by `n_total / (n_total - k_ob)` for the proposed scheme.
pub fn noise_sigma(
    snr: SnrSpec,
    params: &SchemeParams,
    code_rate: f64,
    scheme: Scheme,
) -> Result<LinkBudget> {
    if !(code_rate > 0.0 && code_rate <= 1.0) {
        return Err(Error::InvalidRate(code_rate));
    }
    let lin = snr.linear();
    if !(lin.is_finite() && lin > 0.0) {
        return Err(Error::InvalidSnr(format!("{} dB", snr.value_db)));
    }
    let (es, n0) = match snr.convention {
        SnrConvention::EsN0 => (1.0, 1.0 / lin),
        SnrConvention::EbN0Info => {
            let eb = 1.0;
            let boost = match scheme {
                Scheme::Proposed => params.n_total() as f64 / params.payload_len() as f64,
                Scheme::Conventional => 1.0,
            };
            (eb * code_rate * boost, eb / lin)
        }
    };
    Ok(LinkBudget {
        sigma: (n0 / 2.0).sqrt(),
        amplitude: es.sqrt(),
    })
}

#[derive(Debug, Clone)]
pub struct NoiseModel {
    sigma: f64,
    rng: ChaCha8Rng,
}

impl NoiseModel {
    pub fn new(sigma: f64, rng_seed: u64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidSnr(format!("noise sigma {sigma} must be positive")));
        }
        Ok(Self {
            sigma,
            rng: ChaCha8Rng::seed_from_u64(rng_seed),
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Adds noise to `block`, continuing this model's stream.
    pub fn apply(&mut self, block: &SymbolBlock) -> Vec<f64> {
        block
            .values
            .iter()
            .map(|&x| x + self.sigma * self.rng.sample::<f64, _>(StandardNormal))
            .collect()
    }
}

pub fn awgn(block: &SymbolBlock, noise: &mut NoiseModel) -> Vec<f64> {
    noise.apply(block)
}

/// Sign slicer; exactly 0.0 decides bit 0.
pub fn hard_decision(received: &[f64]) -> Vec<u8> {
    received.iter().map(|&y| u8::from(y < 0.0)).collect()
}

pub fn soft_llr(received: &[f64], sigma: f64, amplitude: f64) -> Vec<f64> {
    let scale = 2.0 * amplitude / (sigma * sigma);
    received.iter().map(|&y| scale * y).collect()
}
