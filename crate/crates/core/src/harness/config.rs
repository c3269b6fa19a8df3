use std::path::PathBuf;
use std::sync::Arc;

use crate::bitunit::SchemeParams;
use crate::error::{Error, Result};
use crate::fec::{Codec, LdpcCode, DEFAULT_MAX_ITERS};
use crate::phy::{Scheme, SnrConvention, SnrSpec};

/// Channel coding selection.
#[derive(Debug, Clone, PartialEq)]
pub enum CodeChoice {
    Rate1,
    /// `alist = None` selects the shipped 1296-bit rate-1/2 code.
    Ldpc { alist: Option<PathBuf>, max_iters: usize },
}

impl CodeChoice {
    pub fn shipped_ldpc() -> Self {
        CodeChoice::Ldpc {
            alist: None,
            max_iters: DEFAULT_MAX_ITERS,
        }
    }

    pub fn build(&self) -> Result<Codec> {
        match self {
            CodeChoice::Rate1 => Ok(Codec::Rate1),
            CodeChoice::Ldpc { alist, max_iters } => {
                let code = match alist {
                    None => LdpcCode::shipped_1296_rate_half().clone(),
                    Some(path) => LdpcCode::from_alist(&std::fs::read_to_string(path)?)?,
                };
                if code.k_info() == 0 {
                    return Err(Error::Config("LDPC code has no information bits".into()));
                }
                Ok(Codec::Ldpc {
                    code: Arc::new(code),
                    max_iters: (*max_iters).max(1),
                })
            }
        }
    }
}

/// One Monte Carlo sweep of one scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scheme: Scheme,
    pub params: SchemeParams,
    pub snr_grid: Vec<SnrSpec>,
    pub code: CodeChoice,
    /// Upper bound on BUs per SNR point.
    pub n_bus: u64,
    pub master_seed: u64,
    /// A point stops once this many bit errors are seen.
    pub min_errors: u64,
    /// Share source and noise streams between schemes.
    pub paired_noise: bool,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.snr_grid.is_empty() {
            return Err(Error::Config("SNR grid is empty".into()));
        }
        if self.scheme == Scheme::Proposed && self.n_bus < self.params.m_storage() as u64 {
            return Err(Error::Config(format!(
                "n_bus ({}) must be at least m_storage ({})",
                self.n_bus,
                self.params.m_storage()
            )));
        }
        if self.n_bus == 0 {
            return Err(Error::Config("n_bus must be positive".into()));
        }
        if let Some(c) = self.snr_grid.windows(2).find(|w| w[0].convention != w[1].convention) {
            return Err(Error::Config(format!(
                "mixed SNR conventions in grid ({} and {})",
                c[0].convention, c[1].convention
            )));
        }
        Ok(())
    }

    pub fn with_scheme(&self, scheme: Scheme) -> Self {
        Self {
            scheme,
            ..self.clone()
        }
    }
}

/// Evenly spaced grid, rounded to 1e-6 dB so labels stay clean.
pub fn snr_grid(start_db: f64, stop_db: f64, step_db: f64, convention: SnrConvention) -> Result<Vec<SnrSpec>> {
    if step_db.is_nan() || step_db <= 0.0 || !start_db.is_finite() || !stop_db.is_finite() || stop_db < start_db {
        return Err(Error::Config(format!(
            "bad SNR range {start_db}..{stop_db} step {step_db}"
        )));
    }
    let count = ((stop_db - start_db) / step_db + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| {
            let v = start_db + i as f64 * step_db;
            SnrSpec::new((v * 1e6).round() / 1e6, convention)
        })
        .collect())
}
