use std::io::Write;
use std::time::Duration;

use serde::Serialize;

use super::config::ExperimentConfig;
use crate::analysis::{wilson_interval, Z95};
use crate::error::Result;
use crate::phy::{Scheme, SnrSpec};

/// Tallies for one SNR point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub snr: SnrSpec,
    pub scheme: Scheme,
    /// Information bits accounted (all `n_total` bits of every genuine BU).
    pub bits: u64,
    pub errors: u64,
    pub bus: u64,
    pub bu_errors: u64,
    /// Zero-fill slots transmitted.
    pub padding: u64,
    /// Channel symbols transmitted, pad and padding slots included.
    pub symbols: u64,
    pub blocks: u64,
    pub converged_blocks: u64,
    pub wall_clock: Duration,
}

impl PointResult {
    pub fn ber(&self) -> f64 {
        if self.bits == 0 {
            0.0
        } else {
            self.errors as f64 / self.bits as f64
        }
    }

    /// Wilson 95% interval on the BER.
    pub fn ci95(&self) -> (f64, f64) {
        wilson_interval(self.errors, self.bits, Z95)
    }

    pub fn converged_frac(&self) -> f64 {
        if self.blocks == 0 {
            1.0
        } else {
            self.converged_blocks as f64 / self.blocks as f64
        }
    }

    /// Fewer error events than the stop rule asked for.
    pub fn low_confidence(&self, min_errors: u64) -> bool {
        self.errors < min_errors
    }

    /// Merges tallies of the same point from independent trials.
    pub fn merge(&mut self, other: &PointResult) {
        self.bits += other.bits;
        self.errors += other.errors;
        self.bus += other.bus;
        self.bu_errors += other.bu_errors;
        self.padding += other.padding;
        self.symbols += other.symbols;
        self.blocks += other.blocks;
        self.converged_blocks += other.converged_blocks;
        self.wall_clock += other.wall_clock;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerReport {
    pub config: ExperimentConfig,
    pub points: Vec<PointResult>,
    pub noise_generator: &'static str,
    pub llr_clamp: Option<f64>,
    pub code_label: String,
}

#[derive(Serialize)]
struct CsvRow {
    snr_db: f64,
    scheme: String,
    bits: u64,
    errors: u64,
    ber: f64,
    ci_lo: f64,
    ci_hi: f64,
    bu_errors: u64,
    padding: u64,
    converged_frac: f64,
}

/// Writes one row per (SNR, scheme), sorted by SNR then scheme.
pub fn write_csv<W: Write>(reports: &[&BerReport], out: W) -> Result<()> {
    let mut rows: Vec<&PointResult> = reports.iter().flat_map(|r| r.points.iter()).collect();
    rows.sort_by(|a, b| {
        a.snr
            .value_db
            .total_cmp(&b.snr.value_db)
            .then(a.scheme.cmp(&b.scheme))
    });
    let mut w = csv::Writer::from_writer(out);
    for p in rows {
        let (ci_lo, ci_hi) = p.ci95();
        w.serialize(CsvRow {
            snr_db: p.snr.value_db,
            scheme: p.scheme.to_string(),
            bits: p.bits,
            errors: p.errors,
            ber: p.ber(),
            ci_lo,
            ci_hi,
            bu_errors: p.bu_errors,
            padding: p.padding,
            converged_frac: p.converged_frac(),
        })?;
    }
    w.flush()?;
    Ok(())
}

pub const CSV_HEADER: &str = "snr_db,scheme,bits,errors,ber,ci_lo,ci_hi,bu_errors,padding,converged_frac";
