//! Empirical column-empty frequency of the falling model against
//! `((phi - 1) / phi)^m`.

use rayon::prelude::*;

use super::seed::derive_seed;
use crate::analysis::{unload_probability, wilson_interval, AnalyticCurve, Z95};
use crate::bitunit::SchemeParams;
use crate::error::{Error, Result};
use crate::falling_storage::{FallingStorage, RandomBuSource};

/// When the designated column is inspected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnapshotMode {
    /// Before each `inject_round` of one long streaming run, after burn-in.
    SteadyState,
    /// Right after accumulating `m` BUs into a fresh storage; one snapshot
    /// per independent trial.
    Accumulation,
}

/// Column 1 is the one inspected.
pub const DESIGNATED_COLUMN: usize = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct UnloadPoint {
    pub phi: usize,
    pub m: usize,
    pub snapshots: u64,
    pub empty: u64,
    pub analytic: f64,
}

impl UnloadPoint {
    pub fn empirical(&self) -> f64 {
        self.empty as f64 / self.snapshots as f64
    }

    pub fn ci95(&self) -> (f64, f64) {
        wilson_interval(self.empty, self.snapshots, Z95)
    }

    /// Events the closed form predicts over this many snapshots.
    pub fn expected_events(&self) -> f64 {
        self.analytic * self.snapshots as f64
    }

    /// True when the closed form lies in the 95% interval of the measurement.
    pub fn analytic_in_ci(&self) -> bool {
        let (lo, hi) = self.ci95();
        (lo..=hi).contains(&self.analytic)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnloadCurves {
    pub phi: usize,
    pub empirical: AnalyticCurve,
    pub analytic: AnalyticCurve,
    pub points: Vec<UnloadPoint>,
}

fn steady_burn_in(phi: usize, m: usize) -> usize {
    let depth = m.div_ceil(phi);
    4 * depth * depth + 100
}

fn measure(phi: usize, m: usize, trials: u64, seed: u64, mode: SnapshotMode) -> Result<UnloadPoint> {
    if !phi.is_power_of_two() {
        return Err(Error::InvalidParams(format!("phi ({phi}) must be a power of two")));
    }
    let k = phi.trailing_zeros() as usize;
    // One payload bit is enough; only the column routing matters here.
    let params = SchemeParams::new(k + 1, k, m.max(1))?;
    let mut source = RandomBuSource::new(params, seed, None);
    let mut empty = 0u64;
    match mode {
        SnapshotMode::Accumulation => {
            for _ in 0..trials {
                let mut storage = FallingStorage::new(params);
                if m > 0 {
                    storage.accumulate(&mut source)?;
                }
                empty += u64::from(storage.is_column_empty(DESIGNATED_COLUMN));
            }
        }
        SnapshotMode::SteadyState => {
            let mut storage = FallingStorage::new(params);
            if m > 0 {
                storage.accumulate(&mut source)?;
            }
            for _ in 0..steady_burn_in(phi, m) {
                storage.inject_round(&mut source)?;
            }
            for _ in 0..trials {
                empty += u64::from(storage.is_column_empty(DESIGNATED_COLUMN));
                storage.inject_round(&mut source)?;
            }
        }
    }
    Ok(UnloadPoint {
        phi,
        m,
        snapshots: trials,
        empty,
        analytic: unload_probability(phi, m),
    })
}

/// Measures every `(phi, m)` pair; one curve pair per `phi`.
pub fn run_unload_experiment(
    phi_list: &[usize],
    m_grid: &[usize],
    trials: u64,
    seed: u64,
    mode: SnapshotMode,
) -> Result<Vec<UnloadCurves>> {
    if trials == 0 {
        return Err(Error::Config("trials must be positive".into()));
    }
    let mode_tag = match mode {
        SnapshotMode::SteadyState => 1,
        SnapshotMode::Accumulation => 2,
    };
    phi_list
        .iter()
        .map(|&phi| {
            let points = m_grid
                .par_iter()
                .map(|&m| measure(phi, m, trials, derive_seed(seed, &[mode_tag, phi as u64, m as u64]), mode))
                .collect::<Result<Vec<_>>>()?;
            let xs: Vec<f64> = m_grid.iter().map(|&m| m as f64).collect();
            Ok(UnloadCurves {
                phi,
                empirical: AnalyticCurve {
                    label: format!("empirical_phi{phi}"),
                    x_values: xs.clone(),
                    y_values: points.iter().map(UnloadPoint::empirical).collect(),
                },
                analytic: AnalyticCurve {
                    label: format!("rho_phi{phi}"),
                    x_values: xs,
                    y_values: points.iter().map(|p| p.analytic).collect(),
                },
                points,
            })
        })
        .collect()
}
