//! Experiment driver: source, storage, coding, channel and receiver wired
//! together, plus the reports built from them.

pub mod config;
pub mod gap;
pub mod report;
pub mod roundtrip;
pub mod run;
pub mod seed;
pub mod unload;

pub use config::{snr_grid, CodeChoice, ExperimentConfig};
pub use gap::{measure_snr_gap, snr_at_ber};
pub use report::{write_csv, BerReport, PointResult, CSV_HEADER};
pub use roundtrip::{reconcile, run_roundtrip, Reconciliation, RoundtripReport};
pub use run::{run_ber, run_conventional, run_proposed, symbols_per_bu};
pub use seed::derive_seed;
pub use unload::{run_unload_experiment, SnapshotMode, UnloadCurves, UnloadPoint};

use crate::analysis::{delay_storage_report, DelayStorageReport};
use crate::bitunit::SchemeParams;
use crate::error::Result;
use crate::falling_storage::{FallingStorage, RandomBuSource};

/// Storage/latency figures with the mean residency measured over `rounds`
/// streaming rounds.
pub fn measure_delay_storage(params: SchemeParams, rounds: usize, seed: u64) -> Result<DelayStorageReport> {
    let mut report = delay_storage_report(&params);
    let mut source = RandomBuSource::new(params, seed, None);
    let mut storage = FallingStorage::new(params);
    storage.accumulate(&mut source)?;
    for _ in 0..rounds {
        storage.inject_round(&mut source)?;
    }
    report.mean_residency_rounds = storage
        .mean_residency_slots()
        .map(|slots| slots / params.phi() as f64);
    Ok(report)
}
