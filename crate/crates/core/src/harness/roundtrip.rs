//! Noiseless end-to-end fidelity: every transmitted BU comes back, and the
//! only extras are phantoms from padding slots.

use std::collections::HashMap;

use super::seed::{derive_seed, STREAM_SOURCE};
use crate::bitunit::{BitUnit, SchemeParams};
use crate::error::Result;
use crate::falling_storage::{BuSource, FallingStorage, RandomBuSource};
use crate::fec::{pack_frames, Codec};
use crate::phy::{bpsk_modulate, hard_decision, soft_llr};
use crate::receiver::receive_stream;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconciliation {
    /// Transmitted BUs with no recovered counterpart.
    pub missing: usize,
    /// Recovered extras that are all-zero-payload phantoms.
    pub phantoms: usize,
    /// Recovered extras that are not phantoms.
    pub unexplained: usize,
    /// Within each leading-pattern class, recovered order equals sent order.
    pub class_order_preserved: bool,
}

impl Reconciliation {
    pub fn is_exact(&self, padding: u64) -> bool {
        self.missing == 0 && self.unexplained == 0 && self.phantoms as u64 == padding && self.class_order_preserved
    }
}

fn is_phantom(bu: &BitUnit, params: &SchemeParams) -> bool {
    bu.bits()[params.k_ob()..].iter().all(|&b| b == 0)
}

fn by_class<'a>(list: &'a [BitUnit], params: &SchemeParams) -> HashMap<&'a [u8], Vec<&'a BitUnit>> {
    let mut classes: HashMap<&[u8], Vec<&BitUnit>> = HashMap::new();
    for bu in list.iter().filter(|b| !is_phantom(b, params)) {
        classes.entry(&bu.bits()[..params.k_ob()]).or_default().push(bu);
    }
    classes
}

/// Multiset comparison of sent and recovered BUs.
pub fn reconcile(sent: &[BitUnit], recovered: &[BitUnit], params: &SchemeParams) -> Reconciliation {
    let mut counts: HashMap<&BitUnit, i64> = HashMap::new();
    for bu in sent {
        *counts.entry(bu).or_default() += 1;
    }
    let mut phantoms = 0;
    let mut unexplained = 0;
    for bu in recovered {
        match counts.get_mut(bu) {
            Some(c) if *c > 0 => *c -= 1,
            _ if is_phantom(bu, params) => phantoms += 1,
            _ => unexplained += 1,
        }
    }
    let missing = counts.values().filter(|&&c| c > 0).map(|&c| c as usize).sum();

    let class_order_preserved = by_class(sent, params) == by_class(recovered, params);
    Reconciliation {
        missing,
        phantoms,
        unexplained,
        class_order_preserved,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundtripReport {
    pub sent: usize,
    pub recovered: usize,
    pub padding: u64,
    pub symbols: u64,
    pub reconciliation: Reconciliation,
}

impl RoundtripReport {
    pub fn passed(&self) -> bool {
        self.reconciliation.is_exact(self.padding)
    }
}

/// Sends `n_bus` random BUs through storage, coding and a noiseless BPSK
/// link, then rebuilds them from the decoded stream.
pub fn run_roundtrip(params: SchemeParams, n_bus: u64, seed: u64, codec: &Codec) -> Result<RoundtripReport> {
    let mut source = RandomBuSource::new(params, derive_seed(seed, &[0, 0, 0, STREAM_SOURCE]), Some(n_bus));
    let sent: Vec<BitUnit> = {
        let mut replay = source.clone();
        std::iter::from_fn(|| replay.next_bu()).collect()
    };
    let mut storage = FallingStorage::new(params);
    storage.accumulate(&mut source)?;
    let mut frames = Vec::new();
    while storage.occupancy() > 0 {
        frames.push(storage.inject_round(&mut source)?);
    }
    let packed = pack_frames(&frames, codec.block_len(params.payload_len()));
    let mut decoded = Vec::with_capacity(packed.blocks.len() * packed.block_len);
    let mut symbols = 0u64;
    for block in &packed.blocks {
        let tx = bpsk_modulate(&codec.encode(block), 1.0);
        symbols += tx.values.len() as u64;
        let info = match codec {
            Codec::Rate1 => hard_decision(&tx.values),
            Codec::Ldpc { .. } => {
                let link = crate::phy::LinkBudget { sigma: 1.0, amplitude: 1.0 };
                debug_assert!(soft_llr(&tx.values, 1.0, 1.0).iter().all(|l| l.abs() == 2.0));
                codec.decode(&tx.values, link).info
            }
        };
        decoded.extend(info);
    }
    let recovered = receive_stream(&decoded, &params, packed.pad_len)?;
    Ok(RoundtripReport {
        sent: sent.len(),
        recovered: recovered.len(),
        padding: storage.padding_count(),
        symbols,
        reconciliation: reconcile(&sent, &recovered, &params),
    })
}
