//! Receive side: slot indices from arrival order, then BU reconstruction.

use crate::bitunit::{reassemble_bits, BitUnit, SchemeParams};
use crate::error::{Error, Result};

/// A decoded slot with its position in the round structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReceivedSlot {
    /// Global 1-based arrival counter.
    pub psi: u64,
    /// 0-based round number.
    pub round: u64,
    /// 1-based slot index within the round.
    pub slot_index: usize,
    pub payload_bits: Vec<u8>,
}

/// Round number and slot index of the `psi`-th received slot.
pub fn recover_ts_index(psi: u64, phi: usize) -> Result<(u64, usize)> {
    if psi == 0 {
        return Err(Error::ZeroSlotCounter);
    }
    assert!(phi >= 1, "phi must be at least 1");
    let phi = phi as u64;
    let round = (psi - 1) / phi;
    Ok((round, (psi - round * phi) as usize))
}

/// Streaming receiver: assigns arrival counters to consecutive payloads.
#[derive(Debug, Clone)]
pub struct SlotReceiver {
    params: SchemeParams,
    psi: u64,
    partial: Vec<u8>,
}

impl SlotReceiver {
    pub fn new(params: SchemeParams) -> Self {
        Self {
            params,
            psi: 0,
            partial: Vec::new(),
        }
    }

    /// Slots received so far.
    pub fn slots_seen(&self) -> u64 {
        self.psi
    }

    /// Feeds decoded bits; returns every slot they complete.
    pub fn push(&mut self, bits: &[u8]) -> Vec<ReceivedSlot> {
        let len = self.params.payload_len();
        self.partial.extend_from_slice(bits);
        let whole = self.partial.len() / len * len;
        let rest = self.partial.split_off(whole);
        let ready = std::mem::replace(&mut self.partial, rest);
        ready
            .chunks_exact(len)
            .map(|chunk| {
                self.psi += 1;
                let (round, slot_index) =
                    recover_ts_index(self.psi, self.params.phi()).expect("psi starts at 1");
                ReceivedSlot {
                    psi: self.psi,
                    round,
                    slot_index,
                    payload_bits: chunk.to_vec(),
                }
            })
            .collect()
    }

    /// Bits held back waiting for a complete slot.
    pub fn pending(&self) -> usize {
        self.partial.len()
    }

    pub fn reconstruct(&self, slot: &ReceivedSlot) -> BitUnit {
        reassemble_bits(slot.slot_index, &slot.payload_bits, &self.params)
            .expect("slot index and payload length come from params")
    }
}

/// Rebuilds every BU of a decoded stream, phantoms from padding included.
pub fn receive_stream(decoded_bits: &[u8], params: &SchemeParams, pad_len: usize) -> Result<Vec<BitUnit>> {
    let slot = params.payload_len();
    let misaligned = || Error::MisalignedStream {
        len: decoded_bits.len(),
        pad: pad_len,
        slot,
    };
    let data_len = decoded_bits.len().checked_sub(pad_len).ok_or_else(misaligned)?;
    if data_len % slot != 0 {
        return Err(misaligned());
    }
    let mut rx = SlotReceiver::new(*params);
    let slots = rx.push(&decoded_bits[..data_len]);
    Ok(slots.iter().map(|s| rx.reconstruct(s)).collect())
}
