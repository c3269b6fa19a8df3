//! The falling model: `phi` FIFO columns of slot payloads.
//!
//! A payload falls into the column selected by its BU's leading pattern and
//! stacks on top of earlier arrivals. Each round drains the bottom of columns
//! `1..=phi` in order. An empty column yields all-zero padding, synthesized at
//! injection time and never stored. Every genuine injection is followed at
//! once by pulling one fresh BU from the source, so a live source keeps the
//! occupancy at `m_storage`.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitunit::{segment, BitUnit, CbPayload, SchemeParams};
use crate::error::Result;

/// A stream of BUs. `None` means exhausted.
pub trait BuSource {
    fn next_bu(&mut self) -> Option<BitUnit>;
}

impl<I: Iterator<Item = BitUnit>> BuSource for I {
    fn next_bu(&mut self) -> Option<BitUnit> {
        self.next()
    }
}

/// Seeded source of uniformly random BUs, optionally bounded.
#[derive(Debug, Clone)]
pub struct RandomBuSource {
    params: SchemeParams,
    rng: ChaCha8Rng,
    remaining: Option<u64>,
}

impl RandomBuSource {
    pub fn new(params: SchemeParams, seed: u64, limit: Option<u64>) -> Self {
        Self {
            params,
            rng: ChaCha8Rng::seed_from_u64(seed),
            remaining: limit,
        }
    }

    /// Stops yielding from now on.
    pub fn exhaust(&mut self) {
        self.remaining = Some(0);
    }

    pub fn remaining(&self) -> Option<u64> {
        self.remaining
    }
}

impl BuSource for RandomBuSource {
    fn next_bu(&mut self) -> Option<BitUnit> {
        if let Some(r) = self.remaining.as_mut() {
            if *r == 0 {
                return None;
            }
            *r -= 1;
        }
        let n = self.params.n_total();
        let mut bits = Vec::with_capacity(n);
        let mut word = 0u64;
        for i in 0..n {
            if i % 64 == 0 {
                word = self.rng.random();
            }
            bits.push(((word >> (i % 64)) & 1) as u8);
        }
        Some(BitUnit::new(bits, &self.params).expect("generated BU matches params"))
    }
}

/// One round of slot contents, position `i` holding TS_{i+1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    payloads: Vec<CbPayload>,
    origins: Vec<Option<u64>>,
}

impl Frame {
    pub fn payloads(&self) -> &[CbPayload] {
        &self.payloads
    }

    /// Drop ordinal (0-based, in load order) of the BU behind each slot;
    /// `None` for padding. Transmit-side bookkeeping only, never on the wire.
    pub fn origins(&self) -> &[Option<u64>] {
        &self.origins
    }

    pub fn len(&self) -> usize {
        self.payloads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.payloads.is_empty()
    }

    pub fn padding_slots(&self) -> usize {
        self.payloads.iter().filter(|p| p.is_padding()).count()
    }
}

#[derive(Debug, Clone)]
struct Queued {
    payload: CbPayload,
    ordinal: u64,
    dropped_at: u64,
}

#[derive(Debug, Clone)]
pub struct FallingStorage {
    params: SchemeParams,
    columns: Vec<VecDeque<Queued>>,
    occupancy: usize,
    loaded_count: u64,
    injected_count: u64,
    padding_count: u64,
    slot_clock: u64,
    residency_sum: u64,
}

impl FallingStorage {
    pub fn new(params: SchemeParams) -> Self {
        Self {
            params,
            columns: vec![VecDeque::new(); params.phi()],
            occupancy: 0,
            loaded_count: 0,
            injected_count: 0,
            padding_count: 0,
            slot_clock: 0,
            residency_sum: 0,
        }
    }

    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    pub fn occupancy(&self) -> usize {
        self.occupancy
    }

    pub fn loaded_count(&self) -> u64 {
        self.loaded_count
    }

    /// Genuine (non-padding) payloads emitted so far.
    pub fn injected_count(&self) -> u64 {
        self.injected_count
    }

    pub fn padding_count(&self) -> u64 {
        self.padding_count
    }

    /// Depth of column `index` (1-based).
    pub fn column_len(&self, index: usize) -> usize {
        self.columns[index - 1].len()
    }

    pub fn is_column_empty(&self, index: usize) -> bool {
        self.columns[index - 1].is_empty()
    }

    /// Mean number of slot times a genuine payload spent in storage, from its
    /// drop to its injection. `None` before the first injection.
    pub fn mean_residency_slots(&self) -> Option<f64> {
        (self.injected_count > 0).then(|| self.residency_sum as f64 / self.injected_count as f64)
    }

    /// Segments `bu` and stacks its payload on column `index`. Returns the index.
    pub fn drop_cb(&mut self, bu: &BitUnit) -> Result<usize> {
        let (ob, cb) = segment(bu, &self.params)?;
        let index = ob.to_index();
        self.columns[index - 1].push_back(Queued {
            payload: cb,
            ordinal: self.loaded_count,
            dropped_at: self.slot_clock,
        });
        self.loaded_count += 1;
        self.occupancy += 1;
        Ok(index)
    }

    /// Pulls up to `m_storage` BUs from `source`. Returns how many were loaded.
    pub fn accumulate<S: BuSource + ?Sized>(&mut self, source: &mut S) -> Result<usize> {
        let mut loaded = 0;
        while loaded < self.params.m_storage() {
            match source.next_bu() {
                Some(bu) => {
                    self.drop_cb(&bu)?;
                    loaded += 1;
                }
                None => break,
            }
        }
        Ok(loaded)
    }

    /// Injects TS_1..TS_phi, refilling from `source` after each genuine slot.
    pub fn inject_round<S: BuSource + ?Sized>(&mut self, source: &mut S) -> Result<Frame> {
        let phi = self.params.phi();
        let mut payloads = Vec::with_capacity(phi);
        let mut origins = Vec::with_capacity(phi);
        for col in 0..phi {
            self.slot_clock += 1;
            match self.columns[col].pop_front() {
                Some(q) => {
                    self.occupancy -= 1;
                    self.injected_count += 1;
                    self.residency_sum += self.slot_clock - q.dropped_at;
                    payloads.push(q.payload);
                    origins.push(Some(q.ordinal));
                    if let Some(bu) = source.next_bu() {
                        self.drop_cb(&bu)?;
                    }
                }
                None => {
                    self.padding_count += 1;
                    payloads.push(CbPayload::padding(&self.params));
                    origins.push(None);
                }
            }
        }
        Ok(Frame { payloads, origins })
    }

    /// Empties the storage with no further refill.
    pub fn drain(&mut self) -> Vec<Frame> {
        let mut frames = Vec::new();
        let mut empty = std::iter::empty::<BitUnit>();
        while self.occupancy > 0 {
            frames.push(
                self.inject_round(&mut empty)
                    .expect("no BUs are dropped while draining"),
            );
        }
        frames
    }
}

pub fn new_storage(params: SchemeParams) -> FallingStorage {
    FallingStorage::new(params)
}
