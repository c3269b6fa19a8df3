//! Monte Carlo drivers for the proposed and conventional schemes.

use std::collections::{HashMap, VecDeque};
use std::time::Instant;

use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::report::{BerReport, PointResult};
use super::seed::{derive_seed, STREAM_NOISE, STREAM_SOURCE};
use crate::bitunit::{BitUnit, SchemeParams};
use crate::error::{Error, Result};
use crate::falling_storage::{BuSource, FallingStorage, RandomBuSource};
use crate::fec::{BlockPacker, Codec, LLR_CLAMP};
use crate::phy::{bpsk_modulate, noise_sigma, LinkBudget, NoiseModel, Scheme, SnrSpec, NOISE_GENERATOR};
use crate::receiver::SlotReceiver;

/// Resolves the operating point; `+inf` dB means a noiseless channel.
fn link_budget(snr: SnrSpec, params: &SchemeParams, rate: f64, scheme: Scheme) -> Result<(LinkBudget, bool)> {
    if snr.value_db == f64::INFINITY {
        let reference = noise_sigma(SnrSpec::new(0.0, snr.convention), params, rate, scheme)?;
        // Nominal sigma only scales the LLRs.
        return Ok((
            LinkBudget {
                sigma: 1.0,
                amplitude: reference.amplitude,
            },
            true,
        ));
    }
    Ok((noise_sigma(snr, params, rate, scheme)?, false))
}

/// Transmit chain from slot payloads to reconstructed BUs, with tallies.
struct Link<'a> {
    codec: &'a Codec,
    budget: LinkBudget,
    noise: Option<NoiseModel>,
    packer: BlockPacker,
    receiver: SlotReceiver,
    slot_log: VecDeque<Option<u64>>,
    tally: PointResult,
}

impl<'a> Link<'a> {
    fn send_slot(&mut self, bits: &[u8], origin: Option<u64>, truth: &mut HashMap<u64, BitUnit>) {
        self.slot_log.push_back(origin);
        if origin.is_none() {
            self.tally.padding += 1;
        }
        for block in self.packer.push(bits) {
            let len = block.len();
            self.transmit_block(block, len, truth);
        }
    }

    fn finish(&mut self, truth: &mut HashMap<u64, BitUnit>) {
        if let Some((block, pad)) = self.packer.finish() {
            let data = block.len() - pad;
            self.transmit_block(block, data, truth);
        }
    }

    fn transmit_block(&mut self, block: Vec<u8>, data_bits: usize, truth: &mut HashMap<u64, BitUnit>) {
        let codeword = self.codec.encode(&block);
        let symbols = bpsk_modulate(&codeword, self.budget.amplitude);
        self.tally.symbols += symbols.values.len() as u64;
        let received = match self.noise.as_mut() {
            Some(noise) => noise.apply(&symbols),
            None => symbols.values,
        };
        let decision = self.codec.decode(&received, self.budget);
        self.tally.blocks += 1;
        self.tally.converged_blocks += u64::from(decision.converged);
        for slot in self.receiver.push(&decision.info[..data_bits]) {
            let origin = self
                .slot_log
                .pop_front()
                .expect("every received slot was logged at transmit");
            let Some(ordinal) = origin else {
                continue;
            };
            let sent = truth.remove(&ordinal).expect("BU recorded at load time");
            let got = self.receiver.reconstruct(&slot);
            let errs = sent
                .bits()
                .iter()
                .zip(got.bits())
                .filter(|(a, b)| a != b)
                .count() as u64;
            self.tally.bus += 1;
            self.tally.bits += sent.len() as u64;
            self.tally.errors += errs;
            self.tally.bu_errors += u64::from(errs > 0);
        }
    }
}

/// Source wrapper that remembers every BU it hands out, keyed by load order.
struct Recording<'a> {
    inner: &'a mut RandomBuSource,
    truth: &'a mut HashMap<u64, BitUnit>,
    next: &'a mut u64,
}

impl BuSource for Recording<'_> {
    fn next_bu(&mut self) -> Option<BitUnit> {
        let bu = self.inner.next_bu()?;
        self.truth.insert(*self.next, bu.clone());
        *self.next += 1;
        Some(bu)
    }
}

fn scheme_tag(config: &ExperimentConfig) -> u64 {
    match (config.paired_noise, config.scheme) {
        (true, _) => 0,
        (false, Scheme::Proposed) => 1,
        (false, Scheme::Conventional) => 2,
    }
}

fn run_point(config: &ExperimentConfig, codec: &Codec, index: usize) -> Result<PointResult> {
    let started = Instant::now();
    let snr = config.snr_grid[index];
    let params = config.params;
    let (budget, noiseless) = link_budget(snr, &params, codec.rate(), config.scheme)?;
    let tag = scheme_tag(config);
    let noise = if noiseless {
        None
    } else {
        Some(NoiseModel::new(
            budget.sigma,
            derive_seed(config.master_seed, &[tag, index as u64, 0, STREAM_NOISE]),
        )?)
    };
    let mut source = RandomBuSource::new(
        params,
        derive_seed(config.master_seed, &[tag, index as u64, 0, STREAM_SOURCE]),
        Some(config.n_bus),
    );
    // Conventional slots are whole BUs: a zero-length prefix and one slot per round.
    let rx_params = match config.scheme {
        Scheme::Proposed => params,
        Scheme::Conventional => SchemeParams::new(params.n_total(), 0, 1)?,
    };
    let mut link = Link {
        codec,
        budget,
        noise,
        packer: BlockPacker::new(codec.block_len(rx_params.payload_len())),
        receiver: SlotReceiver::new(rx_params),
        slot_log: VecDeque::new(),
        tally: PointResult {
            snr,
            scheme: config.scheme,
            bits: 0,
            errors: 0,
            bus: 0,
            bu_errors: 0,
            padding: 0,
            symbols: 0,
            blocks: 0,
            converged_blocks: 0,
            wall_clock: Default::default(),
        },
    };
    let mut truth = HashMap::new();
    let mut next = 0u64;

    match config.scheme {
        Scheme::Proposed => {
            let mut storage = FallingStorage::new(params);
            storage.accumulate(&mut Recording {
                inner: &mut source,
                truth: &mut truth,
                next: &mut next,
            })?;
            while storage.occupancy() > 0 {
                let frame = storage.inject_round(&mut Recording {
                    inner: &mut source,
                    truth: &mut truth,
                    next: &mut next,
                })?;
                for (payload, origin) in frame.payloads().iter().zip(frame.origins()) {
                    link.send_slot(payload.bits(), *origin, &mut truth);
                }
                if link.tally.errors >= config.min_errors {
                    source.exhaust();
                }
            }
        }
        Scheme::Conventional => {
            while let Some(bu) = source.next_bu() {
                truth.insert(next, bu);
                let bits = truth[&next].bits().to_vec();
                link.send_slot(&bits, Some(next), &mut truth);
                next += 1;
                if link.tally.errors >= config.min_errors {
                    source.exhaust();
                }
            }
        }
    }
    link.finish(&mut truth);
    debug_assert!(truth.is_empty() && link.slot_log.is_empty());
    let mut tally = link.tally;
    tally.wall_clock = started.elapsed();
    Ok(tally)
}

/// Runs every SNR point of `config` for its configured scheme.
pub fn run_ber(config: &ExperimentConfig) -> Result<BerReport> {
    config.validate()?;
    let codec = config.code.build()?;
    let points = (0..config.snr_grid.len())
        .into_par_iter()
        .map(|i| run_point(config, &codec, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(BerReport {
        config: config.clone(),
        points,
        noise_generator: NOISE_GENERATOR,
        llr_clamp: matches!(codec, Codec::Ldpc { .. }).then_some(LLR_CLAMP),
        code_label: codec.label().to_string(),
    })
}

pub fn run_proposed(config: &ExperimentConfig) -> Result<BerReport> {
    if config.scheme != Scheme::Proposed {
        return Err(Error::Config("run_proposed needs scheme = proposed".into()));
    }
    run_ber(config)
}

pub fn run_conventional(config: &ExperimentConfig) -> Result<BerReport> {
    if config.scheme != Scheme::Conventional {
        return Err(Error::Config("run_conventional needs scheme = conventional".into()));
    }
    run_ber(config)
}

/// Channel symbols spent per BU on an uncoded link.
pub fn symbols_per_bu(params: &SchemeParams, scheme: Scheme) -> usize {
    match scheme {
        Scheme::Proposed => params.payload_len(),
        Scheme::Conventional => params.n_total(),
    }
}
