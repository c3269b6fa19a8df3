//! Bit-units and their split into an index-carried prefix and a payload.
//!
//! A bit-unit (BU) of `n_total` bits is cut into a leading pattern of
//! `k_ob` opportunistic bits and a trailing payload of `n_total - k_ob`
//! conventional bits. The opportunistic pattern is never transmitted: it
//! selects one of `phi = 2^k_ob` time slots, and the slot carries the payload.
//!
//! The pattern-to-slot table is natural binary order: the pattern read as a
//! big-endian unsigned integer `v` maps to slot `v + 1`. Both ends must share
//! this table.

use crate::error::{Error, Result};

/// Largest supported `k_ob`; slot indices are `usize` and we keep headroom.
pub const MAX_K_OB: usize = 32;

/// Segmentation and storage configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SchemeParams {
    n_total: usize,
    k_ob: usize,
    phi: usize,
    m_storage: usize,
}

impl SchemeParams {
    pub fn new(n_total: usize, k_ob: usize, m_storage: usize) -> Result<Self> {
        if n_total == 0 {
            return Err(Error::InvalidParams("n_total must be at least 1".into()));
        }
        if k_ob >= n_total {
            return Err(Error::InvalidParams(format!(
                "k_ob ({k_ob}) must be smaller than n_total ({n_total}); an empty payload is unsupported"
            )));
        }
        if k_ob > MAX_K_OB {
            return Err(Error::InvalidParams(format!(
                "k_ob ({k_ob}) exceeds the supported maximum of {MAX_K_OB}"
            )));
        }
        if m_storage == 0 {
            return Err(Error::InvalidParams("m_storage must be at least 1".into()));
        }
        Ok(Self {
            n_total,
            k_ob,
            phi: 1usize << k_ob,
            m_storage,
        })
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn k_ob(&self) -> usize {
        self.k_ob
    }

    /// Time slots per round, always `2^k_ob`.
    pub fn phi(&self) -> usize {
        self.phi
    }

    pub fn m_storage(&self) -> usize {
        self.m_storage
    }

    /// Bits carried in each slot.
    pub fn payload_len(&self) -> usize {
        self.n_total - self.k_ob
    }
}

pub fn make_scheme_params(n_total: usize, k_ob: usize, m_storage: usize) -> Result<SchemeParams> {
    SchemeParams::new(n_total, k_ob, m_storage)
}

fn check_binary(bits: &[u8]) -> Result<()> {
    match bits.iter().position(|&b| b > 1) {
        Some(position) => Err(Error::NonBinary {
            position,
            value: bits[position],
        }),
        None => Ok(()),
    }
}

/// An `n_total`-bit message.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitUnit {
    bits: Vec<u8>,
}

impl BitUnit {
    pub fn new(bits: Vec<u8>, params: &SchemeParams) -> Result<Self> {
        if bits.len() != params.n_total() {
            return Err(Error::LengthMismatch {
                expected: params.n_total(),
                actual: bits.len(),
            });
        }
        check_binary(&bits)?;
        Ok(Self { bits })
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Leading `k` bits as an opportunistic pattern.
    pub fn ob(&self, k_ob: usize) -> ObPattern {
        ObPattern {
            bits: self.bits[..k_ob].to_vec(),
        }
    }
}

/// The leading `k_ob` bits of a BU.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ObPattern {
    bits: Vec<u8>,
}

impl ObPattern {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.len() > MAX_K_OB {
            return Err(Error::InvalidParams(format!(
                "pattern of {} bits exceeds {MAX_K_OB}",
                bits.len()
            )));
        }
        check_binary(&bits)?;
        Ok(Self { bits })
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// 1-based slot index under the natural-binary table.
    pub fn to_index(&self) -> usize {
        ob_to_index(self)
    }
}

/// Slot content: the trailing `n_total - k_ob` bits of a BU, or zero fill.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CbPayload {
    bits: Vec<u8>,
    is_padding: bool,
}

impl CbPayload {
    pub fn new(bits: Vec<u8>, params: &SchemeParams) -> Result<Self> {
        if bits.len() != params.payload_len() {
            return Err(Error::LengthMismatch {
                expected: params.payload_len(),
                actual: bits.len(),
            });
        }
        check_binary(&bits)?;
        Ok(Self {
            bits,
            is_padding: false,
        })
    }

    /// All-zero fill injected for an empty column.
    pub fn padding(params: &SchemeParams) -> Self {
        Self {
            bits: vec![0; params.payload_len()],
            is_padding: true,
        }
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn is_padding(&self) -> bool {
        self.is_padding
    }

    pub fn into_bits(self) -> Vec<u8> {
        self.bits
    }
}

/// Splits a BU into its leading pattern and trailing payload.
pub fn segment(bu: &BitUnit, params: &SchemeParams) -> Result<(ObPattern, CbPayload)> {
    if bu.len() != params.n_total() {
        return Err(Error::LengthMismatch {
            expected: params.n_total(),
            actual: bu.len(),
        });
    }
    let (ob, cb) = bu.bits.split_at(params.k_ob());
    Ok((
        ObPattern { bits: ob.to_vec() },
        CbPayload {
            bits: cb.to_vec(),
            is_padding: false,
        },
    ))
}

pub fn ob_to_index(ob: &ObPattern) -> usize {
    ob.bits
        .iter()
        .fold(0usize, |acc, &b| (acc << 1) | usize::from(b))
        + 1
}

pub fn index_to_ob(index: usize, params: &SchemeParams) -> Result<ObPattern> {
    if index == 0 || index > params.phi() {
        return Err(Error::SlotIndexOutOfRange {
            index,
            phi: params.phi(),
        });
    }
    let v = index - 1;
    let k = params.k_ob();
    let bits = (0..k).map(|j| ((v >> (k - 1 - j)) & 1) as u8).collect();
    Ok(ObPattern { bits })
}

/// Rebuilds a BU from the slot it arrived in and the slot's content.
pub fn reassemble(index: usize, cb: &CbPayload, params: &SchemeParams) -> Result<BitUnit> {
    reassemble_bits(index, cb.bits(), params)
}

pub(crate) fn reassemble_bits(index: usize, payload: &[u8], params: &SchemeParams) -> Result<BitUnit> {
    if payload.len() != params.payload_len() {
        return Err(Error::LengthMismatch {
            expected: params.payload_len(),
            actual: payload.len(),
        });
    }
    let ob = index_to_ob(index, params)?;
    let mut bits = ob.bits;
    bits.extend_from_slice(payload);
    Ok(BitUnit { bits })
}
