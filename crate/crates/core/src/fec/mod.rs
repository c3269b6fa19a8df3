//! Channel coding: uncoded passthrough and binary LDPC.

pub mod alist;
pub mod gf2;
pub mod ldpc;
pub mod packing;

use std::sync::Arc;

pub use alist::{parse_alist_matrix, SparseH};
pub use ldpc::{derive_encoder, parse_alist, sum_product_decode, DecodeResult, LdpcCode, DEFAULT_MAX_ITERS, LLR_CLAMP};
pub use packing::{pack_bits, pack_frames, pack_frames_into_codewords, BlockPacker, PackedStream};

use crate::phy::{hard_decision, soft_llr, LinkBudget};

/// Identity coding for R = 1.
pub fn rate1_passthrough(bits: &[u8]) -> Vec<u8> {
    bits.to_vec()
}

/// The coding stage of a link.
#[derive(Debug, Clone)]
pub enum Codec {
    /// Uncoded, hard-decision detection.
    Rate1,
    /// LDPC with sum-product decoding.
    Ldpc { code: Arc<LdpcCode>, max_iters: usize },
}

/// Output of one block through the decoder.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDecision {
    pub info: Vec<u8>,
    pub converged: bool,
}

impl Codec {
    pub fn rate(&self) -> f64 {
        match self {
            Codec::Rate1 => 1.0,
            Codec::Ldpc { code, .. } => code.rate(),
        }
    }

    /// Information bits per block. Uncoded links use one slot per block so
    /// nothing is ever padded.
    pub fn block_len(&self, slot_len: usize) -> usize {
        match self {
            Codec::Rate1 => slot_len,
            Codec::Ldpc { code, .. } => code.k_info(),
        }
    }

    pub fn encode(&self, info: &[u8]) -> Vec<u8> {
        match self {
            Codec::Rate1 => rate1_passthrough(info),
            Codec::Ldpc { code, .. } => code.encode(info),
        }
    }

    pub fn decode(&self, received: &[f64], link: LinkBudget) -> BlockDecision {
        match self {
            Codec::Rate1 => BlockDecision {
                info: hard_decision(received),
                converged: true,
            },
            Codec::Ldpc { code, max_iters } => {
                let llrs = soft_llr(received, link.sigma, link.amplitude);
                let out = sum_product_decode(code, &llrs, *max_iters);
                BlockDecision {
                    info: out.bits,
                    converged: out.converged,
                }
            }
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Codec::Rate1 => "rate1",
            Codec::Ldpc { .. } => "ldpc",
        }
    }
}
