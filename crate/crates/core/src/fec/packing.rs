//! Concatenation of slot payloads into fixed-size information blocks.
//!
//! The tail block is zero-padded; its pad length travels with the stream
//! as side information and the pad bits are never counted as data.

use crate::falling_storage::Frame;

use super::ldpc::LdpcCode;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackedStream {
    pub block_len: usize,
    pub blocks: Vec<Vec<u8>>,
    /// Zero bits appended to the last block.
    pub pad_len: usize,
}

impl PackedStream {
    /// The original bit stream, pad removed.
    pub fn unpack(&self) -> Vec<u8> {
        let mut out: Vec<u8> = self.blocks.concat();
        out.truncate(out.len() - self.pad_len);
        out
    }
}

/// Incremental packer.
#[derive(Debug, Clone)]
pub struct BlockPacker {
    block_len: usize,
    buf: Vec<u8>,
}

impl BlockPacker {
    pub fn new(block_len: usize) -> Self {
        assert!(block_len > 0, "block length must be positive");
        Self {
            block_len,
            buf: Vec::with_capacity(block_len),
        }
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    /// Appends bits and returns every block completed by them.
    pub fn push(&mut self, bits: &[u8]) -> Vec<Vec<u8>> {
        let mut done = Vec::new();
        let mut rest = bits;
        while !rest.is_empty() {
            let take = (self.block_len - self.buf.len()).min(rest.len());
            self.buf.extend_from_slice(&rest[..take]);
            rest = &rest[take..];
            if self.buf.len() == self.block_len {
                done.push(std::mem::replace(&mut self.buf, Vec::with_capacity(self.block_len)));
            }
        }
        done
    }

    /// Bits waiting for a full block.
    pub fn pending(&self) -> usize {
        self.buf.len()
    }

    /// Zero-pads and returns the partial block, if any, with its pad length.
    pub fn finish(&mut self) -> Option<(Vec<u8>, usize)> {
        if self.buf.is_empty() {
            return None;
        }
        let pad = self.block_len - self.buf.len();
        let mut block = std::mem::take(&mut self.buf);
        block.resize(self.block_len, 0);
        Some((block, pad))
    }
}

pub fn pack_bits(bits: &[u8], block_len: usize) -> PackedStream {
    let mut packer = BlockPacker::new(block_len);
    let mut blocks = packer.push(bits);
    let pad_len = match packer.finish() {
        Some((block, pad)) => {
            blocks.push(block);
            pad
        }
        None => 0,
    };
    PackedStream {
        block_len,
        blocks,
        pad_len,
    }
}

/// Slot payloads in slot then frame order, packed into `block_len`-bit blocks.
pub fn pack_frames(frames: &[Frame], block_len: usize) -> PackedStream {
    let bits: Vec<u8> = frames
        .iter()
        .flat_map(|f| f.payloads().iter().flat_map(|p| p.bits().iter().copied()))
        .collect();
    pack_bits(&bits, block_len)
}

pub fn pack_frames_into_codewords(frames: &[Frame], code: &LdpcCode) -> PackedStream {
    pack_frames(frames, code.k_info())
}
