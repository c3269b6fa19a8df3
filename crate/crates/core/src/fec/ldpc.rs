//! Binary LDPC codes: systematic encoding from a parity-check matrix and
//! flooding sum-product decoding.

use std::sync::OnceLock;

use super::alist::{parse_alist_matrix, SparseH};
use super::gf2::{pack_words, parity_of_and, BitMatrix};
use crate::error::Result;

/// Magnitude bound applied to variable-to-check messages before the tanh
/// rule, and to check-to-variable messages after it.
pub const LLR_CLAMP: f64 = 25.0;

pub const DEFAULT_MAX_ITERS: usize = 50;

const SHIPPED_1296_R12: &str = include_str!("../../data/wifi_1296_r12.alist");

#[derive(Debug, Clone, PartialEq, Eq)]
struct Encoder {
    /// Codeword positions holding the information bits, ascending.
    info_positions: Vec<usize>,
    /// Codeword position of each parity bit.
    parity_positions: Vec<usize>,
    /// For each parity bit, its dependence on the information bits.
    parity_rows: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LdpcCode {
    h: SparseH,
    rank: usize,
    encoder: Option<Encoder>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    /// Decoded information bits.
    pub bits: Vec<u8>,
    /// Full hard-decision codeword.
    pub codeword: Vec<u8>,
    pub converged: bool,
    pub iterations_used: usize,
}

fn dense(h: &SparseH) -> BitMatrix {
    let mut m = BitMatrix::zeros(h.m_checks, h.n_code);
    for (r, row) in h.rows.iter().enumerate() {
        for &c in row {
            m.set(r, c, true);
        }
    }
    m
}

/// Parses an alist text into a code; the encoder is not yet derived.
pub fn parse_alist(text: &str) -> Result<LdpcCode> {
    Ok(LdpcCode::from_matrix(parse_alist_matrix(text)?))
}

/// Fills in the systematic encoder by Gauss-Jordan elimination of H.
pub fn derive_encoder(mut code: LdpcCode) -> LdpcCode {
    if code.encoder.is_some() {
        return code;
    }
    let mut m = dense(&code.h);
    let pivots = m.rref();
    let n = code.h.n_code;
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let info_positions: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    // Row r of the reduced matrix reads c[pivot_r] = sum_j R[r][info_j] c[info_j].
    let parity_rows = (0..pivots.len())
        .map(|r| {
            let row_bits: Vec<u8> = info_positions.iter().map(|&c| u8::from(m.get(r, c))).collect();
            pack_words(&row_bits)
        })
        .collect();
    code.rank = pivots.len();
    code.encoder = Some(Encoder {
        info_positions,
        parity_positions: pivots,
        parity_rows,
    });
    code
}

impl LdpcCode {
    pub fn from_matrix(h: SparseH) -> Self {
        let rank = dense(&h).rank();
        Self {
            h,
            rank,
            encoder: None,
        }
    }

    /// Parses and derives the encoder in one step.
    pub fn from_alist(text: &str) -> Result<Self> {
        Ok(derive_encoder(parse_alist(text)?))
    }

    /// Rate-1/2 quasi-cyclic code of length 1296 (802.11n-style base
    /// matrix, lifting size 54), shipped with the crate.
    pub fn shipped_1296_rate_half() -> &'static LdpcCode {
        static CODE: OnceLock<LdpcCode> = OnceLock::new();
        CODE.get_or_init(|| LdpcCode::from_alist(SHIPPED_1296_R12).expect("shipped alist is valid"))
    }

    pub fn shipped_alist_text() -> &'static str {
        SHIPPED_1296_R12
    }

    pub fn h(&self) -> &SparseH {
        &self.h
    }

    pub fn n_code(&self) -> usize {
        self.h.n_code
    }

    pub fn m_checks(&self) -> usize {
        self.h.m_checks
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Effective information length, `n_code - rank(H)`.
    pub fn k_info(&self) -> usize {
        self.h.n_code - self.rank
    }

    pub fn rate(&self) -> f64 {
        self.k_info() as f64 / self.n_code() as f64
    }

    pub fn has_encoder(&self) -> bool {
        self.encoder.is_some()
    }

    pub fn info_positions(&self) -> Option<&[usize]> {
        self.encoder.as_ref().map(|e| e.info_positions.as_slice())
    }

    /// Systematic encoding of `info` (`k_info` bits).
    ///
    /// Panics if the encoder has not been derived or `info` has the wrong length.
    pub fn encode(&self, info: &[u8]) -> Vec<u8> {
        let enc = self.encoder.as_ref().expect("derive_encoder must run before encode");
        assert_eq!(info.len(), enc.info_positions.len(), "info length must equal k_info");
        let mut cw = vec![0u8; self.n_code()];
        for (&pos, &b) in enc.info_positions.iter().zip(info) {
            cw[pos] = b;
        }
        let packed = pack_words(info);
        for (&pos, row) in enc.parity_positions.iter().zip(&enc.parity_rows) {
            cw[pos] = parity_of_and(row, &packed);
        }
        cw
    }

    /// Information bits of a codeword.
    pub fn extract_info(&self, codeword: &[u8]) -> Vec<u8> {
        let enc = self.encoder.as_ref().expect("derive_encoder must run first");
        enc.info_positions.iter().map(|&p| codeword[p]).collect()
    }

    /// True if every parity check is satisfied.
    pub fn is_codeword(&self, word: &[u8]) -> bool {
        self.h
            .rows
            .iter()
            .all(|row| row.iter().fold(0u8, |acc, &v| acc ^ word[v]) == 0)
    }
}

/// Message memory for one decode.
struct Workspace {
    // Edges are stored check-major: check r owns edge range row_start[r]..row_start[r+1].
    row_start: Vec<usize>,
    edge_var: Vec<usize>,
    // Edge ids of each variable.
    var_edges: Vec<Vec<usize>>,
    v2c: Vec<f64>,
    c2v: Vec<f64>,
    tanh_buf: Vec<f64>,
    posterior: Vec<f64>,
}

impl Workspace {
    fn new(h: &SparseH) -> Self {
        let mut row_start = Vec::with_capacity(h.m_checks + 1);
        let mut edge_var = Vec::with_capacity(h.edges());
        let mut var_edges = vec![Vec::new(); h.n_code];
        row_start.push(0);
        for row in &h.rows {
            for &v in row {
                var_edges[v].push(edge_var.len());
                edge_var.push(v);
            }
            row_start.push(edge_var.len());
        }
        let e = edge_var.len();
        let max_row = h.rows.iter().map(Vec::len).max().unwrap_or(0);
        Self {
            row_start,
            edge_var,
            var_edges,
            v2c: vec![0.0; e],
            c2v: vec![0.0; e],
            tanh_buf: vec![0.0; max_row],
            posterior: vec![0.0; h.n_code],
        }
    }

    fn check_update(&mut self) {
        let bound = (LLR_CLAMP / 2.0).tanh();
        for r in 0..self.row_start.len() - 1 {
            let (s, e) = (self.row_start[r], self.row_start[r + 1]);
            let deg = e - s;
            let t = &mut self.tanh_buf[..deg];
            for (k, slot) in t.iter_mut().enumerate() {
                *slot = (self.v2c[s + k].clamp(-LLR_CLAMP, LLR_CLAMP) / 2.0).tanh();
            }
            // Leave-one-out products: prefix pass writes into c2v, suffix pass finishes.
            let mut prefix = 1.0;
            for (out, &tk) in self.c2v[s..e].iter_mut().zip(t.iter()) {
                *out = prefix;
                prefix *= tk;
            }
            let mut suffix = 1.0;
            for k in (0..deg).rev() {
                let prod = (self.c2v[s + k] * suffix).clamp(-bound, bound);
                self.c2v[s + k] = 2.0 * prod.atanh();
                suffix *= t[k];
            }
        }
    }

    fn variable_update(&mut self, llrs: &[f64]) {
        for (v, edges) in self.var_edges.iter().enumerate() {
            let total = llrs[v] + edges.iter().map(|&e| self.c2v[e]).sum::<f64>();
            self.posterior[v] = total;
            for &e in edges {
                self.v2c[e] = total - self.c2v[e];
            }
        }
    }
}

/// Flooding belief propagation with the tanh check rule.
///
/// Positive LLRs favour bit 0. A posterior of exactly zero carries no
/// decision, so decoding only converges once every posterior is nonzero and
/// the hard decision satisfies all checks.
pub fn sum_product_decode(code: &LdpcCode, llrs: &[f64], max_iters: usize) -> DecodeResult {
    assert_eq!(llrs.len(), code.n_code(), "one LLR per code bit");
    let max_iters = max_iters.max(1);
    let mut ws = Workspace::new(&code.h);
    for (e, &v) in ws.edge_var.iter().enumerate() {
        ws.v2c[e] = llrs[v];
    }
    let mut hard = vec![0u8; code.n_code()];
    let mut converged = false;
    let mut iterations_used = 0;
    for it in 1..=max_iters {
        iterations_used = it;
        ws.check_update();
        ws.variable_update(llrs);
        let mut undecided = false;
        for (h, &p) in hard.iter_mut().zip(&ws.posterior) {
            *h = u8::from(p < 0.0);
            undecided |= p == 0.0;
        }
        if !undecided && code.is_codeword(&hard) {
            converged = true;
            break;
        }
    }
    let bits = match code.encoder {
        Some(_) => code.extract_info(&hard),
        None => Vec::new(),
    };
    DecodeResult {
        bits,
        codeword: hard,
        converged,
        iterations_used,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const TOY: &str = "4 2\n1 2\n1 1 1 1\n2 2\n1\n1\n2\n2\n1 2\n3 4\n";

    #[test]
    fn toy_dimensions_and_encoder() {
        let code = derive_encoder(parse_alist(TOY).unwrap());
        assert_eq!(code.n_code(), 4);
        assert_eq!(code.k_info(), 2);
        // Exhaustive: every info word gives a codeword, and distinct words differ.
        let mut seen = std::collections::HashSet::new();
        for u in 0..4u8 {
            let info = vec![u >> 1 & 1, u & 1];
            let cw = code.encode(&info);
            assert!(code.is_codeword(&cw));
            assert_eq!(code.extract_info(&cw), info);
            assert!(seen.insert(cw));
        }
        let cw = code.encode(&[1, 0]);
        assert_eq!(cw.iter().filter(|&&b| b == 1).count(), 2);
        assert_eq!(code.encode(&[0, 0]), vec![0; 4]);
    }

    #[test]
    fn rank_deficient_reports_effective_dimension() {
        // Third row is the sum of the first two.
        let h = SparseH::from_rows(5, vec![vec![0, 1], vec![1, 2, 3], vec![0, 2, 3], vec![3, 4]]);
        let code = derive_encoder(LdpcCode::from_matrix(h));
        assert_eq!(code.rank(), 3);
        assert_eq!(code.k_info(), 2);
        for u in 0..4u8 {
            assert!(code.is_codeword(&code.encode(&[u & 1, u >> 1])));
        }
    }

    #[test]
    fn shipped_code_dimensions() {
        let code = LdpcCode::shipped_1296_rate_half();
        assert_eq!(code.n_code(), 1296);
        assert_eq!(code.m_checks(), 648);
        assert_eq!(code.k_info(), 648);
        assert_eq!(code.rate(), 0.5);
    }

    #[test]
    fn noiseless_decode_is_immediate() {
        let code = LdpcCode::shipped_1296_rate_half();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let info: Vec<u8> = (0..code.k_info()).map(|_| rng.random_range(0..2u8)).collect();
        let cw = code.encode(&info);
        let llrs: Vec<f64> = cw.iter().map(|&b| if b == 0 { 20.0 } else { -20.0 }).collect();
        let out = sum_product_decode(code, &llrs, 50);
        assert!(out.converged);
        assert_eq!(out.iterations_used, 1);
        assert_eq!(out.bits, info);
    }

    #[test]
    fn zero_llrs_do_not_converge() {
        let code = LdpcCode::shipped_1296_rate_half();
        let out = sum_product_decode(code, &vec![0.0; 1296], 7);
        assert!(!out.converged);
        assert_eq!(out.iterations_used, 7);

        let toy = LdpcCode::from_alist(TOY).unwrap();
        assert!(!sum_product_decode(&toy, &[0.0; 4], 3).converged);
    }

    #[test]
    fn corrects_noisy_word_at_moderate_snr() {
        // Es/N0 = 2 dB on a rate-1/2 code is well above threshold.
        let code = LdpcCode::shipped_1296_rate_half();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let sigma = (0.5f64 / 10f64.powf(0.2)).sqrt();
        let mut flipped = 0;
        for _ in 0..5 {
            let info: Vec<u8> = (0..648).map(|_| rng.random_range(0..2u8)).collect();
            let cw = code.encode(&info);
            let llrs: Vec<f64> = cw
                .iter()
                .map(|&b| {
                    let x = if b == 0 { 1.0 } else { -1.0 };
                    let n: f64 = rng.sample(rand_distr::StandardNormal);
                    let y = x + sigma * n;
                    flipped += usize::from((y < 0.0) != (b == 1));
                    2.0 * y / (sigma * sigma)
                })
                .collect();
            let out = sum_product_decode(code, &llrs, 50);
            assert!(out.converged);
            assert_eq!(out.bits, info);
        }
        assert!(flipped > 50, "channel should have introduced errors");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn shipped_encoder_satisfies_checks(seed in any::<u64>()) {
            let code = LdpcCode::shipped_1296_rate_half();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let info: Vec<u8> = (0..code.k_info()).map(|_| rng.random_range(0..2u8)).collect();
            let cw = code.encode(&info);
            prop_assert!(code.is_codeword(&cw));
            prop_assert_eq!(code.extract_info(&cw), info);
        }
    }
}
