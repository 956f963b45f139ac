//! Rate-1/2 convolutional code, constraint length 7, generators 133/171
//! octal, tail-bit terminated, with soft-decision Viterbi decoding.

use serde::{Deserialize, Serialize};

use super::PhyError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FecConfig {
    None,
    ConvolutionalHalfRate,
}

impl FecConfig {
    /// Coded length for a payload of `k` bits.
    pub fn coded_len(self, k: usize) -> usize {
        match self {
            FecConfig::None => k,
            FecConfig::ConvolutionalHalfRate => 2 * (k + TAIL_BITS),
        }
    }
}

const CONSTRAINT: usize = 7;
const TAIL_BITS: usize = CONSTRAINT - 1;
const STATES: usize = 1 << TAIL_BITS;
const G1: u32 = 0o133;
const G2: u32 = 0o171;

/// The 7-bit encoder window: current input in bit 6, previous inputs below,
/// most recent first.
fn branch_output(window: u32) -> (u8, u8) {
    (
        ((window & G1).count_ones() & 1) as u8,
        ((window & G2).count_ones() & 1) as u8,
    )
}

/// Shift-register encoding with six appended tail zeros; identity for
/// [`FecConfig::None`]. Output is 2*(k+6) bits, the 133-generator bit first
/// for each input bit.
pub fn fec_encode(bits: &[u8], cfg: FecConfig) -> Vec<u8> {
    if cfg == FecConfig::None {
        return bits.to_vec();
    }
    let mut out = Vec::with_capacity(cfg.coded_len(bits.len()));
    let mut state = 0u32;
    for &u in bits.iter().chain(std::iter::repeat_n(&0, TAIL_BITS)) {
        let window = (u32::from(u) << TAIL_BITS) | state;
        let (c1, c2) = branch_output(window);
        out.push(c1);
        out.push(c2);
        state = window >> 1;
    }
    out
}

/// Soft-decision Viterbi decoding over the 64-state trellis, terminated at
/// the zero state. `llrs` are positive for bit 0; returns the k payload
/// bits.
///
/// Transitions: predecessor `s` with input `u` reaches `s' = (u<<5)|(s>>1)`,
/// so `u` is recovered from the top bit of `s'` during traceback and only
/// the predecessor's shifted-out bit needs to be stored per state and step.
pub fn fec_decode(llrs: &[f64], cfg: FecConfig) -> Result<Vec<u8>, PhyError> {
    debug_assert_eq!(cfg, FecConfig::ConvolutionalHalfRate);
    if llrs.len() % 2 != 0 || llrs.len() / 2 <= TAIL_BITS {
        return Err(PhyError::MalformedLength(llrs.len()));
    }
    let steps = llrs.len() / 2;

    let mut metric = [f64::NEG_INFINITY; STATES];
    metric[0] = 0.0;
    let mut shifted_out = vec![[0u8; STATES]; steps];

    for (t, step) in llrs.chunks_exact(2).enumerate() {
        let mut next = [f64::NEG_INFINITY; STATES];
        for state in 0..STATES as u32 {
            let m = metric[state as usize];
            if m == f64::NEG_INFINITY {
                continue;
            }
            for u in 0..=1u32 {
                let window = (u << TAIL_BITS) | state;
                let (c1, c2) = branch_output(window);
                let gain = (1.0 - 2.0 * f64::from(c1)) * step[0]
                    + (1.0 - 2.0 * f64::from(c2)) * step[1];
                let to = (window >> 1) as usize;
                if m + gain > next[to] {
                    next[to] = m + gain;
                    shifted_out[t][to] = (state & 1) as u8;
                }
            }
        }
        metric = next;
    }

    // Tail termination: trace back from the zero state.
    let mut bits = vec![0u8; steps];
    let mut state = 0u32;
    for t in (0..steps).rev() {
        bits[t] = (state >> (TAIL_BITS - 1)) as u8;
        state = ((state & ((STATES as u32 >> 1) - 1)) << 1) | u32::from(shifted_out[t][state as usize]);
    }
    bits.truncate(steps - TAIL_BITS);
    Ok(bits)
}
