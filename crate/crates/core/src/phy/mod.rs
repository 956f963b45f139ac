//! Baseband transmit/receive chain: modulation, spreading, superposition,
//! AWGN, despreading with integrate-and-dump, demodulation.
//!
//! Chips are real ±1 multiplying complex symbols; one sample per chip, no
//! pulse shaping. Noise is complex circular Gaussian for both schemes; BPSK
//! discards the imaginary part at the decision.

mod fec;

pub use fec::{fec_decode, fec_encode, FecConfig};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::codes::ChipSequence;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PhyError {
    #[error("QPSK needs an even number of bits, got {0}")]
    OddBitCount(usize),
    #[error("bit count {0} is not a multiple of {1}")]
    BitCountMismatch(usize, usize),
    #[error("signal lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("cannot superpose an empty signal list")]
    EmptyList,
    #[error("llr count {0} is not 2*(k+6) for any k >= 1")]
    MalformedLength(usize),
}

pub type Symbol = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModulationScheme {
    Bpsk,
    Qpsk,
}

impl ModulationScheme {
    pub fn bits_per_symbol(self) -> usize {
        match self {
            ModulationScheme::Bpsk => 1,
            ModulationScheme::Qpsk => 2,
        }
    }
}

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Maps bits to unit-energy symbols. BPSK: 0 -> +1, 1 -> -1. QPSK is Gray
/// mapped on bit pairs (b0, b1): b0 selects the sign of I, b1 the sign of Q,
/// 0 -> positive.
pub fn modulate(bits: &[u8], scheme: ModulationScheme) -> Result<Vec<Symbol>, PhyError> {
    match scheme {
        ModulationScheme::Bpsk => Ok(bits
            .iter()
            .map(|&b| Complex64::new(if b == 0 { 1.0 } else { -1.0 }, 0.0))
            .collect()),
        ModulationScheme::Qpsk => {
            if bits.len() % 2 != 0 {
                return Err(PhyError::OddBitCount(bits.len()));
            }
            Ok(bits
                .chunks_exact(2)
                .map(|pair| {
                    let re = if pair[0] == 0 { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 };
                    let im = if pair[1] == 0 { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 };
                    Complex64::new(re, im)
                })
                .collect())
        }
    }
}

/// Minimum-distance hard decisions inverting [`modulate`].
pub fn demodulate_hard(symbols: &[Symbol], scheme: ModulationScheme) -> Vec<u8> {
    let mut bits = Vec::with_capacity(symbols.len() * scheme.bits_per_symbol());
    for s in symbols {
        match scheme {
            ModulationScheme::Bpsk => bits.push(u8::from(s.re < 0.0)),
            ModulationScheme::Qpsk => {
                bits.push(u8::from(s.re < 0.0));
                bits.push(u8::from(s.im < 0.0));
            }
        }
    }
    bits
}

/// Per-bit soft metrics: scaled projections on the I/Q axes, positive for
/// bit 0. The uniform positive scale is irrelevant to the max-likelihood
/// Viterbi path, so the noise density is not needed here.
pub fn demodulate_soft(symbols: &[Symbol], scheme: ModulationScheme) -> Vec<f64> {
    let mut llrs = Vec::with_capacity(symbols.len() * scheme.bits_per_symbol());
    for s in symbols {
        match scheme {
            ModulationScheme::Bpsk => llrs.push(4.0 * s.re),
            ModulationScheme::Qpsk => {
                llrs.push(4.0 * s.re);
                llrs.push(4.0 * s.im);
            }
        }
    }
    llrs
}

/// Spreads symbols with a code: the Kronecker product of the symbol vector
/// with the chip vector.
pub fn spread(symbols: &[Symbol], code: &ChipSequence) -> Vec<Complex64> {
    let mut signal = Vec::with_capacity(symbols.len() * code.len());
    for s in symbols {
        for &c in code.chips() {
            signal.push(s * f64::from(c));
        }
    }
    signal
}

/// Elementwise complex sum of equal-length signals.
pub fn superpose(signals: &[Vec<Complex64>]) -> Result<Vec<Complex64>, PhyError> {
    let first = signals.first().ok_or(PhyError::EmptyList)?;
    let mut sum = first.clone();
    for s in &signals[1..] {
        if s.len() != sum.len() {
            return Err(PhyError::LengthMismatch(sum.len(), s.len()));
        }
        for (acc, x) in sum.iter_mut().zip(s) {
            *acc += x;
        }
    }
    Ok(sum)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SnrReference {
    /// Noise sized against unit chip energy: N0 = 10^(-snr/10).
    Chip,
    /// Noise sized so the post-despread symbol SNR equals snr_db:
    /// N0 = SF * 10^(-snr/10).
    Symbol,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    /// Signal to noise ratio in dB; +infinity disables noise.
    pub snr_db: f64,
    pub snr_reference: SnrReference,
}

impl ChannelConfig {
    pub fn noiseless(&self) -> bool {
        self.snr_db.is_infinite() && self.snr_db > 0.0
    }

    /// One-sided noise density N0 for the configured reference.
    pub fn noise_density(&self, sf: usize) -> f64 {
        if self.noiseless() {
            return 0.0;
        }
        let linear = 10f64.powf(-self.snr_db / 10.0);
        match self.snr_reference {
            SnrReference::Chip => linear,
            SnrReference::Symbol => sf as f64 * linear,
        }
    }
}

/// Adds independent complex Gaussian noise, per-dimension variance N0/2.
pub fn awgn<R: Rng + ?Sized>(
    signal: &[Complex64],
    ch: &ChannelConfig,
    sf: usize,
    rng: &mut R,
) -> Vec<Complex64> {
    let n0 = ch.noise_density(sf);
    if n0 == 0.0 {
        return signal.to_vec();
    }
    let sigma = (n0 / 2.0).sqrt();
    signal
        .iter()
        .map(|&s| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            s + Complex64::new(sigma * re, sigma * im)
        })
        .collect()
}

/// Despreads by the Hadamard product with the repeated code followed by
/// integrate-and-dump: per-symbol block sums divided by the spreading
/// factor.
pub fn despread(signal: &[Complex64], code: &ChipSequence) -> Result<Vec<Symbol>, PhyError> {
    let sf = code.len();
    if signal.len() % sf != 0 {
        return Err(PhyError::LengthMismatch(signal.len(), sf));
    }
    Ok(signal
        .chunks_exact(sf)
        .map(|block| {
            let sum: Complex64 = block
                .iter()
                .zip(code.chips())
                .map(|(&x, &c)| x * f64::from(c))
                .sum();
            sum / sf as f64
        })
        .collect())
}
