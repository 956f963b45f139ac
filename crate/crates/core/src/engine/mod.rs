//! Monte Carlo link-level simulation engine.
//!
//! Every iteration is an independent unit of work: per-user transmit
//! decisions, payload bits and channel noise all come from counter-keyed
//! substreams of the scenario seed, and the per-user counts are combined by
//! plain addition, so the result is identical on any worker schedule.

mod report;
pub mod rng;
pub mod stats;
mod sweep;

pub use report::{BerReport, ClassSummary, UserTally};
pub use sweep::{preset_sweep, run_sweep, LabeledSweep, Preset, SweepParameter, SweepPoint};

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{ChipSequence, CodeError};
use crate::phy::{self, ChannelConfig, FecConfig, ModulationScheme, PhyError};
use crate::tree::{CodeTree, NodeAddress, TrafficClass, TreeError};

use rng::{substream, StreamPurpose};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EngineError {
    #[error("adjusted sending probability {0} exceeds 1")]
    ProbabilityOverflow(f64),
    #[error("invalid scenario: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Phy(#[from] PhyError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// One simulated transmitter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserSpec {
    pub id: u64,
    pub class: TrafficClass,
    pub sending_probability: f64,
    pub code: NodeAddress,
    pub fec: FecConfig,
    pub modulation: ModulationScheme,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioMode {
    Proposed,
    HadamardBaseline,
}

/// Full description of one simulated system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub sf: usize,
    pub users: Vec<UserSpec>,
    pub channel: ChannelConfig,
    pub iterations: u64,
    /// Payload bits per packet, before FEC.
    pub packet_bits: usize,
    pub seed: u64,
    pub mode: ScenarioMode,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        let bad = |msg: String| Err(EngineError::InvalidConfig(msg));
        if !self.sf.is_power_of_two() {
            return bad(format!("sf {} is not a power of two", self.sf));
        }
        if self.iterations == 0 {
            return bad("iterations must be positive".into());
        }
        if self.packet_bits == 0 {
            return bad("packet_bits must be positive".into());
        }
        let tree = CodeTree::new(self.sf.trailing_zeros())?;
        let mut seen = std::collections::BTreeSet::new();
        for user in &self.users {
            if !(0.0..=1.0).contains(&user.sending_probability) {
                return bad(format!(
                    "sending probability {} of user {} is outside [0,1]",
                    user.sending_probability, user.id
                ));
            }
            if !seen.insert(user.code) {
                return bad(format!("code {:?} assigned twice", user.code));
            }
            tree.code_of(&user.code)?;
            let coded = user.fec.coded_len(self.packet_bits);
            if coded % user.modulation.bits_per_symbol() != 0 {
                return bad(format!(
                    "coded length {} of user {} is not a whole number of symbols",
                    coded, user.id
                ));
            }
        }
        Ok(())
    }
}

/// The sending probability a pure Hadamard reference needs to carry the
/// same offered load: (n_users / n_hadamard) * p.
pub fn adjusted_sending_probability(n_u: usize, n_h: usize, p_s: f64) -> Result<f64, EngineError> {
    if n_h == 0 {
        return Err(EngineError::InvalidConfig("baseline user count is zero".into()));
    }
    if !(0.0..=1.0).contains(&p_s) {
        return Err(EngineError::InvalidConfig(format!("probability {p_s} outside [0,1]")));
    }
    let adjusted = n_u as f64 / n_h as f64 * p_s;
    if adjusted > 1.0 {
        return Err(EngineError::ProbabilityOverflow(adjusted));
    }
    Ok(adjusted)
}

/// A comparison scenario on a pure Hadamard set: SF users, one per matrix
/// row, all with the adjusted sending probability.
pub fn hadamard_baseline_scenario(cfg: &ScenarioConfig) -> Result<ScenarioConfig, EngineError> {
    if cfg.mode != ScenarioMode::Proposed {
        return Err(EngineError::InvalidConfig(
            "baseline is derived from a proposed-mode scenario".into(),
        ));
    }
    let first = cfg
        .users
        .first()
        .ok_or_else(|| EngineError::InvalidConfig("scenario has no users".into()))?;
    if cfg
        .users
        .iter()
        .any(|u| u.sending_probability != first.sending_probability)
    {
        return Err(EngineError::InvalidConfig(
            "baseline requires a uniform sending probability".into(),
        ));
    }
    let adjusted = adjusted_sending_probability(cfg.users.len(), cfg.sf, first.sending_probability)?;
    let layer = cfg.sf.trailing_zeros();
    let users = (0..cfg.sf)
        .map(|i| UserSpec {
            id: i as u64,
            class: TrafficClass::MachineType,
            sending_probability: adjusted,
            code: NodeAddress::new(layer, i as u32, 0),
            fec: first.fec,
            modulation: first.modulation,
        })
        .collect();
    Ok(ScenarioConfig {
        sf: cfg.sf,
        users,
        channel: cfg.channel,
        iterations: cfg.iterations,
        packet_bits: cfg.packet_bits,
        seed: cfg.seed,
        mode: ScenarioMode::HadamardBaseline,
    })
}

struct PreparedUser {
    id: u64,
    sending_probability: f64,
    code: ChipSequence,
    fec: FecConfig,
    modulation: ModulationScheme,
    frame_chips: usize,
}

struct Prepared {
    sf: usize,
    seed: u64,
    packet_bits: usize,
    channel: ChannelConfig,
    users: Vec<PreparedUser>,
    /// Longest user frame; shorter frames are zero-padded before
    /// superposition so mixed-FEC populations stay chip-synchronous.
    common_chips: usize,
}

fn prepare(cfg: &ScenarioConfig) -> Result<Prepared, EngineError> {
    cfg.validate()?;
    let tree = CodeTree::new(cfg.sf.trailing_zeros())?;
    let users = cfg
        .users
        .iter()
        .map(|u| {
            let code = tree.code_of(&u.code)?;
            let symbols = u.fec.coded_len(cfg.packet_bits) / u.modulation.bits_per_symbol();
            Ok(PreparedUser {
                id: u.id,
                sending_probability: u.sending_probability,
                frame_chips: symbols * code.len(),
                code,
                fec: u.fec,
                modulation: u.modulation,
            })
        })
        .collect::<Result<Vec<_>, EngineError>>()?;
    let common_chips = users.iter().map(|u| u.frame_chips).max().unwrap_or(0);
    Ok(Prepared {
        sf: cfg.sf,
        seed: cfg.seed,
        packet_bits: cfg.packet_bits,
        channel: cfg.channel,
        users,
        common_chips,
    })
}

fn simulate_iteration(prep: &Prepared, iteration: u64) -> Result<Vec<(u64, u64)>, EngineError> {
    let mut counts = vec![(0u64, 0u64); prep.users.len()];
    let mut payloads: Vec<Option<Vec<u8>>> = vec![None; prep.users.len()];
    let mut mixed = vec![Complex64::ZERO; prep.common_chips];
    let mut any_active = false;

    for (slot, user) in prep.users.iter().enumerate() {
        let mut activity = substream(prep.seed, iteration, user.id, StreamPurpose::Activity);
        if activity.random::<f64>() >= user.sending_probability {
            continue;
        }
        any_active = true;
        let mut source = substream(prep.seed, iteration, user.id, StreamPurpose::Payload);
        let bits: Vec<u8> = (0..prep.packet_bits).map(|_| source.random_range(0..=1)).collect();
        let coded = phy::fec_encode(&bits, user.fec);
        let symbols = phy::modulate(&coded, user.modulation)?;
        let signal = phy::spread(&symbols, &user.code);
        for (acc, x) in mixed.iter_mut().zip(&signal) {
            *acc += x;
        }
        payloads[slot] = Some(bits);
    }

    if !any_active {
        return Ok(counts);
    }

    let mut noise = substream(prep.seed, iteration, 0, StreamPurpose::Noise);
    let received = phy::awgn(&mixed, &prep.channel, prep.sf, &mut noise);

    for (slot, user) in prep.users.iter().enumerate() {
        let Some(bits) = &payloads[slot] else { continue };
        let despread = phy::despread(&received[..user.frame_chips], &user.code)?;
        let decoded = match user.fec {
            FecConfig::None => phy::demodulate_hard(&despread, user.modulation),
            FecConfig::ConvolutionalHalfRate => {
                let llrs = phy::demodulate_soft(&despread, user.modulation);
                phy::fec_decode(&llrs, user.fec)?
            }
        };
        let errors = bits.iter().zip(&decoded).filter(|(a, b)| a != b).count();
        counts[slot] = (prep.packet_bits as u64, errors as u64);
    }
    Ok(counts)
}

/// Runs a single iteration; returns (transmitted_bits, bit_errors) per user
/// in config order. Inactive users contribute (0, 0).
pub fn run_iteration(cfg: &ScenarioConfig, iteration: u64) -> Result<Vec<(u64, u64)>, EngineError> {
    let prep = prepare(cfg)?;
    simulate_iteration(&prep, iteration)
}

/// Runs the full scenario, iterations in parallel, and aggregates the
/// per-class bit error rates.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<BerReport, EngineError> {
    let prep = prepare(cfg)?;
    let zero = || vec![(0u64, 0u64); prep.users.len()];
    let counts = (0..cfg.iterations)
        .into_par_iter()
        .map(|i| simulate_iteration(&prep, i))
        .try_reduce(zero, |mut acc, item| {
            for (a, b) in acc.iter_mut().zip(item) {
                a.0 += b.0;
                a.1 += b.1;
            }
            Ok(acc)
        })?;
    let users: Vec<(u64, TrafficClass)> = cfg.users.iter().map(|u| (u.id, u.class)).collect();
    Ok(BerReport::assemble(
        cfg.iterations,
        cfg.packet_bits as u64,
        &users,
        &counts,
    ))
}

/// Analytic single-user AWGN bit error probability for the configured SNR
/// reference, used as a calibration oracle for the simulated chain.
pub fn analytic_single_user_ber(
    snr_db: f64,
    sf: usize,
    scheme: ModulationScheme,
    reference: phy::SnrReference,
) -> f64 {
    if snr_db.is_infinite() && snr_db > 0.0 {
        return 0.0;
    }
    let es_n0 = match reference {
        phy::SnrReference::Chip => sf as f64 * 10f64.powf(snr_db / 10.0),
        phy::SnrReference::Symbol => 10f64.powf(snr_db / 10.0),
    };
    match scheme {
        // Gray QPSK: per-bit error Q(sqrt(Es/N0)).
        ModulationScheme::Qpsk => stats::q_function(es_n0.sqrt()),
        ModulationScheme::Bpsk => stats::q_function((2.0 * es_n0).sqrt()),
    }
}

/// Default code assignment: machine-type users take the upper leaves in
/// order, best-effort users the lower base leaves and then the extras in
/// catalog order.
pub fn assign_default_codes(
    sf: usize,
    n_mt: usize,
    n_be: usize,
) -> Result<Vec<(TrafficClass, NodeAddress)>, EngineError> {
    if !sf.is_power_of_two() {
        return Err(EngineError::InvalidConfig(format!("sf {sf} is not a power of two")));
    }
    let mut tree = CodeTree::new(sf.trailing_zeros())?;
    let mut codes = Vec::with_capacity(n_mt + n_be);
    for _ in 0..n_mt {
        codes.push((TrafficClass::MachineType, tree.allocate(TrafficClass::MachineType, sf)?));
    }
    for _ in 0..n_be {
        codes.push((TrafficClass::BestEffort, tree.allocate(TrafficClass::BestEffort, sf)?));
    }
    Ok(codes)
}

/// Builds a uniform-population scenario with default code assignment.
#[allow(clippy::too_many_arguments)]
pub fn build_scenario(
    sf: usize,
    n_mt: usize,
    n_be: usize,
    sending_probability: f64,
    modulation: ModulationScheme,
    fec: FecConfig,
    channel: ChannelConfig,
    iterations: u64,
    packet_bits: usize,
    seed: u64,
) -> Result<ScenarioConfig, EngineError> {
    let users = assign_default_codes(sf, n_mt, n_be)?
        .into_iter()
        .enumerate()
        .map(|(id, (class, code))| UserSpec {
            id: id as u64,
            class,
            sending_probability,
            code,
            fec,
            modulation,
        })
        .collect();
    let cfg = ScenarioConfig {
        sf,
        users,
        channel,
        iterations,
        packet_bits,
        seed,
        mode: ScenarioMode::Proposed,
    };
    cfg.validate()?;
    Ok(cfg)
}

pub const DEFAULT_SEED: u64 = 1729;

/// The default simulation setup: SF 8, 4 machine-type and 6 best-effort
/// users, sending probability 0.5, 128-bit packets, QPSK, no FEC, chip-SNR
/// 10 dB, 10^4 iterations.
pub fn default_scenario() -> ScenarioConfig {
    build_scenario(
        8,
        4,
        6,
        0.5,
        ModulationScheme::Qpsk,
        FecConfig::None,
        ChannelConfig { snr_db: 10.0, snr_reference: phy::SnrReference::Chip },
        10_000,
        128,
        DEFAULT_SEED,
    )
    .expect("static defaults are valid")
}
