//! Parameter sweeps and the standard figure presets.

use serde::Serialize;

use super::{
    build_scenario, hadamard_baseline_scenario, run_scenario, BerReport, EngineError,
    ScenarioConfig, ScenarioMode, UserSpec,
};
use crate::phy::{ChannelConfig, FecConfig, ModulationScheme};
use crate::tree::{NodeAddress, TrafficClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    SnrDb,
    SendingProbability,
    NumBestEffortUsers,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub value: f64,
    pub report: BerReport,
    /// The adjusted-probability Hadamard baseline, present on SNR sweeps.
    pub baseline: Option<BerReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabeledSweep {
    pub label: String,
    pub parameter: SweepParameter,
    pub points: Vec<SweepPoint>,
}

/// Properties shared by every user of a uniform-population scenario.
struct Uniform {
    n_mt: usize,
    sending_probability: f64,
    modulation: ModulationScheme,
    fec: FecConfig,
}

fn uniform_population(cfg: &ScenarioConfig) -> Result<Uniform, EngineError> {
    let first = cfg
        .users
        .first()
        .ok_or_else(|| EngineError::InvalidConfig("scenario has no users".into()))?;
    if cfg.users.iter().any(|u| {
        u.sending_probability != first.sending_probability
            || u.modulation != first.modulation
            || u.fec != first.fec
    }) {
        return Err(EngineError::InvalidConfig(
            "sweeping this parameter requires a uniform user population".into(),
        ));
    }
    Ok(Uniform {
        n_mt: cfg
            .users
            .iter()
            .filter(|u| u.class == TrafficClass::MachineType)
            .count(),
        sending_probability: first.sending_probability,
        modulation: first.modulation,
        fec: first.fec,
    })
}

fn configure(base: &ScenarioConfig, parameter: SweepParameter, value: f64) -> Result<ScenarioConfig, EngineError> {
    match parameter {
        SweepParameter::SnrDb => {
            let mut cfg = base.clone();
            cfg.channel.snr_db = value;
            Ok(cfg)
        }
        SweepParameter::SendingProbability => {
            if !(0.0..=1.0).contains(&value) {
                return Err(EngineError::InvalidConfig(format!(
                    "sending probability {value} outside [0,1]"
                )));
            }
            let mut cfg = base.clone();
            for u in &mut cfg.users {
                u.sending_probability = value;
            }
            Ok(cfg)
        }
        SweepParameter::NumBestEffortUsers => {
            if value < 0.0 || value.fract() != 0.0 {
                return Err(EngineError::InvalidConfig(format!(
                    "best-effort user count {value} is not a non-negative integer"
                )));
            }
            let shared = uniform_population(base)?;
            build_scenario(
                base.sf,
                shared.n_mt,
                value as usize,
                shared.sending_probability,
                shared.modulation,
                shared.fec,
                base.channel,
                base.iterations,
                base.packet_bits,
                base.seed,
            )
        }
    }
}

/// Runs one scenario per value with only the swept parameter changed. SNR
/// sweeps also run the adjusted-probability Hadamard baseline at every
/// point; best-effort
/// count sweeps reallocate the best-effort codes base-first.
pub fn run_sweep(
    base: &ScenarioConfig,
    parameter: SweepParameter,
    values: &[f64],
) -> Result<Vec<SweepPoint>, EngineError> {
    base.validate()?;
    values
        .iter()
        .map(|&value| {
            let cfg = configure(base, parameter, value)?;
            let report = run_scenario(&cfg)?;
            let baseline = if parameter == SweepParameter::SnrDb {
                Some(run_scenario(&hadamard_baseline_scenario(&cfg)?)?)
            } else {
                None
            };
            Ok(SweepPoint { value, report, baseline })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// SNR 0..20 dB in 1 dB steps, with the Hadamard baseline at each point.
    Fig4,
    /// Sending probability 0..1 in 0.1 steps.
    Fig5,
    /// Best-effort user count 0..8.
    Fig6,
    /// Sending probability sweeps for (sf 8, no FEC), (sf 16, no FEC),
    /// (sf 8, rate-1/2 FEC) and a pure-Hadamard sf 8 overlay.
    Fig7,
}

impl std::str::FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fig4" => Ok(Preset::Fig4),
            "fig5" => Ok(Preset::Fig5),
            "fig6" => Ok(Preset::Fig6),
            "fig7" => Ok(Preset::Fig7),
            other => Err(format!("unknown preset {other:?}")),
        }
    }
}

fn probability_steps() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

/// A pure Hadamard sf-8 system: 8 machine-type users, one per matrix row,
/// at the unadjusted sending probability. Used as the fig7 overlay, where
/// the load-adjusted probability would exceed one past p = 0.8.
fn hadamard_overlay(base: &ScenarioConfig) -> Result<ScenarioConfig, EngineError> {
    let shared = uniform_population(base)?;
    let layer = base.sf.trailing_zeros();
    let users = (0..base.sf)
        .map(|i| UserSpec {
            id: i as u64,
            class: TrafficClass::MachineType,
            sending_probability: shared.sending_probability,
            code: NodeAddress::new(layer, i as u32, 0),
            fec: shared.fec,
            modulation: shared.modulation,
        })
        .collect();
    Ok(ScenarioConfig { users, mode: ScenarioMode::HadamardBaseline, ..base.clone() })
}

/// Runs a standard figure preset on the given base configuration; pass
/// [`super::default_scenario`] for the standard defaults.
pub fn preset_sweep(preset: Preset, base: &ScenarioConfig) -> Result<Vec<LabeledSweep>, EngineError> {
    match preset {
        Preset::Fig4 => {
            let values: Vec<f64> = (0..=20).map(f64::from).collect();
            Ok(vec![LabeledSweep {
                label: "snr".into(),
                parameter: SweepParameter::SnrDb,
                points: run_sweep(base, SweepParameter::SnrDb, &values)?,
            }])
        }
        Preset::Fig5 => Ok(vec![LabeledSweep {
            label: "sending_probability".into(),
            parameter: SweepParameter::SendingProbability,
            points: run_sweep(base, SweepParameter::SendingProbability, &probability_steps())?,
        }]),
        Preset::Fig6 => {
            let values: Vec<f64> = (0..=8).map(f64::from).collect();
            Ok(vec![LabeledSweep {
                label: "num_best_effort".into(),
                parameter: SweepParameter::NumBestEffortUsers,
                points: run_sweep(base, SweepParameter::NumBestEffortUsers, &values)?,
            }])
        }
        Preset::Fig7 => {
            let shared = uniform_population(base)?;
            let n_be = base.users.len() - shared.n_mt;
            let values = probability_steps();
            let channel =
                ChannelConfig { snr_db: base.channel.snr_db, snr_reference: base.channel.snr_reference };
            let variant = |sf: usize, fec: FecConfig| {
                build_scenario(
                    sf,
                    shared.n_mt,
                    n_be,
                    shared.sending_probability,
                    shared.modulation,
                    fec,
                    channel,
                    base.iterations,
                    base.packet_bits,
                    base.seed,
                )
            };
            let mut sweeps = vec![
                ("sf8_nofec", variant(8, FecConfig::None)?),
                ("sf16_nofec", variant(16, FecConfig::None)?),
                ("sf8_fec12", variant(8, FecConfig::ConvolutionalHalfRate)?),
                ("sf8_hadamard", hadamard_overlay(&variant(8, FecConfig::None)?)?),
            ]
            .into_iter()
            .map(|(label, cfg)| {
                Ok(LabeledSweep {
                    label: label.into(),
                    parameter: SweepParameter::SendingProbability,
                    points: run_sweep(&cfg, SweepParameter::SendingProbability, &values)?,
                })
            })
            .collect::<Result<Vec<_>, EngineError>>()?;
            sweeps.shrink_to_fit();
            Ok(sweeps)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::default_scenario;
    use crate::phy::SnrReference;

    fn quick() -> ScenarioConfig {
        let mut cfg = default_scenario();
        cfg.iterations = 10;
        cfg.channel.snr_db = f64::INFINITY;
        cfg
    }

    #[test]
    fn snr_sweep_carries_a_baseline() {
        let points = run_sweep(&quick(), SweepParameter::SnrDb, &[f64::INFINITY, 20.0]).unwrap();
        assert_eq!(points.len(), 2);
        for p in &points {
            let base = p.baseline.as_ref().unwrap();
            assert_eq!(base.per_user.len(), 8);
        }
        assert_eq!(points[1].value, 20.0);
    }

    #[test]
    fn probability_sweep_has_no_baseline() {
        let points =
            run_sweep(&quick(), SweepParameter::SendingProbability, &[0.0, 1.0]).unwrap();
        assert!(points.iter().all(|p| p.baseline.is_none()));
        assert_eq!(points[0].report.totals(), (0, 0));
    }

    #[test]
    fn be_count_sweep_resizes_the_population() {
        let points =
            run_sweep(&quick(), SweepParameter::NumBestEffortUsers, &[0.0, 4.0, 6.0]).unwrap();
        let sizes: Vec<usize> = points.iter().map(|p| p.report.per_user.len()).collect();
        assert_eq!(sizes, vec![4, 8, 10]);
        // Base-first reallocation: with 4 BE users nothing is overloaded.
        assert_eq!(points[1].report.totals().1, 0);
    }

    #[test]
    fn invalid_sweep_values_rejected() {
        assert!(run_sweep(&quick(), SweepParameter::SendingProbability, &[1.5]).is_err());
        assert!(run_sweep(&quick(), SweepParameter::NumBestEffortUsers, &[2.5]).is_err());
    }

    #[test]
    fn preset_shapes() {
        assert_eq!("fig4".parse::<Preset>().unwrap(), Preset::Fig4);
        assert!("fig9".parse::<Preset>().is_err());

        let base = quick();
        let fig5 = preset_sweep(Preset::Fig5, &base).unwrap();
        assert_eq!(fig5.len(), 1);
        assert_eq!(fig5[0].points.len(), 11);
        assert_eq!(fig5[0].points[3].value, 0.3);

        let fig6 = preset_sweep(Preset::Fig6, &base).unwrap();
        assert_eq!(fig6[0].points.len(), 9);

        let fig7 = preset_sweep(Preset::Fig7, &base).unwrap();
        let labels: Vec<&str> = fig7.iter().map(|s| s.label.as_str()).collect();
        assert_eq!(labels, vec!["sf8_nofec", "sf16_nofec", "sf8_fec12", "sf8_hadamard"]);
        assert!(fig7.iter().all(|s| s.points.len() == 11));
    }

    #[test]
    fn fig4_runs_with_noise() {
        let mut base = quick();
        base.iterations = 5;
        base.channel = ChannelConfig { snr_db: 10.0, snr_reference: SnrReference::Chip };
        let fig4 = preset_sweep(Preset::Fig4, &base).unwrap();
        assert_eq!(fig4[0].points.len(), 21);
        assert_eq!(fig4[0].points[0].value, 0.0);
        assert!(fig4[0].points.iter().all(|p| p.baseline.is_some()));
    }
}
