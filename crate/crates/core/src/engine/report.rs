//! Per-user and per-class bit error tallies.

use serde::Serialize;

use super::stats::binomial_stderr;
use crate::tree::TrafficClass;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UserTally {
    pub user_id: u64,
    pub class: TrafficClass,
    pub transmitted_bits: u64,
    pub bit_errors: u64,
    /// bit_errors / transmitted_bits; absent when nothing was transmitted.
    pub ber: Option<f64>,
    pub stderr: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassSummary {
    pub class: TrafficClass,
    pub users: u64,
    pub transmitted_bits: u64,
    pub bit_errors: u64,
    pub ber: Option<f64>,
    pub stderr: Option<f64>,
    /// The fixed-denominator normalization bit_errors / (N_I * N_users * N_B),
    /// which counts every user every iteration whether it transmitted or not.
    pub ber_paper_norm: f64,
    /// Set when this class never transmitted a single bit.
    pub no_transmissions: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BerReport {
    pub iterations: u64,
    pub packet_bits: u64,
    pub per_user: Vec<UserTally>,
    pub per_class: Vec<ClassSummary>,
}

impl BerReport {
    pub(super) fn assemble(
        iterations: u64,
        packet_bits: u64,
        users: &[(u64, TrafficClass)],
        counts: &[(u64, u64)],
    ) -> Self {
        let per_user: Vec<UserTally> = users
            .iter()
            .zip(counts)
            .map(|(&(user_id, class), &(transmitted_bits, bit_errors))| UserTally {
                user_id,
                class,
                transmitted_bits,
                bit_errors,
                ber: ratio(bit_errors, transmitted_bits),
                stderr: binomial_stderr(bit_errors, transmitted_bits),
            })
            .collect();

        let per_class = [TrafficClass::MachineType, TrafficClass::BestEffort]
            .into_iter()
            .filter_map(|class| {
                let members: Vec<&UserTally> =
                    per_user.iter().filter(|u| u.class == class).collect();
                if members.is_empty() {
                    return None;
                }
                let transmitted: u64 = members.iter().map(|u| u.transmitted_bits).sum();
                let errors: u64 = members.iter().map(|u| u.bit_errors).sum();
                let nominal = iterations * members.len() as u64 * packet_bits;
                Some(ClassSummary {
                    class,
                    users: members.len() as u64,
                    transmitted_bits: transmitted,
                    bit_errors: errors,
                    ber: ratio(errors, transmitted),
                    stderr: binomial_stderr(errors, transmitted),
                    ber_paper_norm: errors as f64 / nominal as f64,
                    no_transmissions: transmitted == 0,
                })
            })
            .collect();

        Self { iterations, packet_bits, per_user, per_class }
    }

    pub fn class(&self, class: TrafficClass) -> Option<&ClassSummary> {
        self.per_class.iter().find(|c| c.class == class)
    }

    /// Total (transmitted_bits, bit_errors) over all users.
    pub fn totals(&self) -> (u64, u64) {
        self.per_user.iter().fold((0, 0), |(t, e), u| {
            (t + u.transmitted_bits, e + u.bit_errors)
        })
    }

    /// BER over all users, ignoring class.
    pub fn overall_ber(&self) -> Option<f64> {
        let (t, e) = self.totals();
        ratio(e, t)
    }
}

fn ratio(errors: u64, trials: u64) -> Option<f64> {
    (trials > 0).then(|| errors as f64 / trials as f64)
}
