//! Small statistical helpers: the Gaussian tail function, binomial standard
//! errors, and the two-proportion z-test used for the "statistically
//! indistinguishable" claims.

/// Gaussian tail probability Q(x).
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Standard error sqrt(p(1-p)/n) of an observed proportion.
pub fn binomial_stderr(events: u64, trials: u64) -> Option<f64> {
    if trials == 0 {
        return None;
    }
    let p = events as f64 / trials as f64;
    Some((p * (1.0 - p) / trials as f64).sqrt())
}

/// Pooled two-proportion z statistic. Zero when the pooled proportion is
/// degenerate (no events or all events): there is no evidence of a
/// difference either way.
pub fn two_proportion_z(events_a: u64, trials_a: u64, events_b: u64, trials_b: u64) -> f64 {
    if trials_a == 0 || trials_b == 0 {
        return 0.0;
    }
    let pa = events_a as f64 / trials_a as f64;
    let pb = events_b as f64 / trials_b as f64;
    let pooled = (events_a + events_b) as f64 / (trials_a + trials_b) as f64;
    let var = pooled * (1.0 - pooled) * (1.0 / trials_a as f64 + 1.0 / trials_b as f64);
    if var <= 0.0 {
        return 0.0;
    }
    (pa - pb) / var.sqrt()
}

/// Two-sided normal quantile for alpha = 0.01.
pub const Z_ALPHA_001: f64 = 2.575_829_303_548_900_4;

pub fn rejects_at_001(z: f64) -> bool {
    z.abs() > Z_ALPHA_001
}

/// 95%-confidence upper bound 3/n on a probability with zero observed
/// events in n trials.
pub fn rule_of_three(trials: u64) -> f64 {
    3.0 / trials as f64
}
