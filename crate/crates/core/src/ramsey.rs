//! Monte Carlo check that the sigma_x protocol reaches the quantum
//! Cramer-Rao bound: simulate measurement records at the true cutoff,
//! estimate the cutoff per trial by maximum likelihood, and compare the
//! spread of the estimates against 1/(nu F_q).
//!
//! The phase convention is pinned at cos(omega_0 t) = 1 (rotating frame),
//! where the sigma_x measurement saturates the quantum bound, so each
//! shot is a Bernoulli draw with p(+1) = (1 + e^(-gamma))/2.

use crate::environment::{gamma_dimensionful, gamma_shift_combination, OhmicSpectrum,
    QuadratureConfig, ScaledPoint};
use crate::error::{Error, Result};
use crate::metrology::qfi;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamseyConfig {
    /// True environment parameters the simulation draws from.
    pub spec: OhmicSpectrum,
    pub temperature: f64,
    pub measure_time: f64,
    /// Measurements per estimate (nu).
    pub shots: u64,
    /// Independent repetitions of the whole estimate.
    pub trials: usize,
    pub seed: u64,
}

impl RamseyConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "temperature",
                value: self.temperature,
                reason: "must be finite and nonnegative",
            });
        }
        if !(self.measure_time.is_finite() && self.measure_time > 0.0) {
            return Err(Error::InvalidParameter {
                name: "measure_time",
                value: self.measure_time,
                reason: "must be finite and positive",
            });
        }
        if self.shots < 1 {
            return Err(Error::InvalidParameter {
                name: "shots",
                value: self.shots as f64,
                reason: "need at least one shot per trial",
            });
        }
        if self.trials < 2 {
            return Err(Error::InvalidParameter {
                name: "trials",
                value: self.trials as f64,
                reason: "variance needs at least two trials",
            });
        }
        if self.shots.saturating_mul(self.trials as u64) > 1_000_000_000 {
            return Err(Error::InvalidParameter {
                name: "shots*trials",
                value: self.shots as f64 * self.trials as f64,
                reason: "desk-scale guard: at most 1e9 total measurements",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RamseyReport {
    /// Successful per-trial estimates of the cutoff.
    pub estimates: Vec<f64>,
    pub empirical_variance: f64,
    /// Quantum Cramer-Rao bound 1/(nu F_q) at the true parameters.
    pub crb: f64,
    pub ratio: f64,
    pub failures: usize,
    /// false when more than 20% of trials failed to invert.
    pub valid: bool,
}

/// Number of +1 outcomes in each trial. Each trial owns a counter-mode
/// PRNG stream derived from (seed, trial index), so results do not depend
/// on scheduling.
pub fn simulate_shots(config: &RamseyConfig) -> Result<Vec<u64>> {
    config.validate()?;
    let quad = QuadratureConfig::default();
    let gamma = gamma_dimensionful(
        &config.spec,
        config.measure_time,
        config.temperature,
        &quad,
    )?;
    let p = 0.5 * (1.0 + (-gamma).exp());
    let counts: Vec<u64> = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
            rng.set_stream(trial as u64);
            (0..config.shots).filter(|_| rng.random_bool(p)).count() as u64
        })
        .collect();
    Ok(counts)
}

/// Maximum-likelihood estimate of the cutoff from one trial's count.
///
/// Two-step closed-form inversion: p_hat -> gamma_hat = -ln(2 p_hat - 1),
/// then a bracketed bisection of gamma(omega_c) = gamma_hat over
/// [true/100, 100 true]. Returns Ok(None) for trials that cannot be
/// inverted (p_hat <= 1/2 or gamma_hat outside the bracket's range).
pub fn mle_omega_c(count: u64, shots: u64, config: &RamseyConfig) -> Result<Option<f64>> {
    if count > shots {
        return Err(Error::InvalidParameter {
            name: "count",
            value: count as f64,
            reason: "cannot exceed the number of shots",
        });
    }
    let p_hat = count as f64 / shots as f64;
    if p_hat <= 0.5 {
        return Ok(None);
    }
    let gamma_hat = -(2.0 * p_hat - 1.0).ln();

    let quad = QuadratureConfig::default();
    let omega_true = config.spec.omega_c;
    let (lo, hi) = (omega_true / 100.0, omega_true * 100.0);
    let gamma_at = |omega: f64| -> Result<f64> {
        let spec = OhmicSpectrum {
            omega_c: omega,
            ..config.spec
        };
        gamma_dimensionful(&spec, config.measure_time, config.temperature, &quad)
    };

    // the inversion is only meaningful if gamma is monotone across the
    // bracket; probe a log grid in both orientations first
    let mut prev = gamma_at(lo)?;
    let first = prev;
    let mut increasing = true;
    let mut decreasing = true;
    for k in 1..=32 {
        let omega = lo * (hi / lo).powf(k as f64 / 32.0);
        let g = gamma_at(omega)?;
        if g < prev * (1.0 - 1e-9) {
            increasing = false;
        }
        if g > prev * (1.0 + 1e-9) {
            decreasing = false;
        }
        prev = g;
    }
    if !increasing && !decreasing {
        return Err(Error::NonMonotonicGamma { s: config.spec.s, lo, hi });
    }
    let (g_lo, g_hi) = (first, prev);
    let (g_min, g_max) = if increasing { (g_lo, g_hi) } else { (g_hi, g_lo) };
    if gamma_hat < g_min || gamma_hat > g_max {
        return Ok(None);
    }

    let (mut a, mut b) = (lo, hi);
    while (b - a) > 1e-10 * b {
        let mid = 0.5 * (a + b);
        let g = gamma_at(mid)?;
        if (g < gamma_hat) == increasing {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(Some(0.5 * (a + b)))
}

/// Full Monte Carlo comparison against the quantum Cramer-Rao bound.
pub fn crb_report(config: &RamseyConfig) -> Result<RamseyReport> {
    config.validate()?;
    let counts = simulate_shots(config)?;
    let results: Result<Vec<Option<f64>>> = counts
        .par_iter()
        .map(|&c| mle_omega_c(c, config.shots, config))
        .collect();
    let results = results?;

    let estimates: Vec<f64> = results.iter().filter_map(|r| *r).collect();
    let failures = config.trials - estimates.len();

    let quad = QuadratureConfig::default();
    let gamma_true = gamma_dimensionful(
        &config.spec,
        config.measure_time,
        config.temperature,
        &quad,
    )?;
    let point = ScaledPoint::new(
        config.spec.omega_c * config.measure_time,
        config.temperature / config.spec.omega_c,
    )?;
    let dgamma_scaled =
        gamma_shift_combination(config.spec.eta, config.spec.s, point, &quad)?;
    let fisher = qfi(gamma_true, dgamma_scaled, config.spec.omega_c)?;
    if fisher <= 0.0 {
        return Err(Error::SingularFisher);
    }
    let crb = 1.0 / (config.shots as f64 * fisher);

    let empirical_variance = if estimates.len() >= 2 {
        let n = estimates.len() as f64;
        let mean = estimates.iter().sum::<f64>() / n;
        estimates.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        f64::NAN
    };

    Ok(RamseyReport {
        ratio: empirical_variance / crb,
        estimates,
        empirical_variance,
        crb,
        failures,
        valid: failures * 5 <= config.trials,
    })
}
