//! Fisher information and the dimensionless signal-to-noise ratio for
//! cutoff estimation with a dephasing probe.
//!
//! Derivatives of gamma with respect to the cutoff enter everywhere in
//! the scaled form omega_c * d(gamma)/d(omega_c), which is exactly what
//! `environment::gamma_shift_combination` returns; the qfi and classical
//! Fisher routines below follow that convention.

use crate::environment::{
    self, EvalMethod, OhmicSpectrum, QuadratureConfig, ScaledPoint,
};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeConfig {
    /// Qubit level splitting; 0 means the rotating frame.
    pub omega_0: f64,
}

impl ProbeConfig {
    pub fn new(omega_0: f64) -> Result<Self> {
        if !(omega_0.is_finite() && omega_0 >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "omega_0",
                value: omega_0,
                reason: "level splitting must be finite and nonnegative",
            });
        }
        Ok(Self { omega_0 })
    }
}

/// Dephased equal-superposition state: populations are pinned at 1/2 and
/// the off-diagonal element is e^(i phase) e^(-gamma) / 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceState {
    pub gamma: f64,
    pub phase: f64,
}

impl CoherenceState {
    pub fn coherence(&self) -> f64 {
        (-self.gamma).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    ZeroTemperature,
    HighTemperature,
}

pub fn probe_state(gamma: f64, probe: &ProbeConfig, t: f64) -> Result<CoherenceState> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
            reason: "decoherence exponent must be finite and nonnegative",
        });
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
            reason: "time must be finite and nonnegative",
        });
    }
    Ok(CoherenceState {
        gamma,
        phase: probe.omega_0 * t,
    })
}

pub fn expectation_sigma_x(state: &CoherenceState) -> f64 {
    state.coherence() * state.phase.cos()
}

/// Quantum Fisher information for the cutoff.
///
/// `dgamma_scaled` is omega_c * d(gamma)/d(omega_c); dividing by omega_c
/// restores the dimensionful derivative, so the result carries units of
/// 1/omega_c^2.
pub fn qfi(gamma: f64, dgamma_scaled: f64, omega_c: f64) -> Result<f64> {
    if !(omega_c.is_finite() && omega_c > 0.0) {
        return Err(Error::InvalidParameter {
            name: "omega_c",
            value: omega_c,
            reason: "cutoff must be finite and positive",
        });
    }
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
            reason: "decoherence exponent must be finite and nonnegative",
        });
    }
    if gamma <= 1e-300 {
        if dgamma_scaled.abs() <= 1e-300 {
            return Ok(0.0);
        }
        return Err(Error::SingularFisher);
    }
    let d = dgamma_scaled / omega_c;
    Ok(d * d / (2.0 * gamma).exp_m1())
}

/// Classical Fisher information of the sigma_x measurement, in the same
/// scaled-derivative convention as `qfi` and already multiplied by
/// omega_c^2 (i.e. directly comparable to the QSNR).
pub fn classical_fisher_sigma_x(gamma: f64, dgamma_scaled: f64, phase: f64) -> Result<f64> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
            reason: "decoherence exponent must be finite and nonnegative",
        });
    }
    let c2 = phase.cos().powi(2);
    let e2g = (-2.0 * gamma).exp();
    let variance = 1.0 - e2g * c2;
    if variance <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok(dgamma_scaled * dgamma_scaled * e2g * c2 / variance)
}

/// Dimensionless QSNR Q = [(1-s) gamma(s) + gamma(s+1)]^2 / (e^(2 gamma(s)) - 1).
pub fn qsnr(eta: f64, s: f64, point: ScaledPoint, quad: &QuadratureConfig) -> Result<f64> {
    if point.tau == 0.0 {
        return Ok(0.0);
    }
    let g = environment::gamma_scaled(eta, s, point, EvalMethod::Auto, quad)?;
    if g == 0.0 {
        return Ok(0.0);
    }
    // Past this depth of decoherence the denominator overflows f64 and Q
    // is zero to machine precision; skip the second gamma evaluation.
    if g >= 354.5 {
        return Ok(0.0);
    }
    let g_next = environment::gamma_scaled(eta, s + 1.0, point, EvalMethod::Auto, quad)?;
    let num = (1.0 - s) * g + g_next;
    Ok(num * num / (2.0 * g).exp_m1())
}

/// QSNR through the dimensionful wrappers; equals
/// `qsnr(eta, s, (omega_c t, T/omega_c))` identically.
pub fn qsnr_dimensionful(
    spec: &OhmicSpectrum,
    t: f64,
    temperature: f64,
    quad: &QuadratureConfig,
) -> Result<f64> {
    let point = ScaledPoint::new(spec.omega_c * t, temperature / spec.omega_c)?;
    qsnr(spec.eta, spec.s, point, quad)
}

/// Short-time QSNR as a function of gamma alone: 4 gamma^2/(e^(2 gamma)-1)
/// at zero temperature and exactly one quarter of that in the
/// high-temperature regime.
pub fn qsnr_of_gamma_short_time(gamma: f64, regime: Regime) -> Result<f64> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
            reason: "decoherence exponent must be finite and nonnegative",
        });
    }
    if gamma == 0.0 {
        return Ok(0.0);
    }
    let g2 = gamma * gamma;
    let denom = (2.0 * gamma).exp_m1();
    Ok(match regime {
        Regime::ZeroTemperature => 4.0 * g2 / denom,
        Regime::HighTemperature => g2 / denom,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn probe_state_and_expectation() {
        let rot = ProbeConfig::new(0.0).unwrap();
        let st = probe_state(0.0, &rot, 5.0).unwrap();
        assert_eq!(st.coherence(), 1.0);
        assert_eq!(expectation_sigma_x(&st), 1.0);

        let st = probe_state(0.8, &rot, 1.0).unwrap();
        assert_relative_eq!(st.coherence(), 0.4493289641172216, max_relative = 1e-12);
        assert_relative_eq!(
            expectation_sigma_x(&st),
            0.4493289641172216,
            max_relative = 1e-12
        );

        let deep = probe_state(700.0, &rot, 1.0).unwrap();
        assert!(deep.coherence() < 1e-300);

        let driven = ProbeConfig::new(3.0).unwrap();
        let st = probe_state(0.5, &driven, std::f64::consts::FRAC_PI_2 / 3.0).unwrap();
        assert!(expectation_sigma_x(&st).abs() < 1e-15);

        assert!(probe_state(-0.1, &rot, 1.0).is_err());
        assert!(ProbeConfig::new(-1.0).is_err());
    }

    #[test]
    fn qfi_reference_point() {
        let f = qfi(0.8, 1.6, 1.0).unwrap();
        assert_relative_eq!(f, 0.6476040986159445, max_relative = 1e-12);
        assert!((f - 0.647605).abs() < 2e-6);
    }

    #[test]
    fn qfi_limits_and_scaling() {
        assert_eq!(qfi(0.7, 0.0, 1.0).unwrap(), 0.0);
        assert_eq!(qfi(0.0, 0.0, 1.0).unwrap(), 0.0);
        assert!(matches!(qfi(0.0, 1.0, 1.0), Err(Error::SingularFisher)));
        let base = qfi(0.8, 1.6, 1.0).unwrap();
        let double = qfi(0.8, 1.6, 2.0).unwrap();
        assert_relative_eq!(double, base / 4.0, max_relative = 1e-14);
    }

    #[test]
    fn classical_fisher_reference_and_edges() {
        let fc = classical_fisher_sigma_x(0.8, 1.6, 0.0).unwrap();
        let fq = qfi(0.8, 1.6, 1.0).unwrap();
        assert_relative_eq!(fc, fq, max_relative = 1e-12);
        let fpi = classical_fisher_sigma_x(0.8, 1.6, std::f64::consts::PI).unwrap();
        assert_relative_eq!(fpi, fc, max_relative = 1e-12);
        let quarter = classical_fisher_sigma_x(0.8, 1.6, std::f64::consts::FRAC_PI_2).unwrap();
        assert!(quarter < 1e-30);
        assert!(matches!(
            classical_fisher_sigma_x(0.0, 1.0, 0.0),
            Err(Error::ZeroVariance)
        ));
    }

    #[test]
    fn classical_never_exceeds_quantum() {
        let mut rng = StdRng::seed_from_u64(0x5eed);
        for _ in 0..200 {
            let gamma = rng.random_range(1e-3..5.0);
            let d: f64 = rng.random_range(-3.0..3.0);
            let phase = rng.random_range(0.0..std::f64::consts::TAU);
            let fc = classical_fisher_sigma_x(gamma, d, phase).unwrap();
            let fq_scaled = qfi(gamma, d, 1.0).unwrap();
            assert!(
                fc <= fq_scaled * (1.0 + 1e-12),
                "gamma={gamma} d={d} phase={phase}: {fc} > {fq_scaled}"
            );
            let fc_sat = classical_fisher_sigma_x(gamma, d, 0.0).unwrap();
            assert_relative_eq!(fc_sat, fq_scaled, max_relative = 1e-12);
        }
    }

    #[test]
    fn qsnr_matches_manual_combination() {
        let quad = QuadratureConfig::default();
        for &(eta, s, tau, theta) in
            &[(1.0, 1.0, 1.0, 0.0), (0.5, 2.0, 0.7, 0.0), (0.3, 0.8, 1.2, 2.0)]
        {
            let p = ScaledPoint::new(tau, theta).unwrap();
            let q = qsnr(eta, s, p, &quad).unwrap();
            let g = environment::gamma_scaled(eta, s, p, EvalMethod::Auto, &quad).unwrap();
            let num = environment::gamma_shift_combination(eta, s, p, &quad).unwrap();
            assert_relative_eq!(q, num * num / (2.0 * g).exp_m1(), max_relative = 1e-12);
            assert!(q >= 0.0);
        }
        let q0 = qsnr(1.0, 1.0, ScaledPoint::zero_t(0.0).unwrap(), &quad).unwrap();
        assert_eq!(q0, 0.0);
    }

    #[test]
    fn qsnr_ohmic_zero_t_closed_form() {
        // s=1, theta=0: Q = eta^2 (1 - 1/u)^2 / (u^eta - 1), u = 1 + tau^2
        let quad = QuadratureConfig::default();
        for &(eta, tau) in &[(1.0, 1.0), (0.5, 2.0), (3.0, 0.4)] {
            let u: f64 = 1.0 + tau * tau;
            let expect = eta * eta * (1.0 - 1.0 / u).powi(2) / (u.powf(eta) - 1.0);
            let q = qsnr(eta, 1.0, ScaledPoint::zero_t(tau).unwrap(), &quad).unwrap();
            assert_relative_eq!(q, expect, max_relative = 1e-11);
        }
    }

    #[test]
    fn qsnr_vanishes_at_long_times() {
        let quad = QuadratureConfig::default();
        for &s in &[0.5, 1.0, 2.0, 3.0] {
            let q = qsnr(1.0, s, ScaledPoint::zero_t(1e5).unwrap(), &quad).unwrap();
            assert!(q < 1e-3, "s={s}: {q}");
        }
    }

    #[test]
    fn qsnr_scale_invariance() {
        let quad = QuadratureConfig::default();
        let base = qsnr(0.7, 1.4, ScaledPoint::new(1.3, 0.0).unwrap(), &quad).unwrap();
        for &wc in &[0.5, 1.0, 2.0] {
            let spec = OhmicSpectrum::new(0.7, 1.4, wc).unwrap();
            let q = qsnr_dimensionful(&spec, 1.3 / wc, 0.0, &quad).unwrap();
            assert_relative_eq!(q, base, max_relative = 1e-10);
        }
        let base_t = qsnr(0.7, 1.4, ScaledPoint::new(1.3, 0.8).unwrap(), &quad).unwrap();
        for &wc in &[0.5, 2.0] {
            let spec = OhmicSpectrum::new(0.7, 1.4, wc).unwrap();
            let q = qsnr_dimensionful(&spec, 1.3 / wc, 0.8 * wc, &quad).unwrap();
            assert_relative_eq!(q, base_t, max_relative = 1e-8);
        }
    }

    #[test]
    fn short_time_qsnr_values() {
        let z = qsnr_of_gamma_short_time(0.8, Regime::ZeroTemperature).unwrap();
        assert_relative_eq!(z, 0.6476040986159445, max_relative = 1e-12);
        let h = qsnr_of_gamma_short_time(0.8, Regime::HighTemperature).unwrap();
        assert_relative_eq!(h, 0.1619010246539861, max_relative = 1e-12);
        assert_eq!(qsnr_of_gamma_short_time(0.0, Regime::ZeroTemperature).unwrap(), 0.0);
        let peak = qsnr_of_gamma_short_time(0.796812, Regime::ZeroTemperature).unwrap();
        assert_relative_eq!(peak, 0.6476102378919149, max_relative = 1e-12);
    }

    #[test]
    fn quarter_relation_bit_exact() {
        for i in 1..=100 {
            let gamma = 0.05 * i as f64;
            let z = qsnr_of_gamma_short_time(gamma, Regime::ZeroTemperature).unwrap();
            let h = qsnr_of_gamma_short_time(gamma, Regime::HighTemperature).unwrap();
            assert_eq!(h.to_bits(), (z / 4.0).to_bits(), "gamma={gamma}");
        }
    }
}
