//! Ohmic-family spectral density and the decoherence factor gamma in all
//! of its regimes. Everything numerical works in the scaled variables
//! tau = omega_c * t and theta = T / omega_c; the cutoff enters only
//! through thin dimensionful wrappers.

mod quadrature;

pub(crate) use quadrature::Kernel;

use crate::error::{Error, Result};
use crate::specfun::gamma_fn;
use serde::{Deserialize, Serialize};

/// Environment spectral density J(w) = eta w^s wc^(1-s) exp(-w/wc).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OhmicSpectrum {
    pub eta: f64,
    pub s: f64,
    pub omega_c: f64,
}

impl OhmicSpectrum {
    pub fn new(eta: f64, s: f64, omega_c: f64) -> Result<Self> {
        check_positive("eta", eta)?;
        check_positive("s", s)?;
        check_positive("omega_c", omega_c)?;
        Ok(Self { eta, s, omega_c })
    }
}

/// Dimensionless time and temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledPoint {
    pub tau: f64,
    pub theta: f64,
}

impl ScaledPoint {
    pub fn new(tau: f64, theta: f64) -> Result<Self> {
        check_nonnegative("tau", tau)?;
        check_nonnegative("theta", theta)?;
        Ok(Self { tau, theta })
    }

    pub fn zero_t(tau: f64) -> Result<Self> {
        Self::new(tau, 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum EvalMethod {
    #[default]
    Auto,
    ClosedFormZeroT,
    Quadrature,
    HighTemperature,
    ShortTime,
}

/// Rule for the upper integration cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum XMaxPolicy {
    /// 40 + 2 ln(1+theta), widened for large s so the e^(-x) truncation
    /// stays below tolerance when x^(s-2) still grows at x = 40.
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
    pub x_max_policy: XMaxPolicy,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_panels: 4096,
            x_max_policy: XMaxPolicy::Auto,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-2) {
            return Err(Error::InvalidParameter {
                name: "rel_tol",
                value: self.rel_tol,
                reason: "must lie in (0, 1e-2]",
            });
        }
        if !(self.abs_tol > 0.0) {
            return Err(Error::InvalidParameter {
                name: "abs_tol",
                value: self.abs_tol,
                reason: "must be positive",
            });
        }
        if self.max_panels < 16 {
            return Err(Error::InvalidParameter {
                name: "max_panels",
                value: self.max_panels as f64,
                reason: "must be at least 16",
            });
        }
        Ok(())
    }

    pub(crate) fn upper_cutoff(&self, s: f64, theta: f64) -> f64 {
        match self.x_max_policy {
            XMaxPolicy::Fixed(x) => x,
            XMaxPolicy::Auto => 40.0 + 2.0 * (1.0 + theta).ln() + 4.5 * (s - 3.0).max(0.0),
        }
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and positive",
        })
    }
}

fn check_nonnegative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and nonnegative",
        })
    }
}

/// J(w) evaluated at a frequency.
pub fn spectral_density(spec: &OhmicSpectrum, omega: f64) -> Result<f64> {
    check_nonnegative("omega", omega)?;
    if omega == 0.0 {
        return Ok(0.0);
    }
    Ok(spec.eta
        * omega.powf(spec.s)
        * spec.omega_c.powf(1.0 - spec.s)
        * (-omega / spec.omega_c).exp())
}

/// Zero-temperature decoherence bracket at unit coupling, analytically
/// continued in the Ohmicity exponent:
///
///   g0(sigma, tau) = Gamma(sigma-1) {1 - cos[(sigma-1) arctan tau] / (1+tau^2)^((sigma-1)/2)}
///
/// with the removable limits at sigma = 1 (logarithmic branch) and
/// sigma = 0 (tau arctan tau - ln sqrt(1+tau^2)) substituted directly.
/// Valid for sigma > -1.
pub(crate) fn g0_continued(sigma: f64, tau: f64) -> Result<f64> {
    if tau == 0.0 {
        return Ok(0.0);
    }
    let u = 1.0 + tau * tau;
    if (sigma - 1.0).abs() < 1e-9 {
        return Ok(0.5 * u.ln());
    }
    if sigma.abs() < 1e-9 {
        return Ok(tau * tau.atan() - 0.5 * u.ln());
    }
    if sigma <= -1.0 + 1e-9 {
        return Err(Error::InvalidParameter {
            name: "sigma",
            value: sigma,
            reason: "zero-temperature bracket diverges for sigma <= -1",
        });
    }
    let a = sigma - 1.0;
    let g = gamma_fn(a)?;
    Ok(g * (1.0 - (a * tau.atan()).cos() * u.powf(-a / 2.0)))
}

/// Decoherence factor in scaled variables with explicit method selection.
pub fn gamma_scaled(
    eta: f64,
    s: f64,
    point: ScaledPoint,
    method: EvalMethod,
    quad: &QuadratureConfig,
) -> Result<f64> {
    check_positive("eta", eta)?;
    check_positive("s", s)?;
    check_nonnegative("tau", point.tau)?;
    check_nonnegative("theta", point.theta)?;
    quad.validate()?;

    let ScaledPoint { tau, theta } = point;
    match method {
        EvalMethod::Auto => {
            if theta == 0.0 {
                if (s - 1.0).abs() < 1e-3 {
                    Ok(eta * 0.5 * (1.0 + tau * tau).ln())
                } else {
                    Ok(eta * g0_continued(s, tau)?)
                }
            } else if tau > 8.0 {
                // the Bose-expanded form costs O(theta) closed brackets
                // while the oscillatory integral costs O(tau) panels
                quadrature::gamma_bose_series(eta, s, tau, theta, quad)
            } else {
                quadrature_thermal(eta, s, tau, theta, quad)
            }
        }
        EvalMethod::ClosedFormZeroT => {
            if theta != 0.0 {
                return Err(Error::MethodRegime {
                    method: "ClosedFormZeroT",
                    theta,
                });
            }
            gamma_zero_t_closed(eta, s, tau)
        }
        EvalMethod::Quadrature => quadrature_thermal(eta, s, tau, theta, quad),
        EvalMethod::HighTemperature => {
            if theta < 1.0 {
                return Err(Error::MethodRegime {
                    method: "HighTemperature",
                    theta,
                });
            }
            gamma_high_t(eta, s, tau, theta)
        }
        EvalMethod::ShortTime => gamma_short_time(eta, s, tau),
    }
}

fn quadrature_thermal(
    eta: f64,
    s: f64,
    tau: f64,
    theta: f64,
    quad: &QuadratureConfig,
) -> Result<f64> {
    let kernel = if theta == 0.0 {
        Kernel::Unit
    } else {
        Kernel::Coth { theta }
    };
    quadrature::integrate_decoherence(eta, s, tau, kernel, quad)
}

/// Zero-temperature closed form. The removable pole at s = 1 is taken
/// exactly; within 1e-3 of it (but not at it) the cancellation in the
/// bracket costs too many digits, so the value is obtained by quadrature.
pub fn gamma_zero_t_closed(eta: f64, s: f64, tau: f64) -> Result<f64> {
    check_positive("eta", eta)?;
    check_positive("s", s)?;
    check_nonnegative("tau", tau)?;
    if tau == 0.0 {
        return Ok(0.0);
    }
    if s == 1.0 {
        return Ok(eta * 0.5 * (1.0 + tau * tau).ln());
    }
    if (s - 1.0).abs() < 1e-3 {
        return quadrature::integrate_decoherence(
            eta,
            s,
            tau,
            Kernel::Unit,
            &QuadratureConfig::default(),
        );
    }
    Ok(eta * g0_continued(s, tau)?)
}

/// Short-time form (eta/2) Gamma(s+1) tau^2, valid for tau << 1 at zero
/// temperature; the caller owns the regime check.
pub fn gamma_short_time(eta: f64, s: f64, tau: f64) -> Result<f64> {
    check_positive("eta", eta)?;
    check_positive("s", s)?;
    check_nonnegative("tau", tau)?;
    Ok(0.5 * eta * gamma_fn(s + 1.0)? * tau * tau)
}

/// High-temperature decoherence factor through the Ohmicity-shift
/// relation gamma(s, theta) = 2 theta gamma_zero_t(s-1). The shift lands
/// on the poles of the closed form at s = 1 and s = 2; those bands route
/// to direct quadrature of the 2 theta / x integrand and the exact
/// logarithmic branch respectively.
pub fn gamma_high_t(eta: f64, s: f64, tau: f64, theta: f64) -> Result<f64> {
    check_positive("eta", eta)?;
    check_positive("s", s)?;
    check_nonnegative("tau", tau)?;
    check_nonnegative("theta", theta)?;
    if s < 0.05 {
        return Err(Error::OhmicityFloor { s, floor: 0.05 });
    }
    if tau == 0.0 {
        return Ok(0.0);
    }
    if (s - 2.0).abs() < 1e-3 {
        return Ok(eta * theta * (1.0 + tau * tau).ln());
    }
    if (s - 1.0).abs() < 1e-3 {
        return quadrature::integrate_decoherence(
            eta,
            s,
            tau,
            Kernel::Classical { theta },
            &QuadratureConfig::default(),
        );
    }
    Ok(2.0 * theta * eta * g0_continued(s - 1.0, tau)?)
}

/// The combination (1-s) gamma(s) + gamma(s+1), which equals
/// omega_c d(gamma)/d(omega_c) at fixed absolute time and temperature.
pub fn gamma_shift_combination(
    eta: f64,
    s: f64,
    point: ScaledPoint,
    quad: &QuadratureConfig,
) -> Result<f64> {
    let g_s = gamma_scaled(eta, s, point, EvalMethod::Auto, quad)?;
    let g_s1 = gamma_scaled(eta, s + 1.0, point, EvalMethod::Auto, quad)?;
    Ok((1.0 - s) * g_s + g_s1)
}

/// Decoherence factor from laboratory quantities.
pub fn gamma_dimensionful(
    spec: &OhmicSpectrum,
    t: f64,
    temperature: f64,
    quad: &QuadratureConfig,
) -> Result<f64> {
    check_nonnegative("t", t)?;
    check_nonnegative("temperature", temperature)?;
    let point = ScaledPoint::new(spec.omega_c * t, temperature / spec.omega_c)?;
    gamma_scaled(spec.eta, spec.s, point, EvalMethod::Auto, quad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn dq() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn pt(tau: f64, theta: f64) -> ScaledPoint {
        ScaledPoint::new(tau, theta).unwrap()
    }

    #[test]
    fn spectral_density_values() {
        let spec = OhmicSpectrum::new(1.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(
            spectral_density(&spec, 1.0).unwrap(),
            (-1.0f64).exp(),
            max_relative = 1e-14
        );
        assert_eq!(spectral_density(&spec, 0.0).unwrap(), 0.0);
        let spec2 = OhmicSpectrum::new(2.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(
            spectral_density(&spec2, 1.0).unwrap(),
            2.0 * (-1.0f64).exp(),
            max_relative = 1e-14
        );
        let sub = OhmicSpectrum::new(0.3, 0.5, 2.0).unwrap();
        assert_relative_eq!(
            spectral_density(&sub, 3.0).unwrap(),
            0.3 * 3.0f64.powf(0.5) * 2.0f64.powf(0.5) * (-1.5f64).exp(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn zero_t_closed_form_values() {
        assert_relative_eq!(
            gamma_zero_t_closed(0.5, 1.0, 1.0).unwrap(),
            0.17328679513998632,
            max_relative = 1e-13
        );
        assert_relative_eq!(gamma_zero_t_closed(1.0, 2.0, 1.0).unwrap(), 0.5, max_relative = 1e-13);
        assert_relative_eq!(
            gamma_zero_t_closed(1.0, 1.0, 1e6).unwrap(),
            13.815510557964774,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            gamma_zero_t_closed(1.0, 2.0, 1e6).unwrap(),
            1.0,
            max_relative = 1e-11
        );
        assert_relative_eq!(
            gamma_zero_t_closed(1.0, 0.5, 3.0).unwrap(),
            1.5690302953465194,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            gamma_zero_t_closed(1.0, 3.0, 2.0).unwrap(),
            1.12,
            max_relative = 1e-13
        );
        // linearity in the coupling
        let one = gamma_zero_t_closed(1.0, 0.5, 1.0).unwrap();
        let three = gamma_zero_t_closed(3.0, 0.5, 1.0).unwrap();
        assert_relative_eq!(three, 3.0 * one, max_relative = 1e-14);
    }

    #[test]
    fn zero_t_pole_band_routes_to_quadrature() {
        for &s in &[1.0 - 5e-4, 1.0 + 5e-4] {
            let closed = gamma_zero_t_closed(1.0, s, 2.0).unwrap();
            let quad = gamma_scaled(1.0, s, pt(2.0, 0.0), EvalMethod::Quadrature, &dq()).unwrap();
            assert_relative_eq!(closed, quad, max_relative = 1e-12);
        }
    }

    #[test]
    fn short_time_form() {
        assert_relative_eq!(
            gamma_short_time(1.0, 1.0, 0.01).unwrap(),
            5e-5,
            max_relative = 1e-13
        );
        assert_eq!(gamma_short_time(2.0, 1.3, 0.0).unwrap(), 0.0);
        for &s in &[0.5, 1.0, 2.7] {
            let r = gamma_short_time(1.0, s + 1.0, 0.01).unwrap()
                / gamma_short_time(1.0, s, 0.01).unwrap();
            assert_relative_eq!(r, s + 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn high_t_values() {
        assert_relative_eq!(
            gamma_high_t(1.0, 2.0, 1.0, 100.0).unwrap(),
            69.31471805599453,
            max_relative = 1e-12
        );
        assert_eq!(gamma_high_t(1.0, 1.5, 0.0, 10.0).unwrap(), 0.0);
        assert!(matches!(
            gamma_high_t(1.0, 0.04, 1.0, 10.0),
            Err(Error::OhmicityFloor { .. })
        ));
        // shift of the short-time ratio: gamma(s+1)/gamma(s) -> s
        for &s in &[1.5, 2.5, 4.0] {
            let r = gamma_high_t(1.0, s + 1.0, 1e-3, 50.0).unwrap()
                / gamma_high_t(1.0, s, 1e-3, 50.0).unwrap();
            assert_relative_eq!(r, s, max_relative = 1e-4);
        }
    }

    #[test]
    fn high_t_ohmic_band_matches_limit_formula() {
        // s=1 goes through quadrature; the analytic limit of the shifted
        // bracket is 2 theta eta (tau arctan tau - ln sqrt(1+tau^2))
        let v = gamma_high_t(1.0, 1.0, 1.0, 5.0).unwrap();
        assert_relative_eq!(v, 4.3882457311747566, max_relative = 1e-9);
        let v2 = gamma_high_t(0.5, 1.0, 2.5, 40.0).unwrap();
        let tau = 2.5f64;
        let exact = 2.0 * 40.0 * 0.5 * (tau * tau.atan() - 0.5 * (1.0 + tau * tau).ln());
        assert_relative_eq!(v2, exact, max_relative = 1e-9);
    }

    #[test]
    fn thermal_quadrature_reference_values() {
        // high-precision references for the full coth integrand
        let cases = [
            (1.0, 1.5, 2.0, 0.7, 1.5475276487613575),
            (0.8, 0.5, 5.0, 2.0, 48.566153299424157),
            (1.0, 2.5, 0.3, 10.0, 1.1305878033818964),
            (1.0, 1.0, 1.0, 1.0, 0.9552728083237400),
            (0.5, 3.0, 4.0, 0.2, 0.5501325486389092),
            (0.1, 1.0, 1.0, 100.0, 8.7765747949884198),
            (1.0, 2.0, 1.0, 0.5, 0.5954026633759462),
            (0.3, 0.7, 0.9, 5.0, 1.4792509770367451),
        ];
        for &(eta, s, tau, theta, want) in &cases {
            let got = gamma_scaled(eta, s, pt(tau, theta), EvalMethod::Auto, &dq()).unwrap();
            assert_relative_eq!(got, want, max_relative = 1e-8);
        }
    }

    #[test]
    fn auto_dispatch_matches_explicit_methods() {
        let z = pt(2.3, 0.0);
        let auto = gamma_scaled(0.7, 1.8, z, EvalMethod::Auto, &dq()).unwrap();
        let closed = gamma_scaled(0.7, 1.8, z, EvalMethod::ClosedFormZeroT, &dq()).unwrap();
        assert_eq!(auto.to_bits(), closed.to_bits());

        // inside the pole band at zero temperature Auto takes the
        // logarithmic branch
        let banded = gamma_scaled(1.0, 1.0 + 5e-4, z, EvalMethod::Auto, &dq()).unwrap();
        assert_relative_eq!(banded, 0.5 * (1.0 + 2.3f64 * 2.3).ln(), max_relative = 1e-14);

        let w = pt(1.0, 2.0);
        let auto_t = gamma_scaled(1.0, 1.5, w, EvalMethod::Auto, &dq()).unwrap();
        let quad_t = gamma_scaled(1.0, 1.5, w, EvalMethod::Quadrature, &dq()).unwrap();
        assert_eq!(auto_t.to_bits(), quad_t.to_bits());
    }

    #[test]
    fn auto_long_time_thermal_matches_quadrature() {
        for &(s, tau, theta) in &[(1.0, 12.0, 0.3), (0.7, 60.0, 2.0), (2.5, 25.0, 40.0)] {
            let auto = gamma_scaled(0.8, s, pt(tau, theta), EvalMethod::Auto, &dq()).unwrap();
            let quad =
                gamma_scaled(0.8, s, pt(tau, theta), EvalMethod::Quadrature, &dq()).unwrap();
            assert_relative_eq!(auto, quad, max_relative = 2e-8);
        }
    }

    #[test]
    fn method_regime_pairings_rejected() {
        assert!(matches!(
            gamma_scaled(1.0, 1.0, pt(1.0, 0.5), EvalMethod::ClosedFormZeroT, &dq()),
            Err(Error::MethodRegime { .. })
        ));
        assert!(matches!(
            gamma_scaled(1.0, 1.5, pt(1.0, 0.5), EvalMethod::HighTemperature, &dq()),
            Err(Error::MethodRegime { .. })
        ));
        assert!(
            gamma_scaled(1.0, 1.5, pt(1.0, 1.0), EvalMethod::HighTemperature, &dq()).is_ok()
        );
    }

    #[test]
    fn tau_zero_is_zero_everywhere() {
        for &theta in &[0.0, 1.5, 300.0] {
            let g = gamma_scaled(2.0, 0.8, pt(0.0, theta), EvalMethod::Auto, &dq()).unwrap();
            assert_eq!(g, 0.0);
        }
    }

    #[test]
    fn closed_form_and_quadrature_agree_zero_t() {
        for &s in &[0.5, 0.9, 1.0, 1.5, 2.0, 3.0] {
            for k in 0..7 {
                let tau = 10f64.powf(-2.0 + k as f64);
                let closed = gamma_zero_t_closed(1.0, s, tau).unwrap();
                let quad =
                    gamma_scaled(1.0, s, pt(tau, 0.0), EvalMethod::Quadrature, &dq()).unwrap();
                let tol = 1e-12f64.max(1e-9 * closed.abs());
                assert!(
                    (closed - quad).abs() <= tol.max(1e-7 * closed.abs()),
                    "s={s} tau={tau}: closed={closed:e} quad={quad:e}"
                );
            }
        }
    }

    #[test]
    fn temperature_monotonicity() {
        for &s in &[0.5, 1.0, 2.0] {
            let mut prev = 0.0;
            for &theta in &[0.0, 0.3, 1.0, 3.0, 10.0, 100.0] {
                let g = gamma_scaled(0.4, s, pt(1.7, theta), EvalMethod::Auto, &dq()).unwrap();
                assert!(g >= prev - 1e-9 * g.abs(), "s={s} theta={theta}");
                prev = g;
            }
        }
    }

    #[test]
    fn high_t_approximation_accuracy_at_theta_100() {
        for &s in &[1.0, 2.0] {
            for &tau in &[0.01, 0.1, 1.0, 10.0] {
                let full =
                    gamma_scaled(1.0, s, pt(tau, 100.0), EvalMethod::Quadrature, &dq()).unwrap();
                let approx = gamma_high_t(1.0, s, tau, 100.0).unwrap();
                assert!(
                    ((full - approx) / full).abs() <= 1e-2,
                    "s={s} tau={tau}: full={full} approx={approx}"
                );
            }
        }
    }

    #[test]
    fn shift_combination_matches_finite_difference() {
        let quad = dq();
        let cases = [
            (0.8, 1.4, 0.9, 0.0),
            (1.0, 0.6, 2.0, 0.5),
            (0.3, 2.2, 1.3, 5.0),
        ];
        for &(eta, s, tau_ref, theta) in &cases {
            let omega_c = 1.3;
            let spec = OhmicSpectrum::new(eta, s, omega_c).unwrap();
            let t = tau_ref / omega_c;
            let temp = theta * omega_c;
            let h = 1e-5 * omega_c;
            let up = OhmicSpectrum::new(eta, s, omega_c + h).unwrap();
            let dn = OhmicSpectrum::new(eta, s, omega_c - h).unwrap();
            let fd = (gamma_dimensionful(&up, t, temp, &quad).unwrap()
                - gamma_dimensionful(&dn, t, temp, &quad).unwrap())
                / (2.0 * h);
            let ident = gamma_shift_combination(
                eta,
                s,
                ScaledPoint::new(spec.omega_c * t, temp / spec.omega_c).unwrap(),
                &quad,
            )
            .unwrap();
            assert_relative_eq!(omega_c * fd, ident, max_relative = 1e-4);
        }
    }

    #[test]
    fn shift_combination_limits() {
        // long-time super-Ohmic limit vanishes: (1-s)Gamma(s-1) + Gamma(s) = 0
        let v = gamma_shift_combination(1.0, 2.0, pt(1e6, 0.0), &dq()).unwrap();
        assert!(v.abs() < 1e-5, "got {v}");
        // short-time zero-T: combination -> 2 gamma(s)
        for &s in &[0.5, 1.0, 3.0] {
            let p = pt(1e-3, 0.0);
            let comb = gamma_shift_combination(1.0, s, p, &dq()).unwrap();
            let g = gamma_scaled(1.0, s, p, EvalMethod::Auto, &dq()).unwrap();
            assert_relative_eq!(comb, 2.0 * g, max_relative = 1e-4);
        }
        // short-time high-T Ohmic: combination -> gamma(s)
        let p = pt(1e-3, 100.0);
        let comb = gamma_shift_combination(1.0, 1.0, p, &dq()).unwrap();
        let g = gamma_scaled(1.0, 1.0, p, EvalMethod::Auto, &dq()).unwrap();
        assert_relative_eq!(comb, g, max_relative = 2e-3);
    }

    #[test]
    fn dimensionful_wrapper_scale_invariance() {
        let quad = dq();
        let spec1 = OhmicSpectrum::new(0.5, 1.0, 2.0).unwrap();
        assert_relative_eq!(
            gamma_dimensionful(&spec1, 0.5, 0.0, &quad).unwrap(),
            0.17328679513998632,
            max_relative = 1e-13
        );
        assert_eq!(gamma_dimensionful(&spec1, 0.0, 1.0, &quad).unwrap(), 0.0);
        let a = OhmicSpectrum::new(0.7, 1.6, 1.0).unwrap();
        let b = OhmicSpectrum::new(0.7, 1.6, 3.0).unwrap();
        let ga = gamma_dimensionful(&a, 2.0, 0.9, &quad).unwrap();
        let gb = gamma_dimensionful(&b, 2.0 / 3.0, 0.9 * 3.0, &quad).unwrap();
        assert_relative_eq!(ga, gb, max_relative = 1e-9);
    }

    #[test]
    fn invariant_validation_errors() {
        assert!(OhmicSpectrum::new(0.0, 1.0, 1.0).is_err());
        assert!(OhmicSpectrum::new(1.0, -0.5, 1.0).is_err());
        assert!(ScaledPoint::new(-1.0, 0.0).is_err());
        assert!(ScaledPoint::new(1.0, f64::NAN).is_err());
        let bad = QuadratureConfig {
            rel_tol: 0.5,
            ..QuadratureConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad2 = QuadratureConfig {
            max_panels: 4,
            ..QuadratureConfig::default()
        };
        assert!(bad2.validate().is_err());
        assert!(matches!(
            gamma_scaled(-1.0, 1.0, pt(1.0, 0.0), EvalMethod::Auto, &dq()),
            Err(Error::InvalidParameter { name: "eta", .. })
        ));
    }

    #[test]
    fn nonnegativity_across_regimes() {
        for &s in &[0.1, 0.5, 1.0, 2.0, 5.0] {
            for &tau in &[1e-4, 0.1, 1.0, 30.0] {
                for &theta in &[0.0, 0.4, 7.0] {
                    let g =
                        gamma_scaled(0.9, s, pt(tau, theta), EvalMethod::Auto, &dq()).unwrap();
                    assert!(g >= 0.0, "s={s} tau={tau} theta={theta} -> {g}");
                }
            }
        }
    }
}
