//! Optimal measurement time and peak QSNR, the analytic short-time
//! optima, the high-temperature enhancement factor R, and the critical
//! coupling below which heating the environment helps.

use crate::environment::{
    g0_continued, gamma_scaled, EvalMethod, QuadratureConfig, ScaledPoint,
};
use crate::error::{Error, Result};
use crate::metrology::{qsnr, Regime};
use crate::specfun::{gamma_fn, lambert_w0};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimumResult {
    pub tau_opt: f64,
    pub q_opt: f64,
    pub gamma_opt: f64,
    pub method: EvalMethod,
    /// true when tau_opt < 0.1, i.e. the short-time analysis applies
    pub short_time_regime: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnhancementResult {
    pub r: f64,
    pub q_sat: f64,
    pub q_opt_zero_t: f64,
}

/// Solution of gamma e^(2 gamma) - e^(2 gamma) + 1 = 0, the decoherence
/// depth that maximizes the short-time QSNR.
pub fn gamma_opt_analytic() -> f64 {
    let w = lambert_w0(-2.0 * (-2.0f64).exp()).expect("argument is inside the W0 domain");
    1.0 + 0.5 * w
}

/// Zero-temperature short-time QSNR ceiling, 4 gamma*^2 / (e^(2 gamma*) - 1).
pub fn q_max() -> f64 {
    let g = gamma_opt_analytic();
    4.0 * g * g / (2.0 * g).exp_m1()
}

/// Universal high-temperature plateau, exactly q_max / 4.
pub fn q_sat() -> f64 {
    q_max() / 4.0
}

/// Closed-form short-time optimum of the measurement time.
///
/// Zero temperature: sqrt(2 gamma* / (eta Gamma(s+1))); high temperature:
/// sqrt(gamma* / (eta Gamma(s) theta)). The unrounded gamma* is used, so
/// values differ from two-digit textbook constants in the third decimal.
pub fn tau_opt_short_time(eta: f64, s: f64, regime: Regime, theta: Option<f64>) -> Result<f64> {
    if !(eta.is_finite() && eta > 0.0) {
        return Err(Error::InvalidParameter {
            name: "eta",
            value: eta,
            reason: "must be finite and positive",
        });
    }
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::InvalidParameter {
            name: "s",
            value: s,
            reason: "must be finite and positive",
        });
    }
    let g_star = gamma_opt_analytic();
    match regime {
        Regime::ZeroTemperature => Ok((2.0 * g_star / (eta * gamma_fn(s + 1.0)?)).sqrt()),
        Regime::HighTemperature => {
            let th = theta.unwrap_or(f64::NAN);
            if !(th.is_finite() && th > 0.0) {
                return Err(Error::InvalidParameter {
                    name: "theta",
                    value: th,
                    reason: "high-temperature prediction needs theta > 0",
                });
            }
            Ok((g_star / (eta * gamma_fn(s)? * th)).sqrt())
        }
    }
}

/// Rigorous-but-cheap upper bound on Q(tau) at finite temperature, used
/// to skip expensive quadrature at scan points that cannot compete with
/// the running maximum. Lower-bounds gamma by a truncated Matsubara sum
/// (every term of the expansion is nonnegative) and upper-bounds the
/// numerator through coth(u) <= 1 + 1/u.
fn qsnr_upper_bound(eta: f64, s: f64, tau: f64, theta: f64) -> f64 {
    let g0 = |sigma: f64, t: f64| g0_continued(sigma, t).unwrap_or(f64::INFINITY);

    let mut acc = g0(s, tau);
    for n in 1..=40u32 {
        let beta = 1.0 + n as f64 / theta;
        acc += 2.0 * beta.powf(1.0 - s) * g0(s, tau / beta);
        if 0.98 * eta * acc > 460.0 {
            break;
        }
    }
    let gamma_lower = 0.98 * eta * acc;
    if !gamma_lower.is_finite() {
        return f64::INFINITY;
    }
    if gamma_lower >= 455.0 {
        return 0.0;
    }

    let gamma_upper = |sigma: f64| eta * (g0(sigma, tau) + 2.0 * theta * g0(sigma - 1.0, tau));
    let num_upper = 1.02 * ((1.0 - s).abs() * gamma_upper(s) + gamma_upper(s + 1.0));
    if !num_upper.is_finite() {
        return f64::INFINITY;
    }
    num_upper * num_upper / (2.0 * gamma_lower).exp_m1()
}

fn golden_section_max<F>(f: &F, mut a: f64, mut b: f64, rel: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut best = if fc >= fd { (c, fc) } else { (d, fd) };
    for _ in 0..200 {
        if (b - a) <= rel * b.abs() {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c)?;
            if fc > best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d)?;
            if fd > best.1 {
                best = (d, fd);
            }
        }
    }
    Ok(best)
}

/// Global maximum of Q(tau) over tau in [1e-6, 1e6].
///
/// Log-dense scan (60 points per decade, short-time prediction cluster
/// injected when it applies) followed by golden-section refinement in the
/// winning grid bracket. The scan stops early after two consecutive
/// decades whose entire Q stays below 1e-6 of the running maximum.
pub fn find_optimum(
    eta: f64,
    s: f64,
    theta: f64,
    quad: &QuadratureConfig,
) -> Result<OptimumResult> {
    if !(eta.is_finite() && eta > 0.0) {
        return Err(Error::InvalidParameter {
            name: "eta",
            value: eta,
            reason: "must be finite and positive",
        });
    }
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::InvalidParameter {
            name: "s",
            value: s,
            reason: "must be finite and positive",
        });
    }
    if !(theta.is_finite() && theta >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "theta",
            value: theta,
            reason: "must be finite and nonnegative",
        });
    }
    quad.validate()?;

    let q_of = |tau: f64| -> Result<f64> { qsnr(eta, s, ScaledPoint { tau, theta }, quad) };

    // extra probes around the short-time predictions when they apply
    let mut cluster: Vec<f64> = Vec::new();
    let mut push_cluster = |tp: f64| {
        if tp.is_finite() && tp < 0.05 && tp > 2e-6 {
            for k in 0..=30 {
                cluster.push(tp * 2f64.powf(-1.0 + k as f64 / 15.0));
            }
        }
    };
    if theta == 0.0 {
        if let Ok(tp) = tau_opt_short_time(eta, s, Regime::ZeroTemperature, None) {
            push_cluster(tp);
        }
    } else if let Ok(tp) = tau_opt_short_time(eta, s, Regime::HighTemperature, Some(theta)) {
        push_cluster(tp);
    }

    let mut evaluated: Vec<(f64, f64)> = Vec::new();
    let mut best_q = 0.0f64;
    let mut dead_decades = 0u32;

    for d in 0..=12 {
        let lo = 10f64.powi(d - 6);
        let mut taus: Vec<f64> = if d < 12 {
            (0..60)
                .map(|k| 10f64.powf((d - 6) as f64 + k as f64 / 60.0))
                .collect()
        } else {
            vec![1e6]
        };
        let hi = 10f64.powi(d - 5);
        taus.extend(cluster.iter().copied().filter(|t| *t >= lo && *t < hi));
        taus.sort_by(f64::total_cmp);
        taus.dedup();

        let screen_thresh = if theta > 0.0 && best_q > 0.0 {
            5e-7 * best_q
        } else {
            0.0
        };
        let row: Result<Vec<f64>> = taus
            .par_iter()
            .map(|&tau| {
                if screen_thresh > 0.0 && qsnr_upper_bound(eta, s, tau, theta) < screen_thresh {
                    return Ok(0.0);
                }
                q_of(tau)
            })
            .collect();
        let row = row?;

        let decade_max = row.iter().copied().fold(0.0f64, f64::max);
        evaluated.extend(taus.iter().copied().zip(row.iter().copied()));
        best_q = best_q.max(decade_max);

        if best_q > 0.0 {
            if decade_max < 1e-6 * best_q {
                dead_decades += 1;
                if dead_decades >= 2 {
                    break;
                }
            } else {
                dead_decades = 0;
            }
        }
    }

    if best_q <= 0.0 {
        return Err(Error::NoOptimum);
    }

    let best_idx = evaluated
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .map(|(i, _)| i)
        .expect("scan is nonempty");
    let bracket_lo = if best_idx > 0 {
        evaluated[best_idx - 1].0
    } else {
        evaluated[best_idx].0 * 0.85
    };
    let bracket_hi = if best_idx + 1 < evaluated.len() {
        evaluated[best_idx + 1].0
    } else {
        evaluated[best_idx].0 * 1.15
    };

    let (mut tau_opt, mut q_opt) = golden_section_max(&q_of, bracket_lo, bracket_hi, 1e-6)?;
    if evaluated[best_idx].1 > q_opt {
        tau_opt = evaluated[best_idx].0;
        q_opt = evaluated[best_idx].1;
    }

    let gamma_opt = gamma_scaled(
        eta,
        s,
        ScaledPoint { tau: tau_opt, theta },
        EvalMethod::Auto,
        quad,
    )?;
    Ok(OptimumResult {
        tau_opt,
        q_opt,
        gamma_opt,
        method: if theta == 0.0 {
            EvalMethod::ClosedFormZeroT
        } else {
            EvalMethod::Quadrature
        },
        short_time_regime: tau_opt < 0.1,
    })
}

/// Ratio of the universal high-temperature plateau to the probe's
/// zero-temperature optimum; r > 1 means heating the environment improves
/// the best attainable precision.
pub fn enhancement_factor(eta: f64, s: f64, quad: &QuadratureConfig) -> Result<EnhancementResult> {
    let cold = find_optimum(eta, s, 0.0, quad)?;
    let sat = q_sat();
    Ok(EnhancementResult {
        r: sat / cold.q_opt,
        q_sat: sat,
        q_opt_zero_t: cold.q_opt,
    })
}

/// Coupling strength at which the enhancement factor crosses 1, by
/// bisection over eta in [1e-3, 2].
pub fn critical_eta(s: f64, quad: &QuadratureConfig) -> Result<f64> {
    if !(s.is_finite() && s > 0.05) {
        return Err(Error::InvalidParameter {
            name: "s",
            value: s,
            reason: "critical coupling defined for s > 0.05",
        });
    }
    let f = |eta: f64| -> Result<f64> { Ok(enhancement_factor(eta, s, quad)?.r - 1.0) };
    let (mut lo, mut hi) = (1e-3f64, 2.0f64);
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo * f_hi >= 0.0 {
        return Err(Error::NoBracket { lo, hi, f_lo, f_hi });
    }
    let rising = f_lo < 0.0;
    while (hi - lo) > 1e-3 * 0.5 * (hi + lo) {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if (fm < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
