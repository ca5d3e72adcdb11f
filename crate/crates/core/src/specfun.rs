//! Special functions needed by the decoherence formulas: the Euler gamma
//! function on the real line, the principal branch of the Lambert W
//! function, and a hyperbolic cotangent that stays accurate near zero.

use crate::error::{Error, Result};
use std::f64::consts::PI;

// Lanczos coefficients, g = 7, n = 9 (GSL / Numerical Recipes table).
const LANCZOS_G: f64 = 7.0;
const LANCZOS_P: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// Euler gamma function for real arguments.
///
/// Poles at 0, -1, -2, ... are reported as errors rather than infinities;
/// everything within 1e-12 of a non-positive integer counts as a pole.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::InvalidParameter {
            name: "x",
            value: x,
            reason: "gamma argument must be finite",
        });
    }
    if x <= 0.5 {
        let nearest = x.round();
        if nearest <= 0.0 && (x - nearest).abs() < 1e-12 {
            return Err(Error::GammaPole(x));
        }
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection: gamma(x) gamma(1-x) = pi / sin(pi x)
        PI / ((PI * x).sin() * gamma_unchecked(1.0 - x))
    } else {
        let z = x - 1.0;
        let mut acc = LANCZOS_P[0];
        for (i, p) in LANCZOS_P.iter().enumerate().skip(1) {
            acc += p / (z + i as f64);
        }
        let t = z + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
    }
}

/// Principal branch W0 of the Lambert W function, solving w e^w = x
/// for x >= -1/e.
///
/// Halley iteration on top of a piecewise initial guess; near the branch
/// point the Puiseux series is returned directly because the derivative
/// of w e^w vanishes there.
pub fn lambert_w0(x: f64) -> Result<f64> {
    const NEG_INV_E: f64 = -0.36787944117144233;
    if !x.is_finite() {
        return Err(Error::InvalidParameter {
            name: "x",
            value: x,
            reason: "lambert W argument must be finite",
        });
    }
    if x < NEG_INV_E - 1e-14 {
        return Err(Error::LambertWDomain(x));
    }
    if x == 0.0 {
        return Ok(0.0);
    }

    let xc = x.max(NEG_INV_E);
    let mut w;
    if xc < -0.25 {
        // Branch-point series in p = sqrt(2 (e x + 1))
        let p = (2.0 * (std::f64::consts::E * xc + 1.0)).max(0.0).sqrt();
        w = -1.0 + p - p * p / 3.0 + 11.0 * p.powi(3) / 72.0 - 43.0 * p.powi(4) / 540.0;
        if p <= 1e-4 {
            return Ok(w);
        }
    } else if xc < 1.0 {
        w = xc * (1.0 - xc + 1.5 * xc * xc) / (1.0 + 0.5 * xc);
    } else {
        let l = xc.ln();
        w = l - l.ln().max(0.0);
    }

    for _ in 0..50 {
        let ew = w.exp();
        let f = w * ew - xc;
        let fp = ew * (1.0 + w);
        let fpp = ew * (2.0 + w);
        let denom = fp - 0.5 * f * fpp / fp;
        if denom == 0.0 {
            break;
        }
        let dw = f / denom;
        w -= dw;
        if dw.abs() <= 1e-15 * (1.0 + w.abs()) {
            break;
        }
    }
    Ok(w.max(-1.0))
}

/// Hyperbolic cotangent, odd in x, with a Laurent series below 1e-6 and
/// saturation to +-1 above |x| = 20 where the true value is within one
/// ulp of unity.
pub fn coth_stable(x: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::CothDomain);
    }
    if !x.is_finite() {
        if x.is_nan() {
            return Err(Error::InvalidParameter {
                name: "x",
                value: x,
                reason: "coth argument must not be NaN",
            });
        }
        return Ok(x.signum());
    }
    let ax = x.abs();
    let val = if ax < 1e-6 {
        1.0 / ax + ax / 3.0 - ax.powi(3) / 45.0
    } else if ax > 20.0 {
        1.0
    } else {
        1.0 + 2.0 / (2.0 * ax).exp_m1()
    };
    Ok(val.copysign(x))
}
