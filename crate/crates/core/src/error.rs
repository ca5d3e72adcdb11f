use thiserror::Error;

/// Crate-wide error type. Numerical routines return these instead of NaN
/// so callers can distinguish "outside the model" from "algorithm failed".
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at non-positive integer {0}")]
    GammaPole(f64),

    #[error("lambert W principal branch undefined for argument {0} < -1/e")]
    LambertWDomain(f64),

    #[error("coth undefined at zero")]
    CothDomain,

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error(
        "quadrature failed to converge: achieved {achieved:.3e}, required {required:.3e} after {panels} panels"
    )]
    QuadratureNonConvergence {
        achieved: f64,
        required: f64,
        panels: usize,
    },

    #[error("method {method} not applicable at theta = {theta}")]
    MethodRegime { method: &'static str, theta: f64 },

    #[error("high-temperature expansion needs s >= {floor}, got s = {s}")]
    OhmicityFloor { s: f64, floor: f64 },

    #[error("no optimum found in scan window")]
    NoOptimum,

    #[error("no sign change on bracket [{lo}, {hi}]: f(lo) = {f_lo:.3e}, f(hi) = {f_hi:.3e}")]
    NoBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error(
        "decoherence exponent not monotone in cutoff over [{lo}, {hi}] at s = {s}: estimate ambiguous"
    )]
    NonMonotonicGamma { s: f64, lo: f64, hi: f64 },

    #[error("Fisher information singular: no coherence decay at this point")]
    SingularFisher,

    #[error("measurement variance vanishes at this point")]
    ZeroVariance,
}

pub type Result<T> = std::result::Result<T, Error>;
