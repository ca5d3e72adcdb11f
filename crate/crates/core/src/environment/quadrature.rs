//! Adaptive Gauss-Kronrod quadrature for the decoherence integral
//! eta * int_0^xmax x^(s-2) e^(-x) (1 - cos(x tau)) K(x) dx,
//! where K is 1 (zero temperature), coth(x/(2 theta)), or the classical
//! substitute 2 theta / x. The segment [0, x_min] is integrated
//! analytically from the power series of the integrand so that the
//! x^(s-2) endpoint behavior never meets a polynomial rule.

use super::QuadratureConfig;
use crate::error::{Error, Result};
use crate::specfun::gamma_fn;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy)]
pub(crate) enum Kernel {
    /// coth replaced by 1: exact zero temperature.
    Unit,
    /// Full thermal kernel coth(x / (2 theta)).
    Coth { theta: f64 },
    /// High-temperature substitute 2 theta / x.
    Classical { theta: f64 },
}

// 15-point Kronrod / 7-point Gauss pair (QUADPACK dqk15 nodes and weights).
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

const MAX_INITIAL_PANELS: usize = 400_000;

struct Panel {
    a: f64,
    b: f64,
    val: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let half = 0.5 * (b - a);
    let center = 0.5 * (a + b);
    let fc = f(center);

    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = fc.abs() * WGK[7];
    let mut fv = [0.0f64; 15];
    fv[7] = fc;

    for j in 0..3 {
        let dx = half * XGK[2 * j + 1];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[2 * j + 1] = f1;
        fv[13 - 2 * j] = f2;
        resg += WG[j] * (f1 + f2);
        resk += WGK[2 * j + 1] * (f1 + f2);
        resabs += WGK[2 * j + 1] * (f1.abs() + f2.abs());
    }
    for j in 0..4 {
        let dx = half * XGK[2 * j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[2 * j] = f1;
        fv[14 - 2 * j] = f2;
        resk += WGK[2 * j] * (f1 + f2);
        resabs += WGK[2 * j] * (f1.abs() + f2.abs());
    }

    let reskh = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[j] - reskh).abs() + (fv[14 - j] - reskh).abs());
    }
    resasc *= half.abs();
    resabs *= half.abs();

    let val = resk * half;
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (1.0f64).min((200.0 * err / resasc).powf(1.5));
    }
    let round_floor = 50.0 * f64::EPSILON * resabs;
    if round_floor > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(round_floor);
    }
    Panel { a, b, val, err }
}

/// Truncated product of two degree-6 polynomials (coefficients beyond x^6
/// are dropped; on [0, x_min] with x_min <= 1e-3 they are far below f64
/// resolution of the head integral).
fn conv7(a: &[f64; 7], b: &[f64; 7]) -> [f64; 7] {
    let mut c = [0.0; 7];
    for i in 0..7 {
        for j in 0..(7 - i) {
            c[i + j] += a[i] * b[j];
        }
    }
    c
}

/// Analytic integral over [0, x_min] of the series expansion of the
/// integrand, including the kernel factor.
fn head_series(eta: f64, s: f64, tau: f64, kernel: Kernel, x_min: f64) -> f64 {
    let t2 = tau * tau;
    // (1 - cos(x tau)) / x^2
    let osc = [
        t2 / 2.0,
        0.0,
        -t2 * t2 / 24.0,
        0.0,
        t2 * t2 * t2 / 720.0,
        0.0,
        -t2 * t2 * t2 * t2 / 40320.0,
    ];
    let expneg = [
        1.0,
        -1.0,
        1.0 / 2.0,
        -1.0 / 6.0,
        1.0 / 24.0,
        -1.0 / 120.0,
        1.0 / 720.0,
    ];
    let base = conv7(&osc, &expneg);

    // integral of x^(s + p) over [0, x_min] is x_min^(s+p+1) / (s+p+1)
    let power_int = |p: f64| x_min.powf(s + p + 1.0) / (s + p + 1.0);

    let series_sum = |coeff: &[f64; 7], shift: f64| -> f64 {
        let mut acc = 0.0;
        for (j, c) in coeff.iter().enumerate() {
            if *c != 0.0 {
                acc += c * power_int(j as f64 + shift);
            }
        }
        acc
    };

    let raw = match kernel {
        Kernel::Unit => series_sum(&base, 0.0),
        Kernel::Classical { theta } => 2.0 * theta * series_sum(&base, -1.0),
        Kernel::Coth { theta } => {
            // coth(x/(2 theta)) = 2 theta/x + x/(6 theta) - x^3/(360 theta^3) + x^5/(15120 theta^5)
            let kp = [
                0.0,
                1.0 / (6.0 * theta),
                0.0,
                -1.0 / (360.0 * theta.powi(3)),
                0.0,
                1.0 / (15120.0 * theta.powi(5)),
                0.0,
            ];
            let poly = conv7(&base, &kp);
            2.0 * theta * series_sum(&base, -1.0) + series_sum(&poly, 0.0)
        }
    };
    eta * raw
}

fn coth_pos(u: f64) -> f64 {
    if u < 1e-6 {
        1.0 / u + u / 3.0
    } else if u > 20.0 {
        1.0
    } else {
        1.0 + 2.0 / (2.0 * u).exp_m1()
    }
}

/// Full adaptive evaluation of the decoherence integral. `cfg.max_panels`
/// bounds the number of refinement bisections on top of the initial panel
/// set; the initial set itself is capped at 400k panels, past which the
/// evaluation switches to the exact non-oscillatory form of the kernel
/// (closed bracket for Unit and Classical, Bose expansion for Coth).
pub(crate) fn integrate_decoherence(
    eta: f64,
    s: f64,
    tau: f64,
    kernel: Kernel,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if tau == 0.0 {
        return Ok(0.0);
    }

    let mut x_min = (1e-3f64).min(0.1 / tau.max(1.0));
    if let Kernel::Coth { theta } = kernel {
        x_min = x_min.min(0.2 * theta);
    }
    let theta_for_range = match kernel {
        Kernel::Unit => 0.0,
        Kernel::Coth { theta } | Kernel::Classical { theta } => theta,
    };
    let x_max = cfg.upper_cutoff(s, theta_for_range);

    let f = move |x: f64| -> f64 {
        let osc = 2.0 * (0.5 * x * tau).sin().powi(2);
        let base = eta * x.powf(s - 2.0) * (-x).exp() * osc;
        match kernel {
            Kernel::Unit => base,
            Kernel::Coth { theta } => base * coth_pos(x / (2.0 * theta)),
            Kernel::Classical { theta } => base * 2.0 * theta / x,
        }
    };

    // Geometric backbone, then uniform subdivision so that no panel spans
    // more than a quarter period of cos(x tau).
    let mut edges = vec![x_min];
    let mut x = x_min;
    while x < 1.0_f64.min(x_max) {
        x = (x * 2.0).min(x_max);
        edges.push(x);
    }
    while x < x_max {
        x = (x * 1.4).min(x_max);
        edges.push(x);
    }
    let cap = if tau > 1.0 { PI / (2.0 * tau) } else { f64::INFINITY };

    let mut count: usize = 0;
    for w in edges.windows(2) {
        let pieces = if cap.is_finite() {
            (((w[1] - w[0]) / cap).ceil() as usize).max(1)
        } else {
            1
        };
        count += pieces;
    }
    // Past a few hundred thousand quarter-period panels the oscillatory
    // sum costs more than it resolves; every kernel has an exact
    // non-oscillatory representation there, so switch to it instead.
    if count > MAX_INITIAL_PANELS {
        return match kernel {
            Kernel::Unit => Ok(eta * super::g0_continued(s, tau)?),
            Kernel::Classical { theta } => {
                Ok(2.0 * theta * eta * super::g0_continued(s - 1.0, tau)?)
            }
            Kernel::Coth { theta } => gamma_bose_series(eta, s, tau, theta, cfg),
        };
    }

    let mut heap: BinaryHeap<Panel> = BinaryHeap::with_capacity(count + cfg.max_panels);
    let mut sum = 0.0;
    let mut err_total = 0.0;
    for w in edges.windows(2) {
        let pieces = if cap.is_finite() {
            (((w[1] - w[0]) / cap).ceil() as usize).max(1)
        } else {
            1
        };
        let step = (w[1] - w[0]) / pieces as f64;
        for k in 0..pieces {
            let a = w[0] + step * k as f64;
            let b = if k + 1 == pieces { w[1] } else { a + step };
            let p = gk15(&f, a, b);
            sum += p.val;
            err_total += p.err;
            heap.push(p);
        }
    }

    let head = head_series(eta, s, tau, kernel, x_min);
    let mut splits = 0usize;
    loop {
        let tol = cfg.abs_tol.max(cfg.rel_tol * (head + sum).abs());
        if err_total <= tol || splits >= cfg.max_panels {
            break;
        }
        let worst = heap.pop().expect("refinement heap never empties");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            break;
        }
        sum -= worst.val;
        err_total -= worst.err;
        let left = gk15(&f, worst.a, mid);
        let right = gk15(&f, mid, worst.b);
        sum += left.val + right.val;
        err_total += left.err + right.err;
        heap.push(left);
        heap.push(right);
        splits += 1;
    }

    // Recompute totals in spatial order so the result does not depend on
    // heap internals and accumulation drift.
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let mut total = 0.0;
    let mut comp = 0.0;
    let mut err_final = 0.0;
    for p in &panels {
        let y = p.val - comp;
        let t = total + y;
        comp = (t - total) - y;
        total = t;
        err_final += p.err;
    }
    let result = head + total;

    let tol = cfg.abs_tol.max(cfg.rel_tol * result.abs());
    if err_final > tol {
        return Err(Error::QuadratureNonConvergence {
            achieved: err_final,
            required: tol,
            panels: splits,
        });
    }
    Ok(result.max(0.0))
}

/// Thermal decoherence factor through the Bose expansion of the kernel,
/// coth(x/(2 theta)) = 1 + 2 sum_k exp(-k x / theta). Each term rescales
/// into the zero-temperature bracket, giving
/// gamma / eta = g0(s, tau) + 2 sum_{k>=1} beta_k^(1-s) g0(s, tau / beta_k)
/// with beta_k = 1 + k / theta, so no oscillatory integral is ever
/// touched. The sum is truncated at K terms and continued with the
/// midpoint Euler-Maclaurin tail
/// sum_{k>K} t(k) = int_{K+1/2}^inf t dk + t'(K+1/2) / 24 + ...,
/// whose integral substitutes into 2 theta tau^(2-s) int_0^u v^(s-3) g0(s,v) dv,
/// smooth and non-oscillatory: analytic below v = 1/2, Gauss-Kronrod
/// above. K doubles until two successive truncations agree.
pub(crate) fn gamma_bose_series(
    eta: f64,
    s: f64,
    tau: f64,
    theta: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if tau == 0.0 {
        return Ok(0.0);
    }
    // s is fixed across every inner evaluation; validating the bracket and
    // Gamma(s) once lets the hot loops run infallibly.
    super::g0_continued(s, 1.0)?;
    let gamma_s = gamma_fn(s)?;

    const MAX_TERMS: usize = 2_000_000;
    let mut k_terms: usize = (4.0 * theta).ceil().max(64.0) as usize;
    let mut prev = f64::NAN;
    loop {
        let val = bose_sum_with_tail(eta, s, tau, theta, gamma_s, k_terms, cfg)?;
        let tol = cfg.abs_tol.max(cfg.rel_tol * val.abs());
        if (val - prev).abs() <= 0.5 * tol {
            return Ok(val.max(0.0));
        }
        if k_terms >= MAX_TERMS {
            return Err(Error::QuadratureNonConvergence {
                achieved: (val - prev).abs(),
                required: tol,
                panels: k_terms,
            });
        }
        prev = val;
        k_terms = (k_terms * 2).min(MAX_TERMS);
    }
}

fn bose_sum_with_tail(
    eta: f64,
    s: f64,
    tau: f64,
    theta: f64,
    gamma_s: f64,
    k_terms: usize,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let mut sum = g0_smooth(s, tau);
    let mut comp = 0.0;
    for k in 1..=k_terms {
        let beta = 1.0 + k as f64 / theta;
        let term = 2.0 * beta.powf(1.0 - s) * g0_smooth(s, tau / beta);
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }

    let beta_mid = 1.0 + (k_terms as f64 + 0.5) / theta;
    let u_mid = tau / beta_mid;
    sum += em_tail_integral(s, tau, theta, u_mid, cfg)?;
    // midpoint Euler-Maclaurin derivative correction, t'(K+1/2)/24
    let du = gamma_s * (s * u_mid.atan()).sin() * (1.0 + u_mid * u_mid).powf(-s / 2.0);
    let t_prime = (2.0 / theta)
        * beta_mid.powf(-s)
        * ((1.0 - s) * g0_smooth(s, u_mid) - u_mid * du);
    sum += t_prime / 24.0;
    Ok(eta * sum)
}

/// Zero-temperature bracket, routed through its power series below
/// u = 1/2 where the closed form loses digits to cancellation.
fn g0_smooth(s: f64, u: f64) -> f64 {
    if u < 0.5 {
        g0_power_series(s, u)
    } else {
        super::g0_continued(s, u).expect("bracket order validated by caller")
    }
}

/// g0(s, u) = sum_{m>=1} (-1)^(m+1) Gamma(s-1+2m) u^(2m) / (2m)!
fn g0_power_series(s: f64, u: f64) -> f64 {
    if u == 0.0 {
        return 0.0;
    }
    let u2 = u * u;
    let mut gam = gamma_fn(s + 1.0).expect("s + 1 > 0");
    let mut fact = 2.0;
    let mut pu = u2;
    let mut sign = 1.0;
    let mut acc = 0.0;
    for m in 1..=40u32 {
        let term = sign * gam * pu / fact;
        acc += term;
        if term.abs() <= 1e-17 * acc.abs() {
            break;
        }
        let a = s - 1.0 + 2.0 * f64::from(m);
        gam *= a * (a + 1.0);
        fact *= (2.0 * f64::from(m) + 1.0) * (2.0 * f64::from(m) + 2.0);
        pu *= u2;
        sign = -sign;
    }
    acc
}

/// int_{K+1/2}^inf t(k) dk = 2 theta tau^(2-s) int_0^{u_mid} v^(s-3) g0(s,v) dv.
fn em_tail_integral(
    s: f64,
    tau: f64,
    theta: f64,
    u_mid: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let pref = 2.0 * theta * tau.powf(2.0 - s);
    let cut = u_mid.min(0.5);

    // analytic piece below the cut, termwise from the g0 power series:
    // sum_m (-1)^(m+1) Gamma(s-1+2m) cut^(s-2+2m) / ((2m)! (s-2+2m))
    let mut acc = 0.0;
    let mut gam = gamma_fn(s + 1.0)?;
    let mut fact = 2.0;
    let mut pu = cut.powf(s);
    let mut sign = 1.0;
    for m in 1..=60u32 {
        let denom = s - 2.0 + 2.0 * f64::from(m);
        let term = sign * gam * pu / (fact * denom);
        acc += term;
        if term.abs() <= 1e-17 * acc.abs() {
            break;
        }
        let a = s - 1.0 + 2.0 * f64::from(m);
        gam *= a * (a + 1.0);
        fact *= (2.0 * f64::from(m) + 1.0) * (2.0 * f64::from(m) + 2.0);
        pu *= cut * cut;
        sign = -sign;
    }

    if u_mid > 0.5 {
        acc += smooth_bracket_quad(s, 0.5, u_mid, cfg)?;
    }
    Ok(pref * acc)
}

/// Adaptive Gauss-Kronrod for int v^(s-3) g0(s,v) dv on [lo, hi]; the
/// integrand is smooth and free of oscillation, so a geometric backbone
/// plus a small refinement budget reaches full precision.
fn smooth_bracket_quad(s: f64, lo: f64, hi: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let f = move |v: f64| {
        v.powf(s - 3.0) * super::g0_continued(s, v).expect("bracket order validated by caller")
    };
    let mut heap: BinaryHeap<Panel> = BinaryHeap::new();
    let mut sum = 0.0;
    let mut err_total = 0.0;
    let mut x = lo;
    while x < hi {
        let next = (x * 2.0).min(hi);
        let p = gk15(&f, x, next);
        sum += p.val;
        err_total += p.err;
        heap.push(p);
        x = next;
    }

    let mut splits = 0usize;
    loop {
        let tol = (1e-12 * sum.abs()).max(1e-300);
        if err_total <= tol || splits >= 10_000 {
            break;
        }
        let worst = heap.pop().expect("refinement heap never empties");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            break;
        }
        sum -= worst.val;
        err_total -= worst.err;
        let left = gk15(&f, worst.a, mid);
        let right = gk15(&f, mid, worst.b);
        sum += left.val + right.val;
        err_total += left.err + right.err;
        heap.push(left);
        heap.push(right);
        splits += 1;
    }

    let tol = cfg.abs_tol.max(1e-10 * sum.abs());
    if err_total > tol {
        return Err(Error::QuadratureNonConvergence {
            achieved: err_total,
            required: tol,
            panels: splits,
        });
    }
    Ok(sum)
}
