//! Complex-argument exponential integral E₁ on the principal branch and
//! the closed form of the half-line resonant kernel built from it.
//!
//! Three evaluation methods cover the plane off the cut (−∞, 0]:
//! a power series for small `|w|`, a continued fraction in the middle
//! range, and the asymptotic series for large `|w|`. Near the cut at
//! moderate `|w|` the continued fraction converges too slowly, but there
//! `−w` lies near the positive real axis so the power series is
//! cancellation-free; the dispatcher picks accordingly.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::EngineError;
use crate::types::{ensure_finite_complex, Complex};

/// Euler–Mascheroni constant.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Radius below which the power series is used.
const SERIES_RADIUS: f64 = 4.0;
/// Radius above which the asymptotic series is used.
const ASYMPTOTIC_RADIUS: f64 = 40.0;
/// |arg w| beyond which the continued fraction is swapped for the series
/// (the series is cancellation-free there, the fraction near-stalls).
const NEAR_CUT_ARG: f64 = 3.0 * PI / 4.0;

/// Which method produced an E₁ evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum E1Method {
    PowerSeries,
    ContinuedFraction,
    Asymptotic,
}

/// E₁ evaluation with its method and a heuristic error estimate.
///
/// `est_error` is a non-rigorous bound: last-term magnitude plus a
/// cancellation term for the series, the final correction size for the
/// continued fraction, and the first omitted term for the asymptotic
/// series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct E1Result {
    pub value: Complex,
    pub method: E1Method,
    pub est_error: f64,
}

fn on_cut(w: Complex) -> bool {
    w.im == 0.0 && w.re <= 0.0
}

fn validate_off_cut(w: Complex, ctx: &str) -> Result<(), EngineError> {
    ensure_finite_complex(w, "w", ctx)?;
    if on_cut(w) {
        return Err(EngineError::branch_cut(
            format!("w = {w} lies on the cut (-inf, 0]"),
            ctx,
        ));
    }
    Ok(())
}

/// Power series: E₁(w) = −γ − ln w − Σ_{k≥1} (−w)^k / (k·k!).
///
/// Returns the unscaled value and an absolute error estimate that tracks
/// the cancellation level (largest intermediate term times epsilon).
pub(crate) fn e1_series(w: Complex) -> (Complex, f64) {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut pow = Complex64::new(1.0, 0.0); // (-w)^k / k!
    let mut max_term = 0.0f64;
    let mut last_term = 0.0f64;
    for k in 1..=200 {
        pow *= -w / k as f64;
        let term = pow / k as f64;
        sum += term;
        last_term = term.norm();
        max_term = max_term.max(last_term);
        if last_term <= 1e-18 * (1.0 + sum.norm()) {
            break;
        }
    }
    let value = -EULER_GAMMA - w.ln() - sum;
    let est = f64::EPSILON * (max_term + value.norm() + 1.0) + last_term;
    (value, est)
}

/// Continued fraction (modified Lentz) for the scaled function
/// e^w·E₁(w) = 1/(w+1− 1²/(w+3− 2²/(w+5− …))).
///
/// Returns the scaled value and a relative error estimate.
pub(crate) fn e1_cf_scaled(w: Complex) -> (Complex, f64) {
    // small enough to be negligible, large enough that norm_sqr in complex
    // division cannot underflow
    const TINY: f64 = 1e-30;
    let tiny = Complex64::new(TINY, 0.0);
    let mut f = tiny;
    let mut c = f;
    let mut d = Complex64::new(0.0, 0.0);
    let mut rel = 1.0f64;
    for j in 0..5000 {
        let (a, b) = if j == 0 {
            (Complex64::new(1.0, 0.0), w + 1.0)
        } else {
            let jf = j as f64;
            (Complex64::new(-jf * jf, 0.0), w + (2.0 * jf + 1.0))
        };
        d = b + a * d;
        if d.norm() < TINY {
            d = tiny;
        }
        c = b + a / c;
        if c.norm() < TINY {
            c = tiny;
        }
        d = d.inv();
        let delta = c * d;
        f *= delta;
        rel = (delta - 1.0).norm();
        if rel < 1e-16 {
            break;
        }
    }
    (f, rel + 8.0 * f64::EPSILON)
}

/// Asymptotic series for the scaled function:
/// e^w·E₁(w) ~ (1/w)·Σ_k (−1)^k k!/w^k, truncated at the smallest term.
///
/// Returns the scaled value and a relative error estimate.
pub(crate) fn e1_asymptotic_scaled(w: Complex) -> (Complex, f64) {
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut smallest = f64::INFINITY;
    for k in 1..=80 {
        let next = term * (-(k as f64)) / w;
        if next.norm() >= term.norm() {
            break; // divergence onset: stop at the smallest term
        }
        term = next;
        sum += term;
        smallest = term.norm();
        if smallest < 1e-18 {
            break;
        }
    }
    let value = sum / w;
    let rel = smallest.min(1.0) + 8.0 * f64::EPSILON;
    (value, rel)
}

fn pick_method(w: Complex) -> E1Method {
    let r = w.norm();
    if r <= SERIES_RADIUS {
        E1Method::PowerSeries
    } else if r >= ASYMPTOTIC_RADIUS {
        E1Method::Asymptotic
    } else if w.arg().abs() > NEAR_CUT_ARG {
        E1Method::PowerSeries
    } else {
        E1Method::ContinuedFraction
    }
}

/// Principal-branch exponential integral E₁(w), `w` off the cut (−∞, 0].
pub fn exp_integral_e1(w: Complex) -> Result<E1Result, EngineError> {
    validate_off_cut(w, "exp_integral_e1")?;
    let method = pick_method(w);
    let (value, est_error) = match method {
        E1Method::PowerSeries => e1_series(w),
        E1Method::ContinuedFraction => {
            let (g, rel) = e1_cf_scaled(w);
            let v = g * (-w).exp();
            (v, v.norm() * rel)
        }
        E1Method::Asymptotic => {
            let (g, rel) = e1_asymptotic_scaled(w);
            let v = g * (-w).exp();
            (v, v.norm() * rel)
        }
    };
    Ok(E1Result {
        value,
        method,
        est_error,
    })
}

/// Scaled exponential integral e^w·E₁(w).
///
/// Free of the e^{−w} overflow/underflow of the unscaled function; the
/// half-line kernel uses this form so that arbitrarily large `Γt` stays
/// representable.
pub fn exp_integral_e1_scaled(w: Complex) -> Result<E1Result, EngineError> {
    validate_off_cut(w, "exp_integral_e1_scaled")?;
    let method = pick_method(w);
    let (value, est_error) = match method {
        E1Method::PowerSeries => {
            let (v, est) = e1_series(w);
            let scale = w.exp();
            (scale * v, scale.norm() * est)
        }
        E1Method::ContinuedFraction => {
            let (g, rel) = e1_cf_scaled(w);
            (g, g.norm() * rel)
        }
        E1Method::Asymptotic => {
            let (g, rel) = e1_asymptotic_scaled(w);
            (g, g.norm() * rel)
        }
    };
    Ok(E1Result {
        value,
        method,
        est_error,
    })
}

/// Closed form of the half-line resonant kernel
/// `K(z, t) = ∫₀^∞ e^{−iEt}/(E − z) dE` for a pole `z` in the open fourth
/// quadrant and `t > 0`:
///
/// ```text
/// K(z, t) = e^{−izt}·(E₁(−izt) − 2πi)
///         = [e^w·E₁(w)] − 2πi·e^w,   w = −izt
/// ```
///
/// The substitution `v = it(E − z)` maps the half-line onto a vertical
/// ray from `w`; rotating that ray onto the E₁ path sweeps the pole of
/// `e^{−v}/v` at the origin, which contributes the `−2πi` term. The
/// second form uses the scaled E₁ so nothing overflows for large `Γt`.
pub fn bw_halfline_kernel(z: Complex, t: f64) -> Result<Complex, EngineError> {
    let ctx = "bw_halfline_kernel";
    ensure_finite_complex(z, "z", ctx)?;
    crate::error::ensure_finite(t, "t", ctx)?;
    if t <= 0.0 {
        return Err(EngineError::domain(format!("t must be > 0, got {t}"), ctx));
    }
    if !(z.re > 0.0 && z.im < 0.0) {
        return Err(EngineError::validation(
            format!("pole must lie in the open fourth quadrant, got {z}"),
            ctx,
        ));
    }
    // w = -i*z*t, exactly (z.im*t, -z.re*t): third quadrant for valid inputs.
    let w = Complex64::new(z.im * t, -z.re * t);
    if on_cut(w) {
        return Err(EngineError::branch_cut(
            format!("-izt = {w} lies on the E1 cut"),
            ctx,
        ));
    }
    let scaled = exp_integral_e1_scaled(w)?;
    Ok(scaled.value - Complex64::new(0.0, 2.0 * PI) * w.exp())
}
