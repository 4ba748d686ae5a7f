//! Quantitative comparison of the three amplitude models: deviation
//! curves, tail-exponent extraction, and the exponential-to-power-law
//! crossover time that bounds the validity window of the whole-line
//! approximation.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::amplitudes::{
    background_series, evaluate_series, AmplitudeModel, HalflineStrategy,
};
use crate::error::{ensure_finite, EngineError};
use crate::formfactor::FormFactor;
use crate::quadrature::{rotated_contour_background, QuadratureConfig};
use crate::types::{AmplitudeSeries, Complex, Resonance, TimeGrid};

/// Inputs echoed into every report for reproducibility.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ParamsEcho {
    pub resonance: Resonance,
    pub form_factor: FormFactor,
    pub quadrature: QuadratureConfig,
}

/// Per-time deviation of the half-line amplitude from its approximations,
/// with the background tail exponent and the crossover time.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationReport {
    pub grid: TimeGrid,
    /// |halfline − fullline| / |fullline| per grid point.
    pub rel_dev: Vec<f64>,
    /// halfline / (−2πi·delta) per grid point.
    pub ratio_to_delta: Vec<Complex>,
    /// Log-log slope of the background magnitude over the tail window.
    pub tail_exponent: f64,
    /// Time where the background magnitude overtakes the pole term, if a
    /// bracket was found in the scan range.
    pub crossover_time: Option<f64>,
    /// The four series behind the derived columns: halfline, fullline,
    /// delta, background.
    pub series: Vec<AmplitudeSeries>,
    pub params: ParamsEcho,
}

/// Least-squares slope of log magnitude against log time.
///
/// The window is whatever slice the caller passes; it needs at least 8
/// points and strictly positive magnitudes.
pub fn tail_exponent(times: &[f64], magnitudes: &[f64]) -> Result<f64, EngineError> {
    let ctx = "tail_exponent";
    if times.len() != magnitudes.len() {
        return Err(EngineError::validation(
            format!("length mismatch: {} times, {} magnitudes", times.len(), magnitudes.len()),
            ctx,
        ));
    }
    if times.len() < 8 {
        return Err(EngineError::validation(
            format!("window needs >= 8 points, got {}", times.len()),
            ctx,
        ));
    }
    let mut xs = Vec::with_capacity(times.len());
    let mut ys = Vec::with_capacity(times.len());
    for (t, m) in times.iter().zip(magnitudes.iter()) {
        ensure_finite(*t, "t", ctx)?;
        ensure_finite(*m, "magnitude", ctx)?;
        if *t <= 0.0 || *m <= 0.0 {
            return Err(EngineError::validation(
                format!("log-log regression needs positive data, got t={t} |B|={m}"),
                ctx,
            ));
        }
        xs.push(t.ln());
        ys.push(m.ln());
    }
    let n = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys.iter()) {
        sxx += (x - x_mean) * (x - x_mean);
        sxy += (x - x_mean) * (y - y_mean);
    }
    if sxx == 0.0 {
        return Err(EngineError::validation("degenerate window: all times equal", ctx));
    }
    Ok(sxy / sxx)
}

/// Finds t_c where |background(t_c)| = |pole term(t_c)| by bracketing on
/// a log grid and bisecting. Exists because the pole term decays
/// exponentially while the background decays polynomially.
pub fn crossover_time(
    f: &FormFactor,
    r: &Resonance,
    cfg: &QuadratureConfig,
) -> Result<f64, EngineError> {
    let ctx = "crossover_time";
    let fz = f.eval_complex(r.pole())?;
    if fz.norm() == 0.0 {
        return Err(EngineError::validation(
            "f(z_R) = 0: no pole term to cross",
            ctx,
        ));
    }
    let pole_mag = |t: f64| 2.0 * PI * fz.norm() * (-0.5 * r.gamma() * t).exp();
    let bg_mag = |t: f64| -> Result<f64, EngineError> {
        let (bg, _) = rotated_contour_background(f, r.pole(), -t, cfg)?;
        Ok(bg.value.norm())
    };
    // gap(t) = ln|B| - ln|P|: negative before the crossover
    let gap = |t: f64| -> Result<f64, EngineError> { Ok(bg_mag(t)?.ln() - pole_mag(t).ln()) };

    let gamma = r.gamma();
    let scan: Vec<f64> = (0..=60)
        .map(|i| (0.05 / gamma) * (2000.0f64 / 0.05).powf(i as f64 / 60.0))
        .collect();
    let mut lo = None;
    let mut prev: Option<(f64, f64)> = None;
    for t in scan {
        let g = gap(t)?;
        if let Some((tp, gp)) = prev {
            if gp < 0.0 && g >= 0.0 {
                lo = Some((tp, t));
                break;
            }
        }
        if g < 0.0 {
            prev = Some((t, g));
        } else if prev.is_none() {
            return Err(EngineError::validation(
                "background already dominates at the smallest scan time",
                ctx,
            ));
        }
    }
    let (mut a, mut b) = lo.ok_or_else(|| {
        EngineError::validation("no crossover bracket found in the scan range", ctx)
    })?;
    // bisection on ln t until the defining equation holds to 1e-7
    for _ in 0..200 {
        let mid = ((a.ln() + b.ln()) * 0.5).exp();
        let g = gap(mid)?;
        if g.abs() <= 1e-7 {
            return Ok(mid);
        }
        if g < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
        if (b / a - 1.0).abs() < 1e-12 {
            return Ok(mid);
        }
    }
    Err(EngineError::nonconvergence(
        "bisection did not reach the crossover tolerance",
        ctx,
    ))
}

/// Computes all three amplitude series plus the background over a grid
/// and derives the deviation columns.
pub fn deviation_report(
    f: &FormFactor,
    r: &Resonance,
    grid: &TimeGrid,
    cfg: &QuadratureConfig,
    threads: usize,
) -> Result<DeviationReport, EngineError> {
    let ctx = "deviation_report";
    let fz = f.eval_complex(r.pole())?;
    if fz.norm() == 0.0 {
        return Err(EngineError::validation(
            "f(z_R) = 0: the full-line amplitude vanishes identically and relative deviations are undefined",
            ctx,
        ));
    }
    if grid.len() < 8 {
        return Err(EngineError::validation(
            "grid needs >= 8 points for the tail window",
            ctx,
        ));
    }
    let halfline = evaluate_series(
        AmplitudeModel::BwHalfline(HalflineStrategy::Auto),
        f,
        r,
        grid,
        cfg,
        threads,
    )?;
    let fullline = evaluate_series(AmplitudeModel::BwFullline, f, r, grid, cfg, threads)?;
    let delta = evaluate_series(AmplitudeModel::ComplexDelta, f, r, grid, cfg, threads)?;
    let background = background_series(f, r, grid, cfg, threads)?;

    let mut rel_dev = Vec::with_capacity(grid.len());
    let mut ratio_to_delta = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let h = halfline.values[i];
        let fl = fullline.values[i];
        let d = delta.values[i];
        rel_dev.push((h - fl).norm() / fl.norm());
        ratio_to_delta.push(h / (Complex64::new(0.0, -2.0 * PI) * d));
    }

    // tail window: last decade of the grid, falling back to the last 8 points
    let times = grid.samples();
    let t_lo = grid.stop() / 10.0;
    let mut start = times.iter().position(|t| *t >= t_lo).unwrap_or(0);
    if times.len() - start < 8 {
        start = times.len() - 8;
    }
    let mags: Vec<f64> = background.values[start..].iter().map(|v| v.norm()).collect();
    let tail = tail_exponent(&times[start..], &mags)?;

    let crossover = crossover_time(f, r, cfg).ok();

    Ok(DeviationReport {
        grid: grid.clone(),
        rel_dev,
        ratio_to_delta,
        tail_exponent: tail,
        crossover_time: crossover,
        series: vec![halfline, fullline, delta, background],
        params: ParamsEcho {
            resonance: *r,
            form_factor: f.clone(),
            quadrature: *cfg,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::Spacing;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig {
            abs_tol: 1e-12,
            ..QuadratureConfig::default()
        }
    }

    #[test]
    fn tail_exponent_recovers_synthetic_power_law() {
        let times: Vec<f64> = (0..16).map(|i| 10.0f64 * 1.5f64.powi(i)).collect();
        let mags: Vec<f64> = times.iter().map(|t| 2.7 * t.powi(-3)).collect();
        let slope = tail_exponent(&times, &mags).unwrap();
        assert!((slope + 3.0).abs() <= 1e-10);
    }

    #[test]
    fn tail_exponent_validates_window() {
        let times: Vec<f64> = (0..5).map(|i| 1.0 + i as f64).collect();
        let mags = vec![1.0; 5];
        assert!(tail_exponent(&times, &mags).is_err());
        let times: Vec<f64> = (0..8).map(|i| 1.0 + i as f64).collect();
        let mut mags = vec![1.0; 8];
        mags[3] = 0.0;
        assert!(tail_exponent(&times, &mags).is_err());
    }

    #[test]
    fn background_tail_exponent_flat_weight() {
        // slope -1 +/- 0.05 over Gamma*t in [50, 500]
        let r = Resonance::new(1.0, 0.1).unwrap();
        let grid = TimeGrid::new(500.0, 5000.0, 16, Spacing::Logarithmic).unwrap();
        let series =
            crate::amplitudes::background_series(&FormFactor::one(), &r, &grid, &cfg(), 1).unwrap();
        let mags: Vec<f64> = series.values.iter().map(|v| v.norm()).collect();
        let slope = tail_exponent(grid.samples(), &mags).unwrap();
        assert!((slope + 1.0).abs() <= 0.05, "slope={slope}");
    }

    #[test]
    fn background_tail_exponent_vanishing_weight() {
        // f = E has f(0) = 0: slope -2 +/- 0.1
        let r = Resonance::new(1.0, 0.1).unwrap();
        let f = FormFactor::polynomial(vec![0.0, 1.0]).unwrap();
        let grid = TimeGrid::new(500.0, 5000.0, 16, Spacing::Logarithmic).unwrap();
        let series = crate::amplitudes::background_series(&f, &r, &grid, &cfg(), 1).unwrap();
        let mags: Vec<f64> = series.values.iter().map(|v| v.norm()).collect();
        let slope = tail_exponent(grid.samples(), &mags).unwrap();
        assert!((slope + 2.0).abs() <= 0.1, "slope={slope}");
    }

    #[test]
    fn crossover_satisfies_its_defining_equation() {
        let r = Resonance::new(1.0, 0.1).unwrap();
        let f = FormFactor::one();
        let t_c = crossover_time(&f, &r, &cfg()).unwrap();
        let (bg, plan) = rotated_contour_background(&f, r.pole(), -t_c, &cfg()).unwrap();
        let p = plan.residue_term.norm();
        let residual = (bg.value.norm() - p).abs() / p;
        assert!(residual <= 1e-6, "residual={residual}");
        // bracketing: background dominates beyond, pole term before
        let (bg2, plan2) = rotated_contour_background(&f, r.pole(), -2.0 * t_c, &cfg()).unwrap();
        assert!(bg2.value.norm() > plan2.residue_term.norm());
        let (bg_half, plan_half) =
            rotated_contour_background(&f, r.pole(), -0.5 * t_c, &cfg()).unwrap();
        assert!(bg_half.value.norm() < plan_half.residue_term.norm());
    }

    #[test]
    fn crossover_grows_with_resonance_ratio() {
        let gamma = 0.1;
        let mut prev = 0.0;
        for ratio in [10.0, 100.0, 1000.0] {
            let r = Resonance::new(gamma * ratio, gamma).unwrap();
            let t_c = crossover_time(&FormFactor::one(), &r, &cfg()).unwrap();
            assert!(t_c > prev, "ratio={ratio}: {t_c} !> {prev}");
            prev = t_c;
        }
    }

    #[test]
    fn report_deviation_shrinks_with_ratio() {
        // rel_dev at Gamma*t = 1 smaller for E_R/Gamma = 200 than 2
        let mut devs = Vec::new();
        for ratio in [2.0, 200.0] {
            let gamma = 1.0 / ratio;
            let r = Resonance::new(1.0, gamma).unwrap();
            let grid = TimeGrid::new(0.2 / gamma, 2.0 / gamma, 9, Spacing::Logarithmic).unwrap();
            let report = deviation_report(&FormFactor::one(), &r, &grid, &cfg(), 1).unwrap();
            // middle of the grid is Gamma*t ~ 0.63; close enough for ordering
            let mid = grid.len() / 2;
            devs.push(report.rel_dev[mid]);
        }
        assert!(devs[1] < devs[0]);
    }

    #[test]
    fn report_ratio_to_delta_approaches_one() {
        // |ratio - 1| < 1e-2 at E_R/Gamma = 1000, Gamma*t = 1
        let gamma = 1e-3;
        let r = Resonance::new(1.0, gamma).unwrap();
        let grid = TimeGrid::new(0.5 / gamma, 2.0 / gamma, 8, Spacing::Logarithmic).unwrap();
        let report = deviation_report(&FormFactor::one(), &r, &grid, &cfg(), 1).unwrap();
        for ratio in &report.ratio_to_delta {
            assert!((ratio - 1.0).norm() < 1e-2);
        }
    }

    #[test]
    fn report_tail_deviation_exceeds_unity() {
        // deep tail (Gamma*t = 60): background dominates the pole term
        let r = Resonance::new(1.0, 0.1).unwrap();
        let grid = TimeGrid::new(100.0, 600.0, 8, Spacing::Logarithmic).unwrap();
        let report = deviation_report(&FormFactor::one(), &r, &grid, &cfg(), 1).unwrap();
        assert!(report.rel_dev.last().unwrap() >= &1.0);
    }

    #[test]
    fn report_algebraic_identity() {
        // ratio_to_delta equals halfline/fullline because the residue
        // identity makes the connecting factor exactly 1
        let r = Resonance::new(1.0, 0.1).unwrap();
        let grid = TimeGrid::new(1.0, 50.0, 9, Spacing::Logarithmic).unwrap();
        let f = FormFactor::exp_cutoff(5.0).unwrap();
        let report = deviation_report(&f, &r, &grid, &cfg(), 1).unwrap();
        let halfline = &report.series[0];
        let fullline = &report.series[1];
        for i in 0..grid.len() {
            let direct = halfline.values[i] / fullline.values[i];
            assert!((report.ratio_to_delta[i] - direct).norm() <= 1e-14 * direct.norm());
        }
    }

    #[test]
    fn report_rejects_vanishing_pole_weight() {
        // f(z_R) = 0 exactly when f(E) = E - 1 at... not representable with
        // a complex root; use numerator with a root at the pole itself
        let r = Resonance::new(1.0, 0.1).unwrap();
        // f = (E - z)(E - conj z) = E^2 - 2 E_R E + |z|^2 vanishes at z_R
        let z = r.pole();
        let f = FormFactor::polynomial(vec![z.norm_sqr(), -2.0 * z.re, 1.0]).unwrap();
        let grid = TimeGrid::new(1.0, 50.0, 9, Spacing::Logarithmic).unwrap();
        let err = deviation_report(&f, &r, &grid, &cfg(), 1).unwrap_err();
        assert_eq!(err.kind(), crate::ErrorKind::Validation);
    }
}
