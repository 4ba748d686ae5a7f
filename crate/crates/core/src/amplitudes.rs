//! The three amplitude models and their pole/background decomposition.
//!
//! * [`complex_delta_amp`] — f(z_R)·e^{−iE_R t}·e^{−Γt/2}, defined for
//!   t > 0 only; no quadrature.
//! * [`bw_fullline_amp`] — the whole-real-line value
//!   (2π/i)·f(z_R)·e^{−iE_R t}·e^{−Γt/2}, exactly −2πi times the
//!   complex-delta amplitude.
//! * [`bw_halfline_amp`] — the integral over the physical spectrum
//!   [0, ∞), by contour rotation (residue + smooth background) or by the
//!   brute-force oscillatory oracle.
//! * [`decompose`] — pole term and background separately, quantifying
//!   exactly what extending the integration range discards.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{ensure_finite, EngineError};
use crate::formfactor::{FormFactor, RotationDirection};
use crate::parallel::map_ordered;
use crate::quadrature::{
    integrate_oscillatory_halfline, rotated_contour_background, IntegralResult, QuadratureConfig,
};
use crate::types::{AmplitudeSeries, Complex, ModelTag, Resonance, TimeGrid};

/// Evaluation strategy for the half-line amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HalflineStrategy {
    /// Rotate the contour; requires an admissible form factor.
    Rotation,
    /// Brute-force oscillatory quadrature; no admissibility needed.
    DirectOracle,
    /// Rotation when admissible, oracle otherwise.
    Auto,
}

/// One of the three amplitude models, with the half-line strategy choice
/// attached where it applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmplitudeModel {
    BwHalfline(HalflineStrategy),
    BwFullline,
    ComplexDelta,
}

impl AmplitudeModel {
    pub fn tag(&self) -> ModelTag {
        match self {
            AmplitudeModel::BwHalfline(_) => ModelTag::BwHalfline,
            AmplitudeModel::BwFullline => ModelTag::BwFullline,
            AmplitudeModel::ComplexDelta => ModelTag::ComplexDelta,
        }
    }
}

/// Pole-term/background split of the half-line amplitude at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition {
    pub pole_term: Complex,
    pub background: Complex,
    pub total: Complex,
    pub est_error: f64,
}

fn validate_time_positive(t: f64, ctx: &str) -> Result<(), EngineError> {
    ensure_finite(t, "t", ctx)?;
    if t <= 0.0 {
        return Err(EngineError::domain(
            format!("t must be > 0 (evolution defined only there), got {t}"),
            ctx,
        ));
    }
    Ok(())
}

/// f(z_R)·e^{−iE_R t}·e^{−Γt/2} — the value the complex delta
/// distribution picks out of the half-line integral. Defined for t > 0
/// only; no quadrature involved.
pub fn complex_delta_amp(f: &FormFactor, r: &Resonance, t: f64) -> Result<Complex, EngineError> {
    validate_time_positive(t, "complex_delta_amp")?;
    let fz = f.eval_complex(r.pole())?;
    Ok(fz * Complex64::from_polar((-0.5 * r.gamma() * t).exp(), -r.e_r() * t))
}

/// (2π/i)·f(z_R)·e^{−iE_R t}·e^{−Γt/2} — the closed form of the
/// whole-real-line integral, exactly −2πi·complex_delta_amp.
pub fn bw_fullline_amp(f: &FormFactor, r: &Resonance, t: f64) -> Result<Complex, EngineError> {
    validate_time_positive(t, "bw_fullline_amp")?;
    let adm = f.admissibility(RotationDirection::Lower);
    if !adm.admissible {
        return Err(EngineError::inadmissible(adm.reason, "bw_fullline_amp"));
    }
    let fz = f.eval_complex(r.pole())?;
    let phase = (Complex64::new(0.0, -t) * r.pole()).exp();
    Ok(Complex64::new(0.0, -2.0 * PI) * fz * phase)
}

/// ∫₀^∞ e^{−iEt}·f(E)/(E − z_R) dE over the physical spectrum.
///
/// Any t ≠ 0 is accepted: t > 0 rotates toward −i∞ and picks up the pole
/// residue; t < 0 (precursor side) rotates toward +i∞ where the fourth-
/// quadrant pole is never swept.
pub fn bw_halfline_amp(
    f: &FormFactor,
    r: &Resonance,
    t: f64,
    cfg: &QuadratureConfig,
    strategy: HalflineStrategy,
) -> Result<IntegralResult, EngineError> {
    let ctx = "bw_halfline_amp";
    ensure_finite(t, "t", ctx)?;
    if t == 0.0 {
        return Err(EngineError::domain(
            "t = 0: the half-line integral needs a nonzero phase coefficient",
            ctx,
        ));
    }
    halfline_integral(f, r.pole(), -t, cfg, strategy)
}

/// General phase-coefficient engine entry: ∫₀^∞ f(E)·e^{iμE}/(E − z) dE.
/// Case studies use this directly with their own μ bookkeeping.
pub fn halfline_integral(
    f: &FormFactor,
    z: Complex,
    mu: f64,
    cfg: &QuadratureConfig,
    strategy: HalflineStrategy,
) -> Result<IntegralResult, EngineError> {
    match strategy {
        HalflineStrategy::DirectOracle => integrate_oscillatory_halfline(f, z, mu, cfg),
        HalflineStrategy::Rotation => {
            let (bg, plan) = rotated_contour_background(f, z, mu, cfg)?;
            Ok(IntegralResult {
                value: plan.residue_term + bg.value,
                est_error: bg.est_error,
                evals: bg.evals,
                converged: bg.converged,
            })
        }
        HalflineStrategy::Auto => {
            let direction = if mu > 0.0 {
                RotationDirection::Upper
            } else {
                RotationDirection::Lower
            };
            if f.admissibility(direction).admissible {
                halfline_integral(f, z, mu, cfg, HalflineStrategy::Rotation)
            } else {
                halfline_integral(f, z, mu, cfg, HalflineStrategy::DirectOracle)
            }
        }
    }
}

/// Splits the half-line amplitude at time t into the full-line pole term
/// and the rotated-contour background; total is their sum.
pub fn decompose(
    f: &FormFactor,
    r: &Resonance,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<Decomposition, EngineError> {
    validate_time_positive(t, "decompose")?;
    let pole_term = bw_fullline_amp(f, r, t)?;
    let (bg, plan) = rotated_contour_background(f, r.pole(), -t, cfg)?;
    debug_assert!(plan.pole_swept);
    debug_assert!((plan.residue_term - pole_term).norm() <= 1e-12 * pole_term.norm().max(1e-300));
    Ok(Decomposition {
        pole_term,
        background: bg.value,
        total: pole_term + bg.value,
        est_error: bg.est_error,
    })
}

/// Evaluates one model over a time grid. Grid points are independent;
/// `threads > 1` computes them on a deterministic ordered pool.
pub fn evaluate_series(
    model: AmplitudeModel,
    f: &FormFactor,
    r: &Resonance,
    grid: &TimeGrid,
    cfg: &QuadratureConfig,
    threads: usize,
) -> Result<AmplitudeSeries, EngineError> {
    let times = grid.samples().to_vec();
    match model {
        AmplitudeModel::ComplexDelta => {
            let values: Result<Vec<Complex>, EngineError> =
                times.iter().map(|t| complex_delta_amp(f, r, *t)).collect();
            AmplitudeSeries::new(ModelTag::ComplexDelta, grid.clone(), values?, None)
        }
        AmplitudeModel::BwFullline => {
            let values: Result<Vec<Complex>, EngineError> =
                times.iter().map(|t| bw_fullline_amp(f, r, *t)).collect();
            AmplitudeSeries::new(ModelTag::BwFullline, grid.clone(), values?, None)
        }
        AmplitudeModel::BwHalfline(strategy) => {
            let results: Vec<Result<IntegralResult, EngineError>> =
                map_ordered(&times, threads, |t| bw_halfline_amp(f, r, *t, cfg, strategy));
            let mut values = Vec::with_capacity(results.len());
            let mut errors = Vec::with_capacity(results.len());
            for res in results {
                let res = res?;
                values.push(res.value);
                errors.push(res.est_error);
            }
            AmplitudeSeries::new(ModelTag::BwHalfline, grid.clone(), values, Some(errors))
        }
    }
}

/// Background series over a grid (the model-comparison remainder).
pub fn background_series(
    f: &FormFactor,
    r: &Resonance,
    grid: &TimeGrid,
    cfg: &QuadratureConfig,
    threads: usize,
) -> Result<AmplitudeSeries, EngineError> {
    let times = grid.samples().to_vec();
    let results: Vec<Result<(Complex, f64), EngineError>> = map_ordered(&times, threads, |t| {
        let (bg, _) = rotated_contour_background(f, r.pole(), -*t, cfg)?;
        Ok((bg.value, bg.est_error))
    });
    let mut values = Vec::with_capacity(results.len());
    let mut errors = Vec::with_capacity(results.len());
    for res in results {
        let (v, e) = res?;
        values.push(v);
        errors.push(e);
    }
    AmplitudeSeries::new(ModelTag::Background, grid.clone(), values, Some(errors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bw_halfline_kernel;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig {
            abs_tol: 1e-12,
            ..QuadratureConfig::default()
        }
    }

    #[test]
    fn delta_amp_magnitude_example() {
        // f = 1, E_R = 1, Gamma = 2, t = 1 -> e^{-i} e^{-1}
        let r = Resonance::new(1.0, 2.0).unwrap();
        let a = complex_delta_amp(&FormFactor::one(), &r, 1.0).unwrap();
        assert!((a.norm() - (-1.0f64).exp()).abs() <= 1e-15);
        assert!((a.norm() - 0.367_879_441_2).abs() <= 1e-10);
    }

    #[test]
    fn delta_amp_prefactor_is_continuation() {
        // f = E^2 at z_R = 3 - 0.4i -> 8.84 - 2.4i
        let r = Resonance::new(3.0, 0.8).unwrap();
        let f = FormFactor::polynomial(vec![0.0, 0.0, 1.0]).unwrap();
        let t = 0.7;
        let a = complex_delta_amp(&f, &r, t).unwrap();
        let phase = Complex::from_polar((-0.4 * t).exp(), -3.0 * t);
        let prefactor = a / phase;
        assert!((prefactor - Complex::new(8.84, -2.4)).norm() <= 1e-12);
    }

    #[test]
    fn delta_amp_rejects_nonpositive_time() {
        let r = Resonance::new(1.0, 0.1).unwrap();
        let err = complex_delta_amp(&FormFactor::one(), &r, -1.0).unwrap_err();
        assert_eq!(err.kind(), crate::ErrorKind::Domain);
        let err = bw_fullline_amp(&FormFactor::one(), &r, 0.0).unwrap_err();
        assert_eq!(err.kind(), crate::ErrorKind::Domain);
    }

    #[test]
    fn residue_identity_exact() {
        // fullline == -2*pi*i * delta, at machine precision, across kinds
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let weights: Vec<FormFactor> = vec![
            FormFactor::one(),
            FormFactor::polynomial(vec![1.0, -0.5, 2.0]).unwrap(),
            FormFactor::power_law(0.5).unwrap(),
            FormFactor::exp_cutoff(3.0).unwrap(),
        ];
        for _ in 0..200 {
            let f = &weights[rng.gen_range(0..weights.len())];
            let r = Resonance::new(rng.gen_range(0.1..10.0), rng.gen_range(0.01..2.0)).unwrap();
            let t = rng.gen_range(-3.0f64..4.0).exp();
            let full = bw_fullline_amp(f, &r, t).unwrap();
            let delta = complex_delta_amp(f, &r, t).unwrap();
            let expect = Complex::new(0.0, -2.0 * PI) * delta;
            assert!(
                (full - expect).norm() <= 4.0 * f64::EPSILON * expect.norm(),
                "f mismatch at t={t}"
            );
        }
    }

    #[test]
    fn fullline_magnitude_example() {
        // |amp| = 2*pi*e^{-1} at Gamma*t/2 = 1
        let r = Resonance::new(1.0, 0.1).unwrap();
        let a = bw_fullline_amp(&FormFactor::one(), &r, 20.0).unwrap();
        assert!((a.norm() - 2.0 * PI * (-1.0f64).exp()).abs() <= 1e-12);
        assert!((a.norm() - 2.3114).abs() <= 1e-4);
    }

    #[test]
    fn halfline_matches_kernel_closed_form() {
        let r = Resonance::new(1.0, 0.05).unwrap();
        for strategy in [HalflineStrategy::Rotation, HalflineStrategy::DirectOracle] {
            let got = bw_halfline_amp(&FormFactor::one(), &r, 5.0, &cfg(), strategy).unwrap();
            let want = bw_halfline_kernel(r.pole(), 5.0).unwrap();
            assert!(
                (got.value - want).norm() <= got.est_error.max(1e-9 * want.norm()),
                "{strategy:?}: got={} want={want}",
                got.value
            );
        }
    }

    #[test]
    fn halfline_deviation_shrinks_with_resonance_ratio() {
        // at Gamma*t = 1, |halfline/fullline - 1| decreases over ratios 2, 20, 200
        let mut prev = f64::INFINITY;
        for ratio in [2.0, 20.0, 200.0] {
            let gamma = 1.0 / ratio;
            let r = Resonance::new(1.0, gamma).unwrap();
            let t = 1.0 / gamma;
            let half = bw_halfline_amp(&FormFactor::one(), &r, t, &cfg(), HalflineStrategy::Auto)
                .unwrap()
                .value;
            let full = bw_fullline_amp(&FormFactor::one(), &r, t).unwrap();
            let dev = (half / full - 1.0).norm();
            assert!(dev < prev, "ratio {ratio}: dev {dev} !< {prev}");
            prev = dev;
        }
    }

    #[test]
    fn halfline_deep_tail_is_power_law_not_exponential() {
        // Gamma*t = 60: |halfline| ~ |i/(z t)|, far above |fullline| = 2 pi e^{-30}
        let r = Resonance::new(1.0, 0.1).unwrap();
        let t = 600.0;
        let half = bw_halfline_amp(&FormFactor::one(), &r, t, &cfg(), HalflineStrategy::Auto)
            .unwrap()
            .value;
        let tail_scale = (Complex::new(0.0, 1.0) / (r.pole() * t)).norm();
        assert!((half.norm() - tail_scale).abs() <= 0.05 * tail_scale);
        let full = bw_fullline_amp(&FormFactor::one(), &r, t).unwrap();
        assert!(half.norm() > 1e6 * full.norm());
    }

    #[test]
    fn halfline_negative_time_is_pure_background() {
        let r = Resonance::new(1.0, 0.1).unwrap();
        let a = bw_halfline_amp(&FormFactor::one(), &r, -2.0, &cfg(), HalflineStrategy::Auto)
            .unwrap();
        let b = bw_halfline_amp(
            &FormFactor::one(),
            &r,
            -2.0,
            &cfg(),
            HalflineStrategy::DirectOracle,
        )
        .unwrap();
        assert!((a.value - b.value).norm() <= a.est_error + b.est_error);
        assert!(a.value.norm() > 0.0);
        assert!(bw_halfline_amp(&FormFactor::one(), &r, 0.0, &cfg(), HalflineStrategy::Auto).is_err());
    }

    #[test]
    fn auto_strategy_falls_back_to_oracle() {
        // rational pole in the swept quadrant: rotation refuses, auto still works
        let bad = FormFactor::rational(vec![1.0], vec![2.0, -2.0, 1.0]).unwrap();
        let r = Resonance::new(1.0, 0.1).unwrap();
        let err =
            bw_halfline_amp(&bad, &r, 1.0, &cfg(), HalflineStrategy::Rotation).unwrap_err();
        assert_eq!(err.kind(), crate::ErrorKind::InadmissibleFormFactor);
        let auto = bw_halfline_amp(&bad, &r, 1.0, &cfg(), HalflineStrategy::Auto).unwrap();
        let oracle =
            bw_halfline_amp(&bad, &r, 1.0, &cfg(), HalflineStrategy::DirectOracle).unwrap();
        assert_eq!(auto.value, oracle.value);
    }

    #[test]
    fn decompose_consistency_with_oracle() {
        let f = FormFactor::exp_cutoff(5.0).unwrap();
        let r = Resonance::new(1.0, 0.2).unwrap();
        let d = decompose(&f, &r, 3.0, &cfg()).unwrap();
        assert_eq!(d.total, d.pole_term + d.background);
        let oracle =
            bw_halfline_amp(&f, &r, 3.0, &cfg(), HalflineStrategy::DirectOracle).unwrap();
        assert!((d.total - oracle.value).norm() <= d.est_error + oracle.est_error);
    }

    #[test]
    fn background_shrinks_as_resonance_narrows() {
        // |background|/|pole| at Gamma*t = 1 smaller for Gamma = 0.001 than 0.1
        let mut ratios = Vec::new();
        for gamma in [0.1, 0.001] {
            let r = Resonance::new(1.0, gamma).unwrap();
            let d = decompose(&FormFactor::one(), &r, 1.0 / gamma, &cfg()).unwrap();
            ratios.push(d.background.norm() / d.pole_term.norm());
        }
        assert!(ratios[1] < ratios[0]);
    }

    #[test]
    fn background_is_smooth_in_time() {
        // bounded second differences of ln|B| against ln t on a log grid
        let r = Resonance::new(1.0, 0.1).unwrap();
        let grid = TimeGrid::new(5.0, 500.0, 33, crate::types::Spacing::Logarithmic).unwrap();
        let series = background_series(&FormFactor::one(), &r, &grid, &cfg(), 1).unwrap();
        let ln_t: Vec<f64> = grid.samples().iter().map(|t| t.ln()).collect();
        let ln_b: Vec<f64> = series.values.iter().map(|v| v.norm().ln()).collect();
        let h = ln_t[1] - ln_t[0];
        for i in 1..ln_b.len() - 1 {
            let second = (ln_b[i + 1] - 2.0 * ln_b[i] + ln_b[i - 1]) / (h * h);
            assert!(second.abs() < 1.0, "kink at t={}: {second}", grid.samples()[i]);
        }
    }

    #[test]
    fn scaling_invariance_of_halfline() {
        let r = Resonance::new(1.0, 0.05).unwrap();
        let t = 2.0;
        let base = bw_halfline_amp(&FormFactor::one(), &r, t, &cfg(), HalflineStrategy::Auto)
            .unwrap()
            .value;
        for lambda in [0.1, 10.0] {
            let rs = Resonance::new(lambda, 0.05 * lambda).unwrap();
            let scaled =
                bw_halfline_amp(&FormFactor::one(), &rs, t / lambda, &cfg(), HalflineStrategy::Auto)
                    .unwrap()
                    .value;
            assert!(
                (scaled - base).norm() <= 1e-9 * base.norm(),
                "lambda={lambda}"
            );
        }
    }

    #[test]
    fn conjugation_against_oracle() {
        // conj of the t > 0 amplitude equals the +iEt integral with the
        // conjugated pole, evaluated by the independent oracle
        let f = FormFactor::polynomial(vec![1.0, 0.3]).unwrap();
        let r = Resonance::new(1.0, 0.2).unwrap();
        let t = 1.7;
        let amp = bw_halfline_amp(&f, &r, t, &cfg(), HalflineStrategy::Rotation).unwrap();
        let mirrored =
            integrate_oscillatory_halfline(&f, r.pole().conj(), t, &cfg()).unwrap();
        assert!(
            (amp.value.conj() - mirrored.value).norm() <= amp.est_error + mirrored.est_error
        );
    }

    #[test]
    fn series_evaluation_matches_pointwise_and_is_thread_invariant() {
        let r = Resonance::new(1.0, 0.1).unwrap();
        let grid = TimeGrid::new(0.5, 50.0, 17, crate::types::Spacing::Logarithmic).unwrap();
        let f = FormFactor::one();
        let model = AmplitudeModel::BwHalfline(HalflineStrategy::Auto);
        let s1 = evaluate_series(model, &f, &r, &grid, &cfg(), 1).unwrap();
        let s4 = evaluate_series(model, &f, &r, &grid, &cfg(), 4).unwrap();
        for (a, b) in s1.values.iter().zip(s4.values.iter()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
        let single = bw_halfline_amp(&f, &r, grid.samples()[3], &cfg(), HalflineStrategy::Auto)
            .unwrap();
        assert_eq!(s1.values[3], single.value);
    }
}
