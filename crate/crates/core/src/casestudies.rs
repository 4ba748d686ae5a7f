//! Three applications of the amplitude engine.
//!
//! * **Decaying wavefront** — a resonance observed at a fixed radius; the
//!   amplitude in retarded time τ is the half-line integral
//!   ∫₀^∞ e^{−i(E−E_R)τ}/(E − z_R) dE, against its whole-line
//!   approximation −2πi·e^{−Γτ/2}·θ(τ) whose squared magnitude is the
//!   pure causal exponential decay law.
//! * **Field correlation** — the first-order correlation amplitude of a
//!   decaying emitter at distance Δr,
//!   ∫₀^∞ dk k²(e^{ikΔr} − e^{−ikΔr})·e^{−ickt}/(c(k − z_k)),
//!   split into two phase terms rotated independently, against the
//!   whole-line θ(τ)·e^{−(iω+Γ/2)τ} form.
//! * **Causality precursor scan** — the exact correlation before the
//!   light-transit time: the whole-line form is identically zero there,
//!   the half-line evaluation is not, because the spectrum is bounded
//!   below.
//!
//! Physical prefactors are lumped into single complex constants; every
//! quantitative check is prefactor-independent (ratios, support, decay
//! rates).

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::amplitudes::{halfline_integral, HalflineStrategy};
use crate::error::{ensure_finite, EngineError};
use crate::formfactor::FormFactor;
use crate::parallel::map_ordered;
use crate::quadrature::QuadratureConfig;
use crate::types::{ensure_finite_complex, Complex, Resonance};

/// Exact (half-line) or whole-line-approximation mode of a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileMode {
    Exact,
    Wwa,
}

impl ProfileMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProfileMode::Exact => "exact",
            ProfileMode::Wwa => "wwa",
        }
    }
}

/// Amplitude sampled on a retarded-time grid (τ may be negative).
#[derive(Debug, Clone, PartialEq)]
pub struct RetardedSeries {
    pub mode: ProfileMode,
    pub taus: Vec<f64>,
    pub values: Vec<Complex>,
    pub errors: Option<Vec<f64>>,
}

/// Validates a retarded-time grid: finite, strictly increasing, no zero
/// entry (the half-line integral needs a nonzero phase coefficient).
fn validate_tau_grid(taus: &[f64], ctx: &str) -> Result<(), EngineError> {
    if taus.len() < 2 {
        return Err(EngineError::validation("grid needs at least 2 points", ctx));
    }
    for tau in taus {
        ensure_finite(*tau, "tau", ctx)?;
        if *tau == 0.0 {
            return Err(EngineError::validation(
                "tau = 0 is not evaluable (logarithmic divergence of the half-line integral)",
                ctx,
            ));
        }
    }
    for w in taus.windows(2) {
        if w[1] <= w[0] {
            return Err(EngineError::validation(
                format!("grid not strictly increasing near tau={}", w[0]),
                ctx,
            ));
        }
    }
    Ok(())
}

/// Parameters of the decaying-wavefront profile. The physical constants
/// multiplying the integral are lumped into `prefactor`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorParams {
    pub resonance: Resonance,
    pub prefactor: Complex,
    pub tau_grid: Vec<f64>,
}

impl TaylorParams {
    pub fn new(
        resonance: Resonance,
        prefactor: Complex,
        tau_grid: Vec<f64>,
    ) -> Result<Self, EngineError> {
        let ctx = "TaylorParams::new";
        ensure_finite_complex(prefactor, "prefactor", ctx)?;
        validate_tau_grid(&tau_grid, ctx)?;
        Ok(TaylorParams {
            resonance,
            prefactor,
            tau_grid,
        })
    }
}

/// Wavefront profile in retarded time.
///
/// Exact mode evaluates `C·e^{iE_Rτ}·∫₀^∞ e^{−iEτ}/(E − z_R) dE`
/// (pure background for τ < 0, residue plus background for τ > 0); wwa
/// mode is the closed form `−2πi·C·e^{−Γτ/2}·θ(τ)`, identically and
/// bitwise zero before the front.
///
/// Sign convention: the integrand carries `e^{−i(E−E_R)τ}`. The opposite
/// sign would flip the closure direction and put the exponential support
/// on τ < 0, contradicting the causal decay law the whole-line form is
/// supposed to reproduce; see docs/derivations.md.
pub fn taylor_profile(
    p: &TaylorParams,
    mode: ProfileMode,
    cfg: &QuadratureConfig,
    threads: usize,
) -> Result<RetardedSeries, EngineError> {
    let z = p.resonance.pole();
    let e_r = p.resonance.e_r();
    let gamma = p.resonance.gamma();
    match mode {
        ProfileMode::Wwa => {
            let values: Vec<Complex> = p
                .tau_grid
                .iter()
                .map(|tau| {
                    if *tau > 0.0 {
                        p.prefactor
                            * Complex64::new(0.0, -2.0 * PI)
                            * Complex64::new((-0.5 * gamma * tau).exp(), 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect();
            Ok(RetardedSeries {
                mode,
                taus: p.tau_grid.clone(),
                values,
                errors: None,
            })
        }
        ProfileMode::Exact => {
            let taus = p.tau_grid.clone();
            let results: Vec<Result<(Complex, f64), EngineError>> =
                map_ordered(&taus, threads, |tau| {
                    let integral =
                        halfline_integral(&FormFactor::one(), z, -tau, cfg, HalflineStrategy::Auto)?;
                    let carrier = Complex64::from_polar(1.0, e_r * tau);
                    Ok((
                        p.prefactor * carrier * integral.value,
                        p.prefactor.norm() * integral.est_error,
                    ))
                });
            let mut values = Vec::with_capacity(results.len());
            let mut errors = Vec::with_capacity(results.len());
            for r in results {
                let (v, e) = r?;
                values.push(v);
                errors.push(e);
            }
            Ok(RetardedSeries {
                mode,
                taus,
                values,
                errors: Some(errors),
            })
        }
    }
}

/// Parameters of the field-correlation profile: emitter frequency ω,
/// width Γ, observation distance Δr, wave speed c (only Δr/c enters),
/// lumped prefactor.
#[derive(Debug, Clone, PartialEq)]
pub struct ScullyParams {
    pub omega: f64,
    pub gamma: f64,
    pub delta_r: f64,
    pub c: f64,
    pub prefactor: Complex,
}

impl ScullyParams {
    pub fn new(
        omega: f64,
        gamma: f64,
        delta_r: f64,
        c: f64,
        prefactor: Complex,
    ) -> Result<Self, EngineError> {
        let ctx = "ScullyParams::new";
        for (v, name) in [(omega, "omega"), (gamma, "gamma"), (delta_r, "delta_r"), (c, "c")] {
            ensure_finite(v, name, ctx)?;
            if v <= 0.0 {
                return Err(EngineError::validation(
                    format!("{name} must be > 0, got {v}"),
                    ctx,
                ));
            }
        }
        ensure_finite_complex(prefactor, "prefactor", ctx)?;
        Ok(ScullyParams {
            omega,
            gamma,
            delta_r,
            c,
            prefactor,
        })
    }

    /// Pole in the wavenumber variable: z_k = (ω − iΓ/2)/c.
    pub fn pole_k(&self) -> Complex {
        Complex64::new(self.omega / self.c, -0.5 * self.gamma / self.c)
    }

    /// Light-transit time Δr/c.
    pub fn transit_time(&self) -> f64 {
        self.delta_r / self.c
    }
}

/// Exact and whole-line correlation amplitudes at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScullyG1 {
    pub exact: Complex,
    pub exact_err: f64,
    pub wwa: Complex,
}

/// Correlation amplitude at time t > 0.
///
/// Exact: the two phase terms e^{ik(Δr−ct)} and −e^{−ik(Δr+ct)} run
/// through the engine with phase coefficients μ₁ = Δr − ct and
/// μ₂ = −(Δr + ct); each is rotated per sign(μ) and carries a residue
/// only when the swept quadrant holds the pole. Wwa: the closed form
/// pref·(−2πi)·z_k²/c·θ(τ)·e^{−(iω+Γ/2)τ}, τ = t − Δr/c, bitwise zero
/// for τ ≤ 0.
pub fn scully_g1(p: &ScullyParams, t: f64, cfg: &QuadratureConfig) -> Result<ScullyG1, EngineError> {
    let ctx = "scully_g1";
    ensure_finite(t, "t", ctx)?;
    if t <= 0.0 {
        return Err(EngineError::domain(format!("t must be > 0, got {t}"), ctx));
    }
    let mu1 = p.delta_r - p.c * t;
    let mu2 = -(p.delta_r + p.c * t);
    if mu1 == 0.0 {
        return Err(EngineError::domain(
            "t = delta_r/c exactly: phase coefficient vanishes on the wavefront sample",
            ctx,
        ));
    }
    let k_squared = FormFactor::polynomial(vec![0.0, 0.0, 1.0])
        .expect("static coefficients are valid");
    let z_k = p.pole_k();
    let term1 = halfline_integral(&k_squared, z_k, mu1, cfg, HalflineStrategy::Auto)?;
    let term2 = halfline_integral(&k_squared, z_k, mu2, cfg, HalflineStrategy::Auto)?;
    let exact = p.prefactor * (term1.value - term2.value) / p.c;
    let exact_err = p.prefactor.norm() * (term1.est_error + term2.est_error) / p.c;

    let tau = t - p.transit_time();
    let wwa = if tau > 0.0 {
        let envelope = Complex64::from_polar((-0.5 * p.gamma * tau).exp(), -p.omega * tau);
        p.prefactor * Complex64::new(0.0, -2.0 * PI) * z_k * z_k / p.c * envelope
    } else {
        Complex64::new(0.0, 0.0)
    };
    Ok(ScullyG1 {
        exact,
        exact_err,
        wwa,
    })
}

/// Exact and wwa correlation profiles over a retarded-time grid
/// (τ = t − Δr/c; entries must satisfy τ > −Δr/c so that t > 0).
pub fn scully_profile(
    p: &ScullyParams,
    tau_grid: &[f64],
    cfg: &QuadratureConfig,
    threads: usize,
) -> Result<(RetardedSeries, RetardedSeries), EngineError> {
    let ctx = "scully_profile";
    validate_tau_grid(tau_grid, ctx)?;
    let transit = p.transit_time();
    if tau_grid[0] <= -transit {
        return Err(EngineError::validation(
            format!(
                "tau must exceed -delta_r/c = {} so that t > 0, got {}",
                -transit, tau_grid[0]
            ),
            ctx,
        ));
    }
    let taus = tau_grid.to_vec();
    let results: Vec<Result<ScullyG1, EngineError>> =
        map_ordered(&taus, threads, |tau| scully_g1(p, tau + transit, cfg));
    let mut exact_values = Vec::with_capacity(taus.len());
    let mut exact_errors = Vec::with_capacity(taus.len());
    let mut wwa_values = Vec::with_capacity(taus.len());
    for r in results {
        let g = r?;
        exact_values.push(g.exact);
        exact_errors.push(g.exact_err);
        wwa_values.push(g.wwa);
    }
    Ok((
        RetardedSeries {
            mode: ProfileMode::Exact,
            taus: taus.clone(),
            values: exact_values,
            errors: Some(exact_errors),
        },
        RetardedSeries {
            mode: ProfileMode::Wwa,
            taus,
            values: wwa_values,
            errors: None,
        },
    ))
}

/// Precursor diagnostics over the τ < 0 region.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CausalityReport {
    /// τ < 0 sample points.
    pub taus: Vec<f64>,
    /// Exact |G|² at each precursor point.
    pub precursor_curve: Vec<f64>,
    /// Largest |G|² before the light-transit time.
    pub max_precursor: f64,
    /// The whole-line-approximation value there: exactly zero.
    pub wwa_precursor: f64,
    /// True when the maximal precursor amplitude exceeds 10³ times its
    /// quadrature error estimate — a genuine effect, not noise.
    pub hegerfeldt_flag: bool,
}

/// Samples the exact correlation on the precursor region τ < 0.
pub fn causality_scan(
    p: &ScullyParams,
    tau_grid: &[f64],
    cfg: &QuadratureConfig,
    threads: usize,
) -> Result<CausalityReport, EngineError> {
    let ctx = "causality_scan";
    validate_tau_grid(tau_grid, ctx)?;
    let precursor_taus: Vec<f64> = tau_grid.iter().copied().filter(|t| *t < 0.0).collect();
    if precursor_taus.is_empty() {
        return Err(EngineError::validation(
            "grid contains no tau < 0 samples",
            ctx,
        ));
    }
    let transit = p.transit_time();
    if precursor_taus[0] <= -transit {
        return Err(EngineError::validation(
            format!("tau must exceed -delta_r/c = {}", -transit),
            ctx,
        ));
    }
    let results: Vec<Result<ScullyG1, EngineError>> =
        map_ordered(&precursor_taus, threads, |tau| scully_g1(p, tau + transit, cfg));
    let mut curve = Vec::with_capacity(precursor_taus.len());
    let mut best = (0.0f64, 0.0f64); // (|G|, est at argmax)
    for r in results {
        let g = r?;
        let mag = g.exact.norm();
        curve.push(mag * mag);
        if mag > best.0 {
            best = (mag, g.exact_err);
        }
    }
    let hegerfeldt_flag = best.0 > 1e3 * best.1;
    Ok(CausalityReport {
        taus: precursor_taus,
        max_precursor: best.0 * best.0,
        precursor_curve: curve,
        wwa_precursor: 0.0,
        hegerfeldt_flag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_oscillatory_halfline, rotated_contour_background};

    fn cfg() -> QuadratureConfig {
        QuadratureConfig {
            abs_tol: 1e-12,
            ..QuadratureConfig::default()
        }
    }

    fn taylor_params(e_r: f64, gamma: f64, taus: Vec<f64>) -> TaylorParams {
        TaylorParams::new(
            Resonance::new(e_r, gamma).unwrap(),
            Complex::new(0.8, -0.3),
            taus,
        )
        .unwrap()
    }

    #[test]
    fn wwa_wavefront_is_bitwise_zero_before_the_front() {
        let p = taylor_params(1.0, 0.2, vec![-3.0, -1.0, -0.25, 0.5, 2.0]);
        let s = taylor_profile(&p, ProfileMode::Wwa, &cfg(), 1).unwrap();
        for (tau, v) in s.taus.iter().zip(s.values.iter()) {
            if *tau < 0.0 {
                assert_eq!(v.re.to_bits(), 0.0f64.to_bits());
                assert_eq!(v.im.to_bits(), 0.0f64.to_bits());
            } else {
                assert!(v.norm() > 0.0);
            }
        }
    }

    #[test]
    fn wwa_wavefront_decays_exponentially() {
        let gamma = 0.4;
        let p = taylor_params(1.0, gamma, vec![1.0, 3.5]);
        let s = taylor_profile(&p, ProfileMode::Wwa, &cfg(), 1).unwrap();
        let ratio = s.values[1].norm_sqr() / s.values[0].norm_sqr();
        let want = (-gamma * (3.5 - 1.0)).exp();
        assert!((ratio / want - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn exact_wavefront_has_a_precursor() {
        // tau = -0.5/Gamma: nonzero magnitude, cross-checked by the oracle
        let gamma = 0.2;
        let tau = -0.5 / gamma;
        let p = taylor_params(1.0, gamma, vec![tau, 1.0]);
        let s = taylor_profile(&p, ProfileMode::Exact, &cfg(), 1).unwrap();
        assert!(s.values[0].norm() > 0.0);
        let z = p.resonance.pole();
        let oracle = integrate_oscillatory_halfline(&FormFactor::one(), z, -tau, &cfg()).unwrap();
        let want = p.prefactor * Complex::from_polar(1.0, p.resonance.e_r() * tau) * oracle.value;
        let budget = s.errors.as_ref().unwrap()[0] + p.prefactor.norm() * oracle.est_error;
        assert!((s.values[0] - want).norm() <= budget);
    }

    #[test]
    fn exact_wavefront_converges_to_wwa_after_the_front() {
        // narrow resonance: |exact/wwa - 1| <= 5% for Gamma*tau in [0.5, 5]
        let gamma = 0.01; // E_R/Gamma = 100
        let taus: Vec<f64> = [0.5, 1.0, 2.0, 5.0].iter().map(|g| g / gamma).collect();
        let p = taylor_params(1.0, gamma, taus);
        let exact = taylor_profile(&p, ProfileMode::Exact, &cfg(), 1).unwrap();
        let wwa = taylor_profile(&p, ProfileMode::Wwa, &cfg(), 1).unwrap();
        for (e, w) in exact.values.iter().zip(wwa.values.iter()) {
            let dev = (e / w - 1.0).norm();
            assert!(dev <= 0.05, "dev={dev}");
        }
    }

    #[test]
    fn tau_grids_reject_zero_and_disorder() {
        let r = Resonance::new(1.0, 0.1).unwrap();
        let c = Complex::new(1.0, 0.0);
        assert!(TaylorParams::new(r, c, vec![-1.0, 0.0, 1.0]).is_err());
        assert!(TaylorParams::new(r, c, vec![1.0, 0.5]).is_err());
        assert!(TaylorParams::new(r, c, vec![1.0]).is_err());
    }

    fn scully_params(omega: f64, gamma: f64, delta_r: f64) -> ScullyParams {
        ScullyParams::new(omega, gamma, delta_r, 1.0, Complex::new(1.0, 0.0)).unwrap()
    }

    #[test]
    fn wwa_correlation_is_bitwise_zero_before_light_arrival() {
        let p = scully_params(100.0, 1.0, 0.5);
        for tau in [-0.4, -0.1, -0.01] {
            let g = scully_g1(&p, tau + p.transit_time(), &cfg()).unwrap();
            assert_eq!(g.wwa.re.to_bits(), 0.0f64.to_bits());
            assert_eq!(g.wwa.im.to_bits(), 0.0f64.to_bits());
            assert!(g.exact.norm() > 0.0);
        }
    }

    #[test]
    fn wwa_correlation_decays_exponentially() {
        let p = scully_params(100.0, 1.0, 0.5);
        let (tau1, tau2) = (0.7, 2.9);
        let g1 = scully_g1(&p, tau1 + p.transit_time(), &cfg()).unwrap();
        let g2 = scully_g1(&p, tau2 + p.transit_time(), &cfg()).unwrap();
        let ratio = g2.wwa.norm_sqr() / g1.wwa.norm_sqr();
        let want = (-p.gamma * (tau2 - tau1)).exp();
        assert!((ratio / want - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn precursor_term_bookkeeping() {
        // before light arrival mu1 > 0, so that term carries no residue
        let p = scully_params(100.0, 1.0, 0.5);
        let t = 0.9 * p.transit_time();
        let mu1 = p.delta_r - p.c * t;
        assert!(mu1 > 0.0);
        let k_squared = FormFactor::polynomial(vec![0.0, 0.0, 1.0]).unwrap();
        let (_, plan) = rotated_contour_background(&k_squared, p.pole_k(), mu1, &cfg()).unwrap();
        assert!(!plan.pole_swept);
        assert_eq!(plan.residue_term, Complex::new(0.0, 0.0));
        let g = scully_g1(&p, t, &cfg()).unwrap();
        assert!(g.exact.norm() > 0.0);
        assert_eq!(g.wwa, Complex::new(0.0, 0.0));
    }

    #[test]
    fn correlation_splitting_matches_direct_oracle_sum() {
        // rotation-path exact vs the sum of two independent oracle calls
        let p = scully_params(20.0, 1.0, 0.5);
        let t = 1.3;
        let g = scully_g1(&p, t, &cfg()).unwrap();
        let k_squared = FormFactor::polynomial(vec![0.0, 0.0, 1.0]).unwrap();
        let mu1 = p.delta_r - p.c * t;
        let mu2 = -(p.delta_r + p.c * t);
        let o1 = integrate_oscillatory_halfline(&k_squared, p.pole_k(), mu1, &cfg()).unwrap();
        let o2 = integrate_oscillatory_halfline(&k_squared, p.pole_k(), mu2, &cfg()).unwrap();
        let direct = p.prefactor * (o1.value - o2.value) / p.c;
        let budget = g.exact_err + p.prefactor.norm() * (o1.est_error + o2.est_error) / p.c;
        assert!((g.exact - direct).norm() <= budget);
    }

    #[test]
    fn exact_correlation_converges_to_wwa_in_the_far_zone() {
        // Gamma*delta_r/c = 5 so the discarded incoming-wave residue
        // (relative size e^{-Gamma dr/c}) is below the 5% target
        let p = scully_params(100.0, 1.0, 5.0);
        for gtau in [0.5, 1.0, 2.0, 5.0] {
            let g = scully_g1(&p, gtau / p.gamma + p.transit_time(), &cfg()).unwrap();
            let dev = (g.exact / g.wwa - 1.0).norm();
            assert!(dev <= 0.05, "Gamma*tau={gtau}: dev={dev}");
        }
    }

    #[test]
    fn causality_scan_reference_parameters() {
        // omega/Gamma = 100, delta_r*omega/c = 50
        let p = scully_params(100.0, 1.0, 0.5);
        let taus: Vec<f64> = (0..40).map(|i| -0.45 + 0.43 * i as f64 / 39.0).collect();
        let report = causality_scan(&p, &taus, &cfg(), 1).unwrap();
        assert_eq!(report.wwa_precursor, 0.0);
        assert!(report.max_precursor > 0.0);
        assert!(report.hegerfeldt_flag);
        assert!(report.precursor_curve.iter().all(|v| *v >= 0.0));
        assert_eq!(report.precursor_curve.len(), report.taus.len());
    }

    #[test]
    fn precursor_shrinks_as_the_resonance_narrows() {
        // fixed Gamma*delta_r/c = 0.5, scan omega/Gamma in {10, 100, 1000};
        // measured against the post-arrival signal at Gamma*tau = 0.1.
        // 30-digit reference values: 6.42, 1.98, 0.93 — monotone.
        let mut previous = f64::INFINITY;
        for ratio in [10.0, 100.0, 1000.0] {
            let p = scully_params(ratio, 1.0, 0.5);
            let taus: Vec<f64> = (0..60).map(|i| -0.45 + 0.43 * i as f64 / 59.0).collect();
            let report = causality_scan(&p, &taus, &cfg(), 1).unwrap();
            let reference = scully_g1(&p, 0.1 / p.gamma + p.transit_time(), &cfg())
                .unwrap()
                .exact
                .norm_sqr();
            let relative = report.max_precursor / reference;
            assert!(
                relative < previous,
                "omega/Gamma={ratio}: {relative} !< {previous}"
            );
            previous = relative;
        }
    }

    #[test]
    fn causality_scan_needs_precursor_points() {
        let p = scully_params(100.0, 1.0, 0.5);
        assert!(causality_scan(&p, &[0.5, 1.0], &cfg(), 1).is_err());
        // tau <= -delta_r/c would need t <= 0
        assert!(causality_scan(&p, &[-0.6, -0.2], &cfg(), 1).is_err());
    }
}
