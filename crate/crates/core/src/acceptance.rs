//! The verification suite: every check the project treats as its exit
//! gate, runnable both as a `cargo test` target and through the CLI
//! `selftest` subcommand.
//!
//! Each criterion is a standalone function returning a [`CriterionResult`]
//! with a pass flag and a one-line measurement summary; [`run_all`]
//! executes them in order. Tolerances are fixed here, not configurable.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::Instant;

use crate::amplitudes::{
    bw_fullline_amp, bw_halfline_amp, complex_delta_amp, evaluate_series, AmplitudeModel,
    HalflineStrategy,
};
use crate::analysis::tail_exponent;
use crate::casestudies::{
    causality_scan, scully_g1, taylor_profile, ProfileMode, ScullyParams, TaylorParams,
};
use crate::formfactor::FormFactor;
use crate::quadrature::{
    integrate_oscillatory_halfline, rotated_contour_background, QuadratureConfig,
};
use crate::specfun::{bw_halfline_kernel, e1_asymptotic_scaled, e1_cf_scaled, e1_series, exp_integral_e1};
use crate::types::{Complex, Resonance, Spacing, TimeGrid};

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionResult {
    /// One status line, stable format: `PASS [0.12s] name - detail`.
    pub fn status_line(&self) -> String {
        format!(
            "{} [{:.2}s] {} - {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.seconds,
            self.name,
            self.detail
        )
    }
}

fn grid_cfg() -> QuadratureConfig {
    QuadratureConfig {
        rel_tol: 1e-10,
        abs_tol: 1e-12,
        ..QuadratureConfig::default()
    }
}

fn catalog() -> Vec<FormFactor> {
    vec![
        FormFactor::one(),
        FormFactor::polynomial(vec![0.0, 0.0, 1.0]).expect("valid"),
        FormFactor::power_law(0.5).expect("valid"),
        FormFactor::exp_cutoff(5.0).expect("valid"),
    ]
}

fn timed<F: FnOnce() -> (bool, String)>(name: &'static str, f: F) -> CriterionResult {
    let start = Instant::now();
    let (passed, detail) = f();
    CriterionResult {
        name,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Criterion 1: the full-line amplitude equals −2πi times the
/// complex-delta amplitude at machine precision, for 10³ random valid
/// inputs across the weight catalog.
pub fn criterion_1_residue_identity() -> CriterionResult {
    timed("1_residue_identity", || {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        let weights: Vec<FormFactor> = vec![
            FormFactor::one(),
            FormFactor::polynomial(vec![1.0, -0.5, 2.0]).expect("valid"),
            FormFactor::power_law(0.5).expect("valid"),
            FormFactor::exp_cutoff(3.0).expect("valid"),
            FormFactor::rational(vec![1.0, 1.0], vec![2.0, 2.0, 1.0]).expect("valid"),
            FormFactor::product(vec![
                FormFactor::polynomial(vec![0.0, 0.0, 1.0]).expect("valid"),
                FormFactor::exp_cutoff(5.0).expect("valid"),
            ])
            .expect("valid"),
        ];
        let mut worst = 0.0f64;
        for k in 0..1000 {
            let f = &weights[k % weights.len()];
            let r = match Resonance::new(rng.gen_range(0.1..10.0), rng.gen_range(0.01..2.0)) {
                Ok(r) => r,
                Err(_) => return (false, "resonance construction failed".into()),
            };
            let t = rng.gen_range(-3.0f64..4.0).exp();
            let full = match bw_fullline_amp(f, &r, t) {
                Ok(v) => v,
                Err(e) => return (false, format!("fullline failed: {e}")),
            };
            let delta = match complex_delta_amp(f, &r, t) {
                Ok(v) => v,
                Err(e) => return (false, format!("delta failed: {e}")),
            };
            let expect = Complex64::new(0.0, -2.0 * PI) * delta;
            let ulps = (full - expect).norm() / (f64::EPSILON * expect.norm());
            worst = worst.max(ulps);
        }
        (
            worst <= 4.0,
            format!("worst |fullline + 2*pi*i*delta| = {worst:.2} ulp (limit 4)"),
        )
    })
}

/// Criterion 2: on the calibration grid (3 ratios × 4 times × 4 weights),
/// the direct-oracle half-line value equals pole term + background within
/// the combined error estimate, in every cell.
pub fn criterion_2_decomposition_identity() -> CriterionResult {
    timed("2_decomposition_identity", || {
        let cfg = grid_cfg();
        let mut cells = 0;
        let mut failures = Vec::new();
        let mut worst_ratio = 0.0f64;
        for ratio in [2.0, 20.0, 200.0] {
            let gamma = 1.0 / ratio;
            let z = Complex::new(1.0, -0.5 * gamma);
            for gt in [0.1, 1.0, 10.0, 50.0] {
                let t = gt / gamma;
                for (fi, f) in catalog().iter().enumerate() {
                    cells += 1;
                    let oracle = match integrate_oscillatory_halfline(f, z, -t, &cfg) {
                        Ok(v) => v,
                        Err(e) => {
                            failures.push(format!("oracle({ratio},{gt},f{fi}): {e}"));
                            continue;
                        }
                    };
                    let (bg, plan) = match rotated_contour_background(f, z, -t, &cfg) {
                        Ok(v) => v,
                        Err(e) => {
                            failures.push(format!("rotated({ratio},{gt},f{fi}): {e}"));
                            continue;
                        }
                    };
                    let diff = (oracle.value - (plan.residue_term + bg.value)).norm();
                    let budget = oracle.est_error + bg.est_error;
                    worst_ratio = worst_ratio.max(diff / budget);
                    if diff > budget {
                        failures.push(format!(
                            "cell({ratio},{gt},f{fi}): diff {diff:.3e} > budget {budget:.3e}"
                        ));
                    }
                }
            }
        }
        if failures.is_empty() {
            (
                true,
                format!("{cells}/{cells} cells within combined est_error (worst diff/budget {worst_ratio:.3})"),
            )
        } else {
            (false, failures.join("; "))
        }
    })
}

/// Criterion 3: the closed-form kernel agrees with the oscillatory oracle
/// to 1e−9 relative on the calibration grid.
pub fn criterion_3_kernel_closed_form() -> CriterionResult {
    timed("3_kernel_closed_form", || {
        let cfg = grid_cfg();
        let mut worst = 0.0f64;
        for ratio in [2.0, 20.0, 200.0] {
            let gamma = 1.0 / ratio;
            let z = Complex::new(1.0, -0.5 * gamma);
            for gt in [0.1, 1.0, 10.0, 50.0] {
                let t = gt / gamma;
                let kernel = match bw_halfline_kernel(z, t) {
                    Ok(v) => v,
                    Err(e) => return (false, format!("kernel({ratio},{gt}): {e}")),
                };
                let oracle = match integrate_oscillatory_halfline(&FormFactor::one(), z, -t, &cfg) {
                    Ok(v) => v,
                    Err(e) => return (false, format!("oracle({ratio},{gt}): {e}")),
                };
                worst = worst.max((kernel - oracle.value).norm() / kernel.norm());
            }
        }
        (
            worst <= 1e-9,
            format!("worst relative kernel-oracle deviation {worst:.3e} (limit 1e-9)"),
        )
    })
}

/// Criterion 4: at Γt = 1 the relative deviation |halfline/fullline − 1|
/// decreases monotonically across E_R/Γ ∈ {2, 20, 200, 1000} and is below
/// 1e−2 at 1000.
pub fn criterion_4_narrow_resonance_convergence() -> CriterionResult {
    timed("4_narrow_resonance_convergence", || {
        let cfg = grid_cfg();
        let mut devs = Vec::new();
        for ratio in [2.0, 20.0, 200.0, 1000.0] {
            let gamma = 1.0 / ratio;
            let r = match Resonance::new(1.0, gamma) {
                Ok(r) => r,
                Err(e) => return (false, e.to_string()),
            };
            let t = 1.0 / gamma;
            let half = match bw_halfline_amp(&FormFactor::one(), &r, t, &cfg, HalflineStrategy::Auto)
            {
                Ok(v) => v.value,
                Err(e) => return (false, format!("halfline({ratio}): {e}")),
            };
            let full = match bw_fullline_amp(&FormFactor::one(), &r, t) {
                Ok(v) => v,
                Err(e) => return (false, format!("fullline({ratio}): {e}")),
            };
            devs.push((half / full - 1.0).norm());
        }
        let monotone = devs.windows(2).all(|w| w[1] < w[0]);
        let small = devs[3] <= 1e-2;
        (
            monotone && small,
            format!(
                "deviations {:.3e} > {:.3e} > {:.3e} > {:.3e}; monotone={monotone}, final<=1e-2: {small}",
                devs[0], devs[1], devs[2], devs[3]
            ),
        )
    })
}

/// Criterion 5: the background decays as a power law — exponent −1 ± 0.05
/// for f ≡ 1 and −2 ± 0.1 for f = E over Γt ∈ [50, 500] — and satisfies
/// t·B → i·f(0)/z_R within 5% at Γt = 60.
pub fn criterion_5_nonexponential_tail() -> CriterionResult {
    timed("5_nonexponential_tail", || {
        let cfg = grid_cfg();
        let r = match Resonance::new(1.0, 0.1) {
            Ok(r) => r,
            Err(e) => return (false, e.to_string()),
        };
        let grid = match TimeGrid::new(500.0, 5000.0, 16, Spacing::Logarithmic) {
            Ok(g) => g,
            Err(e) => return (false, e.to_string()),
        };
        let slope_of = |f: &FormFactor| -> Result<f64, String> {
            let series = crate::amplitudes::background_series(f, &r, &grid, &cfg, 1)
                .map_err(|e| e.to_string())?;
            let mags: Vec<f64> = series.values.iter().map(|v| v.norm()).collect();
            tail_exponent(grid.samples(), &mags).map_err(|e| e.to_string())
        };
        let flat = match slope_of(&FormFactor::one()) {
            Ok(s) => s,
            Err(e) => return (false, e),
        };
        let linear_weight = FormFactor::polynomial(vec![0.0, 1.0]).expect("valid");
        let linear = match slope_of(&linear_weight) {
            Ok(s) => s,
            Err(e) => return (false, e),
        };
        let t60 = 60.0 / r.gamma();
        let watson = match rotated_contour_background(&FormFactor::one(), r.pole(), -t60, &cfg) {
            Ok((bg, _)) => {
                let target = Complex::new(0.0, 1.0) / r.pole();
                (bg.value * t60 - target).norm() / target.norm()
            }
            Err(e) => return (false, format!("watson: {e}")),
        };
        let ok = (flat + 1.0).abs() <= 0.05 && (linear + 2.0).abs() <= 0.1 && watson <= 0.05;
        (
            ok,
            format!(
                "slope(f=1)={flat:.4} (want -1±0.05), slope(f=E)={linear:.4} (want -2±0.1), watson dev={watson:.3e} (limit 0.05)"
            ),
        )
    })
}

/// Criterion 6: whole-line-approximation outputs are bitwise zero before
/// the front for both case studies, while the exact precursor at the
/// reference parameters (ω/Γ = 100, Δr·ω/c = 50) exceeds 10³ times the
/// quadrature error.
pub fn criterion_6_causality_dichotomy() -> CriterionResult {
    timed("6_causality_dichotomy", || {
        let cfg = grid_cfg();
        let resonance = match Resonance::new(1.0, 0.2) {
            Ok(r) => r,
            Err(e) => return (false, e.to_string()),
        };
        let taus: Vec<f64> = (0..40)
            .map(|i| -8.0 + 16.1 * i as f64 / 39.0)
            .filter(|t| t.abs() > 1e-9)
            .collect();
        let taylor = match TaylorParams::new(resonance, Complex::new(0.7, 0.1), taus) {
            Ok(p) => p,
            Err(e) => return (false, e.to_string()),
        };
        let wwa = match taylor_profile(&taylor, ProfileMode::Wwa, &cfg, 1) {
            Ok(s) => s,
            Err(e) => return (false, format!("taylor wwa: {e}")),
        };
        for (tau, v) in wwa.taus.iter().zip(wwa.values.iter()) {
            if *tau < 0.0 && (v.re.to_bits() != 0 || v.im.to_bits() != 0) {
                return (false, format!("taylor wwa not bitwise zero at tau={tau}"));
            }
        }

        let scully = match ScullyParams::new(100.0, 1.0, 0.5, 1.0, Complex::new(1.0, 0.0)) {
            Ok(p) => p,
            Err(e) => return (false, e.to_string()),
        };
        for tau in [-0.4, -0.2, -0.05] {
            let g = match scully_g1(&scully, tau + scully.transit_time(), &cfg) {
                Ok(g) => g,
                Err(e) => return (false, format!("scully g1: {e}")),
            };
            if g.wwa.re.to_bits() != 0 || g.wwa.im.to_bits() != 0 {
                return (false, format!("scully wwa not bitwise zero at tau={tau}"));
            }
        }
        let precursor_taus: Vec<f64> = (0..40).map(|i| -0.45 + 0.43 * i as f64 / 39.0).collect();
        let report = match causality_scan(&scully, &precursor_taus, &cfg, 1) {
            Ok(r) => r,
            Err(e) => return (false, format!("causality scan: {e}")),
        };
        (
            report.hegerfeldt_flag && report.wwa_precursor == 0.0,
            format!(
                "wwa bitwise zero; max precursor |G|^2 = {:.4e}, flag = {}",
                report.max_precursor, report.hegerfeldt_flag
            ),
        )
    })
}

/// Criterion 7: the whole-line approximation obeys the exponential decay
/// law exactly (closed-form magnitude ratios to 1e−12), and the exact
/// amplitude matches it within 5% in the narrow-resonance window
/// Γτ ∈ [0.5, 5] at ω/Γ (or E_R/Γ) = 100.
pub fn criterion_7_exponential_law() -> CriterionResult {
    timed("7_exponential_law", || {
        let cfg = grid_cfg();
        // closed-form ratio checks
        let gamma = 0.01;
        let resonance = match Resonance::new(1.0, gamma) {
            Ok(r) => r,
            Err(e) => return (false, e.to_string()),
        };
        let taus: Vec<f64> = [0.5, 1.0, 2.0, 5.0].iter().map(|g| g / gamma).collect();
        let taylor = match TaylorParams::new(resonance, Complex::new(1.0, 0.0), taus.clone()) {
            Ok(p) => p,
            Err(e) => return (false, e.to_string()),
        };
        let wwa = match taylor_profile(&taylor, ProfileMode::Wwa, &cfg, 1) {
            Ok(s) => s,
            Err(e) => return (false, e.to_string()),
        };
        for i in 1..taus.len() {
            let ratio = wwa.values[i].norm_sqr() / wwa.values[0].norm_sqr();
            let want = (-gamma * (taus[i] - taus[0])).exp();
            if (ratio / want - 1.0).abs() > 1e-12 {
                return (
                    false,
                    format!("taylor wwa ratio off at i={i}: {}", (ratio / want - 1.0).abs()),
                );
            }
        }
        let exact = match taylor_profile(&taylor, ProfileMode::Exact, &cfg, 1) {
            Ok(s) => s,
            Err(e) => return (false, e.to_string()),
        };
        let mut worst_taylor = 0.0f64;
        for (e, w) in exact.values.iter().zip(wwa.values.iter()) {
            worst_taylor = worst_taylor.max((e / w - 1.0).norm());
        }

        // correlation case study at omega/Gamma = 100, Gamma*dr/c = 5 (far
        // zone; at the criterion-6 reference geometry the discarded
        // incoming-wave residue alone is e^{-1/2} ~ 0.6)
        let scully = match ScullyParams::new(100.0, 1.0, 5.0, 1.0, Complex::new(1.0, 0.0)) {
            Ok(p) => p,
            Err(e) => return (false, e.to_string()),
        };
        let g_ref = match scully_g1(&scully, 0.5 / scully.gamma + scully.transit_time(), &cfg) {
            Ok(g) => g,
            Err(e) => return (false, e.to_string()),
        };
        let mut worst_scully = 0.0f64;
        for gtau in [0.5, 1.0, 2.0, 5.0] {
            let g = match scully_g1(&scully, gtau / scully.gamma + scully.transit_time(), &cfg) {
                Ok(g) => g,
                Err(e) => return (false, e.to_string()),
            };
            let ratio = g.wwa.norm_sqr() / g_ref.wwa.norm_sqr();
            let want = (-(gtau - 0.5)).exp(); // e^{-Gamma(tau - tau_ref)} in Gamma*tau units
            if (ratio / want - 1.0).abs() > 1e-12 {
                return (false, format!("scully wwa ratio off at Gamma*tau={gtau}"));
            }
            worst_scully = worst_scully.max((g.exact / g.wwa - 1.0).norm());
        }
        let ok = worst_taylor <= 0.05 && worst_scully <= 0.05;
        (
            ok,
            format!(
                "closed-form ratios exact to 1e-12; worst exact/wwa dev: wavefront {worst_taylor:.4}, correlation {worst_scully:.4} (limit 0.05)"
            ),
        )
    })
}

/// Criterion 8: engine hygiene — Schwarz reflection, derivative vs finite
/// difference, method-seam agreement, and bitwise determinism including
/// threaded sweeps.
pub fn criterion_8_engine_hygiene() -> CriterionResult {
    timed("8_engine_hygiene", || {
        let mut rng = ChaCha8Rng::seed_from_u64(808);
        // Schwarz reflection
        for _ in 0..1000 {
            let r = rng.gen_range(0.05f64.ln()..300.0f64.ln()).exp();
            let arg = rng.gen_range(-2.35..2.35);
            let w = Complex::from_polar(r, arg);
            let a = match exp_integral_e1(w) {
                Ok(v) => v.value,
                Err(e) => return (false, format!("E1({w}): {e}")),
            };
            let b = match exp_integral_e1(w.conj()) {
                Ok(v) => v.value,
                Err(e) => return (false, format!("E1({w}*): {e}")),
            };
            if (a.conj() - b).norm() > 4.0 * f64::EPSILON * a.norm().max(f64::MIN_POSITIVE) {
                return (false, format!("Schwarz reflection violated at w={w}"));
            }
        }
        // derivative vs central difference
        for _ in 0..300 {
            let r = rng.gen_range(0.5f64.ln()..50.0f64.ln()).exp();
            let arg = rng.gen_range(-2.2..2.2);
            let w = Complex::from_polar(r, arg);
            let h = 1e-6 * w.norm();
            let plus = exp_integral_e1(w + h).expect("off cut").value;
            let minus = exp_integral_e1(w - h).expect("off cut").value;
            let fd = (plus - minus) / (2.0 * h);
            let exact = -(-w).exp() / w;
            if (fd - exact).norm() / exact.norm() > 1e-6 {
                return (false, format!("derivative check failed at w={w}"));
            }
        }
        // method seams
        let mut worst_seam = 0.0f64;
        for k in 0..24 {
            let arg = -2.3 + 4.6 * k as f64 / 23.0;
            let w4 = Complex::from_polar(4.0, arg);
            let (s, _) = e1_series(w4);
            let (g, _) = e1_cf_scaled(w4);
            let cf = g * (-w4).exp();
            worst_seam = worst_seam.max((s - cf).norm() / cf.norm());
            let w40 = Complex::from_polar(40.0, arg);
            let (gc, _) = e1_cf_scaled(w40);
            let (ga, _) = e1_asymptotic_scaled(w40);
            worst_seam = worst_seam.max((gc - ga).norm() / ga.norm());
        }
        if worst_seam > 1e-12 {
            return (false, format!("method seam deviation {worst_seam:.3e} > 1e-12"));
        }
        // bitwise determinism, single integral
        let cfg = grid_cfg();
        let z = Complex::new(1.0, -0.05);
        let a = integrate_oscillatory_halfline(&FormFactor::one(), z, -2.5, &cfg).expect("oracle");
        let b = integrate_oscillatory_halfline(&FormFactor::one(), z, -2.5, &cfg).expect("oracle");
        if a.value.re.to_bits() != b.value.re.to_bits()
            || a.value.im.to_bits() != b.value.im.to_bits()
        {
            return (false, "repeated oracle evaluation not bitwise identical".into());
        }
        // bitwise determinism across thread counts
        let r = Resonance::new(1.0, 0.1).expect("valid");
        let grid = TimeGrid::new(0.5, 50.0, 17, Spacing::Logarithmic).expect("valid");
        let model = AmplitudeModel::BwHalfline(HalflineStrategy::Auto);
        let s1 = evaluate_series(model, &FormFactor::one(), &r, &grid, &cfg, 1).expect("series");
        let s4 = evaluate_series(model, &FormFactor::one(), &r, &grid, &cfg, 4).expect("series");
        for (x, y) in s1.values.iter().zip(s4.values.iter()) {
            if x.re.to_bits() != y.re.to_bits() || x.im.to_bits() != y.im.to_bits() {
                return (false, "threaded sweep not bitwise identical".into());
            }
        }
        (
            true,
            format!("reflection, derivative, seams (worst {worst_seam:.2e}), determinism all clean"),
        )
    })
}

/// Runs criteria 1 through 8 in order.
pub fn run_all() -> Vec<CriterionResult> {
    vec![
        criterion_1_residue_identity(),
        criterion_2_decomposition_identity(),
        criterion_3_kernel_closed_form(),
        criterion_4_narrow_resonance_convergence(),
        criterion_5_nonexponential_tail(),
        criterion_6_causality_dichotomy(),
        criterion_7_exponential_law(),
        criterion_8_engine_hygiene(),
    ]
}
