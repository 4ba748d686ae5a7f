//! The analytic weight f(E) multiplying the resonant denominator.
//!
//! A closed catalog rather than arbitrary expressions: every member must
//! support analytic continuation into the swept quadrant and a decidable
//! growth check, otherwise the contour-rotation step of the engine would
//! be unsound. Gaussian-style cutoffs are deliberately absent (they blow
//! up along the imaginary directions); soft cutoffs use `exp_cutoff`.
//!
//! Real coefficients throughout; complex prefactors belong to the case
//! studies, not the weight.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, EngineError};
use crate::jet::Jet;
use crate::types::Complex;

/// Rotation direction for admissibility: `Lower` closes toward −i∞
/// (decay side, phase coefficient μ < 0), `Upper` toward +i∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RotationDirection {
    Lower,
    Upper,
}

/// Verdict on whether a form factor supports rotating the contour in a
/// given direction: analytic in the closed swept quadrant, growth beaten
/// by the e^{−|μ|s} damping of the rotated ray.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub direction: RotationDirection,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Kind {
    Constant {
        value: f64,
    },
    Polynomial {
        coefficients: Vec<f64>,
    },
    Rational {
        numerator: Vec<f64>,
        denominator: Vec<f64>,
        #[serde(skip)]
        poles: Vec<Complex>,
    },
    PowerLaw {
        alpha: f64,
    },
    ExpCutoff {
        lambda: f64,
    },
    Product {
        factors: Vec<FormFactor>,
    },
}

/// An analytic weight on the scattering spectrum, evaluable and finite at
/// every E in (0, ∞), with complex continuation on the principal branch.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct FormFactor {
    kind: Kind,
}

impl FormFactor {
    /// The constant weight `c`.
    pub fn constant(value: f64) -> Result<Self, EngineError> {
        ensure_finite(value, "value", "FormFactor::constant")?;
        Ok(FormFactor {
            kind: Kind::Constant { value },
        })
    }

    /// The unit weight f ≡ 1.
    pub fn one() -> Self {
        FormFactor {
            kind: Kind::Constant { value: 1.0 },
        }
    }

    /// Polynomial Σ c_j E^j with ascending real coefficients.
    pub fn polynomial(coefficients: Vec<f64>) -> Result<Self, EngineError> {
        let ctx = "FormFactor::polynomial";
        if coefficients.is_empty() {
            return Err(EngineError::validation("empty coefficient list", ctx));
        }
        for c in &coefficients {
            ensure_finite(*c, "coefficient", ctx)?;
        }
        Ok(FormFactor {
            kind: Kind::Polynomial { coefficients },
        })
    }

    /// Rational p(E)/q(E). The denominator roots are located at
    /// construction; any root on [0, ∞) rejects the weight, and the
    /// recorded pole set feeds the admissibility check.
    pub fn rational(numerator: Vec<f64>, denominator: Vec<f64>) -> Result<Self, EngineError> {
        let ctx = "FormFactor::rational";
        if numerator.is_empty() || denominator.is_empty() {
            return Err(EngineError::validation("empty coefficient list", ctx));
        }
        for c in numerator.iter().chain(denominator.iter()) {
            ensure_finite(*c, "coefficient", ctx)?;
        }
        if denominator.iter().all(|c| *c == 0.0) {
            return Err(EngineError::validation("denominator is identically zero", ctx));
        }
        let poles = polynomial_roots(&denominator);
        let scale = denominator.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        for p in &poles {
            let near_axis = p.im.abs() <= 1e-9 * (1.0 + p.re.abs());
            if near_axis && p.re >= -1e-12 * (1.0 + scale) {
                return Err(EngineError::validation(
                    format!("denominator root at {p} lies on the scattering spectrum [0, inf)"),
                    ctx,
                ));
            }
        }
        Ok(FormFactor {
            kind: Kind::Rational {
                numerator,
                denominator,
                poles,
            },
        })
    }

    /// Power law E^α with α > −1, principal branch for complex argument.
    pub fn power_law(alpha: f64) -> Result<Self, EngineError> {
        let ctx = "FormFactor::power_law";
        ensure_finite(alpha, "alpha", ctx)?;
        if alpha <= -1.0 {
            return Err(EngineError::validation(
                format!("alpha must be > -1 for integrability at 0, got {alpha}"),
                ctx,
            ));
        }
        Ok(FormFactor {
            kind: Kind::PowerLaw { alpha },
        })
    }

    /// Soft cutoff e^{−E/Λ} with Λ > 0.
    pub fn exp_cutoff(lambda: f64) -> Result<Self, EngineError> {
        let ctx = "FormFactor::exp_cutoff";
        ensure_finite(lambda, "lambda", ctx)?;
        if lambda <= 0.0 {
            return Err(EngineError::validation(
                format!("lambda must be > 0, got {lambda}"),
                ctx,
            ));
        }
        Ok(FormFactor {
            kind: Kind::ExpCutoff { lambda },
        })
    }

    /// Product of catalog members.
    pub fn product(factors: Vec<FormFactor>) -> Result<Self, EngineError> {
        if factors.is_empty() {
            return Err(EngineError::validation(
                "product needs at least one factor",
                "FormFactor::product",
            ));
        }
        Ok(FormFactor {
            kind: Kind::Product { factors },
        })
    }

    /// The recorded poles of rational factors (empty for other kinds).
    pub fn recorded_poles(&self) -> Vec<Complex> {
        match &self.kind {
            Kind::Rational { poles, .. } => poles.clone(),
            Kind::Product { factors } => factors.iter().flat_map(|f| f.recorded_poles()).collect(),
            _ => Vec::new(),
        }
    }

    /// Evaluates on the real spectrum, E ≥ 0. Real-valued kinds return a
    /// zero imaginary part.
    pub fn eval_real(&self, e: f64) -> Result<Complex, EngineError> {
        let ctx = "FormFactor::eval_real";
        ensure_finite(e, "E", ctx)?;
        if e < 0.0 {
            return Err(EngineError::domain(
                format!("E must be >= 0, got {e}"),
                ctx,
            ));
        }
        if let Kind::PowerLaw { alpha } = &self.kind {
            if e == 0.0 && *alpha < 0.0 {
                return Err(EngineError::domain(
                    "E = 0 with negative power-law exponent",
                    ctx,
                ));
            }
        }
        if let Kind::Product { factors } = &self.kind {
            let mut acc = Complex64::new(1.0, 0.0);
            for f in factors {
                acc *= f.eval_real(e)?;
            }
            return Ok(acc);
        }
        Ok(self.eval_real_unchecked(e))
    }

    /// Analytic continuation, consistent with `eval_real` on (0, ∞).
    /// Power laws use the principal branch; rational kinds reject their
    /// recorded poles.
    pub fn eval_complex(&self, z: Complex) -> Result<Complex, EngineError> {
        let ctx = "FormFactor::eval_complex";
        crate::types::ensure_finite_complex(z, "z", ctx)?;
        match &self.kind {
            Kind::Constant { value } => Ok(Complex64::new(*value, 0.0)),
            Kind::Polynomial { coefficients } => Ok(horner(coefficients, z)),
            Kind::Rational {
                numerator,
                denominator,
                ..
            } => {
                let q = horner(denominator, z);
                if q.norm() == 0.0 {
                    return Err(EngineError::domain(
                        format!("z = {z} is a pole of the rational weight"),
                        ctx,
                    ));
                }
                Ok(horner(numerator, z) / q)
            }
            Kind::PowerLaw { alpha } => {
                if z.im == 0.0 && z.re < 0.0 || (z == Complex64::new(0.0, 0.0) && *alpha < 0.0) {
                    return Err(EngineError::branch_cut(
                        format!("z = {z} lies on the principal power-law cut"),
                        ctx,
                    ));
                }
                Ok(principal_pow(z, *alpha))
            }
            Kind::ExpCutoff { lambda } => Ok((-z / *lambda).exp()),
            Kind::Product { factors } => {
                let mut acc = Complex64::new(1.0, 0.0);
                for f in factors {
                    acc *= f.eval_complex(z)?;
                }
                Ok(acc)
            }
        }
    }

    /// Infallible evaluation for E > 0, used inside quadrature loops after
    /// domain checks have been done once.
    pub(crate) fn eval_real_unchecked(&self, e: f64) -> Complex {
        match &self.kind {
            Kind::Constant { value } => Complex64::new(*value, 0.0),
            Kind::Polynomial { coefficients } => horner(coefficients, Complex64::new(e, 0.0)),
            Kind::Rational {
                numerator,
                denominator,
                ..
            } => {
                horner(numerator, Complex64::new(e, 0.0))
                    / horner(denominator, Complex64::new(e, 0.0))
            }
            Kind::PowerLaw { alpha } => Complex64::new(e.powf(*alpha), 0.0),
            Kind::ExpCutoff { lambda } => Complex64::new((-e / *lambda).exp(), 0.0),
            Kind::Product { factors } => factors
                .iter()
                .map(|f| f.eval_real_unchecked(e))
                .product(),
        }
    }

    /// Infallible continuation for points guaranteed off cuts and poles
    /// (the rotated rays of an admissible weight).
    pub(crate) fn eval_complex_unchecked(&self, z: Complex) -> Complex {
        match &self.kind {
            Kind::Constant { value } => Complex64::new(*value, 0.0),
            Kind::Polynomial { coefficients } => horner(coefficients, z),
            Kind::Rational {
                numerator,
                denominator,
                ..
            } => horner(numerator, z) / horner(denominator, z),
            Kind::PowerLaw { alpha } => principal_pow(z, *alpha),
            Kind::ExpCutoff { lambda } => (-z / *lambda).exp(),
            Kind::Product { factors } => factors
                .iter()
                .map(|f| f.eval_complex_unchecked(z))
                .product(),
        }
    }

    /// Decides whether the quarter-circle closure in `direction` is sound
    /// for this weight. Product kinds combine conservatively: every factor
    /// must pass.
    pub fn admissibility(&self, direction: RotationDirection) -> Admissibility {
        let verdict = |admissible: bool, reason: String| Admissibility {
            admissible,
            direction,
            reason,
        };
        match &self.kind {
            Kind::Constant { .. } => verdict(true, "constant weight".into()),
            Kind::Polynomial { .. } => verdict(
                true,
                "polynomial growth beaten by the rotated-ray damping".into(),
            ),
            Kind::PowerLaw { .. } => verdict(
                true,
                "principal-branch power law: analytic off the negative axis, polynomial growth"
                    .into(),
            ),
            Kind::ExpCutoff { .. } => verdict(
                true,
                "unit modulus along the imaginary axis, bounded on the swept quadrant".into(),
            ),
            Kind::Rational { poles, .. } => {
                for p in poles {
                    let swept = match direction {
                        RotationDirection::Lower => p.re >= 0.0 && p.im <= 0.0,
                        RotationDirection::Upper => p.re >= 0.0 && p.im >= 0.0,
                    };
                    if swept {
                        return verdict(
                            false,
                            format!("denominator pole at {p} lies in the swept quadrant"),
                        );
                    }
                }
                verdict(true, "all denominator poles outside the swept quadrant".into())
            }
            Kind::Product { factors } => {
                for f in factors {
                    let a = f.admissibility(direction);
                    if !a.admissible {
                        return verdict(false, format!("factor fails: {}", a.reason));
                    }
                }
                verdict(true, "every factor admissible".into())
            }
        }
    }

    /// Taylor coefficients of the weight about a real point a > 0, used by
    /// the oscillatory tail correction.
    pub(crate) fn jet(&self, a: f64, order: usize) -> Jet {
        match &self.kind {
            Kind::Constant { value } => Jet::constant(*value, order),
            Kind::Polynomial { coefficients } => Jet::polynomial(coefficients, a, order),
            Kind::Rational {
                numerator,
                denominator,
                ..
            } => Jet::polynomial(numerator, a, order).div(&Jet::polynomial(denominator, a, order)),
            Kind::PowerLaw { alpha } => Jet::power_law(*alpha, a, order),
            Kind::ExpCutoff { lambda } => Jet::exp_cutoff(*lambda, a, order),
            Kind::Product { factors } => {
                let mut acc = Jet::constant(1.0, order);
                for f in factors {
                    acc = acc.mul(&f.jet(a, order));
                }
                acc
            }
        }
    }
}

fn horner(coeffs: &[f64], z: Complex) -> Complex {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Principal branch z^alpha = exp(alpha·Log z).
fn principal_pow(z: Complex, alpha: f64) -> Complex {
    if z == Complex64::new(0.0, 0.0) {
        return Complex64::new(0.0, 0.0); // alpha > 0 guaranteed by caller
    }
    (z.ln() * alpha).exp()
}

/// Durand–Kerner simultaneous iteration for real-coefficient polynomial
/// roots. Deterministic initial guesses, adequate for the modest degrees
/// of catalog denominators.
fn polynomial_roots(coeffs: &[f64]) -> Vec<Complex> {
    // strip trailing zero coefficients (degree), leading handled by monic scaling
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.len() > 1 && c[c.len() - 1] == 0.0 {
        c.pop();
    }
    let deg = c.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    let lead = c[deg];
    let monic: Vec<Complex64> = c.iter().map(|x| Complex64::new(x / lead, 0.0)).collect();
    let radius = 1.0
        + monic
            .iter()
            .take(deg)
            .fold(0.0f64, |m, x| m.max(x.norm()));
    let seed = Complex64::from_polar(1.0, 0.4);
    let mut roots: Vec<Complex64> = (0..deg)
        .map(|k| {
            Complex64::from_polar(radius * 0.9, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / deg as f64)
                * seed.powi(0)
        })
        .collect();
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for cc in monic.iter().rev() {
            acc = acc * z + cc;
        }
        acc
    };
    for _ in 0..300 {
        let mut shift = 0.0f64;
        let snapshot = roots.clone();
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for (j, r) in snapshot.iter().enumerate() {
                if j != i {
                    denom *= snapshot[i] - r;
                }
            }
            if denom.norm() == 0.0 {
                denom = Complex64::new(1e-12, 0.0);
            }
            let delta = eval(snapshot[i]) / denom;
            roots[i] = snapshot[i] - delta;
            shift = shift.max(delta.norm());
        }
        if shift < 1e-14 * radius {
            break;
        }
    }
    roots
}

// --- serde: deserialize through a raw schema, then validate ---

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawKind {
    Constant { value: f64 },
    Polynomial { coefficients: Vec<f64> },
    Rational { numerator: Vec<f64>, denominator: Vec<f64> },
    PowerLaw { alpha: f64 },
    ExpCutoff { lambda: f64 },
    Product { factors: Vec<RawKind> },
}

fn build(raw: RawKind) -> Result<FormFactor, EngineError> {
    match raw {
        RawKind::Constant { value } => FormFactor::constant(value),
        RawKind::Polynomial { coefficients } => FormFactor::polynomial(coefficients),
        RawKind::Rational {
            numerator,
            denominator,
        } => FormFactor::rational(numerator, denominator),
        RawKind::PowerLaw { alpha } => FormFactor::power_law(alpha),
        RawKind::ExpCutoff { lambda } => FormFactor::exp_cutoff(lambda),
        RawKind::Product { factors } => {
            let built: Result<Vec<_>, _> = factors.into_iter().map(build).collect();
            FormFactor::product(built?)
        }
    }
}

impl<'de> Deserialize<'de> for FormFactor {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let raw = RawKind::deserialize(deserializer)?;
        build(raw).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn eval_real_examples() {
        let p = FormFactor::polynomial(vec![1.0, 0.0, 1.0]).unwrap();
        assert_eq!(p.eval_real(2.0).unwrap(), c(5.0, 0.0));

        let s = FormFactor::power_law(0.5).unwrap();
        assert_eq!(s.eval_real(4.0).unwrap(), c(2.0, 0.0));

        let r = FormFactor::rational(vec![1.0], vec![1.0, 1.0]).unwrap();
        assert_eq!(r.eval_real(1.0).unwrap(), c(0.5, 0.0));
    }

    #[test]
    fn eval_complex_examples() {
        let sq = FormFactor::polynomial(vec![0.0, 0.0, 1.0]).unwrap();
        let got = sq.eval_complex(c(3.0, -0.4)).unwrap();
        assert!((got - c(8.84, -2.4)).norm() <= 1e-12);

        // principal sqrt(-4i) = 2 e^{-i pi/4}
        let s = FormFactor::power_law(0.5).unwrap();
        let got = s.eval_complex(c(0.0, -4.0)).unwrap();
        let want = Complex::from_polar(2.0, -std::f64::consts::FRAC_PI_4);
        assert!((got - want).norm() <= 1e-12);

        let e = FormFactor::exp_cutoff(1.0).unwrap();
        let got = e.eval_complex(c(0.0, std::f64::consts::PI)).unwrap();
        assert!((got - c(-1.0, 0.0)).norm() <= 1e-12);
    }

    #[test]
    fn negative_power_law_rejects_zero() {
        let f = FormFactor::power_law(-0.5).unwrap();
        assert_eq!(
            f.eval_real(0.0).unwrap_err().kind(),
            crate::ErrorKind::Domain
        );
        assert!(f.eval_real(1e-12).is_ok());
    }

    #[test]
    fn power_law_cut_is_an_error() {
        let f = FormFactor::power_law(0.5).unwrap();
        assert_eq!(
            f.eval_complex(c(-2.0, 0.0)).unwrap_err().kind(),
            crate::ErrorKind::BranchCutHit
        );
    }

    #[test]
    fn rational_rejects_spectrum_poles() {
        // pole at E = 2
        assert!(FormFactor::rational(vec![1.0], vec![-2.0, 1.0]).is_err());
        // pole at E = 0
        assert!(FormFactor::rational(vec![1.0], vec![0.0, 1.0]).is_err());
        // poles at -1 +/- i are fine
        assert!(FormFactor::rational(vec![1.0], vec![2.0, 2.0, 1.0]).is_ok());
    }

    #[test]
    fn recorded_poles_found() {
        // denominator (E+1)^2 + 1 -> roots -1 +/- i
        let f = FormFactor::rational(vec![1.0], vec![2.0, 2.0, 1.0]).unwrap();
        let mut poles = f.recorded_poles();
        poles.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((poles[0] - c(-1.0, -1.0)).norm() <= 1e-9);
        assert!((poles[1] - c(-1.0, 1.0)).norm() <= 1e-9);
    }

    #[test]
    fn admissibility_examples() {
        let p = FormFactor::polynomial(vec![0.0, 0.0, 1.0]).unwrap();
        assert!(p.admissibility(RotationDirection::Lower).admissible);

        // pole at -1 - i sits in the third quadrant: lower rotation fine
        let r = FormFactor::rational(vec![1.0], vec![2.0, 2.0, 1.0]).unwrap();
        assert!(r.admissibility(RotationDirection::Lower).admissible);

        // real coefficients put poles at 1 -/+ i, one in each swept
        // quadrant: both rotation directions are refused
        let bad = FormFactor::rational(vec![1.0], vec![2.0, -2.0, 1.0]).unwrap();
        let v = bad.admissibility(RotationDirection::Lower);
        assert!(!v.admissible);
        assert!(v.reason.contains("pole"));
        assert!(!bad.admissibility(RotationDirection::Upper).admissible);

        // product is conservative
        let prod = FormFactor::product(vec![p, bad]).unwrap();
        assert!(!prod.admissibility(RotationDirection::Lower).admissible);
    }

    #[test]
    fn continuation_consistency_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let factors: Vec<FormFactor> = vec![
            FormFactor::one(),
            FormFactor::polynomial(vec![1.0, -2.0, 0.5]).unwrap(),
            FormFactor::power_law(0.5).unwrap(),
            FormFactor::exp_cutoff(5.0).unwrap(),
            FormFactor::rational(vec![1.0, 1.0], vec![2.0, 2.0, 1.0]).unwrap(),
            FormFactor::product(vec![
                FormFactor::polynomial(vec![0.0, 1.0]).unwrap(),
                FormFactor::exp_cutoff(2.0).unwrap(),
            ])
            .unwrap(),
        ];
        for f in &factors {
            for _ in 0..1000 {
                let e: f64 = rng.gen_range(-6.0f64..3.0).exp();
                let real = f.eval_real(e).unwrap();
                let cont = f.eval_complex(c(e, 0.0)).unwrap();
                assert!(
                    (real - cont).norm() <= 1e-14 * (1.0 + real.norm()),
                    "kind mismatch at E={e}"
                );
                assert_eq!(real.im, 0.0);
            }
        }
    }

    #[test]
    fn product_homomorphism() {
        let f = FormFactor::polynomial(vec![1.0, 2.0]).unwrap();
        let g = FormFactor::exp_cutoff(3.0).unwrap();
        let prod = FormFactor::product(vec![f.clone(), g.clone()]).unwrap();
        let z = c(1.5, -0.7);
        let lhs = prod.eval_complex(z).unwrap();
        let rhs = f.eval_complex(z).unwrap() * g.eval_complex(z).unwrap();
        assert!((lhs - rhs).norm() <= 1e-14 * rhs.norm());
    }

    #[test]
    fn admissible_monotone_under_polynomial_products() {
        let base = FormFactor::exp_cutoff(2.0).unwrap();
        for dir in [RotationDirection::Lower, RotationDirection::Upper] {
            if base.admissibility(dir).admissible {
                let times_poly = FormFactor::product(vec![
                    base.clone(),
                    FormFactor::polynomial(vec![0.0, 0.0, 3.0]).unwrap(),
                ])
                .unwrap();
                assert!(times_poly.admissibility(dir).admissible);
            }
        }
    }

    #[test]
    fn serde_round_trip_and_rejection() {
        let f = FormFactor::product(vec![
            FormFactor::polynomial(vec![0.0, 0.0, 1.0]).unwrap(),
            FormFactor::exp_cutoff(5.0).unwrap(),
        ])
        .unwrap();
        let json = serde_json::to_string(&f).unwrap();
        let back: FormFactor = serde_json::from_str(&json).unwrap();
        assert_eq!(f, back);

        // invalid payloads rejected through the validating constructor
        assert!(serde_json::from_str::<FormFactor>(r#"{"kind":"power_law","alpha":-2.0}"#).is_err());
        assert!(serde_json::from_str::<FormFactor>(
            r#"{"kind":"rational","numerator":[1.0],"denominator":[-2.0,1.0]}"#
        )
        .is_err());
        assert!(serde_json::from_str::<FormFactor>(r#"{"kind":"gaussian","sigma":1.0}"#).is_err());
    }

    proptest! {
        #[test]
        fn jets_match_finite_differences(a in 0.5f64..20.0) {
            let f = FormFactor::product(vec![
                FormFactor::polynomial(vec![1.0, 1.0]).unwrap(),
                FormFactor::exp_cutoff(4.0).unwrap(),
            ]).unwrap();
            let jet = f.jet(a, 3);
            let h = 1e-5 * a;
            let fp = f.eval_real(a + h).unwrap();
            let fm = f.eval_real(a - h).unwrap();
            let f0 = f.eval_real(a).unwrap();
            let d1 = (fp - fm) / (2.0 * h);
            let d2 = (fp - 2.0 * f0 + fm) / (h * h);
            prop_assert!((jet.coeffs[0] - f0).norm() <= 1e-12 * (1.0 + f0.norm()));
            prop_assert!((jet.coeffs[1] - d1).norm() <= 1e-6 * (1.0 + d1.norm()));
            prop_assert!((jet.coeffs[2] * 2.0 - d2).norm() <= 1e-4 * (1.0 + d2.norm()));
        }
    }
}
