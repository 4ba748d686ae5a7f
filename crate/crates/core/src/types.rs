//! Shared domain types: resonances, time grids, amplitude series.
//!
//! All types are immutable value objects after construction and validate
//! their invariants at the constructor, so downstream numerics never
//! re-check inputs.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{ensure_finite, EngineError};

/// Complex scalar used throughout the crate.
pub type Complex = Complex64;

/// A resonance pole `z_R = E_R − iΓ/2` in the open fourth quadrant of the
/// complex energy plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Resonance {
    e_r: f64,
    gamma: f64,
}

impl Resonance {
    /// Builds a resonance from position `E_R > 0` and width `Γ > 0`.
    pub fn new(e_r: f64, gamma: f64) -> Result<Self, EngineError> {
        let ctx = "Resonance::new";
        ensure_finite(e_r, "E_R", ctx)?;
        ensure_finite(gamma, "Gamma", ctx)?;
        if e_r <= 0.0 {
            return Err(EngineError::validation(
                format!("E_R must be > 0 (spectrum lower bound at 0), got {e_r}"),
                ctx,
            ));
        }
        if gamma <= 0.0 {
            return Err(EngineError::validation(
                format!("Gamma must be > 0, got {gamma}"),
                ctx,
            ));
        }
        Ok(Resonance { e_r, gamma })
    }

    pub fn e_r(&self) -> f64 {
        self.e_r
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// The pole `z_R = E_R − iΓ/2`; real part `E_R` and imaginary part
    /// `−Γ/2` exactly.
    pub fn pole(&self) -> Complex {
        Complex::new(self.e_r, -0.5 * self.gamma)
    }
}

/// Sample spacing of a [`TimeGrid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Logarithmic,
}

/// Strictly increasing grid of evolution times, all `> 0`.
///
/// `t = 0` is excluded by construction: the half-line amplitude with
/// `f ≡ 1` diverges logarithmically there and the complex-delta evolution
/// is undefined.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeGrid {
    start: f64,
    stop: f64,
    spacing: Spacing,
    #[serde(skip)]
    samples: Vec<f64>,
}

impl TimeGrid {
    pub fn new(start: f64, stop: f64, points: usize, spacing: Spacing) -> Result<Self, EngineError> {
        let ctx = "TimeGrid::new";
        ensure_finite(start, "start", ctx)?;
        ensure_finite(stop, "stop", ctx)?;
        if start <= 0.0 {
            return Err(EngineError::validation(
                format!("start must be > 0, got {start}"),
                ctx,
            ));
        }
        if stop <= start {
            return Err(EngineError::validation(
                format!("stop must exceed start, got start={start} stop={stop}"),
                ctx,
            ));
        }
        if points < 2 {
            return Err(EngineError::validation(
                format!("points must be >= 2, got {points}"),
                ctx,
            ));
        }
        let n = points as f64;
        let samples: Vec<f64> = match spacing {
            Spacing::Linear => {
                let step = (stop - start) / (n - 1.0);
                (0..points)
                    .map(|i| {
                        if i + 1 == points {
                            stop
                        } else {
                            start + step * i as f64
                        }
                    })
                    .collect()
            }
            Spacing::Logarithmic => {
                let log_ratio = (stop / start).ln();
                (0..points)
                    .map(|i| {
                        if i + 1 == points {
                            stop
                        } else {
                            start * (log_ratio * i as f64 / (n - 1.0)).exp()
                        }
                    })
                    .collect()
            }
        };
        for w in samples.windows(2) {
            if w[1] <= w[0] {
                return Err(EngineError::validation(
                    format!("grid not strictly increasing near t={}", w[0]),
                    ctx,
                ));
            }
        }
        Ok(TimeGrid {
            start,
            stop,
            spacing,
            samples,
        })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn stop(&self) -> f64 {
        self.stop
    }

    pub fn spacing(&self) -> Spacing {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }
}

/// Which amplitude model produced a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelTag {
    BwHalfline,
    BwFullline,
    ComplexDelta,
    Background,
}

impl ModelTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelTag::BwHalfline => "bw_halfline",
            ModelTag::BwFullline => "bw_fullline",
            ModelTag::ComplexDelta => "complex_delta",
            ModelTag::Background => "background",
        }
    }
}

impl std::str::FromStr for ModelTag {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bw_halfline" => Ok(ModelTag::BwHalfline),
            "bw_fullline" => Ok(ModelTag::BwFullline),
            "complex_delta" => Ok(ModelTag::ComplexDelta),
            "background" => Ok(ModelTag::Background),
            other => Err(EngineError::validation(
                format!("unknown model tag '{other}'"),
                "ModelTag::from_str",
            )),
        }
    }
}

/// Complex amplitude sampled on a time grid, with optional per-point
/// error estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeSeries {
    pub model: ModelTag,
    pub grid: TimeGrid,
    pub values: Vec<Complex>,
    pub errors: Option<Vec<f64>>,
}

impl AmplitudeSeries {
    pub fn new(
        model: ModelTag,
        grid: TimeGrid,
        values: Vec<Complex>,
        errors: Option<Vec<f64>>,
    ) -> Result<Self, EngineError> {
        let ctx = "AmplitudeSeries::new";
        if values.len() != grid.len() {
            return Err(EngineError::validation(
                format!(
                    "values.len() = {} does not match grid points = {}",
                    values.len(),
                    grid.len()
                ),
                ctx,
            ));
        }
        for v in &values {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(EngineError::validation("non-finite amplitude value", ctx));
            }
        }
        if let Some(errs) = &errors {
            if errs.len() != values.len() {
                return Err(EngineError::validation(
                    "errors.len() does not match values.len()",
                    ctx,
                ));
            }
            for e in errs {
                if !e.is_finite() || *e < 0.0 {
                    return Err(EngineError::validation(
                        format!("error estimates must be finite and >= 0, got {e}"),
                        ctx,
                    ));
                }
            }
        }
        Ok(AmplitudeSeries {
            model,
            grid,
            values,
            errors,
        })
    }
}

/// Checks a complex value for finiteness at an API boundary.
pub(crate) fn ensure_finite_complex(z: Complex, name: &str, ctx: &str) -> Result<(), EngineError> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(EngineError::validation(
            format!("{name} must be finite, got {z}"),
            ctx,
        ))
    }
}
