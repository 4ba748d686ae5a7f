//! Run configuration: JSON schema, defaults, and flag overrides.
//!
//! Every config is validated en bloc before any computation starts;
//! unknown fields are rejected so typos fail loudly instead of silently
//! using defaults.

use serde::Deserialize;

use reslab_core::amplitudes::HalflineStrategy;
use reslab_core::{
    EngineError, FormFactor, ModelTag, QuadratureConfig, Resonance, Spacing, TimeGrid,
};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResonanceSpec {
    pub e_r: f64,
    pub gamma: f64,
}

impl Default for ResonanceSpec {
    fn default() -> Self {
        ResonanceSpec {
            e_r: 1.0,
            gamma: 0.1,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGridSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default = "default_spacing")]
    pub spacing: SpacingSpec,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum SpacingSpec {
    Linear,
    Logarithmic,
}

fn default_spacing() -> SpacingSpec {
    SpacingSpec::Logarithmic
}

impl Default for TimeGridSpec {
    fn default() -> Self {
        TimeGridSpec {
            start: 0.5,
            stop: 50.0,
            points: 33,
            spacing: SpacingSpec::Logarithmic,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default = "default_format")]
    pub format: OutputFormat,
    /// Output file; stdout when absent.
    #[serde(default)]
    pub path: Option<String>,
}

fn default_format() -> OutputFormat {
    OutputFormat::Csv
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            format: OutputFormat::Csv,
            path: None,
        }
    }
}

fn default_models() -> Vec<String> {
    vec![
        "bw_halfline".into(),
        "bw_fullline".into(),
        "complex_delta".into(),
    ]
}

fn default_form_factor() -> serde_json::Value {
    serde_json::json!({"kind": "constant", "value": 1.0})
}

fn default_strategy() -> String {
    "auto".into()
}

/// Top-level config file schema.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub resonance: ResonanceSpec,
    pub form_factor: serde_json::Value,
    pub time_grid: TimeGridSpec,
    pub models: Vec<String>,
    pub halfline_strategy: String,
    pub quadrature: QuadratureConfig,
    pub output: OutputSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            resonance: ResonanceSpec::default(),
            form_factor: default_form_factor(),
            time_grid: TimeGridSpec::default(),
            models: default_models(),
            halfline_strategy: default_strategy(),
            quadrature: QuadratureConfig::default(),
            output: OutputSpec::default(),
        }
    }
}

/// Fully validated runtime view of a [`RunConfig`].
pub struct ValidatedRun {
    pub resonance: Resonance,
    pub form_factor: FormFactor,
    pub grid: TimeGrid,
    pub models: Vec<ModelTag>,
    pub strategy: HalflineStrategy,
    pub quadrature: QuadratureConfig,
}

impl RunConfig {
    pub fn load(path: &str) -> Result<Self, EngineError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            EngineError::validation(format!("cannot read config {path}: {e}"), "config")
        })?;
        serde_json::from_str(&text)
            .map_err(|e| EngineError::validation(format!("invalid config: {e}"), "config"))
    }

    pub fn validate(&self) -> Result<ValidatedRun, EngineError> {
        let resonance = Resonance::new(self.resonance.e_r, self.resonance.gamma)?;
        let form_factor: FormFactor = serde_json::from_value(self.form_factor.clone())
            .map_err(|e| EngineError::validation(format!("form_factor: {e}"), "config"))?;
        let spacing = match self.time_grid.spacing {
            SpacingSpec::Linear => Spacing::Linear,
            SpacingSpec::Logarithmic => Spacing::Logarithmic,
        };
        let grid = TimeGrid::new(
            self.time_grid.start,
            self.time_grid.stop,
            self.time_grid.points,
            spacing,
        )?;
        if self.models.is_empty() {
            return Err(EngineError::validation("models list is empty", "config"));
        }
        let models: Result<Vec<ModelTag>, EngineError> =
            self.models.iter().map(|m| m.parse()).collect();
        let strategy = match self.halfline_strategy.as_str() {
            "auto" => HalflineStrategy::Auto,
            "rotation" => HalflineStrategy::Rotation,
            "direct_oracle" => HalflineStrategy::DirectOracle,
            other => {
                return Err(EngineError::validation(
                    format!("unknown halfline_strategy '{other}'"),
                    "config",
                ))
            }
        };
        self.quadrature.validate()?;
        Ok(ValidatedRun {
            resonance,
            form_factor,
            grid,
            models: models?,
            strategy,
            quadrature: self.quadrature,
        })
    }
}

/// Complex prefactor in parameter files.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

fn default_prefactor() -> ComplexSpec {
    ComplexSpec { re: 1.0, im: 0.0 }
}

/// Retarded-time grid for case studies: linear, may include τ < 0, must
/// not contain τ = 0.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TauGridSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl TauGridSpec {
    pub fn build(&self) -> Result<Vec<f64>, EngineError> {
        let ctx = "tau_grid";
        if !(self.start.is_finite() && self.stop.is_finite()) || self.stop <= self.start {
            return Err(EngineError::validation("need finite start < stop", ctx));
        }
        if self.points < 2 {
            return Err(EngineError::validation("points must be >= 2", ctx));
        }
        let n = self.points as f64;
        let step = (self.stop - self.start) / (n - 1.0);
        let taus: Vec<f64> = (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.stop
                } else {
                    self.start + step * i as f64
                }
            })
            .collect();
        if taus.contains(&0.0) {
            return Err(EngineError::validation(
                "grid hits tau = 0 exactly; shift the endpoints slightly",
                ctx,
            ));
        }
        Ok(taus)
    }
}

/// Parameter file for the decaying-wavefront case study.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaylorSpec {
    #[serde(default)]
    pub resonance: ResonanceSpec,
    #[serde(default = "default_prefactor")]
    pub prefactor: ComplexSpec,
    #[serde(default = "default_taylor_grid")]
    pub tau_grid: TauGridSpec,
}

fn default_taylor_grid() -> TauGridSpec {
    TauGridSpec {
        start: -30.25,
        stop: 80.25,
        points: 105,
    }
}

impl Default for TaylorSpec {
    fn default() -> Self {
        TaylorSpec {
            resonance: ResonanceSpec::default(),
            prefactor: default_prefactor(),
            tau_grid: default_taylor_grid(),
        }
    }
}

/// Parameter file for the field-correlation case study.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScullySpec {
    pub omega: f64,
    pub gamma: f64,
    pub delta_r: f64,
    pub c: f64,
    pub prefactor: ComplexSpec,
    pub tau_grid: TauGridSpec,
}

impl Default for ScullySpec {
    fn default() -> Self {
        ScullySpec {
            omega: 100.0,
            gamma: 1.0,
            delta_r: 0.5,
            c: 1.0,
            prefactor: default_prefactor(),
            tau_grid: TauGridSpec {
                start: -0.45,
                stop: 5.0,
                points: 100,
            },
        }
    }
}

pub fn load_json<T: serde::de::DeserializeOwned>(path: &str, what: &str) -> Result<T, EngineError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        EngineError::validation(format!("cannot read {what} file {path}: {e}"), what.to_string())
    })?;
    serde_json::from_str(&text)
        .map_err(|e| EngineError::validation(format!("invalid {what}: {e}"), what.to_string()))
}
