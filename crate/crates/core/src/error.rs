//! Error taxonomy shared by every module.
//!
//! Every public operation returns either a value or exactly one
//! [`EngineError`]. The kind is machine-readable; message and context are
//! for humans and logs.

use std::fmt;

/// Classifies every failure a public operation can report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    /// Malformed input: non-finite numbers, empty grids, bad ranges.
    Validation,
    /// Input outside an operation's mathematical domain (e.g. t ≤ 0 for
    /// the complex-delta amplitude, E = 0 for a negative power law).
    Domain,
    /// A form factor that cannot support the requested contour rotation.
    InadmissibleFormFactor,
    /// Quadrature hit its subdivision or evaluation caps without meeting
    /// the requested tolerance.
    QuadratureNonconvergence,
    /// Evaluation landed on the principal branch cut.
    BranchCutHit,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ErrorKind::Validation => "validation",
            ErrorKind::Domain => "domain",
            ErrorKind::InadmissibleFormFactor => "inadmissible_form_factor",
            ErrorKind::QuadratureNonconvergence => "quadrature_nonconvergence",
            ErrorKind::BranchCutHit => "branch_cut_hit",
        };
        f.write_str(s)
    }
}

/// Error value carried by every fallible operation in the crate.
#[derive(Debug, Clone, thiserror::Error)]
#[error("{kind}: {message} [{context}]")]
pub struct EngineError {
    kind: ErrorKind,
    message: String,
    context: String,
}

impl EngineError {
    pub fn new(kind: ErrorKind, message: impl Into<String>, context: impl Into<String>) -> Self {
        EngineError {
            kind,
            message: message.into(),
            context: context.into(),
        }
    }

    pub fn validation(message: impl Into<String>, context: impl Into<String>) -> Self {
        Self::new(ErrorKind::Validation, message, context)
    }

    pub fn domain(message: impl Into<String>, context: impl Into<String>) -> Self {
        Self::new(ErrorKind::Domain, message, context)
    }

    pub fn inadmissible(message: impl Into<String>, context: impl Into<String>) -> Self {
        Self::new(ErrorKind::InadmissibleFormFactor, message, context)
    }

    pub fn nonconvergence(message: impl Into<String>, context: impl Into<String>) -> Self {
        Self::new(ErrorKind::QuadratureNonconvergence, message, context)
    }

    pub fn branch_cut(message: impl Into<String>, context: impl Into<String>) -> Self {
        Self::new(ErrorKind::BranchCutHit, message, context)
    }

    pub fn kind(&self) -> ErrorKind {
        self.kind
    }

    pub fn message(&self) -> &str {
        &self.message
    }

    pub fn context(&self) -> &str {
        &self.context
    }
}

/// Rejects non-finite scalar inputs at API boundaries.
pub(crate) fn ensure_finite(value: f64, name: &str, context: &str) -> Result<(), EngineError> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(EngineError::validation(
            format!("{name} must be finite, got {value}"),
            context,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_is_machine_parsable() {
        let e = EngineError::validation("Gamma must be > 0", "make_resonance");
        assert_eq!(e.kind(), ErrorKind::Validation);
        assert_eq!(e.to_string(), "validation: Gamma must be > 0 [make_resonance]");
    }

    #[test]
    fn ensure_finite_rejects_nan_and_inf() {
        assert!(ensure_finite(1.0, "x", "t").is_ok());
        assert!(ensure_finite(f64::NAN, "x", "t").is_err());
        assert!(ensure_finite(f64::INFINITY, "x", "t").is_err());
    }
}
