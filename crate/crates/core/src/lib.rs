//! Numerical laboratory for resonant decay amplitudes.
//!
//! A resonance with energy `E_R` and width `Γ` has the complex pole
//! `z_R = E_R − iΓ/2`. Three amplitude models are computed and compared:
//!
//! * **half-line Breit-Wigner** — the exact integral
//!   `∫₀^∞ e^{−iEt} f(E)/(E − z_R) dE` over the physical spectrum,
//!   evaluated either by pole-aware contour rotation or by a brute-force
//!   oscillatory quadrature oracle;
//! * **full-line Breit-Wigner** — the closed form
//!   `(2π/i)·f(z_R)·e^{−iE_R t}·e^{−Γt/2}` obtained when the integration
//!   range is extended to the whole real line;
//! * **complex delta** — `f(z_R)·e^{−iE_R t}·e^{−Γt/2}`, the value picked
//!   out of the half-line integral by the complex delta distribution,
//!   defined for `t > 0` only.
//!
//! The full-line and complex-delta amplitudes coincide up to the exact
//! factor `−2πi`; the half-line amplitude differs from both by a smooth
//! background with a power-law tail. The [`analysis`] module quantifies
//! that deviation; [`casestudies`] applies the machinery to a decaying
//! wavefront, a field correlation function, and a causality precursor
//! scan; [`acceptance`] packages the verification suite run by both
//! `cargo test` and the CLI `selftest` subcommand.
//!
//! Units: ħ = 1 throughout; energies and inverse times share one unit.

pub mod acceptance;
pub mod amplitudes;
pub mod analysis;
pub mod casestudies;
pub mod error;
pub mod formfactor;
mod jet;
pub mod parallel;
pub mod quadrature;
pub mod specfun;
pub mod types;

pub use error::{EngineError, ErrorKind};
pub use formfactor::{Admissibility, FormFactor, RotationDirection};
pub use quadrature::{IntegralResult, QuadratureConfig, RotationPlan};
pub use types::{AmplitudeSeries, Complex, ModelTag, Resonance, Spacing, TimeGrid};
