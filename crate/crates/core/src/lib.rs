//! Pseudospectral simulation of a nonlocal, nonlinear evolution equation for
//! the interface of a multilayer tumor colony.
//!
//! The interface height `g(x₁, t)` lives on the torus and evolves under a
//! stiff surface-tension term `-ηΛ³g`, a quadratic commutator nonlinearity
//! and explicit time-dependent forcing produced by nutrient and inhibitor
//! depth profiles. The crate provides:
//!
//! * [`spectral`] — truncated Fourier representation of real periodic fields
//!   and the multiplier calculus (Hilbert transform, fractional Laplacian,
//!   derivatives, dealiased products, Wiener norms);
//! * [`profile`] / [`params`] — depth-profile data and dimensionless groups;
//! * [`forcing`] — the order-zero and order-one forcing evaluators built from
//!   semi-infinite depth integrals, plus the layered pressure reconstruction;
//! * [`model`] — right-hand sides of the general and depth-only particular
//!   evolution equations;
//! * [`stepper`] — integrating-factor and ETDRK2 time integration with the
//!   stiff multiplier handled exactly;
//! * [`diagnostics`] — Wiener-norm records and decay monitors;
//! * [`config`] — the text run-configuration format used by the CLI;
//! * [`oracle`] — independent brute-force reference computations used by the
//!   test suite and the CLI verification mode.

pub mod config;
pub mod diagnostics;
pub mod error;
pub mod forcing;
pub mod model;
pub mod oracle;
pub mod params;
pub mod profile;
pub mod quad;
pub mod spectral;
pub mod stepper;

pub use error::{Error, Result};
pub use params::{nondimensionalize, DimensionalRates, ModelParams};
pub use profile::DepthProfile;
pub use spectral::{SpectralField, WienerNorm};
