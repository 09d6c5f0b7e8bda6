//! Spectral solver for the global quasi-geostrophic equations on the unit sphere,
//! together with the Misiołek-curvature toolkit for zonal stationary flows.
//!
//! The crate is organised bottom-up:
//!
//! - [`spectral`]: Gauss–Legendre quadrature, normalised associated Legendre
//!   functions and the spherical-harmonic transform pair.
//! - [`operators`]: Laplacian, multiplication by `z`, the banded elliptic solve
//!   for `γz² − Δ`, the dealiased Poisson bracket and `L²` pairings.
//! - [`dynamics`]: the potential-vorticity model, RK4 time stepping and
//!   conservation diagnostics.
//! - [`curvature`]: `MC_ν`, `MCᴬ`, the central-extension correction and the
//!   conjugate-point threshold in the Lamb parameter.
//! - [`io`]: config parsing, snapshot/CSV/JSON formats and the command drivers
//!   used by the `gqg` binary.

pub mod curvature;
pub mod dynamics;
mod error;
pub mod io;
pub mod operators;
pub mod spectral;

pub use error::{Error, Result};
pub use spectral::{GridField, QuadratureRule, SpectralField};
