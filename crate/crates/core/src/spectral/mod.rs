//! Spherical-harmonic analysis and synthesis on the unit sphere.
//!
//! Fields live either as [`SpectralField`] coefficients (orthonormal
//! harmonics, Condon–Shortley phase, Laplacian eigenvalues `-l(l+1)`) or as
//! [`GridField`] samples on a Gauss–Legendre × equispaced-longitude grid.

mod field;
mod legendre;
mod quadrature;
mod transform;

pub use field::{GridField, SpectralField};
pub use legendre::{alp, alp_column, alp_table, tri_index, triangle_len, z_coupling, AlpTable};
pub use quadrature::{gauss_legendre, QuadratureRule};
pub use transform::{analysis, dealiased_grid, default_grid, synthesis, Transform};
