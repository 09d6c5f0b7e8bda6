use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid {nlat}x{nlon} too small for lmax {lmax} (need nlat >= {} and nlon >= {})", lmax + 1, 2 * lmax + 1)]
    GridTooSmall { nlat: usize, nlon: usize, lmax: usize },

    #[error("synthesised field has imaginary residue {residue:e} (limit {limit:e})")]
    RealityViolated { residue: f64, limit: f64 },

    #[error("elliptic operator is singular: {0}")]
    SingularOperator(String),

    #[error("unstable step at t = {t}: advective number {number:.4} exceeds limit {limit}")]
    UnstableStep { t: f64, number: f64, limit: f64 },

    #[error("direction is zonal: {{z^2, g}} vanishes and the curvature criterion is degenerate")]
    ZonalDirection,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
