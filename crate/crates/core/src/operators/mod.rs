//! Differential and multiplication operators in spectral space.

mod bracket;
mod helmholtz;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::spectral::{z_coupling, GridField, SpectralField, Transform};

pub use bracket::{poisson_bracket, product, Gradient, ProductGrid};
pub use helmholtz::{helmholtz_apply, helmholtz_solve, BandedFactor, BandedOperator, HelmholtzSolver};

/// `Δf`: `â(l,m) ↦ -l(l+1) â(l,m)`.
pub fn laplacian(f: &SpectralField) -> SpectralField {
    f.map(|l, _, a| a * -((l * (l + 1)) as f64))
}

/// `z f`, returned at truncation `lmax + 1` (exact; no coefficient is dropped).
pub fn mul_z(f: &SpectralField) -> SpectralField {
    let lmax = f.lmax();
    let mut out = SpectralField::zeros(lmax + 1);
    for (l, m, a) in f.iter() {
        out.add_to(l + 1, m, a * z_coupling(l, m));
        if l > m {
            out.add_to(l - 1, m, a * z_coupling(l - 1, m));
        }
    }
    out
}

/// `∂f/∂λ`: `â(l,m) ↦ i m â(l,m)`.
pub fn d_dlambda(f: &SpectralField) -> SpectralField {
    f.map(|_, m, a| a * Complex64::new(0.0, m as f64))
}

/// Coefficients of `(1 - z²) ∂f/∂z`, at truncation `lmax + 1`.
///
/// Uses `(1 - z²) dP̄(l)/dz = -l c(l) P̄(l+1) + (l+1) c(l-1) P̄(l-1)` at fixed `m`.
pub fn sin_derivative(f: &SpectralField) -> SpectralField {
    let lmax = f.lmax();
    let mut out = SpectralField::zeros(lmax + 1);
    for (l, m, a) in f.iter() {
        let lf = l as f64;
        out.add_to(l + 1, m, a * (-lf * z_coupling(l, m)));
        if l > m {
            out.add_to(l - 1, m, a * ((lf + 1.0) * z_coupling(l - 1, m)));
        }
    }
    out
}

/// `∂f/∂z` on the default grid of `f`'s truncation.
///
/// Gauss nodes exclude the poles, so dividing `(1 - z²) ∂f/∂z` by `1 - z²` is safe.
pub fn d_dz(f: &SpectralField) -> GridField {
    d_dz_on(&Transform::new(f.lmax()), f)
}

/// `∂f/∂z` on the grid of `transform`.
pub fn d_dz_on(transform: &Transform, f: &SpectralField) -> GridField {
    let (mut values, _) = transform.synthesize_values(&sin_derivative(f));
    let nlon = transform.nlon();
    for (k, &z) in transform.rule().nodes().iter().enumerate() {
        let inv = 1.0 / (1.0 - z * z);
        values[k * nlon..(k + 1) * nlon].iter_mut().for_each(|v| *v *= inv);
    }
    transform.grid_field(values)
}

/// `∫ f dν = √(4π) Re â(0,0)`.
pub fn integral(f: &SpectralField) -> f64 {
    (4.0 * PI).sqrt() * f.get(0, 0).re
}

/// `∫ f g dν` by Parseval over the full `±m` coefficient set.
pub fn l2_inner(f: &SpectralField, g: &SpectralField) -> f64 {
    assert_eq!(f.lmax(), g.lmax(), "l2_inner needs equal truncations");
    f.coeffs()
        .iter()
        .zip(g.coeffs())
        .zip(f.iter())
        .map(|((a, b), (_, m, _))| {
            let re = a.re * b.re + a.im * b.im;
            if m == 0 {
                re
            } else {
                2.0 * re
            }
        })
        .sum()
}

/// Exact expansion of `z^power` (`power <= 2`) at truncation `lmax >= power`.
pub fn z_power(lmax: usize, power: usize) -> SpectralField {
    assert!(power <= lmax);
    let mut f = SpectralField::zeros(0);
    f.set(0, 0, Complex64::new((4.0 * PI).sqrt(), 0.0));
    for _ in 0..power {
        f = mul_z(&f);
    }
    f.resized(lmax)
}
