use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_complex::Complex64;

use super::legendre::{tri_index, triangle_len};
use super::quadrature::QuadratureRule;

/// Spherical-harmonic coefficients of a real scalar field on the unit sphere.
///
/// Only `m >= 0` is stored; negative orders follow from
/// `â(l, -m) = (-1)^m conj(â(l, m))`, so the represented field is
/// `Σ_l [ â(l,0) Y(l,0) + 2 Re Σ_{m>0} â(l,m) Y(l,m) ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    lmax: usize,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(lmax: usize) -> Self {
        Self { lmax, coeffs: vec![Complex64::new(0.0, 0.0); triangle_len(lmax)] }
    }

    /// Builds a field from m-major triangular storage (`m = 0..=lmax`, `l = m..=lmax`).
    pub fn from_coeffs(lmax: usize, coeffs: Vec<Complex64>) -> Self {
        assert_eq!(coeffs.len(), triangle_len(lmax), "coefficient count does not match lmax");
        Self { lmax, coeffs }
    }

    pub fn from_fn(lmax: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut out = Self::zeros(lmax);
        for m in 0..=lmax {
            for l in m..=lmax {
                out.coeffs[tri_index(lmax, l, m)] = f(l, m);
            }
        }
        out
    }

    /// Single real harmonic mode: `Y(l,0)` for `m = 0`, otherwise `√2 Re Y(l,m)`
    /// (unit `L²` norm in both cases).
    pub fn real_harmonic(lmax: usize, l: usize, m: usize) -> Self {
        let mut out = Self::zeros(lmax);
        let v = if m == 0 { 1.0 } else { std::f64::consts::FRAC_1_SQRT_2 };
        out.set(l, m, Complex64::new(v, 0.0));
        out
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    #[inline]
    pub fn get(&self, l: usize, m: usize) -> Complex64 {
        self.coeffs[tri_index(self.lmax, l, m)]
    }

    #[inline]
    pub fn set(&mut self, l: usize, m: usize, v: Complex64) {
        self.coeffs[tri_index(self.lmax, l, m)] = v;
    }

    #[inline]
    pub fn add_to(&mut self, l: usize, m: usize, v: Complex64) {
        self.coeffs[tri_index(self.lmax, l, m)] += v;
    }

    /// Coefficients of order `m` for `l = m..=lmax`.
    pub fn order(&self, m: usize) -> &[Complex64] {
        let start = tri_index(self.lmax, m, m);
        &self.coeffs[start..start + self.lmax + 1 - m]
    }

    pub fn order_mut(&mut self, m: usize) -> &mut [Complex64] {
        let start = tri_index(self.lmax, m, m);
        &mut self.coeffs[start..start + self.lmax + 1 - m]
    }

    /// Iterates `(l, m, â(l,m))` in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        let lmax = self.lmax;
        (0..=lmax).flat_map(move |m| (m..=lmax).map(move |l| (l, m, self.get(l, m))))
    }

    /// Copy at a different truncation: zero-padded upwards, truncated downwards.
    pub fn resized(&self, lmax: usize) -> Self {
        let keep = lmax.min(self.lmax);
        let mut out = Self::zeros(lmax);
        for m in 0..=keep {
            for l in m..=keep {
                out.set(l, m, self.get(l, m));
            }
        }
        out
    }

    /// `Σ |â|²` over the full `±m` set, i.e. `∫ f² dν`.
    pub fn norm_sq(&self) -> f64 {
        self.iter()
            .map(|(_, m, a)| if m == 0 { a.norm_sqr() } else { 2.0 * a.norm_sqr() })
            .sum()
    }

    /// Largest imaginary part among the `m = 0` coefficients, which must be real.
    pub fn reality_defect(&self) -> f64 {
        self.order(0).iter().map(|a| a.im.abs()).fold(0.0, f64::max)
    }

    /// Drops the imaginary part of the `m = 0` coefficients.
    pub fn enforce_reality(&mut self) {
        for a in self.order_mut(0) {
            a.im = 0.0;
        }
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|a| a.re.is_finite() && a.im.is_finite())
    }

    /// True when every `m > 0` coefficient is exactly zero.
    pub fn is_zonal(&self) -> bool {
        self.iter().all(|(_, m, a)| m == 0 || (a.re == 0.0 && a.im == 0.0))
    }

    pub fn scale(&mut self, s: f64) {
        for a in &mut self.coeffs {
            *a *= s;
        }
    }

    /// Maps each coefficient through `f(l, m, â)`.
    pub fn map(&self, mut f: impl FnMut(usize, usize, Complex64) -> Complex64) -> Self {
        Self::from_fn(self.lmax, |l, m| f(l, m, self.get(l, m)))
    }

    fn assert_same_shape(&self, other: &Self) {
        assert_eq!(self.lmax, other.lmax, "spectral fields have different truncations");
    }
}

impl AddAssign<&SpectralField> for SpectralField {
    fn add_assign(&mut self, rhs: &SpectralField) {
        self.assert_same_shape(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&SpectralField> for SpectralField {
    fn sub_assign(&mut self, rhs: &SpectralField) {
        self.assert_same_shape(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: &SpectralField) -> SpectralField {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: &SpectralField) -> SpectralField {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, rhs: f64) -> SpectralField {
        let mut out = self.clone();
        out.scale(rhs);
        out
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;
    fn neg(self) -> SpectralField {
        self * -1.0
    }
}

/// Real values on the Gauss–Legendre × equispaced-longitude grid.
///
/// Row `k` sits at `z = nodes[k]`; column `j` at `λ = 2πj / nlon`.
#[derive(Debug, Clone)]
pub struct GridField {
    rule: Arc<QuadratureRule>,
    nlon: usize,
    values: Vec<f64>,
}

impl GridField {
    pub fn new(rule: Arc<QuadratureRule>, nlon: usize, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), rule.len() * nlon, "grid value count mismatch");
        Self { rule, nlon, values }
    }

    /// Samples `f(z, λ)` at every grid point.
    pub fn from_fn(rule: Arc<QuadratureRule>, nlon: usize, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(rule.len() * nlon);
        for &z in rule.nodes() {
            for j in 0..nlon {
                values.push(f(z, longitude(j, nlon)));
            }
        }
        Self { rule, nlon, values }
    }

    pub fn nlat(&self) -> usize {
        self.rule.len()
    }

    pub fn nlon(&self) -> usize {
        self.nlon
    }

    pub fn rule(&self) -> &Arc<QuadratureRule> {
        &self.rule
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.values[k * self.nlon..(k + 1) * self.nlon]
    }

    #[inline]
    pub fn at(&self, k: usize, j: usize) -> f64 {
        self.values[k * self.nlon + j]
    }

    pub fn longitude(&self, j: usize) -> f64 {
        longitude(j, self.nlon)
    }

    /// Grid quadrature `Σ_k w_k (2π/nlon) Σ_j f(z_k, λ_j)`.
    pub fn integrate(&self) -> f64 {
        let dl = 2.0 * std::f64::consts::PI / self.nlon as f64;
        (0..self.nlat())
            .map(|k| self.rule.weights()[k] * self.row(k).iter().sum::<f64>())
            .sum::<f64>()
            * dl
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Pointwise combination of two fields on the same grid.
    pub fn zip_with(&self, other: &GridField, f: impl Fn(f64, f64) -> f64) -> GridField {
        assert_eq!(self.values.len(), other.values.len(), "grid shape mismatch");
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        GridField { rule: self.rule.clone(), nlon: self.nlon, values }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> GridField {
        GridField { rule: self.rule.clone(), nlon: self.nlon, values: self.values.iter().map(|&v| f(v)).collect() }
    }
}

#[inline]
pub(crate) fn longitude(j: usize, nlon: usize) -> f64 {
    2.0 * std::f64::consts::PI * j as f64 / nlon as f64
}
