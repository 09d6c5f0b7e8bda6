//! Spherical-harmonic analysis and synthesis.
//!
//! Latitude is handled by Gauss–Legendre quadrature against tabulated
//! `P̄(l,m,z)`, longitude by a complex FFT per latitude row. The Legendre sums
//! are the naive `O(L³)` ones.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::field::{GridField, SpectralField};
use super::legendre::{alp_table, AlpTable};
use super::quadrature::{gauss_legendre, QuadratureRule};
use crate::{Error, Result};

/// Absolute floor for the imaginary residue check in synthesis, scaled by the
/// field magnitude when that exceeds one.
const REALITY_LIMIT: f64 = 1e-10;

/// Default analysis grid for `lmax`: `(lmax + 1) × 2(lmax + 1)`.
pub fn default_grid(lmax: usize) -> (usize, usize) {
    (lmax + 1, 2 * (lmax + 1))
}

/// Grid on which products of two degree-`lmax` fields are analysed back to
/// `lmax` without aliasing, and on which cubic integrands are integrated exactly.
pub fn dealiased_grid(lmax: usize) -> (usize, usize) {
    let nlat = 3 * lmax / 2 + 1;
    let nlon = (3 * lmax + 4) & !1;
    (nlat, nlon)
}

fn check_grid(lmax: usize, nlat: usize, nlon: usize) -> Result<()> {
    if nlat < lmax + 1 || nlon < 2 * lmax + 1 {
        return Err(Error::GridTooSmall { nlat, nlon, lmax });
    }
    Ok(())
}

/// Precomputed transform between a truncation `lmax` and a fixed grid.
///
/// The Legendre table extends one degree past `lmax` so that the
/// `(1 - z²) ∂/∂z` derivative fields (degree `lmax + 1`) can be synthesised
/// on the same grid. Immutable once built; share it freely across threads.
#[derive(Clone)]
pub struct Transform {
    lmax: usize,
    rule: Arc<QuadratureRule>,
    nlon: usize,
    alp: AlpTable,
    fft_fwd: Arc<dyn Fft<f64>>,
    fft_inv: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Transform")
            .field("lmax", &self.lmax)
            .field("nlat", &self.rule.len())
            .field("nlon", &self.nlon)
            .finish()
    }
}

impl Transform {
    /// Transform on the default grid for `lmax`.
    pub fn new(lmax: usize) -> Self {
        let (nlat, nlon) = default_grid(lmax);
        Self::with_grid(lmax, nlat, nlon).expect("default grid satisfies the size invariant")
    }

    /// Transform on the 3/2-padded product grid for `lmax`.
    pub fn dealiased(lmax: usize) -> Self {
        let (nlat, nlon) = dealiased_grid(lmax);
        Self::with_grid(lmax, nlat, nlon).expect("dealiased grid satisfies the size invariant")
    }

    pub fn with_grid(lmax: usize, nlat: usize, nlon: usize) -> Result<Self> {
        check_grid(lmax, nlat, nlon)?;
        Ok(Self::build(lmax, Arc::new(gauss_legendre(nlat)), nlon))
    }

    /// Transform reusing an existing quadrature rule (e.g. the one a [`GridField`] carries).
    pub fn from_rule(lmax: usize, rule: Arc<QuadratureRule>, nlon: usize) -> Result<Self> {
        check_grid(lmax, rule.len(), nlon)?;
        Ok(Self::build(lmax, rule, nlon))
    }

    fn build(lmax: usize, rule: Arc<QuadratureRule>, nlon: usize) -> Self {
        let alp = alp_table(lmax + 1, rule.nodes());
        let mut planner = FftPlanner::new();
        let fft_fwd = planner.plan_fft_forward(nlon);
        let fft_inv = planner.plan_fft_inverse(nlon);
        Self { lmax, rule, nlon, alp, fft_fwd, fft_inv }
    }

    pub fn lmax(&self) -> usize {
        self.lmax
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

    pub fn alp(&self) -> &AlpTable {
        &self.alp
    }

    /// Wraps raw row-major values as a grid field on this transform's grid.
    pub fn grid_field(&self, values: Vec<f64>) -> GridField {
        GridField::new(self.rule.clone(), self.nlon, values)
    }

    /// Samples `f(z, λ)` on this transform's grid.
    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> GridField {
        GridField::from_fn(self.rule.clone(), self.nlon, f)
    }

    /// Pointwise values of `Σ â(l,m) Y(l,m)` together with the largest
    /// imaginary residue seen in the inverse FFT.
    ///
    /// Accepts fields up to degree `lmax + 1`.
    pub(crate) fn synthesize_values(&self, f: &SpectralField) -> (Vec<f64>, f64) {
        let fl = f.lmax();
        assert!(fl <= self.alp.lmax(), "field degree {fl} exceeds transform table {}", self.alp.lmax());
        // Degree may reach lmax + 1 (derivative fields) while the order stays
        // within what the longitude grid resolves.
        let mmax = fl.min((self.nlon - 1) / 2);
        debug_assert!((mmax + 1..=fl).all(|m| f.order(m).iter().all(|a| a.norm_sqr() == 0.0)));
        let nlat = self.nlat();
        let nlon = self.nlon;
        let mut values = vec![0.0; nlat * nlon];
        let mut buf = vec![Complex64::new(0.0, 0.0); nlon];
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.fft_inv.get_inplace_scratch_len()];
        let mut residue: f64 = 0.0;
        for k in 0..nlat {
            buf.iter_mut().for_each(|b| *b = Complex64::new(0.0, 0.0));
            for m in 0..=mmax {
                let coeffs = f.order(m);
                let p = &self.alp.column(m, k)[..coeffs.len()];
                let s: Complex64 = coeffs.iter().zip(p).map(|(a, &p)| a * p).sum();
                if m == 0 {
                    buf[0] = s;
                } else {
                    buf[m] = s;
                    buf[nlon - m] = s.conj();
                }
            }
            self.fft_inv.process_with_scratch(&mut buf, &mut scratch);
            let row = &mut values[k * nlon..(k + 1) * nlon];
            for (v, b) in row.iter_mut().zip(&buf) {
                *v = b.re;
                residue = residue.max(b.im.abs());
            }
        }
        (values, residue)
    }

    /// Quadrature projection of row-major grid values onto degrees `0..=lmax_out`.
    pub(crate) fn analyze_values(&self, values: &[f64], lmax_out: usize) -> SpectralField {
        assert!(lmax_out <= self.alp.lmax());
        let nlat = self.nlat();
        let nlon = self.nlon;
        assert_eq!(values.len(), nlat * nlon);
        let mut out = SpectralField::zeros(lmax_out);
        let mut buf = vec![Complex64::new(0.0, 0.0); nlon];
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.fft_fwd.get_inplace_scratch_len()];
        let dl = 2.0 * PI / nlon as f64;
        let mmax = lmax_out.min((nlon - 1) / 2);
        for k in 0..nlat {
            for (b, &v) in buf.iter_mut().zip(&values[k * nlon..(k + 1) * nlon]) {
                *b = Complex64::new(v, 0.0);
            }
            self.fft_fwd.process_with_scratch(&mut buf, &mut scratch);
            let wk = self.rule.weights()[k] * dl;
            for m in 0..=mmax {
                let g = buf[m] * wk;
                let p = self.alp.column(m, k);
                for (a, &p) in out.order_mut(m).iter_mut().zip(p) {
                    *a += g * p;
                }
            }
        }
        out.enforce_reality();
        out
    }

    /// Evaluates `f` on this transform's grid.
    pub fn synthesis(&self, f: &SpectralField) -> Result<GridField> {
        check_grid(f.lmax(), self.nlat(), self.nlon)?;
        let (values, residue) = self.synthesize_values(f);
        let scale = values.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
        let limit = REALITY_LIMIT * scale;
        if residue > limit || f.reality_defect() > limit {
            return Err(Error::RealityViolated { residue: residue.max(f.reality_defect()), limit });
        }
        Ok(self.grid_field(values))
    }

    /// Projects a field sampled on this transform's grid onto degrees `0..=lmax`.
    pub fn analysis(&self, g: &GridField) -> Result<SpectralField> {
        if g.nlat() != self.nlat() || g.nlon() != self.nlon {
            return Err(Error::InvalidParameter(format!(
                "grid {}x{} does not match transform grid {}x{}",
                g.nlat(),
                g.nlon(),
                self.nlat(),
                self.nlon
            )));
        }
        Ok(self.analyze_values(g.values(), self.lmax))
    }
}

/// Spherical-harmonic coefficients of `field` up to degree `lmax`.
///
/// Exact for band-limited input when the grid satisfies `nlat >= lmax + 1`
/// and `nlon >= 2 lmax + 1`.
pub fn analysis(field: &GridField, lmax: usize) -> Result<SpectralField> {
    let t = Transform::from_rule(lmax, field.rule().clone(), field.nlon())?;
    Ok(t.analyze_values(field.values(), lmax))
}

/// Evaluates `spec` on an `nlat × nlon` Gauss grid.
pub fn synthesis(spec: &SpectralField, nlat: usize, nlon: usize) -> Result<GridField> {
    Transform::with_grid(spec.lmax(), nlat, nlon)?.synthesis(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_field(lmax: usize, seed: u64) -> SpectralField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut f = SpectralField::from_fn(lmax, |_, m| {
            let re = rng.random_range(-1.0..1.0);
            let im = if m == 0 { 0.0 } else { rng.random_range(-1.0..1.0) };
            Complex64::new(re, im)
        });
        f.enforce_reality();
        f
    }

    fn max_rel_diff(a: &SpectralField, b: &SpectralField) -> f64 {
        let scale = a.coeffs().iter().fold(0.0f64, |acc, c| acc.max(c.norm()));
        a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
    }

    #[test]
    fn constant_field() {
        let t = Transform::new(8);
        let one = t.sample(|_, _| 1.0);
        let a = t.analysis(&one).unwrap();
        assert!((a.get(0, 0).re - (4.0 * PI).sqrt()).abs() < 1e-13);
        for (l, m, c) in a.iter() {
            if (l, m) != (0, 0) {
                assert!(c.norm() < 1e-13, "({l},{m}) = {c}");
            }
        }
        let mut spec = SpectralField::zeros(8);
        spec.set(0, 0, Complex64::new((4.0 * PI).sqrt(), 0.0));
        let g = t.synthesis(&spec).unwrap();
        assert!(g.values().iter().all(|v| (v - 1.0).abs() < 1e-13));
    }

    #[test]
    fn sampled_y20() {
        let t = Transform::new(6);
        let g = t.sample(|z, _| (5.0 / (16.0 * PI)).sqrt() * (3.0 * z * z - 1.0));
        let a = t.analysis(&g).unwrap();
        assert!((a.get(2, 0).re - 1.0).abs() < 1e-12);
        for (l, m, c) in a.iter() {
            if (l, m) != (2, 0) {
                assert!(c.norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn y10_synthesis() {
        let mut spec = SpectralField::zeros(4);
        spec.set(1, 0, Complex64::new(1.0, 0.0));
        let g = synthesis(&spec, 5, 10).unwrap();
        for k in 0..g.nlat() {
            let z = g.rule().nodes()[k];
            for j in 0..g.nlon() {
                assert!((g.at(k, j) - (3.0 / (4.0 * PI)).sqrt() * z).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn complex_mode_matches_closed_form() {
        // â(3,2) = 1 represents 2 Re Y_3^2 = 2 · ¼√(105/2π) z(1-z²) cos 2λ
        let mut spec = SpectralField::zeros(5);
        spec.set(3, 2, Complex64::new(1.0, 0.0));
        let t = Transform::new(5);
        let g = t.synthesis(&spec).unwrap();
        let c = 0.5 * (105.0 / (2.0 * PI)).sqrt();
        for k in 0..g.nlat() {
            let z = g.rule().nodes()[k];
            for j in 0..g.nlon() {
                let want = c * z * (1.0 - z * z) * (2.0 * g.longitude(j)).cos();
                assert!((g.at(k, j) - want).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn round_trip_random() {
        for (lmax, seed) in [(0, 1), (1, 2), (7, 3), (20, 4), (40, 5)] {
            let f = random_field(lmax, seed);
            let t = Transform::new(lmax);
            let back = t.analysis(&t.synthesis(&f).unwrap()).unwrap();
            assert!(max_rel_diff(&f, &back) < 1e-12);
            // dealiased grid is also an exact analysis grid
            let t = Transform::dealiased(lmax);
            let back = t.analysis(&t.synthesis(&f).unwrap()).unwrap();
            assert!(max_rel_diff(&f, &back) < 1e-12);
        }
    }

    #[test]
    fn parseval() {
        let f = random_field(24, 9);
        let t = Transform::new(24);
        let g = t.synthesis(&f).unwrap();
        let quad = g.map(|v| v * v).integrate();
        assert!((quad - f.norm_sq()).abs() < 1e-11 * f.norm_sq());
    }

    #[test]
    fn analysis_is_linear() {
        let t = Transform::new(12);
        let f = t.synthesis(&random_field(12, 1)).unwrap();
        let g = t.synthesis(&random_field(12, 2)).unwrap();
        let (alpha, beta) = (0.7, -2.3);
        let combo = f.zip_with(&g, |a, b| alpha * a + beta * b);
        let lhs = t.analysis(&combo).unwrap();
        let rhs = &(&t.analysis(&f).unwrap() * alpha) + &(&t.analysis(&g).unwrap() * beta);
        assert!(max_rel_diff(&lhs, &rhs) < 1e-14);
    }

    #[test]
    fn grid_too_small() {
        let t = Transform::new(4);
        let g = t.sample(|z, _| z);
        assert!(matches!(analysis(&g, 5), Err(Error::GridTooSmall { .. })));
        assert!(matches!(synthesis(&SpectralField::zeros(6), 6, 12), Err(Error::GridTooSmall { .. })));
        assert!(Transform::with_grid(4, 5, 8).is_err());
    }

    #[test]
    fn imaginary_zonal_coefficient_is_rejected() {
        let mut spec = SpectralField::zeros(3);
        spec.set(2, 0, Complex64::new(0.0, 1.0));
        assert!(matches!(Transform::new(3).synthesis(&spec), Err(Error::RealityViolated { .. })));
    }

    #[test]
    fn reality_residue_is_tiny() {
        let f = random_field(30, 11);
        let (_, residue) = Transform::new(30).synthesize_values(&f);
        assert!(residue <= 1e-13, "{residue}");
    }
}
