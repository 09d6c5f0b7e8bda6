//! The elliptic operator `γz² − Δ` in spectral space.
//!
//! Multiplication by `z²` couples `l` to `l ± 2` within a fixed order `m`, so
//! for every `m` the operator is a symmetric pentadiagonal matrix over
//! `l = m..=lmax`. The `z²` bands are the Galerkin projection: two exact `z`
//! couplings composed over the extended range `m..=lmax+1`, then truncated.

use num_complex::Complex64;

use crate::spectral::{z_coupling, SpectralField};
use crate::{Error, Result};

/// Mean-zero tolerance for the `γ = 0` solve, relative to `max(1, ‖r‖)`.
const MEAN_ZERO_TOL: f64 = 1e-12;

/// Symmetric matrix with bandwidth 2 acting on the degrees `lmin..=lmax` of one order `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedOperator {
    m: usize,
    lmin: usize,
    lmax: usize,
    /// `M(l, l)`
    diag: Vec<f64>,
    /// `M(l, l+1)`
    band1: Vec<f64>,
    /// `M(l, l+2)`
    band2: Vec<f64>,
}

/// Galerkin entries of multiplication by `z²` at `(l, l)` and `(l, l+2)`.
fn z2_bands(l: usize, m: usize) -> (f64, f64) {
    let below = if l > m { z_coupling(l - 1, m) } else { 0.0 };
    let here = z_coupling(l, m);
    (below * below + here * here, here * z_coupling(l + 1, m))
}

impl BandedOperator {
    /// Matrix of `γz² − Δ` for order `m`.
    ///
    /// With `γ = 0` the `m = 0` block starts at `l = 1`: the constant mode is
    /// the operator's null space and is excluded.
    pub fn helmholtz(m: usize, lmax: usize, gamma: f64) -> Self {
        assert!(m <= lmax);
        let lmin = if m == 0 && gamma == 0.0 { 1 } else { m };
        let n = (lmax + 1).saturating_sub(lmin);
        let mut diag = Vec::with_capacity(n);
        let mut band1 = Vec::with_capacity(n);
        let mut band2 = Vec::with_capacity(n);
        for l in lmin..=lmax {
            let (d, b2) = z2_bands(l, m);
            diag.push(gamma * d + (l * (l + 1)) as f64);
            band1.push(0.0);
            band2.push(if l + 2 <= lmax { gamma * b2 } else { 0.0 });
        }
        Self { m, lmin, lmax, diag, band1, band2 }
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn lmin(&self) -> usize {
        self.lmin
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Entry `M(l, l')`; zero outside the band.
    pub fn get(&self, l: usize, lp: usize) -> f64 {
        if l < self.lmin || lp < self.lmin || l > self.lmax || lp > self.lmax {
            return 0.0;
        }
        let (i, j) = (l.min(lp) - self.lmin, l.max(lp) - self.lmin);
        match j - i {
            0 => self.diag[i],
            1 => self.band1[i],
            2 => self.band2[i],
            _ => 0.0,
        }
    }

    /// `M x` for `x` indexed from `lmin`.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.len();
        assert_eq!(x.len(), n);
        let mut y: Vec<Complex64> = x.iter().zip(&self.diag).map(|(v, d)| v * d).collect();
        for i in 0..n {
            if i + 1 < n {
                y[i] += x[i + 1] * self.band1[i];
                y[i + 1] += x[i] * self.band1[i];
            }
            if i + 2 < n {
                y[i] += x[i + 2] * self.band2[i];
                y[i + 2] += x[i] * self.band2[i];
            }
        }
        y
    }

    /// Banded `LDLᵀ` factorisation; fails unless the matrix is positive definite.
    pub fn factor(&self) -> Result<BandedFactor> {
        let n = self.len();
        let mut d = vec![0.0; n];
        // sub1[i] = L(i, i-1), sub2[i] = L(i, i-2)
        let mut sub1 = vec![0.0; n];
        let mut sub2 = vec![0.0; n];
        for i in 0..n {
            if i >= 2 {
                sub2[i] = self.band2[i - 2] / d[i - 2];
            }
            if i >= 1 {
                let mut a = self.band1[i - 1];
                if i >= 2 {
                    a -= sub2[i] * d[i - 2] * sub1[i - 1];
                }
                sub1[i] = a / d[i - 1];
            }
            let mut di = self.diag[i];
            if i >= 1 {
                di -= sub1[i] * sub1[i] * d[i - 1];
            }
            if i >= 2 {
                di -= sub2[i] * sub2[i] * d[i - 2];
            }
            if di.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
                return Err(Error::SingularOperator(format!(
                    "pivot {di:e} at l = {} (m = {}) is not positive",
                    self.lmin + i,
                    self.m
                )));
            }
            d[i] = di;
        }
        Ok(BandedFactor { d, sub1, sub2 })
    }
}

/// `LDLᵀ` factors of a [`BandedOperator`].
#[derive(Debug, Clone)]
pub struct BandedFactor {
    d: Vec<f64>,
    sub1: Vec<f64>,
    sub2: Vec<f64>,
}

impl BandedFactor {
    /// Solves in place.
    pub fn solve(&self, x: &mut [Complex64]) {
        let n = self.d.len();
        assert_eq!(x.len(), n);
        for i in 0..n {
            if i >= 1 {
                let prev = x[i - 1];
                x[i] -= prev * self.sub1[i];
            }
            if i >= 2 {
                let prev = x[i - 2];
                x[i] -= prev * self.sub2[i];
            }
        }
        for (v, d) in x.iter_mut().zip(&self.d) {
            *v /= d;
        }
        for i in (0..n).rev() {
            if i + 1 < n {
                let next = x[i + 1];
                x[i] -= next * self.sub1[i + 1];
            }
            if i + 2 < n {
                let next = x[i + 2];
                x[i] -= next * self.sub2[i + 2];
            }
        }
    }
}

/// Factored `γz² − Δ` for a fixed `(γ, lmax)`; one block per order `m`.
#[derive(Debug, Clone)]
pub struct HelmholtzSolver {
    gamma: f64,
    lmax: usize,
    blocks: Vec<(BandedOperator, BandedFactor)>,
}

impl HelmholtzSolver {
    pub fn new(lmax: usize, gamma: f64) -> Result<Self> {
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!("gamma must be finite and >= 0, got {gamma}")));
        }
        let blocks = (0..=lmax)
            .map(|m| {
                let op = BandedOperator::helmholtz(m, lmax, gamma);
                let fac = op.factor()?;
                Ok((op, fac))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { gamma, lmax, blocks })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    pub fn block(&self, m: usize) -> &BandedOperator {
        &self.blocks[m].0
    }

    /// `(γz² − Δ) f`, truncated at `lmax`.
    pub fn apply(&self, f: &SpectralField) -> SpectralField {
        assert_eq!(f.lmax(), self.lmax);
        let mut out = SpectralField::zeros(self.lmax);
        for (m, (op, _)) in self.blocks.iter().enumerate() {
            let skip = op.lmin() - m;
            let y = op.apply(&f.order(m)[skip..]);
            out.order_mut(m)[skip..].copy_from_slice(&y);
        }
        out
    }

    /// `ψ` with `(γz² − Δ)ψ = r`.
    ///
    /// For `γ = 0` the right-hand side must have zero mean and the returned
    /// stream function has zero mean.
    pub fn solve(&self, r: &SpectralField) -> Result<SpectralField> {
        assert_eq!(r.lmax(), self.lmax);
        if self.gamma == 0.0 {
            let mean = r.get(0, 0).norm();
            if mean > MEAN_ZERO_TOL * r.norm_sq().sqrt().max(1.0) {
                return Err(Error::SingularOperator(format!(
                    "gamma = 0 requires a mean-zero right-hand side, got l=0 coefficient {mean:e}"
                )));
            }
        }
        let mut out = SpectralField::zeros(self.lmax);
        for (m, (op, fac)) in self.blocks.iter().enumerate() {
            let skip = op.lmin() - m;
            let mut x = r.order(m)[skip..].to_vec();
            fac.solve(&mut x);
            out.order_mut(m)[skip..].copy_from_slice(&x);
        }
        out.enforce_reality();
        Ok(out)
    }
}

/// Solves `(γz² − Δ)ψ = r` at the truncation of `r`.
pub fn helmholtz_solve(r: &SpectralField, gamma: f64) -> Result<SpectralField> {
    HelmholtzSolver::new(r.lmax(), gamma)?.solve(r)
}

/// Forward application of `γz² − Δ` with the same banded matrices the solver uses.
pub fn helmholtz_apply(f: &SpectralField, gamma: f64) -> Result<SpectralField> {
    Ok(HelmholtzSolver::new(f.lmax(), gamma)?.apply(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{laplacian, mul_z};

    fn mode(lmax: usize, l: usize, m: usize, v: f64) -> SpectralField {
        let mut f = SpectralField::zeros(lmax);
        f.set(l, m, Complex64::new(v, 0.0));
        f
    }

    #[test]
    fn bands_match_two_z_multiplications() {
        let lmax = 10;
        let gamma = 3.5;
        let solver = HelmholtzSolver::new(lmax, gamma).unwrap();
        for m in 0..=lmax {
            for l in m..=lmax {
                let e = mode(lmax, l, m, 1.0);
                let z2 = mul_z(&mul_z(&e)).resized(lmax);
                let lap = laplacian(&e);
                let want = &(&z2 * gamma) - &lap;
                let got = solver.apply(&e);
                for (a, b) in want.coeffs().iter().zip(got.coeffs()) {
                    assert!((a - b).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn operator_is_symmetric() {
        let op = BandedOperator::helmholtz(2, 12, 17.6);
        for l in 2..=12 {
            for lp in 2..=12 {
                assert_eq!(op.get(l, lp), op.get(lp, l));
                if l.abs_diff(lp) > 2 {
                    assert_eq!(op.get(l, lp), 0.0);
                }
            }
        }
    }

    #[test]
    fn gamma_zero_inverts_eigenvalue() {
        let r = mode(6, 2, 0, 1.0);
        let psi = helmholtz_solve(&r, 0.0).unwrap();
        assert!((psi.get(2, 0).re - 1.0 / 6.0).abs() < 1e-15);
        assert!(psi.get(0, 0).norm() == 0.0);
    }

    #[test]
    fn gamma_zero_rejects_mean() {
        let r = mode(6, 0, 0, 1.0);
        assert!(matches!(helmholtz_solve(&r, 0.0), Err(Error::SingularOperator(_))));
    }

    #[test]
    fn negative_gamma_is_rejected() {
        assert!(HelmholtzSolver::new(4, -1.0).is_err());
        assert!(HelmholtzSolver::new(4, f64::NAN).is_err());
    }

    #[test]
    fn manufactured_solution() {
        let lmax = 16;
        let gamma = 17.6;
        let mut psi = SpectralField::zeros(lmax);
        psi.set(3, 2, Complex64::new(1.0, 0.0));
        psi.set(1, 0, Complex64::new(0.5, 0.0));
        let r = helmholtz_apply(&psi, gamma).unwrap();
        let back = helmholtz_solve(&r, gamma).unwrap();
        for (a, b) in psi.coeffs().iter().zip(back.coeffs()) {
            assert!((a - b).norm() < 1e-11);
        }
    }

    #[test]
    fn constant_right_hand_side_residual() {
        let lmax = 24;
        let r = mode(lmax, 0, 0, (4.0 * std::f64::consts::PI).sqrt());
        let solver = HelmholtzSolver::new(lmax, 1.0).unwrap();
        let psi = solver.solve(&r).unwrap();
        let resid = &solver.apply(&psi) - &r;
        assert!(resid.norm_sq().sqrt() <= 1e-10 * r.norm_sq().sqrt());
    }
}
