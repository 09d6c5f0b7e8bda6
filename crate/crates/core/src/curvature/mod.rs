//! Misiołek curvature along stationary flows.
//!
//! For stream functions `f, g` (velocities `∇⊥f`, `∇⊥g`):
//!
//! ```text
//! MC_ν(f, g) = ⟨Δ{f,g}, {f,g}⟩ − ⟨{Δf, g}, {f,g}⟩
//! MCᴬ(f, g)  = γ ⟨f{z²,g}, {f,g}⟩ + MC_ν(f, g)
//! M̂Cᴬ       = MCᴬ − ⟨{φ,f}, g⟩² − a ⟨{φ,{f,g}}, g⟩
//! ```
//!
//! All pairings are `L²(dν)` on the unit sphere. Brackets of degree-`L`
//! inputs have degree up to `2L − 1`, so every evaluation runs at a working
//! truncation of `2L + 2` on the matching dealiased grid; nothing that
//! contributes to a pairing is truncated.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dynamics::trade_wind_stream;
use crate::operators::{l2_inner, laplacian, z_power, ProductGrid};
use crate::spectral::SpectralField;
use crate::{Error, Result};

/// Relative size of `∫ z²{z²,g}² dν` (against `‖g‖²`) below which `g` is
/// treated as a zonal direction.
const ZONAL_TOL: f64 = 1e-14;

/// Element `(∇⊥f, a)` of the centrally extended algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedVector {
    pub f: SpectralField,
    /// Central charge.
    pub a: f64,
}

impl ExtendedVector {
    pub fn new(f: SpectralField, a: f64) -> Self {
        Self { f, a }
    }
}

/// Decomposition of the extended Misiołek criterion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McReport {
    pub mc_nu: f64,
    /// Coefficient of `γ` in `MCᴬ`: `⟨f{z²,g}, {f,g}⟩`.
    pub gamma_term: f64,
    pub mc_a: f64,
    /// `⟨{φ,f}, g⟩²`
    pub cocycle_sq: f64,
    /// `⟨{φ,{f,g}}, g⟩`
    pub extension_term: f64,
    pub mc_hat: f64,
    /// Smallest `γ` beyond which `MCᴬ > 0`; `Some(0.0)` if already positive at
    /// `γ = 0`, `None` if increasing `γ` cannot make it positive.
    pub gamma_threshold: Option<f64>,
}

/// Threshold in `γ` for given `MC_ν` and `γ`-coefficient.
fn threshold_from(mc_nu: f64, gamma_term: f64, scale: f64) -> Option<f64> {
    if !(gamma_term > ZONAL_TOL * scale) {
        return None;
    }
    Some(if mc_nu < 0.0 { -mc_nu / gamma_term } else { 0.0 })
}

/// Evaluator for all curvature pairings of fields up to degree `lmax`.
#[derive(Debug, Clone)]
pub struct Curvature {
    lmax: usize,
    grid: ProductGrid,
    z2: SpectralField,
}

impl Curvature {
    pub fn new(lmax: usize) -> Self {
        let lmax = lmax.max(2);
        let work = 2 * lmax + 2;
        Self { lmax, grid: ProductGrid::new(work), z2: z_power(work, 2) }
    }

    /// Evaluator sized for every field in `fields`.
    pub fn for_fields(fields: &[&SpectralField]) -> Self {
        Self::new(fields.iter().map(|f| f.lmax()).max().unwrap_or(2))
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    pub fn work_lmax(&self) -> usize {
        self.grid.lmax()
    }

    fn lift(&self, f: &SpectralField) -> SpectralField {
        assert!(f.lmax() <= self.lmax, "field degree {} exceeds evaluator lmax {}", f.lmax(), self.lmax);
        f.resized(self.work_lmax())
    }

    fn bracket(&self, f: &SpectralField, g: &SpectralField) -> SpectralField {
        self.grid.bracket(f, g)
    }

    /// `MC_ν(f, g)`.
    pub fn mc_nu(&self, f: &SpectralField, g: &SpectralField) -> f64 {
        let (f, g) = (self.lift(f), self.lift(g));
        let fg = self.bracket(&f, &g);
        let lap_f_g = self.bracket(&laplacian(&f), &g);
        l2_inner(&laplacian(&fg), &fg) - l2_inner(&lap_f_g, &fg)
    }

    /// `⟨f{z²,g}, {f,g}⟩`.
    pub fn gamma_term(&self, f: &SpectralField, g: &SpectralField) -> f64 {
        let (f, g) = (self.lift(f), self.lift(g));
        let z2g = self.bracket(&self.z2, &g);
        let weighted = self.grid.product(&f, &z2g);
        l2_inner(&weighted, &self.bracket(&f, &g))
    }

    /// `MCᴬ(f, g) = γ ⟨f{z²,g}, {f,g}⟩ + MC_ν(f, g)`.
    pub fn mc_a(&self, f: &SpectralField, g: &SpectralField, gamma: f64) -> f64 {
        gamma * self.gamma_term(f, g) + self.mc_nu(f, g)
    }

    /// Cocycle `Ω(f, g) = ∫ φ{f,g} dν`.
    pub fn cocycle(&self, f: &SpectralField, g: &SpectralField, phi: &SpectralField) -> f64 {
        let (f, g, phi) = (self.lift(f), self.lift(g), self.lift(phi));
        l2_inner(&phi, &self.bracket(&f, &g))
    }

    /// `⟨{φ,f}, g⟩`, the same cocycle evaluated through the other bracket.
    pub fn cocycle_pairing(&self, f: &SpectralField, g: &SpectralField, phi: &SpectralField) -> f64 {
        let (f, g, phi) = (self.lift(f), self.lift(g), self.lift(phi));
        l2_inner(&self.bracket(&phi, &f), &g)
    }

    /// `⟨{φ,{f,g}}, g⟩`.
    pub fn extension_term(&self, f: &SpectralField, g: &SpectralField, phi: &SpectralField) -> f64 {
        let (f, g, phi) = (self.lift(f), self.lift(g), self.lift(phi));
        let fg = self.bracket(&f, &g);
        l2_inner(&self.bracket(&phi, &fg), &g)
    }

    /// `∫ z² {z², g}² dν`, the trade-wind denominator of the threshold.
    pub fn zonal_shear_norm(&self, g: &SpectralField) -> f64 {
        let g = self.lift(g);
        let b = self.grid.bracket_values(&self.z2, &g);
        let nlon = self.grid.transform().nlon();
        let nodes = self.grid.transform().rule().nodes();
        let dens: Vec<f64> = b
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let z = nodes[i / nlon];
                z * z * v * v
            })
            .collect();
        self.grid.integrate(&dens)
    }

    /// Full report for `U = (f, a)`, `V = (g, b)`. `b` does not enter the criterion.
    pub fn mc_hat(&self, u: &ExtendedVector, v: &ExtendedVector, phi: &SpectralField, gamma: f64) -> McReport {
        let (f, g) = (&u.f, &v.f);
        let mc_nu = self.mc_nu(f, g);
        let gamma_term = self.gamma_term(f, g);
        let mc_a = gamma * gamma_term + mc_nu;
        let d = self.cocycle_pairing(f, g, phi);
        let cocycle_sq = d * d;
        let extension_term = self.extension_term(f, g, phi);
        let mc_hat = mc_a - cocycle_sq - u.a * extension_term;
        let scale = scale_of(f, g);
        McReport {
            mc_nu,
            gamma_term,
            mc_a,
            cocycle_sq,
            extension_term,
            mc_hat,
            gamma_threshold: threshold_from(mc_nu, gamma_term, scale),
        }
    }

    /// Lamb parameter beyond which conjugate points appear along the trade-wind
    /// current in direction `∇⊥g`: `-MC_ν(T, g) / ⟨T{z²,g}, {T,g}⟩`, or 0
    /// when `MC_ν(T, g) >= 0`.
    pub fn gamma_threshold(&self, g: &SpectralField) -> Result<f64> {
        let t = trade_wind_stream(self.lmax);
        let gamma_term = self.gamma_term(&t, g);
        let mc_nu = self.mc_nu(&t, g);
        threshold_from(mc_nu, gamma_term, scale_of(&t, g)).ok_or(Error::ZonalDirection)
    }
}

/// `‖f‖² ‖g‖²`, the natural size of the quartic pairings.
fn scale_of(f: &SpectralField, g: &SpectralField) -> f64 {
    f.norm_sq() * g.norm_sq()
}

pub fn mc_nu(f: &SpectralField, g: &SpectralField) -> f64 {
    Curvature::for_fields(&[f, g]).mc_nu(f, g)
}

pub fn mc_a(f: &SpectralField, g: &SpectralField, gamma: f64) -> f64 {
    Curvature::for_fields(&[f, g]).mc_a(f, g, gamma)
}

pub fn cocycle(f: &SpectralField, g: &SpectralField, phi: &SpectralField) -> f64 {
    Curvature::for_fields(&[f, g, phi]).cocycle(f, g, phi)
}

pub fn mc_hat(u: &ExtendedVector, v: &ExtendedVector, phi: &SpectralField, gamma: f64) -> McReport {
    Curvature::for_fields(&[&u.f, &v.f, phi]).mc_hat(u, v, phi, gamma)
}

pub fn gamma_threshold(g: &SpectralField) -> Result<f64> {
    Curvature::for_fields(&[g]).gamma_threshold(g)
}

pub fn trade_wind(lmax: usize) -> SpectralField {
    trade_wind_stream(lmax)
}

/// `g(z, λ) = P₃²(z) cos 2λ = 15 z (1 − z²) cos 2λ`, exactly.
pub fn example_direction(lmax: usize) -> SpectralField {
    assert!(lmax >= 3);
    let mut g = SpectralField::zeros(lmax);
    // 2 Re(â Y(3,2)) with Y(3,2) = ¼√(105/2π) z(1-z²) e^{2iλ}
    g.set(3, 2, Complex64::new(30.0 * (2.0 * PI / 105.0).sqrt(), 0.0));
    g
}

/// The worked trade-wind example, in units of `60²π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExampleValues {
    /// `−MC_ν(z², g) / (60²π)`; exactly `128/315`.
    pub curvature_integral: f64,
    /// `∫ z²{z²,g}² dν / (60²π)`; exactly `16/693`.
    pub shear_integral: f64,
    /// `γ*` from the trade-wind threshold; exactly `17.6`.
    pub threshold: f64,
}

pub fn example_values(lmax: usize) -> Result<ExampleValues> {
    let lmax = lmax.max(3);
    let c = Curvature::new(lmax);
    let g = example_direction(lmax);
    let z2 = z_power(lmax, 2);
    let unit = 3600.0 * PI;
    Ok(ExampleValues {
        curvature_integral: -c.mc_nu(&z2, &g) / unit,
        shear_integral: c.zonal_shear_norm(&g) / unit,
        threshold: c.gamma_threshold(&g)?,
    })
}

/// One direction `g = √2 Re Y(l,m)` (or `Y(l,0)`) of a threshold scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub l: usize,
    pub m: usize,
    pub mc_nu: f64,
    pub gamma_term: f64,
    /// `None` for zonal (degenerate) directions.
    pub gamma_threshold: Option<f64>,
}

/// Trade-wind thresholds over all real harmonic directions with `1 <= l <= lmax`.
pub fn threshold_scan(lmax: usize) -> Vec<ScanRow> {
    let c = Curvature::new(lmax.max(2));
    let t = trade_wind_stream(c.lmax());
    let dirs: Vec<(usize, usize)> = (1..=lmax).flat_map(|l| (0..=l).map(move |m| (l, m))).collect();
    dirs.par_iter()
        .map(|&(l, m)| {
            let g = SpectralField::real_harmonic(c.lmax(), l, m);
            let mc_nu = c.mc_nu(&t, &g);
            let gamma_term = c.gamma_term(&t, &g);
            let gamma_threshold = if m == 0 { None } else { threshold_from(mc_nu, gamma_term, scale_of(&t, &g)) };
            ScanRow { l, m, mc_nu, gamma_term, gamma_threshold }
        })
        .collect()
}

#[cfg(test)]
mod tests;
