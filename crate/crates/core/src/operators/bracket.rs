//! Pointwise products and Poisson brackets on a 3/2-padded grid.

use super::{d_dlambda, sin_derivative};
use crate::spectral::{SpectralField, Transform};

/// Collocation grid for quadratic products of degree-`lmax` fields.
///
/// Products of two such fields have degree `2 lmax`; the padded grid integrates
/// their projection onto degrees `<= lmax` exactly, so analysis back to `lmax`
/// carries no aliasing. Cubic integrands (`∫q³`) are also integrated exactly.
#[derive(Debug, Clone)]
pub struct ProductGrid {
    transform: Transform,
}

/// Grid values of `(1 - z²) ∂f/∂z` and `∂f/∂λ`.
#[derive(Debug, Clone)]
pub struct Gradient {
    pub sin_dz: Vec<f64>,
    pub dlambda: Vec<f64>,
}

impl ProductGrid {
    pub fn new(lmax: usize) -> Self {
        Self { transform: Transform::dealiased(lmax) }
    }

    pub fn lmax(&self) -> usize {
        self.transform.lmax()
    }

    pub fn transform(&self) -> &Transform {
        &self.transform
    }

    fn lift(&self, f: &SpectralField) -> SpectralField {
        assert!(f.lmax() <= self.lmax(), "field degree {} exceeds product grid lmax {}", f.lmax(), self.lmax());
        if f.lmax() == self.lmax() {
            f.clone()
        } else {
            f.resized(self.lmax())
        }
    }

    /// Grid values of `f`.
    pub fn values(&self, f: &SpectralField) -> Vec<f64> {
        self.transform.synthesize_values(f).0
    }

    pub fn gradient(&self, f: &SpectralField) -> Gradient {
        let f = self.lift(f);
        Gradient {
            sin_dz: self.transform.synthesize_values(&sin_derivative(&f)).0,
            dlambda: self.transform.synthesize_values(&d_dlambda(&f)).0,
        }
    }

    /// `{f, g} = ∂f/∂z ∂g/∂λ − ∂f/∂λ ∂g/∂z` at every grid point.
    pub fn bracket_values(&self, f: &SpectralField, g: &SpectralField) -> Vec<f64> {
        self.bracket_of_gradients(&self.gradient(f), &self.gradient(g))
    }

    pub fn bracket_of_gradients(&self, f: &Gradient, g: &Gradient) -> Vec<f64> {
        let nlon = self.transform.nlon();
        let mut out = vec![0.0; f.sin_dz.len()];
        for (k, &z) in self.transform.rule().nodes().iter().enumerate() {
            let inv = 1.0 / (1.0 - z * z);
            for j in k * nlon..(k + 1) * nlon {
                out[j] = (f.sin_dz[j] * g.dlambda[j] - f.dlambda[j] * g.sin_dz[j]) * inv;
            }
        }
        out
    }

    /// Projection of grid values onto degrees `0..=lmax`.
    pub fn analyze(&self, values: &[f64]) -> SpectralField {
        self.transform.analyze_values(values, self.lmax())
    }

    /// Dealiased Poisson bracket, truncated at `lmax`.
    pub fn bracket(&self, f: &SpectralField, g: &SpectralField) -> SpectralField {
        self.analyze(&self.bracket_values(f, g))
    }

    /// Dealiased pointwise product, truncated at `lmax`.
    pub fn product(&self, f: &SpectralField, g: &SpectralField) -> SpectralField {
        let a = self.values(f);
        let b = self.values(g);
        let prod: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        self.analyze(&prod)
    }

    /// Grid quadrature of row-major values.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        let nlon = self.transform.nlon();
        let dl = 2.0 * std::f64::consts::PI / nlon as f64;
        self.transform
            .rule()
            .weights()
            .iter()
            .enumerate()
            .map(|(k, w)| w * values[k * nlon..(k + 1) * nlon].iter().sum::<f64>())
            .sum::<f64>()
            * dl
    }

    /// `max |∇f|` over the grid, with `|∇f|² = (1-z²) f_z² + f_λ² / (1-z²)`.
    pub fn max_gradient(&self, f: &SpectralField) -> f64 {
        let grad = self.gradient(f);
        let nlon = self.transform.nlon();
        let mut best: f64 = 0.0;
        for (k, &z) in self.transform.rule().nodes().iter().enumerate() {
            let s2 = 1.0 - z * z;
            for j in k * nlon..(k + 1) * nlon {
                let g2 = (grad.sin_dz[j] * grad.sin_dz[j] + grad.dlambda[j] * grad.dlambda[j]) / s2;
                best = best.max(g2);
            }
        }
        best.sqrt()
    }
}

/// Dealiased Poisson bracket at the larger of the two input truncations.
pub fn poisson_bracket(f: &SpectralField, g: &SpectralField) -> SpectralField {
    let lmax = f.lmax().max(g.lmax());
    ProductGrid::new(lmax).bracket(f, g)
}

/// Dealiased product at the larger of the two input truncations.
pub fn product(f: &SpectralField, g: &SpectralField) -> SpectralField {
    let lmax = f.lmax().max(g.lmax());
    ProductGrid::new(lmax).product(f, g)
}
