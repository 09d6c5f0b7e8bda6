use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{Model, SimState};
use crate::spectral::SpectralField;

/// Stream function of the trade-wind current, `T(z) = ½√(15/8π) z²`.
///
/// Exact two-coefficient expansion: `z² = √(4π)/3 · Y(0,0) + (4/3)√(π/5) · Y(2,0)`.
pub fn trade_wind_stream(lmax: usize) -> SpectralField {
    assert!(lmax >= 2);
    let c = 0.5 * (15.0 / (8.0 * PI)).sqrt();
    let mut t = SpectralField::zeros(lmax);
    t.set(0, 0, Complex64::new(c * (4.0 * PI).sqrt() / 3.0, 0.0));
    t.set(2, 0, Complex64::new(c * 4.0 / 3.0 * (PI / 5.0).sqrt(), 0.0));
    t
}

/// Named initial conditions. Presets describe the stream function; the state
/// is its potential vorticity under the model's parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    TradeWind,
    /// `ψ = amplitude · (√2 Re Y(l,m))`, or `amplitude · Y(l,0)` for `m = 0`.
    RossbyHaurwitz { l: usize, m: usize, amplitude: f64 },
    /// Gaussian coefficients with `|â(l,·)| ∝ l^(-slope)` for `l >= 1`,
    /// rescaled so that `‖ψ‖_{L²} = amplitude`.
    Random { seed: u64, slope: f64, amplitude: f64 },
    /// Potential vorticity coefficients given directly.
    Pv(SpectralField),
}

impl InitialCondition {
    /// Stream function for the presets; `None` for [`InitialCondition::Pv`].
    pub fn stream(&self, lmax: usize) -> Option<SpectralField> {
        match *self {
            Self::TradeWind => Some(trade_wind_stream(lmax)),
            Self::RossbyHaurwitz { l, m, amplitude } => {
                let mut psi = SpectralField::real_harmonic(lmax, l, m);
                psi.scale(amplitude);
                Some(psi)
            }
            Self::Random { seed, slope, amplitude } => Some(random_stream(lmax, seed, slope, amplitude)),
            Self::Pv(_) => None,
        }
    }

    pub fn build(&self, model: &Model) -> SimState {
        let q = match self {
            Self::Pv(q) => q.resized(model.lmax()),
            _ => model.pv_from_stream(&self.stream(model.lmax()).expect("preset has a stream function")),
        };
        SimState { q, t: 0.0 }
    }
}

fn random_stream(lmax: usize, seed: u64, slope: f64, amplitude: f64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut normal = move || -> f64 { StandardNormal.sample(&mut rng) };
    let mut psi = SpectralField::from_fn(lmax, |l, m| {
        if l == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let s = (l as f64).powf(-slope);
        let re = normal();
        let im = if m == 0 { 0.0 } else { normal() };
        Complex64::new(re, im) * s
    });
    let norm = psi.norm_sq().sqrt();
    if norm > 0.0 {
        psi.scale(amplitude / norm);
    }
    psi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Transform;

    #[test]
    fn trade_wind_closed_form() {
        let t = Transform::new(6);
        let g = t.synthesis(&trade_wind_stream(6)).unwrap();
        let c = 0.5 * (15.0 / (8.0 * PI)).sqrt();
        for k in 0..g.nlat() {
            let z = g.rule().nodes()[k];
            for j in 0..g.nlon() {
                assert!((g.at(k, j) - c * z * z).abs() < 1e-13);
            }
        }
        let lap = t.synthesis(&crate::operators::laplacian(&trade_wind_stream(6))).unwrap();
        for k in 0..lap.nlat() {
            let z = lap.rule().nodes()[k];
            assert!((lap.at(k, 0) - (15.0 / (8.0 * PI)).sqrt() * (1.0 - 3.0 * z * z)).abs() < 1e-13);
        }
    }

    #[test]
    fn random_is_deterministic_and_normalised() {
        let a = random_stream(16, 7, 2.0, 3.0);
        let b = random_stream(16, 7, 2.0, 3.0);
        assert_eq!(a, b);
        assert!((a.norm_sq().sqrt() - 3.0).abs() < 1e-12);
        assert_eq!(a.get(0, 0), Complex64::new(0.0, 0.0));
        assert_ne!(a, random_stream(16, 8, 2.0, 3.0));
        assert!(a.reality_defect() == 0.0);
    }
}
