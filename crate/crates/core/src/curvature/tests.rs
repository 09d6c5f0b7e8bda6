use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::dynamics::coriolis_potential;
use crate::spectral::{alp, gauss_legendre, Transform};

fn random_field(lmax: usize, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SpectralField::from_fn(lmax, |_, m| {
        let re = rng.random_range(-1.0..1.0);
        let im = if m == 0 { 0.0 } else { rng.random_range(-1.0..1.0) };
        Complex64::new(re, im)
    })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

const C_T: f64 = 0.5 * 0.772_548_404_046_379_2; // ½√(15/8π)

#[test]
fn trade_wind_constant() {
    assert!(rel(C_T, 0.5 * (15.0 / (8.0 * PI)).sqrt()) < 1e-15);
}

#[test]
fn example_direction_closed_form() {
    let g = example_direction(5);
    let t = Transform::new(5);
    let grid = t.synthesis(&g).unwrap();
    for k in 0..grid.nlat() {
        let z = grid.rule().nodes()[k];
        for j in 0..grid.nlon() {
            let lam = grid.longitude(j);
            let want = 15.0 * z * (1.0 - z * z) * (2.0 * lam).cos();
            assert!((grid.at(k, j) - want).abs() < 1e-12);
        }
    }
}

#[test]
fn worked_example_values() {
    for lmax in [3, 4, 8] {
        let v = example_values(lmax).unwrap();
        assert!(rel(v.curvature_integral, 128.0 / 315.0) < 1e-9, "{v:?}");
        assert!(rel(v.shear_integral, 16.0 / 693.0) < 1e-9, "{v:?}");
        assert!(rel(v.threshold, 17.6) < 1e-9, "{v:?}");
    }
}

#[test]
fn threshold_changes_sign_of_curvature() {
    let g = example_direction(6);
    let c = Curvature::new(6);
    let t = trade_wind(6);
    let star = c.gamma_threshold(&g).unwrap();
    assert!(c.mc_a(&t, &g, 0.99 * star) < 0.0);
    assert!(c.mc_a(&t, &g, 1.01 * star) > 0.0);
    assert!(c.mc_a(&t, &g, star).abs() < 1e-9 * c.mc_nu(&t, &g).abs());
}

#[test]
fn trade_wind_gamma_term_is_weighted_shear() {
    let c = Curvature::new(10);
    let t = trade_wind(10);
    for seed in 0..4 {
        let g = random_field(10, seed);
        let lhs = c.gamma_term(&t, &g);
        let rhs = C_T * C_T * c.zonal_shear_norm(&g);
        assert!(rel(lhs, rhs) < 1e-11, "{lhs} {rhs}");
        assert!(lhs > 0.0);
    }
}

/// `MC_ν(T, g)` for `g = √2 p(z) cos mλ` from one-dimensional quadrature.
///
/// With `{T,g} = 2c z g_λ` and `{ΔT,g} = −12 c z g_λ`:
/// `MC_ν = −∫|∇h|² + 24c² ∫ z² g_λ²` with `h = 2c z g_λ`.
fn trade_wind_curvature_oracle(l: usize, m: usize) -> (f64, f64) {
    let rule = gauss_legendre(120);
    let p = |z: f64| alp(l, m, z);
    // (1−z²)((zp)')² dz = (∂θ(zp))² sinθ dθ with z = cos θ, smooth in θ
    // odd m carries |sin θ|; continue it analytically across the poles
    let parity = |th: f64| if m % 2 == 1 && th.sin() < 0.0 { -1.0 } else { 1.0 };
    let zp = |th: f64| parity(th) * th.cos() * p(th.cos());
    let eps = 1e-3;
    let d = |th: f64| {
        (-zp(th + 2.0 * eps) + 8.0 * zp(th + eps) - 8.0 * zp(th - eps) + zp(th - 2.0 * eps)) / (12.0 * eps)
    };
    let mf = m as f64;
    let c2 = C_T * C_T;
    let half_pi = 0.5 * PI;
    let radial = half_pi * rule.integrate(|x| {
        let th = half_pi * (x + 1.0);
        d(th).powi(2) * th.sin()
    });
    // h = −2√2 c m z p sin mλ; ∫ sin² mλ dλ = π
    let grad_h = 8.0 * c2 * mf * mf * PI
        * (radial + rule.integrate(|z| mf * mf * (z * p(z)).powi(2) / (1.0 - z * z)));
    let tail = 24.0 * c2 * 2.0 * mf * mf * PI * rule.integrate(|z| z * z * p(z).powi(2));
    // ∫ z² (2z g_λ)² dν
    let shear = 4.0 * 2.0 * mf * mf * PI * rule.integrate(|z| z.powi(4) * p(z).powi(2));
    (tail - grad_h, c2 * shear)
}

#[test]
fn trade_wind_curvature_against_quadrature() {
    let c = Curvature::new(12);
    let t = trade_wind(12);
    for (l, m) in [(2, 1), (3, 2), (5, 3), (7, 7), (12, 4)] {
        let g = SpectralField::real_harmonic(12, l, m);
        let (mc, gt) = trade_wind_curvature_oracle(l, m);
        assert!(rel(c.mc_nu(&t, &g), mc) < 1e-9, "({l},{m}) {} vs {mc}", c.mc_nu(&t, &g));
        assert!(rel(c.gamma_term(&t, &g), gt) < 1e-12, "({l},{m})");
    }
}

#[test]
fn zonal_direction_has_no_threshold() {
    let g = SpectralField::real_harmonic(8, 4, 0);
    assert!(matches!(gamma_threshold(&g), Err(Error::ZonalDirection)));
    assert!(matches!(gamma_threshold(&SpectralField::zeros(8)), Err(Error::ZonalDirection)));
    let u = ExtendedVector::new(trade_wind(8), 1.0);
    let v = ExtendedVector::new(g, 0.0);
    let r = mc_hat(&u, &v, &coriolis_potential(8, Some(1.0), None), 1.0);
    assert_eq!(r.gamma_threshold, None);
}

#[test]
fn extension_decomposition() {
    let lmax = 10;
    let c = Curvature::new(lmax);
    let phi = coriolis_potential(lmax, Some(0.8), Some(&random_field(4, 99)));
    for seed in 0..5 {
        let f = random_field(lmax, 2 * seed);
        let g = random_field(lmax, 2 * seed + 1);
        let a = 0.3 + seed as f64;
        let r = c.mc_hat(&ExtendedVector::new(f.clone(), a), &ExtendedVector::new(g.clone(), -2.0), &phi, 17.6);
        assert!(rel(r.mc_a, 17.6 * r.gamma_term + r.mc_nu) < 1e-14);
        let want = r.mc_a - r.cocycle_sq - a * r.extension_term;
        assert!((r.mc_hat - want).abs() <= 1e-12 * r.mc_a.abs().max(r.cocycle_sq));
        let omega = c.cocycle(&f, &g, &phi);
        assert!(rel(omega * omega, r.cocycle_sq) < 1e-10);
    }
}

#[test]
fn central_charge_of_second_vector_is_ignored() {
    let lmax = 8;
    let phi = coriolis_potential(lmax, Some(1.0), None);
    let u = ExtendedVector::new(random_field(lmax, 1), 0.7);
    let g = random_field(lmax, 2);
    let r1 = mc_hat(&u, &ExtendedVector::new(g.clone(), 0.0), &phi, 3.0);
    let r2 = mc_hat(&u, &ExtendedVector::new(g, 123.0), &phi, 3.0);
    assert_eq!(r1.mc_hat.to_bits(), r2.mc_hat.to_bits());
}

#[test]
fn results_do_not_depend_on_padding() {
    let f = random_field(7, 10);
    let g = random_field(7, 11);
    let phi = random_field(7, 12);
    let small = Curvature::new(7);
    let large = Curvature::new(15);
    assert!(rel(small.mc_nu(&f, &g), large.mc_nu(&f, &g)) < 1e-11);
    assert!(rel(small.gamma_term(&f, &g), large.gamma_term(&f, &g)) < 1e-11);
    assert!(rel(small.extension_term(&f, &g, &phi), large.extension_term(&f, &g, &phi)) < 1e-11);
}

#[test]
fn scan_matches_direct_threshold() {
    let rows = threshold_scan(5);
    assert_eq!(rows.len(), (1..=5).map(|l| l + 1).sum::<usize>());
    assert_eq!((rows[0].l, rows[0].m), (1, 0));
    for r in &rows {
        if r.m == 0 {
            assert!(r.gamma_threshold.is_none());
            continue;
        }
        let g = SpectralField::real_harmonic(5, r.l, r.m);
        let direct = gamma_threshold(&g).unwrap();
        assert!((r.gamma_threshold.unwrap() - direct).abs() <= 1e-12 * direct.max(1.0));
    }
}

#[test]
fn example_threshold_matches_scan_row() {
    let rows = threshold_scan(3);
    let row = rows.iter().find(|r| (r.l, r.m) == (3, 2)).unwrap();
    assert!(rel(row.gamma_threshold.unwrap(), 17.6) < 1e-9);
}

fn shift_longitude(f: &SpectralField, alpha: f64) -> SpectralField {
    f.map(|_, m, c| c * Complex64::from_polar(1.0, -(m as f64) * alpha))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn mc_nu_ignores_constants_and_rotations(seed in 0u64..1000, shift in -3.0f64..3.0, alpha in 0.0f64..6.3) {
        let lmax = 6;
        let c = Curvature::new(lmax);
        let f = random_field(lmax, seed);
        let g = random_field(lmax, seed + 5000);
        let base = c.mc_nu(&f, &g);
        let mut f2 = f.clone();
        f2.add_to(0, 0, Complex64::new(shift, 0.0));
        let mut g2 = g.clone();
        g2.add_to(0, 0, Complex64::new(-shift, 0.0));
        let scale = base.abs().max(c.mc_nu(&f, &f).abs()).max(1.0);
        prop_assert!((c.mc_nu(&f2, &g2) - base).abs() <= 1e-10 * scale);
        let rot = c.mc_nu(&shift_longitude(&f, alpha), &shift_longitude(&g, alpha));
        prop_assert!((rot - base).abs() <= 1e-10 * scale);
    }

    #[test]
    fn mc_nu_vanishes_on_the_diagonal(seed in 0u64..1000) {
        let c = Curvature::new(6);
        let f = random_field(6, seed);
        prop_assert!(c.mc_nu(&f, &f).abs() <= 1e-10 * f.norm_sq().powi(2));
    }

    #[test]
    fn pairings_are_homogeneous(seed in 0u64..1000, s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let c = Curvature::new(5);
        let f = random_field(5, seed);
        let g = random_field(5, seed + 1);
        let (fs, gt) = (&f * s, &g * t);
        let k = s * s * t * t;
        let scale = f.norm_sq() * g.norm_sq() * k.max(1e-12) * 50.0;
        prop_assert!((c.mc_nu(&fs, &gt) - k * c.mc_nu(&f, &g)).abs() <= 1e-11 * scale);
        prop_assert!((c.gamma_term(&fs, &gt) - k * c.gamma_term(&f, &g)).abs() <= 1e-11 * scale);
    }

    #[test]
    fn trade_wind_threshold_is_non_negative(l in 1usize..8, m in 1usize..8) {
        prop_assume!(m <= l);
        let g = SpectralField::real_harmonic(8, l, m);
        let gs = gamma_threshold(&g).unwrap();
        prop_assert!(gs >= 0.0 && gs.is_finite());
    }
}
