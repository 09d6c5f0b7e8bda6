//! Curvature on the centrally extended algebra with Coriolis forcing and a
//! zonal ridge: the decomposition into `MCᴬ`, the squared cocycle and the
//! charge-weighted extension term.

use gqg::curvature::{example_direction, trade_wind, Curvature, ExtendedVector};
use gqg::dynamics::coriolis_potential;
use gqg::SpectralField;

pub fn run_example() -> gqg::Result<String> {
    let lmax = 12;
    let ridge = &SpectralField::real_harmonic(lmax, 2, 0) * 0.2;
    let phi = coriolis_potential(lmax, Some(0.5), Some(&ridge));
    let c = Curvature::new(lmax);
    // mixed parity in z, otherwise the extension term vanishes by symmetry
    let g = &example_direction(lmax) + &(&SpectralField::real_harmonic(lmax, 2, 2) * 5.0);
    let g = ExtendedVector::new(g, 0.0);
    let mut s = String::from("charge   MC^A            cocycle^2       extension       MC^hat\n");
    for a in [0.0, 1.0, 5.0] {
        let u = ExtendedVector::new(trade_wind(lmax), a);
        let r = c.mc_hat(&u, &g, &phi, 20.0);
        s += &format!(
            "{a:<8} {:+.6e}  {:+.6e}  {:+.6e}  {:+.6e}\n",
            r.mc_a, r.cocycle_sq, r.extension_term, r.mc_hat
        );
    }
    Ok(s)
}

#[allow(dead_code)]
fn main() -> gqg::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
