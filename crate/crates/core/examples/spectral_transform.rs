//! Synthesis and analysis on the Gauss–Legendre grid: round trip, Parseval,
//! and the sampled `Y(2,0)` recovered from its closed form.

use std::f64::consts::PI;

use gqg::spectral::Transform;
use gqg::SpectralField;
use num_complex::Complex64;

pub fn run_example() -> gqg::Result<String> {
    let lmax = 31;
    let t = Transform::new(lmax);
    let f = SpectralField::from_fn(lmax, |l, m| {
        let im = if m == 0 { 0.0 } else { 0.5 / (1.0 + m as f64) };
        Complex64::new(1.0 / (1.0 + l as f64), im)
    });
    let grid = t.synthesis(&f)?;
    let back = t.analysis(&grid)?;
    let err = back.coeffs().iter().zip(f.coeffs()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    let spectral = f.norm_sq();
    let physical = grid.map(|v| v * v).integrate();

    let y20 = t.sample(|z, _| (5.0 / (16.0 * PI)).sqrt() * (3.0 * z * z - 1.0));
    let a20 = t.analysis(&y20)?.get(2, 0).re;

    let mut s = format!("grid {} x {} for lmax {lmax}\n", t.nlat(), t.nlon());
    s += &format!("round-trip max error   {err:.3e}\n");
    s += &format!("Parseval  spectral {spectral:.15}  grid {physical:.15}\n");
    s += &format!("sampled Y(2,0) -> coefficient {a20:.15}\n");
    Ok(s)
}

#[allow(dead_code)]
fn main() -> gqg::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
