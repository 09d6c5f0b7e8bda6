//! Inverting `γz² − Δ` order by order with the banded solver, across a range
//! of Lamb parameters.

use gqg::operators::HelmholtzSolver;
use gqg::SpectralField;
use num_complex::Complex64;

pub fn run_example() -> gqg::Result<String> {
    let lmax = 63;
    let rhs = SpectralField::from_fn(lmax, |l, m| {
        if l == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let im = if m == 0 { 0.0 } else { (m as f64).cos() };
        Complex64::new((l as f64).sin(), im) / (l as f64)
    });
    let mut s = String::from("gamma        relative residual   |psi|\n");
    for gamma in [0.0, 0.1, 1.0, 17.6, 1000.0] {
        let solver = HelmholtzSolver::new(lmax, gamma)?;
        let psi = solver.solve(&rhs)?;
        let resid = &solver.apply(&psi) - &rhs;
        let rel = (resid.norm_sq() / rhs.norm_sq()).sqrt();
        s += &format!("{gamma:<12} {rel:<19.3e} {:.6}\n", psi.norm_sq().sqrt());
    }
    Ok(s)
}

#[allow(dead_code)]
fn main() -> gqg::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
