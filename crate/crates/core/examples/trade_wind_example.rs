//! The trade-wind current perturbed by `g = 15z(1 − z²)cos 2λ`: the two
//! integrals and the Lamb parameter beyond which conjugate points appear.

use gqg::curvature::{example_direction, trade_wind, Curvature};
use gqg::io::commands::example_table;

pub fn run_example() -> gqg::Result<String> {
    let mut s = String::new();
    for (label, computed, published, dev) in example_table()? {
        s += &format!("{label:<32} {computed:>12.9} (published {published}, rel. dev. {dev:.1e})\n");
    }
    let c = Curvature::new(8);
    let (t, g) = (trade_wind(8), example_direction(8));
    for gamma in [0.0, 10.0, 17.6, 20.0] {
        s += &format!("MC^A at gamma = {gamma:<5} {:+.6e}\n", c.mc_a(&t, &g, gamma));
    }
    Ok(s)
}

#[allow(dead_code)]
fn main() -> gqg::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
