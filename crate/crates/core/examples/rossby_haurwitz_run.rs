//! A Rossby–Haurwitz wave on the rotating sphere integrated with RK4, with
//! the relative drift of every conserved quantity.

use gqg::dynamics::{InitialCondition, MemorySink, Model, ModelParams};

pub fn run_example() -> gqg::Result<String> {
    let mut p = ModelParams::new(24, 4.0);
    p.rossby = Some(1.0);
    p.dt = 0.01;
    p.t_end = 2.0;
    p.output_every = 50;
    let model = Model::new(p)?;
    let initial = InitialCondition::RossbyHaurwitz { l: 4, m: 3, amplitude: 0.3 }.build(&model);
    let mut sink = MemorySink::default();
    model.run(&initial, &mut sink)?;
    let first = sink.diagnostics[0];
    let mut s = String::from("t      enstrophy            energy               casimir3\n");
    for d in &sink.diagnostics {
        s += &format!("{:<6} {:<20.15} {:<20.15} {:.15}\n", d.t, d.enstrophy, d.energy, d.casimir3);
    }
    let last = sink.diagnostics[sink.diagnostics.len() - 1];
    let drift = |a: f64, b: f64| ((a - b) / b).abs();
    s += &format!(
        "relative drift: enstrophy {:.2e}, energy {:.2e}, mean PV {:.2e}\n",
        drift(last.enstrophy, first.enstrophy),
        drift(last.energy, first.energy),
        (last.mean_pv - first.mean_pv).abs()
    );
    Ok(s)
}

#[allow(dead_code)]
fn main() -> gqg::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
