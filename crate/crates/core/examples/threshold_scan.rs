//! Conjugate-point thresholds along the trade wind for every real harmonic
//! direction up to degree 8, smallest first.

use gqg::curvature::threshold_scan;

pub fn run_example() -> gqg::Result<String> {
    let mut rows: Vec<_> = threshold_scan(8).into_iter().filter(|r| r.gamma_threshold.is_some()).collect();
    rows.sort_by(|a, b| a.gamma_threshold.partial_cmp(&b.gamma_threshold).expect("finite thresholds"));
    let mut s = String::from(" l  m   gamma*\n");
    for r in rows.iter().take(12) {
        s += &format!("{:>2} {:>2}   {:.6}\n", r.l, r.m, r.gamma_threshold.unwrap_or_default());
    }
    Ok(s)
}

#[allow(dead_code)]
fn main() -> gqg::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
