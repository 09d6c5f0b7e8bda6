//! The file-based workflow: a flat config, a run writing diagnostics.csv and
//! snapshots, and the final snapshot read back.

use std::path::PathBuf;

use gqg::io::{cmd_run, RunConfig, Snapshot};

pub fn run_example() -> gqg::Result<String> {
    let out: PathBuf = std::env::temp_dir().join(format!("gqg-example-{}", std::process::id()));
    let text = format!(
        "lmax = 16\ngamma = 17.6\nrossby = 1\ninit = random:7,2.0,0.5\ndt = 0.02\nt_end = 0.4\n\
         output_every = 5\nsnapshot_every = 10\nout = {}\n",
        out.display()
    );
    let config: RunConfig = text.parse()?;
    let summary = cmd_run(&config)?;
    let csv = std::fs::read_to_string(out.join("diagnostics.csv"))?;
    let last = summary.snapshots.last().expect("final snapshot is always written");
    let snap = Snapshot::load(last)?;
    let mut s = format!("{} rows, {} snapshots\n", summary.rows, summary.snapshots.len());
    s += csv.lines().next().unwrap_or_default();
    s += &format!("\nfinal snapshot t = {} with lmax {}\n", snap.time, snap.field.lmax());
    std::fs::remove_dir_all(&out)?;
    Ok(s)
}

#[allow(dead_code)]
fn main() -> gqg::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
