use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gqg::io::config::parse_rossby;
use gqg::io::{
    cmd_example, cmd_mc, cmd_run, cmd_threshold_scan, mc_report_json, resolve_config, FieldSpec, McArgs, RunOverrides,
    TopoSpec,
};

#[derive(Parser)]
#[command(name = "gqg", version, about = "Global quasi-geostrophic solver and Misiołek-curvature toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the model and write diagnostics.csv, snapshots and the resolved config.
    Run {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        gamma: Option<f64>,
        /// Rossby number, or `inf` to drop the planetary term.
        #[arg(long)]
        rossby: Option<String>,
        /// none | ylm:l,m,amp | file:path
        #[arg(long)]
        topo: Option<String>,
        #[arg(long)]
        lmax: Option<usize>,
        /// Seed of a random initial condition.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print the extended curvature report for directions f and g as JSON.
    Mc {
        /// trade_wind | example | ylm:l,m[,amp] | random:seed,slope[,amp] | file:path
        #[arg(long, default_value = "trade_wind")]
        f: String,
        #[arg(long, default_value = "example")]
        g: String,
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        #[arg(long, default_value = "inf")]
        rossby: String,
        #[arg(long, default_value = "none")]
        topo: String,
        #[arg(long, default_value_t = 16)]
        lmax: usize,
        /// Central charge a of (f, a).
        #[arg(long, default_value_t = 1.0)]
        charge: f64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Reproduce the trade-wind example and compare with the published values.
    Example,
    /// Trade-wind thresholds over all real harmonic directions up to lmax.
    ThresholdScan {
        #[arg(long, default_value_t = 16)]
        lmax: usize,
        /// Output CSV (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn execute(command: Command) -> gqg::Result<()> {
    match command {
        Command::Run { config, out, gamma, rossby, topo, lmax, seed } => {
            let overrides = RunOverrides {
                out,
                gamma,
                rossby: rossby.as_deref().map(parse_rossby).transpose()?,
                topography: topo.as_deref().map(str::parse::<TopoSpec>).transpose()?,
                lmax,
                seed,
            };
            let cfg = resolve_config(config.as_deref(), &overrides)?;
            let summary = cmd_run(&cfg)?;
            println!(
                "t = {} reached; {} diagnostics rows and {} snapshots in {}",
                summary.final_time,
                summary.rows,
                summary.snapshots.len(),
                summary.out.display()
            );
        }
        Command::Mc { f, g, gamma, rossby, topo, lmax, charge, seed } => {
            let args = McArgs {
                f: f.parse::<FieldSpec>()?,
                g: g.parse::<FieldSpec>()?,
                gamma,
                rossby: parse_rossby(&rossby)?,
                topography: topo.parse()?,
                lmax,
                charge,
                seed,
            };
            let report = cmd_mc(&args)?;
            if report.gamma_threshold.is_none() {
                eprintln!("warning: {} has no gamma threshold (zonal direction)", args.g);
            }
            println!("{}", mc_report_json(&report));
        }
        Command::Example => print!("{}", cmd_example()?),
        Command::ThresholdScan { lmax, out } => cmd_threshold_scan(lmax, out.as_deref())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
