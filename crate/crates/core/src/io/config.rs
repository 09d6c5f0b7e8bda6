//! Flat `key = value` run configuration.
//!
//! ```text
//! # comments start with '#'
//! lmax = 32
//! gamma = 17.6            # or: omega, radius, gravity, depth (all four)
//! rossby = inf            # inf drops the planetary term
//! topography = none       # none | ylm:l,m,amp | file:path
//! init = trade_wind       # trade_wind | rossby_haurwitz:l,m,amp | random:seed,slope[,amp] | file:path
//! seed = 7                # replaces the seed of a random init
//! dt = 0.01
//! t_end = 1
//! output_every = 1        # diagnostics cadence in steps (0: first and last)
//! snapshot_every = 0      # snapshot cadence in steps (0: first and last)
//! stability = warn        # warn | abort
//! stability_limit = 0.5
//! out = out
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::dynamics::{gamma_from_physical, InitialCondition, ModelParams, StabilityMode};
use crate::io::snapshot::Snapshot;
use crate::spectral::SpectralField;
use crate::{Error, Result};

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn parse_num<T: FromStr>(key: &str, s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| config_err(format!("{key}: cannot parse {s:?}")))
}

/// Splits `name:a,b,c` into the name and its comma-separated arguments.
fn split_spec(s: &str) -> (&str, Vec<&str>) {
    match s.split_once(':') {
        Some((name, args)) => (name.trim(), args.split(',').map(str::trim).collect()),
        None => (s.trim(), Vec::new()),
    }
}

fn arity(name: &str, args: &[&str], allowed: &[usize]) -> Result<()> {
    if allowed.contains(&args.len()) {
        Ok(())
    } else {
        Err(config_err(format!("{name}: expected {allowed:?} arguments, got {}", args.len())))
    }
}

/// Rossby number with `inf` meaning no planetary term.
pub fn parse_rossby(s: &str) -> Result<Option<f64>> {
    let v: f64 = match s.trim() {
        "inf" | "infinity" | "none" => return Ok(None),
        other => parse_num("rossby", other)?,
    };
    Ok(if v.is_infinite() { None } else { Some(v) })
}

fn format_rossby(r: Option<f64>) -> String {
    r.map_or("inf".to_string(), |v| format!("{v:?}"))
}

/// Initial condition as written in a config file.
#[derive(Debug, Clone, PartialEq)]
pub enum InitSpec {
    TradeWind,
    RossbyHaurwitz { l: usize, m: usize, amplitude: f64 },
    Random { seed: u64, slope: f64, amplitude: f64 },
    /// Snapshot holding potential-vorticity coefficients.
    File(PathBuf),
}

impl FromStr for InitSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = split_spec(s);
        match name {
            "trade_wind" => {
                arity(name, &args, &[0])?;
                Ok(Self::TradeWind)
            }
            "rossby_haurwitz" => {
                arity(name, &args, &[3])?;
                Ok(Self::RossbyHaurwitz {
                    l: parse_num(name, args[0])?,
                    m: parse_num(name, args[1])?,
                    amplitude: parse_num(name, args[2])?,
                })
            }
            "random" => {
                arity(name, &args, &[2, 3])?;
                Ok(Self::Random {
                    seed: parse_num(name, args[0])?,
                    slope: parse_num(name, args[1])?,
                    amplitude: args.get(2).map_or(Ok(1.0), |a| parse_num(name, a))?,
                })
            }
            "file" => {
                let path = s.trim().strip_prefix("file:").unwrap_or_default();
                if path.is_empty() {
                    return Err(config_err("file: missing path"));
                }
                Ok(Self::File(PathBuf::from(path)))
            }
            _ => Err(config_err(format!("unknown initial condition {s:?}"))),
        }
    }
}

impl fmt::Display for InitSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::TradeWind => write!(f, "trade_wind"),
            Self::RossbyHaurwitz { l, m, amplitude } => write!(f, "rossby_haurwitz:{l},{m},{amplitude:?}"),
            Self::Random { seed, slope, amplitude } => write!(f, "random:{seed},{slope:?},{amplitude:?}"),
            Self::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl InitSpec {
    pub fn to_initial_condition(&self) -> Result<InitialCondition> {
        Ok(match *self {
            Self::TradeWind => InitialCondition::TradeWind,
            Self::RossbyHaurwitz { l, m, amplitude } => InitialCondition::RossbyHaurwitz { l, m, amplitude },
            Self::Random { seed, slope, amplitude } => InitialCondition::Random { seed, slope, amplitude },
            Self::File(ref p) => InitialCondition::Pv(Snapshot::load(p)?.field),
        })
    }
}

/// Topography `h` as written in a config file or on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum TopoSpec {
    None,
    /// `amplitude · √2 Re Y(l,m)` (or `amplitude · Y(l,0)`).
    Harmonic { l: usize, m: usize, amplitude: f64 },
    File(PathBuf),
}

impl FromStr for TopoSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = split_spec(s);
        match name {
            "none" | "" => Ok(Self::None),
            "ylm" => {
                arity(name, &args, &[3])?;
                Ok(Self::Harmonic {
                    l: parse_num(name, args[0])?,
                    m: parse_num(name, args[1])?,
                    amplitude: parse_num(name, args[2])?,
                })
            }
            "file" => Ok(Self::File(PathBuf::from(s.trim().trim_start_matches("file:")))),
            _ => Err(config_err(format!("unknown topography {s:?}"))),
        }
    }
}

impl fmt::Display for TopoSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::None => write!(f, "none"),
            Self::Harmonic { l, m, amplitude } => write!(f, "ylm:{l},{m},{amplitude:?}"),
            Self::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl TopoSpec {
    pub fn build(&self, lmax: usize) -> Result<Option<SpectralField>> {
        Ok(match *self {
            Self::None => None,
            Self::Harmonic { l, m, amplitude } => {
                check_mode(l, m, lmax)?;
                Some(&SpectralField::real_harmonic(lmax, l, m) * amplitude)
            }
            Self::File(ref p) => Some(Snapshot::load(p)?.field.resized(lmax)),
        })
    }
}

pub(crate) fn check_mode(l: usize, m: usize, lmax: usize) -> Result<()> {
    if m > l || l > lmax {
        return Err(config_err(format!("harmonic ({l},{m}) not available at lmax {lmax}")));
    }
    Ok(())
}

/// Physical constants from which `γ = 4Ω²a²/(gH)` is derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub omega: f64,
    pub radius: f64,
    pub gravity: f64,
    pub depth: f64,
}

/// Fully resolved configuration of a `run`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub lmax: usize,
    pub gamma: f64,
    /// Present when `gamma` was derived from physical constants.
    pub physical: Option<PhysicalConstants>,
    pub rossby: Option<f64>,
    pub topography: TopoSpec,
    pub init: InitSpec,
    pub dt: f64,
    pub t_end: f64,
    pub output_every: usize,
    pub snapshot_every: usize,
    pub stability: StabilityMode,
    pub stability_limit: f64,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        let p = ModelParams::new(32, 1.0);
        Self {
            lmax: p.lmax,
            gamma: p.gamma,
            physical: None,
            rossby: p.rossby,
            topography: TopoSpec::None,
            init: InitSpec::TradeWind,
            dt: p.dt,
            t_end: p.t_end,
            output_every: p.output_every,
            snapshot_every: p.snapshot_every,
            stability: p.stability,
            stability_limit: p.stability_limit,
            out: PathBuf::from("out"),
        }
    }
}

const KEYS: [&str; 17] = [
    "lmax",
    "gamma",
    "omega",
    "radius",
    "gravity",
    "depth",
    "rossby",
    "topography",
    "init",
    "seed",
    "dt",
    "t_end",
    "output_every",
    "snapshot_every",
    "stability",
    "stability_limit",
    "out",
];

impl FromStr for RunConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut kv = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or_default().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) =
                line.split_once('=').ok_or_else(|| config_err(format!("line {}: expected key = value", n + 1)))?;
            let k = k.trim();
            if !KEYS.contains(&k) {
                return Err(config_err(format!("line {}: unknown key {k:?}", n + 1)));
            }
            if kv.insert(k.to_string(), v.trim().to_string()).is_some() {
                return Err(config_err(format!("line {}: duplicate key {k:?}", n + 1)));
            }
        }
        let get = |k: &str| kv.get(k).map(String::as_str);
        let mut c = RunConfig::default();
        if let Some(v) = get("lmax") {
            c.lmax = parse_num("lmax", v)?;
        }
        let phys_keys = ["omega", "radius", "gravity", "depth"];
        let given: Vec<&str> = phys_keys.iter().copied().filter(|k| kv.contains_key(*k)).collect();
        if !given.is_empty() {
            if given.len() != phys_keys.len() {
                return Err(config_err("omega, radius, gravity and depth must be given together"));
            }
            if kv.contains_key("gamma") {
                return Err(config_err("give either gamma or the physical constants, not both"));
            }
            let p = PhysicalConstants {
                omega: parse_num("omega", get("omega").unwrap_or_default())?,
                radius: parse_num("radius", get("radius").unwrap_or_default())?,
                gravity: parse_num("gravity", get("gravity").unwrap_or_default())?,
                depth: parse_num("depth", get("depth").unwrap_or_default())?,
            };
            c.gamma = gamma_from_physical(p.omega, p.radius, p.gravity, p.depth);
            c.physical = Some(p);
        } else if let Some(v) = get("gamma") {
            c.gamma = parse_num("gamma", v)?;
        }
        if let Some(v) = get("rossby") {
            c.rossby = parse_rossby(v)?;
        }
        if let Some(v) = get("topography") {
            c.topography = v.parse()?;
        }
        if let Some(v) = get("init") {
            c.init = v.parse()?;
        }
        if let Some(v) = get("seed") {
            c.set_seed(parse_num("seed", v)?)?;
        }
        if let Some(v) = get("dt") {
            c.dt = parse_num("dt", v)?;
        }
        if let Some(v) = get("t_end") {
            c.t_end = parse_num("t_end", v)?;
        }
        if let Some(v) = get("output_every") {
            c.output_every = parse_num("output_every", v)?;
        }
        if let Some(v) = get("snapshot_every") {
            c.snapshot_every = parse_num("snapshot_every", v)?;
        }
        if let Some(v) = get("stability") {
            c.stability = match v {
                "warn" => StabilityMode::Warn,
                "abort" => StabilityMode::Abort,
                _ => return Err(config_err(format!("stability: expected warn or abort, got {v:?}"))),
            };
        }
        if let Some(v) = get("stability_limit") {
            c.stability_limit = parse_num("stability_limit", v)?;
        }
        if let Some(v) = get("out") {
            c.out = PathBuf::from(v);
        }
        Ok(c)
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        std::fs::read_to_string(path)?.parse()
    }

    /// Replaces the seed of a random initial condition.
    pub fn set_seed(&mut self, seed: u64) -> Result<()> {
        match &mut self.init {
            InitSpec::Random { seed: s, .. } => {
                *s = seed;
                Ok(())
            }
            other => Err(config_err(format!("seed given but init is {other}"))),
        }
    }

    pub fn model_params(&self) -> Result<ModelParams> {
        let mut p = ModelParams::new(self.lmax, self.gamma);
        p.rossby = self.rossby;
        p.topography = self.topography.build(self.lmax)?;
        p.dt = self.dt;
        p.t_end = self.t_end;
        p.output_every = self.output_every;
        p.snapshot_every = self.snapshot_every;
        p.stability = self.stability;
        p.stability_limit = self.stability_limit;
        p.validate()?;
        Ok(p)
    }

    /// Every key with its resolved value, parseable back into the same config.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let mut line = |k: &str, v: String| s.push_str(&format!("{k} = {v}\n"));
        line("lmax", self.lmax.to_string());
        match self.physical {
            Some(p) => {
                line("omega", format!("{:?}", p.omega));
                line("radius", format!("{:?}", p.radius));
                line("gravity", format!("{:?}", p.gravity));
                line("depth", format!("{:?}", p.depth));
            }
            None => line("gamma", format!("{:?}", self.gamma)),
        }
        line("rossby", format_rossby(self.rossby));
        line("topography", self.topography.to_string());
        line("init", self.init.to_string());
        line("dt", format!("{:?}", self.dt));
        line("t_end", format!("{:?}", self.t_end));
        line("output_every", self.output_every.to_string());
        line("snapshot_every", self.snapshot_every.to_string());
        line(
            "stability",
            match self.stability {
                StabilityMode::Warn => "warn",
                StabilityMode::Abort => "abort",
            }
            .to_string(),
        );
        line("stability_limit", format!("{:?}", self.stability_limit));
        line("out", self.out.display().to_string());
        if self.physical.is_some() {
            s.push_str(&format!("# gamma = {:?}\n", self.gamma));
        }
        s
    }
}
