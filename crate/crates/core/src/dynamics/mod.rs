//! Time integration of the forced potential-vorticity equation
//!
//! ```text
//! ∂t q + {ψ, q} = 0,    q = (γz² − Δ)ψ + φ,    φ = 2z/Ro + 2zh
//! ```
//!
//! with classical fixed-step RK4 and conservation diagnostics. The state
//! variable is the advected quantity `q`; the stream function is recovered by
//! the banded elliptic solve at every stage.

mod initial;

use std::f64::consts::PI;

use log::warn;
use num_complex::Complex64;

use crate::operators::{integral, l2_inner, mul_z, z_power, HelmholtzSolver, ProductGrid};
use crate::spectral::SpectralField;
use crate::{Error, Result};

pub use initial::{trade_wind_stream, InitialCondition};

/// What to do when a step violates the advective stability bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StabilityMode {
    #[default]
    Warn,
    Abort,
}

/// Physical and numerical parameters of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    /// Lamb parameter `γ >= 0`.
    pub gamma: f64,
    /// Rossby number; `None` drops the planetary `2z/Ro` term.
    pub rossby: Option<f64>,
    /// Topography `h`, truncated to `lmax` when the model is built.
    pub topography: Option<SpectralField>,
    pub lmax: usize,
    pub dt: f64,
    pub t_end: f64,
    /// Diagnostics cadence in steps (0: first and last only).
    pub output_every: usize,
    /// Snapshot cadence in steps (0: first and last only).
    pub snapshot_every: usize,
    pub stability: StabilityMode,
    /// Upper bound `C` for `dt · max|∇ψ| · lmax`.
    pub stability_limit: f64,
}

impl ModelParams {
    pub fn new(lmax: usize, gamma: f64) -> Self {
        Self {
            gamma,
            rossby: None,
            topography: None,
            lmax,
            dt: 1e-2,
            t_end: 1.0,
            output_every: 1,
            snapshot_every: 0,
            stability: StabilityMode::Warn,
            stability_limit: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return bad(format!("gamma must be finite and >= 0, got {}", self.gamma));
        }
        if let Some(ro) = self.rossby {
            if !(ro > 0.0) {
                return bad(format!("rossby must be > 0, got {ro}"));
            }
        }
        if self.lmax < 2 {
            return bad(format!("lmax must be >= 2, got {}", self.lmax));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt must be > 0, got {}", self.dt));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return bad(format!("t_end must be >= 0, got {}", self.t_end));
        }
        if !(self.stability_limit > 0.0) {
            return bad(format!("stability limit must be > 0, got {}", self.stability_limit));
        }
        Ok(())
    }
}

/// `γ = 4Ω²a² / (gH)`.
pub fn gamma_from_physical(omega: f64, radius: f64, gravity: f64, depth: f64) -> f64 {
    4.0 * omega * omega * radius * radius / (gravity * depth)
}

/// `γ = r² / (L² Bu)` with `Bu = (Ro / Fr)²`.
pub fn gamma_from_burger(radius: f64, length: f64, rossby: f64, froude: f64) -> f64 {
    let burger = (rossby / froude).powi(2);
    radius * radius / (length * length * burger)
}

/// `φ = 2z/Ro + 2zh`, truncated at `lmax`.
pub fn coriolis_potential(lmax: usize, rossby: Option<f64>, topography: Option<&SpectralField>) -> SpectralField {
    let mut phi = SpectralField::zeros(lmax);
    if let Some(ro) = rossby {
        phi += &(&z_power(lmax, 1) * (2.0 / ro));
    }
    if let Some(h) = topography {
        let h = h.resized(lmax);
        phi += &(&mul_z(&h).resized(lmax) * 2.0);
    }
    phi
}

/// Potential vorticity and clock.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub q: SpectralField,
    pub t: f64,
}

/// One row of conservation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub t: f64,
    pub mean_pv: f64,
    pub enstrophy: f64,
    pub casimir3: f64,
    pub energy: f64,
    pub max_abs_q: f64,
    pub spectral_tail: f64,
}

impl Diagnostics {
    pub const COLUMNS: [&'static str; 7] =
        ["t", "mean_pv", "enstrophy", "casimir3", "energy", "max_abs_q", "spectral_tail"];

    pub fn values(&self) -> [f64; 7] {
        [self.t, self.mean_pv, self.enstrophy, self.casimir3, self.energy, self.max_abs_q, self.spectral_tail]
    }

    pub fn is_finite(&self) -> bool {
        self.values().iter().all(|v| v.is_finite())
    }
}

/// Receives diagnostics rows and snapshots from [`Model::run`].
pub trait Sink {
    fn diagnostics(&mut self, step: usize, diag: &Diagnostics) -> Result<()>;
    fn snapshot(&mut self, step: usize, state: &SimState) -> Result<()>;
    fn finish(&mut self) -> Result<()> {
        Ok(())
    }
}

/// Sink that keeps everything in memory.
#[derive(Debug, Default, Clone)]
pub struct MemorySink {
    pub diagnostics: Vec<Diagnostics>,
    pub snapshots: Vec<(usize, SimState)>,
}

impl Sink for MemorySink {
    fn diagnostics(&mut self, _step: usize, diag: &Diagnostics) -> Result<()> {
        self.diagnostics.push(*diag);
        Ok(())
    }

    fn snapshot(&mut self, step: usize, state: &SimState) -> Result<()> {
        self.snapshots.push((step, state.clone()));
        Ok(())
    }
}

/// A parameter set with everything precomputed: Coriolis potential, factored
/// elliptic operator and the dealiased product grid.
#[derive(Debug, Clone)]
pub struct Model {
    params: ModelParams,
    phi: SpectralField,
    solver: HelmholtzSolver,
    grid: ProductGrid,
    z2: SpectralField,
}

impl Model {
    pub fn new(params: ModelParams) -> Result<Self> {
        params.validate()?;
        let lmax = params.lmax;
        let phi = coriolis_potential(lmax, params.rossby, params.topography.as_ref());
        let solver = HelmholtzSolver::new(lmax, params.gamma)?;
        let grid = ProductGrid::new(lmax);
        let z2 = z_power(lmax, 2);
        Ok(Self { params, phi, solver, grid, z2 })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn lmax(&self) -> usize {
        self.params.lmax
    }

    /// The Coriolis potential `φ`.
    pub fn coriolis(&self) -> &SpectralField {
        &self.phi
    }

    pub fn solver(&self) -> &HelmholtzSolver {
        &self.solver
    }

    pub fn grid(&self) -> &ProductGrid {
        &self.grid
    }

    /// `q = (γz² − Δ)ψ + φ`.
    pub fn pv_from_stream(&self, psi: &SpectralField) -> SpectralField {
        let mut q = self.solver.apply(&psi.resized(self.lmax()));
        q += &self.phi;
        q
    }

    /// `ψ = (γz² − Δ)⁻¹ (q − φ)`.
    pub fn stream_from_pv(&self, q: &SpectralField) -> Result<SpectralField> {
        self.solver.solve(&(q - &self.phi))
    }

    /// `∂t q = −{ψ, q}`.
    pub fn tendency(&self, q: &SpectralField) -> Result<SpectralField> {
        let psi = self.stream_from_pv(q)?;
        let mut out = self.grid.bracket(&psi, q);
        out.scale(-1.0);
        Ok(out)
    }

    pub fn rhs(&self, state: &SimState) -> Result<SpectralField> {
        self.tendency(&state.q)
    }

    /// Tendency of the stream function in the unforced equation
    /// `∂t (γz² − Δ)ψ + {ψ, (γz² − Δ)ψ} = 0`, evolved directly in `ψ`.
    pub fn stream_tendency(&self, psi: &SpectralField) -> Result<SpectralField> {
        let m = self.solver.apply(psi);
        let mut b = self.grid.bracket(psi, &m);
        b.scale(-1.0);
        if self.params.gamma == 0.0 {
            b.set(0, 0, Complex64::new(0.0, 0.0));
        }
        self.solver.solve(&b)
    }

    /// `dt · max|∇ψ| · lmax` for the current state.
    pub fn advective_number(&self, state: &SimState, dt: f64) -> Result<f64> {
        let psi = self.stream_from_pv(&state.q)?;
        Ok(dt * self.grid.max_gradient(&psi) * self.lmax() as f64)
    }

    fn check_stability(&self, state: &SimState, dt: f64) -> Result<()> {
        let number = self.advective_number(state, dt)?;
        let limit = self.params.stability_limit;
        if number > limit {
            match self.params.stability {
                StabilityMode::Abort => return Err(Error::UnstableStep { t: state.t, number, limit }),
                StabilityMode::Warn => {
                    warn!("advective number {number:.4} exceeds {limit} at t = {}", state.t)
                }
            }
        }
        Ok(())
    }

    /// One classical RK4 step of size `params.dt`.
    pub fn step_rk4(&self, state: &SimState) -> Result<SimState> {
        self.step_with(state, self.params.dt)
    }

    /// One classical RK4 step of size `dt`.
    pub fn step_with(&self, state: &SimState, dt: f64) -> Result<SimState> {
        self.check_stability(state, dt)?;
        let q0 = &state.q;
        let k1 = self.tendency(q0)?;
        let k2 = self.tendency(&axpy(q0, 0.5 * dt, &k1))?;
        let k3 = self.tendency(&axpy(q0, 0.5 * dt, &k2))?;
        let k4 = self.tendency(&axpy(q0, dt, &k3))?;
        let mut q = q0.clone();
        for (i, a) in q.coeffs_mut().iter_mut().enumerate() {
            let incr = k1.coeffs()[i] + k2.coeffs()[i] * 2.0 + k3.coeffs()[i] * 2.0 + k4.coeffs()[i];
            *a += incr * (dt / 6.0);
        }
        q.enforce_reality();
        Ok(SimState { q, t: state.t + dt })
    }

    /// `E = ½[∫ψ(γz² − Δ)ψ dν − (∫ψγz² dν)² / ∫γz² dν]`; the correction is
    /// dropped when `γ = 0`.
    pub fn energy(&self, state: &SimState) -> Result<f64> {
        let psi = self.stream_from_pv(&state.q)?;
        Ok(self.energy_of_stream(&psi))
    }

    pub fn energy_of_stream(&self, psi: &SpectralField) -> f64 {
        let gamma = self.params.gamma;
        let mut e = l2_inner(psi, &self.solver.apply(psi));
        if gamma > 0.0 {
            let proj = gamma * l2_inner(psi, &self.z2);
            e -= proj * proj / (gamma * 4.0 * PI / 3.0);
        }
        0.5 * e
    }

    pub fn diagnostics(&self, state: &SimState) -> Result<Diagnostics> {
        let q = &state.q;
        let values = self.grid.values(q);
        let cubes: Vec<f64> = values.iter().map(|v| v * v * v).collect();
        let tail_start = (0.9 * self.lmax() as f64).floor() as usize + 1;
        let spectral_tail = q
            .iter()
            .filter(|&(l, _, _)| l >= tail_start)
            .map(|(_, m, a)| if m == 0 { a.norm_sqr() } else { 2.0 * a.norm_sqr() })
            .sum();
        Ok(Diagnostics {
            t: state.t,
            mean_pv: integral(q),
            enstrophy: q.norm_sq(),
            casimir3: self.grid.integrate(&cubes),
            energy: self.energy(state)?,
            max_abs_q: values.iter().fold(0.0, |acc, v| acc.max(v.abs())),
            spectral_tail,
        })
    }

    /// Number of steps to reach `t_end` from `t0`; the last one may be shorter.
    pub fn step_count(&self, t0: f64) -> usize {
        let span = self.params.t_end - t0;
        if span <= 0.0 {
            return 0;
        }
        (span / self.params.dt - 1e-9).ceil().max(1.0) as usize
    }

    /// Advances `initial` to `t_end`, emitting diagnostics every
    /// `output_every` steps and snapshots every `snapshot_every` steps, plus
    /// the first and last state. The sink is finished even when a step fails.
    pub fn run(&self, initial: &SimState, sink: &mut dyn Sink) -> Result<SimState> {
        let result = self.run_inner(initial, sink);
        let finished = sink.finish();
        let state = result?;
        finished?;
        Ok(state)
    }

    fn run_inner(&self, initial: &SimState, sink: &mut dyn Sink) -> Result<SimState> {
        let p = &self.params;
        let nsteps = self.step_count(initial.t);
        let due = |every: usize, step: usize| step == 0 || step == nsteps || (every > 0 && step.is_multiple_of(every));
        let t0 = initial.t;
        let mut state = initial.clone();
        sink.diagnostics(0, &self.diagnostics(&state)?)?;
        sink.snapshot(0, &state)?;
        for step in 1..=nsteps {
            let target = if step == nsteps { p.t_end } else { t0 + step as f64 * p.dt };
            let dt = target - state.t;
            state = self.step_with(&state, dt)?;
            state.t = target;
            if due(p.output_every, step) {
                sink.diagnostics(step, &self.diagnostics(&state)?)?;
            }
            if due(p.snapshot_every, step) {
                sink.snapshot(step, &state)?;
            }
        }
        Ok(state)
    }
}

fn axpy(x: &SpectralField, a: f64, y: &SpectralField) -> SpectralField {
    let mut out = x.clone();
    for (o, v) in out.coeffs_mut().iter_mut().zip(y.coeffs()) {
        *o += v * a;
    }
    out
}
