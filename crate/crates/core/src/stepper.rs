//! Time integration of `∂ₜg = -ηΛ³g + 𝒩(g, t)`.
//!
//! The stiff multiplier `-η|k|³` is diagonal in mode space and is applied
//! exactly through its exponential; only the remainder `𝒩` is treated
//! explicitly, by an integrating-factor Euler or Heun step or by ETDRK2.
//! With `𝒩 ≡ 0` every scheme reproduces the exact decay
//! `ĝ(k, t+dt) = e^{-η|k|³dt} ĝ(k, t)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::SpectralField;

/// Stiff-excluded right-hand side consumed by the stepper.
pub trait NonstiffRhs {
    fn eval(&self, g: &SpectralField, t: f64) -> Result<SpectralField>;
    /// Coefficient of the exactly-integrated `-ηΛ³` term.
    fn eta(&self) -> f64;
}

impl NonstiffRhs for crate::model::ModelRhs {
    fn eval(&self, g: &SpectralField, t: f64) -> Result<SpectralField> {
        self.nonstiff(g, t)
    }

    fn eta(&self) -> f64 {
        crate::model::ModelRhs::eta(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Integrating-factor forward Euler (first order).
    IfEuler,
    /// Integrating-factor Heun (second order).
    IfRk2,
    /// Exponential time differencing RK2 (second order).
    Etdrk2,
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Scheme::IfEuler => "if-euler",
            Scheme::IfRk2 => "if-rk2",
            Scheme::Etdrk2 => "etdrk2",
        };
        write!(f, "{name}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepperConfig {
    pub dt: f64,
    pub scheme: Scheme,
    pub t_end: f64,
    /// Safety factor in (0, 1] for the optional adaptive step control.
    pub cfl_safety: f64,
    /// Shrink the step when the nonlinear term grows relative to the state.
    pub adaptive: bool,
}

impl StepperConfig {
    pub fn new(dt: f64, scheme: Scheme, t_end: f64) -> Result<Self> {
        let cfg = StepperConfig {
            dt,
            scheme,
            t_end,
            cfl_safety: 1.0,
            adaptive: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::invalid(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(Error::invalid(format!(
                "t_end must be ≥ 0, got {}",
                self.t_end
            )));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return Err(Error::invalid(format!(
                "cfl_safety must lie in (0, 1], got {}",
                self.cfl_safety
            )));
        }
        Ok(())
    }
}

/// Conservative default step for the explicit nonlinear part,
/// `0.5·(η k_max³)⁻¹·cfl_safety`.
pub fn default_dt(eta: f64, k_max: usize, cfl_safety: f64) -> f64 {
    0.5 / (eta * (k_max as f64).powi(3)) * cfl_safety
}

/// Interface state carried through a trajectory. The initial interface `g0`
/// is frozen at construction; the forcing references it at every step.
#[derive(Debug, Clone)]
pub struct SimState {
    pub g: SpectralField,
    pub t: f64,
    pub g0: SpectralField,
    pub step_index: u64,
}

impl SimState {
    pub fn new(g: SpectralField) -> Self {
        let g0 = g.clone();
        SimState {
            g,
            t: 0.0,
            g0,
            step_index: 0,
        }
    }
}

/// Norm past which the trajectory is declared blown up; the local theory
/// only covers small data.
pub const BLOW_UP_NORM: f64 = 1e6;

fn phi1(z: f64) -> f64 {
    if z.abs() < 0.05 {
        // z^n / (n+1)!
        1.0 + z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z * (1.0 / 120.0 + z / 720.0))))
    } else {
        z.exp_m1() / z
    }
}

fn phi2(z: f64) -> f64 {
    if z.abs() < 0.05 {
        // z^n / (n+2)!
        0.5 + z * (1.0 / 6.0
            + z * (1.0 / 24.0 + z * (1.0 / 120.0 + z * (1.0 / 720.0 + z / 5040.0))))
    } else {
        (z.exp_m1() - z) / (z * z)
    }
}

fn apply_multiplier(g: &SpectralField, f: impl Fn(f64) -> f64) -> SpectralField {
    let coeffs: Vec<(usize, Complex64)> = g
        .half_spectrum()
        .iter()
        .enumerate()
        .map(|(k, &c)| (k, c * f(k as f64)))
        .collect();
    SpectralField::from_mode_coeffs(g.grid_size(), &coeffs)
        .expect("multiplier preserves validity")
}

fn step_with_dt(
    state: &SimState,
    dt: f64,
    scheme: Scheme,
    rhs: &dyn NonstiffRhs,
    n_now: &SpectralField,
) -> Result<SpectralField> {
    let eta = rhs.eta();
    let propagator = |g: &SpectralField| apply_multiplier(g, |k| (-eta * k.powi(3) * dt).exp());
    match scheme {
        Scheme::IfEuler => {
            let inner = state.g.add(&n_now.scale(dt))?;
            Ok(propagator(&inner))
        }
        Scheme::IfRk2 => {
            let predictor = propagator(&state.g.add(&n_now.scale(dt))?);
            let n_next = rhs.eval(&predictor, state.t + dt)?;
            let averaged = propagator(&state.g.add(&n_now.scale(0.5 * dt))?)
                .add(&n_next.scale(0.5 * dt))?;
            Ok(averaged)
        }
        Scheme::Etdrk2 => {
            let stage = propagator(&state.g).add(&apply_multiplier(n_now, |k| {
                dt * phi1(-eta * k.powi(3) * dt)
            }))?;
            let n_next = rhs.eval(&stage, state.t + dt)?;
            let correction = apply_multiplier(&n_next.sub(n_now)?, |k| {
                dt * phi2(-eta * k.powi(3) * dt)
            });
            stage.add(&correction)
        }
    }
}

/// Advance one accepted step of size at most `cfg.dt` (clamped to land on
/// `t_end` exactly when `t_end > 0`).
pub fn step(state: &SimState, cfg: &StepperConfig, rhs: &dyn NonstiffRhs) -> Result<SimState> {
    cfg.validate()?;
    let n_now = rhs.eval(&state.g, state.t)?;
    let mut dt = cfg.dt;
    if cfg.adaptive {
        let state_scale = state.g.wiener_norm(1.0, false).max(1e-3);
        let drive = n_now.wiener_norm(1.0, false).max(1e-12);
        dt = (cfg.cfl_safety * state_scale / drive).clamp(cfg.dt * 1e-3, cfg.dt);
    }
    if cfg.t_end > state.t {
        dt = dt.min(cfg.t_end - state.t);
    }
    let g_next = step_with_dt(state, dt, cfg.scheme, rhs, &n_now)?;
    let next = SimState {
        g: g_next,
        t: state.t + dt,
        g0: state.g0.clone(),
        step_index: state.step_index + 1,
    };
    if !next.g.is_finite() || next.g.wiener_norm(1.0, false) > BLOW_UP_NORM {
        return Err(Error::BlowUp {
            step_index: next.step_index,
            t: next.t,
            a1: state.g.wiener_norm(1.0, false),
            a1_hom: state.g.wiener_norm(1.0, true),
        });
    }
    Ok(next)
}

/// Per-state callback invoked on the initial state and after every accepted
/// step.
pub type Observer<'a> = Box<dyn FnMut(&SimState) + 'a>;

/// Integrate from `initial` to `cfg.t_end`. Observers see every accepted
/// state, including the initial one; on blow-up the error propagates after
/// the observers have seen everything up to the last finite state.
pub fn run(
    initial: SimState,
    cfg: &StepperConfig,
    rhs: &dyn NonstiffRhs,
    observers: &mut [Observer],
) -> Result<SimState> {
    cfg.validate()?;
    let mut state = initial;
    for obs in observers.iter_mut() {
        obs(&state);
    }
    // guard against a zero-length final step from rounding
    while state.t < cfg.t_end - 1e-14 * cfg.t_end.max(1.0) {
        state = step(&state, cfg, rhs)?;
        for obs in observers.iter_mut() {
            obs(&state);
        }
    }
    Ok(state)
}
