//! Time-dependent forcing produced by the nutrient and inhibitor depth
//! profiles: the order-zero term `K⁰`, the order-one terms `K̃₁`, `K̃₂`, `Ĩ`
//! and the layered pressure reconstruction.
//!
//! All depth data is depth-only (profiles of `x₂`), so the semi-infinite
//! integrals act at the data's zeroth horizontal mode while the interface's
//! spectral structure rides along as coefficients. The combined order-one
//! forcing enters the evolution equation as `K̃ = Ĩ - K̃₁ + K̃₂`, which is the
//! assembly under which the general evaluators reduce exactly to the
//! depth-only closed forms.

pub mod separable;


use num_complex::Complex64;

pub use separable::{
    q_alpha, r1_operator, CustomKernel, DepthCache, DepthKernel, KernelSource, ProfilePair,
    SeparableField,
};

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::profile::DepthProfile;
use crate::quad;
use crate::spectral::SpectralField;

/// Coefficient of 𝓑 inside the combined kernel
/// `𝓛(·,t) = 𝓢 + c_B(t)·𝓑`, i.e. `-N₃ (e^{(N₂-N₁)t} - 1)/(N₂-N₁)`,
/// with the series branch when `|N₂-N₁|·t` is tiny.
pub fn l_b_coefficient(p: &ModelParams, t: f64) -> f64 {
    let gap = p.n2 - p.n1;
    if p.decay_gap_is_degenerate(t) {
        let gt = gap * t;
        -p.n3 * t * (1.0 + gt / 2.0 + gt * gt / 6.0)
    } else {
        -p.n3 * (gap * t).exp_m1() / gap
    }
}

/// The symbolic depth kernel of `𝓛(·, t)`.
pub fn l_kernel(p: &ModelParams, t: f64) -> DepthKernel {
    DepthKernel::profile_s().add(&DepthKernel::profile_b().scale(l_b_coefficient(p, t)))
}

/// `𝓛(x₂, t)` and its depth derivatives for explicit profiles.
#[derive(Clone, Copy)]
pub struct KernelL<'a> {
    pub s_profile: &'a DepthProfile,
    pub b_profile: &'a DepthProfile,
    pub params: &'a ModelParams,
}

impl<'a> KernelL<'a> {
    pub fn value(&self, x2: f64, t: f64) -> f64 {
        self.derivative(0, x2, t)
    }

    pub fn derivative(&self, n: u32, x2: f64, t: f64) -> f64 {
        self.s_profile.derivative(n, x2)
            + l_b_coefficient(self.params, t) * self.b_profile.derivative(n, x2)
    }
}

/// Convenience form of [`KernelL`] as a single call.
pub fn kernel_l(
    s: &DepthProfile,
    b: &DepthProfile,
    p: &ModelParams,
    x2: f64,
    t: f64,
) -> f64 {
    KernelL {
        s_profile: s,
        b_profile: b,
        params: p,
    }
    .value(x2, t)
}

/// The secular coefficient
/// `M(t) = N₃(1-α)/(N₂-N₁) e^{-N₂t} [t e^{(N₂-N₁)t} - (e^{(N₂-N₁)t}-1)/(N₂-N₁)]`,
/// with limit `N₃(1-α) t²/2 · e^{-N₂t}` as `N₁ → N₂`.
pub fn m_of_t(p: &ModelParams, t: f64) -> f64 {
    let gap = p.n2 - p.n1;
    let front = p.n3 * (1.0 - p.alpha_ratio) * (-p.n2 * t).exp();
    if p.decay_gap_is_degenerate(t) {
        let gt = gap * t;
        front * t * t * (0.5 + gt / 3.0 + gt * gt / 8.0)
    } else {
        front * (t * (gap * t).exp() - (gap * t).exp_m1() / gap) / gap
    }
}

/// `w⁰(·,t) = θ ΔS⁰ - ρ (S⁰ - τ B⁰)`, the source of the order-zero pressure
/// problem, as a symbolic depth kernel.
pub fn w0_kernel(p: &ModelParams, t: f64) -> DepthKernel {
    let s0_decay = (-p.n2 * t).exp();
    let b0_decay = (-p.n1 * t).exp();
    let l = l_kernel(p, t);
    l.derivative(2)
        .scale(p.theta * s0_decay)
        .add(&l.scale(-p.rho * s0_decay))
        .add(&DepthKernel::profile_b().scale(p.rho * p.tau * b0_decay))
}

/// Order-zero forcing
/// `K⁰(t) = -θ∫e^{-N₂t}Δ𝓛 + ρ∫e^{-N₂t}(𝓛 - τe^{(N₂-N₁)t}𝓑) + θe^{-N₂t}𝓛,₂(0,t)`,
/// a constant field for depth-only data. The first and third terms cancel
/// analytically; both are still computed, which is what makes the
/// θ-independence of the result a meaningful check.
pub fn k0_general(
    s: &DepthProfile,
    b: &DepthProfile,
    p: &ModelParams,
    t: f64,
    grid_size: usize,
) -> Result<SpectralField> {
    k0_general_with(&ProfilePair::new(s, b), p, t, grid_size)
}

fn k0_general_with(
    pair: &ProfilePair,
    p: &ModelParams,
    t: f64,
    grid_size: usize,
) -> Result<SpectralField> {
    let decay = (-p.n2 * t).exp();
    let l = l_kernel(p, t);
    let j_lap_l = pair.depth_integral(&l.derivative(2), 0)?;
    let j_l = pair.depth_integral(&l, 0)?;
    let j_b = pair.depth_integral(&DepthKernel::profile_b(), 0)?;
    let l_trace = pair.kernel_value(&l.derivative(1), 0, 0.0);
    let value = -p.theta * decay * j_lap_l
        + p.rho * decay * (j_l - p.tau * ((p.n2 - p.n1) * t).exp() * j_b)
        + p.theta * decay * l_trace;
    SpectralField::constant(grid_size, value)
}

/// First order-one group: the six depth integrals of `Q`- and `R`-operator
/// images of `𝓛` and `𝓑`.
pub fn k1_tilde_1(
    g: &SpectralField,
    g0: &SpectralField,
    s: &DepthProfile,
    b: &DepthProfile,
    p: &ModelParams,
    t: f64,
) -> Result<SpectralField> {
    k1_tilde_with(&ProfilePair::new(s, b), g, g0, p, t)
}

fn k1_tilde_with(
    pair: &ProfilePair,
    g: &SpectralField,
    g0: &SpectralField,
    p: &ModelParams,
    t: f64,
) -> Result<SpectralField> {
    let grid = g.grid_size();
    let decay2 = (-p.n2 * t).exp();
    let decay1 = (-p.n1 * t).exp();
    let m_t = m_of_t(p, t);
    let l_field = SeparableField::depth_only(grid, l_kernel(p, t))?;
    let b_field = SeparableField::depth_only(grid, DepthKernel::profile_b())?;

    // θ e^{-N₂t} ∫ Q₁[g](Δ𝓛)
    let t1 = q_alpha(g, g0, &l_field.laplacian(), 1.0, t)?
        .depth_integral(pair)?
        .scale(p.theta * decay2);
    // θ M(t) ∫ Δ²𝓑
    let j_b4 = pair.depth_integral(&DepthKernel::profile_b().derivative(4), 0)?;
    let t2 = SpectralField::constant(grid, p.theta * m_t * j_b4)?;
    // -ρ e^{-N₂t} ∫ Q₁[g](𝓛)
    let t3 = q_alpha(g, g0, &l_field, 1.0, t)?
        .depth_integral(pair)?
        .scale(-p.rho * decay2);
    // -ρ M(t) ∫ Δ𝓑
    let j_b2 = pair.depth_integral(&DepthKernel::profile_b().derivative(2), 0)?;
    let t4 = SpectralField::constant(grid, -p.rho * m_t * j_b2)?;
    // ρ τ e^{-N₁t} ∫ Q_α[g](𝓑)
    let t5 = q_alpha(g, g0, &b_field, p.alpha_ratio, t)?
        .depth_integral(pair)?
        .scale(p.rho * p.tau * decay1);
    // -e^{-N₂t} ∫ R₁[g](𝓛)
    let t6 = r1_operator(g, &l_field)?
        .depth_integral(pair)?
        .scale(-decay2);

    t1.add(&t2)?.add(&t3)?.add(&t4)?.add(&t5)?.add(&t6)
}

/// Second order-one group, a pure boundary trace:
/// `K̃₂ = θe^{-N₂t} Q₁[g](𝓛,₂)|₀ + θM(t)(Δ𝓑),₂(0) - θ g,₁ e^{-N₂t} 𝓛,₁(0,t)`.
pub fn k2_tilde_1(
    g: &SpectralField,
    g0: &SpectralField,
    s: &DepthProfile,
    b: &DepthProfile,
    p: &ModelParams,
    t: f64,
) -> Result<SpectralField> {
    k2_tilde_with(&ProfilePair::new(s, b), g, g0, p, t)
}

fn k2_tilde_with(
    pair: &ProfilePair,
    g: &SpectralField,
    g0: &SpectralField,
    p: &ModelParams,
    t: f64,
) -> Result<SpectralField> {
    let grid = g.grid_size();
    let decay2 = (-p.n2 * t).exp();
    let m_t = m_of_t(p, t);
    let l_field = SeparableField::depth_only(grid, l_kernel(p, t))?;

    let part1 = q_alpha(g, g0, &l_field.dy(), 1.0, t)?
        .trace(pair, 0.0)?
        .scale(p.theta * decay2);
    let b3_trace = pair.kernel_value(&DepthKernel::profile_b().derivative(3), 0, 0.0);
    let part2 = SpectralField::constant(grid, p.theta * m_t * b3_trace)?;
    // depth-only data has no horizontal variation, so 𝓛,₁ ≡ 0; kept in the
    // assembly so the structure matches the model term for term.
    let l_x_trace = l_field.dx1().trace(pair, 0.0)?;
    let part3 = g
        .derivative(1)
        .multiply(&l_x_trace)?
        .scale(-p.theta * decay2);

    part1.add(&part2)?.add(&part3)
}

/// Interface-curvature forcing `Ĩ` as the truncated double sum over the
/// output mode `k` and the data mode `m`. Depth-only data carries weight only
/// at `m = 0`, where the trace functional of the order-zero pressure reduces
/// by parts to `-∫ y·(θΔS⁰ - ρS⁰) dy`; on exp-sine data this yields
/// `-(ρ/2)α(t)e^{-Nt} g,₁₁`.
pub fn i_tilde(
    g: &SpectralField,
    s: &DepthProfile,
    b: &DepthProfile,
    p: &ModelParams,
    t: f64,
    mode_cutoff: usize,
) -> Result<SpectralField> {
    i_tilde_with(&ProfilePair::new(s, b), g, p, t, mode_cutoff)
}

fn i_tilde_with(
    pair: &ProfilePair,
    g: &SpectralField,
    p: &ModelParams,
    t: f64,
    mode_cutoff: usize,
) -> Result<SpectralField> {
    if mode_cutoff > g.k_max() {
        return Err(Error::invalid(format!(
            "mode_cutoff {} exceeds k_max {}",
            mode_cutoff,
            g.k_max()
        )));
    }
    let decay2 = (-p.n2 * t).exp();
    let l = l_kernel(p, t);
    // -∫ y · (θ 𝓛,₂₂ - ρ 𝓛) e^{-N₂t} dy
    let trace_fn = decay2
        * (p.rho * pair.depth_integral_y_weighted(&l)?
            - p.theta * pair.depth_integral_y_weighted(&l.derivative(2))?);
    let cutoff = mode_cutoff as i64;
    let mut coeffs = Vec::with_capacity(g.k_max() + 1);
    for k in 0..=g.k_max() as i64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for m in -cutoff..=cutoff {
            // only the data's zeroth mode carries weight for depth-only data
            let t_m = if m == 0 { trace_fn } else { 0.0 };
            acc += ((k * k - m * m) as f64) * t_m * g.mode(k - m);
        }
        if k == 0 {
            acc.im = 0.0;
        }
        coeffs.push((k as usize, acc));
    }
    SpectralField::from_mode_coeffs(g.grid_size(), &coeffs)
}

/// Order-zero pressure slice `P⁰(·, x₂, t)`.
///
/// Mode zero solves `u,₂₂ = w⁰` with zero interface trace and a bounded
/// derivative at depth; the nonzero modes carry the surface-tension boundary
/// data `η|k|²ĝ₀(k) e^{|k|x₂}` (depth-only data contributes nothing there).
/// At `x₂ = 0` the trace is `-η g₀,₁₁`.
pub fn pressure_order0(
    g0: &SpectralField,
    s: &DepthProfile,
    b: &DepthProfile,
    p: &ModelParams,
    t: f64,
    x2: f64,
) -> Result<SpectralField> {
    if x2 > 0.0 {
        return Err(Error::invalid(format!("pressure depth must be ≤ 0, got {x2}")));
    }
    let pair = ProfilePair::new(s, b);
    let w = w0_kernel(p, t);
    let (rate, bound) = pair.kernel_decay(&w);

    // k = 0: u(x₂) = ∫₀^{x₂} U(s) ds with U(s) = ∫_{-∞}^{s} w⁰.
    let antiderivative = |sdepth: f64| -> Result<f64> {
        quad::integrate_semi_infinite(
            |y| pair.kernel_value(&w, 0, y + sdepth),
            0.0,
            rate,
            bound * (rate * sdepth).exp(),
            separable::DEPTH_QUAD_TOL,
        )
    };
    let mut inner_err = None;
    let mean = quad::integrate(
        |sdepth| match antiderivative(sdepth) {
            Ok(v) => v,
            Err(e) => {
                inner_err = Some(e);
                f64::NAN
            }
        },
        0.0,
        x2,
        1e-10,
    );
    if let Some(e) = inner_err {
        return Err(e);
    }
    let mean = mean?;

    let mut coeffs = vec![(0usize, Complex64::new(mean, 0.0))];
    for k in 1..=g0.k_max() {
        let kk = k as f64;
        let value = g0.mode(k as i64) * (p.eta * kk * kk * (kk * x2).exp());
        coeffs.push((k, value));
    }
    SpectralField::from_mode_coeffs(g0.grid_size(), &coeffs)
}

/// Which assembly of the forcing a bundle evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForcingMode {
    /// Quadrature over the depth kernels.
    General,
    /// Depth-only equal-rates closed forms.
    Particular,
}

/// Precomputed forcing evaluators bound to one data set. Depth integrals are
/// cached; the cache is shared behind a read-write lock so concurrent
/// evaluations on the same bundle are safe.
pub struct ForcingBundle {
    mode: ForcingMode,
    params: ModelParams,
    s: DepthProfile,
    b: DepthProfile,
    g0: SpectralField,
    cache: DepthCache,
}

impl ForcingBundle {
    pub fn new(
        mode: ForcingMode,
        params: ModelParams,
        s: DepthProfile,
        b: DepthProfile,
        g0: SpectralField,
    ) -> Result<Self> {
        params.validate()?;
        if mode == ForcingMode::Particular {
            check_particular_regime(&params, &s, &b)?;
        }
        Ok(ForcingBundle {
            mode,
            params,
            s,
            b,
            g0,
            cache: DepthCache::default(),
        })
    }

    pub fn mode(&self) -> ForcingMode {
        self.mode
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn initial_interface(&self) -> &SpectralField {
        &self.g0
    }

    pub fn profiles(&self) -> (&DepthProfile, &DepthProfile) {
        (&self.s, &self.b)
    }

    fn pair(&self) -> ProfilePair<'_> {
        ProfilePair::with_cache(&self.s, &self.b, &self.cache)
    }

    /// Exp-sine amplitudes `(c_B, c_S)`; available in particular mode.
    pub fn amplitudes(&self) -> Result<(f64, f64)> {
        match (self.b.exp_sine_amplitude(), self.s.exp_sine_amplitude()) {
            (Some(cb), Some(cs)) => Ok((cb, cs)),
            _ => Err(Error::invalid(
                "closed-form forcing needs exp-sine profiles",
            )),
        }
    }

    /// `K⁰(·, t)`.
    pub fn k0(&self, t: f64) -> Result<SpectralField> {
        match self.mode {
            ForcingMode::General => {
                k0_general_with(&self.pair(), &self.params, t, self.g0.grid_size())
            }
            ForcingMode::Particular => {
                let (cb, cs) = self.amplitudes()?;
                closed::k0(&self.params, t, cb, cs, self.g0.grid_size())
            }
        }
    }

    pub fn k1_tilde(&self, g: &SpectralField, t: f64) -> Result<SpectralField> {
        match self.mode {
            ForcingMode::General => k1_tilde_with(&self.pair(), g, &self.g0, &self.params, t),
            ForcingMode::Particular => {
                let (cb, cs) = self.amplitudes()?;
                closed::k1_tilde(g, &self.g0, &self.params, t, cb, cs)
            }
        }
    }

    pub fn k2_tilde(&self, g: &SpectralField, t: f64) -> Result<SpectralField> {
        match self.mode {
            ForcingMode::General => k2_tilde_with(&self.pair(), g, &self.g0, &self.params, t),
            ForcingMode::Particular => {
                let (cb, cs) = self.amplitudes()?;
                closed::k2_tilde(g, &self.g0, &self.params, t, cb, cs)
            }
        }
    }

    pub fn i_tilde(&self, g: &SpectralField, t: f64) -> Result<SpectralField> {
        match self.mode {
            ForcingMode::General => {
                i_tilde_with(&self.pair(), g, &self.params, t, g.k_max())
            }
            ForcingMode::Particular => {
                let (cb, cs) = self.amplitudes()?;
                closed::i_tilde(g, &self.params, t, cb, cs)
            }
        }
    }

    /// Combined order-one forcing `K̃ = Ĩ - K̃₁ + K̃₂`.
    pub fn k_tilde(&self, g: &SpectralField, t: f64) -> Result<SpectralField> {
        let i = self.i_tilde(g, t)?;
        let k1 = self.k1_tilde(g, t)?;
        let k2 = self.k2_tilde(g, t)?;
        i.sub(&k1)?.add(&k2)
    }

    pub fn pressure_order0(&self, t: f64, x2: f64) -> Result<SpectralField> {
        pressure_order0(&self.g0, &self.s, &self.b, &self.params, t, x2)
    }
}

pub(crate) fn check_particular_regime(
    params: &ModelParams,
    s: &DepthProfile,
    b: &DepthProfile,
) -> Result<()> {
    if params.n1 != params.n2 {
        return Err(Error::invalid(format!(
            "the depth-only closed forms need N₁ = N₂, got {} and {}",
            params.n1, params.n2
        )));
    }
    if params.alpha_ratio != 1.0 {
        return Err(Error::invalid(format!(
            "the depth-only closed forms need a unit diffusivity ratio, got {}",
            params.alpha_ratio
        )));
    }
    if params.tau != 1.0 {
        return Err(Error::invalid(format!(
            "the depth-only closed forms fix tau = 1, got {}",
            params.tau
        )));
    }
    if s.exp_sine_amplitude().is_none() || b.exp_sine_amplitude().is_none() {
        return Err(Error::invalid(
            "the depth-only closed forms need exp-sine profiles",
        ));
    }
    Ok(())
}

/// Closed-form forcing of the depth-only equal-rates regime. These feed the
/// particular-mode bundle and the printed right-hand side of the model.
pub mod closed {
    use super::*;

    /// `α(t) = c_S - N₃ c_B t`.
    pub fn alpha_t(p: &ModelParams, t: f64, c_b: f64, c_s: f64) -> f64 {
        c_s - p.n3 * c_b * t
    }

    /// `K⁰(t) = -(e^{-Nt}/2) ρ (α(t) - c_B)`.
    pub fn k0(p: &ModelParams, t: f64, c_b: f64, c_s: f64, grid: usize) -> Result<SpectralField> {
        let a = alpha_t(p, t, c_b, c_s);
        SpectralField::constant(grid, -0.5 * (-p.n2 * t).exp() * p.rho * (a - c_b))
    }

    /// `K̃₁ = 2θe^{-Nt}α(g - 𝑔) + e^{-Nt}α(2θ-ρ)t + ρe^{-Nt}tc_B`.
    pub fn k1_tilde(
        g: &SpectralField,
        g0: &SpectralField,
        p: &ModelParams,
        t: f64,
        c_b: f64,
        c_s: f64,
    ) -> Result<SpectralField> {
        let a = alpha_t(p, t, c_b, c_s);
        let decay = (-p.n2 * t).exp();
        g.sub(g0)?
            .scale(2.0 * p.theta * decay * a)
            .add(&SpectralField::constant(
                g.grid_size(),
                decay * a * (2.0 * p.theta - p.rho) * t + p.rho * decay * t * c_b,
            )?)
    }

    /// `K̃₂ = 2θe^{-Nt}α((g - 𝑔) + t)`.
    pub fn k2_tilde(
        g: &SpectralField,
        g0: &SpectralField,
        p: &ModelParams,
        t: f64,
        c_b: f64,
        c_s: f64,
    ) -> Result<SpectralField> {
        let a = alpha_t(p, t, c_b, c_s);
        let decay = (-p.n2 * t).exp();
        let shifted = g.sub(g0)?.add(&SpectralField::constant(g.grid_size(), t)?)?;
        Ok(shifted.scale(2.0 * p.theta * decay * a))
    }

    /// `Ĩ = -(ρ/2) α(t) e^{-Nt} g,₁₁`.
    pub fn i_tilde(
        g: &SpectralField,
        p: &ModelParams,
        t: f64,
        c_b: f64,
        c_s: f64,
    ) -> Result<SpectralField> {
        let a = alpha_t(p, t, c_b, c_s);
        Ok(g.derivative(2).scale(-0.5 * p.rho * a * (-p.n2 * t).exp()))
    }
}
