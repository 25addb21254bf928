//! Dimensionless parameter groups of the model and the map from laboratory
//! rates to them.

use crate::error::{Error, Result};

/// Tolerance for the vascular-balance groups that the asymptotic regime
/// requires to vanish.
const BALANCE_TOL: f64 = 1e-10;

/// All dimensionless groups entering the evolution equation.
///
/// The regime built here has `m1 = m2 = omega = 0`; the constructor rejects
/// anything else.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Aspect ratio ε = H/L ≥ 0.
    pub eps: f64,
    /// Surface tension group η > 0.
    pub eta: f64,
    /// Chemotaxis group θ ≥ 0.
    pub theta: f64,
    /// Proliferation group ρ ≥ 0.
    pub rho: f64,
    /// Inhibitor kill rate τ ≥ 0.
    pub tau: f64,
    /// Inhibitor decay group N₁ > 0.
    pub n1: f64,
    /// Nutrient decay group N₂ > 0.
    pub n2: f64,
    /// Cross-coupling N₃ ≥ 0.
    pub n3: f64,
    /// Diffusivity ratio D_i/D_n > 0.
    pub alpha_ratio: f64,
    /// Vascular balance groups, constrained to zero in this regime.
    pub omega: f64,
    pub m1: f64,
    pub m2: f64,
}

impl ModelParams {
    /// Validate every invariant and return the parameter set.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        eps: f64,
        eta: f64,
        theta: f64,
        rho: f64,
        tau: f64,
        n1: f64,
        n2: f64,
        n3: f64,
        alpha_ratio: f64,
    ) -> Result<Self> {
        let p = ModelParams {
            eps,
            eta,
            theta,
            rho,
            tau,
            n1,
            n2,
            n3,
            alpha_ratio,
            omega: 0.0,
            m1: 0.0,
            m2: 0.0,
        };
        p.validate()?;
        Ok(p)
    }

    /// Convenience constructor for the equal-rates case N₁ = N₂ = N.
    pub fn with_equal_decay(
        eps: f64,
        eta: f64,
        theta: f64,
        rho: f64,
        n: f64,
        n3: f64,
    ) -> Result<Self> {
        ModelParams::new(eps, eta, theta, rho, 1.0, n, n, n3, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("eps", self.eps),
            ("eta", self.eta),
            ("theta", self.theta),
            ("rho", self.rho),
            ("tau", self.tau),
            ("n1", self.n1),
            ("n2", self.n2),
            ("n3", self.n3),
            ("alpha_ratio", self.alpha_ratio),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(Error::invalid(format!("{name} must be finite, got {v}")));
            }
        }
        if self.eta <= 0.0 {
            return Err(Error::invalid(format!("eta must be > 0, got {}", self.eta)));
        }
        if self.eps < 0.0 {
            return Err(Error::invalid(format!("eps must be ≥ 0, got {}", self.eps)));
        }
        for (name, v) in [("theta", self.theta), ("rho", self.rho), ("tau", self.tau), ("n3", self.n3)] {
            if v < 0.0 {
                return Err(Error::invalid(format!("{name} must be ≥ 0, got {v}")));
            }
        }
        for (name, v) in [("n1", self.n1), ("n2", self.n2), ("alpha_ratio", self.alpha_ratio)] {
            if v <= 0.0 {
                return Err(Error::invalid(format!("{name} must be > 0, got {v}")));
            }
        }
        for (name, v) in [("omega", self.omega), ("m1", self.m1), ("m2", self.m2)] {
            if v.abs() > BALANCE_TOL {
                return Err(Error::invalid(format!(
                    "{name} must vanish in this regime, got {v:.3e}"
                )));
            }
        }
        Ok(())
    }

    /// Whether the two decay groups coincide closely enough at time `t`
    /// that the degenerate (series) branches of the kernels apply.
    pub fn decay_gap_is_degenerate(&self, t: f64) -> bool {
        ((self.n2 - self.n1) * t).abs() < 1e-6
    }
}

/// Laboratory-scale rates and lengths, to be collapsed into the
/// dimensionless groups.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionalRates {
    /// Nutrient / inhibitor diffusivities.
    pub d_n: f64,
    pub d_i: f64,
    /// Blood-tissue transfer rates.
    pub delta_n: f64,
    pub delta_i: f64,
    /// Consumption rates.
    pub lambda_n: f64,
    pub lambda_i: f64,
    /// Inhibitor action on the nutrient.
    pub gamma_n: f64,
    /// Chemotaxis coefficient.
    pub chi: f64,
    /// Mitosis threshold coefficient.
    pub mu: f64,
    /// Surface tension coefficient.
    pub nu: f64,
    /// Threshold concentration.
    pub sigma_tilde: f64,
    /// Boundary / vascular concentrations.
    pub sigma_d: f64,
    pub sigma_b: f64,
    pub beta_d: f64,
    pub beta_b: f64,
    /// Inhibitor kill rate (already dimensionless).
    pub tau: f64,
    /// Horizontal and vertical length scales.
    pub length_l: f64,
    pub height_h: f64,
}

/// Collapse laboratory rates into [`ModelParams`].
///
/// The balance groups `M₁`, `M₂`, `ω` are computed from the same data; if
/// the supplied rates do not put them at zero the regime assumption fails
/// and the conversion is rejected.
pub fn nondimensionalize(d: &DimensionalRates) -> Result<ModelParams> {
    for (name, v) in [
        ("d_n", d.d_n),
        ("length_l", d.length_l),
        ("height_h", d.height_h),
        ("sigma_tilde", d.sigma_tilde),
    ] {
        if !(v > 0.0) {
            return Err(Error::invalid(format!("{name} must be > 0, got {v}")));
        }
    }
    let lh = d.length_l * d.height_h;
    let eps = d.height_h / d.length_l;
    let alpha_ratio = d.d_i / d.d_n;
    let n1 = lh * (d.delta_i + d.lambda_i) / d.d_n;
    let n2 = lh * (d.delta_n + d.lambda_n) / d.d_n;
    let n3 = d.gamma_n * lh / d.d_n;
    let m1 = lh / (d.d_n * d.sigma_tilde) * (-(d.delta_i + d.lambda_i) * d.beta_d + d.delta_i * d.beta_b);
    let m2 = lh / (d.d_n * d.sigma_tilde)
        * (-d.sigma_d * (d.delta_n + d.lambda_n) + d.sigma_b * d.delta_n - d.gamma_n * d.beta_d);
    let theta = d.chi * d.sigma_tilde / d.d_n;
    let rho = d.mu * d.sigma_tilde * d.length_l.powi(2) / d.d_n;
    let omega = d.mu * d.length_l.powi(2) / d.d_n * (d.sigma_d - d.tau * d.beta_d - d.sigma_tilde);
    let eta = d.nu * d.height_h / (d.length_l.powi(2) * d.d_n);

    let p = ModelParams {
        eps,
        eta,
        theta,
        rho,
        tau: d.tau,
        n1,
        n2,
        n3,
        alpha_ratio,
        omega,
        m1,
        m2,
    };
    p.validate()?;
    Ok(p)
}
