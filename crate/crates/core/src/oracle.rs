//! Independent brute-force reference implementations.
//!
//! Everything here exists to certify the fast paths: direct O(N²)
//! convolutions, antiderivative-based depth integrals and the closed-form
//! specializations of the forcing terms. None of it shares arithmetic with
//! the code it checks, and none of it is built for speed.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::spectral::SpectralField;

/// Outcome of one verification case.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub case: String,
    pub max_error: f64,
    pub tolerance: f64,
}

impl OracleReport {
    pub fn new(case: impl Into<String>, max_error: f64, tolerance: f64) -> Self {
        OracleReport {
            case: case.into(),
            max_error,
            tolerance,
        }
    }

    pub fn pass(&self) -> bool {
        self.max_error.is_finite() && self.max_error <= self.tolerance
    }
}

/// Exact double-loop convolution of two spectra, truncated to the shared
/// `k_max`. Refuses large grids: this is a test oracle, not a code path.
pub fn convolve_direct(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    if f.grid_size() != g.grid_size() {
        return Err(Error::GridMismatch {
            left: f.grid_size(),
            right: g.grid_size(),
        });
    }
    let kmax = f.k_max() as i64;
    if kmax > 64 {
        return Err(Error::invalid(format!(
            "convolve_direct is restricted to k_max ≤ 64, got {kmax}"
        )));
    }
    let mut coeffs = Vec::new();
    for k in 0..=kmax {
        let mut sum = Complex64::new(0.0, 0.0);
        for m in -kmax..=kmax {
            // f̂(m) ĝ(k-m); modes beyond the truncation are zero
            sum += f.mode(m) * g.mode(k - m);
        }
        coeffs.push((k as usize, sum));
    }
    // the k = 0 sum is real up to rounding for real fields
    let mean = coeffs[0].1.re;
    coeffs[0].1 = Complex64::new(mean, 0.0);
    SpectralField::from_mode_coeffs(f.grid_size(), &coeffs)
}

/// `∫_{-∞}^{0} e^{a y} sin y dy` / `cos y dy` from the antiderivative
/// `e^{ay}(a sin y - cos y)/(a² + 1)`; requires `a > 0`.
pub fn depth_integral_closed(a: f64, trig: Trig) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::invalid(format!(
            "closed-form depth integral diverges for a = {a}"
        )));
    }
    Ok(match trig {
        Trig::Sin => -1.0 / (a * a + 1.0),
        Trig::Cos => a / (a * a + 1.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trig {
    Sin,
    Cos,
}

/// Fourier coefficient `(1/2π)∫ f e^{-ikx} dx` by trapezoidal quadrature on
/// `n` points (exponentially accurate for smooth periodic `f`).
pub fn fourier_coeff_quadrature(f: impl Fn(f64) -> f64, k: i64, n: usize) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let x = -PI + 2.0 * PI * j as f64 / n as f64;
        let phase = Complex64::new(0.0, -(k as f64) * x).exp();
        sum += phase * f(x);
    }
    sum / n as f64
}

/// The four closed-form forcing terms of the depth-only equal-rates regime,
/// transcribed directly. `alpha_t = c_s - N₃ c_b t` is recomputed here.
pub struct ParticularClosedForms {
    pub k0: SpectralField,
    pub k1_tilde: SpectralField,
    pub k2_tilde: SpectralField,
    pub i_tilde: SpectralField,
}

pub fn particular_closed_forms(
    g: &SpectralField,
    g0: &SpectralField,
    t: f64,
    p: &ModelParams,
    c_b: f64,
    c_s: f64,
) -> Result<ParticularClosedForms> {
    let n = p.n2;
    let decay = (-n * t).exp();
    let alpha_t = c_s - p.n3 * c_b * t;
    let diff = g.sub(g0)?;

    // K⁰(0,t) = -(e^{-Nt}/2) ρ (α(t) - c_B), a constant field.
    let k0 = SpectralField::constant(g.grid_size(), -0.5 * decay * p.rho * (alpha_t - c_b))?;

    // K̃₁ = 2θ e^{-Nt} α (g - 𝑔) + e^{-Nt} α (2θ - ρ) t + ρ e^{-Nt} t c_B
    let k1_tilde = diff
        .scale(2.0 * p.theta * decay * alpha_t)
        .add(&SpectralField::constant(
            g.grid_size(),
            decay * alpha_t * (2.0 * p.theta - p.rho) * t + p.rho * decay * t * c_b,
        )?)?;

    // K̃₂ = 2θ e^{-Nt} α ((g - 𝑔) + t)
    let k2_tilde = diff
        .add(&SpectralField::constant(g.grid_size(), t)?)?
        .scale(2.0 * p.theta * decay * alpha_t);

    // Ĩ = -(ρ/2) α e^{-Nt} g,₁₁
    let i_tilde = g.derivative(2).scale(-0.5 * p.rho * alpha_t * decay);

    Ok(ParticularClosedForms {
        k0,
        k1_tilde,
        k2_tilde,
        i_tilde,
    })
}

/// The built-in verification suite behind the CLI's `--verify` flag: every
/// case compares a fast path against one of the independent routes above.
pub fn verify_suite() -> Vec<OracleReport> {
    let mut reports = Vec::new();
    let grid = 32;

    // spectral round trip against quadrature
    {
        let xs = crate::spectral::collocation_points(64);
        let vals: Vec<f64> = xs.iter().map(|x| x.sin().exp()).collect();
        let f = SpectralField::from_samples(&vals).expect("valid samples");
        let err = (0..=10i64)
            .map(|k| {
                (f.mode(k) - fourier_coeff_quadrature(|x| x.sin().exp(), k, 4096)).norm()
            })
            .fold(0.0, f64::max);
        reports.push(OracleReport::new("transform vs trapezoid quadrature", err, 1e-12));
    }

    // operator identities
    {
        let g = SpectralField::cosine(grid, 1, 0.7)
            .and_then(|a| a.add(&SpectralField::sine(grid, 4, 0.4)?))
            .expect("valid field");
        let lambda = g.lambda_pow(1.0).expect("valid order");
        let hdx = g.derivative(1).hilbert();
        reports.push(OracleReport::new(
            "Lambda equals Hilbert of derivative",
            lambda.max_mode_distance(&hdx),
            1e-13,
        ));
        let hh = g.hilbert().hilbert();
        let mean_free = g
            .sub(&SpectralField::constant(grid, g.mean()).expect("constant"))
            .expect("same grid")
            .scale(-1.0);
        reports.push(OracleReport::new(
            "Hilbert squared is minus the mean-free part",
            hh.max_mode_distance(&mean_free),
            1e-13,
        ));
    }

    // dealiased product vs direct convolution
    {
        let f = SpectralField::from_mode_coeffs(
            18,
            &[
                (1, Complex64::new(0.31, -0.11)),
                (3, Complex64::new(-0.07, 0.19)),
                (6, Complex64::new(0.02, 0.05)),
            ],
        )
        .expect("valid modes");
        let g = SpectralField::from_mode_coeffs(
            18,
            &[
                (2, Complex64::new(-0.23, 0.04)),
                (5, Complex64::new(0.12, 0.08)),
            ],
        )
        .expect("valid modes");
        let fast = f.multiply(&g).expect("same grid");
        let slow = convolve_direct(&f, &g).expect("small grid");
        reports.push(OracleReport::new(
            "dealiased product vs direct convolution",
            fast.max_mode_distance(&slow),
            1e-13,
        ));
    }

    // commutator annihilation on single modes
    {
        let zero = SpectralField::zeros(64).expect("grid");
        let err = [1usize, 2, 3]
            .iter()
            .flat_map(|&k| [0.1, 1.0].map(|amp| (k, amp)))
            .map(|(k, amp)| {
                let g = SpectralField::cosine(64, k, amp).expect("valid");
                crate::model::commutator_term(&g)
                    .expect("valid")
                    .max_mode_distance(&zero)
            })
            .fold(0.0, f64::max);
        reports.push(OracleReport::new(
            "commutator annihilates single modes",
            err,
            1e-13,
        ));
    }

    // closed-form depth integrals vs adaptive quadrature
    {
        let b = crate::profile::DepthProfile::exp_sine(1.0).expect("amplitude");
        let s = crate::profile::DepthProfile::exp_sine(1.0).expect("amplitude");
        let pair = crate::forcing::ProfilePair::new(&s, &b);
        let kernel = crate::forcing::DepthKernel::profile_b();
        let mut err: f64 = 0.0;
        for (k, expect) in [
            (0i64, depth_integral_closed(1.0, Trig::Sin).expect("a > 0")),
            (2, depth_integral_closed(3.0, Trig::Sin).expect("a > 0")),
        ] {
            let got = pair.depth_integral(&kernel, k).expect("decaying kernel");
            err = err.max((got - expect).abs());
        }
        reports.push(OracleReport::new(
            "semi-infinite quadrature vs antiderivative",
            err,
            1e-10,
        ));
    }

    // general forcing vs the transcribed closed forms
    {
        let p = ModelParams::with_equal_decay(0.2, 1.0, 0.9, 1.3, 1.0, 1.0).expect("params");
        let (c_b, c_s) = (1.0, 2.0);
        let s = crate::profile::DepthProfile::exp_sine(c_s).expect("amplitude");
        let b = crate::profile::DepthProfile::exp_sine(c_b).expect("amplitude");
        let g0 = SpectralField::cosine(grid, 1, 0.05).expect("valid");
        let g = SpectralField::cosine(grid, 2, 0.08)
            .and_then(|f| f.add(&g0))
            .expect("valid");
        let t = 0.7;
        let forms = particular_closed_forms(&g, &g0, t, &p, c_b, c_s).expect("closed forms");
        let k0 = crate::forcing::k0_general(&s, &b, &p, t, grid).expect("quadrature");
        reports.push(OracleReport::new(
            "order-zero forcing vs closed form",
            k0.max_mode_distance(&forms.k0),
            1e-8,
        ));
        let k1 = crate::forcing::k1_tilde_1(&g, &g0, &s, &b, &p, t).expect("quadrature");
        reports.push(OracleReport::new(
            "first order-one group vs closed form",
            k1.max_mode_distance(&forms.k1_tilde),
            1e-8,
        ));
        let k2 = crate::forcing::k2_tilde_1(&g, &g0, &s, &b, &p, t).expect("trace");
        reports.push(OracleReport::new(
            "second order-one group vs closed form",
            k2.max_mode_distance(&forms.k2_tilde),
            1e-8,
        ));
        let it = crate::forcing::i_tilde(&g, &s, &b, &p, t, g.k_max()).expect("sums");
        reports.push(OracleReport::new(
            "interface-curvature sum vs closed form",
            it.max_mode_distance(&forms.i_tilde),
            1e-8,
        ));
        let pressure =
            crate::forcing::pressure_order0(&g0, &s, &b, &p, t, 0.0).expect("quadrature");
        let curvature = g0.derivative(2).scale(-p.eta);
        reports.push(OracleReport::new(
            "pressure trace vs curvature boundary data",
            pressure.max_mode_distance(&curvature),
            1e-8,
        ));
    }

    reports
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn closed_depth_integrals() {
        assert_abs_diff_eq!(depth_integral_closed(1.0, Trig::Sin).unwrap(), -0.5);
        assert_abs_diff_eq!(depth_integral_closed(1.0, Trig::Cos).unwrap(), 0.5);
        assert_abs_diff_eq!(depth_integral_closed(3.0, Trig::Sin).unwrap(), -0.1);
        assert!(depth_integral_closed(0.0, Trig::Sin).is_err());
        assert!(depth_integral_closed(-1.0, Trig::Cos).is_err());
    }

    #[test]
    fn convolution_oracle_identity_and_product_to_sum() {
        let one = SpectralField::constant(16, 1.0).unwrap();
        let g = SpectralField::cosine(16, 2, 0.3).unwrap();
        assert!(convolve_direct(&one, &g).unwrap().max_mode_distance(&g) < 1e-15);

        let c = SpectralField::cosine(16, 1, 1.0).unwrap();
        let sq = convolve_direct(&c, &c).unwrap();
        let expect = SpectralField::constant(16, 0.5)
            .unwrap()
            .add(&SpectralField::cosine(16, 2, 0.5).unwrap())
            .unwrap();
        assert!(sq.max_mode_distance(&expect) < 1e-15);
    }

    #[test]
    fn convolution_oracle_refuses_large_grids() {
        let f = SpectralField::zeros(256).unwrap();
        assert!(convolve_direct(&f, &f).is_err());
    }

    #[test]
    fn closed_forms_degenerate_cases() {
        let p = ModelParams::with_equal_decay(0.1, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        let g = SpectralField::cosine(32, 1, 0.2).unwrap();
        // t = 0 and g = 𝑔: both order-one tilde terms vanish
        let f = particular_closed_forms(&g, &g, 0.0, &p, 1.0, 2.0).unwrap();
        assert!(f.k1_tilde.wiener_norm(0.0, false) < 1e-15);
        assert!(f.k2_tilde.wiener_norm(0.0, false) < 1e-15);
        // θ = 0 kills K̃₂
        let p0 = ModelParams::with_equal_decay(0.1, 1.0, 0.0, 1.0, 1.0, 1.0).unwrap();
        let g0 = SpectralField::cosine(32, 1, 0.1).unwrap();
        let f0 = particular_closed_forms(&g, &g0, 0.7, &p0, 1.0, 2.0).unwrap();
        assert!(f0.k2_tilde.wiener_norm(0.0, false) < 1e-15);
    }

    #[test]
    fn verify_suite_is_green() {
        for report in verify_suite() {
            assert!(
                report.pass(),
                "{}: {:.3e} > {:.1e}",
                report.case,
                report.max_error,
                report.tolerance
            );
        }
    }

    #[test]
    fn closed_form_i_tilde_single_mode() {
        // ρ = 2, α(t) = 1, e^{-Nt} = 1 at t = 0 with c_s = 1: Ĩ = cos x
        let p = ModelParams::with_equal_decay(0.1, 1.0, 1.0, 2.0, 1.0, 1.0).unwrap();
        let g = SpectralField::cosine(32, 1, 1.0).unwrap();
        let f = particular_closed_forms(&g, &g, 0.0, &p, 1.0, 1.0).unwrap();
        let expect = SpectralField::cosine(32, 1, 1.0).unwrap();
        assert!(f.i_tilde.max_mode_distance(&expect) < 1e-14);
    }
}
