//! Real periodic fields on the torus `[-π, π]` stored as truncated Fourier
//! coefficients, together with the Fourier-multiplier operators the model is
//! built from.
//!
//! Coefficients follow the analyst's convention
//! `ĝ(k) = (1/2π) ∫_𝕋 g(x) e^{-ikx} dx`, so a field reconstructs as
//! `g(x) = Σ_k ĝ(k) e^{ikx}`. Only the half spectrum `k = 0..=k_max` is
//! stored; negative modes are implied by Hermitian symmetry, which makes
//! real-valuedness a structural invariant rather than a runtime check. The
//! Nyquist mode of the collocation grid is always dropped.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;
use std::sync::Mutex;
use std::sync::OnceLock;

use crate::error::{Error, Result};

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
}

fn fft_forward(buf: &mut [Complex64]) {
    let fft = planner().lock().unwrap().plan_fft_forward(buf.len());
    fft.process(buf);
}

fn fft_inverse(buf: &mut [Complex64]) {
    let fft = planner().lock().unwrap().plan_fft_inverse(buf.len());
    fft.process(buf);
}

/// Collocation points `x_j = -π + 2πj/n` for an `n`-point grid.
pub fn collocation_points(grid_size: usize) -> Vec<f64> {
    (0..grid_size)
        .map(|j| -PI + 2.0 * PI * j as f64 / grid_size as f64)
        .collect()
}

/// A real-valued function on the torus, held as Fourier modes `ĝ(k)`,
/// `0 ≤ k ≤ k_max = grid_size/2 - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid_size: usize,
    modes: Vec<Complex64>,
}

impl SpectralField {
    /// The zero field on a grid of `grid_size` collocation points.
    pub fn zeros(grid_size: usize) -> Result<Self> {
        check_grid(grid_size)?;
        Ok(SpectralField {
            grid_size,
            modes: vec![Complex64::new(0.0, 0.0); grid_size / 2],
        })
    }

    /// Forward transform of real samples taken at [`collocation_points`].
    pub fn from_samples(values: &[f64]) -> Result<Self> {
        check_grid(values.len())?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("samples must be finite"));
        }
        let n = values.len();
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        fft_forward(&mut buf);
        // The grid starts at x = -π, so bin k carries a (-1)^k phase.
        let mut modes = Vec::with_capacity(n / 2);
        for k in 0..n / 2 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            modes.push(buf[k] * (sign / n as f64));
        }
        modes[0].im = 0.0;
        Ok(SpectralField {
            grid_size: n,
            modes,
        })
    }

    /// Build a field from explicit coefficients `(k, ĝ(k))` with `k ≥ 0`;
    /// negative modes follow by conjugation. `ĝ(0)` must be real.
    pub fn from_mode_coeffs(grid_size: usize, coeffs: &[(usize, Complex64)]) -> Result<Self> {
        let mut field = SpectralField::zeros(grid_size)?;
        for &(k, c) in coeffs {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::invalid(format!("coefficient for k = {k} not finite")));
            }
            if k > field.k_max() {
                return Err(Error::invalid(format!(
                    "mode {} beyond k_max = {}",
                    k,
                    field.k_max()
                )));
            }
            if k == 0 && c.im != 0.0 {
                return Err(Error::invalid("mean mode of a real field must be real"));
            }
            field.modes[k] = c;
        }
        Ok(field)
    }

    /// `a·cos(kx)` as a field.
    pub fn cosine(grid_size: usize, k: usize, amplitude: f64) -> Result<Self> {
        if k == 0 {
            return SpectralField::constant(grid_size, amplitude);
        }
        SpectralField::from_mode_coeffs(grid_size, &[(k, Complex64::new(amplitude / 2.0, 0.0))])
    }

    /// `a·sin(kx)` as a field (`ĝ(k) = -i a/2` for `k > 0`).
    pub fn sine(grid_size: usize, k: usize, amplitude: f64) -> Result<Self> {
        if k == 0 {
            return SpectralField::zeros(grid_size);
        }
        SpectralField::from_mode_coeffs(grid_size, &[(k, Complex64::new(0.0, -amplitude / 2.0))])
    }

    /// The constant field `c`.
    pub fn constant(grid_size: usize, c: f64) -> Result<Self> {
        SpectralField::from_mode_coeffs(grid_size, &[(0, Complex64::new(c, 0.0))])
    }

    /// Inverse transform back to samples at [`collocation_points`].
    pub fn to_samples(&self) -> Vec<f64> {
        let n = self.grid_size;
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for (k, &c) in self.modes.iter().enumerate() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            buf[k] = c * sign;
            if k > 0 {
                buf[n - k] = (c * sign).conj();
            }
        }
        fft_inverse(&mut buf);
        buf.into_iter().map(|c| c.re).collect()
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    /// Largest retained wavenumber, `grid_size/2 - 1`.
    pub fn k_max(&self) -> usize {
        self.grid_size / 2 - 1
    }

    /// Coefficient `ĝ(k)` for any integer `k` (conjugated for `k < 0`,
    /// zero beyond the truncation).
    pub fn mode(&self, k: i64) -> Complex64 {
        let a = k.unsigned_abs() as usize;
        if a > self.k_max() {
            return Complex64::new(0.0, 0.0);
        }
        if k >= 0 {
            self.modes[a]
        } else {
            self.modes[a].conj()
        }
    }

    /// Mean value `ĝ(0)` (real by construction).
    pub fn mean(&self) -> f64 {
        self.modes[0].re
    }

    /// Stored (non-negative) half spectrum.
    pub fn half_spectrum(&self) -> &[Complex64] {
        &self.modes
    }

    pub fn is_finite(&self) -> bool {
        self.modes.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Apply a diagonal multiplier `m(k)`; `m` must satisfy
    /// `m(-k) = conj(m(k))` so the field stays real. Only `k ≥ 0` is passed.
    fn map_modes(&self, mut m: impl FnMut(usize, Complex64) -> Complex64) -> Self {
        let mut modes: Vec<Complex64> = self
            .modes
            .iter()
            .enumerate()
            .map(|(k, &c)| m(k, c))
            .collect();
        modes[0].im = 0.0;
        SpectralField {
            grid_size: self.grid_size,
            modes,
        }
    }

    /// Hilbert transform, `Ĥg(k) = -i·sgn(k)·ĝ(k)`; the mean maps to zero.
    pub fn hilbert(&self) -> Self {
        self.map_modes(|k, c| {
            if k == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, -1.0) * c
            }
        })
    }

    /// Fractional Laplacian `Λ^s` with multiplier `|k|^s`, `s ≥ 0`.
    /// `Λ⁰` is the identity (including the mean).
    pub fn lambda_pow(&self, s: f64) -> Result<Self> {
        if !s.is_finite() || s < 0.0 {
            return Err(Error::invalid(format!(
                "lambda_pow order must be finite and ≥ 0, got {s}"
            )));
        }
        Ok(self.map_modes(|k, c| c * (k as f64).powf(s)))
    }

    /// Spatial derivative of the given order, multiplier `(ik)^order`.
    pub fn derivative(&self, order: u32) -> Self {
        self.map_modes(|k, c| {
            let ik = Complex64::new(0.0, k as f64);
            c * ik.powu(order)
        })
    }

    /// Dealiased pointwise product: both factors are zero-padded onto a grid
    /// of twice the size, multiplied in physical space and truncated back, so
    /// every retained mode carries the exact convolution of the inputs.
    pub fn multiply(&self, other: &SpectralField) -> Result<Self> {
        if self.grid_size != other.grid_size {
            return Err(Error::GridMismatch {
                left: self.grid_size,
                right: other.grid_size,
            });
        }
        let fine = 2 * self.grid_size;
        let a = self.resample(fine)?.to_samples();
        let b = other.resample(fine)?.to_samples();
        let prod: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        SpectralField::from_samples(&prod)?.resample(self.grid_size)
    }

    /// Copy onto a grid of a different size (zero-padding or truncating the
    /// spectrum).
    pub fn resample(&self, grid_size: usize) -> Result<Self> {
        check_grid(grid_size)?;
        let mut out = SpectralField::zeros(grid_size)?;
        let keep = out.k_max().min(self.k_max());
        out.modes[..=keep].copy_from_slice(&self.modes[..=keep]);
        Ok(out)
    }

    /// Wiener norm `Σ_k |k|^s |ĝ(k)|` over stored modes. The homogeneous
    /// variant excludes `k = 0`; the inhomogeneous one weights the mean by 1,
    /// so `‖g‖_{A^s} = |ĝ(0)| + ‖g‖_{Ȧ^s}`.
    pub fn wiener_norm(&self, s: f64, homogeneous: bool) -> f64 {
        let mut total = 0.0;
        for (k, c) in self.modes.iter().enumerate() {
            let w = if k == 0 {
                if homogeneous {
                    continue;
                }
                1.0
            } else {
                // both ±k contribute
                2.0 * (k as f64).powf(s)
            };
            total += w * c.norm();
        }
        total
    }

    pub fn scale(&self, factor: f64) -> Self {
        self.map_modes(|_, c| c * factor)
    }

    pub fn add(&self, other: &SpectralField) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SpectralField) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(
        &self,
        other: &SpectralField,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        if self.grid_size != other.grid_size {
            return Err(Error::GridMismatch {
                left: self.grid_size,
                right: other.grid_size,
            });
        }
        let modes = self
            .modes
            .iter()
            .zip(&other.modes)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(SpectralField {
            grid_size: self.grid_size,
            modes,
        })
    }

    /// Largest coefficient difference against `other`, taking missing modes
    /// as zero. Useful for cross-grid comparisons.
    pub fn max_mode_distance(&self, other: &SpectralField) -> f64 {
        let kmax = self.k_max().max(other.k_max());
        (0..=kmax as i64)
            .map(|k| (self.mode(k) - other.mode(k)).norm())
            .fold(0.0, f64::max)
    }
}

/// A computed Wiener-space norm together with the parameters that define it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WienerNorm {
    pub order: f64,
    pub homogeneous: bool,
    pub value: f64,
}

impl WienerNorm {
    pub fn of(field: &SpectralField, order: f64, homogeneous: bool) -> Result<Self> {
        if !order.is_finite() || order < 0.0 {
            return Err(Error::invalid(format!(
                "Wiener norm order must be finite and ≥ 0, got {order}"
            )));
        }
        Ok(WienerNorm {
            order,
            homogeneous,
            value: field.wiener_norm(order, homogeneous),
        })
    }
}

fn check_grid(grid_size: usize) -> Result<()> {
    if grid_size < 4 || grid_size % 2 != 0 {
        return Err(Error::invalid(format!(
            "grid size must be even and ≥ 4, got {grid_size}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_field(rng: &mut ChaCha8Rng, grid_size: usize, amp: f64) -> SpectralField {
        let coeffs: Vec<(usize, Complex64)> = (1..=grid_size / 2 - 1)
            .map(|k| {
                let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                (k, c * amp / (k * k) as f64)
            })
            .collect();
        let mut f = SpectralField::from_mode_coeffs(grid_size, &coeffs).unwrap();
        f = f
            .add(&SpectralField::constant(grid_size, amp * rng.gen_range(-1.0..1.0)).unwrap())
            .unwrap();
        f
    }

    #[test]
    fn from_samples_zero_field() {
        let f = SpectralField::from_samples(&[0.0; 16]).unwrap();
        assert!(f.half_spectrum().iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn from_samples_cos3_single_mode() {
        let xs = collocation_points(16);
        let vals: Vec<f64> = xs.iter().map(|x| (3.0 * x).cos()).collect();
        let f = SpectralField::from_samples(&vals).unwrap();
        for k in 0..=f.k_max() as i64 {
            let expect = if k == 3 { 0.5 } else { 0.0 };
            assert_abs_diff_eq!(f.mode(k).re, expect, epsilon = 1e-14);
            assert_abs_diff_eq!(f.mode(k).im, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn from_samples_matches_quadrature_oracle() {
        let xs = collocation_points(64);
        let vals: Vec<f64> = xs.iter().map(|x| x.sin().exp()).collect();
        let f = SpectralField::from_samples(&vals).unwrap();
        for k in 0..=10i64 {
            let oracle = oracle::fourier_coeff_quadrature(|x| x.sin().exp(), k, 4096);
            assert!(
                (f.mode(k) - oracle).norm() < 1e-12,
                "mode {k}: {:?} vs {:?}",
                f.mode(k),
                oracle
            );
        }
    }

    #[test]
    fn round_trip_is_tight() {
        let xs = collocation_points(64);
        let vals: Vec<f64> = xs.iter().map(|x| (x.sin()).exp() + 0.3 * (4.0 * x).cos()).collect();
        let back = SpectralField::from_samples(&vals).unwrap().to_samples();
        let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (a, b) in vals.iter().zip(&back) {
            assert!((a - b).abs() <= 1e-13 * scale);
        }
    }

    #[test]
    fn from_samples_rejects_bad_input() {
        assert!(SpectralField::from_samples(&[0.0; 7]).is_err());
        assert!(SpectralField::from_samples(&[0.0, 1.0]).is_err());
        assert!(SpectralField::from_samples(&[f64::NAN; 8]).is_err());
    }

    #[test]
    fn hilbert_cos_is_sin() {
        let f = SpectralField::cosine(32, 1, 1.0).unwrap().hilbert();
        let expect = SpectralField::sine(32, 1, 1.0).unwrap();
        assert!(f.max_mode_distance(&expect) < 1e-15);
    }

    #[test]
    fn hilbert_kills_constants() {
        let f = SpectralField::constant(16, 1.0).unwrap().hilbert();
        assert!(f.wiener_norm(0.0, false) == 0.0);
    }

    #[test]
    fn hilbert_squared_is_minus_mean_free_part() {
        let g = SpectralField::cosine(64, 1, 1.0)
            .unwrap()
            .add(&SpectralField::sine(64, 3, 2.0).unwrap())
            .unwrap();
        let hh = g.hilbert().hilbert();
        let mean_free = g.sub(&SpectralField::constant(64, g.mean()).unwrap()).unwrap();
        assert!(hh.max_mode_distance(&mean_free.scale(-1.0)) < 1e-15);
    }

    #[test]
    fn lambda_cubed_on_cos2x() {
        let f = SpectralField::cosine(32, 2, 1.0).unwrap().lambda_pow(3.0).unwrap();
        let expect = SpectralField::cosine(32, 2, 8.0).unwrap();
        assert!(f.max_mode_distance(&expect) < 1e-14);
    }

    #[test]
    fn lambda_zero_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = random_field(&mut rng, 32, 1.0);
        assert!(g.lambda_pow(0.0).unwrap().max_mode_distance(&g) == 0.0);
    }

    #[test]
    fn lambda_one_is_hilbert_of_derivative() {
        let g = SpectralField::sine(64, 1, 1.0)
            .unwrap()
            .add(&SpectralField::cosine(64, 4, 1.0).unwrap())
            .unwrap();
        let lhs = g.lambda_pow(1.0).unwrap();
        let rhs = g.derivative(1).hilbert();
        assert!(lhs.max_mode_distance(&rhs) < 1e-14);
    }

    #[test]
    fn lambda_rejects_negative_order() {
        let g = SpectralField::cosine(16, 1, 1.0).unwrap();
        assert!(g.lambda_pow(-0.5).is_err());
    }

    #[test]
    fn derivative_examples() {
        let dsin = SpectralField::sine(32, 1, 1.0).unwrap().derivative(1);
        assert!(dsin.max_mode_distance(&SpectralField::cosine(32, 1, 1.0).unwrap()) < 1e-15);
        let d3cos = SpectralField::cosine(32, 1, 1.0).unwrap().derivative(3);
        assert!(d3cos.max_mode_distance(&SpectralField::sine(32, 1, 1.0).unwrap()) < 1e-15);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let n = 128;
        let xs = collocation_points(n);
        let vals: Vec<f64> = xs.iter().map(|x| x.sin().exp()).collect();
        let d = SpectralField::from_samples(&vals).unwrap().derivative(1);
        let ds = d.to_samples();
        let h = 1e-6;
        for (j, &x) in xs.iter().enumerate() {
            let fd = (((x + h).sin()).exp() - ((x - h).sin()).exp()) / (2.0 * h);
            assert_abs_diff_eq!(ds[j], fd, epsilon = 1e-5);
        }
    }

    #[test]
    fn multiply_identity_element() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_field(&mut rng, 32, 0.7);
        let one = SpectralField::constant(32, 1.0).unwrap();
        assert!(one.multiply(&g).unwrap().max_mode_distance(&g) < 1e-14);
    }

    #[test]
    fn multiply_product_to_sum() {
        let c = SpectralField::cosine(32, 1, 1.0).unwrap();
        let p = c.multiply(&c).unwrap();
        let expect = SpectralField::constant(32, 0.5)
            .unwrap()
            .add(&SpectralField::cosine(32, 2, 0.5).unwrap())
            .unwrap();
        assert!(p.max_mode_distance(&expect) < 1e-14);
    }

    #[test]
    fn multiply_matches_direct_convolution() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        // 8-mode fields on an 18-point grid
        let f = random_field(&mut rng, 18, 1.0);
        let g = random_field(&mut rng, 18, 1.0);
        let fast = f.multiply(&g).unwrap();
        let slow = oracle::convolve_direct(&f, &g).unwrap();
        assert!(fast.max_mode_distance(&slow) < 1e-13);
    }

    #[test]
    fn multiply_rejects_grid_mismatch() {
        let f = SpectralField::cosine(16, 1, 1.0).unwrap();
        let g = SpectralField::cosine(32, 1, 1.0).unwrap();
        assert!(f.multiply(&g).is_err());
    }

    #[test]
    fn wiener_norm_examples() {
        let f = SpectralField::cosine(32, 3, 1.0).unwrap();
        assert_abs_diff_eq!(f.wiener_norm(1.0, false), 3.0, epsilon = 1e-14);
        let c = SpectralField::constant(32, 4.2).unwrap();
        assert_eq!(c.wiener_norm(1.0, true), 0.0);
        assert_abs_diff_eq!(c.wiener_norm(0.0, false), 4.2, epsilon = 1e-15);
    }

    #[test]
    fn wiener_norm_poincare_on_random_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let g = random_field(&mut rng, 32, 1.0);
            let a0 = g.wiener_norm(0.0, true);
            let a1 = g.wiener_norm(1.0, true);
            assert!(a0 <= a1 + 1e-13);
        }
    }

    #[test]
    fn multiplier_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let g = random_field(&mut rng, 32, 1.0);
            let a = rng.gen_range(0.0..2.5);
            let b = rng.gen_range(0.0..2.5);
            let lhs = g.lambda_pow(a).unwrap().lambda_pow(b).unwrap();
            let rhs = g.lambda_pow(a + b).unwrap();
            assert!(lhs.max_mode_distance(&rhs) < 1e-14 * (1.0 + rhs.wiener_norm(0.0, false)));
        }
    }

    #[test]
    fn hilbert_skew_adjoint_on_mean_free_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let mut f = random_field(&mut rng, 32, 1.0);
            let mut g = random_field(&mut rng, 32, 1.0);
            f = f.sub(&SpectralField::constant(32, f.mean()).unwrap()).unwrap();
            g = g.sub(&SpectralField::constant(32, g.mean()).unwrap()).unwrap();
            let pair = |a: &SpectralField, b: &SpectralField| -> Complex64 {
                (-(a.k_max() as i64)..=a.k_max() as i64)
                    .map(|k| a.mode(k) * b.mode(k).conj())
                    .sum()
            };
            let lhs = pair(&f.hilbert(), &g);
            let rhs = -pair(&f, &g.hilbert());
            assert!((lhs - rhs).norm() < 1e-13);
        }
    }

    #[test]
    fn wiener_a0_is_submultiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..100 {
            let f = random_field(&mut rng, 32, 0.8);
            let g = random_field(&mut rng, 32, 0.8);
            let prod = f.multiply(&g).unwrap();
            assert!(
                prod.wiener_norm(0.0, false)
                    <= f.wiener_norm(0.0, false) * g.wiener_norm(0.0, false) + 1e-12
            );
        }
    }

    #[test]
    fn interpolation_inequality_a3() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..100 {
            let g = random_field(&mut rng, 32, 1.0);
            let a1 = g.wiener_norm(1.0, true);
            let a3 = g.wiener_norm(3.0, true);
            let a4 = g.wiener_norm(4.0, true);
            assert!(a3 <= a1.powf(1.0 / 3.0) * a4.powf(2.0 / 3.0) + 1e-12);
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_field(grid: usize) -> impl Strategy<Value = SpectralField> {
            prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), grid / 2 - 1).prop_map(
                move |raw| {
                    let coeffs: Vec<(usize, Complex64)> = raw
                        .into_iter()
                        .enumerate()
                        .map(|(i, (re, im))| {
                            let k = i + 1;
                            (k, Complex64::new(re, im) / (k * k) as f64)
                        })
                        .collect();
                    SpectralField::from_mode_coeffs(grid, &coeffs).unwrap()
                },
            )
        }

        proptest! {
            #[test]
            fn multiply_commutes(f in arb_field(24), g in arb_field(24)) {
                let fg = f.multiply(&g).unwrap();
                let gf = g.multiply(&f).unwrap();
                prop_assert!(fg.max_mode_distance(&gf) < 1e-13);
            }

            #[test]
            fn multiply_is_bilinear(f in arb_field(24), g in arb_field(24), h in arb_field(24),
                                    a in -2.0f64..2.0) {
                let lhs = f.multiply(&g.scale(a).add(&h).unwrap()).unwrap();
                let rhs = f.multiply(&g).unwrap().scale(a).add(&f.multiply(&h).unwrap()).unwrap();
                prop_assert!(lhs.max_mode_distance(&rhs) < 1e-13);
            }

            #[test]
            fn sample_round_trip(f in arb_field(24)) {
                let back = SpectralField::from_samples(&f.to_samples()).unwrap();
                prop_assert!(back.max_mode_distance(&f) < 1e-13);
            }
        }
    }
}
