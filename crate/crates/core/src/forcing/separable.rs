//! Functions of `(x₁, x₂)` on the strip `𝕋 × (-∞, 0]` represented as sums of
//! separable terms `u(x₁)·v(x₂)`, which is all the asymptotic forcing needs:
//! the depth data enters through profiles, the horizontal structure through
//! the interface field.

use std::sync::Arc;

use crate::error::Result;
use crate::profile::DepthProfile;
use crate::quad;
use crate::spectral::SpectralField;

/// Absolute tolerance for the adaptive depth quadratures.
pub const DEPTH_QUAD_TOL: f64 = 1e-12;

/// A depth function supplied directly (used by tests and custom data).
pub struct CustomKernel {
    /// `(derivative order, y) ↦ value`.
    pub eval: Box<dyn Fn(u32, f64) -> f64 + Send + Sync>,
    /// Exponential decay rate of the kernel as `y → -∞`.
    pub decay_rate: f64,
    /// `order ↦ B` with `|∂ⁿf(y)| ≤ B e^{rate·y}`.
    pub bound: Box<dyn Fn(u32) -> f64 + Send + Sync>,
}

/// Where a depth factor takes its values from.
#[derive(Clone)]
pub enum KernelSource {
    /// The nutrient profile 𝓢.
    ProfileS,
    /// The inhibitor profile 𝓑.
    ProfileB,
    Custom(Arc<CustomKernel>),
}

impl std::fmt::Debug for KernelSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KernelSource::ProfileS => write!(f, "S"),
            KernelSource::ProfileB => write!(f, "B"),
            KernelSource::Custom(_) => write!(f, "custom"),
        }
    }
}

/// A finite linear combination of derivatives of depth sources.
#[derive(Clone, Debug, Default)]
pub struct DepthKernel {
    /// `(source, derivative order, coefficient)`.
    pub terms: Vec<(KernelSource, u32, f64)>,
}

impl DepthKernel {
    pub fn of_source(source: KernelSource) -> Self {
        DepthKernel {
            terms: vec![(source, 0, 1.0)],
        }
    }

    pub fn profile_s() -> Self {
        DepthKernel::of_source(KernelSource::ProfileS)
    }

    pub fn profile_b() -> Self {
        DepthKernel::of_source(KernelSource::ProfileB)
    }

    pub fn custom(kernel: CustomKernel) -> Self {
        DepthKernel::of_source(KernelSource::Custom(Arc::new(kernel)))
    }

    /// Shift every term by `n` extra depth derivatives.
    pub fn derivative(&self, n: u32) -> Self {
        DepthKernel {
            terms: self
                .terms
                .iter()
                .map(|(s, d, c)| (s.clone(), d + n, *c))
                .collect(),
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        DepthKernel {
            terms: self
                .terms
                .iter()
                .map(|(s, d, c)| (s.clone(), *d, c * factor))
                .collect(),
        }
    }

    pub fn add(&self, other: &DepthKernel) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        DepthKernel { terms }
    }
}

/// Cache of computed depth integrals, keyed by what uniquely determines
/// them: the profile, the derivative order, the spectral weight and whether
/// the integrand carries the `y` factor. Concurrent readers are fine; the
/// write lock makes insertion exclusive.
#[derive(Debug, Default)]
pub struct DepthCache {
    map: std::sync::RwLock<std::collections::HashMap<CacheKey, f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct CacheKey {
    source: u8,
    deriv: u32,
    weight_k: i64,
    y_weighted: bool,
}

impl DepthCache {
    fn get(&self, key: &CacheKey) -> Option<f64> {
        self.map.read().unwrap().get(key).copied()
    }

    fn insert(&self, key: CacheKey, value: f64) {
        self.map.write().unwrap().insert(key, value);
    }
}

/// Profile pair the symbolic kernel sources resolve against, optionally
/// backed by a [`DepthCache`].
#[derive(Clone, Copy)]
pub struct ProfilePair<'a> {
    pub s: &'a DepthProfile,
    pub b: &'a DepthProfile,
    pub cache: Option<&'a DepthCache>,
}

impl<'a> ProfilePair<'a> {
    pub fn new(s: &'a DepthProfile, b: &'a DepthProfile) -> Self {
        ProfilePair { s, b, cache: None }
    }

    pub fn with_cache(s: &'a DepthProfile, b: &'a DepthProfile, cache: &'a DepthCache) -> Self {
        ProfilePair {
            s,
            b,
            cache: Some(cache),
        }
    }

    fn source_derivative(&self, source: &KernelSource, n: u32, y: f64) -> f64 {
        match source {
            KernelSource::ProfileS => self.s.derivative(n, y),
            KernelSource::ProfileB => self.b.derivative(n, y),
            KernelSource::Custom(c) => (c.eval)(n, y),
        }
    }

    fn source_decay(&self, source: &KernelSource, n: u32) -> (f64, f64) {
        match source {
            KernelSource::ProfileS => (self.s.decay_rate(), self.s.decay_bound(n)),
            KernelSource::ProfileB => (self.b.decay_rate(), self.b.decay_bound(n)),
            KernelSource::Custom(c) => (c.decay_rate, (c.bound)(n)),
        }
    }

    /// Evaluate a kernel's `extra`-th derivative at depth `y`.
    pub fn kernel_value(&self, kernel: &DepthKernel, extra: u32, y: f64) -> f64 {
        kernel
            .terms
            .iter()
            .map(|(src, d, c)| c * self.source_derivative(src, d + extra, y))
            .sum()
    }

    /// Decay rate / bound pair valid for the whole kernel.
    pub fn kernel_decay(&self, kernel: &DepthKernel) -> (f64, f64) {
        let mut rate = f64::INFINITY;
        let mut bound = 0.0;
        for (src, d, c) in &kernel.terms {
            let (r, b) = self.source_decay(src, *d);
            rate = rate.min(r);
            bound += c.abs() * b;
        }
        if !rate.is_finite() {
            rate = 1.0;
        }
        (rate, bound)
    }

    /// `∫_{-∞}^{0} e^{|k| y} kernel(y) dy` by adaptive quadrature with an
    /// analytic tail cutoff. The integral is taken term by term so cached
    /// per-source values can be reused across kernels.
    pub fn depth_integral(&self, kernel: &DepthKernel, k: i64) -> Result<f64> {
        let mut total = 0.0;
        for (src, d, c) in &kernel.terms {
            total += c * self.source_integral(src, *d, k, false)?;
        }
        Ok(total)
    }

    /// `∫_{-∞}^{0} y·kernel(y) dy`, term by term.
    pub fn depth_integral_y_weighted(&self, kernel: &DepthKernel) -> Result<f64> {
        let mut total = 0.0;
        for (src, d, c) in &kernel.terms {
            total += c * self.source_integral(src, *d, 0, true)?;
        }
        Ok(total)
    }

    fn source_integral(&self, src: &KernelSource, d: u32, k: i64, y_weighted: bool) -> Result<f64> {
        let tag = match src {
            KernelSource::ProfileS => Some(0u8),
            KernelSource::ProfileB => Some(1u8),
            KernelSource::Custom(_) => None,
        };
        let key = tag.map(|source| CacheKey {
            source,
            deriv: d,
            weight_k: k.abs(),
            y_weighted,
        });
        if let (Some(cache), Some(key)) = (self.cache, key) {
            if let Some(v) = cache.get(&key) {
                return Ok(v);
            }
        }
        let (rate, bound) = self.source_decay(src, d);
        let value = if y_weighted {
            // |y|e^{ry} ≤ (2/(e·r))·e^{(r/2)y} for y ≤ 0
            quad::integrate_semi_infinite(
                |y| y * self.source_derivative(src, d, y),
                0.0,
                0.5 * rate,
                bound * 2.0 / (std::f64::consts::E * rate),
                DEPTH_QUAD_TOL,
            )?
        } else {
            quad::integrate_semi_infinite(
                |y| self.source_derivative(src, d, y),
                k.unsigned_abs() as f64,
                rate,
                bound,
                DEPTH_QUAD_TOL,
            )?
        };
        if let (Some(cache), Some(key)) = (self.cache, key) {
            cache.insert(key, value);
        }
        Ok(value)
    }
}

/// `Σ_i u_i(x₁) · v_i(x₂)` on a fixed collocation grid.
#[derive(Clone, Debug)]
pub struct SeparableField {
    grid_size: usize,
    terms: Vec<(SpectralField, DepthKernel)>,
}

impl SeparableField {
    /// A purely depth-dependent field (horizontal factor 1).
    pub fn depth_only(grid_size: usize, kernel: DepthKernel) -> Result<Self> {
        Ok(SeparableField {
            grid_size,
            terms: vec![(SpectralField::constant(grid_size, 1.0)?, kernel)],
        })
    }

    pub fn from_terms(
        grid_size: usize,
        terms: Vec<(SpectralField, DepthKernel)>,
    ) -> Result<Self> {
        for (u, _) in &terms {
            if u.grid_size() != grid_size {
                return Err(crate::error::Error::GridMismatch {
                    left: u.grid_size(),
                    right: grid_size,
                });
            }
        }
        Ok(SeparableField { grid_size, terms })
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn terms(&self) -> &[(SpectralField, DepthKernel)] {
        &self.terms
    }

    /// ∂ₓ₁ applied to the horizontal factors.
    pub fn dx1(&self) -> Self {
        self.map(|u, v| (u.derivative(1), v.clone()))
    }

    /// ∂ₓ₂ applied to the depth factors.
    pub fn dy(&self) -> Self {
        self.map(|u, v| (u.clone(), v.derivative(1)))
    }

    /// Full Laplacian `u,₁₁ v + u v,₂₂` termwise.
    pub fn laplacian(&self) -> Self {
        let mut terms = Vec::with_capacity(2 * self.terms.len());
        for (u, v) in &self.terms {
            terms.push((u.derivative(2), v.clone()));
            terms.push((u.clone(), v.derivative(2)));
        }
        SeparableField {
            grid_size: self.grid_size,
            terms,
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        self.map(|u, v| (u.scale(factor), v.clone()))
    }

    pub fn add(&self, other: &SeparableField) -> Result<Self> {
        if other.grid_size != self.grid_size {
            return Err(crate::error::Error::GridMismatch {
                left: self.grid_size,
                right: other.grid_size,
            });
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(SeparableField {
            grid_size: self.grid_size,
            terms,
        })
    }

    /// Multiply every horizontal factor by the field `w(x₁)` (dealiased).
    pub fn multiply_horizontal(&self, w: &SpectralField) -> Result<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (u, v) in &self.terms {
            terms.push((w.multiply(u)?, v.clone()));
        }
        Ok(SeparableField {
            grid_size: self.grid_size,
            terms,
        })
    }

    /// Boundary trace at depth `y` as a field of `x₁`.
    pub fn trace(&self, pair: &ProfilePair, y: f64) -> Result<SpectralField> {
        let mut acc = SpectralField::zeros(self.grid_size)?;
        for (u, v) in &self.terms {
            acc = acc.add(&u.scale(pair.kernel_value(v, 0, y)))?;
        }
        Ok(acc)
    }

    /// `∫_{-∞}^{0} (·) dy₂` termwise: each depth factor integrates to a
    /// scalar multiplying its horizontal factor. Terms whose horizontal
    /// factor is identically zero are skipped.
    pub fn depth_integral(&self, pair: &ProfilePair) -> Result<SpectralField> {
        let mut acc = SpectralField::zeros(self.grid_size)?;
        for (u, v) in &self.terms {
            if u.wiener_norm(0.0, false) == 0.0 {
                continue;
            }
            acc = acc.add(&u.scale(pair.depth_integral(v, 0)?))?;
        }
        Ok(acc)
    }

    /// Physical-space samples of the slice `F(·, y)`.
    pub fn eval_slice(&self, pair: &ProfilePair, y: f64) -> Result<Vec<f64>> {
        Ok(self.trace(pair, y)?.to_samples())
    }

    fn map(&self, f: impl Fn(&SpectralField, &DepthKernel) -> (SpectralField, DepthKernel)) -> Self {
        SeparableField {
            grid_size: self.grid_size,
            terms: self.terms.iter().map(|(u, v)| f(u, v)).collect(),
        }
    }
}

/// `Q_α[ℓ](f) = (ℓ - ℓ₀)·f,₂ + α t Δf`.
pub fn q_alpha(
    ell: &SpectralField,
    ell0: &SpectralField,
    f: &SeparableField,
    alpha: f64,
    t: f64,
) -> Result<SeparableField> {
    let moved = ell.sub(ell0)?;
    let first = f.dy().multiply_horizontal(&moved)?;
    let second = f.laplacian().scale(alpha * t);
    first.add(&second)
}

/// `R₁[ℓ](F) = -(ℓ,₁₁ F + 2 ℓ,₁ F,₁),₂`.
pub fn r1_operator(ell: &SpectralField, f: &SeparableField) -> Result<SeparableField> {
    let ell_xx = ell.derivative(2);
    let ell_x = ell.derivative(1);
    let part1 = f.multiply_horizontal(&ell_xx)?;
    let part2 = f.dx1().multiply_horizontal(&ell_x)?.scale(2.0);
    Ok(part1.add(&part2)?.dy().scale(-1.0))
}
