//! Initial nutrient / inhibitor data as functions of the depth coordinate
//! `x₂ ∈ (-∞, 0]`.
//!
//! Two kinds are supported: the analytic preset `c·e^{x₂}·sin x₂` and user
//! tables interpolated by a natural cubic spline with a mandatory declared
//! exponential tail below the first knot. Every profile vanishes on the
//! interface (`profile(0) = 0`) and decays integrably in depth together with
//! its derivatives, which is what makes the semi-infinite integrals converge.

use crate::error::{Error, Result};

const SQRT_2: f64 = std::f64::consts::SQRT_2;
const FRAC_PI_4: f64 = std::f64::consts::FRAC_PI_4;

#[derive(Debug, Clone, PartialEq)]
pub enum DepthProfile {
    /// `c · e^{x₂} sin x₂`.
    ExpSine { amplitude: f64 },
    /// Sampled profile with cubic interpolation and an exponential tail.
    Table(TableProfile),
}

impl DepthProfile {
    pub fn exp_sine(amplitude: f64) -> Result<Self> {
        if !amplitude.is_finite() {
            return Err(Error::invalid("exp-sine amplitude must be finite"));
        }
        Ok(DepthProfile::ExpSine { amplitude })
    }

    /// Parse a two-column CSV `(x2, value)` with strictly increasing `x2`
    /// ending at `x2 = 0`, and attach the declared tail decay rate.
    pub fn from_csv_str(text: &str, tail_rate: f64) -> Result<Self> {
        let table = TableProfile::parse(text, tail_rate)?;
        Ok(DepthProfile::Table(table))
    }

    /// Profile value at depth `x2 ≤ 0`.
    pub fn value(&self, x2: f64) -> f64 {
        self.derivative(0, x2)
    }

    /// `n`-th depth derivative at `x2 ≤ 0`. Orders up to 4 are used by the
    /// forcing terms; tabulated profiles provide them with spline smoothness
    /// (third derivative piecewise constant, fourth zero between knots).
    pub fn derivative(&self, n: u32, x2: f64) -> f64 {
        match self {
            DepthProfile::ExpSine { amplitude } => {
                // d^n/dx^n (e^x sin x) = 2^{n/2} e^x sin(x + nπ/4)
                amplitude
                    * SQRT_2.powi(n as i32)
                    * x2.exp()
                    * (x2 + n as f64 * FRAC_PI_4).sin()
            }
            DepthProfile::Table(t) => t.derivative(n, x2),
        }
    }

    /// Exponential decay rate `r` such that the profile behaves like
    /// `O(e^{r·x₂})` as `x₂ → -∞`.
    pub fn decay_rate(&self) -> f64 {
        match self {
            DepthProfile::ExpSine { .. } => 1.0,
            DepthProfile::Table(t) => t.tail_rate,
        }
    }

    /// A constant `B` with `|∂^n profile(y)| ≤ B·e^{decay_rate·y}` for all
    /// `y ≤ 0`, used to truncate semi-infinite integrals.
    pub fn decay_bound(&self, n: u32) -> f64 {
        match self {
            DepthProfile::ExpSine { amplitude } => amplitude.abs() * SQRT_2.powi(n as i32),
            DepthProfile::Table(t) => t.decay_bound(n),
        }
    }

    /// Amplitude of the exp-sine preset, if this is one.
    pub fn exp_sine_amplitude(&self) -> Option<f64> {
        match self {
            DepthProfile::ExpSine { amplitude } => Some(*amplitude),
            DepthProfile::Table(_) => None,
        }
    }
}

/// Natural cubic spline over sampled `(x2, value)` pairs, continued below the
/// sampled range by `value(x_min)·e^{tail_rate·(x2 - x_min)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TableProfile {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Second derivatives at the knots (natural boundary conditions).
    m: Vec<f64>,
    tail_rate: f64,
}

impl TableProfile {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, tail_rate: f64) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::invalid("x and value columns differ in length"));
        }
        if xs.len() < 3 {
            return Err(Error::invalid("profile table needs at least 3 rows"));
        }
        if xs.iter().chain(ys.iter()).any(|v| !v.is_finite()) {
            return Err(Error::invalid("profile table entries must be finite"));
        }
        if !xs.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::invalid("profile x2 column must be strictly increasing"));
        }
        let last = *xs.last().unwrap();
        if last != 0.0 {
            return Err(Error::invalid(format!(
                "profile table must end at x2 = 0, last row has x2 = {last}"
            )));
        }
        if ys.last().unwrap().abs() > 1e-10 {
            return Err(Error::invalid(format!(
                "profile must vanish on the interface: value at x2 = 0 is {:.3e}",
                ys.last().unwrap()
            )));
        }
        if !(tail_rate > 0.0) || !tail_rate.is_finite() {
            return Err(Error::invalid(format!(
                "tail decay rate must be a positive finite number, got {tail_rate}"
            )));
        }
        let m = natural_spline_second_derivatives(&xs, &ys);
        Ok(TableProfile {
            xs,
            ys,
            m,
            tail_rate,
        })
    }

    fn parse(text: &str, tail_rate: f64) -> Result<Self> {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split(',');
            let (a, b) = match (parts.next(), parts.next(), parts.next()) {
                (Some(a), Some(b), None) => (a.trim(), b.trim()),
                _ => {
                    return Err(Error::Csv {
                        line: idx + 1,
                        message: format!("expected two comma-separated columns, got `{line}`"),
                    })
                }
            };
            // Tolerate a single header row.
            if idx == 0 && a.parse::<f64>().is_err() {
                continue;
            }
            let x: f64 = a.parse().map_err(|_| Error::Csv {
                line: idx + 1,
                message: format!("bad x2 value `{a}`"),
            })?;
            let y: f64 = b.parse().map_err(|_| Error::Csv {
                line: idx + 1,
                message: format!("bad profile value `{b}`"),
            })?;
            xs.push(x);
            ys.push(y);
        }
        TableProfile::new(xs, ys, tail_rate)
    }

    fn derivative(&self, n: u32, x: f64) -> f64 {
        let x0 = self.xs[0];
        if x < x0 {
            // exponential tail, all derivatives analytic
            let a = self.ys[0];
            return a * self.tail_rate.powi(n as i32) * (self.tail_rate * (x - x0)).exp();
        }
        let x = x.min(0.0);
        // locate the knot interval
        let i = match self.xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.xs.len() - 2),
        };
        let h = self.xs[i + 1] - self.xs[i];
        let a = self.xs[i + 1] - x;
        let b = x - self.xs[i];
        let (mi, mj) = (self.m[i], self.m[i + 1]);
        let (yi, yj) = (self.ys[i], self.ys[i + 1]);
        match n {
            0 => {
                mi * a.powi(3) / (6.0 * h)
                    + mj * b.powi(3) / (6.0 * h)
                    + (yi / h - mi * h / 6.0) * a
                    + (yj / h - mj * h / 6.0) * b
            }
            1 => {
                -mi * a * a / (2.0 * h) + mj * b * b / (2.0 * h) - (yi / h - mi * h / 6.0)
                    + (yj / h - mj * h / 6.0)
            }
            2 => mi * a / h + mj * b / h,
            3 => (mj - mi) / h,
            _ => 0.0,
        }
    }

    fn decay_bound(&self, n: u32) -> f64 {
        // Tail part is exact; over the sampled range bound the magnitude on a
        // refinement of the knots and divide out the decay weight.
        let tail = self.ys[0].abs() * self.tail_rate.powi(n as i32);
        let mut interior: f64 = 0.0;
        for w in self.xs.windows(2) {
            for s in 0..=4 {
                let x = w[0] + (w[1] - w[0]) * s as f64 / 4.0;
                let v = self.derivative(n, x).abs() * (-self.tail_rate * x).exp();
                interior = interior.max(v);
            }
        }
        1.5 * tail.max(interior)
    }
}

fn natural_spline_second_derivatives(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut m = vec![0.0; n];
    if n < 3 {
        return m;
    }
    // Thomas algorithm on the interior unknowns.
    let mut diag = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    let mut upper = vec![0.0; n];
    for i in 1..n - 1 {
        let h0 = xs[i] - xs[i - 1];
        let h1 = xs[i + 1] - xs[i];
        diag[i] = 2.0 * (h0 + h1);
        upper[i] = h1;
        rhs[i] = 6.0 * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
    }
    for i in 2..n - 1 {
        let h0 = xs[i] - xs[i - 1];
        let w = h0 / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    for i in (1..n - 1).rev() {
        let next = if i + 1 < n - 1 { m[i + 1] } else { 0.0 };
        m[i] = (rhs[i] - upper[i] * next) / diag[i];
    }
    m
}
