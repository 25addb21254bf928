//! Adaptive quadrature used by the depth integrals.
//!
//! The workhorse is a 7-15 Gauss–Kronrod pair with interval bisection. Depth
//! integrals over `(-∞, 0]` are truncated at a point chosen from the
//! integrand's declared exponential decay so the discarded tail is below
//! 1e-12, then the finite part is integrated adaptively.

use crate::error::{Error, Result};

// Nodes/weights of the 15-point Kronrod rule on [-1, 1] and the embedded
// 7-point Gauss rule (abscissae symmetric; only x ≥ 0 listed).
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

fn gauss_kronrod_15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let x = h * XGK[i];
        let fsum = f(c - x) + f(c + x);
        kronrod += WGK[i] * fsum;
        if i % 2 == 1 {
            gauss += WG[i / 2] * fsum;
        }
    }
    kronrod *= h;
    gauss *= h;
    (kronrod, (kronrod - gauss).abs())
}

/// Adaptive integral of `f` over the finite interval `[a, b]` to absolute
/// tolerance `tol`.
///
/// Intervals are bisected until their local error estimate is proportionally
/// small; intervals that hit the refinement limit (integrands with knot
/// discontinuities stop improving once bisection reaches floating-point
/// resolution) are accepted and their error folded into the global estimate,
/// which is what the tolerance is finally checked against.
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut stack = vec![(a, b, 0usize)];
    let mut total = 0.0;
    let mut err_total = 0.0;
    let max_depth = 40;
    let span = (b - a).abs();
    while let Some((lo, hi, depth)) = stack.pop() {
        let (val, err) = gauss_kronrod_15(&mut f, lo, hi);
        if !val.is_finite() {
            return Err(Error::QuadratureConvergence(format!(
                "non-finite integrand on [{lo:.3e}, {hi:.3e}]"
            )));
        }
        let width = (hi - lo).abs();
        let local_tol = tol * (width / span).max(1e-3);
        let resolution_limited = width <= 64.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1.0);
        if err <= local_tol || depth >= max_depth || resolution_limited {
            total += val;
            err_total += err;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    if err_total > 100.0 * tol {
        return Err(Error::QuadratureConvergence(format!(
            "global error estimate {err_total:.3e} exceeds tolerance {tol:.1e}"
        )));
    }
    Ok(total)
}

/// `∫_{-∞}^{0} w(y) f(y) dy` for an integrand known to obey
/// `|f(y)| ≤ bound·e^{decay_rate·y}` and a weight `w(y) = e^{weight_rate·y}`,
/// `weight_rate ≥ 0`. The total decay rate must be positive.
pub fn integrate_semi_infinite(
    mut f: impl FnMut(f64) -> f64,
    weight_rate: f64,
    decay_rate: f64,
    bound: f64,
    tol: f64,
) -> Result<f64> {
    let rate = weight_rate + decay_rate;
    if !(rate > 0.0) || !bound.is_finite() {
        return Err(Error::QuadratureConvergence(format!(
            "kernel does not decay: combined rate {rate:.3e}"
        )));
    }
    // |∫_{-∞}^{X}| ≤ bound·e^{rate·X}/rate ≤ tail_tol
    let tail_tol = (tol * 0.01).min(1e-12);
    let cutoff = if bound == 0.0 {
        -1.0
    } else {
        ((tail_tol * rate / bound).ln() / rate).min(-1.0)
    };
    if !cutoff.is_finite() {
        return Err(Error::QuadratureConvergence(
            "could not bound the integrand tail".into(),
        ));
    }
    integrate(
        |y| (weight_rate * y).exp() * f(y),
        cutoff,
        0.0,
        tol,
    )
}
