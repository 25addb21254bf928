//! Per-step observables: Wiener norms, the mean, the smallness margin the
//! decay theory hinges on, and a numerical monitor for the a priori
//! dissipation inequality.

use std::io::Write;

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::stepper::SimState;

pub const CSV_HEADER: &str = "t,a1,a1_hom,a4_hom,mean_re,mean_im,smallness_margin,dissipation_balance";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    /// `‖g‖_{A¹} = |ĝ(0)| + ‖g‖_{Ȧ¹}`.
    pub a1: f64,
    pub a1_hom: f64,
    pub a4_hom: f64,
    pub mean_re: f64,
    pub mean_im: f64,
    /// `1 - 2‖g‖_{Ȧ¹}`; positivity is what the decay estimate needs.
    pub smallness_margin: f64,
    /// `d/dt‖g‖_{Ȧ¹} + cη‖g‖_{Ȧ⁴} - e^{-N₂t}(‖g‖_{Ȧ¹} + 1)`, filled in by
    /// the monitor pass (NaN until then).
    pub dissipation_balance: f64,
}

/// Norms and margin of the current state.
pub fn record(state: &SimState) -> DiagnosticsRecord {
    let a1_hom = state.g.wiener_norm(1.0, true);
    DiagnosticsRecord {
        t: state.t,
        a1: state.g.wiener_norm(1.0, false),
        a1_hom,
        a4_hom: state.g.wiener_norm(4.0, true),
        mean_re: state.g.mean(),
        mean_im: 0.0,
        smallness_margin: 1.0 - 2.0 * a1_hom,
        dissipation_balance: f64::NAN,
    }
}

/// Outcome of the dissipation monitor over a trajectory.
#[derive(Debug, Clone)]
pub struct MonitorReport {
    /// Steps (by index into the record list) where the homogeneous norm
    /// increased although the margin was positive at both endpoints.
    pub decay_violations: Vec<usize>,
    /// Largest ratio `(d/dt‖g‖_{Ȧ¹} + cη‖g‖_{Ȧ⁴}) / (e^{-N₂t}(‖g‖_{Ȧ¹}+1))`
    /// observed on forced runs; no bound is asserted because the envelope
    /// coefficient of the estimate is not explicit.
    pub max_envelope_ratio: f64,
    /// The constant used in front of `η‖g‖_{Ȧ⁴}`.
    pub c: f64,
}

impl MonitorReport {
    pub fn decay_holds(&self) -> bool {
        self.decay_violations.is_empty()
    }
}

/// Default constant in front of the `η‖g‖_{Ȧ⁴}` dissipation term.
pub const DEFAULT_DISSIPATION_C: f64 = 0.5;

/// Discrete time derivative of `a1_hom`: centered in the interior, one-sided
/// at the ends.
fn discrete_derivative(records: &[DiagnosticsRecord], i: usize) -> f64 {
    let n = records.len();
    if n < 2 {
        return f64::NAN;
    }
    if i == 0 {
        (records[1].a1_hom - records[0].a1_hom) / (records[1].t - records[0].t)
    } else if i == n - 1 {
        (records[n - 1].a1_hom - records[n - 2].a1_hom) / (records[n - 1].t - records[n - 2].t)
    } else {
        (records[i + 1].a1_hom - records[i - 1].a1_hom) / (records[i + 1].t - records[i - 1].t)
    }
}

/// Fill in `dissipation_balance` and scan the trajectory.
///
/// For unforced configurations (`ρ = θ = 0`) the monitor asserts discrete
/// monotone decay of `‖g‖_{Ȧ¹}` on every step whose endpoints both have a
/// positive smallness margin; violations are reported. For forced runs it
/// only reports the empirical envelope ratio.
pub fn dissipation_monitor(
    records: &mut [DiagnosticsRecord],
    p: &ModelParams,
    c: f64,
) -> Result<MonitorReport> {
    if records.len() < 2 {
        return Err(Error::invalid(
            "dissipation monitor needs at least two records",
        ));
    }
    let n = records.len();
    let mut max_ratio = f64::NEG_INFINITY;
    for i in 0..n {
        let ddt = discrete_derivative(records, i);
        let r = &mut records[i];
        let envelope = (-p.n2 * r.t).exp() * (r.a1_hom + 1.0);
        let balance = ddt + c * p.eta * r.a4_hom - envelope;
        r.dissipation_balance = balance;
        let ratio = (ddt + c * p.eta * r.a4_hom) / envelope;
        if ratio > max_ratio {
            max_ratio = ratio;
        }
    }
    let unforced = p.rho == 0.0 && p.theta == 0.0;
    let mut violations = Vec::new();
    if unforced {
        for i in 1..n {
            let margin_ok = records[i - 1].smallness_margin > 0.0
                && records[i].smallness_margin > 0.0;
            if margin_ok && records[i].a1_hom > records[i - 1].a1_hom + 1e-13 {
                violations.push(i);
            }
        }
    }
    Ok(MonitorReport {
        decay_violations: violations,
        max_envelope_ratio: max_ratio,
        c,
    })
}

fn fmt_f64(v: f64) -> String {
    // 17 significant digits round-trips f64 exactly
    format!("{v:.16e}")
}

/// Write records as CSV (header plus one row per record).
pub fn export(records: &[DiagnosticsRecord], out: &mut impl Write) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            fmt_f64(r.t),
            fmt_f64(r.a1),
            fmt_f64(r.a1_hom),
            fmt_f64(r.a4_hom),
            fmt_f64(r.mean_re),
            fmt_f64(r.mean_im),
            fmt_f64(r.smallness_margin),
            fmt_f64(r.dissipation_balance),
        )?;
    }
    Ok(())
}

pub fn export_string(records: &[DiagnosticsRecord]) -> String {
    let mut buf = Vec::new();
    export(records, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("csv output is ascii")
}

/// Parse diagnostics CSV back (used by the round-trip checks and the plot
/// tooling).
pub fn parse_csv(text: &str) -> Result<Vec<DiagnosticsRecord>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == CSV_HEADER => {}
        Some((_, h)) => {
            return Err(Error::Csv {
                line: 1,
                message: format!("unexpected header `{h}`"),
            })
        }
        None => {
            return Err(Error::Csv {
                line: 1,
                message: "empty input".into(),
            })
        }
    }
    let mut records = Vec::new();
    for (idx, raw) in lines {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(Error::Csv {
                line: idx + 1,
                message: format!("expected 8 columns, got {}", fields.len()),
            });
        }
        let mut vals = [0.0f64; 8];
        for (j, f) in fields.iter().enumerate() {
            vals[j] = f.trim().parse().map_err(|_| Error::Csv {
                line: idx + 1,
                message: format!("bad float `{f}`"),
            })?;
        }
        records.push(DiagnosticsRecord {
            t: vals[0],
            a1: vals[1],
            a1_hom: vals[2],
            a4_hom: vals[3],
            mean_re: vals[4],
            mean_im: vals[5],
            smallness_margin: vals[6],
            dissipation_balance: vals[7],
        });
    }
    Ok(records)
}

/// Observer collecting a diagnostics record per accepted state.
#[derive(Debug, Default)]
pub struct DiagnosticsBuffer {
    pub records: Vec<DiagnosticsRecord>,
}

impl DiagnosticsBuffer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push_state(&mut self, state: &SimState) {
        self.records.push(record(state));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::SpectralField;
    use approx::assert_abs_diff_eq;

    fn state_of(g: SpectralField, t: f64) -> SimState {
        let mut s = SimState::new(g);
        s.t = t;
        s
    }

    #[test]
    fn zero_field_record() {
        let r = record(&state_of(SpectralField::zeros(16).unwrap(), 0.0));
        assert_eq!(r.a1, 0.0);
        assert_eq!(r.a1_hom, 0.0);
        assert_eq!(r.a4_hom, 0.0);
        assert_eq!(r.smallness_margin, 1.0);
    }

    #[test]
    fn small_cosine_record() {
        let r = record(&state_of(SpectralField::cosine(32, 1, 0.1).unwrap(), 0.0));
        assert_abs_diff_eq!(r.a1_hom, 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(r.smallness_margin, 0.8, epsilon = 1e-15);
    }

    #[test]
    fn record_norm_relations_on_random_fields() {
        use num_complex::Complex64;
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let coeffs: Vec<(usize, Complex64)> = (1..16)
                .map(|k| {
                    (
                        k,
                        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                            / (k * k) as f64,
                    )
                })
                .collect();
            let mut g = SpectralField::from_mode_coeffs(32, &coeffs).unwrap();
            g = g
                .add(&SpectralField::constant(32, rng.gen_range(-1.0..1.0)).unwrap())
                .unwrap();
            let r = record(&state_of(g.clone(), 0.0));
            assert!(r.a1_hom <= r.a1 + 1e-14);
            assert_abs_diff_eq!(r.a1, r.mean_re.abs() + r.a1_hom, epsilon = 1e-13);
            let a3 = g.wiener_norm(3.0, true);
            assert!(a3 <= r.a1_hom.powf(1.0 / 3.0) * r.a4_hom.powf(2.0 / 3.0) + 1e-12);
        }
    }

    #[test]
    fn csv_export_shapes() {
        assert_eq!(export_string(&[]).lines().count(), 1);
        let r = record(&state_of(SpectralField::cosine(16, 1, 0.2).unwrap(), 0.5));
        assert_eq!(export_string(&[r]).lines().count(), 2);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let g = SpectralField::cosine(32, 2, 0.31)
            .unwrap()
            .add(&SpectralField::constant(32, 0.12345678901234567).unwrap())
            .unwrap();
        let mut recs = vec![
            record(&state_of(g.clone(), 0.0)),
            record(&state_of(g.scale(0.9), 0.125)),
            record(&state_of(g.scale(0.8), 0.25)),
        ];
        let p = ModelParams::with_equal_decay(0.1, 1.0, 0.0, 0.0, 1.0, 0.0).unwrap();
        dissipation_monitor(&mut recs, &p, DEFAULT_DISSIPATION_C).unwrap();
        let text = export_string(&recs);
        let back = parse_csv(&text).unwrap();
        assert_eq!(back.len(), recs.len());
        for (a, b) in recs.iter().zip(&back) {
            assert_eq!(a.t.to_bits(), b.t.to_bits());
            assert_eq!(a.a1.to_bits(), b.a1.to_bits());
            assert_eq!(a.a4_hom.to_bits(), b.a4_hom.to_bits());
            assert_eq!(a.dissipation_balance.to_bits(), b.dissipation_balance.to_bits());
        }
    }

    #[test]
    fn parse_csv_reports_bad_lines() {
        let bad = format!("{CSV_HEADER}\n1,2,3\n");
        match parse_csv(&bad) {
            Err(Error::Csv { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn monitor_asserts_decay_for_unforced_small_data() {
        let p = ModelParams::with_equal_decay(0.1, 1.0, 0.0, 0.0, 1.0, 0.0).unwrap();
        let g = SpectralField::cosine(32, 1, 0.05).unwrap();
        let mut recs: Vec<DiagnosticsRecord> = (0..20)
            .map(|i| {
                let t = 0.1 * i as f64;
                record(&state_of(g.scale((-t).exp()), t))
            })
            .collect();
        let report = dissipation_monitor(&mut recs, &p, DEFAULT_DISSIPATION_C).unwrap();
        assert!(report.decay_holds());
        assert!(recs.iter().all(|r| r.dissipation_balance.is_finite()));
    }

    #[test]
    fn monitor_flags_growth_when_unforced() {
        let p = ModelParams::with_equal_decay(0.1, 1.0, 0.0, 0.0, 1.0, 0.0).unwrap();
        let g = SpectralField::cosine(32, 1, 0.05).unwrap();
        let mut recs = vec![
            record(&state_of(g.clone(), 0.0)),
            record(&state_of(g.scale(1.5), 0.1)),
        ];
        let report = dissipation_monitor(&mut recs, &p, DEFAULT_DISSIPATION_C).unwrap();
        assert_eq!(report.decay_violations, vec![1]);
    }

    #[test]
    fn monitor_needs_two_records() {
        let p = ModelParams::with_equal_decay(0.1, 1.0, 0.0, 0.0, 1.0, 0.0).unwrap();
        assert!(dissipation_monitor(&mut [], &p, 0.5).is_err());
    }
}
