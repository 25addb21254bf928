//! Text run-configuration format.
//!
//! Sectioned key-value text, one `key = value` per line, `#` starts a
//! comment. Sections: `[model]` (or `[dimensional]`), `[profiles]`,
//! `[initial]`, `[grid]`, `[stepping]`, `[output]`. Unknown sections, unknown
//! keys, duplicate keys and constraint violations are rejected with the
//! offending line and key named. Parsing never touches the filesystem;
//! CSV-backed profiles are materialized in a separate step.

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::path::Path;

use crate::error::{Error, Result};
use crate::forcing::ForcingMode;
use crate::params::{nondimensionalize, DimensionalRates, ModelParams};
use crate::profile::DepthProfile;
use crate::spectral::SpectralField;
use crate::stepper::Scheme;

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileSpec {
    ExpSine { c_b: f64, c_s: f64 },
    Csv {
        s_path: String,
        b_path: String,
        s_tail_rate: f64,
        b_tail_rate: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialSpec {
    SingleMode { mode: usize, amplitude: f64 },
    RandomSmall {
        seed: u64,
        target_a1: f64,
        max_mode: usize,
    },
    Fourier { coeffs: Vec<(usize, f64, f64)> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: ForcingMode,
    pub params: ModelParams,
    pub profiles: ProfileSpec,
    pub initial: InitialSpec,
    pub grid_size: usize,
    pub scheme: Scheme,
    /// Explicit time step; `None` selects the conservative default.
    pub dt: Option<f64>,
    pub t_end: f64,
    pub cfl_safety: f64,
    pub adaptive: bool,
    pub out_dir: String,
    /// Snapshot cadence in accepted steps.
    pub snapshot_every: usize,
}

const SECTIONS: &[&str] = &[
    "model",
    "dimensional",
    "profiles",
    "initial",
    "grid",
    "stepping",
    "output",
];

struct RawEntry {
    section: &'static str,
    line: usize,
    key: String,
    value: String,
    taken: bool,
}

struct Raw {
    entries: Vec<RawEntry>,
}

impl Raw {
    fn parse(text: &str) -> Result<Self> {
        let mut entries: Vec<RawEntry> = Vec::new();
        let mut section: Option<&'static str> = None;
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name.strip_suffix(']').ok_or_else(|| {
                    Error::config(line_no, line, "malformed section header")
                })?;
                let known = SECTIONS.iter().find(|s| **s == name.trim());
                match known {
                    Some(s) => section = Some(s),
                    None => {
                        return Err(Error::config(
                            line_no,
                            name.trim(),
                            "unknown section",
                        ))
                    }
                }
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::config(line_no, line, "expected `key = value`")
            })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            let section = section.ok_or_else(|| {
                Error::config(line_no, &key, "key appears before any [section]")
            })?;
            if entries
                .iter()
                .any(|e| e.section == section && e.key == key)
            {
                return Err(Error::config(
                    line_no,
                    &key,
                    format!("duplicate key in [{section}]"),
                ));
            }
            entries.push(RawEntry {
                section,
                line: line_no,
                key,
                value,
                taken: false,
            });
        }
        Ok(Raw { entries })
    }

    fn take(&mut self, section: &str, key: &str) -> Option<(usize, String)> {
        for e in &mut self.entries {
            if e.section == section && e.key == key {
                e.taken = true;
                return Some((e.line, e.value.clone()));
            }
        }
        None
    }

    fn require(&mut self, section: &str, key: &str) -> Result<(usize, String)> {
        self.take(section, key).ok_or_else(|| {
            Error::config(0, key, format!("missing required key in [{section}]"))
        })
    }

    fn has_section(&self, section: &str) -> bool {
        self.entries.iter().any(|e| e.section == section)
    }

    fn reject_unknown(&self) -> Result<()> {
        for e in &self.entries {
            if !e.taken {
                return Err(Error::config(
                    e.line,
                    &e.key,
                    format!("unknown key in [{}]", e.section),
                ));
            }
        }
        Ok(())
    }
}

fn parse_f64(line: usize, key: &str, value: &str) -> Result<f64> {
    let v: f64 = value
        .parse()
        .map_err(|_| Error::config(line, key, format!("expected a number, got `{value}`")))?;
    if !v.is_finite() {
        return Err(Error::config(line, key, "value must be finite"));
    }
    Ok(v)
}

fn parse_usize(line: usize, key: &str, value: &str) -> Result<usize> {
    value
        .parse()
        .map_err(|_| Error::config(line, key, format!("expected an integer, got `{value}`")))
}

fn parse_u64(line: usize, key: &str, value: &str) -> Result<u64> {
    value
        .parse()
        .map_err(|_| Error::config(line, key, format!("expected an integer, got `{value}`")))
}

fn parse_bool(line: usize, key: &str, value: &str) -> Result<bool> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(Error::config(
            line,
            key,
            format!("expected true or false, got `{value}`"),
        )),
    }
}

/// Parse and fully validate a run configuration.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut raw = Raw::parse(text)?;

    let (mode_line, mode_text) = raw.require("model", "mode")?;
    let mode = match mode_text.as_str() {
        "general" => ForcingMode::General,
        "particular" => ForcingMode::Particular,
        other => {
            return Err(Error::config(
                mode_line,
                "mode",
                format!("expected general or particular, got `{other}`"),
            ))
        }
    };

    let params = if raw.has_section("dimensional") {
        parse_dimensional(&mut raw)?
    } else {
        parse_model_groups(&mut raw)?
    };

    let profiles = parse_profiles(&mut raw)?;
    let initial = parse_initial(&mut raw)?;

    let (gs_line, gs_text) = raw.require("grid", "size")?;
    let grid_size = parse_usize(gs_line, "size", &gs_text)?;
    if grid_size < 4 || grid_size % 2 != 0 {
        return Err(Error::config(
            gs_line,
            "size",
            format!("grid size must be even and ≥ 4, got {grid_size}"),
        ));
    }

    let (sc_line, sc_text) = raw.require("stepping", "scheme")?;
    let scheme = match sc_text.as_str() {
        "if-euler" => Scheme::IfEuler,
        "if-rk2" => Scheme::IfRk2,
        "etdrk2" => Scheme::Etdrk2,
        other => {
            return Err(Error::config(
                sc_line,
                "scheme",
                format!("expected if-euler, if-rk2 or etdrk2, got `{other}`"),
            ))
        }
    };
    let dt = match raw.take("stepping", "dt") {
        Some((l, v)) => {
            let dt = parse_f64(l, "dt", &v)?;
            if dt <= 0.0 {
                return Err(Error::config(l, "dt", format!("dt must be > 0, got {dt}")));
            }
            Some(dt)
        }
        None => None,
    };
    let (te_line, te_text) = raw.require("stepping", "t_end")?;
    let t_end = parse_f64(te_line, "t_end", &te_text)?;
    if t_end < 0.0 {
        return Err(Error::config(
            te_line,
            "t_end",
            format!("t_end must be ≥ 0, got {t_end}"),
        ));
    }
    let cfl_safety = match raw.take("stepping", "cfl_safety") {
        Some((l, v)) => {
            let c = parse_f64(l, "cfl_safety", &v)?;
            if !(c > 0.0 && c <= 1.0) {
                return Err(Error::config(
                    l,
                    "cfl_safety",
                    format!("cfl_safety must lie in (0, 1], got {c}"),
                ));
            }
            c
        }
        None => 1.0,
    };
    let adaptive = match raw.take("stepping", "adaptive") {
        Some((l, v)) => parse_bool(l, "adaptive", &v)?,
        None => false,
    };

    let out_dir = match raw.take("output", "dir") {
        Some((_, v)) => v,
        None => "out".to_string(),
    };
    let snapshot_every = match raw.take("output", "snapshot_every") {
        Some((l, v)) => {
            let n = parse_usize(l, "snapshot_every", &v)?;
            if n == 0 {
                return Err(Error::config(
                    l,
                    "snapshot_every",
                    "snapshot cadence must be ≥ 1",
                ));
            }
            n
        }
        None => 10,
    };

    raw.reject_unknown()?;

    let cfg = RunConfig {
        mode,
        params,
        profiles,
        initial,
        grid_size,
        scheme,
        dt,
        t_end,
        cfl_safety,
        adaptive,
        out_dir,
        snapshot_every,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn parse_model_groups(raw: &mut Raw) -> Result<ModelParams> {
    let mut grab = |key: &str| -> Result<f64> {
        let (l, v) = raw.require("model", key)?;
        parse_f64(l, key, &v)
    };
    let eps = grab("eps")?;
    let eta = grab("eta")?;
    let theta = grab("theta")?;
    let rho = grab("rho")?;
    let n3 = grab("n3")?;
    let (n1, n2) = if let Some((l, v)) = raw.take("model", "n") {
        let n = parse_f64(l, "n", &v)?;
        if raw.take("model", "n1").is_some() || raw.take("model", "n2").is_some() {
            return Err(Error::config(l, "n", "give either n or the n1/n2 pair, not both"));
        }
        (n, n)
    } else {
        let (l1, v1) = raw.require("model", "n1")?;
        let (l2, v2) = raw.require("model", "n2")?;
        (parse_f64(l1, "n1", &v1)?, parse_f64(l2, "n2", &v2)?)
    };
    let tau = match raw.take("model", "tau") {
        Some((l, v)) => parse_f64(l, "tau", &v)?,
        None => 1.0,
    };
    let alpha_ratio = match raw.take("model", "alpha_ratio") {
        Some((l, v)) => parse_f64(l, "alpha_ratio", &v)?,
        None => 1.0,
    };
    ModelParams::new(eps, eta, theta, rho, tau, n1, n2, n3, alpha_ratio)
        .map_err(|e| wrap_param_error(e, "model"))
}

fn parse_dimensional(raw: &mut Raw) -> Result<ModelParams> {
    let mut grab = |key: &str| -> Result<f64> {
        let (l, v) = raw.require("dimensional", key)?;
        parse_f64(l, key, &v)
    };
    let rates = DimensionalRates {
        d_n: grab("d_n")?,
        d_i: grab("d_i")?,
        delta_n: grab("delta_n")?,
        delta_i: grab("delta_i")?,
        lambda_n: grab("lambda_n")?,
        lambda_i: grab("lambda_i")?,
        gamma_n: grab("gamma_n")?,
        chi: grab("chi")?,
        mu: grab("mu")?,
        nu: grab("nu")?,
        sigma_tilde: grab("sigma_tilde")?,
        sigma_d: grab("sigma_d")?,
        sigma_b: grab("sigma_b")?,
        beta_d: grab("beta_d")?,
        beta_b: grab("beta_b")?,
        tau: grab("tau")?,
        length_l: grab("length_l")?,
        height_h: grab("height_h")?,
    };
    nondimensionalize(&rates).map_err(|e| wrap_param_error(e, "dimensional"))
}

fn wrap_param_error(e: Error, section: &str) -> Error {
    match e {
        Error::InvalidInput(msg) => {
            // the validation message starts with the offending group's name
            let key = msg.split_whitespace().next().unwrap_or("params").to_string();
            Error::config(0, key, format!("in [{section}]: {msg}"))
        }
        other => other,
    }
}

fn parse_profiles(raw: &mut Raw) -> Result<ProfileSpec> {
    let (k_line, kind) = raw.require("profiles", "kind")?;
    match kind.as_str() {
        "exp-sine" => {
            let (l1, v1) = raw.require("profiles", "c_b")?;
            let (l2, v2) = raw.require("profiles", "c_s")?;
            Ok(ProfileSpec::ExpSine {
                c_b: parse_f64(l1, "c_b", &v1)?,
                c_s: parse_f64(l2, "c_s", &v2)?,
            })
        }
        "csv" => {
            let (_, s_path) = raw.require("profiles", "s_csv")?;
            let (_, b_path) = raw.require("profiles", "b_csv")?;
            let (l1, v1) = raw.require("profiles", "s_tail_rate")?;
            let (l2, v2) = raw.require("profiles", "b_tail_rate")?;
            let s_tail_rate = parse_f64(l1, "s_tail_rate", &v1)?;
            let b_tail_rate = parse_f64(l2, "b_tail_rate", &v2)?;
            for (l, key, r) in [(l1, "s_tail_rate", s_tail_rate), (l2, "b_tail_rate", b_tail_rate)] {
                if r <= 0.0 {
                    return Err(Error::config(l, key, format!("tail rate must be > 0, got {r}")));
                }
            }
            Ok(ProfileSpec::Csv {
                s_path,
                b_path,
                s_tail_rate,
                b_tail_rate,
            })
        }
        other => Err(Error::config(
            k_line,
            "kind",
            format!("expected exp-sine or csv, got `{other}`"),
        )),
    }
}

fn parse_initial(raw: &mut Raw) -> Result<InitialSpec> {
    let (p_line, preset) = raw.require("initial", "preset")?;
    match preset.as_str() {
        "single-mode" => {
            let (l1, v1) = raw.require("initial", "mode")?;
            let (l2, v2) = raw.require("initial", "amplitude")?;
            let mode = parse_usize(l1, "mode", &v1)?;
            if mode == 0 {
                return Err(Error::config(l1, "mode", "single-mode preset needs mode ≥ 1"));
            }
            Ok(InitialSpec::SingleMode {
                mode,
                amplitude: parse_f64(l2, "amplitude", &v2)?,
            })
        }
        "random-small" => {
            let (l1, v1) = raw.require("initial", "seed")?;
            let (l2, v2) = raw.require("initial", "target_a1")?;
            let target_a1 = parse_f64(l2, "target_a1", &v2)?;
            if target_a1 < 0.0 {
                return Err(Error::config(l2, "target_a1", "target norm must be ≥ 0"));
            }
            let max_mode = match raw.take("initial", "max_mode") {
                Some((l, v)) => {
                    let m = parse_usize(l, "max_mode", &v)?;
                    if m == 0 {
                        return Err(Error::config(l, "max_mode", "max_mode must be ≥ 1"));
                    }
                    m
                }
                None => 8,
            };
            Ok(InitialSpec::RandomSmall {
                seed: parse_u64(l1, "seed", &v1)?,
                target_a1,
                max_mode,
            })
        }
        "fourier" => {
            let (l, v) = raw.require("initial", "coeffs")?;
            let mut coeffs = Vec::new();
            for piece in v.split(';').filter(|p| !p.trim().is_empty()) {
                let parts: Vec<&str> = piece.split(':').collect();
                if parts.len() != 3 {
                    return Err(Error::config(
                        l,
                        "coeffs",
                        format!("expected k:re:im, got `{piece}`"),
                    ));
                }
                coeffs.push((
                    parse_usize(l, "coeffs", parts[0].trim())?,
                    parse_f64(l, "coeffs", parts[1].trim())?,
                    parse_f64(l, "coeffs", parts[2].trim())?,
                ));
            }
            if coeffs.is_empty() {
                return Err(Error::config(l, "coeffs", "coefficient list is empty"));
            }
            Ok(InitialSpec::Fourier { coeffs })
        }
        other => Err(Error::config(
            p_line,
            "preset",
            format!("expected single-mode, random-small or fourier, got `{other}`"),
        )),
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.mode == ForcingMode::Particular {
            if self.params.n1 != self.params.n2 {
                return Err(Error::config(0, "n1", "particular mode needs n1 = n2"));
            }
            if self.params.alpha_ratio != 1.0 {
                return Err(Error::config(
                    0,
                    "alpha_ratio",
                    "particular mode needs alpha_ratio = 1",
                ));
            }
            if self.params.tau != 1.0 {
                return Err(Error::config(0, "tau", "particular mode fixes tau = 1"));
            }
            if !matches!(self.profiles, ProfileSpec::ExpSine { .. }) {
                return Err(Error::config(
                    0,
                    "kind",
                    "particular mode needs exp-sine profiles",
                ));
            }
        }
        if let InitialSpec::Fourier { coeffs } = &self.initial {
            for (k, _, im) in coeffs {
                if *k > self.grid_size / 2 - 1 {
                    return Err(Error::config(
                        0,
                        "coeffs",
                        format!("mode {k} beyond k_max = {}", self.grid_size / 2 - 1),
                    ));
                }
                if *k == 0 && *im != 0.0 {
                    return Err(Error::config(0, "coeffs", "mean mode must be real"));
                }
            }
        }
        if let InitialSpec::SingleMode { mode, .. } = &self.initial {
            if *mode > self.grid_size / 2 - 1 {
                return Err(Error::config(
                    0,
                    "mode",
                    format!("mode {mode} beyond k_max = {}", self.grid_size / 2 - 1),
                ));
            }
        }
        Ok(())
    }

    /// The effective time step: explicit `dt` or the conservative default.
    pub fn effective_dt(&self) -> f64 {
        self.dt.unwrap_or_else(|| {
            crate::stepper::default_dt(self.params.eta, self.grid_size / 2 - 1, self.cfl_safety)
        })
    }

    /// The seed affecting the trajectory, if any.
    pub fn seed(&self) -> Option<u64> {
        match &self.initial {
            InitialSpec::RandomSmall { seed, .. } => Some(*seed),
            _ => None,
        }
    }

    /// Replace the random seed (`--seed` override). No-op for deterministic
    /// presets.
    pub fn override_seed(&mut self, seed: u64) {
        if let InitialSpec::RandomSmall { seed: s, .. } = &mut self.initial {
            *s = seed;
        }
    }

    /// Build the initial interface on the configured grid.
    pub fn build_initial(&self) -> Result<SpectralField> {
        match &self.initial {
            InitialSpec::SingleMode { mode, amplitude } => {
                SpectralField::cosine(self.grid_size, *mode, *amplitude)
            }
            InitialSpec::Fourier { coeffs } => {
                let modes: Vec<(usize, Complex64)> = coeffs
                    .iter()
                    .map(|&(k, re, im)| (k, Complex64::new(re, im)))
                    .collect();
                SpectralField::from_mode_coeffs(self.grid_size, &modes)
            }
            InitialSpec::RandomSmall {
                seed,
                target_a1,
                max_mode,
            } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let k_hi = (*max_mode).min(self.grid_size / 2 - 1);
                let mut coeffs = Vec::new();
                for k in 1..=k_hi {
                    let re = rng.gen_range(-1.0..1.0) / (k * k) as f64;
                    let im = rng.gen_range(-1.0..1.0) / (k * k) as f64;
                    coeffs.push((k, Complex64::new(re, im)));
                }
                let draft = SpectralField::from_mode_coeffs(self.grid_size, &coeffs)?;
                let norm = draft.wiener_norm(1.0, true);
                if norm == 0.0 {
                    return Ok(draft);
                }
                Ok(draft.scale(target_a1 / norm))
            }
        }
    }

    /// Materialize the depth profiles, reading CSV tables relative to
    /// `base_dir` when given.
    pub fn materialize_profiles(&self, base_dir: Option<&Path>) -> Result<(DepthProfile, DepthProfile)> {
        match &self.profiles {
            ProfileSpec::ExpSine { c_b, c_s } => Ok((
                DepthProfile::exp_sine(*c_s)?,
                DepthProfile::exp_sine(*c_b)?,
            )),
            ProfileSpec::Csv {
                s_path,
                b_path,
                s_tail_rate,
                b_tail_rate,
            } => {
                let resolve = |p: &str| match base_dir {
                    Some(d) => d.join(p),
                    None => Path::new(p).to_path_buf(),
                };
                let s_text = std::fs::read_to_string(resolve(s_path))?;
                let b_text = std::fs::read_to_string(resolve(b_path))?;
                Ok((
                    DepthProfile::from_csv_str(&s_text, *s_tail_rate)?,
                    DepthProfile::from_csv_str(&b_text, *b_tail_rate)?,
                ))
            }
        }
    }

    /// Canonical text form; `parse_config(to_text(c))` reproduces `c`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str("[model]\n");
        s.push_str(&format!(
            "mode = {}\n",
            match self.mode {
                ForcingMode::General => "general",
                ForcingMode::Particular => "particular",
            }
        ));
        let p = &self.params;
        s.push_str(&format!("eps = {}\n", p.eps));
        s.push_str(&format!("eta = {}\n", p.eta));
        s.push_str(&format!("theta = {}\n", p.theta));
        s.push_str(&format!("rho = {}\n", p.rho));
        s.push_str(&format!("tau = {}\n", p.tau));
        if p.n1 == p.n2 {
            s.push_str(&format!("n = {}\n", p.n1));
        } else {
            s.push_str(&format!("n1 = {}\n", p.n1));
            s.push_str(&format!("n2 = {}\n", p.n2));
        }
        s.push_str(&format!("n3 = {}\n", p.n3));
        s.push_str(&format!("alpha_ratio = {}\n", p.alpha_ratio));
        s.push('\n');
        s.push_str("[profiles]\n");
        match &self.profiles {
            ProfileSpec::ExpSine { c_b, c_s } => {
                s.push_str("kind = exp-sine\n");
                s.push_str(&format!("c_b = {c_b}\n"));
                s.push_str(&format!("c_s = {c_s}\n"));
            }
            ProfileSpec::Csv {
                s_path,
                b_path,
                s_tail_rate,
                b_tail_rate,
            } => {
                s.push_str("kind = csv\n");
                s.push_str(&format!("s_csv = {s_path}\n"));
                s.push_str(&format!("b_csv = {b_path}\n"));
                s.push_str(&format!("s_tail_rate = {s_tail_rate}\n"));
                s.push_str(&format!("b_tail_rate = {b_tail_rate}\n"));
            }
        }
        s.push('\n');
        s.push_str("[initial]\n");
        match &self.initial {
            InitialSpec::SingleMode { mode, amplitude } => {
                s.push_str("preset = single-mode\n");
                s.push_str(&format!("mode = {mode}\n"));
                s.push_str(&format!("amplitude = {amplitude}\n"));
            }
            InitialSpec::RandomSmall {
                seed,
                target_a1,
                max_mode,
            } => {
                s.push_str("preset = random-small\n");
                s.push_str(&format!("seed = {seed}\n"));
                s.push_str(&format!("target_a1 = {target_a1}\n"));
                s.push_str(&format!("max_mode = {max_mode}\n"));
            }
            InitialSpec::Fourier { coeffs } => {
                s.push_str("preset = fourier\n");
                let pieces: Vec<String> = coeffs
                    .iter()
                    .map(|(k, re, im)| format!("{k}:{re}:{im}"))
                    .collect();
                s.push_str(&format!("coeffs = {}\n", pieces.join(";")));
            }
        }
        s.push('\n');
        s.push_str("[grid]\n");
        s.push_str(&format!("size = {}\n", self.grid_size));
        s.push('\n');
        s.push_str("[stepping]\n");
        s.push_str(&format!("scheme = {}\n", self.scheme));
        if let Some(dt) = self.dt {
            s.push_str(&format!("dt = {dt}\n"));
        }
        s.push_str(&format!("t_end = {}\n", self.t_end));
        s.push_str(&format!("cfl_safety = {}\n", self.cfl_safety));
        s.push_str(&format!("adaptive = {}\n", self.adaptive));
        s.push('\n');
        s.push_str("[output]\n");
        s.push_str(&format!("dir = {}\n", self.out_dir));
        s.push_str(&format!("snapshot_every = {}\n", self.snapshot_every));
        s
    }
}
