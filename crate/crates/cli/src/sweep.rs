//! `--sweep KEY=v1,v2,...` expansion: one run configuration per value, each
//! in its own subdirectory.

use std::path::PathBuf;

use tumor_interface::config::RunConfig;
use tumor_interface::error::{Error, Result};

/// Keys a sweep may vary.
const SWEEPABLE: &[&str] = &[
    "eps", "eta", "theta", "rho", "tau", "n", "n3", "alpha_ratio", "dt", "t_end",
];

pub fn expand(base: &RunConfig, spec: &str) -> Result<Vec<(PathBuf, RunConfig)>> {
    let (key, values) = spec
        .split_once('=')
        .ok_or_else(|| Error::invalid(format!("sweep spec `{spec}` is not KEY=V1,V2,...")))?;
    let key = key.trim();
    if !SWEEPABLE.contains(&key) {
        return Err(Error::invalid(format!(
            "cannot sweep `{key}`; supported keys: {}",
            SWEEPABLE.join(", ")
        )));
    }
    let mut runs = Vec::new();
    for raw in values.split(',') {
        let raw = raw.trim();
        if raw.is_empty() {
            continue;
        }
        let value: f64 = raw
            .parse()
            .map_err(|_| Error::invalid(format!("sweep value `{raw}` is not a number")))?;
        let mut cfg = base.clone();
        apply(&mut cfg, key, value)?;
        cfg.validate()?;
        runs.push((PathBuf::from(format!("{key}_{raw}")), cfg));
    }
    if runs.is_empty() {
        return Err(Error::invalid("sweep produced no runs"));
    }
    Ok(runs)
}

fn apply(cfg: &mut RunConfig, key: &str, value: f64) -> Result<()> {
    match key {
        "eps" => cfg.params.eps = value,
        "eta" => cfg.params.eta = value,
        "theta" => cfg.params.theta = value,
        "rho" => cfg.params.rho = value,
        "tau" => cfg.params.tau = value,
        "n" => {
            cfg.params.n1 = value;
            cfg.params.n2 = value;
        }
        "n3" => cfg.params.n3 = value,
        "alpha_ratio" => cfg.params.alpha_ratio = value,
        "dt" => {
            if value <= 0.0 {
                return Err(Error::invalid("swept dt must be > 0"));
            }
            cfg.dt = Some(value);
        }
        "t_end" => {
            if value < 0.0 {
                return Err(Error::invalid("swept t_end must be ≥ 0"));
            }
            cfg.t_end = value;
        }
        _ => unreachable!("filtered by SWEEPABLE"),
    }
    cfg.params.validate()?;
    Ok(())
}
