//! On-disk artifacts of a run: manifest, diagnostics CSV, coefficient
//! snapshots and the plot script.

use std::cell::RefCell;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use tumor_interface::config::RunConfig;
use tumor_interface::diagnostics::{export, DiagnosticsRecord};
use tumor_interface::error::{Error, Result};
use tumor_interface::spectral::SpectralField;
use tumor_interface::stepper::{SimState, StepperConfig};

pub const SNAPSHOT_HEADER: &str = "k,re,im";

/// Manifest: everything that determines the trajectory, as the canonical
/// config echo plus the resolved stepping values and the code version.
pub fn write_manifest(dir: &Path, config: &RunConfig, stepper: &StepperConfig) -> Result<()> {
    let mut text = String::new();
    text.push_str(&format!("version = {}\n", env!("CARGO_PKG_VERSION")));
    text.push_str(&format!(
        "seed = {}\n",
        config
            .seed()
            .map(|s| s.to_string())
            .unwrap_or_else(|| "none".into())
    ));
    text.push_str(&format!("effective_dt = {}\n", stepper.dt));
    text.push_str(&format!("k_max = {}\n", config.grid_size / 2 - 1));
    text.push('\n');
    text.push_str(&config.to_text());
    fs::write(dir.join("manifest.txt"), text)?;
    Ok(())
}

pub fn write_diagnostics(dir: &Path, records: &[DiagnosticsRecord]) -> Result<()> {
    let mut file = fs::File::create(dir.join("diagnostics.csv"))?;
    export(records, &mut file)?;
    file.flush()?;
    Ok(())
}

fn write_snapshot(path: &Path, field: &SpectralField) -> Result<()> {
    let mut out = String::new();
    out.push_str(SNAPSHOT_HEADER);
    out.push('\n');
    for (k, c) in field.half_spectrum().iter().enumerate() {
        out.push_str(&format!("{k},{:.16e},{:.16e}\n", c.re, c.im));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Observer writing coefficient snapshots every `cadence` accepted steps.
/// I/O failures are stashed and surfaced after the run (observers are
/// infallible callbacks).
pub struct SnapshotWriter {
    dir: PathBuf,
    cadence: usize,
    error: RefCell<Option<Error>>,
    last_written: RefCell<Option<u64>>,
}

impl SnapshotWriter {
    pub fn new(dir: &Path, cadence: usize) -> Self {
        SnapshotWriter {
            dir: dir.to_path_buf(),
            cadence: cadence.max(1),
            error: RefCell::new(None),
            last_written: RefCell::new(None),
        }
    }

    fn path_for(&self, step: u64) -> PathBuf {
        self.dir.join(format!("snapshot_{step:08}.csv"))
    }

    pub fn observe(&self, state: &SimState) {
        if state.step_index % self.cadence as u64 != 0 {
            return;
        }
        if self.error.borrow().is_some() {
            return;
        }
        if let Err(e) = write_snapshot(&self.path_for(state.step_index), &state.g) {
            *self.error.borrow_mut() = Some(e);
            return;
        }
        *self.last_written.borrow_mut() = Some(state.step_index);
    }

    /// Ensure the final state is on disk even off-cadence.
    pub fn write_final(&self, state: &SimState) -> Result<()> {
        if *self.last_written.borrow() == Some(state.step_index) {
            return Ok(());
        }
        write_snapshot(&self.path_for(state.step_index), &state.g)
    }

    pub fn take_error(&self) -> Result<()> {
        match self.error.borrow_mut().take() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

/// Static matplotlib script rendering the norm history and a few interface
/// snapshots; emitted next to the data it reads.
pub fn write_plot_script(dir: &Path) -> Result<()> {
    fs::write(dir.join("plot.py"), PLOT_SCRIPT)?;
    Ok(())
}

const PLOT_SCRIPT: &str = r#"#!/usr/bin/env python3
"""Render diagnostics.csv and snapshot_*.csv produced by a tumor-sim run."""
import csv
import glob
import math
import os
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))

def read_diagnostics(path):
    rows = []
    with open(path) as fh:
        for row in csv.DictReader(fh):
            rows.append({k: float(v) for k, v in row.items()})
    return rows

def read_snapshot(path):
    modes = []
    with open(path) as fh:
        for row in csv.DictReader(fh):
            modes.append((int(row["k"]), float(row["re"]), float(row["im"])))
    return modes

def reconstruct(modes, n=512):
    xs = [-math.pi + 2.0 * math.pi * j / n for j in range(n)]
    ys = []
    for x in xs:
        v = 0.0
        for k, re, im in modes:
            if k == 0:
                v += re
            else:
                v += 2.0 * (re * math.cos(k * x) - im * math.sin(k * x))
        ys.append(v)
    return xs, ys

diag = read_diagnostics(os.path.join(here, "diagnostics.csv"))
if diag:
    ts = [r["t"] for r in diag]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(ts, [r["a1_hom"] for r in diag], label=r"$\|g\|_{\dot A^1}$")
    ax.plot(ts, [r["a4_hom"] for r in diag], label=r"$\|g\|_{\dot A^4}$")
    ax.plot(ts, [r["smallness_margin"] for r in diag], label="smallness margin")
    ax.set_xlabel("t")
    ax.legend()
    ax.set_title("norm history")
    fig.tight_layout()
    fig.savefig(os.path.join(here, "norms.png"), dpi=150)

snaps = sorted(glob.glob(os.path.join(here, "snapshot_*.csv")))
if snaps:
    picks = snaps if len(snaps) <= 6 else snaps[:: max(1, len(snaps) // 6)][:6]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for path in picks:
        xs, ys = reconstruct(read_snapshot(path))
        ax.plot(xs, ys, label=os.path.basename(path).replace(".csv", ""))
    ax.set_xlabel(r"$x_1$")
    ax.set_ylabel("g")
    ax.legend(fontsize=7)
    ax.set_title("interface snapshots")
    fig.tight_layout()
    fig.savefig(os.path.join(here, "interface.png"), dpi=150)

print("wrote", os.path.join(here, "norms.png"), "and interface.png" if snaps else "")
"#;
