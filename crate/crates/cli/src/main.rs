//! Command-line driver: parse a run configuration, integrate the interface
//! equation, and write diagnostics, coefficient snapshots, a manifest and a
//! plot script into the output directory.

mod output;
mod sweep;

use clap::Parser;
use std::path::PathBuf;
use std::process::ExitCode;

use tumor_interface::config::{parse_config, RunConfig};
use tumor_interface::diagnostics::{
    dissipation_monitor, DiagnosticsBuffer, DEFAULT_DISSIPATION_C,
};
use tumor_interface::error::Error;
use tumor_interface::model::RhsConfig;
use tumor_interface::oracle;
use tumor_interface::stepper::{run, Observer, SimState, StepperConfig};

const EXIT_CONFIG: u8 = 2;
const EXIT_BLOW_UP: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "tumor-sim",
    about = "Pseudospectral solver for a nonlocal tumor-interface evolution equation"
)]
struct Args {
    /// Run configuration file.
    #[arg(long, value_name = "PATH", required_unless_present = "verify")]
    config: Option<PathBuf>,

    /// Output directory (overrides the config's [output] dir).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Random seed override for the random-small initial preset.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,

    /// Parameter sweep, e.g. `--sweep eps=0.05,0.1,0.2`; each value runs in
    /// its own subdirectory of the output directory.
    #[arg(long, value_name = "KEY=V1,V2,...")]
    sweep: Option<String>,

    /// Run the built-in oracle suite and exit.
    #[arg(long)]
    verify: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();

    if args.verify {
        return run_verify();
    }

    let config_path = args.config.expect("clap enforces --config without --verify");
    let text = match std::fs::read_to_string(&config_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", config_path.display());
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let mut config = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    if let Some(seed) = args.seed {
        config.override_seed(seed);
    }
    let out_root = args
        .out
        .unwrap_or_else(|| PathBuf::from(config.out_dir.clone()));
    let base_dir = config_path.parent().map(PathBuf::from);

    let runs = match &args.sweep {
        Some(spec) => match sweep::expand(&config, spec) {
            Ok(runs) => runs,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_CONFIG);
            }
        },
        None => vec![(out_root.clone(), config.clone())],
    };
    let sweeping = args.sweep.is_some();

    let mut worst = ExitCode::SUCCESS;
    for (subdir, run_cfg) in runs {
        let dir = if sweeping { out_root.join(&subdir) } else { subdir };
        match execute_run(&run_cfg, &dir, base_dir.as_deref()) {
            Ok(()) => {
                println!("run complete: {}", dir.display());
            }
            Err(e) => {
                let code = match &e {
                    Error::BlowUp { .. } => {
                        eprintln!("error: {e} (partial output in {})", dir.display());
                        EXIT_BLOW_UP
                    }
                    Error::Config { .. } | Error::InvalidInput(_) | Error::Csv { .. } => {
                        eprintln!("error: {e}");
                        EXIT_CONFIG
                    }
                    other => {
                        eprintln!("error: {other}");
                        1
                    }
                };
                worst = ExitCode::from(code);
            }
        }
    }
    worst
}

fn run_verify() -> ExitCode {
    let mut all_pass = true;
    for report in oracle::verify_suite() {
        let status = if report.pass() { "PASS" } else { "FAIL" };
        all_pass &= report.pass();
        println!(
            "{status} {}: max error {:.3e} (tolerance {:.1e})",
            report.case, report.max_error, report.tolerance
        );
    }
    if all_pass {
        println!("verification: all cases passed");
        ExitCode::SUCCESS
    } else {
        println!("verification: FAILURES present");
        ExitCode::from(1)
    }
}

fn execute_run(
    config: &RunConfig,
    dir: &std::path::Path,
    base_dir: Option<&std::path::Path>,
) -> Result<(), Error> {
    std::fs::create_dir_all(dir)?;

    let (s_profile, b_profile) = config.materialize_profiles(base_dir)?;
    let g0 = config.build_initial()?;
    let rhs = RhsConfig {
        mode: config.mode,
        params: config.params,
        s_profile,
        b_profile,
        g0: g0.clone(),
    }
    .into_rhs()?;

    let stepper_cfg = StepperConfig {
        dt: config.effective_dt(),
        scheme: config.scheme,
        t_end: config.t_end,
        cfl_safety: config.cfl_safety,
        adaptive: config.adaptive,
    };
    stepper_cfg.validate()?;

    output::write_manifest(dir, config, &stepper_cfg)?;
    output::write_plot_script(dir)?;

    let mut diagnostics = DiagnosticsBuffer::new();
    let snapshots = output::SnapshotWriter::new(dir, config.snapshot_every);

    let outcome = {
        let mut observers: Vec<Observer> = vec![
            Box::new(|state: &SimState| diagnostics.push_state(state)),
            Box::new(|state: &SimState| snapshots.observe(state)),
        ];
        run(SimState::new(g0), &stepper_cfg, &rhs, &mut observers)
    };

    // Diagnostics and snapshots for everything observed so far are written
    // even when the trajectory blew up.
    if diagnostics.records.len() >= 2 {
        let _ = dissipation_monitor(
            &mut diagnostics.records,
            &config.params,
            DEFAULT_DISSIPATION_C,
        );
    }
    output::write_diagnostics(dir, &diagnostics.records)?;
    snapshots.take_error()?;

    let final_state = outcome?;
    snapshots.write_final(&final_state)?;
    Ok(())
}
