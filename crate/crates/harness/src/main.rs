//! Command-line entry point.
//!
//! ```text
//! simulate       --scenario <file> --out <dir> [--seed N]
//!                [--integrator rk4|lgvi] [--override-gain-check]
//! validate-gains --scenario <file>
//! observer-suite --out <dir>
//! adrc-suite     --out <dir>
//! ```
//!
//! Exit codes: 0 success, 2 gain-validation failure, 1 runtime error.
//! The `SEED` environment variable overrides the config seed; an explicit
//! `--seed` flag overrides both.

use adrc_harness::csv::{write_csv, write_metrics};
use adrc_harness::metrics::compute_metrics;
use adrc_harness::runner::{run_scenario, validation_report, RunError, RunRecord};
use adrc_harness::scenario::{parse_scenario, Integrator, Scenario};
use adrc_harness::{adrc_suite_scenarios, observer_suite_scenarios};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const USAGE: &str = "usage:
  adrc simulate --scenario <file> --out <dir> [--seed N] [--integrator rk4|lgvi] [--override-gain-check]
  adrc validate-gains --scenario <file>
  adrc observer-suite --out <dir>
  adrc adrc-suite --out <dir>";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let Some(command) = args.first() else {
        eprintln!("{USAGE}");
        return ExitCode::from(1);
    };
    let result = match command.as_str() {
        "simulate" => cmd_simulate(&args[1..]),
        "validate-gains" => cmd_validate(&args[1..]),
        "observer-suite" => cmd_suite(&args[1..], observer_suite_scenarios()),
        "adrc-suite" => cmd_suite(&args[1..], adrc_suite_scenarios()),
        "--help" | "-h" | "help" => {
            println!("{USAGE}");
            return ExitCode::SUCCESS;
        }
        other => {
            eprintln!("unknown command `{other}`\n{USAGE}");
            return ExitCode::from(1);
        }
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

struct Options {
    scenario: Option<PathBuf>,
    out: Option<PathBuf>,
    seed: Option<u64>,
    integrator: Option<Integrator>,
    override_gain_check: bool,
}

fn parse_options(args: &[String]) -> Result<Options, String> {
    let mut opts = Options {
        scenario: None,
        out: None,
        seed: None,
        integrator: None,
        override_gain_check: false,
    };
    let mut iter = args.iter();
    while let Some(flag) = iter.next() {
        match flag.as_str() {
            "--scenario" => {
                let value = iter.next().ok_or("--scenario requires a path")?;
                opts.scenario = Some(PathBuf::from(value));
            }
            "--out" => {
                let value = iter.next().ok_or("--out requires a directory")?;
                opts.out = Some(PathBuf::from(value));
            }
            "--seed" => {
                let value = iter.next().ok_or("--seed requires an integer")?;
                opts.seed = Some(value.parse::<u64>().map_err(|e| e.to_string())?);
            }
            "--integrator" => {
                let value = iter.next().ok_or("--integrator requires rk4|lgvi")?;
                opts.integrator = Some(match value.as_str() {
                    "rk4" => Integrator::Rk4,
                    "lgvi" => Integrator::Lgvi,
                    other => return Err(format!("unknown integrator `{other}`")),
                });
            }
            "--override-gain-check" => opts.override_gain_check = true,
            other => return Err(format!("unknown flag `{other}`\n{USAGE}")),
        }
    }
    Ok(opts)
}

fn load_scenario(path: &Path) -> Result<Scenario, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut sc = parse_scenario(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    if sc.name == "scenario" {
        if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
            sc.name = stem.to_string();
        }
    }
    Ok(sc)
}

fn apply_seed_overrides(sc: &mut Scenario, flag_seed: Option<u64>) {
    if let Ok(value) = std::env::var("SEED") {
        if let Ok(seed) = value.parse::<u64>() {
            sc.seed = seed;
            sc.noise.seed = seed;
        }
    }
    if let Some(seed) = flag_seed {
        sc.seed = seed;
        sc.noise.seed = seed;
    }
}

fn cmd_simulate(args: &[String]) -> Result<ExitCode, String> {
    let opts = parse_options(args)?;
    let path = opts.scenario.ok_or(format!("--scenario is required\n{USAGE}"))?;
    let out_dir = opts.out.ok_or(format!("--out is required\n{USAGE}"))?;
    let mut sc = load_scenario(&path)?;
    apply_seed_overrides(&mut sc, opts.seed);
    if let Some(integrator) = opts.integrator {
        sc.integrator = integrator;
    }
    if opts.override_gain_check {
        sc.override_gain_check = true;
    }

    match run_scenario(&sc) {
        Ok(record) => {
            std::fs::create_dir_all(&out_dir).map_err(|e| e.to_string())?;
            let csv_path = out_dir.join(format!("{}.csv", sc.name));
            write_csv(&record, &csv_path).map_err(|e| e.to_string())?;
            let metrics = compute_metrics(&record);
            write_metrics(&[metrics], &out_dir.join("metrics.csv"))
                .map_err(|e| e.to_string())?;
            println!("wrote {}", csv_path.display());
            Ok(ExitCode::SUCCESS)
        }
        Err(RunError::GainValidationFailed(details)) => {
            eprintln!("gain validation failed: {details}");
            eprintln!("(re-run with --override-gain-check to force the simulation)");
            Ok(ExitCode::from(2))
        }
        Err(other) => Err(other.to_string()),
    }
}

fn cmd_validate(args: &[String]) -> Result<ExitCode, String> {
    let opts = parse_options(args)?;
    let path = opts.scenario.ok_or(format!("--scenario is required\n{USAGE}"))?;
    let sc = load_scenario(&path)?;
    let (report, ok) = validation_report(&sc).map_err(|e| e.to_string())?;
    print!("{report}");
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn cmd_suite(args: &[String], scenarios: Vec<Scenario>) -> Result<ExitCode, String> {
    let opts = parse_options(args)?;
    let out_dir = opts.out.ok_or(format!("--out is required\n{USAGE}"))?;
    std::fs::create_dir_all(&out_dir).map_err(|e| e.to_string())?;

    // Runs are independent; execute them concurrently and assemble the
    // metrics summary afterwards in the original order.
    let mut results: Vec<Option<Result<RunRecord, RunError>>> =
        (0..scenarios.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for sc in &scenarios {
            handles.push(scope.spawn(move || run_scenario(sc)));
        }
        for (slot, handle) in results.iter_mut().zip(handles) {
            *slot = Some(handle.join().expect("scenario thread panicked"));
        }
    });

    let mut metrics = Vec::new();
    for result in results.into_iter().flatten() {
        let record = result.map_err(|e| e.to_string())?;
        let csv_path = out_dir.join(format!("{}.csv", record.name));
        write_csv(&record, &csv_path).map_err(|e| e.to_string())?;
        metrics.push(compute_metrics(&record));
        println!("wrote {}", csv_path.display());
    }
    write_metrics(&metrics, &out_dir.join("metrics.csv")).map_err(|e| e.to_string())?;
    println!("wrote {}", out_dir.join("metrics.csv").display());
    Ok(ExitCode::SUCCESS)
}
