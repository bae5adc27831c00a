//! `wrad`: seeded verification runs, G₁ certification and numerical radius
//! evaluation from the command line.
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 on
//! configuration, parse or I/O errors.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use g1rad::g1gen::DEFAULT_CIRCLE_SAMPLES;
use g1rad::suite::{self, render_report, ReportFormat, Suite, TrialConfig};
use g1rad::wradius::{numerical_radius, DEFAULT_GRID_POINTS, MIN_GRID_POINTS};
use g1rad::Error;

#[derive(Parser)]
#[command(
    name = "wrad",
    version,
    about = "Numerical radius inequalities for G1 operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the randomized inequality suites and write a report.
    Verify(VerifyArgs),
    /// Certify the G1 growth condition for an operator file.
    Certify {
        #[arg(long)]
        input: PathBuf,
        /// Points per certification circle.
        #[arg(long, default_value_t = DEFAULT_CIRCLE_SAMPLES)]
        samples: usize,
    },
    /// Print the numerical radius of a matrix file.
    Wrad {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        grid: usize,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Comma-separated suite names, or "all".
    #[arg(long, default_value = "all")]
    suites: String,
    /// Comma-separated dimensions.
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,6,8")]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 0.8)]
    rho_max: f64,
    #[arg(long, default_value_t = 8)]
    atoms: usize,
    #[arg(long, default_value_t = 512)]
    nodes: usize,
    #[arg(long, default_value = "json")]
    format: String,
    /// Report destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Rerun a single trial, given as SUITE:DIM:TRIAL.
    #[arg(long)]
    replay: Option<String>,
}

enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(args) => verify(args),
        Command::Certify { input, samples } => certify(input, samples),
        Command::Wrad { input, grid } => wrad(input, grid),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn parse_suites(list: &str) -> g1rad::Result<Vec<Suite>> {
    if list.trim() == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    list.split(',').map(|s| s.trim().parse()).collect()
}

fn parse_replay(target: &str) -> g1rad::Result<(Suite, usize, usize)> {
    let bad = || Error::Config(format!("--replay expects SUITE:DIM:TRIAL, got {target:?}"));
    let parts: Vec<&str> = target.split(':').collect();
    let [suite, dim, trial] = parts.as_slice() else {
        return Err(bad());
    };
    Ok((
        suite.parse()?,
        dim.parse().map_err(|_| bad())?,
        trial.parse().map_err(|_| bad())?,
    ))
}

fn write_output(out: Option<&PathBuf>, text: &str) -> g1rad::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> g1rad::Result<Outcome> {
    let format: ReportFormat = args.format.parse()?;
    let config = TrialConfig {
        master_seed: args.seed,
        dims: args.dims,
        trials_per_suite: args.trials,
        rho_max: args.rho_max,
        atoms: args.atoms,
        suites: parse_suites(&args.suites)?,
        quadrature_nodes: args.nodes,
        report_format: format,
    };

    if let Some(target) = &args.replay {
        let (suite, dim, trial) = parse_replay(target)?;
        let details = suite::replay(&config, suite, dim, trial)?;
        let text = match format {
            ReportFormat::Json => serde_json::to_string_pretty(&details)? + "\n",
            ReportFormat::Csv => render_report(&config, &[], &details, format)?,
        };
        write_output(args.out.as_ref(), &text)?;
        return Ok(if details.iter().all(|r| r.pass) {
            Outcome::Pass
        } else {
            Outcome::Fail
        });
    }

    let batch = suite::run(&config)?;
    for s in &batch.suites {
        eprintln!(
            "{:<9} {:>6}/{:<6} max_ratio {:.6} (seed {}, dim {}, trial {})  {:.2}s",
            s.suite.name(),
            s.passed,
            s.total,
            s.max_ratio,
            s.argmax_seed,
            s.argmax_dim,
            s.argmax_trial,
            s.wall_time
        );
    }
    let text = render_report(&batch.config, &batch.suites, &batch.details, format)?;
    write_output(args.out.as_ref(), &text)?;
    Ok(if batch.all_passed() {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}

fn certify(input: PathBuf, samples: usize) -> g1rad::Result<Outcome> {
    match suite::load_operator_with(&input, samples) {
        Ok(op) => {
            let summary = serde_json::json!({
                "n": op.n(),
                "d": op.d(),
                "certificate": op.certificate(),
                "certified": true,
            });
            println!("{}", serde_json::to_string_pretty(&summary)?);
            Ok(Outcome::Pass)
        }
        Err(e @ (Error::CertificationFailed { .. } | Error::SpectrumOnBoundary { .. })) => {
            eprintln!("not certified: {e}");
            Ok(Outcome::Fail)
        }
        Err(e) => Err(e),
    }
}

fn wrad(input: PathBuf, grid: usize) -> g1rad::Result<Outcome> {
    if grid < MIN_GRID_POINTS {
        return Err(Error::Config(format!(
            "--grid must be at least {MIN_GRID_POINTS}"
        )));
    }
    let a = suite::load_matrix(&input)?;
    let r = numerical_radius(&a, grid);
    let summary = serde_json::json!({
        "n": a.n(),
        "value": r.value,
        "theta_star": r.theta_star,
        "grid_points": r.grid_points,
    });
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(Outcome::Pass)
}
