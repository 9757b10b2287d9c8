use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use hermite_robin::mesh_io::mesh_to_string;
use hermite_robin::report::fmt_real;
use hermite_robin::{load_corpus, run_corpus, write_report, Settings};
use hermite_robin_core::geometry::{isoperimetric_g, symmetrize};
use hermite_robin_core::solver_1d::{lambda1_sweep, solve_lambda1};
use hermite_robin_core::solver_2d::lambda1_2d;
use hermite_robin_core::HalfLineProblem;

#[derive(Parser)]
#[command(
    name = "hermite-robin",
    version,
    about = "Robin eigenvalues of the Hermite operator and Gaussian Faber-Krahn checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// First eigenvalue of the half-line (-inf, sigma) with Robin parameter beta.
    Solve1d {
        #[arg(long, allow_hyphen_values = true)]
        sigma: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// CSV file with columns t,beta_t,w.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// First eigenvalue of a corpus domain on a mesh of size h.
    Solve2d {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        name: String,
        #[arg(long, default_value_t = 0.1)]
        h: f64,
        #[arg(long)]
        mesh_dump: Option<PathBuf>,
    },
    /// Threshold of the half-plane with the given Gaussian measure, and g(measure).
    Symmetrize {
        #[arg(long)]
        measure: f64,
    },
    /// lambda1 over steps+1 equally spaced sigma values, as CSV on stdout.
    Sweep {
        #[arg(long)]
        beta: f64,
        #[arg(long, allow_hyphen_values = true)]
        sigma_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        sigma_max: f64,
        #[arg(long)]
        steps: usize,
    },
    /// Runs the Faber-Krahn check over a corpus and writes report.csv and summary.json.
    Verify {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        h: f64,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::Solve1d { sigma, beta, tol, trace } => {
            let eig = solve_lambda1(HalfLineProblem::new(sigma, beta)?, tol)?;
            writeln!(out, "lambda1 = {}", fmt_real(eig.lambda1))?;
            if let Some(path) = trace {
                let mut s = String::from("t,beta_t,w\n");
                for (&t, &w) in eig.grid.iter().zip(&eig.w_values) {
                    let b = eig.beta_at(t).ok_or_else(|| anyhow!("trace has no value at t = {t}"))?;
                    s.push_str(&format!("{},{},{}\n", fmt_real(t), fmt_real(b), fmt_real(w)));
                }
                std::fs::write(&path, s).with_context(|| format!("writing {}", path.display()))?;
            }
        }
        Command::Solve2d { corpus, name, h, mesh_dump } => {
            let entries = load_corpus(&corpus)?;
            let entry = entries
                .iter()
                .find(|e| e.name == name)
                .ok_or_else(|| anyhow!("no entry named {name:?} in {}", corpus.display()))?;
            let domain = entry.domain().map_err(|e| anyhow!("{name}: {e}"))?;
            let r = lambda1_2d(&domain, entry.beta, h)?;
            writeln!(out, "lambda1 = {}", fmt_real(r.lambda1))?;
            writeln!(out, "residual = {}", fmt_real(r.residual))?;
            writeln!(out, "dofs = {}", r.dofs())?;
            if let Some(path) = mesh_dump {
                std::fs::write(&path, mesh_to_string(&r.mesh))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
        }
        Command::Symmetrize { measure } => {
            writeln!(out, "sigma = {}", fmt_real(symmetrize(measure)?))?;
            writeln!(out, "g = {}", fmt_real(isoperimetric_g(measure)?))?;
        }
        Command::Sweep { beta, sigma_min, sigma_max, steps } => {
            if steps == 0 || sigma_max.is_nan() || sigma_min.is_nan() || sigma_max <= sigma_min {
                bail!("need steps >= 1 and sigma-max > sigma-min");
            }
            let grid: Vec<f64> =
                (0..=steps).map(|i| sigma_min + (sigma_max - sigma_min) * i as f64 / steps as f64).collect();
            writeln!(out, "sigma,lambda1")?;
            for (s, l) in lambda1_sweep(&grid, beta, 1e-10)? {
                writeln!(out, "{},{}", fmt_real(s), fmt_real(l))?;
            }
        }
        Command::Verify { corpus, out: dir, h } => {
            let entries = load_corpus(&corpus)?;
            let report = run_corpus(&entries, &Settings { h, ..Settings::default() })?;
            write_report(&report, &dir).with_context(|| format!("writing report to {}", dir.display()))?;
            for r in &report.rows {
                writeln!(out, "{:<24} margin {:>12.4e}  {}", r.name, r.margin, if r.passed { "ok" } else { "FAILED" })?;
            }
            return Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
    }
    Ok(ExitCode::SUCCESS)
}
