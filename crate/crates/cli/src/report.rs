//! CSV and JSON serialization of verification reports.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use serde::Serialize;

/// Wall-clock time per pipeline stage, milliseconds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct StageTimes {
    pub geometry_ms: f64,
    pub solve_1d_ms: f64,
    pub solve_2d_ms: f64,
    pub levels_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub name: String,
    pub kind: String,
    pub beta: f64,
    pub gamma: f64,
    pub sigma_sharp: f64,
    pub lambda1_symmetrized: f64,
    /// Richardson value from the h and h/2 solves.
    pub lambda1_domain: f64,
    pub lambda1_coarse: f64,
    pub lambda1_fine: f64,
    pub margin: f64,
    pub perimeter: f64,
    /// P_φ(Ω) - g(γ(Ω)).
    pub isoperimetric_margin: f64,
    pub is_half_plane: bool,
    pub near_equality: bool,
    /// near_equality agrees with is_half_plane.
    pub equality_consistent: bool,
    pub fem_residual: f64,
    pub dofs: usize,
    /// Fraction of sampled levels where the symmetrized functional is below the domain one.
    pub comparison_fraction: f64,
    /// Fraction of sampled levels where the domain functional is below λ₁(Ω).
    pub below_lambda_fraction: f64,
    pub passed: bool,
    pub runtime_ms: StageTimes,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub rows: Vec<ReportRow>,
}

impl VerificationReport {
    pub fn new(rows: Vec<ReportRow>) -> Self {
        Self { passed: rows.iter().all(|r| r.passed), rows }
    }
}

/// 17 significant digits.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

const COLUMNS: &str =
    "name,kind,beta,gamma,sigma_sharp,lambda1_symmetrized,lambda1_domain,lambda1_coarse,lambda1_fine,\
margin,perimeter,isoperimetric_margin,is_half_plane,near_equality,equality_consistent,fem_residual,dofs,\
comparison_fraction,below_lambda_fraction,passed";

/// The CSV report. Timings are left out so the bytes depend only on the inputs.
pub fn to_csv(report: &VerificationReport) -> String {
    let mut s = String::new();
    s.push_str(COLUMNS);
    s.push('\n');
    for r in &report.rows {
        let reals = [
            r.beta,
            r.gamma,
            r.sigma_sharp,
            r.lambda1_symmetrized,
            r.lambda1_domain,
            r.lambda1_coarse,
            r.lambda1_fine,
            r.margin,
            r.perimeter,
            r.isoperimetric_margin,
        ];
        let _ = write!(s, "{},{}", csv_field(&r.name), r.kind);
        for x in reals {
            let _ = write!(s, ",{}", fmt_real(x));
        }
        let _ = writeln!(
            s,
            ",{},{},{},{},{},{},{},{}",
            r.is_half_plane,
            r.near_equality,
            r.equality_consistent,
            fmt_real(r.fem_residual),
            r.dofs,
            fmt_real(r.comparison_fraction),
            fmt_real(r.below_lambda_fraction),
            r.passed
        );
    }
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Writes `report.csv` and `summary.json` into `dir`, creating it if needed.
pub fn write_report(report: &VerificationReport, dir: &Path) -> io::Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("report.csv"), to_csv(report))?;
    let json = serde_json::to_string_pretty(report).map_err(io::Error::other)?;
    std::fs::write(dir.join("summary.json"), json + "\n")
}
