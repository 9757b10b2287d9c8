//! End-to-end Faber-Krahn checks over a corpus.

use std::time::Instant;

use hermite_robin_core::geometry::{isoperimetric_g, measure_2d, perimeter_2d, symmetrize};
use hermite_robin_core::levelset::compare_levels_2d;
use hermite_robin_core::solver_1d::solve_lambda1;
use hermite_robin_core::solver_2d::lambda1_2d_extrapolated;
use hermite_robin_core::{Domain2D, HalfLineProblem};
use rayon::prelude::*;

use crate::corpus::CorpusEntry;
use crate::report::{ReportRow, StageTimes, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    /// Coarse mesh size; the fine solve uses h/2.
    pub h: f64,
    pub tolerance_fk: f64,
    pub equality_band: f64,
    pub tol_1d: f64,
    /// Levels sampled for the comparison diagnostic (0 disables it).
    pub comparison_levels: usize,
    pub comparison_tol: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            h: 0.1,
            tolerance_fk: 1e-3,
            equality_band: 5e-3,
            tol_1d: 1e-10,
            comparison_levels: 20,
            comparison_tol: 1e-2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Geometry,
    Solve1d,
    Solve2d,
    Levels,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Stage::Geometry => "geometry",
            Stage::Solve1d => "1D solve",
            Stage::Solve2d => "2D solve",
            Stage::Levels => "level comparison",
        })
    }
}

#[derive(Debug, thiserror::Error)]
#[error("{entry}: {stage} failed: {source}")]
pub struct HarnessError {
    pub entry: String,
    pub stage: Stage,
    #[source]
    pub source: hermite_robin_core::Error,
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// One report row: γ, σ#, λ₁(Ω#), extrapolated λ₁(Ω), isoperimetric gap and
/// the level comparison diagnostic.
pub fn verify_faber_krahn(
    name: &str,
    domain: &Domain2D,
    beta: f64,
    settings: &Settings,
) -> Result<ReportRow, HarnessError> {
    let at = |stage| move |source| HarnessError { entry: name.to_string(), stage, source };
    let mut times = StageTimes::default();

    let start = Instant::now();
    let gamma = measure_2d(domain).map_err(at(Stage::Geometry))?;
    let sigma_sharp = symmetrize(gamma).map_err(at(Stage::Geometry))?;
    let perimeter = perimeter_2d(domain).map_err(at(Stage::Geometry))?;
    let g = isoperimetric_g(gamma).map_err(at(Stage::Geometry))?;
    times.geometry_ms = ms(start);

    let start = Instant::now();
    let problem = HalfLineProblem::new(sigma_sharp, beta).map_err(at(Stage::Solve1d))?;
    let sym = solve_lambda1(problem, settings.tol_1d).map_err(at(Stage::Solve1d))?;
    times.solve_1d_ms = ms(start);

    let start = Instant::now();
    let ex = lambda1_2d_extrapolated(domain, beta, settings.h).map_err(at(Stage::Solve2d))?;
    times.solve_2d_ms = ms(start);

    let start = Instant::now();
    let (comparison_fraction, below_lambda_fraction) = if settings.comparison_levels > 0 {
        // diagnostic only, on the coarse solution
        let c = &ex.coarse;
        let s = compare_levels_2d(
            &c.mesh,
            &c.u_dofs,
            beta,
            c.lambda1,
            &sym,
            settings.comparison_levels,
            settings.comparison_tol,
        )
        .map_err(at(Stage::Levels))?;
        (s.comparison_fraction, s.below_lambda_fraction)
    } else {
        (f64::NAN, f64::NAN)
    };
    times.levels_ms = ms(start);

    let margin = ex.lambda1 - sym.lambda1;
    let near_equality = margin.abs() <= settings.equality_band;
    let is_half_plane = domain.is_half_plane();
    Ok(ReportRow {
        name: name.to_string(),
        kind: domain.kind_name().to_string(),
        beta,
        gamma,
        sigma_sharp,
        lambda1_symmetrized: sym.lambda1,
        lambda1_domain: ex.lambda1,
        lambda1_coarse: ex.coarse.lambda1,
        lambda1_fine: ex.fine.lambda1,
        margin,
        perimeter,
        isoperimetric_margin: perimeter - g,
        is_half_plane,
        near_equality,
        equality_consistent: near_equality == is_half_plane,
        fem_residual: ex.coarse.residual.max(ex.fine.residual),
        dofs: ex.fine.dofs(),
        comparison_fraction,
        below_lambda_fraction,
        passed: margin >= -settings.tolerance_fk,
        runtime_ms: times,
    })
}

/// Verifies every entry concurrently; rows come back in corpus order.
pub fn run_corpus(entries: &[CorpusEntry], settings: &Settings) -> Result<VerificationReport, HarnessError> {
    let rows = entries
        .par_iter()
        .map(|e| {
            let domain = e.domain().map_err(|reason| HarnessError {
                entry: e.name.clone(),
                stage: Stage::Geometry,
                source: hermite_robin_core::Error::Domain(reason),
            })?;
            verify_faber_krahn(&e.name, &domain, e.beta, settings)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VerificationReport::new(rows))
}
