//! The level-set functional
//!
//! `F(U_t, ψ) = (-∫_{U_t} ψ²φ + ∫_{∂U_t^int} ψφ + β∫_{∂U_t^ext} φ) / γ(U_t)`
//!
//! on superlevel sets `U_t = {u > t}`, in 1D on the half-line eigenpair and in
//! 2D on a P1 finite element eigenfunction (marching triangles).

use alloc::vec::Vec;

use crate::error::{domain_err, Result};
use crate::geometry::{gauss_density_2d, symmetrize, Point, SegmentFlag};
use crate::mesh::Mesh2D;
use crate::quadrature::{triangle_rule_7, GaussLegendre, Integrator};
use crate::solver_1d::Eigenpair1D;
use crate::special::{gauss_cdf, gauss_density_1d};

/// How far left of the truncation point the 1D volume integrals extend.
const TAIL_WIDTH: f64 = 10.0;

/// Interior boundary of a superlevel set.
#[derive(Debug, Clone, PartialEq)]
pub enum InteriorBoundary {
    /// 1D: the points s with u(s) = t inside the interval.
    Points(Vec<f64>),
    /// 2D: the marching-triangles polyline pieces.
    Segments(Vec<[Point; 2]>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelSetDecomposition {
    pub t: f64,
    /// γ(U_t)
    pub u_t_measure: f64,
    pub interior_boundary: InteriorBoundary,
    /// ∫_{∂U_t^int} φ
    pub interior_weight: f64,
    /// ∫_{∂U_t^ext} φ (physical boundary only)
    pub exterior_weight: f64,
}

/// (volume, interior, exterior) terms before division by the measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalParts {
    pub volume: f64,
    pub interior: f64,
    pub exterior: f64,
}

impl FunctionalParts {
    /// The single formula used everywhere F is formed.
    pub fn reassemble(&self, measure: f64) -> f64 {
        (-self.volume + self.interior + self.exterior) / measure
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalValue {
    pub t: f64,
    pub value: f64,
    pub parts: FunctionalParts,
    pub measure: f64,
}

impl FunctionalValue {
    pub fn new(t: f64, parts: FunctionalParts, measure: f64) -> Self {
        Self { t, value: parts.reassemble(measure), parts, measure }
    }
}

// ---------------------------------------------------------------------------
// 1D

/// ψ̄ = -w'/w of the eigenpair, extended left of the grid by the asymptotic
/// λ/|x| that also seeds the Riccati trace.
pub fn psi_bar(eig: &Eigenpair1D) -> impl Fn(f64) -> f64 + '_ {
    let left = eig.trace.left();
    let lambda = eig.lambda1;
    move |x| {
        if x < left {
            lambda / x.abs()
        } else {
            eig.beta_at(x.min(eig.problem.sigma)).unwrap_or(0.0)
        }
    }
}

/// The point s ∈ [-T, σ) with w(s) = t, or None when t ≤ w(σ) and U_t is all
/// of I_σ.
pub fn superlevel_point(eig: &Eigenpair1D, t: f64) -> Result<Option<f64>> {
    let wmax = eig.max_w();
    if !(t > 0.0 && t < wmax) {
        return Err(domain_err!("level {t} outside the eigenfunction range (0, {wmax})"));
    }
    let ws = *eig.w_values.last().unwrap();
    if t <= ws {
        return Ok(None);
    }
    // w decreasing: locate the cell with w_i > t ≥ w_{i+1}
    let w = &eig.w_values;
    let k = w.partition_point(|&v| v > t);
    let i = k.saturating_sub(1).min(w.len() - 2);
    let (mut lo, mut hi) = (eig.grid[i], eig.grid[i + 1]);
    let target = libm::log(t);
    let f = |x: f64| libm::log(eig.w_at(x).unwrap_or(f64::NAN)) - target;
    // safeguarded Newton on the Hermite interpolant of log w (slope -β)
    let mut x = 0.5 * (lo + hi);
    for _ in 0..100 {
        let fx = f(x);
        if fx > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let d = -eig.beta_at(x).unwrap_or(0.0);
        let mut next = if d < 0.0 { x - fx / d } else { 0.5 * (lo + hi) };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) || hi - lo <= 4.0 * f64::EPSILON * x.abs().max(1.0)
        {
            return Ok(Some(next));
        }
        x = next;
    }
    Ok(Some(x))
}

/// ∫_{-∞}^{s} g φ₁ using the trace grid cells on [-T, s] and an adaptive tail.
fn integrate_left<G: Fn(f64) -> f64>(eig: &Eigenpair1D, s: f64, g: G) -> f64 {
    let left = eig.trace.left();
    let tail =
        Integrator::new(32, 1e-13).integrate_relative(left - TAIL_WIDTH, left.min(s), |x| g(x) * gauss_density_1d(x));
    if s <= left {
        return tail;
    }
    let gl = GaussLegendre::new(8);
    let mut sum = 0.0;
    for c in eig.grid.windows(2) {
        if c[0] >= s {
            break;
        }
        let b = c[1].min(s);
        sum += gl.integrate(c[0], b, |x| g(x) * gauss_density_1d(x));
    }
    tail + sum
}

/// Superlevel decomposition of the half-line eigenfunction at level t.
pub fn level_decomposition_1d(eig: &Eigenpair1D, t: f64) -> Result<LevelSetDecomposition> {
    let sigma = eig.problem.sigma;
    Ok(match superlevel_point(eig, t)? {
        Some(s) => LevelSetDecomposition {
            t,
            u_t_measure: gauss_cdf(s),
            interior_boundary: InteriorBoundary::Points(alloc::vec![s]),
            interior_weight: gauss_density_1d(s),
            exterior_weight: 0.0,
        },
        None => LevelSetDecomposition {
            t,
            u_t_measure: gauss_cdf(sigma),
            interior_boundary: InteriorBoundary::Points(Vec::new()),
            interior_weight: 0.0,
            exterior_weight: gauss_density_1d(sigma),
        },
    })
}

/// F on U = (-∞, s) ⊂ I_σ for a test function ψ of position; s = σ means the
/// whole half-line (exterior boundary {σ}).
pub fn evaluate_functional_halfline<P: Fn(f64) -> f64>(
    eig: &Eigenpair1D,
    psi: P,
    s: f64,
    t: f64,
) -> Result<FunctionalValue> {
    let sigma = eig.problem.sigma;
    if !(s <= sigma) || s.is_nan() {
        return Err(domain_err!("superlevel endpoint {s} outside (-∞, {sigma}]"));
    }
    let volume = integrate_left(eig, s, |x| {
        let p = psi(x);
        p * p
    });
    let (interior, exterior) =
        if s < sigma { (psi(s) * gauss_density_1d(s), 0.0) } else { (0.0, eig.problem.beta * gauss_density_1d(sigma)) };
    Ok(FunctionalValue::new(t, FunctionalParts { volume, interior, exterior }, gauss_cdf(s)))
}

/// F(U_t, ψ) for the half-line eigenfunction at level t ∈ (0, max w).
pub fn evaluate_functional_1d<P: Fn(f64) -> f64>(eig: &Eigenpair1D, psi: P, t: f64) -> Result<FunctionalValue> {
    let s = superlevel_point(eig, t)?.unwrap_or(eig.problem.sigma);
    evaluate_functional_halfline(eig, psi, s, t)
}

/// `n` levels geometric between 0.02·max w and 0.98·max w.
pub fn level_grid(max_value: f64, n: usize) -> Vec<f64> {
    let (a, b) = (0.02 * max_value, 0.98 * max_value);
    if n == 1 {
        return alloc::vec![libm::sqrt(a * b)];
    }
    (0..n).map(|k| a * libm::pow(b / a, k as f64 / (n - 1) as f64)).collect()
}

/// max over the levels of |F(U_t, ψ̄) - λ₁|.
pub fn representation_residual(eig: &Eigenpair1D, t_grid: &[f64]) -> Result<f64> {
    let psi = psi_bar(eig);
    let mut worst = 0.0f64;
    for &t in t_grid {
        let f = evaluate_functional_1d(eig, &psi, t)?;
        worst = worst.max((f.value - eig.lambda1).abs());
    }
    Ok(worst)
}

/// I(t) = ∫_{U_t} (ψ - ψ̄) ψ̄ φ₁.
pub fn compute_i<P: Fn(f64) -> f64>(eig: &Eigenpair1D, psi: P, t: f64) -> Result<f64> {
    if t >= eig.max_w() {
        return Ok(0.0);
    }
    let s = superlevel_point(eig, t)?.unwrap_or(eig.problem.sigma);
    let pb = psi_bar(eig);
    Ok(integrate_left(eig, s, |x| {
        let b = pb(x);
        (psi(x) - b) * b
    }))
}

/// t ↦ β♯(r(t)) with r(t) = symmetrize(γ(U_t)) and β♯ the Riccati trace of
/// the symmetrized half-line problem.
pub struct BosselTestFunction<'a, L: Fn(f64) -> f64> {
    levels: L,
    symmetrized: &'a Eigenpair1D,
}

impl<'a, L: Fn(f64) -> f64> BosselTestFunction<'a, L> {
    /// `levels` maps a level t to γ(U_t) and must be non-increasing.
    pub fn new(levels: L, symmetrized: &'a Eigenpair1D) -> Self {
        Self { levels, symmetrized }
    }

    /// r(t), the threshold of the half-space with the measure of U_t.
    pub fn radius(&self, t: f64) -> Result<f64> {
        let m = (self.levels)(t);
        if !(m > 0.0 && m < 1.0) {
            return Err(domain_err!("level measure {m} at t = {t} outside (0, 1)"));
        }
        symmetrize(m)
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        let r = self.radius(t)?;
        let sigma = self.symmetrized.problem.sigma;
        Ok(psi_bar(self.symmetrized)(r.min(sigma)))
    }

    /// Like `value` but with ψ = 0 once U_t is empty.
    pub fn value_or_zero(&self, t: f64) -> Result<f64> {
        if (self.levels)(t) <= 0.0 {
            return Ok(0.0);
        }
        self.value(t)
    }
}

// ---------------------------------------------------------------------------
// 2D

/// Sampled level map t ↦ γ(U_t), linearly interpolated.
#[derive(Debug, Clone)]
pub struct LevelMap {
    pub levels: Vec<f64>,
    pub measures: Vec<f64>,
}

impl LevelMap {
    /// Samples γ(U_t) of a P1 function at `n` uniform levels over its range.
    pub fn sample(mesh: &Mesh2D, u: &[f64], n: usize) -> Self {
        let lo = u.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let n = n.max(2);
        let levels: Vec<f64> = (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect();
        let measures = levels.iter().map(|&t| superlevel_measure_2d(mesh, u, t)).collect();
        Self { levels, measures }
    }

    pub fn measure(&self, t: f64) -> f64 {
        let l = &self.levels;
        if t <= l[0] {
            return self.measures[0];
        }
        if t >= l[l.len() - 1] {
            return 0.0;
        }
        let k = l.partition_point(|&x| x <= t).min(l.len() - 1);
        let s = (t - l[k - 1]) / (l[k] - l[k - 1]);
        self.measures[k - 1] + s * (self.measures[k] - self.measures[k - 1])
    }
}

/// Vertices of {u > t} inside one triangle with their u values (≤ 4 points).
fn clip_triangle(p: [Point; 3], u: [f64; 3], t: f64) -> Vec<(Point, f64)> {
    let mut out = Vec::with_capacity(4);
    for i in 0..3 {
        let j = (i + 1) % 3;
        let (ini, inj) = (u[i] > t, u[j] > t);
        if ini {
            out.push((p[i], u[i]));
        }
        if ini != inj {
            let s = (t - u[i]) / (u[j] - u[i]);
            out.push((p[i] + s * (p[j] - p[i]), t));
        }
    }
    out
}

/// Crossing segment of the level line in one triangle.
fn level_segment(p: [Point; 3], u: [f64; 3], t: f64) -> Option<[Point; 2]> {
    let mut pts = Vec::with_capacity(2);
    for i in 0..3 {
        let j = (i + 1) % 3;
        if (u[i] > t) != (u[j] > t) {
            let s = (t - u[i]) / (u[j] - u[i]);
            pts.push(p[i] + s * (p[j] - p[i]));
        }
    }
    (pts.len() == 2).then(|| [pts[0], pts[1]])
}

/// ∫ f(x, u(x)) φ₂ over a clipped polygon (fan of 7-point rules).
fn polygon_integral<F: Fn(Point, f64) -> f64>(poly: &[(Point, f64)], f: &F) -> f64 {
    let rule = triangle_rule_7();
    let mut sum = 0.0;
    for k in 1..poly.len().saturating_sub(1) {
        let (a, b, c) = (poly[0], poly[k], poly[k + 1]);
        let area = 0.5 * (b.0 - a.0).cross(c.0 - a.0);
        for (l, w) in rule.iter() {
            let x = Point::new(l[0] * a.0.x + l[1] * b.0.x + l[2] * c.0.x, l[0] * a.0.y + l[1] * b.0.y + l[2] * c.0.y);
            let uv = l[0] * a.1 + l[1] * b.1 + l[2] * c.1;
            sum += w * area * f(x, uv) * gauss_density_2d(x);
        }
    }
    sum
}

fn segment_weight(a: Point, b: Point) -> f64 {
    let gl = GaussLegendre::new(4);
    a.dist(b) * 0.5 * gl.integrate(-1.0, 1.0, |x| gauss_density_2d(a + (0.5 * (x + 1.0)) * (b - a)))
}

fn triangle_values(mesh: &Mesh2D, u: &[f64], t: usize) -> ([Point; 3], [f64; 3]) {
    let [i, j, k] = mesh.triangles[t];
    (mesh.triangle_points(t), [u[i], u[j], u[k]])
}

/// γ({u > t}) for a P1 function on the mesh.
pub fn superlevel_measure_2d(mesh: &Mesh2D, u: &[f64], t: f64) -> f64 {
    (0..mesh.triangles.len())
        .map(|tri| {
            let (p, v) = triangle_values(mesh, u, tri);
            polygon_integral(&clip_triangle(p, v, t), &|_, _| 1.0)
        })
        .sum()
}

/// Marching-triangles decomposition and F(U_t, ψ) for ψ given as a function
/// of the level, ψ(x) = psi_of_level(u(x)).
pub fn evaluate_functional_2d<P: Fn(f64) -> f64>(
    mesh: &Mesh2D,
    u: &[f64],
    beta: f64,
    psi_of_level: P,
    t: f64,
) -> Result<(LevelSetDecomposition, FunctionalValue)> {
    let mut measure = 0.0;
    let mut volume = 0.0;
    let mut interior_weight = 0.0;
    let mut segments = Vec::new();
    for tri in 0..mesh.triangles.len() {
        let (p, v) = triangle_values(mesh, u, tri);
        let poly = clip_triangle(p, v, t);
        if poly.len() >= 3 {
            measure += polygon_integral(&poly, &|_, _| 1.0);
            volume += polygon_integral(&poly, &|_, uv| {
                let s = psi_of_level(uv);
                s * s
            });
        }
        if let Some(seg) = level_segment(p, v, t) {
            interior_weight += segment_weight(seg[0], seg[1]);
            segments.push(seg);
        }
    }
    let mut exterior_weight = 0.0;
    for e in mesh.boundary_edges.iter().filter(|e| e.flag == SegmentFlag::Physical) {
        let [i, j] = e.vertices;
        let (a, b) = (mesh.vertices[i], mesh.vertices[j]);
        let (ua, ub) = (u[i], u[j]);
        let piece = match (ua > t, ub > t) {
            (true, true) => Some((a, b)),
            (false, false) => None,
            (true, false) => Some((a, a + ((t - ua) / (ub - ua)) * (b - a))),
            (false, true) => Some((a + ((t - ua) / (ub - ua)) * (b - a), b)),
        };
        if let Some((p, q)) = piece {
            exterior_weight += segment_weight(p, q);
        }
    }
    if !(measure > 0.0) {
        return Err(domain_err!("superlevel set at t = {t} is empty"));
    }
    let parts =
        FunctionalParts { volume, interior: psi_of_level(t) * interior_weight, exterior: beta * exterior_weight };
    let dec = LevelSetDecomposition {
        t,
        u_t_measure: measure,
        interior_boundary: InteriorBoundary::Segments(segments),
        interior_weight,
        exterior_weight,
    };
    Ok((dec, FunctionalValue::new(t, parts, measure)))
}

/// Per-level comparison between a planar eigenfunction and its symmetrization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelComparison {
    pub t: f64,
    /// F_Ω(U_t, ψ) with the symmetrization test function.
    pub f_domain: f64,
    /// F_{Ω♯}(S_{r(t)}, ψ♯)
    pub f_symmetrized: f64,
    pub r: f64,
}

/// Summary over sampled levels.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonSummary {
    pub levels: Vec<LevelComparison>,
    /// Fraction with F_{Ω♯}(S_r, ψ♯) ≤ F_Ω(U_t, ψ) + tol.
    pub comparison_fraction: f64,
    /// Fraction with F_Ω(U_t, ψ) ≤ λ₁(Ω) + tol.
    pub below_lambda_fraction: f64,
}

/// Diagnostic comparison on `n_levels` levels geometric in [0.02, 0.98]·max u.
pub fn compare_levels_2d(
    mesh: &Mesh2D,
    u: &[f64],
    beta: f64,
    lambda_domain: f64,
    symmetrized: &Eigenpair1D,
    n_levels: usize,
    tol: f64,
) -> Result<ComparisonSummary> {
    let map = LevelMap::sample(mesh, u, 200);
    let bossel = BosselTestFunction::new(|t| map.measure(t), symmetrized);
    let psi_level = |t: f64| bossel.value_or_zero(t).unwrap_or(0.0);
    let max_u = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let psi_sym = psi_bar(symmetrized);
    let mut levels = Vec::with_capacity(n_levels);
    for t in level_grid(max_u, n_levels) {
        let (dec, f) = evaluate_functional_2d(mesh, u, beta, psi_level, t)?;
        let r = symmetrize(dec.u_t_measure)?;
        let g = evaluate_functional_halfline(symmetrized, &psi_sym, r.min(symmetrized.problem.sigma), t)?;
        levels.push(LevelComparison { t, f_domain: f.value, f_symmetrized: g.value, r });
    }
    let n = levels.len().max(1) as f64;
    let comparison_fraction = levels.iter().filter(|l| l.f_symmetrized <= l.f_domain + tol).count() as f64 / n;
    let below_lambda_fraction = levels.iter().filter(|l| l.f_domain <= lambda_domain + tol).count() as f64 / n;
    Ok(ComparisonSummary { levels, comparison_fraction, below_lambda_fraction })
}
