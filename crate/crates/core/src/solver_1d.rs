//! Half-line Robin problem `-w'' + t w' = λ w` on `(-∞, σ)`,
//! `w'(σ) + β w(σ) = 0`, solved through the Riccati variable `β(t) = -w'/w`.

use alloc::vec::Vec;

use crate::error::{domain_err, Error, Result};
use crate::linalg::SymTridiagonal;
use crate::ode::{self, StepControl, Stop};
use crate::quadrature::GaussLegendre;
use crate::special::gauss_density_1d;

/// Left truncation of the half-line.
pub const LEFT_TRUNCATION: f64 = 12.0;
/// Riccati values above this count as blow-up (an interior zero of w).
pub const BETA_CAP: f64 = 1e8;
/// Width of the region before σ integrated with the fine step.
const FINE_WIDTH: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfLineProblem {
    pub sigma: f64,
    pub beta: f64,
}

impl HalfLineProblem {
    pub fn new(sigma: f64, beta: f64) -> Result<Self> {
        if !sigma.is_finite() {
            return Err(domain_err!("sigma must be finite, got {sigma}"));
        }
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(domain_err!("Robin parameter must be finite and >= 0, got {beta}"));
        }
        if sigma <= -LEFT_TRUNCATION + 1.0 {
            return Err(domain_err!("sigma = {sigma} too close to the left truncation -{LEFT_TRUNCATION}"));
        }
        Ok(Self { sigma, beta })
    }
}

/// Riccati trajectory β(t) on the accepted integration steps.
#[derive(Debug, Clone)]
pub struct RiccatiTrace {
    pub lambda: f64,
    pub grid: Vec<f64>,
    pub beta_values: Vec<f64>,
    /// log w with log w(-T) = 0, from the Hermite-corrected trapezoid of β.
    pub log_w: Vec<f64>,
    pub blew_up: bool,
    pub blowup_location: Option<f64>,
}

impl RiccatiTrace {
    /// β'(t) from the Riccati equation.
    #[inline]
    pub fn slope(&self, t: f64, b: f64) -> f64 {
        t * b + self.lambda + b * b
    }

    pub fn left(&self) -> f64 {
        self.grid[0]
    }

    pub fn right(&self) -> f64 {
        *self.grid.last().unwrap()
    }

    pub fn end_value(&self) -> f64 {
        *self.beta_values.last().unwrap()
    }

    fn cell(&self, t: f64) -> Option<usize> {
        if !(t >= self.left() && t <= self.right()) {
            return None;
        }
        let k = self.grid.partition_point(|&g| g <= t);
        Some(k.saturating_sub(1).min(self.grid.len() - 2))
    }

    /// Cubic Hermite interpolation of β using the exact slopes.
    pub fn beta_at(&self, t: f64) -> Option<f64> {
        let i = self.cell(t)?;
        let (t0, t1) = (self.grid[i], self.grid[i + 1]);
        let (b0, b1) = (self.beta_values[i], self.beta_values[i + 1]);
        Some(hermite(t0, t1, b0, b1, self.slope(t0, b0), self.slope(t1, b1), t))
    }

    /// Cubic Hermite interpolation of log w (slope -β).
    pub fn log_w_at(&self, t: f64) -> Option<f64> {
        let i = self.cell(t)?;
        let (t0, t1) = (self.grid[i], self.grid[i + 1]);
        Some(hermite(t0, t1, self.log_w[i], self.log_w[i + 1], -self.beta_values[i], -self.beta_values[i + 1], t))
    }

    /// Mean of β over each grid cell, i.e. minus the slope of log w.
    pub fn cell_means(&self) -> Vec<f64> {
        (0..self.grid.len() - 1)
            .map(|i| {
                let h = self.grid[i + 1] - self.grid[i];
                let (b0, b1) = (self.beta_values[i], self.beta_values[i + 1]);
                let (d0, d1) = (self.slope(self.grid[i], b0), self.slope(self.grid[i + 1], b1));
                0.5 * (b0 + b1) + h * (d0 - d1) / 12.0
            })
            .collect()
    }

    /// Largest decrease between consecutive β values (0 when non-decreasing).
    pub fn max_decrease(&self) -> f64 {
        self.beta_values.windows(2).map(|w| w[0] - w[1]).fold(0.0, f64::max)
    }
}

fn hermite(t0: f64, t1: f64, y0: f64, y1: f64, d0: f64, d1: f64, t: f64) -> f64 {
    let h = t1 - t0;
    let s = (t - t0) / h;
    let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    let h10 = s * (1.0 - s) * (1.0 - s);
    let h01 = s * s * (3.0 - 2.0 * s);
    let h11 = s * s * (s - 1.0);
    h00 * y0 + h * h10 * d0 + h01 * y1 + h * h11 * d1
}

/// Integrates β' = tβ + λ + β² from -T with β(-T) = λ/T up to σ, stopping at
/// blow-up.
pub fn shoot_beta(lambda: f64, sigma: f64) -> Result<RiccatiTrace> {
    shoot_beta_from(lambda, sigma, LEFT_TRUNCATION)
}

pub fn shoot_beta_from(lambda: f64, sigma: f64, t_left: f64) -> Result<RiccatiTrace> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(domain_err!("lambda must be finite and >= 0, got {lambda}"));
    }
    if !sigma.is_finite() || sigma <= -t_left {
        return Err(domain_err!("sigma = {sigma} outside (-{t_left}, ∞)"));
    }
    let t0 = -t_left;
    let ctl = StepControl { fine_from: sigma - FINE_WIDTH, ..StepControl::default() };
    let seed = lambda / t_left;
    let sol = ode::integrate(
        |t, y: &[f64; 1]| [t * y[0] + lambda + y[0] * y[0]],
        t0,
        [seed],
        sigma,
        &ctl,
        |_, y| y[0] > BETA_CAP,
    )?;
    let beta_values: Vec<f64> = sol.y.iter().map(|y| y[0]).collect();
    let grid = sol.t;
    let (blew_up, blowup_location) = match sol.stop {
        Stop::Completed => (false, None),
        Stop::Event(t) => (true, Some(t)),
    };
    let mut trace = RiccatiTrace { lambda, grid, beta_values, log_w: Vec::new(), blew_up, blowup_location };
    let means = trace.cell_means();
    let mut log_w = Vec::with_capacity(trace.grid.len());
    log_w.push(0.0);
    for (i, m) in means.iter().enumerate() {
        let h = trace.grid[i + 1] - trace.grid[i];
        log_w.push(log_w[i] - h * m);
    }
    trace.log_w = log_w;
    Ok(trace)
}

/// First eigenpair sampled on the Riccati grid.
#[derive(Debug, Clone)]
pub struct Eigenpair1D {
    pub problem: HalfLineProblem,
    pub lambda1: f64,
    pub grid: Vec<f64>,
    /// Positive samples with trapezoidal ∫ w² φ₁ = 1 on the grid.
    pub w_values: Vec<f64>,
    pub trace: RiccatiTrace,
}

impl Eigenpair1D {
    /// log of the normalization factor applied to exp(trace.log_w).
    fn log_scale(&self) -> f64 {
        libm::log(self.w_values[0]) - self.trace.log_w[0]
    }

    /// Eigenfunction at t ∈ [-T, σ].
    pub fn w_at(&self, t: f64) -> Option<f64> {
        self.trace.log_w_at(t).map(|l| libm::exp(l + self.log_scale()))
    }

    /// ψ̄ = -w'/w = β(t).
    pub fn beta_at(&self, t: f64) -> Option<f64> {
        self.trace.beta_at(t)
    }

    pub fn max_w(&self) -> f64 {
        self.w_values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Strict decrease of the samples (constant eigenfunctions when λ = 0
    /// are reported as not strictly decreasing).
    pub fn is_strictly_decreasing(&self) -> bool {
        self.w_values.windows(2).all(|w| w[1] < w[0])
    }

    /// Largest second divided difference of log w over the grid. Computed from
    /// per-cell slopes so that it is free of cumulative rounding.
    pub fn max_log_concavity_defect(&self) -> f64 {
        let means = self.trace.cell_means();
        let g = &self.grid;
        let mut worst = f64::NEG_INFINITY;
        for i in 1..means.len() {
            let span = 0.5 * (g[i + 1] - g[i - 1]);
            // slope of log w is -mean(β)
            worst = worst.max((means[i - 1] - means[i]) / span);
        }
        worst
    }

    /// |w'(σ) + β w(σ)| / |w(σ)| with w' from a five-point one-sided difference.
    pub fn boundary_residual(&self) -> f64 {
        let n = self.grid.len();
        let k = n.min(5);
        let nodes = &self.grid[n - k..];
        let weights = fd_weights(self.problem.sigma, nodes, 1);
        let dw: f64 = weights.iter().zip(&self.w_values[n - k..]).map(|(c, w)| c * w).sum();
        let ws = self.w_values[n - 1];
        ((dw + self.problem.beta * ws) / ws).abs()
    }

    /// Riccati value at σ (should reproduce the Robin parameter).
    pub fn beta_at_sigma(&self) -> f64 {
        self.trace.end_value()
    }
}

/// Finite-difference weights for the m-th derivative at `x0` (Fornberg).
pub fn fd_weights(x0: f64, nodes: &[f64], m: usize) -> Vec<f64> {
    let n = nodes.len();
    let mut c = alloc::vec![alloc::vec![0.0; m + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

/// Monotone transform of the Riccati end value, continuous through blow-up:
/// (β(σ) - β) / (1 + β(σ)), with blow-up mapped to 1.
fn mismatch(lambda: f64, problem: &HalfLineProblem) -> Result<f64> {
    let tr = shoot_beta(lambda, problem.sigma)?;
    if tr.blew_up {
        return Ok(1.0);
    }
    let b = tr.end_value();
    Ok((b - problem.beta) / (1.0 + b))
}

const MAX_DOUBLINGS: usize = 60;

/// Smallest eigenvalue of the half-line Robin problem, |λ - λ₁| ≤ tol.
pub fn solve_lambda1(problem: HalfLineProblem, tol: f64) -> Result<Eigenpair1D> {
    if !(tol > 0.0) {
        return Err(domain_err!("tolerance must be positive, got {tol}"));
    }
    let lambda = if problem.beta == 0.0 {
        0.0
    } else {
        let mut lo = 0.0;
        let mut hi = 1.0;
        let mut f_hi = mismatch(hi, &problem)?;
        let mut doublings = 0;
        while f_hi <= 0.0 {
            lo = hi;
            hi *= 2.0;
            f_hi = mismatch(hi, &problem)?;
            doublings += 1;
            if doublings > MAX_DOUBLINGS {
                return Err(Error::Internal(alloc::format!("no eigenvalue bracket for {problem:?}")));
            }
        }
        let f_lo = mismatch(lo, &problem)?;
        if f_lo > 0.0 {
            return Err(Error::Internal(alloc::format!("bracket sign check failed at lambda = {lo}")));
        }
        // bisection to a narrow bracket, then Brent; polish well below tol so
        // the Robin condition is met to near round-off
        let (mut a, mut fa, mut b, mut fb) = (lo, f_lo, hi, f_hi);
        while b - a > 1e-3 {
            let m = 0.5 * (a + b);
            let fm = mismatch(m, &problem)?;
            if fm > 0.0 {
                b = m;
                fb = fm;
            } else {
                a = m;
                fa = fm;
            }
        }
        let xtol = (tol * 1e-3).min(1e-13);
        brent(|x| mismatch(x, &problem), a, fa, b, fb, xtol)?
    };
    let trace = shoot_beta(lambda, problem.sigma)?;
    if trace.blew_up {
        return Err(Error::Internal(alloc::format!("converged lambda = {lambda} blows up before sigma")));
    }
    let grid = trace.grid.clone();
    let mut w_values: Vec<f64> = trace.log_w.iter().map(|l| libm::exp(*l)).collect();
    let norm2 = trapezoid(&grid, |i| w_values[i] * w_values[i] * gauss_density_1d(grid[i]));
    let scale = 1.0 / libm::sqrt(norm2);
    for w in &mut w_values {
        *w *= scale;
    }
    Ok(Eigenpair1D { problem, lambda1: lambda, grid, w_values, trace })
}

fn trapezoid<F: Fn(usize) -> f64>(grid: &[f64], f: F) -> f64 {
    (0..grid.len() - 1).map(|i| 0.5 * (grid[i + 1] - grid[i]) * (f(i) + f(i + 1))).sum()
}

/// Brent's method on a sign-changing bracket (fa ≤ 0 < fb).
fn brent<F: FnMut(f64) -> Result<f64>>(mut f: F, a0: f64, fa0: f64, b0: f64, fb0: f64, xtol: f64) -> Result<f64> {
    let (mut a, mut fa, mut b, mut fb) = (a0, fa0, b0, fb0);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * xm * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b)?;
    }
    Err(Error::Internal(alloc::format!("Brent iteration did not converge near {b}")))
}

/// Dirichlet eigenvalue of (-∞, σ): the λ at which the Riccati trace first
/// blows up exactly at σ.
pub fn dirichlet_lambda1(sigma: f64) -> Result<f64> {
    let blows = |l: f64| -> Result<bool> { Ok(shoot_beta(l, sigma)?.blew_up) };
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut n = 0;
    while !blows(hi)? {
        lo = hi;
        hi *= 2.0;
        n += 1;
        if n > MAX_DOUBLINGS {
            return Err(Error::Internal(alloc::format!("no Dirichlet bracket at sigma = {sigma}")));
        }
    }
    while hi - lo > 1e-12 * hi.max(1.0) {
        let m = 0.5 * (lo + hi);
        if m <= lo || m >= hi {
            break;
        }
        if blows(m)? {
            hi = m;
        } else {
            lo = m;
        }
    }
    // the cap biases the bracket; 1/β(σ) is analytic in λ and vanishes at
    // the Dirichlet value, so extrapolate it from three points below
    let d = 1e-4 * lo.max(1.0);
    if lo - 3.0 * d <= 0.0 {
        return Ok(0.5 * (lo + hi));
    }
    let mut xs = [0.0; 3];
    let mut ys = [0.0; 3];
    for k in 0..3 {
        xs[k] = lo - (k + 1) as f64 * d;
        let tr = shoot_beta(xs[k], sigma)?;
        if tr.blew_up {
            return Ok(0.5 * (lo + hi));
        }
        ys[k] = 1.0 / tr.end_value();
    }
    // Newton on the interpolating quadratic from the bracket midpoint
    let q = |x: f64| -> (f64, f64) {
        let (mut v, mut dv) = (0.0, 0.0);
        for i in 0..3 {
            let mut num = 1.0;
            let mut dnum = 0.0;
            let mut den = 1.0;
            for j in 0..3 {
                if i != j {
                    dnum = dnum * (x - xs[j]) + num;
                    num *= x - xs[j];
                    den *= xs[i] - xs[j];
                }
            }
            v += ys[i] * num / den;
            dv += ys[i] * dnum / den;
        }
        (v, dv)
    };
    let mut x = 0.5 * (lo + hi);
    for _ in 0..8 {
        let (v, dv) = q(x);
        if dv == 0.0 {
            break;
        }
        x -= v / dv;
    }
    if (x - lo).abs() <= 10.0 * d {
        Ok(x)
    } else {
        Ok(0.5 * (lo + hi))
    }
}

/// Finite-difference discretization of the half-line quotient on [-T, σ]:
/// exact-weight cell masses for ∫(v')²φ₁, lumped nodal masses for ∫v²φ₁, and
/// the Robin term βφ₁(σ)v(σ)².
#[derive(Debug, Clone)]
pub struct RayleighDiscretization {
    pub problem: HalfLineProblem,
    pub nodes: Vec<f64>,
    cell_mass: Vec<f64>,
    node_mass: Vec<f64>,
    robin: f64,
}

impl RayleighDiscretization {
    pub fn new(problem: HalfLineProblem, grid_size: usize, t_left: f64) -> Result<Self> {
        if grid_size < 100 {
            return Err(domain_err!("grid_size must be >= 100, got {grid_size}"));
        }
        if !(t_left >= 6.0) {
            return Err(domain_err!("left truncation must be >= 6, got {t_left}"));
        }
        if problem.sigma <= -t_left {
            return Err(domain_err!("sigma = {} left of the truncation -{t_left}", problem.sigma));
        }
        let n = grid_size;
        let h = (problem.sigma + t_left) / n as f64;
        let nodes: Vec<f64> = (0..=n).map(|i| if i == n { problem.sigma } else { -t_left + h * i as f64 }).collect();
        let gl = GaussLegendre::new(3);
        let cell_mass: Vec<f64> = nodes.windows(2).map(|c| gl.integrate(c[0], c[1], gauss_density_1d)).collect();
        let mut node_mass = alloc::vec![0.0; n + 1];
        for (c, m) in cell_mass.iter().enumerate() {
            node_mass[c] += 0.5 * m;
            node_mass[c + 1] += 0.5 * m;
        }
        let robin = problem.beta * gauss_density_1d(problem.sigma);
        Ok(Self { problem, nodes, cell_mass, node_mass, robin })
    }

    fn h(&self, c: usize) -> f64 {
        self.nodes[c + 1] - self.nodes[c]
    }

    /// Discrete quotient in difference form.
    pub fn quotient(&self, v: &[f64]) -> f64 {
        let n = self.nodes.len();
        let mut num = self.robin * v[n - 1] * v[n - 1];
        for c in 0..n - 1 {
            let d = (v[c + 1] - v[c]) / self.h(c);
            num += self.cell_mass[c] * d * d;
        }
        let den: f64 = v.iter().zip(&self.node_mass).map(|(x, m)| m * x * x).sum();
        num / den
    }

    /// Stiffness minus `shift` times mass, as a tridiagonal matrix.
    fn pencil(&self, shift: f64) -> SymTridiagonal {
        let n = self.nodes.len();
        let mut diag = alloc::vec![0.0; n];
        let mut off = alloc::vec![0.0; n - 1];
        for c in 0..n - 1 {
            let k = self.cell_mass[c] / (self.h(c) * self.h(c));
            diag[c] += k;
            diag[c + 1] += k;
            off[c] = -k;
        }
        diag[n - 1] += self.robin;
        for i in 0..n {
            diag[i] -= shift * self.node_mass[i];
        }
        SymTridiagonal::new(diag, off)
    }

    /// Smallest discrete eigenvalue: Sturm bisection on M^{-1/2} K M^{-1/2},
    /// inverse iteration, then the difference-form quotient.
    pub fn smallest_eigenvalue(&self) -> Result<f64> {
        let (lambda, _) = self.smallest_eigenpair()?;
        Ok(lambda)
    }

    pub fn smallest_eigenpair(&self) -> Result<(f64, Vec<f64>)> {
        let k = self.pencil(0.0);
        let s: Vec<f64> = self.node_mass.iter().map(|m| 1.0 / libm::sqrt(*m)).collect();
        let diag = k.diag.iter().zip(&s).map(|(d, si)| d * si * si).collect();
        let off = k.off.iter().enumerate().map(|(i, o)| o * s[i] * s[i + 1]).collect();
        let scaled = SymTridiagonal::new(diag, off);
        let guess = scaled.eigenvalue_bisect(0, 1e-13);
        let shift = guess - 1e-7 * guess.abs().max(1.0);
        let pencil = self.pencil(shift);
        let n = self.nodes.len();
        let mut v = alloc::vec![1.0; n];
        for _ in 0..4 {
            let rhs: Vec<f64> = v.iter().zip(&self.node_mass).map(|(x, m)| x * m).collect();
            v = pencil.solve_shifted(0.0, &rhs)?;
            let norm = v.iter().map(|x| x.abs()).fold(0.0, f64::max);
            for x in &mut v {
                *x /= norm;
            }
        }
        Ok((self.quotient(&v), v))
    }
}

/// Smallest eigenvalue of the finite-difference discretization on `grid_size`
/// cells of [-T, σ].
pub fn rayleigh_oracle(problem: HalfLineProblem, grid_size: usize, t_left: f64) -> Result<f64> {
    RayleighDiscretization::new(problem, grid_size, t_left)?.smallest_eigenvalue()
}

/// Continuous quotient J[β, v] of the piecewise-linear interpolant of `v` on
/// `nodes` (consistent mass, Gauss quadrature per cell). By the variational
/// principle this is ≥ λ₁ for every nonzero v.
pub fn rayleigh_quotient_p1(problem: &HalfLineProblem, nodes: &[f64], v: &[f64]) -> Result<f64> {
    if nodes.len() != v.len() || nodes.len() < 2 {
        return Err(domain_err!("nodes and values must have equal length >= 2"));
    }
    if (*nodes.last().unwrap() - problem.sigma).abs() > 1e-12 * (1.0 + problem.sigma.abs()) {
        return Err(domain_err!("last node must be sigma"));
    }
    let gl = GaussLegendre::new(6);
    let mut num = problem.beta * gauss_density_1d(problem.sigma) * v[v.len() - 1] * v[v.len() - 1];
    let mut den = 0.0;
    for c in 0..nodes.len() - 1 {
        let (a, b) = (nodes[c], nodes[c + 1]);
        if !(b > a) {
            return Err(domain_err!("nodes must be strictly increasing"));
        }
        let d = (v[c + 1] - v[c]) / (b - a);
        num += d * d * gl.integrate(a, b, gauss_density_1d);
        den += gl.integrate(a, b, |x| {
            let s = (x - a) / (b - a);
            let y = v[c] + s * (v[c + 1] - v[c]);
            y * y * gauss_density_1d(x)
        });
    }
    Ok(num / den)
}

/// λ₁(σ, β) over an increasing σ grid.
pub fn lambda1_sweep(sigma_grid: &[f64], beta: f64, tol: f64) -> Result<Vec<(f64, f64)>> {
    if sigma_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(domain_err!("sigma grid must be strictly increasing"));
    }
    sigma_grid.iter().map(|&s| Ok((s, solve_lambda1(HalfLineProblem::new(s, beta)?, tol)?.lambda1))).collect()
}

/// The solution of `-w'' + t w' = λ w` decaying like |t|^λ at -∞, integrated
/// as a linear system from -T (two-term asymptotic seed) to `t_end` and
/// sampled at `points` (increasing, inside [-T, t_end]).
pub fn decaying_solution(lambda: f64, points: &[f64]) -> Result<Vec<f64>> {
    if !(lambda >= 0.0) {
        return Err(domain_err!("lambda must be >= 0, got {lambda}"));
    }
    if points.is_empty() {
        return Ok(Vec::new());
    }
    if points.windows(2).any(|w| !(w[1] > w[0])) || points[0] <= -LEFT_TRUNCATION {
        return Err(domain_err!("sample points must be increasing and inside (-T, ∞)"));
    }
    let t0 = -LEFT_TRUNCATION;
    let x = LEFT_TRUNCATION;
    // w = x^λ (1 - c/x²), x = -t, c = λ(λ-1)/2
    let c = 0.5 * lambda * (lambda - 1.0);
    let w0 = libm::pow(x, lambda) * (1.0 - c / (x * x));
    let dwdx = lambda * libm::pow(x, lambda - 1.0) - c * (lambda - 2.0) * libm::pow(x, lambda - 3.0);
    let y0 = [w0, -dwdx];
    let ctl = StepControl::default();
    let mut out = Vec::with_capacity(points.len());
    let mut t = t0;
    let mut y = y0;
    for &p in points {
        if p > t {
            let sol = ode::integrate(|t, y: &[f64; 2]| [y[1], t * y[1] - lambda * y[0]], t, y, p, &ctl, |_, _| false)?;
            y = *sol.y.last().unwrap();
            t = p;
        }
        out.push(y[0]);
    }
    Ok(out)
}
