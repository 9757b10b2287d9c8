//! Gauss-Legendre rules, composite panel integration and triangle rules.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::geometry::Point;

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the rule by Newton iteration on P_n from the Chebyshev guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = libm::cos(PI * (i as f64 + 0.75) / (nf + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Applies the rule once on [a, b].
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(mid + half * x);
        }
        s * half
    }

    /// Composite rule with `panels` equal panels on [a, b].
    pub fn integrate_panels<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, panels: usize, mut f: F) -> f64 {
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|k| {
                let lo = a + h * k as f64;
                let hi = if k + 1 == panels { b } else { lo + h };
                self.integrate(lo, hi, &mut f)
            })
            .sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Default panel rule order.
pub const PANEL_ORDER: usize = 32;
const MAX_HALVINGS: usize = 14;

/// Composite integration on [a, b], halving the panels until two successive
/// refinements agree to `tol` (absolute, scaled by max(1, |I|)).
#[derive(Debug, Clone)]
pub struct Integrator {
    rule: GaussLegendre,
    tol: f64,
}

impl Default for Integrator {
    fn default() -> Self {
        Self::new(PANEL_ORDER, 1e-12)
    }
}

impl Integrator {
    pub fn new(order: usize, tol: f64) -> Self {
        Self { rule: GaussLegendre::new(order), tol }
    }

    pub fn rule(&self) -> &GaussLegendre {
        &self.rule
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        if a == b {
            return 0.0;
        }
        let mut panels = 1;
        let mut prev = self.rule.integrate_panels(a, b, panels, &mut f);
        for _ in 0..MAX_HALVINGS {
            panels *= 2;
            let cur = self.rule.integrate_panels(a, b, panels, &mut f);
            if (cur - prev).abs() <= self.tol * cur.abs().max(1.0) {
                return cur;
            }
            prev = cur;
        }
        prev
    }

    /// Same as [`Integrator::integrate`] but the agreement test is relative to
    /// |I| only, for integrands far below unit scale.
    pub fn integrate_relative<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        if a == b {
            return 0.0;
        }
        let mut panels = 1;
        let mut prev = self.rule.integrate_panels(a, b, panels, &mut f);
        for _ in 0..MAX_HALVINGS {
            panels *= 2;
            let cur = self.rule.integrate_panels(a, b, panels, &mut f);
            if (cur - prev).abs() <= self.tol * cur.abs() || cur == prev {
                return cur;
            }
            prev = cur;
        }
        prev
    }

    /// Integral over the triangle (a, b, c) by a collapsed (Duffy) tensor
    /// rule, refining by 4-way splits until two levels agree.
    pub fn integrate_triangle<F: FnMut(Point) -> f64>(&self, a: Point, b: Point, c: Point, mut f: F) -> f64 {
        let mut tris = alloc::vec![[a, b, c]];
        let mut prev = self.duffy_sum(&tris, &mut f);
        for _ in 0..6 {
            tris = tris.iter().flat_map(|t| split_triangle(*t)).collect();
            let cur = self.duffy_sum(&tris, &mut f);
            if (cur - prev).abs() <= self.tol * cur.abs().max(1.0) {
                return cur;
            }
            prev = cur;
        }
        prev
    }

    fn duffy_sum<F: FnMut(Point) -> f64>(&self, tris: &[[Point; 3]], f: &mut F) -> f64 {
        let nodes = self.rule.nodes();
        let weights = self.rule.weights();
        let mut total = 0.0;
        for [a, b, c] in tris {
            let area2 = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
            let mut s = 0.0;
            for (xu, wu) in nodes.iter().zip(weights) {
                let u = 0.5 * (xu + 1.0);
                for (xv, wv) in nodes.iter().zip(weights) {
                    let v = 0.5 * (xv + 1.0);
                    // (u, v) ∈ [0,1]² -> a + u(b - a) + uv(c - b), jacobian u·|2A|
                    let p = Point::new(
                        a.x + u * (b.x - a.x) + u * v * (c.x - b.x),
                        a.y + u * (b.y - a.y) + u * v * (c.y - b.y),
                    );
                    s += wu * wv * u * f(p);
                }
            }
            total += 0.25 * s * area2.abs();
        }
        total
    }
}

fn split_triangle([a, b, c]: [Point; 3]) -> [[Point; 3]; 4] {
    let ab = a.midpoint(b);
    let bc = b.midpoint(c);
    let ca = c.midpoint(a);
    [[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]
}

/// Symmetric 7-point rule on the reference triangle, exact for degree 5.
/// Entries are (barycentric coordinates, weight); weights sum to 1.
pub fn triangle_rule_7() -> [([f64; 3], f64); 7] {
    let s15 = libm::sqrt(15.0);
    let a1 = (6.0 - s15) / 21.0;
    let b1 = (9.0 + 2.0 * s15) / 21.0;
    let a2 = (6.0 + s15) / 21.0;
    let b2 = (9.0 - 2.0 * s15) / 21.0;
    let w1 = (155.0 - s15) / 1200.0;
    let w2 = (155.0 + s15) / 1200.0;
    let third = 1.0 / 3.0;
    [
        ([third, third, third], 9.0 / 40.0),
        ([a1, a1, b1], w1),
        ([a1, b1, a1], w1),
        ([b1, a1, a1], w1),
        ([a2, a2, b2], w2),
        ([a2, b2, a2], w2),
        ([b2, a2, a2], w2),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        for n in [1usize, 2, 5, 8, 32] {
            let rule = GaussLegendre::new(n);
            let wsum: f64 = rule.weights().iter().sum();
            assert!((wsum - 2.0).abs() < 1e-14, "n={n}");
            for deg in 0..(2 * n) {
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                let got = rule.integrate(-1.0, 1.0, |x| libm::pow(x, deg as f64));
                assert!((got - exact).abs() < 1e-13, "n={n} deg={deg}: {got} vs {exact}");
            }
        }
    }

    #[test]
    fn nodes_sorted_and_symmetric() {
        let rule = GaussLegendre::new(32);
        for w in rule.nodes().windows(2) {
            assert!(w[0] < w[1]);
        }
        for (a, b) in rule.nodes().iter().zip(rule.nodes().iter().rev()) {
            assert!((a + b).abs() < 1e-15);
        }
    }

    #[test]
    fn integrator_gaussian_mass() {
        let q = Integrator::default();
        let v = q.integrate(-20.0, 20.0, crate::special::gauss_density_1d);
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn triangle_rule_degree_five() {
        // ∫ over reference triangle of x^i y^j = i! j! / (i + j + 2)!, area 1/2
        let fact = |n: usize| (1..=n).map(|k| k as f64).product::<f64>();
        let rule = triangle_rule_7();
        for i in 0..=5usize {
            for j in 0..=(5 - i) {
                let exact = fact(i) * fact(j) / fact(i + j + 2);
                let got: f64 =
                    rule.iter().map(|(l, w)| 0.5 * w * libm::pow(l[1], i as f64) * libm::pow(l[2], j as f64)).sum();
                assert!((got - exact).abs() < 1e-15, "{i} {j}");
            }
        }
    }

    #[test]
    fn duffy_triangle_integral() {
        let q = Integrator::default();
        let a = Point::new(0.0, 0.0);
        let b = Point::new(2.0, 0.0);
        let c = Point::new(0.0, 1.0);
        let area = q.integrate_triangle(a, b, c, |_| 1.0);
        assert!((area - 1.0).abs() < 1e-14);
        // ∫ x over the triangle = area · centroid_x = 2/3
        let mx = q.integrate_triangle(a, b, c, |p| p.x);
        assert!((mx - 2.0 / 3.0).abs() < 1e-14);
    }
}
