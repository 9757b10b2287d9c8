//! Gaussian-weighted P1 finite elements for the planar Robin problem
//! `-Δu + x·∇u = λu`, `∂u/∂ν + βu = 0` on the physical boundary.

use alloc::vec::Vec;

use crate::error::{domain_err, Error, Result};
use crate::geometry::{gauss_density_2d, Domain2D, Point, SegmentFlag};
use crate::linalg::{CsrMatrix, DenseMatrix, EnvelopeCholesky};
use crate::mesh::{mesh_domain, Mesh2D};
use crate::quadrature::{triangle_rule_7, GaussLegendre};

/// Shift of the factored pencil A - τM.
pub const SHIFT: f64 = -0.1;
/// Below this many unknowns the generalized problem is solved densely.
pub const DENSE_LIMIT: usize = 400;
const TARGET_RESIDUAL: f64 = 1e-12;
const ACCEPT_RESIDUAL: f64 = 1e-9;
const MAX_ITERATIONS: usize = 2000;

/// Assembled stiffness (with Robin term) and mass matrices.
#[derive(Debug, Clone)]
pub struct FemSystem {
    pub stiffness: CsrMatrix,
    pub mass: CsrMatrix,
}

impl FemSystem {
    pub fn assemble(mesh: &Mesh2D, beta: f64) -> Result<Self> {
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(domain_err!("Robin parameter must be finite and >= 0, got {beta}"));
        }
        let adj = mesh.adjacency();
        let mut stiffness = CsrMatrix::with_pattern(&adj);
        let mut mass = stiffness.clone();
        let rule = triangle_rule_7();
        for (t, tri) in mesh.triangles.iter().enumerate() {
            let [a, b, c] = mesh.triangle_points(t);
            let area = mesh.triangle_area(t);
            if !(area > 0.0) {
                return Err(Error::Solver(alloc::format!("degenerate triangle {t}")));
            }
            // ∇λ_i = rot(opposite edge) / (2A)
            let grads = [grad(b, c, area), grad(c, a, area), grad(a, b, area)];
            let mut wsum = 0.0;
            let mut local_mass = [[0.0; 3]; 3];
            for (l, w) in rule.iter() {
                let p = Point::new(l[0] * a.x + l[1] * b.x + l[2] * c.x, l[0] * a.y + l[1] * b.y + l[2] * c.y);
                let phi = w * area * gauss_density_2d(p);
                wsum += phi;
                for i in 0..3 {
                    for j in 0..3 {
                        local_mass[i][j] += phi * l[i] * l[j];
                    }
                }
            }
            for i in 0..3 {
                for j in 0..3 {
                    stiffness.add(tri[i], tri[j], wsum * grads[i].dot(grads[j]));
                    mass.add(tri[i], tri[j], local_mass[i][j]);
                }
            }
        }
        if beta > 0.0 {
            let gl = GaussLegendre::new(4);
            for e in mesh.boundary_edges.iter().filter(|e| e.flag == SegmentFlag::Physical) {
                let [i, j] = e.vertices;
                let (p, q) = (mesh.vertices[i], mesh.vertices[j]);
                let len = p.dist(q);
                let mut local = [[0.0; 2]; 2];
                for (x, w) in gl.nodes().iter().zip(gl.weights()) {
                    let s = 0.5 * (x + 1.0);
                    let phi = 0.5 * w * len * gauss_density_2d(p + s * (q - p));
                    let n = [1.0 - s, s];
                    for a in 0..2 {
                        for b in 0..2 {
                            local[a][b] += beta * phi * n[a] * n[b];
                        }
                    }
                }
                let idx = [i, j];
                for a in 0..2 {
                    for b in 0..2 {
                        stiffness.add(idx[a], idx[b], local[a][b]);
                    }
                }
            }
        }
        Ok(Self { stiffness, mass })
    }

    pub fn dofs(&self) -> usize {
        self.mass.n()
    }

    /// vᵀAv / vᵀMv
    pub fn rayleigh_quotient(&self, v: &[f64]) -> f64 {
        self.stiffness.bilinear(v, v) / self.mass.bilinear(v, v)
    }

    /// ‖Av - λMv‖ / (‖A‖‖v‖ + |λ|‖M‖‖v‖), infinity norms.
    pub fn relative_residual(&self, lambda: f64, v: &[f64]) -> f64 {
        let av = self.stiffness.mul_vec(v);
        let mv = self.mass.mul_vec(v);
        let r = av.iter().zip(&mv).map(|(a, m)| (a - lambda * m).abs()).fold(0.0, f64::max);
        let vn = v.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let scale = (self.stiffness.norm_inf() + lambda.abs() * self.mass.norm_inf()) * vn;
        if scale == 0.0 {
            0.0
        } else {
            r / scale
        }
    }

    /// Smallest generalized eigenpair (λ, v) with vᵀMv = 1 and Σv > 0.
    pub fn smallest_eigenpair(&self) -> Result<(f64, Vec<f64>, f64)> {
        let n = self.dofs();
        let (lambda, mut v) = if n < DENSE_LIMIT { self.dense_eigenpair()? } else { self.shift_invert()? };
        let sum: f64 = v.iter().sum();
        let norm = libm::sqrt(self.mass.bilinear(&v, &v));
        let s = if sum < 0.0 { -1.0 / norm } else { 1.0 / norm };
        for x in &mut v {
            *x *= s;
        }
        let residual = self.relative_residual(lambda, &v);
        if !(residual <= ACCEPT_RESIDUAL) {
            return Err(Error::Solver(alloc::format!("eigen residual {residual:e} above {ACCEPT_RESIDUAL:e}")));
        }
        Ok((lambda, v, residual))
    }

    fn shift_invert(&self) -> Result<(f64, Vec<f64>)> {
        let pencil = self.stiffness.lin_comb(1.0, &self.mass, -SHIFT);
        let perm = pencil.reverse_cuthill_mckee();
        let chol = EnvelopeCholesky::factor(&pencil, perm)?;
        let mut v = alloc::vec![1.0; self.dofs()];
        let mut lambda = self.rayleigh_quotient(&v);
        let mut best = f64::INFINITY;
        let mut stalled = 0;
        for _ in 0..MAX_ITERATIONS {
            let rhs = self.mass.mul_vec(&v);
            v = chol.solve(&rhs);
            let norm = libm::sqrt(self.mass.bilinear(&v, &v));
            for x in &mut v {
                *x /= norm;
            }
            lambda = self.rayleigh_quotient(&v);
            let r = self.relative_residual(lambda, &v);
            if r <= TARGET_RESIDUAL {
                return Ok((lambda, v));
            }
            // stop once round-off prevents further progress
            if r < 0.5 * best {
                best = r;
                stalled = 0;
            } else {
                stalled += 1;
                if stalled > 20 && best <= ACCEPT_RESIDUAL {
                    return Ok((lambda, v));
                }
            }
        }
        if best <= ACCEPT_RESIDUAL {
            return Ok((lambda, v));
        }
        Err(Error::Solver(alloc::format!("inverse iteration did not converge (λ ≈ {lambda})")))
    }

    /// Cholesky of M, reduction to L⁻¹AL⁻ᵀ, Householder tridiagonalization and
    /// bisection, then inverse iteration on the dense pencil for the vector.
    fn dense_eigenpair(&self) -> Result<(f64, Vec<f64>)> {
        let a = self.stiffness.to_dense();
        let m = self.mass.to_dense();
        let l = m.clone().cholesky()?;
        let c = a.congruence_inverse(&l);
        let tri = c.tridiagonalize();
        let guess = tri.eigenvalue_bisect(0, 1e-14 * tri.gershgorin().1.abs().max(1.0));
        let shift = guess - 1e-8 * guess.abs().max(1.0);
        let n = self.dofs();
        let mut pencil = DenseMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                pencil.set(i, j, a.get(i, j) - shift * m.get(i, j));
            }
        }
        // the shift sits below λ₁, so the pencil is positive definite
        let f = pencil.cholesky()?;
        let mut v = alloc::vec![1.0; n];
        for _ in 0..3 {
            v = f.cholesky_solve(&self.mass.mul_vec(&v));
            let norm = libm::sqrt(self.mass.bilinear(&v, &v));
            for x in &mut v {
                *x /= norm;
            }
        }
        Ok((self.rayleigh_quotient(&v), v))
    }
}

fn grad(p: Point, q: Point, area: f64) -> Point {
    // gradient of the barycentric coordinate of the vertex opposite edge p→q
    (0.5 / area) * Point::new(p.y - q.y, q.x - p.x)
}

/// Eigenvalue, eigenvector and mesh of one finite element solve.
#[derive(Debug, Clone)]
pub struct SpectralResult2D {
    pub domain: Domain2D,
    pub beta: f64,
    pub lambda1: f64,
    /// Vertex values, ∫u²φ₂ = 1, positive after the sign fix.
    pub u_dofs: Vec<f64>,
    pub mesh: Mesh2D,
    pub residual: f64,
}

impl SpectralResult2D {
    pub fn dofs(&self) -> usize {
        self.u_dofs.len()
    }

    pub fn is_positive(&self) -> bool {
        self.u_dofs.iter().all(|u| *u > 0.0)
    }
}

/// Solves on a given mesh.
pub fn lambda1_on_mesh(domain: &Domain2D, mesh: Mesh2D, beta: f64) -> Result<SpectralResult2D> {
    let system = FemSystem::assemble(&mesh, beta)?;
    let (lambda1, u_dofs, residual) = system.smallest_eigenpair()?;
    Ok(SpectralResult2D { domain: domain.clone(), beta, lambda1, u_dofs, mesh, residual })
}

/// λ₁ on a mesh of size h.
pub fn lambda1_2d(domain: &Domain2D, beta: f64, h: f64) -> Result<SpectralResult2D> {
    let mesh = mesh_domain(domain, h)?;
    lambda1_on_mesh(domain, mesh, beta)
}

/// Solves at h and on the uniform refinement (h/2) and combines them as
/// (4λ_{h/2} - λ_h)/3.
#[derive(Debug, Clone)]
pub struct Extrapolated {
    pub coarse: SpectralResult2D,
    pub fine: SpectralResult2D,
    pub lambda1: f64,
}

pub fn richardson(coarse: f64, fine: f64) -> f64 {
    (4.0 * fine - coarse) / 3.0
}

pub fn lambda1_2d_extrapolated(domain: &Domain2D, beta: f64, h: f64) -> Result<Extrapolated> {
    let coarse = lambda1_2d(domain, beta, h)?;
    let fine_mesh = coarse.mesh.refine(domain)?;
    let fine = lambda1_on_mesh(domain, fine_mesh, beta)?;
    let lambda1 = richardson(coarse.lambda1, fine.lambda1);
    Ok(Extrapolated { coarse, fine, lambda1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumann_gives_zero() {
        let d = Domain2D::disk(Point::new(0.2, 0.1), 1.0).unwrap();
        let r = lambda1_2d(&d, 0.0, 0.25).unwrap();
        assert!(r.lambda1.abs() < 1e-9, "{}", r.lambda1);
        let u0 = r.u_dofs[0];
        assert!(r.u_dofs.iter().all(|u| (u - u0).abs() < 1e-6 * u0));
    }

    #[test]
    fn dense_and_sparse_agree() {
        let d = Domain2D::rectangle((-0.8, 0.6), (-0.5, 0.9)).unwrap();
        let mesh = mesh_domain(&d, 0.15).unwrap();
        assert!(mesh.num_vertices() < DENSE_LIMIT);
        let sys = FemSystem::assemble(&mesh, 1.5).unwrap();
        let (ld, vd) = sys.dense_eigenpair().unwrap();
        let (ls, vs) = sys.shift_invert().unwrap();
        assert!((ld - ls).abs() < 1e-10 * ld, "{ld} {ls}");
        let sd: f64 = vd.iter().sum::<f64>().signum();
        let ss: f64 = vs.iter().sum::<f64>().signum();
        for (a, b) in vd.iter().zip(&vs) {
            assert!((sd * a - ss * b).abs() < 1e-6);
        }
    }

    #[test]
    fn mass_integrates_weight() {
        let d = Domain2D::disk(Point::default(), 1.0).unwrap();
        let mesh = mesh_domain(&d, 0.1).unwrap();
        let sys = FemSystem::assemble(&mesh, 1.0).unwrap();
        let ones = alloc::vec![1.0; sys.dofs()];
        let gamma = sys.mass.bilinear(&ones, &ones);
        // polygonal disk loses O(h²) of the measure
        assert!((gamma - (1.0 - libm::exp(-0.5))).abs() < 2e-3);
        // Robin term of the constant is β·P_φ of the polygon
        let robin = sys.stiffness.bilinear(&ones, &ones);
        assert!((robin - libm::exp(-0.5)).abs() < 2e-3);
    }

    #[test]
    fn positive_eigenvector_and_monotone_in_beta() {
        let d = Domain2D::disk(Point::default(), 1.0).unwrap();
        let mut last = 0.0;
        for beta in [0.5, 1.0, 2.0] {
            let r = lambda1_2d(&d, beta, 0.2).unwrap();
            assert!(r.is_positive());
            assert!(r.residual <= 1e-9);
            assert!(r.lambda1 > last);
            last = r.lambda1;
        }
    }
}
