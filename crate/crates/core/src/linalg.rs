//! Linear algebra for the eigen solvers: symmetric tridiagonal bisection,
//! compressed sparse symmetric matrices with an envelope Cholesky factor, and
//! a small dense path.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Symmetric tridiagonal matrix with diagonal `diag` and off-diagonal `off`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len().max(1), "off-diagonal length must be n - 1");
        Self { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence count).
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.diag.len() {
            let b2 = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] };
            q = self.diag[i] - x - if i == 0 { 0.0 } else { b2 / q };
            if q == 0.0 {
                q = -f64::EPSILON * (self.diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The k-th smallest eigenvalue (0-based) by bisection to absolute width `tol`.
    pub fn eigenvalue_bisect(&self, k: usize, tol: f64) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        let pad = f64::EPSILON * (lo.abs().max(hi.abs())).max(1.0);
        lo -= pad;
        hi += pad;
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Solves (T - shift I) x = rhs by the unpivoted LDLᵀ recurrence. Stable when
    /// `shift` lies below the spectrum.
    pub fn solve_shifted(&self, shift: f64, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.diag.len();
        let mut d = alloc::vec![0.0; n];
        let mut l = alloc::vec![0.0; n];
        let mut z = alloc::vec![0.0; n];
        for i in 0..n {
            let mut di = self.diag[i] - shift;
            let mut zi = rhs[i];
            if i > 0 {
                l[i] = self.off[i - 1] / d[i - 1];
                di -= l[i] * self.off[i - 1];
                zi -= l[i] * z[i - 1];
            }
            if di == 0.0 || !di.is_finite() {
                return Err(Error::Solver(alloc::format!("zero pivot in tridiagonal solve at row {i}")));
            }
            d[i] = di;
            z[i] = zi;
        }
        let mut x = alloc::vec![0.0; n];
        for i in (0..n).rev() {
            x[i] = z[i] / d[i];
            if i + 1 < n {
                x[i] -= l[i + 1] * x[i + 1];
            }
        }
        Ok(x)
    }
}

/// Symmetric matrix in compressed sparse row form, both triangles stored.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl CsrMatrix {
    /// Zero matrix with the sparsity pattern of `adjacency` (plus the diagonal).
    pub fn with_pattern(adjacency: &[Vec<usize>]) -> Self {
        let n = adjacency.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        row_ptr.push(0);
        for (i, nb) in adjacency.iter().enumerate() {
            let mut row: Vec<usize> = nb.iter().copied().chain(core::iter::once(i)).collect();
            row.sort_unstable();
            row.dedup();
            cols.extend_from_slice(&row);
            row_ptr.push(cols.len());
        }
        let nnz = cols.len();
        Self { n, row_ptr, cols, vals: alloc::vec![0.0; nnz] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    fn position(&self, i: usize, j: usize) -> Option<usize> {
        let row = &self.cols[self.row_ptr[i]..self.row_ptr[i + 1]];
        row.binary_search(&j).ok().map(|k| self.row_ptr[i] + k)
    }

    /// Adds `v` at (i, j). Panics if the entry is outside the pattern.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self.position(i, j).unwrap_or_else(|| panic!("entry ({i}, {j}) not in sparsity pattern"));
        self.vals[k] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.position(i, j).map_or(0.0, |k| self.vals[k])
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |k| (self.cols[k], self.vals[k]))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).map(|(j, v)| v * x[j]).sum()).collect()
    }

    /// xᵀ A y
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        (0..self.n).map(|i| x[i] * self.row(i).map(|(j, v)| v * y[j]).sum::<f64>()).sum()
    }

    /// a·self + b·other; both must share a pattern.
    pub fn lin_comb(&self, a: f64, other: &CsrMatrix, b: f64) -> CsrMatrix {
        assert_eq!(self.row_ptr, other.row_ptr);
        assert_eq!(self.cols, other.cols);
        let vals = self.vals.iter().zip(&other.vals).map(|(x, y)| a * x + b * y).collect();
        CsrMatrix { n: self.n, row_ptr: self.row_ptr.clone(), cols: self.cols.clone(), vals }
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n).map(|i| self.row(i).map(|(_, v)| v.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                d.set(i, j, v);
            }
        }
        d
    }

    /// Reverse Cuthill-McKee ordering: `perm[new] = old`.
    pub fn reverse_cuthill_mckee(&self) -> Vec<usize> {
        let n = self.n;
        let degree: Vec<usize> = (0..n).map(|i| self.row_ptr[i + 1] - self.row_ptr[i]).collect();
        let mut visited = alloc::vec![false; n];
        let mut order = Vec::with_capacity(n);
        while order.len() < n {
            // start each component from a pseudo-peripheral node
            let seed = (0..n).filter(|&i| !visited[i]).min_by_key(|&i| degree[i]).unwrap_or(0);
            let start = self.pseudo_peripheral(seed, &visited);
            let mut queue = VecDeque::new();
            visited[start] = true;
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                let mut nb: Vec<usize> = self.row(v).map(|(j, _)| j).filter(|&j| !visited[j]).collect();
                nb.sort_by_key(|&j| (degree[j], j));
                for j in nb {
                    visited[j] = true;
                    queue.push_back(j);
                }
            }
        }
        order.reverse();
        order
    }

    fn pseudo_peripheral(&self, seed: usize, blocked: &[bool]) -> usize {
        let mut node = seed;
        let mut ecc = 0;
        for _ in 0..8 {
            let (far, depth) = self.bfs_farthest(node, blocked);
            if depth <= ecc {
                break;
            }
            ecc = depth;
            node = far;
        }
        node
    }

    fn bfs_farthest(&self, start: usize, blocked: &[bool]) -> (usize, usize) {
        let mut level = alloc::vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        level[start] = 0;
        queue.push_back(start);
        let mut last = start;
        while let Some(v) = queue.pop_front() {
            last = v;
            for (j, _) in self.row(v) {
                if level[j] == usize::MAX && !blocked[j] {
                    level[j] = level[v] + 1;
                    queue.push_back(j);
                }
            }
        }
        (last, level[last])
    }
}

/// Envelope (skyline) Cholesky factor L Lᵀ = P A Pᵀ of a sparse SPD matrix.
#[derive(Debug, Clone)]
pub struct EnvelopeCholesky {
    perm: Vec<usize>,
    first: Vec<usize>,
    offset: Vec<usize>,
    data: Vec<f64>,
}

impl EnvelopeCholesky {
    /// Factors `a` using the ordering `perm` (`perm[new] = old`).
    pub fn factor(a: &CsrMatrix, perm: Vec<usize>) -> Result<Self> {
        let n = a.n();
        let mut inv = alloc::vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut first = alloc::vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            first[new] = a.row(old).map(|(j, _)| inv[j]).filter(|&j| j <= new).min().unwrap_or(new);
        }
        let mut offset = Vec::with_capacity(n + 1);
        offset.push(0);
        for i in 0..n {
            offset.push(offset[i] + (i - first[i] + 1));
        }
        let mut data = alloc::vec![0.0; offset[n]];
        for (new, &old) in perm.iter().enumerate() {
            for (j, v) in a.row(old) {
                let jn = inv[j];
                if jn <= new {
                    data[offset[new] + jn - first[new]] = v;
                }
            }
        }
        for i in 0..n {
            let fi = first[i];
            let oi = offset[i];
            for j in fi..i {
                let fj = first[j];
                let oj = offset[j];
                let k0 = fi.max(fj);
                let mut s = data[oi + j - fi];
                let ri = &data[oi + k0 - fi..oi + j - fi];
                let rj = &data[oj + k0 - fj..oj + j - fj];
                s -= dot(ri, rj);
                data[oi + j - fi] = s / data[oj + j - fj];
            }
            let row = &data[oi..oi + i - fi];
            let d = data[oi + i - fi] - dot(row, row);
            if !(d > 0.0) {
                return Err(Error::Solver(alloc::format!("matrix not positive definite (pivot {d} at row {i})")));
            }
            data[oi + i - fi] = libm::sqrt(d);
        }
        Ok(Self { perm, first, offset, data })
    }

    pub fn stored_entries(&self) -> usize {
        self.data.len()
    }

    /// Solves A x = b.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.perm.len();
        let mut y: Vec<f64> = self.perm.iter().map(|&old| b[old]).collect();
        for i in 0..n {
            let fi = self.first[i];
            let oi = self.offset[i];
            let s = dot(&self.data[oi..oi + i - fi], &y[fi..i]);
            y[i] = (y[i] - s) / self.data[oi + i - fi];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let oi = self.offset[i];
            y[i] /= self.data[oi + i - fi];
            let xi = y[i];
            for (k, l) in self.data[oi..oi + i - fi].iter().enumerate() {
                y[fi + k] -= l * xi;
            }
        }
        let mut x = alloc::vec![0.0; n];
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = y[new];
        }
        x
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    // four accumulators let the compiler vectorize
    let mut acc = [0.0f64; 4];
    let chunks = a.len() / 4;
    for c in 0..chunks {
        for l in 0..4 {
            acc[l] += a[4 * c + l] * b[4 * c + l];
        }
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for k in 4 * chunks..a.len() {
        s += a[k] * b[k];
    }
    s
}

/// Row-major dense square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    a: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, a: alloc::vec![0.0; n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
    }

    /// In-place lower Cholesky factor; the strict upper triangle is zeroed.
    pub fn cholesky(mut self) -> Result<DenseMatrix> {
        let n = self.n;
        for j in 0..n {
            let mut d = self.get(j, j);
            for k in 0..j {
                d -= self.get(j, k) * self.get(j, k);
            }
            if !(d > 0.0) {
                return Err(Error::Solver(alloc::format!("dense matrix not positive definite at column {j}")));
            }
            let d = libm::sqrt(d);
            self.set(j, j, d);
            for i in (j + 1)..n {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s -= self.get(i, k) * self.get(j, k);
                }
                self.set(i, j, s / d);
            }
            for k in (j + 1)..n {
                self.set(j, k, 0.0);
            }
        }
        Ok(self)
    }

    /// Solves L Lᵀ x = b with `self` a lower Cholesky factor.
    pub fn cholesky_solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s -= self.get(i, k) * y[k];
            }
            y[i] = s / self.get(i, i);
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s -= self.get(k, i) * y[k];
            }
            y[i] = s / self.get(i, i);
        }
        y
    }

    /// L⁻¹ A L⁻ᵀ for a lower factor L (symmetric result).
    pub fn congruence_inverse(&self, l: &DenseMatrix) -> DenseMatrix {
        let n = self.n;
        // X = L⁻¹ A (forward substitution on columns)
        let mut x = self.clone();
        for c in 0..n {
            for i in 0..n {
                let mut s = x.get(i, c);
                for k in 0..i {
                    s -= l.get(i, k) * x.get(k, c);
                }
                x.set(i, c, s / l.get(i, i));
            }
        }
        // C = X L⁻ᵀ, i.e. Cᵀ = L⁻¹ Xᵀ
        let mut c = DenseMatrix::zeros(n);
        for r in 0..n {
            for i in 0..n {
                let mut s = x.get(r, i);
                for k in 0..i {
                    s -= l.get(i, k) * c.get(r, k);
                }
                c.set(r, i, s / l.get(i, i));
            }
        }
        // symmetrize rounding
        for i in 0..n {
            for j in 0..i {
                let v = 0.5 * (c.get(i, j) + c.get(j, i));
                c.set(i, j, v);
                c.set(j, i, v);
            }
        }
        c
    }

    /// Householder reduction of a symmetric matrix to tridiagonal form
    /// (eigenvalues only).
    pub fn tridiagonalize(mut self) -> SymTridiagonal {
        let n = self.n;
        if n == 0 {
            return SymTridiagonal { diag: Vec::new(), off: Vec::new() };
        }
        let mut off = alloc::vec![0.0; n.saturating_sub(1)];
        for k in 0..n.saturating_sub(2) {
            let mut alpha = 0.0;
            for i in (k + 1)..n {
                alpha += self.get(i, k) * self.get(i, k);
            }
            let alpha = libm::sqrt(alpha);
            if alpha == 0.0 {
                off[k] = 0.0;
                continue;
            }
            let x0 = self.get(k + 1, k);
            let alpha = if x0 > 0.0 { -alpha } else { alpha };
            let mut v = alloc::vec![0.0; n];
            v[k + 1] = x0 - alpha;
            for i in (k + 2)..n {
                v[i] = self.get(i, k);
            }
            let vnorm2: f64 = v.iter().map(|a| a * a).sum();
            if vnorm2 == 0.0 {
                off[k] = x0;
                continue;
            }
            // A <- H A H with H = I - 2 v vᵀ / vᵀv, on the trailing block
            let mut p = alloc::vec![0.0; n];
            for i in (k + 1)..n {
                let mut s = 0.0;
                for j in (k + 1)..n {
                    s += self.get(i, j) * v[j];
                }
                p[i] = 2.0 * s / vnorm2;
            }
            let kfac: f64 = (k + 1..n).map(|i| v[i] * p[i]).sum::<f64>() / vnorm2;
            let mut q = alloc::vec![0.0; n];
            for i in (k + 1)..n {
                q[i] = p[i] - kfac * v[i];
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let val = self.get(i, j) - v[i] * q[j] - q[i] * v[j];
                    self.set(i, j, val);
                }
            }
            off[k] = alpha;
        }
        if n >= 2 {
            off[n - 2] = self.get(n - 1, n - 2);
        }
        let diag = (0..n).map(|i| self.get(i, i)).collect();
        SymTridiagonal { diag, off }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_1d(n: usize) -> SymTridiagonal {
        SymTridiagonal::new(alloc::vec![2.0; n], alloc::vec![-1.0; n - 1])
    }

    #[test]
    fn bisection_matches_closed_form() {
        let n = 50;
        let t = laplacian_1d(n);
        for k in [0usize, 1, 10, 49] {
            let exact = 2.0 - 2.0 * libm::cos((k as f64 + 1.0) * core::f64::consts::PI / (n as f64 + 1.0));
            let got = t.eigenvalue_bisect(k, 1e-14);
            assert!((got - exact).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn shifted_solve() {
        let t = laplacian_1d(6);
        let b = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let x = t.solve_shifted(-0.5, &b).unwrap();
        for i in 0..6 {
            let mut r = (t.diag[i] + 0.5) * x[i];
            if i > 0 {
                r += t.off[i - 1] * x[i - 1];
            }
            if i < 5 {
                r += t.off[i] * x[i + 1];
            }
            assert!((r - b[i]).abs() < 1e-12);
        }
    }

    fn grid_matrix(m: usize) -> CsrMatrix {
        // 5-point Laplacian + identity on an m x m grid, numbered randomly-ish
        let n = m * m;
        let id = |i: usize, j: usize| ((i * m + j) * 7919) % n;
        let mut adj = alloc::vec![Vec::new(); n];
        for i in 0..m {
            for j in 0..m {
                if i + 1 < m {
                    adj[id(i, j)].push(id(i + 1, j));
                    adj[id(i + 1, j)].push(id(i, j));
                }
                if j + 1 < m {
                    adj[id(i, j)].push(id(i, j + 1));
                    adj[id(i, j + 1)].push(id(i, j));
                }
            }
        }
        let mut a = CsrMatrix::with_pattern(&adj);
        for v in 0..n {
            let nb: Vec<usize> = adj[v].clone();
            a.add(v, v, 1.0 + nb.len() as f64);
            for w in nb {
                a.add(v, w, -1.0);
            }
        }
        a
    }

    #[test]
    fn envelope_cholesky_solves() {
        let a = grid_matrix(13);
        let n = a.n();
        let perm = a.reverse_cuthill_mckee();
        let mut seen = alloc::vec![false; n];
        for &p in &perm {
            assert!(!seen[p]);
            seen[p] = true;
        }
        let f = EnvelopeCholesky::factor(&a, perm).unwrap();
        let b: Vec<f64> = (0..n).map(|i| libm::sin(i as f64)).collect();
        let x = f.solve(&b);
        let r = a.mul_vec(&x);
        for i in 0..n {
            assert!((r[i] - b[i]).abs() < 1e-12);
        }
        // RCM keeps the envelope near n·m
        assert!(f.stored_entries() < 2 * n * 13 + n);
    }

    #[test]
    fn indefinite_matrix_rejected() {
        let a = grid_matrix(4).lin_comb(1.0, &grid_matrix(4), -3.0);
        let perm = a.reverse_cuthill_mckee();
        assert!(matches!(EnvelopeCholesky::factor(&a, perm), Err(Error::Solver(_))));
    }

    #[test]
    fn dense_tridiagonalization_preserves_spectrum() {
        let a = grid_matrix(5);
        let dense = a.to_dense();
        let t = dense.clone().tridiagonalize();
        let tr_dense: f64 = (0..dense.n()).map(|i| dense.get(i, i)).sum();
        let tr_t: f64 = t.diag.iter().sum();
        assert!((tr_dense - tr_t).abs() < 1e-10);
        // graph Laplacian of the 5x5 grid plus I: eigenvalues 1 + μ_i + μ_j,
        // μ_k = 2 - 2cos(kπ/5), k = 0..4
        let mu = |k: usize| 2.0 - 2.0 * libm::cos(k as f64 * core::f64::consts::PI / 5.0);
        assert!((t.eigenvalue_bisect(0, 1e-13) - 1.0).abs() < 1e-11);
        assert!((t.eigenvalue_bisect(1, 1e-13) - (1.0 + mu(1))).abs() < 1e-11);
        assert!((t.eigenvalue_bisect(3, 1e-13) - (1.0 + 2.0 * mu(1))).abs() < 1e-11);
    }

    #[test]
    fn dense_cholesky_and_congruence() {
        let a = grid_matrix(3).to_dense();
        let l = a.clone().cholesky().unwrap();
        let b = [1.0, -2.0, 0.5, 3.0, 0.0, 1.0, 2.0, -1.0, 0.25];
        let x = l.cholesky_solve(&b);
        for i in 0..9 {
            let r: f64 = (0..9).map(|j| a.get(i, j) * x[j]).sum();
            assert!((r - b[i]).abs() < 1e-12);
        }
        // L⁻¹ A L⁻ᵀ = I
        let c = a.congruence_inverse(&l);
        for i in 0..9 {
            for j in 0..9 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((c.get(i, j) - e).abs() < 1e-12);
            }
        }
    }
}
