//! Triangulation of star-shaped corpus domains and uniform refinement.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{orient, Domain2D, Point, Segment, SegmentFlag};

/// Largest accepted ratio between a triangle's shape measure and that of the
/// equilateral triangle.
pub const MAX_ASPECT_RATIO: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryEdge {
    pub vertices: [usize; 2],
    pub flag: SegmentFlag,
    /// Index into the domain's boundary segments.
    pub segment: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh2D {
    pub vertices: Vec<Point>,
    /// Counter-clockwise vertex triples.
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<BoundaryEdge>,
    /// Target edge length.
    pub h: f64,
}

struct BoundarySampler<'a> {
    segments: Vec<&'a Segment>,
    cumulative: Vec<f64>,
}

impl<'a> BoundarySampler<'a> {
    fn new(domain: &'a Domain2D) -> Self {
        let segments: Vec<&Segment> = domain.boundary_segments().iter().map(|b| &b.segment).collect();
        let mut cumulative = alloc::vec![0.0];
        for s in &segments {
            let last = *cumulative.last().unwrap();
            cumulative.push(last + s.length());
        }
        Self { segments, cumulative }
    }

    fn total(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// Boundary point at normalized arc length u ∈ [0, 1).
    fn at(&self, u: f64) -> Point {
        let s = u * self.total();
        let k = self.cumulative.partition_point(|&c| c <= s).saturating_sub(1).min(self.segments.len() - 1);
        let len = self.cumulative[k + 1] - self.cumulative[k];
        self.segments[k].point_at(((s - self.cumulative[k]) / len).clamp(0.0, 1.0))
    }
}

/// Subdivisions of one boundary segment: edge length ≤ h, and on arcs the
/// chord sagitta stays below h²/10 with margin.
fn subdivisions(segment: &Segment, h: f64) -> usize {
    let len = segment.length();
    let mut n = libm::ceil(len / h) as usize;
    if let Segment::Arc { radius, .. } = segment {
        // sagitta ≈ ℓ²/(8R) ≤ 0.9·h²/10
        let lmax = h * libm::sqrt(0.72 * radius);
        n = n.max(libm::ceil(len / lmax) as usize);
    }
    n.max(1)
}

/// Spider-web triangulation: L scaled copies of the boundary about the star
/// center, a fan around the center and zipper strips between layers.
pub fn mesh_domain(domain: &Domain2D, h: f64) -> Result<Mesh2D> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Mesh(alloc::format!("mesh size must be positive, got {h}")));
    }
    let sampler = BoundarySampler::new(domain);
    let total = sampler.total();

    // outer layer: exact boundary samples, segment by segment
    let mut outer: Vec<(Point, f64)> = Vec::new();
    let mut edge_info: Vec<(SegmentFlag, usize)> = Vec::new();
    for (si, bs) in domain.boundary_segments().iter().enumerate() {
        let m = subdivisions(&bs.segment, h);
        for k in 0..m {
            let p = bs.segment.point_at(k as f64 / m as f64);
            let u = (sampler.cumulative[si] + bs.segment.length() * k as f64 / m as f64) / total;
            outer.push((p, u));
            edge_info.push((bs.flag, si));
        }
    }
    let n = outer.len();
    if n < 3 {
        return Err(Error::Mesh(alloc::format!("h = {h} leaves fewer than 3 boundary vertices")));
    }
    let center = domain.star_center();
    let r_max = outer.iter().map(|(p, _)| p.dist(center)).fold(0.0, f64::max);
    let layers = (libm::ceil(r_max / h) as usize).max(1);

    let mut vertices = alloc::vec![center];
    let mut triangles = Vec::new();
    // (vertex index, parameter) for the previous layer
    let mut prev: Vec<(usize, f64)> = Vec::new();
    for j in 1..=layers {
        let layer: Vec<(usize, f64)> = if j == layers {
            outer
                .iter()
                .map(|(p, u)| {
                    vertices.push(*p);
                    (vertices.len() - 1, *u)
                })
                .collect()
        } else {
            let nj = ((n as f64 * j as f64 / layers as f64 + 0.5) as usize).max(3);
            let s = j as f64 / layers as f64;
            (0..nj)
                .map(|k| {
                    let u = k as f64 / nj as f64;
                    let b = sampler.at(u);
                    vertices.push(center + s * (b - center));
                    (vertices.len() - 1, u)
                })
                .collect()
        };
        if j == 1 {
            for k in 0..layer.len() {
                triangles.push([0, layer[k].0, layer[(k + 1) % layer.len()].0]);
            }
        } else {
            zipper(&prev, &layer, &mut triangles);
        }
        prev = layer;
    }

    let first_outer = vertices.len() - n;
    let boundary_edges = (0..n)
        .map(|k| BoundaryEdge {
            vertices: [first_outer + k, first_outer + (k + 1) % n],
            flag: edge_info[k].0,
            segment: edge_info[k].1,
        })
        .collect();
    let mesh = Mesh2D { vertices, triangles, boundary_edges, h };
    mesh.validate()?;
    Ok(mesh)
}

fn zipper(inner: &[(usize, f64)], outer: &[(usize, f64)], triangles: &mut Vec<[usize; 3]>) {
    let (p, q) = (inner.len(), outer.len());
    let next = |layer: &[(usize, f64)], i: usize| if i + 1 < layer.len() { layer[i + 1].1 } else { 1.0 + layer[0].1 };
    let (mut i, mut k) = (0, 0);
    while i < p || k < q {
        let advance_outer = k < q && (i == p || next(outer, k) <= next(inner, i));
        if advance_outer {
            triangles.push([inner[i % p].0, outer[k].0, outer[(k + 1) % q].0]);
            k += 1;
        } else {
            triangles.push([inner[i].0, outer[k % q].0, inner[(i + 1) % p].0]);
            i += 1;
        }
    }
}

/// Shape measure normalized to 1 for the equilateral triangle:
/// (sum of squared edges) / (4√3 · area).
pub fn aspect_ratio(a: Point, b: Point, c: Point) -> f64 {
    let area = 0.5 * orient(a, b, c).abs();
    if area == 0.0 {
        return f64::INFINITY;
    }
    let s = (a - b).norm_sq() + (b - c).norm_sq() + (c - a).norm_sq();
    s / (4.0 * libm::sqrt(3.0) * area)
}

impl Mesh2D {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn triangle_points(&self, t: usize) -> [Point; 3] {
        let [i, j, k] = self.triangles[t];
        [self.vertices[i], self.vertices[j], self.vertices[k]]
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangle_points(t);
        0.5 * orient(a, b, c)
    }

    pub fn max_aspect_ratio(&self) -> f64 {
        (0..self.triangles.len())
            .map(|t| {
                let [a, b, c] = self.triangle_points(t);
                aspect_ratio(a, b, c)
            })
            .fold(0.0, f64::max)
    }

    /// Vertex adjacency lists (sorted, without the vertex itself).
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = alloc::vec![Vec::new(); self.vertices.len()];
        for t in &self.triangles {
            for a in 0..3 {
                for b in 0..3 {
                    if a != b {
                        adj[t[a]].push(t[b]);
                    }
                }
            }
        }
        for l in &mut adj {
            l.sort_unstable();
            l.dedup();
        }
        adj
    }

    /// Edge → number of incident triangles, keyed by the sorted vertex pair.
    fn edge_counts(&self) -> BTreeMap<(usize, usize), usize> {
        let mut counts = BTreeMap::new();
        for t in &self.triangles {
            for e in 0..3 {
                let (a, b) = (t[e], t[(e + 1) % 3]);
                *counts.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        counts
    }

    /// Conformity, orientation, aspect ratio and boundary bookkeeping.
    pub fn validate(&self) -> Result<()> {
        let nv = self.vertices.len();
        for (ti, t) in self.triangles.iter().enumerate() {
            if t.iter().any(|&v| v >= nv) {
                return Err(Error::Mesh(alloc::format!("triangle {ti} references a missing vertex")));
            }
            if !(self.triangle_area(ti) > 0.0) {
                return Err(Error::Mesh(alloc::format!("triangle {ti} is not positively oriented")));
            }
            let [a, b, c] = self.triangle_points(ti);
            let q = aspect_ratio(a, b, c);
            if q > MAX_ASPECT_RATIO {
                return Err(Error::Mesh(alloc::format!(
                    "triangle {ti} has aspect ratio {q:.2} > {MAX_ASPECT_RATIO} (h = {} too coarse?)",
                    self.h
                )));
            }
        }
        let counts = self.edge_counts();
        let mut single: Vec<(usize, usize)> = counts.iter().filter(|(_, &c)| c == 1).map(|(e, _)| *e).collect();
        if let Some((e, c)) = counts.iter().find(|(_, &c)| c > 2) {
            return Err(Error::Mesh(alloc::format!("edge {e:?} shared by {c} triangles")));
        }
        let mut declared: Vec<(usize, usize)> = self
            .boundary_edges
            .iter()
            .map(|b| (b.vertices[0].min(b.vertices[1]), b.vertices[0].max(b.vertices[1])))
            .collect();
        single.sort_unstable();
        declared.sort_unstable();
        if single != declared {
            return Err(Error::Mesh("boundary edges do not match the triangulation".into()));
        }
        Ok(())
    }

    /// Largest distance of a boundary-edge midpoint from its declared segment.
    pub fn max_boundary_deviation(&self, domain: &Domain2D, flag: SegmentFlag) -> f64 {
        let segs = domain.boundary_segments();
        self.boundary_edges
            .iter()
            .filter(|e| e.flag == flag)
            .map(|e| {
                let m = self.vertices[e.vertices[0]].midpoint(self.vertices[e.vertices[1]]);
                let s = &segs[e.segment].segment;
                m.dist(s.project(m))
                    .max(s.distance(self.vertices[e.vertices[0]]))
                    .max(s.distance(self.vertices[e.vertices[1]]))
            })
            .fold(0.0, f64::max)
    }

    /// Uniform 4-way split. Midpoints of boundary edges are moved onto their
    /// segment so arcs stay resolved.
    pub fn refine(&self, domain: &Domain2D) -> Result<Mesh2D> {
        let segs = domain.boundary_segments();
        let mut vertices = self.vertices.clone();
        let mut boundary_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (i, e) in self.boundary_edges.iter().enumerate() {
            let [a, b] = e.vertices;
            boundary_of.insert((a.min(b), a.max(b)), i);
        }
        let mut mids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut midpoint = |a: usize, b: usize, vertices: &mut Vec<Point>| -> usize {
            let key = (a.min(b), a.max(b));
            *mids.entry(key).or_insert_with(|| {
                let mut m = vertices[a].midpoint(vertices[b]);
                if let Some(&i) = boundary_of.get(&key) {
                    m = segs[self.boundary_edges[i].segment].segment.project(m);
                }
                vertices.push(m);
                vertices.len() - 1
            })
        };
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        for &[a, b, c] in &self.triangles {
            let ab = midpoint(a, b, &mut vertices);
            let bc = midpoint(b, c, &mut vertices);
            let ca = midpoint(c, a, &mut vertices);
            triangles.extend_from_slice(&[[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        let mut boundary_edges = Vec::with_capacity(2 * self.boundary_edges.len());
        for e in &self.boundary_edges {
            let [a, b] = e.vertices;
            let m = midpoint(a, b, &mut vertices);
            boundary_edges.push(BoundaryEdge { vertices: [a, m], ..*e });
            boundary_edges.push(BoundaryEdge { vertices: [m, b], ..*e });
        }
        let mesh = Mesh2D { vertices, triangles, boundary_edges, h: 0.5 * self.h };
        mesh.validate()?;
        Ok(mesh)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coarse_unit_square() {
        let d = Domain2D::rectangle((0.0, 1.0), (0.0, 1.0)).unwrap();
        let m = mesh_domain(&d, 0.5).unwrap();
        assert!(m.triangles.len() >= 8);
        assert_eq!(m.boundary_edges.len(), 8);
        assert!(m.boundary_edges.iter().all(|e| e.flag == SegmentFlag::Physical));
        let area: f64 = (0..m.triangles.len()).map(|t| m.triangle_area(t)).sum();
        assert!((area - 1.0).abs() < 1e-14);
    }

    #[test]
    fn disk_boundary_on_circle() {
        let d = Domain2D::disk(Point::default(), 1.0).unwrap();
        let m = mesh_domain(&d, 0.1).unwrap();
        for e in &m.boundary_edges {
            for v in e.vertices {
                assert!((m.vertices[v].norm() - 1.0).abs() < 1e-12);
            }
        }
        assert!(m.max_boundary_deviation(&d, SegmentFlag::Physical) <= 0.1 * 0.1 / 10.0);
    }

    #[test]
    fn half_plane_flags() {
        let d = Domain2D::half_plane(0.0, 0.0, 6.0).unwrap();
        let m = mesh_domain(&d, 0.2).unwrap();
        for e in &m.boundary_edges {
            let (p, q) = (m.vertices[e.vertices[0]], m.vertices[e.vertices[1]]);
            match e.flag {
                SegmentFlag::Physical => assert!(p.x.abs() < 1e-12 && q.x.abs() < 1e-12),
                SegmentFlag::Artificial => {
                    assert!((p.norm() - 6.0).abs() < 1e-12 && (q.norm() - 6.0).abs() < 1e-12)
                }
            }
        }
        assert!(m.boundary_edges.iter().any(|e| e.flag == SegmentFlag::Artificial));
    }

    #[test]
    fn refinement_keeps_arcs() {
        let d = Domain2D::disk(Point::new(0.3, -0.2), 1.2).unwrap();
        let m = mesh_domain(&d, 0.3).unwrap();
        let r = m.refine(&d).unwrap();
        assert_eq!(r.triangles.len(), 4 * m.triangles.len());
        assert_eq!(r.boundary_edges.len(), 2 * m.boundary_edges.len());
        for e in &r.boundary_edges {
            for v in e.vertices {
                assert!((r.vertices[v].dist(Point::new(0.3, -0.2)) - 1.2).abs() < 1e-12);
            }
        }
        let a0: f64 = (0..m.triangles.len()).map(|t| m.triangle_area(t)).sum();
        let a1: f64 = (0..r.triangles.len()).map(|t| r.triangle_area(t)).sum();
        assert!(a1 > a0 && a1 < d.area());
    }

    #[test]
    fn star_polygon_meshes() {
        let verts = alloc::vec![
            Point::new(1.0, 0.0),
            Point::new(0.3, 0.3),
            Point::new(0.0, 1.0),
            Point::new(-0.3, 0.3),
            Point::new(-1.0, 0.0),
            Point::new(-0.3, -0.3),
            Point::new(0.0, -1.0),
            Point::new(0.3, -0.3),
        ];
        let d = Domain2D::polygon(verts).unwrap();
        let m = mesh_domain(&d, 0.1).unwrap();
        let area: f64 = (0..m.triangles.len()).map(|t| m.triangle_area(t)).sum();
        assert!((area - d.area()).abs() < 1e-12);
    }

    #[test]
    fn bad_sizes_rejected() {
        let d = Domain2D::rectangle((0.0, 1.0), (0.0, 1.0)).unwrap();
        assert!(matches!(mesh_domain(&d, 0.0), Err(Error::Mesh(_))));
        assert!(matches!(mesh_domain(&d, f64::NAN), Err(Error::Mesh(_))));
    }
}
