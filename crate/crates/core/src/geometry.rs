//! Gaussian measure and perimeter of half-spaces and planar domains.
//!
//! φ₂(x) = exp(-|x|²/2)/(2π) is the standard planar Gaussian density. Unbounded
//! domains (half-planes) are truncated to a disk of radius `R`; the circular
//! part of their boundary is flagged [`SegmentFlag::Artificial`] and never
//! contributes to perimeters or Robin terms.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2, TAU};
use core::ops::{Add, Mul, Sub};

use crate::error::{domain_err, Result};
use crate::quadrature::Integrator;
use crate::special::{erf, erfcinv, erfinv, gauss_cdf, gauss_density_1d};

/// Default truncation radius for unbounded domains.
pub const DEFAULT_TRUNCATION_RADIUS: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn midpoint(self, o: Point) -> Point {
        Point::new(0.5 * (self.x + o.x), 0.5 * (self.y + o.y))
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Rotation about the origin by `angle` radians.
    pub fn rotated(self, angle: f64) -> Point {
        let (s, c) = libm::sincos(angle);
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<Point> for f64 {
    type Output = Point;
    fn mul(self, p: Point) -> Point {
        Point::new(self * p.x, self * p.y)
    }
}

/// Twice the signed area of (a, b, c); positive when counter-clockwise.
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

/// Planar Gaussian density φ₂.
#[inline]
pub fn gauss_density_2d(p: Point) -> f64 {
    libm::exp(-0.5 * p.norm_sq()) / TAU
}

/// The half-space S_σ = {x₁ < σ}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfSpace {
    pub sigma: f64,
}

impl HalfSpace {
    pub fn new(sigma: f64) -> Self {
        Self { sigma }
    }

    /// The half-space with the given Gaussian measure.
    pub fn with_measure(s: f64) -> Result<Self> {
        symmetrize(s).map(Self::new)
    }

    pub fn measure(&self) -> f64 {
        measure_halfspace(self.sigma)
    }

    /// Gaussian perimeter φ₁(σ) of the bounding hyperplane.
    pub fn perimeter(&self) -> f64 {
        gauss_density_1d(self.sigma)
    }
}

/// γ(S_σ) = 1/2 + erf(σ/√2)/2.
pub fn measure_halfspace(sigma: f64) -> f64 {
    if sigma < 0.0 {
        // erfc keeps the left tail relative-accurate
        gauss_cdf(sigma)
    } else {
        0.5 + 0.5 * erf(sigma * FRAC_1_SQRT_2)
    }
}

/// σ# = √2 erfinv(2s - 1): threshold of the half-space of Gaussian measure s.
pub fn symmetrize(s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(domain_err!("measure must lie in (0, 1), got {s}"));
    }
    if s < 0.5 {
        // tail form keeps relative accuracy for tiny measures
        return Ok(-SQRT_2 * erfcinv(2.0 * s)?);
    }
    Ok(SQRT_2 * erfinv(2.0 * s - 1.0)?)
}

/// Gaussian isoperimetric profile g(s) = φ₁(σ#(s)).
pub fn isoperimetric_g(s: f64) -> Result<f64> {
    Ok(gauss_density_1d(symmetrize(s)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SegmentFlag {
    /// Part of the true boundary: carries the Robin condition and perimeter.
    Physical,
    /// Truncation of an unbounded domain: natural condition, no perimeter.
    Artificial,
}

impl SegmentFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            SegmentFlag::Physical => "physical",
            SegmentFlag::Artificial => "artificial",
        }
    }
}

/// A boundary piece, traversed so that the domain lies on its left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    Line {
        a: Point,
        b: Point,
    },
    /// Arc of the circle (center, radius) from angle `start` sweeping `sweep` (> 0, CCW).
    Arc {
        center: Point,
        radius: f64,
        start: f64,
        sweep: f64,
    },
}

impl Segment {
    pub fn length(&self) -> f64 {
        match *self {
            Segment::Line { a, b } => a.dist(b),
            Segment::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    /// Point at parameter `s` ∈ [0, 1] (uniform in arc length).
    pub fn point_at(&self, s: f64) -> Point {
        match *self {
            Segment::Line { a, b } => a + s * (b - a),
            Segment::Arc { center, radius, start, sweep } => {
                let (sn, cs) = libm::sincos(start + s * sweep);
                center + radius * Point::new(cs, sn)
            }
        }
    }

    pub fn start(&self) -> Point {
        self.point_at(0.0)
    }

    pub fn end(&self) -> Point {
        self.point_at(1.0)
    }

    /// Closest point of the underlying curve (line or full circle) to `p`.
    pub fn project(&self, p: Point) -> Point {
        match *self {
            Segment::Line { a, b } => {
                let d = b - a;
                let s = ((p - a).dot(d) / d.norm_sq()).clamp(0.0, 1.0);
                a + s * d
            }
            Segment::Arc { center, radius, .. } => {
                let r = p - center;
                let n = r.norm();
                if n == 0.0 {
                    return p;
                }
                center + (radius / n) * r
            }
        }
    }

    /// Distance from `p` to the segment itself.
    pub fn distance(&self, p: Point) -> f64 {
        match *self {
            Segment::Line { .. } => self.project(p).dist(p),
            Segment::Arc { center, radius, start, sweep } => {
                let r = p - center;
                let ang = libm::atan2(r.y, r.x);
                let mut rel = libm::fmod(ang - start, TAU);
                if rel < 0.0 {
                    rel += TAU;
                }
                if rel <= sweep {
                    (r.norm() - radius).abs()
                } else {
                    p.dist(self.start()).min(p.dist(self.end()))
                }
            }
        }
    }

    /// ∫ f ds over the segment by composite Gauss-Legendre.
    pub fn line_integral<F: FnMut(Point) -> f64>(&self, q: &Integrator, mut f: F) -> f64 {
        let len = self.length();
        len * q.integrate(0.0, 1.0, |s| f(self.point_at(s)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySegment {
    pub segment: Segment,
    pub flag: SegmentFlag,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DomainKind {
    Rectangle {
        x_range: (f64, f64),
        y_range: (f64, f64),
    },
    Disk {
        center: Point,
        radius: f64,
    },
    /// {x : x·(cos a, sin a) < offset}, truncated to |x| < truncation_radius.
    HalfPlane {
        angle: f64,
        offset: f64,
        truncation_radius: f64,
    },
    /// Simple polygon, star-shaped with respect to an interior point; stored CCW.
    Polygon {
        vertices: Vec<Point>,
    },
}

/// A planar domain with its boundary split into flagged segments.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain2D {
    kind: DomainKind,
    boundary: Vec<BoundarySegment>,
}

impl Domain2D {
    pub fn rectangle(x_range: (f64, f64), y_range: (f64, f64)) -> Result<Self> {
        let (x0, x1) = x_range;
        let (y0, y1) = y_range;
        if !(x0.is_finite() && x1.is_finite() && y0.is_finite() && y1.is_finite()) || !(x1 > x0 && y1 > y0) {
            return Err(domain_err!("degenerate rectangle [{x0}, {x1}] x [{y0}, {y1}]"));
        }
        let c = [Point::new(x0, y0), Point::new(x1, y0), Point::new(x1, y1), Point::new(x0, y1)];
        let boundary = (0..4)
            .map(|i| BoundarySegment {
                segment: Segment::Line { a: c[i], b: c[(i + 1) % 4] },
                flag: SegmentFlag::Physical,
            })
            .collect();
        Ok(Self { kind: DomainKind::Rectangle { x_range, y_range }, boundary })
    }

    pub fn disk(center: Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || !(center.x.is_finite() && center.y.is_finite()) {
            return Err(domain_err!("degenerate disk of radius {radius}"));
        }
        let boundary = alloc::vec![BoundarySegment {
            segment: Segment::Arc { center, radius, start: 0.0, sweep: TAU },
            flag: SegmentFlag::Physical,
        }];
        Ok(Self { kind: DomainKind::Disk { center, radius }, boundary })
    }

    /// The half-plane {x·n < offset}, n = (cos angle, sin angle), truncated to |x| < R.
    pub fn half_plane(angle: f64, offset: f64, truncation_radius: f64) -> Result<Self> {
        let r = truncation_radius;
        if !(r > 0.0 && r.is_finite()) || !angle.is_finite() || !offset.is_finite() {
            return Err(domain_err!("invalid half-plane (angle {angle}, offset {offset}, R {r})"));
        }
        if offset <= -r {
            return Err(domain_err!("half-plane offset {offset} leaves nothing inside radius {r}"));
        }
        let kind = DomainKind::HalfPlane { angle, offset, truncation_radius: r };
        let boundary = if offset >= r {
            alloc::vec![BoundarySegment {
                segment: Segment::Arc { center: Point::default(), radius: r, start: 0.0, sweep: TAU },
                flag: SegmentFlag::Artificial,
            }]
        } else {
            // chord endpoints at angle ± half from the normal
            let half = libm::acos(offset / r);
            let p = Point::new(libm::cos(angle + half), libm::sin(angle + half));
            let q = Point::new(libm::cos(angle - half), libm::sin(angle - half));
            alloc::vec![
                BoundarySegment { segment: Segment::Line { a: r * q, b: r * p }, flag: SegmentFlag::Physical },
                BoundarySegment {
                    segment: Segment::Arc {
                        center: Point::default(),
                        radius: r,
                        start: angle + half,
                        sweep: TAU - 2.0 * half
                    },
                    flag: SegmentFlag::Artificial,
                },
            ]
        };
        Ok(Self { kind, boundary })
    }

    /// A simple polygon that is star-shaped with respect to some interior point.
    /// Either orientation is accepted.
    pub fn polygon(mut vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 || vertices.iter().any(|v| !(v.x.is_finite() && v.y.is_finite())) {
            return Err(domain_err!("polygon needs at least 3 finite vertices"));
        }
        let area2 = polygon_area2(&vertices);
        if area2.abs() <= 1e-14 {
            return Err(domain_err!("polygon has zero area"));
        }
        if area2 < 0.0 {
            vertices.reverse();
        }
        let n = vertices.len();
        for i in 0..n {
            if vertices[i].dist(vertices[(i + 1) % n]) == 0.0 {
                return Err(domain_err!("polygon has a repeated vertex at index {i}"));
            }
        }
        if polygon_self_intersects(&vertices) {
            return Err(domain_err!("polygon edges intersect"));
        }
        if star_point(&vertices).is_none() {
            return Err(domain_err!("polygon is not star-shaped about its vertex mean or centroid"));
        }
        let boundary = (0..n)
            .map(|i| BoundarySegment {
                segment: Segment::Line { a: vertices[i], b: vertices[(i + 1) % n] },
                flag: SegmentFlag::Physical,
            })
            .collect();
        Ok(Self { kind: DomainKind::Polygon { vertices }, boundary })
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    pub fn boundary_segments(&self) -> &[BoundarySegment] {
        &self.boundary
    }

    pub fn is_half_plane(&self) -> bool {
        matches!(self.kind, DomainKind::HalfPlane { .. })
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            DomainKind::Rectangle { .. } => "rectangle",
            DomainKind::Disk { .. } => "disk",
            DomainKind::HalfPlane { .. } => "half_plane",
            DomainKind::Polygon { .. } => "polygon",
        }
    }

    /// A point with respect to which the domain is star-shaped.
    pub fn star_center(&self) -> Point {
        match &self.kind {
            DomainKind::Rectangle { x_range, y_range } => {
                Point::new(0.5 * (x_range.0 + x_range.1), 0.5 * (y_range.0 + y_range.1))
            }
            DomainKind::Disk { center, .. } => *center,
            DomainKind::HalfPlane { angle, offset, truncation_radius } => {
                // halfway between the chord and the far side of the circle
                let d = 0.5 * (offset.min(*truncation_radius) - truncation_radius);
                Point::new(d * libm::cos(*angle), d * libm::sin(*angle))
            }
            DomainKind::Polygon { vertices } => star_point(vertices).unwrap_or_default(),
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        match &self.kind {
            DomainKind::Rectangle { x_range, y_range } => {
                p.x > x_range.0 && p.x < x_range.1 && p.y > y_range.0 && p.y < y_range.1
            }
            DomainKind::Disk { center, radius } => p.dist(*center) < *radius,
            DomainKind::HalfPlane { angle, offset, truncation_radius } => {
                let n = Point::new(libm::cos(*angle), libm::sin(*angle));
                p.dot(n) < *offset && p.norm() < *truncation_radius
            }
            DomainKind::Polygon { vertices } => {
                let n = vertices.len();
                (0..n).all(|i| orient(vertices[i], vertices[(i + 1) % n], p) > 0.0) || winding_inside(vertices, p)
            }
        }
    }

    /// Rotation about the origin. Rectangles become polygons.
    pub fn rotated(&self, angle: f64) -> Result<Domain2D> {
        match &self.kind {
            DomainKind::Rectangle { .. } | DomainKind::Polygon { .. } => {
                let verts = self.boundary.iter().map(|b| b.segment.start().rotated(angle)).collect();
                Domain2D::polygon(verts)
            }
            DomainKind::Disk { center, radius } => Domain2D::disk(center.rotated(angle), *radius),
            DomainKind::HalfPlane { angle: a, offset, truncation_radius } => {
                Domain2D::half_plane(a + angle, *offset, *truncation_radius)
            }
        }
    }

    /// Euclidean area (of the truncated region for half-planes).
    pub fn area(&self) -> f64 {
        match &self.kind {
            DomainKind::Rectangle { x_range, y_range } => (x_range.1 - x_range.0) * (y_range.1 - y_range.0),
            DomainKind::Disk { radius, .. } => PI * radius * radius,
            DomainKind::HalfPlane { offset, truncation_radius: r, .. } => {
                if *offset >= *r {
                    return PI * r * r;
                }
                let half = libm::acos(offset / r);
                // disk minus the circular segment beyond the chord
                PI * r * r - (r * r * (half - libm::sin(half) * libm::cos(half)))
            }
            DomainKind::Polygon { vertices } => 0.5 * polygon_area2(vertices),
        }
    }
}

fn polygon_area2(v: &[Point]) -> f64 {
    let n = v.len();
    (0..n).map(|i| v[i].cross(v[(i + 1) % n])).sum()
}

fn segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = orient(a, b, c);
    let d2 = orient(a, b, d);
    let d3 = orient(c, d, a);
    let d4 = orient(c, d, b);
    (d1 * d2 < 0.0) && (d3 * d4 < 0.0)
}

fn polygon_self_intersects(v: &[Point]) -> bool {
    let n = v.len();
    for i in 0..n {
        for j in (i + 1)..n {
            // skip adjacent edges
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            if segments_cross(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]) {
                return true;
            }
        }
    }
    false
}

fn visible_from(v: &[Point], c: Point) -> bool {
    let n = v.len();
    (0..n).all(|i| orient(c, v[i], v[(i + 1) % n]) > 1e-12)
}

fn star_point(v: &[Point]) -> Option<Point> {
    let n = v.len() as f64;
    let mean = Point::new(v.iter().map(|p| p.x).sum::<f64>() / n, v.iter().map(|p| p.y).sum::<f64>() / n);
    if visible_from(v, mean) {
        return Some(mean);
    }
    let a2 = polygon_area2(v);
    let m = v.len();
    let (mut cx, mut cy) = (0.0, 0.0);
    for i in 0..m {
        let p = v[i];
        let q = v[(i + 1) % m];
        let cr = p.cross(q);
        cx += (p.x + q.x) * cr;
        cy += (p.y + q.y) * cr;
    }
    let centroid = Point::new(cx / (3.0 * a2), cy / (3.0 * a2));
    visible_from(v, centroid).then_some(centroid)
}

fn winding_inside(v: &[Point], p: Point) -> bool {
    let n = v.len();
    let mut inside = false;
    for i in 0..n {
        let a = v[i];
        let b = v[(i + 1) % n];
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

fn integrator() -> Integrator {
    Integrator::default()
}

/// Gaussian measure γ₂(Ω) by quadrature.
///
/// Rectangles use a tensor rule (the density factorizes), disks a polar rule
/// about their center (periodic trapezoid in the angle), half-planes a rule in
/// the frame aligned with the normal, polygons a fan of triangles.
pub fn measure_2d(domain: &Domain2D) -> Result<f64> {
    if !(domain.area() > 0.0) {
        return Err(domain_err!("zero-area domain"));
    }
    let q = integrator();
    let value = match domain.kind() {
        DomainKind::Rectangle { x_range, y_range } => {
            let ix = q.integrate_relative(x_range.0, x_range.1, gauss_density_1d);
            let iy = q.integrate_relative(y_range.0, y_range.1, gauss_density_1d);
            ix * iy
        }
        DomainKind::Disk { center, radius } => {
            let c = *center;
            q.integrate(0.0, *radius, |r| {
                r * periodic_angle_integral(|th| {
                    let (s, co) = libm::sincos(th);
                    gauss_density_2d(c + r * Point::new(co, s))
                })
            })
        }
        DomainKind::HalfPlane { offset, truncation_radius, .. } => {
            let r = *truncation_radius;
            let top = offset.min(r);
            // frame (a along the normal, b along the chord); φ₂ is radial
            q.integrate(-r, top, |a| {
                let half = libm::sqrt((r * r - a * a).max(0.0));
                gauss_density_1d(a) * erf(half * FRAC_1_SQRT_2)
            })
        }
        DomainKind::Polygon { vertices } => {
            let c = domain.star_center();
            let n = vertices.len();
            (0..n).map(|i| q.integrate_triangle(c, vertices[i], vertices[(i + 1) % n], gauss_density_2d)).sum()
        }
    };
    Ok(value)
}

/// Trapezoid rule on [0, 2π), doubled until successive values agree.
fn periodic_angle_integral<F: FnMut(f64) -> f64>(mut f: F) -> f64 {
    let mut n = 32;
    let mut prev = trapezoid_periodic(&mut f, n);
    for _ in 0..8 {
        n *= 2;
        let cur = trapezoid_periodic(&mut f, n);
        if (cur - prev).abs() <= 1e-14 * cur.abs().max(1e-300) {
            return cur;
        }
        prev = cur;
    }
    prev
}

fn trapezoid_periodic<F: FnMut(f64) -> f64>(f: &mut F, n: usize) -> f64 {
    let h = TAU / n as f64;
    (0..n).map(|k| f(h * k as f64)).sum::<f64>() * h
}

/// Gaussian perimeter split into physical and artificial boundary parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerimeterSplit {
    pub physical: f64,
    pub artificial: f64,
}

pub fn perimeter_split(domain: &Domain2D) -> Result<PerimeterSplit> {
    if !(domain.area() > 0.0) {
        return Err(domain_err!("zero-area domain"));
    }
    let q = integrator();
    let mut split = PerimeterSplit { physical: 0.0, artificial: 0.0 };
    for b in domain.boundary_segments() {
        let v = b.segment.line_integral(&q, gauss_density_2d);
        match b.flag {
            SegmentFlag::Physical => split.physical += v,
            SegmentFlag::Artificial => split.artificial += v,
        }
    }
    Ok(split)
}

/// Gaussian perimeter P_φ(Ω): line integral of φ₂ over the physical boundary.
pub fn perimeter_2d(domain: &Domain2D) -> Result<f64> {
    perimeter_split(domain).map(|s| s.physical)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halfspace_measure_anchors() {
        assert_eq!(measure_halfspace(0.0), 0.5);
        assert!(measure_halfspace(-38.0) < 1e-300);
        let s = symmetrize(0.25).unwrap();
        assert!((measure_halfspace(s) - 0.25).abs() <= 1e-12);
    }

    #[test]
    fn symmetrize_far_tail() {
        for sigma in [-11.7, -25.0, -3.0] {
            let s = symmetrize(measure_halfspace(sigma)).unwrap();
            assert!((s - sigma).abs() < 1e-12 * sigma.abs(), "{sigma}: {s}");
        }
    }

    #[test]
    fn symmetrize_anchors() {
        assert_eq!(symmetrize(0.5).unwrap(), 0.0);
        let a = symmetrize(0.3).unwrap();
        let b = symmetrize(0.7).unwrap();
        assert!((a + b).abs() < 1e-15);
        // mpmath reference
        let s = symmetrize(0.39347).unwrap();
        assert!((s - (-0.270_286_305_563_650_82)).abs() < 1e-12);
        assert!((measure_halfspace(s) - 0.39347).abs() <= 1e-10);
        for bad in [0.0, 1.0, -0.1, 1.1, f64::NAN] {
            assert!(symmetrize(bad).is_err());
        }
    }

    #[test]
    fn isoperimetric_profile_anchors() {
        assert!((isoperimetric_g(0.5).unwrap() - 0.398_942_280_4).abs() < 1e-10);
        assert!((isoperimetric_g(0.2).unwrap() - isoperimetric_g(0.8).unwrap()).abs() < 1e-15);
        let g = isoperimetric_g(0.39347).unwrap();
        assert!((g - gauss_density_1d(-0.270_286_305_563_650_82)).abs() < 1e-10);
        assert!((g - 0.384_632_911_297_458_6).abs() < 1e-12);
        assert!(isoperimetric_g(1.0).is_err());
    }

    #[test]
    fn disk_closed_forms() {
        let d = Domain2D::disk(Point::default(), 1.0).unwrap();
        let m = measure_2d(&d).unwrap();
        assert!((m - (1.0 - libm::exp(-0.5))).abs() <= 1e-8);
        let p = perimeter_2d(&d).unwrap();
        assert!((p - libm::exp(-0.5)).abs() <= 1e-8);
        assert!(p >= isoperimetric_g(m).unwrap());
    }

    #[test]
    fn half_plane_measure_and_perimeter() {
        let d = Domain2D::half_plane(0.0, 0.0, 6.0).unwrap();
        assert!((measure_2d(&d).unwrap() - 0.5).abs() <= 2e-8);
        let split = perimeter_split(&d).unwrap();
        assert!((split.physical - 0.398_942_3).abs() <= 1e-6);
        assert!(split.artificial > 0.0 && split.artificial < 1e-6);
    }

    #[test]
    fn large_rectangle_has_full_measure() {
        let d = Domain2D::rectangle((-20.0, 20.0), (-20.0, 20.0)).unwrap();
        assert!((measure_2d(&d).unwrap() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn rectangle_matches_erf_product() {
        let d = Domain2D::rectangle((-1.0, 0.4), (-0.3, 2.0)).unwrap();
        let exact = (gauss_cdf(0.4) - gauss_cdf(-1.0)) * (gauss_cdf(2.0) - gauss_cdf(-0.3));
        assert!((measure_2d(&d).unwrap() - exact).abs() < 1e-13);
        // as a polygon the fan quadrature must agree
        let poly = d.rotated(0.0).unwrap();
        assert!((measure_2d(&poly).unwrap() - exact).abs() < 1e-10);
    }

    #[test]
    fn degenerate_domains_rejected() {
        assert!(Domain2D::rectangle((0.0, 0.0), (0.0, 1.0)).is_err());
        assert!(Domain2D::disk(Point::default(), 0.0).is_err());
        assert!(Domain2D::half_plane(0.0, -7.0, 6.0).is_err());
        assert!(
            Domain2D::polygon(alloc::vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(2.0, 0.0)]).is_err()
        );
        // bow-tie
        let bow = alloc::vec![Point::new(0.0, 0.0), Point::new(1.0, 1.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)];
        assert!(Domain2D::polygon(bow).is_err());
    }

    #[test]
    fn polygon_orientation_normalized() {
        let cw = alloc::vec![Point::new(0.0, 0.0), Point::new(0.0, 1.0), Point::new(1.0, 1.0), Point::new(1.0, 0.0)];
        let d = Domain2D::polygon(cw).unwrap();
        assert!((d.area() - 1.0).abs() < 1e-15);
        assert!(d.contains(Point::new(0.5, 0.5)));
        assert!(!d.contains(Point::new(1.5, 0.5)));
    }

    #[test]
    fn half_plane_geometry() {
        let d = Domain2D::half_plane(0.0, 0.0, 6.0).unwrap();
        assert!(d.contains(Point::new(-1.0, 0.0)));
        assert!(!d.contains(Point::new(1.0, 0.0)));
        assert!((d.area() - 18.0 * PI).abs() < 1e-12);
        let segs = d.boundary_segments();
        assert_eq!(segs.len(), 2);
        assert_eq!(segs[0].flag, SegmentFlag::Physical);
        // boundary closes up
        assert!(segs[0].segment.end().dist(segs[1].segment.start()) < 1e-12);
        assert!(segs[1].segment.end().dist(segs[0].segment.start()) < 1e-12);
    }
}
