//! Plain-text mesh dump: `v x y`, `t i j k`, `e i j physical|artificial`.

use std::fmt::Write as _;

use hermite_robin_core::Mesh2D;

use crate::report::fmt_real;

pub fn mesh_to_string(mesh: &Mesh2D) -> String {
    let mut s = String::new();
    for p in &mesh.vertices {
        let _ = writeln!(s, "v {} {}", fmt_real(p.x), fmt_real(p.y));
    }
    for [i, j, k] in &mesh.triangles {
        let _ = writeln!(s, "t {i} {j} {k}");
    }
    for e in &mesh.boundary_edges {
        let _ = writeln!(s, "e {} {} {}", e.vertices[0], e.vertices[1], e.flag.as_str());
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use hermite_robin_core::mesh::mesh_domain;
    use hermite_robin_core::{Domain2D, Point};

    #[test]
    fn line_counts() {
        let d = Domain2D::disk(Point::new(0.0, 0.0), 1.0).unwrap();
        let m = mesh_domain(&d, 0.4).unwrap();
        let s = mesh_to_string(&m);
        let count = |tag: &str| s.lines().filter(|l| l.starts_with(tag)).count();
        assert_eq!(count("v "), m.vertices.len());
        assert_eq!(count("t "), m.triangles.len());
        assert_eq!(count("e "), m.boundary_edges.len());
        assert!(s.lines().filter(|l| l.starts_with("e ")).all(|l| l.ends_with("physical")));
    }
}
