use hermite_robin::{parse_corpus, run_corpus, verify_faber_krahn, Settings};
use hermite_robin_core::special::erfc;
use hermite_robin_core::{Domain2D, Point};

fn coarse() -> Settings {
    Settings { h: 0.2, comparison_levels: 0, ..Settings::default() }
}

#[test]
fn rotation_about_origin() {
    let d = Domain2D::rectangle((-0.3, 0.9), (-0.5, 0.6)).unwrap();
    let r = d.rotated(1.1).unwrap();
    let s = coarse();
    let a = verify_faber_krahn("a", &d, 1.5, &s).unwrap();
    let b = verify_faber_krahn("b", &r, 1.5, &s).unwrap();
    assert_eq!(a.lambda1_symmetrized, b.lambda1_symmetrized);
    // both meshes resolve λ₁ to well under the 1e-3 FEM budget
    assert!((a.lambda1_domain - b.lambda1_domain).abs() < 2e-3, "{} vs {}", a.lambda1_domain, b.lambda1_domain);
    assert!(a.passed && b.passed);
}

#[test]
fn sigma_sharp_matches_measure() {
    let d = Domain2D::disk(Point::new(0.4, -0.2), 0.8).unwrap();
    let row = verify_faber_krahn("d", &d, 1.0, &coarse()).unwrap();
    let back = 0.5 * erfc(-row.sigma_sharp / std::f64::consts::SQRT_2);
    assert!((back - row.gamma).abs() < 1e-12);
    assert!(row.margin > 5e-3 && row.isoperimetric_margin > 0.0 && row.equality_consistent);
}

#[test]
fn rows_keep_corpus_order() {
    let corpus = parse_corpus(
        r#"[
        {"name": "z", "kind": "disk", "center": [0.1, 0], "radius": 0.7, "beta": 1},
        {"name": "a", "kind": "polygon", "vertices": [[-0.8, -0.6], [0.9, -0.5], [0.1, 0.9]], "beta": 0.5},
        {"name": "m", "kind": "rectangle", "x_range": [-1, 0.5], "y_range": [-0.4, 0.4], "beta": 3}
    ]"#,
    )
    .unwrap();
    let report = run_corpus(&corpus, &coarse()).unwrap();
    let names: Vec<&str> = report.rows.iter().map(|r| r.name.as_str()).collect();
    assert_eq!(names, ["z", "a", "m"]);
    assert!(report.passed);
}

#[test]
fn near_equality_only_for_half_planes() {
    let s = coarse();
    let hp = Domain2D::half_plane(2.0, 0.4, 6.0).unwrap();
    let row = verify_faber_krahn("hp", &hp, 1.0, &s).unwrap();
    assert!(row.is_half_plane && row.near_equality && row.equality_consistent);
    assert!(row.margin.abs() < 1e-4, "{}", row.margin);
}
