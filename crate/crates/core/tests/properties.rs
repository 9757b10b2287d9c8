use hermite_robin_core::geometry::{measure_2d, measure_halfspace, perimeter_2d, symmetrize};
use hermite_robin_core::levelset::{evaluate_functional_1d, level_grid, psi_bar};
use hermite_robin_core::mesh::mesh_domain;
use hermite_robin_core::solver_1d::{decaying_solution, lambda1_sweep, rayleigh_quotient_p1, solve_lambda1};
use hermite_robin_core::solver_2d::FemSystem;
use hermite_robin_core::special::{erf, erfinv, hermite_series_w, recip_gamma};
use hermite_robin_core::{Domain2D, HalfLineProblem, Point};
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn erf_is_odd(x in -6.0f64..6.0) {
        prop_assert_eq!(erf(-x), -erf(x));
    }

    #[test]
    fn erfinv_inverts_erf(x in -5.5f64..5.5) {
        let p = erf(x);
        prop_assume!(p.abs() < 1.0);
        let y = erfinv(p).unwrap();
        // rounding p costs |p| ε / erf'(x) in x
        let cond = x.abs() + p.abs() * 0.5 * std::f64::consts::PI.sqrt() * (x * x).exp();
        prop_assert!((y - x).abs() <= 4.0 * f64::EPSILON * cond + 1e-300, "{} vs {}", y, x);
    }

    #[test]
    fn recip_gamma_recurrence(x in -8.0f64..8.0) {
        // 1/Γ(x) = x / Γ(x+1)
        let lhs = recip_gamma(x);
        let rhs = x * recip_gamma(x + 1.0);
        prop_assert!((lhs - rhs).abs() <= 1e-13 * (1.0 + lhs.abs()), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn symmetrize_round_trip(s in 1e-12f64..(1.0 - 1e-12)) {
        let sigma = symmetrize(s).unwrap();
        let back = measure_halfspace(sigma);
        prop_assert!((back - s).abs() <= 1e-13 * s.min(1.0 - s).max(1e-3), "{} -> {} -> {}", s, sigma, back);
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn riccati_lambda_is_a_rayleigh_lower_bound(
        sigma in -1.5f64..1.5,
        beta in 0.2f64..4.0,
        seed in proptest::collection::vec(-0.3f64..0.3, 40),
    ) {
        let problem = HalfLineProblem::new(sigma, beta).unwrap();
        let eig = solve_lambda1(problem, 1e-10).unwrap();
        let nodes: Vec<f64> = (0..=400).map(|i| (-8.0 + (sigma + 8.0) * i as f64 / 400.0).min(sigma)).collect();
        // perturbed eigenfunction with a smooth random bump
        let v: Vec<f64> = nodes
            .iter()
            .map(|&t| {
                let w = eig.w_at(t).unwrap();
                let bump: f64 = seed.iter().enumerate().map(|(k, c)| c * (0.3 * k as f64 * t).sin()).sum();
                w * (1.0 + 0.1 * bump)
            })
            .collect();
        let q = rayleigh_quotient_p1(&problem, &nodes, &v).unwrap();
        prop_assert!(q >= eig.lambda1 - 1e-9, "quotient {} below λ₁ {}", q, eig.lambda1);
    }

    #[test]
    fn fem_rayleigh_quotient_bounds_discrete_eigenvalue(
        beta in 0.1f64..3.0,
        coeffs in proptest::collection::vec(-1.0f64..1.0, 1..200),
    ) {
        let d = Domain2D::disk(Point::new(0.3, -0.2), 1.0).unwrap();
        let mesh = mesh_domain(&d, 0.3).unwrap();
        let system = FemSystem::assemble(&mesh, beta).unwrap();
        let (lambda, _, _) = system.smallest_eigenpair().unwrap();
        let n = system.dofs();
        let v: Vec<f64> = (0..n).map(|i| 1.0 + coeffs[i % coeffs.len()]).collect();
        prop_assert!(system.rayleigh_quotient(&v) >= lambda - 1e-10 * lambda.abs().max(1.0));
    }

    #[test]
    fn measure_and_perimeter_are_rotation_invariant(
        angle in 0.0..std::f64::consts::TAU,
        cx in -0.8f64..0.8,
        cy in -0.8f64..0.8,
        w in 0.3f64..1.5,
        hgt in 0.3f64..1.5,
    ) {
        let d = Domain2D::rectangle((cx - w, cx + w), (cy - hgt, cy + hgt)).unwrap();
        let r = d.rotated(angle).unwrap();
        prop_assert!((measure_2d(&d).unwrap() - measure_2d(&r).unwrap()).abs() < 1e-10);
        prop_assert!((perimeter_2d(&d).unwrap() - perimeter_2d(&r).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn sweep_is_non_increasing(beta in 0.1f64..5.0, start in -2.0f64..1.0) {
        let grid: Vec<f64> = (0..6).map(|i| start + 0.2 * i as f64).collect();
        let sweep = lambda1_sweep(&grid, beta, 1e-10).unwrap();
        for pair in sweep.windows(2) {
            prop_assert!(pair[1].1 <= pair[0].1 + 1e-9, "{:?}", pair);
        }
    }

    #[test]
    fn series_matches_ode_up_to_a_constant(lambda in 0.1f64..2.5) {
        let points: Vec<f64> = (0..=12).map(|i| -3.0 + 0.25 * i as f64).collect();
        let ode = decaying_solution(lambda, &points).unwrap();
        let ratios: Vec<f64> = points
            .iter()
            .zip(&ode)
            .filter(|(_, w)| w.abs() > 1e-3 * ode[0].abs())
            .map(|(&t, w)| hermite_series_w(lambda, t).unwrap().value / w)
            .collect();
        let r0 = ratios[0];
        for r in &ratios {
            prop_assert!(((r - r0) / r0).abs() < 1e-6, "{} vs {}", r, r0);
        }
    }

    #[test]
    fn functional_parts_reassemble_exactly(sigma in -1.5f64..1.5, beta in 0.3f64..3.0) {
        let eig = solve_lambda1(HalfLineProblem::new(sigma, beta).unwrap(), 1e-10).unwrap();
        let psi = psi_bar(&eig);
        for t in level_grid(eig.max_w(), 5) {
            let f = evaluate_functional_1d(&eig, &psi, t).unwrap();
            prop_assert_eq!(f.value, f.parts.reassemble(f.measure));
        }
    }
}
