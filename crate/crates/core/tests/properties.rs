mod common;

use chebsl::diffmat::{cheb_diff_matrix, DerivOrder};
use chebsl::grid::{cheb_points, clenshaw_curtis_weights};
use chebsl::interp::Eigenfunction;
use chebsl::{parse, ChebGrid, Domain};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 50, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn derivative_matches_centered_difference(
        src in common::smooth_expr(),
        xs in prop::collection::vec(-1.0f64..1.0, 20),
    ) {
        let e = parse(&src).unwrap();
        let d = e.derivative();
        let h = 1e-6;
        for x in xs {
            let exact = d.eval(x).unwrap();
            let fd = (e.eval(x + h).unwrap() - e.eval(x - h).unwrap()) / (2.0 * h);
            prop_assert!((exact - fd).abs() <= 1e-5 * (1.0 + exact.abs()), "{} at {}: {} vs {}", src, x, exact, fd);
        }
    }

    #[test]
    fn print_reparse_round_trip(
        src in common::smooth_expr(),
        xs in prop::collection::vec(-1.0f64..1.0, 100),
    ) {
        let e = parse(&src).unwrap();
        let again = parse(&e.to_string()).unwrap();
        prop_assert_eq!(&again, &e);
        for x in xs {
            let (a, b) = (e.eval(x).unwrap(), again.eval(x).unwrap());
            prop_assert!((a - b).abs() <= 1e-14 * a.abs().max(f64::MIN_POSITIVE));
        }
    }

    #[test]
    fn derivative_prints_and_reparses(
        src in common::smooth_expr(),
        xs in prop::collection::vec(-1.0f64..1.0, 20),
    ) {
        // Folded negative constants reparse as negations, so compare values.
        let d = parse(&src).unwrap().derivative();
        let again = parse(&d.to_string()).unwrap();
        for x in xs {
            let (a, b) = (d.eval(x).unwrap(), again.eval(x).unwrap());
            prop_assert!((a - b).abs() <= 1e-14 * a.abs().max(f64::MIN_POSITIVE));
        }
    }

    #[test]
    fn barycentric_reproduces_polynomials(
        n in 1usize..=48,
        a in -3.0f64..3.0,
        len in 0.1f64..5.0,
        coefs in prop::collection::vec(-2.0f64..2.0, 49),
        ts in prop::collection::vec(0.0f64..=1.0, 50),
    ) {
        let domain = Domain::new(a, a + len).unwrap();
        let grid = ChebGrid::new(n, domain).unwrap();
        let poly = |x: f64| {
            let t = domain.to_canonical(x);
            coefs[..=n].iter().rev().fold(0.0, |acc, c| acc * t + c)
        };
        let values: Vec<f64> = grid.mapped_nodes().iter().map(|&x| poly(x)).collect();
        let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let f = Eigenfunction::new(values, grid, 0.0, 0).unwrap();
        for t in ts {
            let x = domain.from_canonical(2.0 * t - 1.0).clamp(domain.a(), domain.b());
            let err = (f.bary_eval(x).unwrap() - poly(x)).abs();
            prop_assert!(err <= 1e-11 * scale, "N = {}, x = {}: {:e}", n, x, err);
        }
    }

    #[test]
    fn diffmat_chain_rule_on_random_intervals(
        n in 2usize..=24,
        a in -4.0f64..4.0,
        len in 0.2f64..6.0,
        k in 0usize..=24,
    ) {
        let k = k.min(n);
        let domain = Domain::new(a, a + len).unwrap();
        let grid = ChebGrid::new(n, domain).unwrap();
        let dm = cheb_diff_matrix(&grid);
        let t: Vec<f64> = grid.nodes().to_vec();
        let got = dm.apply(&common::monomial(&t, k), DerivOrder::First).unwrap();
        let scale = 2.0 / len;
        for (g, &tj) in got.iter().zip(&t) {
            let want = if k == 0 { 0.0 } else { scale * k as f64 * tj.powi(k as i32 - 1) };
            prop_assert!((g - want).abs() <= 1e-9 * (n * n) as f64 * scale.max(1.0));
        }
    }
}

#[test]
fn diffmat_exact_for_monomials() {
    for n in 1..=32 {
        let grid = ChebGrid::new(n, Domain::canonical()).unwrap();
        let dm = cheb_diff_matrix(&grid);
        let x = grid.nodes();
        for k in 0..=n {
            let d1 = dm
                .apply(&common::monomial(x, k), DerivOrder::First)
                .unwrap();
            let d2 = dm
                .apply(&common::monomial(x, k), DerivOrder::Second)
                .unwrap();
            let tol = 1e-9 * (n * n) as f64;
            for (j, &xj) in x.iter().enumerate() {
                let kf = k as f64;
                let want1 = if k == 0 {
                    0.0
                } else {
                    kf * xj.powi(k as i32 - 1)
                };
                let want2 = if k < 2 {
                    0.0
                } else {
                    kf * (kf - 1.0) * xj.powi(k as i32 - 2)
                };
                assert!((d1[j] - want1).abs() <= tol, "N={n} k={k} j={j}");
                assert!(
                    (d2[j] - want2).abs() <= 1e-7 * (n as f64).powi(4),
                    "N={n} k={k} j={j}"
                );
            }
        }
    }
}

#[test]
fn quadrature_exact_for_monomials() {
    for n in (2..=64).step_by(2) {
        let x = cheb_points(n).unwrap();
        let w = clenshaw_curtis_weights(n);
        for k in 0..=n {
            let sum: f64 = common::monomial(&x, k)
                .iter()
                .zip(&w)
                .map(|(f, q)| f * q)
                .sum();
            let want = if k % 2 == 0 {
                2.0 / (k as f64 + 1.0)
            } else {
                0.0
            };
            assert!((sum - want).abs() <= 1e-13, "N={n} k={k}: {sum} vs {want}");
        }
    }
}

#[test]
fn nodes_are_symmetric_and_descending() {
    for n in 1..=64 {
        let x = cheb_points(n).unwrap();
        assert_eq!(x[0], 1.0);
        assert_eq!(x[n], -1.0);
        for j in 0..=n {
            assert_eq!(x[j], -x[n - j]);
            if j > 0 {
                assert!(x[j] < x[j - 1]);
            }
        }
    }
}
