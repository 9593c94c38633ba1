//! Helpers shared by the integration tests and the acceptance harness.
#![allow(dead_code)]

use chebsl::cli::run_args;
use proptest::prelude::*;

/// Random smooth expressions in `x`, kept to moderate magnitude on
/// `[-1, 1]` so centered differences stay accurate.
pub fn smooth_expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        3 => Just("x".to_string()),
        1 => Just("pi/4".to_string()),
        1 => Just("e".to_string()),
        2 => (-4i32..=4).prop_map(|k| format!("({})", f64::from(k) * 0.5)),
    ];
    leaf.prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} + {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} - {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} * {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a} / (2 + sin({b}))")),
            inner.clone().prop_map(|a| format!("sin({a})")),
            inner.clone().prop_map(|a| format!("cos({a})")),
            inner.clone().prop_map(|a| format!("exp(sin({a}))")),
            inner.clone().prop_map(|a| format!("ln(1 + ({a})^2)")),
            inner.clone().prop_map(|a| format!("sqrt(2 + cos({a}))")),
            inner.clone().prop_map(|a| format!("-({a})")),
            inner.clone().prop_map(|a| format!("cos({a})^3")),
            inner.prop_map(|a| format!("(2 + sin({a}))^(1/2 + x^2)")),
        ]
    })
}

/// Monomial `x^k` sampled at `nodes`.
pub fn monomial(nodes: &[f64], k: usize) -> Vec<f64> {
    nodes.iter().map(|x| x.powi(k as i32)).collect()
}

/// Runs the CLI in-process and returns `(exit code, stdout, stderr)`.
pub fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("chebsl").chain(args.iter().copied());
    let code = run_args(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).expect("utf-8 stdout"),
        String::from_utf8(err).expect("utf-8 stderr"),
    )
}
