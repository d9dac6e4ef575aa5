mod common;

use polyshare_core::circuit::{compile, parse_expression, Expr, Gate};
use polyshare_core::cluster::{Cluster, SystemConfig};
use polyshare_core::{Error, Field, Matrix};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn config(gamma: usize, workers: usize, t: usize, k: usize, m: usize) -> SystemConfig {
    SystemConfig {
        gamma,
        workers,
        t,
        k,
        m,
        modulus: polyshare_core::MERSENNE_61,
        seed: 17,
    }
}

#[test]
fn at_b_plus_c_with_thirteen_workers() {
    let f = Field::default();
    let e = parse_expression("X1' * X2 + X3", &f).unwrap();
    let xs = common::random_inputs(&mut ChaCha20Rng::seed_from_u64(1), &f, 3, 4);
    let cl = Cluster::new(config(3, 13, 4, 2, 4)).unwrap();
    let out = cl.run(&e, &xs).unwrap();
    let want = xs[0].transpose().matmul(&f, &xs[1]).unwrap().add(&f, &xs[2]).unwrap();
    assert_eq!(out.output, want);
}

#[test]
fn four_input_example_polynomial() {
    let f = Field::default();
    let e = parse_expression("X2' * X1 * X1 * X3 + X2 * X4 * X3'", &f).unwrap();
    let xs = common::random_inputs(&mut ChaCha20Rng::seed_from_u64(2), &f, 4, 4);
    let out = Cluster::new(config(4, 8, 2, 2, 4)).unwrap().run(&e, &xs).unwrap();
    let (x1, x2, x3, x4) = (&xs[0], &xs[1], &xs[2], &xs[3]);
    let g1 = x2.transpose().matmul(&f, x1).unwrap().matmul(&f, x1).unwrap().matmul(&f, x3).unwrap();
    let g2 = x2.matmul(&f, x4).unwrap().matmul(&f, &x3.transpose()).unwrap();
    assert_eq!(out.output, g1.add(&f, &g2).unwrap());
}

#[test]
fn identity_circuit() {
    let f = Field::default();
    let e = parse_expression("X1", &f).unwrap();
    let xs = common::random_inputs(&mut ChaCha20Rng::seed_from_u64(3), &f, 1, 2);
    let out = Cluster::new(config(1, 3, 2, 2, 2)).unwrap().run(&e, &xs).unwrap();
    assert_eq!(out.output, xs[0]);
    assert_eq!(out.transcript.compute_rounds(), 0);
}

#[test]
fn random_circuits_match_plaintext() {
    let f = Field::default();
    let mut rng = ChaCha20Rng::seed_from_u64(4);
    for (k, t) in [(1, 2), (2, 2), (2, 3)] {
        for _ in 0..25 {
            let gamma_max = rng.gen_range(1..=5);
            let (text, e) = common::random_expression(&mut rng, &f, gamma_max);
            assert!(common::depth(&e) <= 4);
            let c = compile(&e);
            let gamma = e.input_count();
            let m = 2 * rng.gen_range(1..=2);
            let xs = common::random_inputs(&mut rng, &f, gamma, m);
            let cfg = SystemConfig { seed: rng.gen(), ..config(gamma, c.required_workers(t, k), t, k, m) };
            let out = Cluster::new(cfg).unwrap().run(&e, &xs).unwrap();
            assert_eq!(out.output, e.evaluate_plain(&f, &xs).unwrap(), "{text}");
            assert_eq!(out.output, c.evaluate_plain(&f, &xs).unwrap(), "{text}");
        }
    }
}

#[test]
fn required_workers_depend_only_on_having_a_product() {
    let f = Field::default();
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    for _ in 0..200 {
        let (_, e) = common::random_expression(&mut rng, &f, 5);
        let c = compile(&e);
        for (k, t) in [(1, 2), (2, 2), (2, 3), (3, 5)] {
            let want = if e.has_product() {
                polyshare_core::analytics::worker_bound(t, k)
            } else {
                k + t - 1
            };
            assert_eq!(c.required_workers(t, k), want);
        }
    }
}

#[test]
fn gate_shapes_product_and_sum() {
    let f = Field::default();
    for gamma in 1..=6 {
        let names: Vec<String> = (1..=gamma).map(|g| format!("X{g}")).collect();
        let prod = compile(&parse_expression(&names.join(" * "), &f).unwrap());
        assert_eq!(prod.counts().matmul, gamma - 1);
        let sum = compile(&parse_expression(&names.join(" + "), &f).unwrap());
        assert_eq!(sum.counts().add, gamma - 1);
        assert_eq!(sum.gates.len(), gamma - 1);
    }
}

#[test]
fn too_few_workers_is_reported_with_the_bound() {
    let f = Field::default();
    let e = parse_expression("X1' * X2 + X3", &f).unwrap();
    let xs = common::random_inputs(&mut ChaCha20Rng::seed_from_u64(6), &f, 3, 4);
    let err = Cluster::new(config(3, 12, 4, 2, 4)).unwrap().run(&e, &xs).unwrap_err();
    match err {
        Error::TooFewWorkers { have: 12, need: 13, rule } => assert!(rule.contains("min{2k^2+2t-3, k^2+kt+t-2}")),
        other => panic!("unexpected {other:?}"),
    }
    // a linear circuit only needs k + t - 1
    let lin = parse_expression("X1 + 2 * X2'", &f).unwrap();
    let out = Cluster::new(config(2, 5, 4, 2, 4)).unwrap().run(&lin, &xs[..2]).unwrap();
    assert_eq!(out.output, lin.evaluate_plain(&f, &xs[..2]).unwrap());
}

#[test]
fn circuit_dump_is_stable_json() {
    let f = Field::default();
    let e = parse_expression("X1 * X2' - X3", &f).unwrap();
    let (a, b) = (compile(&e), compile(&e));
    assert_eq!(a.to_json(), b.to_json());
    let back: polyshare_core::circuit::Circuit = serde_json::from_str(&a.to_json()).unwrap();
    assert_eq!(back, a);
    assert!(a.gates.iter().any(|g| matches!(g, Gate::ScalarMul(..))));
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = (0usize..5).prop_map(Expr::Input);
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Transpose(Box::new(e))),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::Sum),
            prop::collection::vec(inner, 2..4).prop_map(Expr::Product),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printed_expressions_evaluate_alike(e in arb_expr(), seed in any::<u64>()) {
        let f = Field::new(10007).unwrap();
        let reparsed = parse_expression(&e.to_string(), &f).unwrap();
        let xs: Vec<Matrix> = common::random_inputs(&mut ChaCha20Rng::seed_from_u64(seed), &f, 5, 3);
        prop_assert_eq!(reparsed.evaluate_plain(&f, &xs).unwrap(), e.evaluate_plain(&f, &xs).unwrap());
        prop_assert_eq!(compile(&e).evaluate_plain(&f, &xs).unwrap(), e.evaluate_plain(&f, &xs).unwrap());
    }

    #[test]
    fn parser_never_panics(s in "[X0-9'()+*^ -]{0,24}") {
        let _ = parse_expression(&s, &Field::default());
    }
}
