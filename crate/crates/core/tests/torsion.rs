mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::Rng;

use torsio::energy::functional_fp;
use torsio::generators::make_random_connected;
use torsio::torsion::{balance_check, pointwise_residual, rigidity_via_min, solve_torsion, solve_torsion_p2};
use torsio::{EdgeRecord, Method, ProblemSpec, SolverOptions, Spec, VertexFunction, VertexRecord, WeightedGraph};

use common::{randomize, rng};

fn instance(seed: u64, p: f64) -> Spec {
    let mut r = rng(seed);
    let n = r.gen_range(2..=9);
    let g = make_random_connected(n, 0.5, (0.3, 3.0), seed).unwrap();
    let k = r.gen_range(0..=2);
    randomize(&g, &mut r, true, k).with_p(p).unwrap()
}

fn solve(spec: &Spec, method: Method) -> torsio::Torsion {
    let opts = SolverOptions {
        tol: Some(1e-12),
        method,
        ..SolverOptions::default()
    };
    solve_torsion(spec, &opts).unwrap()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn methods_agree(seed in any::<u64>(), p in prop::sample::select(vec![1.5, 2.0, 2.5, 3.0, 5.0])) {
        let spec = instance(seed, p);
        let gs = solve(&spec, Method::GaussSeidel);
        let newton = solve(&spec, Method::Newton);
        let scale = newton.tau.values().iter().fold(1.0, |a: f64, x| a.max(x.abs()));
        prop_assert!(max_diff(gs.tau.values(), newton.tau.values()) <= 1e-8 * scale);
        prop_assert!((gs.rigidity - newton.rigidity).abs() <= 1e-8 * newton.rigidity);
    }

    #[test]
    fn solution_satisfies_the_equation(seed in any::<u64>(), p in 1.5f64..6.0) {
        let spec = instance(seed, p);
        let sol = solve(&spec, Method::Auto);
        let r = pointwise_residual(&spec, &sol.tau).unwrap();
        let m = spec.graph().measures().iter().fold(0.0f64, |a, x| a.max(*x));
        prop_assert!(r.values().iter().all(|x| x.abs() <= 1e-9 * m.max(1.0)));
        prop_assert!(sol.tau.values().iter().all(|&x| x >= 0.0));
        prop_assert!(balance_check(&spec, &sol).ok);
    }

    #[test]
    fn rigidity_matches_the_minimum(seed in any::<u64>(), p in 1.5f64..6.0) {
        let spec = instance(seed, p);
        let sol = solve(&spec, Method::Auto);
        let via_min = rigidity_via_min(&spec, &sol);
        prop_assert!((via_min - sol.rigidity).abs() <= 1e-8 * sol.rigidity);
    }

    #[test]
    fn perturbations_do_not_lower_the_functional(seed in any::<u64>(), p in 1.5f64..6.0) {
        let spec = instance(seed, p);
        let sol = solve(&spec, Method::Auto);
        let f0 = functional_fp(&spec, &sol.tau).unwrap();
        let mut r = rng(seed ^ 0x5eed);
        for _ in 0..10 {
            let v: Vec<f64> = (0..spec.len())
                .map(|i| if spec.is_dirichlet(i) { 0.0 } else { sol.tau.values()[i] + r.gen_range(-0.1..0.1) })
                .collect();
            let f = functional_fp(&spec, &VertexFunction::new(v)).unwrap();
            prop_assert!(f >= f0 - 1e-10 * f0.abs());
        }
    }
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[test]
fn exact_solve_has_zero_residual() {
    let mut r = rng(7);
    for _ in 0..20 {
        let n = r.gen_range(2..=8usize);
        let vertices: Vec<VertexRecord<BigRational>> = (0..n)
            .map(|i| VertexRecord::new(format!("v{i}"), big(r.gen_range(1..5)), BigRational::new(big(r.gen_range(0..3)).to_integer(), BigInt::from(2))))
            .collect();
        let mut edges: Vec<EdgeRecord<BigRational>> = (1..n)
            .map(|i| EdgeRecord::new(format!("v{}", r.gen_range(0..i)), format!("v{i}"), big(r.gen_range(1..7))))
            .collect();
        edges.push(EdgeRecord::new("v0", format!("v{}", n - 1), BigRational::new(BigInt::from(1), BigInt::from(3))));
        let graph = WeightedGraph::build(&vertices, &edges).unwrap();
        let spec = ProblemSpec::new(graph, ["v0"], big(2)).unwrap();
        let sol = solve_torsion_p2(&spec).unwrap();
        assert_eq!(sol.residual_inf, big(0));
        let g = spec.graph();
        for v in spec.free_indices() {
            let tau = sol.tau.values();
            let mut flux = g.potential(v) * &tau[v];
            for (w, b) in g.neighbors(v) {
                flux += b * (&tau[v] - &tau[*w]);
            }
            assert_eq!(flux, g.measure(v).clone());
        }
    }
}

#[test]
fn direct_and_iterative_agree_at_two() {
    for seed in 0..30 {
        let spec = instance(seed, 2.0);
        let direct = solve(&spec, Method::DirectP2);
        let gs = solve(&spec, Method::GaussSeidel);
        let scale = direct.tau.values().iter().fold(1.0, |a: f64, x| a.max(x.abs()));
        assert!(max_diff(direct.tau.values(), gs.tau.values()) <= 1e-9 * scale, "seed {seed}");
    }
}

#[test]
fn iteration_budget_is_respected() {
    let spec = instance(3, 3.0);
    let opts = SolverOptions {
        tol: Some(1e-15),
        max_iterations: 2,
        method: Method::GaussSeidel,
        initial: None,
    };
    let err = solve_torsion(&spec, &opts).unwrap_err();
    assert!(err.is_numerical());
}
