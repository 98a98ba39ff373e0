mod common;

use proptest::prelude::*;
use rand::Rng;

use torsio::energy::rayleigh_quotient;
use torsio::generators::{make_path, make_random_connected};
use torsio::spectral::{lambda0, lambda1_p2};
use torsio::surgery::{scale, ScaleParams};
use torsio::{Evidence, MassMode, Spec, SpectralMethod, SpectralOptions, VertexFunction};

use common::{randomize, rng};

fn instance(seed: u64, p: f64) -> Spec {
    let mut r = rng(seed);
    let n = r.gen_range(2..=9);
    let g = make_random_connected(n, 0.5, (0.3, 3.0), seed).unwrap();
    let k = r.gen_range(0..=2);
    randomize(&g, &mut r, true, k).with_p(p).unwrap()
}

fn ground(spec: &Spec, method: SpectralMethod) -> torsio::Spectrum {
    lambda0(spec, &SpectralOptions::with_method(method)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn power_iteration_matches_dense(seed in any::<u64>()) {
        let spec = instance(seed, 2.0);
        let dense = ground(&spec, SpectralMethod::Dense);
        let power = ground(&spec, SpectralMethod::InversePower);
        prop_assert_eq!(dense.evidence, Evidence::Exact);
        prop_assert!((dense.lambda0 - power.lambda0).abs() <= 1e-8 * dense.lambda0.max(1.0));
    }

    #[test]
    fn no_test_function_beats_the_ground_state(seed in any::<u64>(), p in 1.5f64..5.0) {
        let spec = instance(seed, p);
        let sol = ground(&spec, SpectralMethod::Auto);
        let mut r = rng(seed ^ 0xabc);
        for _ in 0..20 {
            let v: Vec<f64> = (0..spec.len())
                .map(|i| if spec.is_dirichlet(i) { 0.0 } else { r.gen_range(-1.0..1.0) })
                .collect();
            let q = rayleigh_quotient(&spec, &VertexFunction::new(v)).unwrap();
            prop_assert!(q >= sol.lambda0 * (1.0 - 1e-9));
        }
        let at_state = rayleigh_quotient(&spec, &sol.ground_state).unwrap();
        prop_assert!((at_state - sol.lambda0).abs() <= 1e-8 * sol.lambda0);
    }

    #[test]
    fn scaling_multiplies_by_the_ratio(seed in any::<u64>(), p in 1.5f64..5.0, mu in 0.2f64..5.0, lambda in 0.2f64..5.0) {
        let spec = instance(seed, p);
        let scaled = spec.with_graph(scale(spec.graph(), &ScaleParams::new(mu, lambda).unwrap())).unwrap();
        let a = ground(&spec, SpectralMethod::Auto).lambda0;
        let b = ground(&scaled, SpectralMethod::Auto).lambda0;
        prop_assert!((b - a * lambda / mu).abs() <= 1e-7 * b);
    }
}

#[test]
fn ground_state_is_normalized_and_nonnegative() {
    for seed in 0..20 {
        for p in [1.5, 2.0, 3.0] {
            let spec = instance(seed, p);
            let sol = ground(&spec, SpectralMethod::Auto);
            let g = spec.graph();
            let norm: f64 = spec
                .free_indices()
                .into_iter()
                .map(|v| sol.ground_state.values()[v].abs().powf(p) * g.measure(v))
                .sum();
            assert!((norm - 1.0).abs() < 1e-9, "seed {seed} p {p}");
            assert!(sol.ground_state.values().iter().all(|&x| x >= 0.0));
            assert!(spec.dirichlet_indices().iter().all(|&v| sol.ground_state.values()[v] == 0.0));
        }
    }
}

#[test]
fn unit_path_matches_the_cosine_formula() {
    // Dirichlet at one end of a path with F free vertices: λ = 2 − 2cos(π/(2F+1)).
    for f in 1..=12 {
        let spec = make_path::<f64>(f, MassMode::Unit, 1.0).unwrap();
        let want = 2.0 - 2.0 * (std::f64::consts::PI / (2 * f + 1) as f64).cos();
        let got = ground(&spec, SpectralMethod::Auto).lambda0;
        assert!((got - want).abs() < 1e-12, "F = {f}");
    }
}

#[test]
fn second_eigenvalue_of_a_unit_cycle() {
    use torsio::{EdgeRecord, VertexRecord, WeightedGraph};
    let n = 7;
    let vertices: Vec<VertexRecord<f64>> = (0..n).map(|i| VertexRecord::unit(format!("v{i}"))).collect();
    let edges: Vec<EdgeRecord<f64>> = (0..n).map(|i| EdgeRecord::new(format!("v{i}"), format!("v{}", (i + 1) % n), 1.0)).collect();
    let g = WeightedGraph::build(&vertices, &edges).unwrap();
    let want = 2.0 - 2.0 * (2.0 * std::f64::consts::PI / n as f64).cos();
    assert!((lambda1_p2(&g).unwrap() - want).abs() < 1e-12);
}
