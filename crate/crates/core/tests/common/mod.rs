//! Seeded instance families shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torsio::generators::{make_complete, make_path, make_random_connected, make_random_tree, make_star};
use torsio::{EdgeRecord, MassMode, Spec, VertexRecord, WeightedGraph};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Replaces masses, potentials and the Dirichlet set of `spec`.
pub fn restyle(spec: &Spec, masses: &[f64], potentials: &[f64], dirichlet: &[usize]) -> Spec {
    let g = spec.graph();
    let vertices: Vec<VertexRecord<f64>> = (0..g.len())
        .map(|i| VertexRecord::new(g.id(i), masses[i], potentials[i]))
        .collect();
    let graph = WeightedGraph::build(&vertices, &g.edge_records()).unwrap();
    let ids: Vec<&str> = dirichlet.iter().map(|&i| g.id(i)).collect();
    Spec::new(graph, ids, *spec.p()).unwrap()
}

/// Random masses in `[0.5, 2]`, optional random potentials, `k` random
/// Dirichlet vertices. With `k = 0` at least one potential is positive.
pub fn randomize(spec: &Spec, rng: &mut ChaCha8Rng, potentials: bool, k: usize) -> Spec {
    let n = spec.len();
    let masses: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..=2.0)).collect();
    let mut pots: Vec<f64> = (0..n)
        .map(|_| if potentials && rng.gen_bool(0.5) { rng.gen_range(0.1..=1.0) } else { 0.0 })
        .collect();
    if k == 0 && pots.iter().all(|&c| c == 0.0) {
        pots[rng.gen_range(0..n)] = rng.gen_range(0.1..=1.0);
    }
    let mut dirichlet: Vec<usize> = Vec::new();
    while dirichlet.len() < k.min(n - 1) {
        let v = rng.gen_range(0..n);
        if !dirichlet.contains(&v) {
            dirichlet.push(v);
        }
    }
    restyle(spec, &masses, &pots, &dirichlet)
}

/// Graph with `b = b_st`, `m = deg`, `c = 0` and one random Dirichlet vertex.
pub fn standard_degree(spec: &Spec, rng: &mut ChaCha8Rng) -> Spec {
    let g = spec.graph();
    let vertices: Vec<VertexRecord<f64>> = (0..g.len()).map(|i| VertexRecord::unit(g.id(i))).collect();
    let edges: Vec<EdgeRecord<f64>> = g
        .edge_records()
        .into_iter()
        .map(|e| EdgeRecord::new(e.u, e.v, 1.0))
        .collect();
    let graph = WeightedGraph::build(&vertices, &edges).unwrap();
    let d = g.id(rng.gen_range(0..g.len())).to_string();
    Spec::new(graph, [d], 2.0).unwrap().with_degree_measure().unwrap()
}

/// Named instances: paths, stars, trees, complete graphs and random
/// connected graphs, in unit, degree and randomized styles.
pub fn bound_ensemble(seed: u64) -> Vec<(String, Spec)> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    for f in [1usize, 2, 3, 5, 8, 13] {
        out.push((format!("path{f}_unit"), make_path(f, MassMode::Unit, 1.0).unwrap()));
        out.push((format!("path{f}_deg"), make_path(f, MassMode::Degree, 1.0).unwrap()));
        let base = make_path(f, MassMode::Unit, 1.0).unwrap();
        out.push((format!("path{f}_rand"), randomize(&base, &mut r, true, 1)));
    }
    for n in [1usize, 2, 3, 5, 8] {
        out.push((format!("star{n}_unit"), make_star(n, MassMode::Unit).unwrap()));
        out.push((format!("star{n}_deg"), make_star(n, MassMode::Degree).unwrap()));
    }
    for s in 0..12u64 {
        let n = 3 + (s as usize % 9);
        let t = make_random_tree(n, (0.5, 2.0), seed ^ (s + 1)).unwrap();
        out.push((format!("tree{s}_unit"), t.clone()));
        out.push((format!("tree{s}_rand"), randomize(&t, &mut r, false, 1 + s as usize % 2)));
        out.push((format!("tree{s}_std"), standard_degree(&t, &mut r)));
    }
    for n in [2usize, 3, 4, 6] {
        out.push((format!("complete{n}_unit"), make_complete(n, MassMode::Unit).unwrap()));
        out.push((format!("complete{n}_deg"), make_complete(n, MassMode::Degree).unwrap()));
    }
    for s in 0..24u64 {
        let n = 3 + (s as usize % 8);
        let g = make_random_connected(n, 0.5, (0.5, 2.0), seed ^ (100 + s)).unwrap();
        out.push((format!("random{s}_unit"), g.clone()));
        out.push((format!("random{s}_rand"), randomize(&g, &mut r, true, s as usize % 3)));
        out.push((format!("random{s}_std"), standard_degree(&g, &mut r)));
    }
    out
}

/// Base seed for the randomized families: `TORSIO_SEED` if set, else `default`.
pub fn base_seed(default: u64) -> u64 {
    std::env::var("TORSIO_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(default)
}

/// Connected random graph with at most `max_edges` edges, rejection sampled.
pub fn small_connected(rng: &mut ChaCha8Rng, max_edges: usize) -> Spec {
    loop {
        let n = rng.gen_range(2..=8);
        let prob = rng.gen_range(0.2..=0.8);
        let g = make_random_connected(n, prob, (1.0, 1.0), rng.gen()).unwrap();
        if g.graph().edge_count() <= max_edges {
            return g;
        }
    }
}

/// Derivative-free minimiser used as an oracle: Nelder–Mead with restarts.
pub fn nelder_mead(f: impl Fn(&[f64]) -> f64, start: &[f64], step: f64, tol: f64) -> Vec<f64> {
    let n = start.len();
    let mut best = start.to_vec();
    let mut scale = step;
    for _ in 0..8 {
        let mut simplex: Vec<Vec<f64>> = vec![best.clone()];
        for i in 0..n {
            let mut x = best.clone();
            x[i] += scale;
            simplex.push(x);
        }
        let mut values: Vec<f64> = simplex.iter().map(|x| f(x)).collect();
        for _ in 0..200_000 {
            let mut order: Vec<usize> = (0..=n).collect();
            order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
            simplex = order.iter().map(|&i| simplex[i].clone()).collect();
            values = order.iter().map(|&i| values[i]).collect();
            let size = simplex[1..]
                .iter()
                .flat_map(|x| x.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
                .fold(0.0, f64::max);
            if size < tol {
                break;
            }
            let centroid: Vec<f64> = (0..n).map(|i| simplex[..n].iter().map(|x| x[i]).sum::<f64>() / n as f64).collect();
            let along = |t: f64| -> Vec<f64> { (0..n).map(|i| centroid[i] + t * (simplex[n][i] - centroid[i])).collect() };
            let xr = along(-1.0);
            let fr = f(&xr);
            if fr < values[0] {
                let xe = along(-2.0);
                let fe = f(&xe);
                if fe < fr {
                    simplex[n] = xe;
                    values[n] = fe;
                } else {
                    simplex[n] = xr;
                    values[n] = fr;
                }
            } else if fr < values[n - 1] {
                simplex[n] = xr;
                values[n] = fr;
            } else {
                let xc = if fr < values[n] { along(-0.5) } else { along(0.5) };
                let fc = f(&xc);
                if fc < values[n].min(fr) {
                    simplex[n] = xc;
                    values[n] = fc;
                } else {
                    for k in 1..=n {
                        simplex[k] = (0..n).map(|i| simplex[0][i] + 0.5 * (simplex[k][i] - simplex[0][i])).collect();
                        values[k] = f(&simplex[k]);
                    }
                }
            }
        }
        let moved = simplex[0].iter().zip(&best).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        best = simplex[0].clone();
        if moved < tol {
            break;
        }
        scale = (scale * 0.1).max(10.0 * tol);
    }
    best
}

/// Minimum over all bipartitions `S ∪ Sᶜ` of the cut weight, by enumeration.
pub fn brute_min_cut(g: &WeightedGraph<f64>) -> f64 {
    let n = g.len();
    let mut best = f64::INFINITY;
    // vertex n−1 stays on the complement side, which removes mirror duplicates
    for mask in 1u32..(1 << (n - 1)) {
        let cut: f64 = g
            .edges()
            .filter(|(i, j, _)| (mask >> i & 1) != (mask >> j & 1))
            .map(|(_, _, b)| *b)
            .sum();
        best = best.min(cut);
    }
    best
}
