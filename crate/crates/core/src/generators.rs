//! Standard graph families. All generators return specs with `p = 2`;
//! use [`ProblemSpec::with_p`] to change it.
//!
//! Random graphs use `ChaCha8Rng::seed_from_u64(seed)`, so a seed fixes the
//! output on every platform.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{ProblemSpec, WeightedGraph};
use crate::scalar::{cast, Scalar};

/// How vertex measures are assigned.
#[derive(Debug, Clone, PartialEq)]
pub enum MassMode<S> {
    Unit,
    /// `m(v) = deg(v)` on the full graph, Dirichlet vertices included.
    Degree,
    /// One mass per vertex, in vertex order.
    Explicit(Vec<S>),
}

fn vertex_ids(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

fn assemble<S: Scalar>(
    n: usize,
    pairs: BTreeMap<(usize, usize), S>,
    mode: &MassMode<S>,
    dirichlet: &[usize],
) -> Result<ProblemSpec<S>> {
    let mut mask = vec![false; n];
    for &d in dirichlet {
        mask[d] = true;
    }
    let unit = WeightedGraph::from_parts(vertex_ids(n), vec![S::one(); n], vec![S::zero(); n], pairs);
    let spec = ProblemSpec::from_mask(unit, mask, cast(2.0));
    match mode {
        MassMode::Unit => Ok(spec),
        MassMode::Degree => spec.with_degree_measure(),
        MassMode::Explicit(ms) => {
            if ms.len() != n {
                return Err(Error::DomainMismatch {
                    expected: n,
                    got: ms.len(),
                });
            }
            if let Some(i) = ms.iter().position(|m| !(*m > S::zero())) {
                return Err(Error::NonpositiveMass { id: format!("v{i}") });
            }
            spec.with_graph(spec.graph().with_measure(ms.clone()))
        }
    }
}

/// Path `v0 – v1 – … – vF` with constant weight `b` and `V₀ = {v0}`.
pub fn make_path<S: Scalar>(free: usize, mode: MassMode<S>, b: S) -> Result<ProblemSpec<S>> {
    if free == 0 {
        return Err(Error::InvalidSize("a path needs at least one free vertex".into()));
    }
    if !(b > S::zero()) {
        return Err(Error::InvalidArgument("edge weight must be positive".into()));
    }
    let pairs = (0..free).map(|i| ((i, i + 1), b.clone())).collect();
    assemble(free + 1, pairs, &mode, &[0])
}

/// Star with `n` unit edges: centre `v1`, Dirichlet leaf `v0`, leaves `v2..vn`.
pub fn make_star<S: Scalar>(n: usize, mode: MassMode<S>) -> Result<ProblemSpec<S>> {
    if n == 0 {
        return Err(Error::InvalidSize("a star needs at least one edge".into()));
    }
    let pairs = std::iter::once(((0, 1), S::one()))
        .chain((2..=n).map(|j| ((1, j), S::one())))
        .collect();
    assemble(n + 1, pairs, &mode, &[0])
}

/// Complete graph on `n` vertices with unit weights and `V₀ = {v0}`.
pub fn make_complete<S: Scalar>(n: usize, mode: MassMode<S>) -> Result<ProblemSpec<S>> {
    if n < 2 {
        return Err(Error::InvalidSize("a complete graph needs at least two vertices".into()));
    }
    let mut pairs = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.insert((i, j), S::one());
        }
    }
    assemble(n, pairs, &mode, &[0])
}

fn draw_weight(rng: &mut ChaCha8Rng, range: (f64, f64)) -> f64 {
    if range.0 == range.1 {
        range.0
    } else {
        rng.gen_range(range.0..=range.1)
    }
}

fn check_range(range: (f64, f64)) -> Result<()> {
    if !(range.0 > 0.0 && range.0 <= range.1 && range.1.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "weight range [{}, {}] must satisfy 0 < lo <= hi < inf",
            range.0, range.1
        )));
    }
    Ok(())
}

const MAX_REJECTIONS: usize = 1_000_000;

/// Connected Erdős–Rényi graph `G(n, edge_prob)` by rejection, weights uniform
/// in `weights`, unit masses, `V₀ = {v0}`.
pub fn make_random_connected<S: Scalar>(
    n: usize,
    edge_prob: f64,
    weights: (f64, f64),
    seed: u64,
) -> Result<ProblemSpec<S>> {
    if n < 2 {
        return Err(Error::InvalidSize("a random graph needs at least two vertices".into()));
    }
    if !(edge_prob > 0.0 && edge_prob <= 1.0) {
        return Err(Error::InvalidArgument("edge probability must lie in (0, 1]".into()));
    }
    check_range(weights)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_REJECTIONS {
        let mut pairs = BTreeMap::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(edge_prob) {
                    pairs.insert((i, j), cast::<S>(draw_weight(&mut rng, weights)));
                }
            }
        }
        let spec = assemble(n, pairs, &MassMode::Unit, &[0])?;
        if spec.graph().is_connected() {
            return Ok(spec);
        }
    }
    Err(Error::InvalidArgument(
        "no connected sample found; increase the edge probability".into(),
    ))
}

/// Random recursive tree: vertex `k` attaches to a uniform earlier vertex.
pub fn make_random_tree<S: Scalar>(n: usize, weights: (f64, f64), seed: u64) -> Result<ProblemSpec<S>> {
    if n < 2 {
        return Err(Error::InvalidSize("a random tree needs at least two vertices".into()));
    }
    check_range(weights)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = (1..n)
        .map(|k| {
            let parent = rng.gen_range(0..k);
            ((parent, k), cast::<S>(draw_weight(&mut rng, weights)))
        })
        .collect();
    assemble(n, pairs, &MassMode::Unit, &[0])
}
