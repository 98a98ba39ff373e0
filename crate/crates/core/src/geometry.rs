//! q-distances, inradius, mean distance, inverted-graph diameter and the
//! minimal cut weight.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::graph::{ProblemSpec, WeightedGraph};
use crate::scalar::{max_of, Real, Scalar};
use crate::surgery::invert_edge_weights;

/// A distance that may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reach<S> {
    Finite(S),
    Unreachable,
}

impl<S: Copy> Reach<S> {
    pub fn finite(self) -> Option<S> {
        match self {
            Reach::Finite(x) => Some(x),
            Reach::Unreachable => None,
        }
    }
}

struct Entry<S>(S, usize);

impl<S: PartialOrd> PartialEq for Entry<S> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<S: PartialOrd> Eq for Entry<S> {}

impl<S: PartialOrd> PartialOrd for Entry<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: PartialOrd> Ord for Entry<S> {
    // Reversed so that `BinaryHeap` pops the smallest distance first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .partial_cmp(&self.0)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.1.cmp(&self.1))
    }
}

fn check_q<S: Real>(q: S) -> Result<()> {
    if !(q > S::one()) {
        return Err(Error::InvalidQ(q.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(())
}

/// Multi-source Dijkstra with edge cost `b^{1/(q−1)}`.
pub(crate) fn distances_from<S: Real>(g: &WeightedGraph<S>, q: S, sources: &[usize]) -> Vec<Option<S>> {
    let e = S::one() / (q - S::one());
    let mut dist: Vec<Option<S>> = vec![None; g.len()];
    let mut heap = BinaryHeap::new();
    for &s in sources {
        dist[s] = Some(S::zero());
        heap.push(Entry(S::zero(), s));
    }
    while let Some(Entry(d, v)) = heap.pop() {
        if dist[v].is_some_and(|best| d > best) {
            continue;
        }
        for &(w, b) in g.neighbors(v) {
            let nd = d + b.powf(e);
            if dist[w].map_or(true, |old| nd < old) {
                dist[w] = Some(nd);
                heap.push(Entry(nd, w));
            }
        }
    }
    dist
}

/// `inf` over paths of `Σ b^{1/(q−1)}`.
pub fn q_distance<S: Real>(g: &WeightedGraph<S>, q: S, v: &str, w: &str) -> Result<Reach<S>> {
    check_q(q)?;
    let (i, j) = (g.index_of(v)?, g.index_of(w)?);
    Ok(match distances_from(g, q, &[i])[j] {
        Some(d) => Reach::Finite(d),
        None => Reach::Unreachable,
    })
}

/// `dist_q(v, V₀)^{q−1}` for every vertex.
pub(crate) fn powered_distances_to_dirichlet<S: Real>(spec: &ProblemSpec<S>, q: S) -> Result<Vec<S>> {
    check_q(q)?;
    if !spec.has_dirichlet() {
        return Err(Error::EmptyDirichletSet);
    }
    let dist = distances_from(spec.graph(), q, &spec.dirichlet_indices());
    dist.into_iter()
        .map(|d| d.map(|x| x.powf(q - S::one())).ok_or(Error::Disconnected))
        .collect()
}

/// `max_v dist_q(v, V₀)^{q−1}`.
pub fn q_inradius<S: Real>(spec: &ProblemSpec<S>, q: S) -> Result<S> {
    Ok(powered_distances_to_dirichlet(spec, q)?
        .into_iter()
        .fold(S::zero(), max_of))
}

/// `(1/m(V∖V₀)) Σ_{v∉V₀} dist_q(v, V₀)^{q−1} m(v)`.
pub fn q_mean_distance<S: Real>(spec: &ProblemSpec<S>, q: S) -> Result<S> {
    let d = powered_distances_to_dirichlet(spec, q)?;
    let g = spec.graph();
    let total = spec
        .free_indices()
        .into_iter()
        .fold(S::zero(), |a, v| a + d[v] * *g.measure(v));
    Ok(total / spec.free_mass())
}

/// `max_{v,w} dist_{p, b⁻¹}(v, w)^{p−1}`.
pub fn p_diameter_inverted<S: Real>(g: &WeightedGraph<S>, p: S) -> Result<Reach<S>> {
    check_q(p)?;
    let inv = invert_edge_weights(g);
    let mut best = S::zero();
    for s in 0..g.len() {
        for d in distances_from(&inv, p, &[s]) {
            match d {
                Some(x) => best = max_of(best, x),
                None => return Ok(Reach::Unreachable),
            }
        }
    }
    Ok(Reach::Finite(best.powf(p - S::one())))
}

/// Global minimum cut by Stoer–Wagner; ties in the maximum-adjacency order
/// go to the smallest vertex index.
pub fn min_cut_weight<S: Scalar>(g: &WeightedGraph<S>) -> Result<S> {
    let n = g.len();
    if n < 2 {
        return Err(Error::TooFewVertices { needed: 2, got: n });
    }
    let mut w = vec![vec![S::zero(); n]; n];
    for (i, j, b) in g.edges() {
        w[i][j] = b.clone();
        w[j][i] = b.clone();
    }
    let mut active: Vec<usize> = (0..n).collect();
    let mut best: Option<S> = None;
    while active.len() > 1 {
        let len = active.len();
        let mut added = vec![false; n];
        let mut key = vec![S::zero(); n];
        let mut prev = active[0];
        added[prev] = true;
        for &v in &active {
            key[v] = w[prev][v].clone();
        }
        let mut last = prev;
        for _ in 1..len {
            let mut pick = usize::MAX;
            for &v in &active {
                if !added[v] && (pick == usize::MAX || key[v] > key[pick]) {
                    pick = v;
                }
            }
            added[pick] = true;
            prev = last;
            last = pick;
            for &v in &active {
                if !added[v] {
                    key[v] = key[v].clone() + w[pick][v].clone();
                }
            }
        }
        let cut = key[last].clone();
        best = Some(match best {
            Some(b) if b <= cut => b,
            _ => cut,
        });
        let (s, t) = (prev, last);
        for &v in &active {
            if v != s && v != t {
                let merged = w[s][v].clone() + w[t][v].clone();
                w[s][v] = merged.clone();
                w[v][s] = merged;
            }
        }
        active.retain(|&v| v != t);
    }
    Ok(best.expect("at least one phase ran"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeometrySummary<S> {
    pub q: S,
    /// `None` without Dirichlet vertices or when some vertex cannot reach `V₀`.
    pub inradius: Option<S>,
    pub mean_distance: Option<S>,
    pub diameter_inverted: Reach<S>,
    /// `None` for graphs with fewer than two vertices.
    pub min_cut_weight: Option<S>,
}

pub fn geometry_summary<S: Real>(spec: &ProblemSpec<S>, q: S) -> Result<GeometrySummary<S>> {
    check_q(q)?;
    let g = spec.graph();
    let optional = |r: Result<S>| match r {
        Ok(x) => Ok(Some(x)),
        Err(Error::EmptyDirichletSet | Error::Disconnected) => Ok(None),
        Err(e) => Err(e),
    };
    Ok(GeometrySummary {
        q,
        inradius: optional(q_inradius(spec, q))?,
        mean_distance: optional(q_mean_distance(spec, q))?,
        diameter_inverted: p_diameter_inverted(g, q)?,
        min_cut_weight: min_cut_weight(g).ok(),
    })
}
