//! Structural operations on graphs and specs.

use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};
use crate::graph::{EdgeRecord, ProblemSpec, VertexId, WeightedGraph};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct ScaleParams<S> {
    pub mu: S,
    pub lambda: S,
}

impl<S: Scalar> ScaleParams<S> {
    pub fn new(mu: S, lambda: S) -> Result<Self> {
        if !(mu > S::zero()) || !(lambda > S::zero()) {
            return Err(Error::InvalidArgument(
                "scale factors must be positive".into(),
            ));
        }
        Ok(Self { mu, lambda })
    }
}

fn fresh_id<S: Scalar>(g: &WeightedGraph<S>, base: &str) -> VertexId {
    let mut id = base.to_string();
    while g.index_of(&id).is_ok() {
        id.push('\'');
    }
    id
}

/// Identifies all Dirichlet vertices with one fresh vertex placed first.
///
/// Edges inside `V₀` disappear; edges from a free vertex into `V₀` are summed.
pub fn merge_dirichlet<S: Scalar>(spec: &ProblemSpec<S>) -> Result<ProblemSpec<S>> {
    if !spec.has_dirichlet() {
        return Err(Error::EmptyDirichletSet);
    }
    let g = spec.graph();
    let free = spec.free_indices();
    let mut new_index = vec![0usize; g.len()];
    for (k, &v) in free.iter().enumerate() {
        new_index[v] = k + 1;
    }
    let merged = fresh_id(g, "v0'");
    let mut ids = vec![merged];
    let mut measure = vec![S::zero()];
    let mut potential = vec![S::zero()];
    for i in spec.dirichlet_indices() {
        measure[0] = measure[0].clone() + g.measure(i).clone();
        potential[0] = potential[0].clone() + g.potential(i).clone();
    }
    for &v in &free {
        ids.push(g.id(v).to_string());
        measure.push(g.measure(v).clone());
        potential.push(g.potential(v).clone());
    }
    let mut pairs: BTreeMap<(usize, usize), S> = BTreeMap::new();
    for (i, j, b) in g.edges() {
        let (di, dj) = (spec.is_dirichlet(i), spec.is_dirichlet(j));
        if di && dj {
            continue;
        }
        let (a, c) = (new_index[i], new_index[j]);
        let slot = pairs.entry((a.min(c), a.max(c))).or_insert_with(S::zero);
        *slot = slot.clone() + b.clone();
    }
    let mut mask = vec![false; ids.len()];
    mask[0] = true;
    Ok(ProblemSpec::from_mask(
        WeightedGraph::from_parts(ids, measure, potential, pairs),
        mask,
        spec.p().clone(),
    ))
}

/// `(V, μm, λb, λc)`.
pub fn scale<S: Scalar>(g: &WeightedGraph<S>, s: &ScaleParams<S>) -> WeightedGraph<S> {
    let measure = g.measures().iter().map(|m| m.clone() * s.mu.clone()).collect();
    let potential = g
        .potentials()
        .iter()
        .map(|c| c.clone() * s.lambda.clone())
        .collect();
    let pairs = g
        .pair_map()
        .into_iter()
        .map(|(k, b)| (k, b * s.lambda.clone()))
        .collect();
    WeightedGraph::from_parts(g.ids().to_vec(), measure, potential, pairs)
}

/// Replaces every positive edge weight by its reciprocal.
pub fn invert_edge_weights<S: Scalar>(g: &WeightedGraph<S>) -> WeightedGraph<S> {
    let pairs = g
        .pair_map()
        .into_iter()
        .map(|(k, b)| (k, S::one() / b))
        .collect();
    WeightedGraph::from_parts(
        g.ids().to_vec(),
        g.measures().to_vec(),
        g.potentials().to_vec(),
        pairs,
    )
}

/// Pointwise reductions of edge weights and potentials.
///
/// Only the listed entries change; a weight of zero deletes the edge.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Weakening<S> {
    pub edges: Vec<EdgeRecord<S>>,
    pub potentials: Vec<(VertexId, S)>,
}

pub fn weaken<S: Scalar>(g: &WeightedGraph<S>, w: &Weakening<S>) -> Result<WeightedGraph<S>> {
    let mut pairs = g.pair_map();
    for (k, e) in w.edges.iter().enumerate() {
        let (u, v) = (g.index_of(&e.u)?, g.index_of(&e.v)?);
        if u == v {
            return Err(Error::SelfLoop {
                edge: k,
                id: e.u.clone(),
            });
        }
        if e.b < S::zero() {
            return Err(Error::NegativeWeight {
                edge: k,
                u: e.u.clone(),
                v: e.v.clone(),
            });
        }
        if e.b > g.weight(u, v) {
            return Err(Error::WeightIncreased {
                u: e.u.clone(),
                v: e.v.clone(),
            });
        }
        pairs.insert((u.min(v), u.max(v)), e.b.clone());
    }
    let mut potential = g.potentials().to_vec();
    for (id, c) in &w.potentials {
        let i = g.index_of(id)?;
        if *c < S::zero() {
            return Err(Error::NegativePotential { id: id.clone() });
        }
        if *c > potential[i] {
            return Err(Error::WeightIncreased {
                u: id.clone(),
                v: id.clone(),
            });
        }
        potential[i] = c.clone();
    }
    Ok(WeightedGraph::from_parts(
        g.ids().to_vec(),
        g.measures().to_vec(),
        potential,
        pairs,
    ))
}

/// One new edge between a host vertex and a guest vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Attachment<S> {
    pub host: VertexId,
    pub guest: VertexId,
    pub weight: S,
}

/// Disjoint union of host and guest plus the attachment edges. Host vertices
/// keep their indices, guest vertices follow. Ids must be disjoint.
pub fn insert_graph<S: Scalar>(
    host: &ProblemSpec<S>,
    guest: &WeightedGraph<S>,
    attach: &[Attachment<S>],
) -> Result<ProblemSpec<S>> {
    if let Some(i) = (0..guest.len()).find(|&i| !guest.potential(i).is_zero()) {
        return Err(Error::NonzeroGuestPotential {
            id: guest.id(i).to_string(),
        });
    }
    let hg = host.graph();
    let offset = hg.len();
    let mut ids = hg.ids().to_vec();
    let mut seen: HashSet<VertexId> = ids.iter().cloned().collect();
    for id in guest.ids() {
        if !seen.insert(id.clone()) {
            return Err(Error::DuplicateVertex(id.clone()));
        }
        ids.push(id.clone());
    }
    let mut measure = hg.measures().to_vec();
    measure.extend(guest.measures().iter().cloned());
    let mut potential = hg.potentials().to_vec();
    potential.extend(guest.potentials().iter().cloned());
    let mut pairs = hg.pair_map();
    for ((i, j), b) in guest.pair_map() {
        pairs.insert((i + offset, j + offset), b);
    }
    for (k, a) in attach.iter().enumerate() {
        let h = hg.index_of(&a.host)?;
        let w = guest.index_of(&a.guest)? + offset;
        if host.is_dirichlet(h) {
            return Err(Error::DirichletAttachment { id: a.host.clone() });
        }
        if !(a.weight > S::zero()) {
            return Err(Error::NegativeWeight {
                edge: k,
                u: a.host.clone(),
                v: a.guest.clone(),
            });
        }
        let slot = pairs.entry((h, w)).or_insert_with(S::zero);
        *slot = slot.clone() + a.weight.clone();
    }
    let mut mask = host.dirichlet_mask().to_vec();
    mask.extend(std::iter::repeat(false).take(guest.len()));
    Ok(ProblemSpec::from_mask(
        WeightedGraph::from_parts(ids, measure, potential, pairs),
        mask,
        host.p().clone(),
    ))
}

/// Path through the vertices of `spec`: the Dirichlet vertex first, then
/// the free vertices by ascending `values` (ties by index), with standard
/// weights and `m`, `c` carried along. Needs `|V₀| ≤ 1`.
pub fn symmetrize<S: Scalar>(spec: &ProblemSpec<S>, values: &[S]) -> Result<ProblemSpec<S>> {
    let dir = spec.dirichlet_indices();
    if dir.len() > 1 {
        return Err(Error::InvalidArgument(
            "merge the Dirichlet set before symmetrizing".into(),
        ));
    }
    if values.len() != spec.len() {
        return Err(Error::DomainMismatch {
            expected: spec.len(),
            got: values.len(),
        });
    }
    let g = spec.graph();
    let mut order = spec.free_indices();
    order.sort_by(|&a, &b| {
        values[a]
            .partial_cmp(&values[b])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let order: Vec<usize> = dir.iter().copied().chain(order).collect();
    let pairs = (1..order.len()).map(|k| ((k - 1, k), S::one())).collect();
    let mut mask = vec![false; order.len()];
    if !dir.is_empty() {
        mask[0] = true;
    }
    Ok(ProblemSpec::from_mask(
        WeightedGraph::from_parts(
            order.iter().map(|&v| g.id(v).to_string()).collect(),
            order.iter().map(|&v| g.measure(v).clone()).collect(),
            order.iter().map(|&v| g.potential(v).clone()).collect(),
            pairs,
        ),
        mask,
        spec.p().clone(),
    ))
}
