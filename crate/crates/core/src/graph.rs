//! Weighted graphs `(V, m, b, c)` and problem specifications `(G, V₀, p)`.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::scalar::{cast, to_f64, Scalar};

/// Opaque vertex identifier.
pub type VertexId = String;

/// Smallest and largest supported exponent.
pub const P_MIN: f64 = 1.05;
pub const P_MAX: f64 = 20.0;

#[derive(Debug, Clone, PartialEq)]
pub struct VertexRecord<S> {
    pub id: VertexId,
    pub m: S,
    pub c: S,
}

impl<S: Scalar> VertexRecord<S> {
    pub fn new(id: impl Into<VertexId>, m: S, c: S) -> Self {
        Self { id: id.into(), m, c }
    }

    pub fn unit(id: impl Into<VertexId>) -> Self {
        Self::new(id, S::one(), S::zero())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeRecord<S> {
    pub u: VertexId,
    pub v: VertexId,
    pub b: S,
}

impl<S> EdgeRecord<S> {
    pub fn new(u: impl Into<VertexId>, v: impl Into<VertexId>, b: S) -> Self {
        Self { u: u.into(), v: v.into(), b }
    }
}

fn finite<S: Scalar>(x: &S) -> bool {
    let f = to_f64(x);
    !f.is_nan() && !f.is_infinite()
}

/// A finite simple graph with vertex measure `m > 0`, potential `c ≥ 0` and
/// symmetric edge weights `b > 0` on present edges.
///
/// Vertices are addressed by dense indices assigned in input order; the
/// adjacency lists are sorted by neighbour index, so every iteration order in
/// the crate is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph<S> {
    ids: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    measure: Vec<S>,
    potential: Vec<S>,
    adjacency: Vec<Vec<(usize, S)>>,
}

impl<S: Scalar> WeightedGraph<S> {
    /// Validates the records and merges parallel edges by summing weights.
    pub fn build(vertices: &[VertexRecord<S>], edges: &[EdgeRecord<S>]) -> Result<Self> {
        let mut ids = Vec::with_capacity(vertices.len());
        let mut index = HashMap::with_capacity(vertices.len());
        let mut measure = Vec::with_capacity(vertices.len());
        let mut potential = Vec::with_capacity(vertices.len());
        for rec in vertices {
            if index.insert(rec.id.clone(), ids.len()).is_some() {
                return Err(Error::DuplicateVertex(rec.id.clone()));
            }
            if !(rec.m > S::zero()) || !finite(&rec.m) {
                return Err(Error::NonpositiveMass { id: rec.id.clone() });
            }
            if rec.c < S::zero() || !finite(&rec.c) || rec.c != rec.c {
                return Err(Error::NegativePotential { id: rec.id.clone() });
            }
            ids.push(rec.id.clone());
            measure.push(rec.m.clone());
            potential.push(rec.c.clone());
        }
        let mut pairs: BTreeMap<(usize, usize), S> = BTreeMap::new();
        for (k, e) in edges.iter().enumerate() {
            let u = *index.get(&e.u).ok_or_else(|| Error::UnknownEndpoint {
                edge: k,
                id: e.u.clone(),
            })?;
            let v = *index.get(&e.v).ok_or_else(|| Error::UnknownEndpoint {
                edge: k,
                id: e.v.clone(),
            })?;
            if u == v {
                return Err(Error::SelfLoop {
                    edge: k,
                    id: e.u.clone(),
                });
            }
            if !(e.b > S::zero()) || !finite(&e.b) {
                return Err(Error::NegativeWeight {
                    edge: k,
                    u: e.u.clone(),
                    v: e.v.clone(),
                });
            }
            let key = (u.min(v), u.max(v));
            let slot = pairs.entry(key).or_insert_with(S::zero);
            *slot = slot.clone() + e.b.clone();
        }
        Ok(Self::from_parts(ids, measure, potential, pairs))
    }

    /// Assembles a graph from already validated data. Zero weights are dropped.
    pub(crate) fn from_parts(
        ids: Vec<VertexId>,
        measure: Vec<S>,
        potential: Vec<S>,
        pairs: BTreeMap<(usize, usize), S>,
    ) -> Self {
        let n = ids.len();
        let index = ids.iter().cloned().enumerate().map(|(i, id)| (id, i)).collect();
        let mut adjacency: Vec<Vec<(usize, S)>> = vec![Vec::new(); n];
        for ((u, v), b) in pairs {
            if b.is_zero() {
                continue;
            }
            adjacency[u].push((v, b.clone()));
            adjacency[v].push((u, b));
        }
        for row in &mut adjacency {
            row.sort_by_key(|&(w, _)| w);
        }
        Self {
            ids,
            index,
            measure,
            potential,
            adjacency,
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn measure(&self, i: usize) -> &S {
        &self.measure[i]
    }

    pub fn measures(&self) -> &[S] {
        &self.measure
    }

    pub fn potential(&self, i: usize) -> &S {
        &self.potential[i]
    }

    pub fn potentials(&self) -> &[S] {
        &self.potential
    }

    /// Neighbours of `i` with their (positive) weights, ascending by index.
    pub fn neighbors(&self, i: usize) -> &[(usize, S)] {
        &self.adjacency[i]
    }

    /// `b(i, j)`, zero when absent.
    pub fn weight(&self, i: usize, j: usize) -> S {
        match self.adjacency[i].binary_search_by_key(&j, |&(w, _)| w) {
            Ok(k) => self.adjacency[i][k].1.clone(),
            Err(_) => S::zero(),
        }
    }

    /// Undirected edges `(i, j, b)` with `i < j`, lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &S)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .filter(move |(j, _)| *j > i)
                .map(move |(j, b)| (i, *j, b))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn vertex_records(&self) -> Vec<VertexRecord<S>> {
        (0..self.len())
            .map(|i| VertexRecord::new(self.ids[i].clone(), self.measure[i].clone(), self.potential[i].clone()))
            .collect()
    }

    pub fn edge_records(&self) -> Vec<EdgeRecord<S>> {
        self.edges()
            .map(|(i, j, b)| EdgeRecord::new(self.ids[i].clone(), self.ids[j].clone(), b.clone()))
            .collect()
    }

    pub(crate) fn pair_map(&self) -> BTreeMap<(usize, usize), S> {
        self.edges().map(|(i, j, b)| ((i, j), b.clone())).collect()
    }

    /// `Σ_w b(v,w) + c(v)`.
    pub fn degree(&self, id: &str) -> Result<S> {
        Ok(self.degree_at(self.index_of(id)?))
    }

    pub fn degree_at(&self, i: usize) -> S {
        self.edge_degree_at(i) + self.potential[i].clone()
    }

    /// `Σ_w b(v,w)` without the potential.
    pub fn edge_degree_at(&self, i: usize) -> S {
        self.adjacency[i]
            .iter()
            .fold(S::zero(), |acc, (_, b)| acc + b.clone())
    }

    pub fn total_measure(&self) -> S {
        self.measure.iter().fold(S::zero(), |a, m| a + m.clone())
    }

    pub fn has_standard_weights(&self) -> bool {
        self.edges().all(|(_, _, b)| b.is_one())
    }

    pub fn has_zero_potential(&self) -> bool {
        self.potential.iter().all(|c| c.is_zero())
    }

    /// Connected-component label per vertex, labels in order of first vertex.
    pub fn components(&self) -> Vec<usize> {
        let n = self.len();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                for &(w, _) in &self.adjacency[v] {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&l| l == 0)
    }

    pub fn is_tree(&self) -> bool {
        !self.is_empty() && self.edge_count() + 1 == self.len() && self.is_connected()
    }

    /// If the graph is a path, its vertices in order starting from the
    /// lower-indexed endpoint.
    pub fn path_order(&self) -> Option<Vec<usize>> {
        if !self.is_tree() {
            return None;
        }
        if self.len() == 1 {
            return Some(vec![0]);
        }
        if self.adjacency.iter().any(|row| row.len() > 2) {
            return None;
        }
        let start = (0..self.len()).find(|&i| self.adjacency[i].len() == 1)?;
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&(next, _)) = self.adjacency[cur].iter().find(|(w, _)| *w != prev) {
            order.push(next);
            prev = cur;
            cur = next;
        }
        Some(order)
    }

    /// Returns a copy with every identifier passed through `f`.
    pub fn relabel(&self, mut f: impl FnMut(&str) -> String) -> Result<Self> {
        let ids: Vec<VertexId> = self.ids.iter().map(|id| f(id)).collect();
        let mut seen = HashMap::new();
        for id in &ids {
            if seen.insert(id.clone(), ()).is_some() {
                return Err(Error::DuplicateVertex(id.clone()));
            }
        }
        Ok(Self::from_parts(
            ids,
            self.measure.clone(),
            self.potential.clone(),
            self.pair_map(),
        ))
    }

    pub(crate) fn with_measure(&self, measure: Vec<S>) -> Self {
        let mut g = self.clone();
        g.measure = measure;
        g
    }
}

/// A graph together with a Dirichlet set `V₀` and an exponent `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec<S> {
    graph: WeightedGraph<S>,
    dirichlet: Vec<bool>,
    p: S,
}

impl<S: Scalar> ProblemSpec<S> {
    pub fn new<I, T>(graph: WeightedGraph<S>, dirichlet: I, p: S) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<str>,
    {
        check_exponent(&p)?;
        let mut mask = vec![false; graph.len()];
        for id in dirichlet {
            mask[graph.index_of(id.as_ref())?] = true;
        }
        Ok(Self {
            graph,
            dirichlet: mask,
            p,
        })
    }

    pub(crate) fn from_mask(graph: WeightedGraph<S>, dirichlet: Vec<bool>, p: S) -> Self {
        debug_assert_eq!(graph.len(), dirichlet.len());
        Self {
            graph,
            dirichlet,
            p,
        }
    }

    pub fn graph(&self) -> &WeightedGraph<S> {
        &self.graph
    }

    pub fn p(&self) -> &S {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn is_dirichlet(&self, i: usize) -> bool {
        self.dirichlet[i]
    }

    pub fn dirichlet_mask(&self) -> &[bool] {
        &self.dirichlet
    }

    pub fn dirichlet_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.dirichlet[i]).collect()
    }

    pub fn dirichlet_ids(&self) -> Vec<VertexId> {
        self.dirichlet_indices()
            .into_iter()
            .map(|i| self.graph.ids[i].clone())
            .collect()
    }

    pub fn free_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.dirichlet[i]).collect()
    }

    pub fn free_count(&self) -> usize {
        self.dirichlet.iter().filter(|d| !**d).count()
    }

    pub fn has_dirichlet(&self) -> bool {
        self.dirichlet.iter().any(|&d| d)
    }

    /// `V₀ ≠ ∅` or `sup c > 0`.
    pub fn is_well_posed(&self) -> bool {
        self.has_dirichlet() || !self.graph.has_zero_potential()
    }

    /// `m(V∖V₀)`; equals `m(V)` without Dirichlet vertices.
    pub fn free_mass(&self) -> S {
        self.free_indices()
            .into_iter()
            .fold(S::zero(), |a, i| a + self.graph.measure[i].clone())
    }

    pub fn with_p(&self, p: S) -> Result<Self> {
        check_exponent(&p)?;
        Ok(Self {
            p,
            ..self.clone()
        })
    }

    pub fn with_dirichlet<I, T>(&self, dirichlet: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<str>,
    {
        Self::new(self.graph.clone(), dirichlet, self.p.clone())
    }

    /// Replaces the graph, which must have the same vertex ids in the same order.
    pub fn with_graph(&self, graph: WeightedGraph<S>) -> Result<Self> {
        if graph.ids != self.graph.ids {
            return Err(Error::DomainMismatch {
                expected: self.len(),
                got: graph.len(),
            });
        }
        Ok(Self {
            graph,
            ..self.clone()
        })
    }

    /// Sets every measure to the vertex degree (computed on the full graph).
    pub fn with_degree_measure(&self) -> Result<Self> {
        let degrees: Vec<S> = (0..self.len()).map(|i| self.graph.degree_at(i)).collect();
        if let Some(i) = degrees.iter().position(|d| !(*d > S::zero())) {
            return Err(Error::NonpositiveMass {
                id: self.graph.ids[i].clone(),
            });
        }
        self.with_graph(self.graph.with_measure(degrees))
    }

    /// Each free vertex whose connected component (within the free subgraph)
    /// reaches neither `V₀` nor a positive potential makes `F_p` unbounded.
    pub fn check_solvable(&self) -> Result<()> {
        if !self.is_well_posed() {
            return Err(Error::IllPosed);
        }
        let g = &self.graph;
        let n = g.len();
        let mut seen = vec![false; n];
        for s in 0..n {
            if self.dirichlet[s] || seen[s] {
                continue;
            }
            let mut anchored = false;
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(v) = stack.pop() {
                if g.potential[v] > S::zero() {
                    anchored = true;
                }
                for &(w, _) in &g.adjacency[v] {
                    if self.dirichlet[w] {
                        anchored = true;
                    } else if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            if !anchored {
                return Err(Error::UnboundedComponent {
                    id: g.ids[s].clone(),
                });
            }
        }
        Ok(())
    }
}

fn check_exponent<S: Scalar>(p: &S) -> Result<()> {
    let pf = to_f64(p);
    let lo: S = cast(P_MIN);
    let hi: S = cast(P_MAX);
    if *p < lo || *p > hi || pf.is_nan() {
        return Err(Error::InvalidExponent(pf));
    }
    Ok(())
}
