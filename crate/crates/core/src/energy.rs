//! Energy `Q_p`, torsion functional `F_p`, its gradient and the two quotients.

use crate::error::{Error, Result};
use crate::graph::ProblemSpec;
use crate::scalar::{phi_p, Real, Scalar};

/// A real function on the vertices of a spec, indexed like the graph.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexFunction<S> {
    values: Vec<S>,
}

impl<S: Scalar> VertexFunction<S> {
    pub fn new(values: Vec<S>) -> Self {
        Self { values }
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(vec![S::zero(); n])
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn into_values(self) -> Vec<S> {
        self.values
    }

    pub fn get(&self, i: usize) -> &S {
        &self.values[i]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at the vertex with identifier `id`.
    pub fn at(&self, spec: &ProblemSpec<S>, id: &str) -> Result<S> {
        Ok(self.values[spec.graph().index_of(id)?].clone())
    }

    /// Checks length and vanishing on `V₀`.
    pub fn check_domain(&self, spec: &ProblemSpec<S>) -> Result<()> {
        if self.values.len() != spec.len() {
            return Err(Error::DomainMismatch {
                expected: spec.len(),
                got: self.values.len(),
            });
        }
        if let Some(i) = spec
            .dirichlet_indices()
            .into_iter()
            .find(|&i| !self.values[i].is_zero())
        {
            return Err(Error::DirichletViolation {
                id: spec.graph().id(i).to_string(),
            });
        }
        Ok(())
    }
}

impl<S> From<Vec<S>> for VertexFunction<S> {
    fn from(values: Vec<S>) -> Self {
        Self { values }
    }
}

/// `(1/2p) Σ_{v,w} b(v,w)|u(v)−u(w)|^p + (1/p) Σ_v c(v)|u(v)|^p`, ordered pairs.
pub fn energy_qp<S: Real>(spec: &ProblemSpec<S>, u: &VertexFunction<S>) -> Result<S> {
    u.check_domain(spec)?;
    Ok(energy_unchecked(spec, u.values()))
}

pub(crate) fn energy_unchecked<S: Real>(spec: &ProblemSpec<S>, u: &[S]) -> S {
    let g = spec.graph();
    let p = *spec.p();
    let mut pair_sum = S::zero();
    let mut pot_sum = S::zero();
    for v in 0..g.len() {
        for &(w, b) in g.neighbors(v) {
            pair_sum = pair_sum + b * (u[v] - u[w]).abs().powf(p);
        }
        pot_sum = pot_sum + *g.potential(v) * u[v].abs().powf(p);
    }
    let two = S::one() + S::one();
    pair_sum / (two * p) + pot_sum / p
}

/// `Q_p(u) − Σ_{v∉V₀} u(v) m(v)`.
pub fn functional_fp<S: Real>(spec: &ProblemSpec<S>, u: &VertexFunction<S>) -> Result<S> {
    u.check_domain(spec)?;
    Ok(functional_unchecked(spec, u.values()))
}

pub(crate) fn functional_unchecked<S: Real>(spec: &ProblemSpec<S>, u: &[S]) -> S {
    let g = spec.graph();
    let linear = spec
        .free_indices()
        .into_iter()
        .fold(S::zero(), |a, v| a + u[v] * *g.measure(v));
    energy_unchecked(spec, u) - linear
}

/// `Σ_w b(v,w) φ_p(u(v)−u(w)) + c(v) φ_p(u(v))` at one vertex.
pub(crate) fn flux_at<S: Real>(spec: &ProblemSpec<S>, u: &[S], v: usize) -> S {
    let g = spec.graph();
    let p = *spec.p();
    let mut s = *g.potential(v) * phi_p(u[v], p);
    for &(w, b) in g.neighbors(v) {
        s = s + b * phi_p(u[v] - u[w], p);
    }
    s
}

/// Derivative of `F_p`; zero on `V₀`.
pub fn gradient_fp<S: Real>(spec: &ProblemSpec<S>, u: &VertexFunction<S>) -> Result<VertexFunction<S>> {
    u.check_domain(spec)?;
    let g = spec.graph();
    let mut out = vec![S::zero(); spec.len()];
    for v in spec.free_indices() {
        out[v] = flux_at(spec, u.values(), v) - *g.measure(v);
    }
    Ok(VertexFunction::new(out))
}

fn free_lp_norm<S: Real>(spec: &ProblemSpec<S>, u: &[S], q: S) -> S {
    let g = spec.graph();
    spec.free_indices()
        .into_iter()
        .fold(S::zero(), |a, v| a + u[v].abs().powf(q) * *g.measure(v))
}

fn quotient_parts<S: Real>(spec: &ProblemSpec<S>, u: &VertexFunction<S>) -> Result<S> {
    u.check_domain(spec)?;
    if spec.free_indices().into_iter().all(|v| u.get(v).is_zero()) {
        return Err(Error::ZeroFunction);
    }
    let pq = *spec.p() * energy_unchecked(spec, u.values());
    if pq.is_zero() {
        return Err(Error::ZeroEnergy);
    }
    Ok(pq)
}

/// `(Σ_{v∉V₀} |u(v)| m(v))^p / (p Q_p(u))`.
pub fn polya_quotient<S: Real>(spec: &ProblemSpec<S>, u: &VertexFunction<S>) -> Result<S> {
    let pq = quotient_parts(spec, u)?;
    let l1 = free_lp_norm(spec, u.values(), S::one());
    Ok(l1.powf(*spec.p()) / pq)
}

/// `p Q_p(u) / Σ_{v∉V₀} |u(v)|^p m(v)`.
pub fn rayleigh_quotient<S: Real>(spec: &ProblemSpec<S>, u: &VertexFunction<S>) -> Result<S> {
    let pq = quotient_parts(spec, u)?;
    Ok(pq / free_lp_norm(spec, u.values(), *spec.p()))
}

/// `‖u‖_{ℓ^q(V∖V₀, m)}`.
pub(crate) fn free_norm<S: Real>(spec: &ProblemSpec<S>, u: &[S], q: S) -> S {
    free_lp_norm(spec, u, q).powf(S::one() / q)
}
