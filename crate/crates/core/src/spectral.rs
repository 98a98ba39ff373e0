//! Bottom of the p-spectrum `λ₀,p` with a ground state, and `λ₁,₂`.

use std::collections::BTreeMap;

use crate::energy::{energy_unchecked, flux_at, free_norm, VertexFunction};
use crate::error::{Error, Result};
use crate::graph::{ProblemSpec, WeightedGraph};
use crate::linalg::{smallest_generalized_eigs, ProfileLdl};
use crate::quotient::equitable_quotient;
use crate::scalar::{cast, max_of, phi_p, to_f64, Real};
use crate::torsion::{assemble_p2, solve_poisson, Method};

/// Largest free-vertex count handled by the dense eigensolver.
pub const DENSE_LIMIT: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpectralMethod {
    /// Dense for `p = 2` up to [`DENSE_LIMIT`] free vertices, inverse power otherwise.
    #[default]
    Auto,
    Dense,
    InversePower,
}

impl SpectralMethod {
    pub fn name(self) -> &'static str {
        match self {
            SpectralMethod::Auto => "auto",
            SpectralMethod::Dense => "dense_eigen",
            SpectralMethod::InversePower => "inverse_power",
        }
    }
}

/// How much a reported `λ₀` can be trusted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evidence {
    /// Linear eigenproblem solved to rounding.
    Exact,
    /// Rayleigh quotient of the computed state: an upper bound on `λ₀,p`,
    /// believed exact.
    VariationalUpperBound,
}

impl Evidence {
    pub fn name(self) -> &'static str {
        match self {
            Evidence::Exact => "exact",
            Evidence::VariationalUpperBound => "variational_upper_bound",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralOptions<S> {
    pub method: SpectralMethod,
    /// Relative change of `λ` between outer iterations that stops the
    /// inverse power iteration.
    pub tol: S,
    pub max_iterations: usize,
}

impl<S: Real> Default for SpectralOptions<S> {
    fn default() -> Self {
        Self {
            method: SpectralMethod::Auto,
            tol: cast(1e-10),
            max_iterations: 100_000,
        }
    }
}

impl<S: Real> SpectralOptions<S> {
    pub fn with_method(method: SpectralMethod) -> Self {
        Self {
            method,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSolution<S> {
    pub lambda0: S,
    /// Nonnegative, zero on `V₀`, unit norm in `ℓ^p(V∖V₀, m)`.
    pub ground_state: VertexFunction<S>,
    /// `max_v |L_p φ(v) − λ φ_p(φ(v))|` over free vertices.
    pub residual: S,
    pub iterations: usize,
    pub method: SpectralMethod,
    pub evidence: Evidence,
}

fn eigen_residual<S: Real>(spec: &ProblemSpec<S>, u: &[S], lambda: S) -> S {
    let g = spec.graph();
    let p = *spec.p();
    spec.free_indices().into_iter().fold(S::zero(), |acc, v| {
        let r = flux_at(spec, u, v) / *g.measure(v) - lambda * phi_p(u[v], p);
        max_of(acc, r.abs())
    })
}

fn rayleigh<S: Real>(spec: &ProblemSpec<S>, u: &[S]) -> S {
    let p = *spec.p();
    p * energy_unchecked(spec, u) / free_norm(spec, u, p).powf(p)
}

pub fn lambda0<S: Real>(spec: &ProblemSpec<S>, opts: &SpectralOptions<S>) -> Result<SpectralSolution<S>> {
    spec.check_solvable()?;
    if spec.free_count() == 0 {
        return Err(Error::InvalidSize("no free vertices".into()));
    }
    let two = S::one() + S::one();
    let linear = *spec.p() == two;
    let method = match opts.method {
        SpectralMethod::Auto if linear && spec.free_count() <= DENSE_LIMIT => SpectralMethod::Dense,
        SpectralMethod::Auto => SpectralMethod::InversePower,
        SpectralMethod::Dense if !linear => {
            return Err(Error::UnsupportedCombination(
                "the dense eigensolver requires p = 2".into(),
            ))
        }
        m => m,
    };
    let evidence = if linear {
        Evidence::Exact
    } else {
        Evidence::VariationalUpperBound
    };
    let (state, iterations) = match method {
        SpectralMethod::Dense => (dense_ground_state(spec), 1),
        _ => {
            // The problem decouples over the components of the free
            // subgraph; the ground state lives on the one with smallest λ.
            let mut best: Option<(S, Vec<S>, usize)> = None;
            let mut total = 0;
            for comp in free_components(spec) {
                let (sub, embed) = component_spec(spec, &comp);
                let q = equitable_quotient(&sub);
                let (uq, it) = inverse_power(&q.spec, opts)?;
                total += it;
                let local = q.lift(&uq);
                let lambda = rayleigh(&sub, &local);
                if best.as_ref().map_or(true, |(b, _, _)| lambda < *b) {
                    let mut full = vec![S::zero(); spec.len()];
                    for (k, &v) in embed.iter().enumerate() {
                        full[v] = local[k];
                    }
                    best = Some((lambda, full, it));
                }
            }
            let (_, state, _) = best.expect("at least one free vertex");
            (state, total)
        }
    };
    let lambda = rayleigh(spec, &state);
    Ok(SpectralSolution {
        lambda0: lambda,
        residual: eigen_residual(spec, &state, lambda),
        ground_state: VertexFunction::new(state),
        iterations,
        method,
        evidence,
    })
}

/// Connected components of the subgraph induced on the free vertices.
fn free_components<S: Real>(spec: &ProblemSpec<S>) -> Vec<Vec<usize>> {
    let g = spec.graph();
    let mut label = vec![usize::MAX; spec.len()];
    let mut out = Vec::new();
    for s in spec.free_indices() {
        if label[s] != usize::MAX {
            continue;
        }
        let mut comp = vec![s];
        label[s] = out.len();
        let mut head = 0;
        while head < comp.len() {
            let v = comp[head];
            head += 1;
            for &(w, _) in g.neighbors(v) {
                if !spec.is_dirichlet(w) && label[w] == usize::MAX {
                    label[w] = out.len();
                    comp.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// The spec restricted to one free component and all of `V₀`, with the map
/// from local to original indices.
fn component_spec<S: Real>(spec: &ProblemSpec<S>, comp: &[usize]) -> (ProblemSpec<S>, Vec<usize>) {
    let g = spec.graph();
    let mut embed = comp.to_vec();
    embed.extend(spec.dirichlet_indices());
    let mut local = vec![usize::MAX; spec.len()];
    for (k, &v) in embed.iter().enumerate() {
        local[v] = k;
    }
    let mut pairs = BTreeMap::new();
    for &v in comp {
        for &(w, b) in g.neighbors(v) {
            let (a, c) = (local[v], local[w]);
            pairs.insert((a.min(c), a.max(c)), b);
        }
    }
    let graph = WeightedGraph::from_parts(
        embed.iter().map(|&v| g.id(v).to_string()).collect(),
        embed.iter().map(|&v| *g.measure(v)).collect(),
        embed.iter().map(|&v| *g.potential(v)).collect(),
        pairs,
    );
    let mask = embed.iter().map(|&v| spec.is_dirichlet(v)).collect();
    (ProblemSpec::from_mask(graph, mask, *spec.p()), embed)
}

fn dense_ground_state<S: Real>(spec: &ProblemSpec<S>) -> Vec<S> {
    let sys = assemble_p2(spec);
    let a = crate::linalg::SymSparse {
        diag: sys.matrix.diag.iter().map(to_f64).collect(),
        off: sys
            .matrix
            .off
            .iter()
            .map(|row| row.iter().map(|(j, v)| (*j, to_f64(v))).collect())
            .collect(),
    };
    let m: Vec<f64> = sys.free.iter().map(|&v| to_f64(spec.graph().measure(v))).collect();
    let (_, vec) = smallest_generalized_eigs(&a, &m, 1).remove(0);
    let sign = if vec.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
    let mut out = vec![S::zero(); spec.len()];
    for (k, &v) in sys.free.iter().enumerate() {
        out[v] = cast(sign * vec[k]);
    }
    out
}

/// `u ← normalise(L_p^{-1}(φ_p(u)))`, starting from the constant.
fn inverse_power<S: Real>(spec: &ProblemSpec<S>, opts: &SpectralOptions<S>) -> Result<(Vec<S>, usize)> {
    let g = spec.graph();
    let p = *spec.p();
    let one = S::one();
    let free = spec.free_indices();
    let two = one + one;
    let ldl = if p == two {
        Some(ProfileLdl::factor(&assemble_p2(spec).matrix).ok_or(Error::IllPosed)?)
    } else {
        None
    };
    let mut u = vec![S::zero(); spec.len()];
    for &v in &free {
        u[v] = one;
    }
    let norm = free_norm(spec, &u, p);
    u.iter_mut().for_each(|x| *x = *x / norm);
    let mut lambda = rayleigh(spec, &u);
    let mut gap = one;
    for it in 1..=opts.max_iterations {
        let rhs: Vec<S> = (0..spec.len())
            .map(|v| if spec.is_dirichlet(v) { S::zero() } else { *g.measure(v) * phi_p(u[v], p) })
            .collect();
        let next = match &ldl {
            Some(f) => {
                let x = f.solve(&free.iter().map(|&v| rhs[v]).collect::<Vec<_>>());
                let mut full = vec![S::zero(); spec.len()];
                for (k, &v) in free.iter().enumerate() {
                    full[v] = x[k];
                }
                full
            }
            None => {
                // The outer gap is the relative eigen-residual of the iterate.
                let scale = free.iter().fold(S::zero(), |a, &v| max_of(a, (rhs[v] / *g.measure(v)).abs()));
                let outer_gap = eigen_residual(spec, &u, lambda) / (lambda * scale);
                let inner_tol = max_of(cast::<S>(1e-2) * outer_gap, cast(1e-12)) * scale;
                let warm: Vec<S> = u.iter().map(|&x| x * lambda.powf(-one / (p - one))).collect();
                match solve_poisson(spec, &rhs, inner_tol, 10_000, Method::Newton, Some(&warm)) {
                    Ok(x) => x.0,
                    Err(e) if e.is_numerical() => {
                        solve_poisson(spec, &rhs, inner_tol, 1_000_000, Method::GaussSeidel, Some(&warm))?.0
                    }
                    Err(e) => return Err(e),
                }
            }
        };
        let norm = free_norm(spec, &next, p);
        u = next.into_iter().map(|x| x / norm).collect();
        let updated = rayleigh(spec, &u);
        gap = ((lambda - updated) / updated).abs();
        lambda = updated;
        if gap <= opts.tol && it >= 2 {
            return Ok((u, it));
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iterations,
        residual: to_f64(&gap),
    })
}

/// Second-smallest eigenvalue of the `p = 2` operator on all of `V`, no
/// Dirichlet condition.
pub fn lambda1_p2<S: Real>(g: &WeightedGraph<S>) -> Result<S> {
    if g.len() < 2 {
        return Err(Error::TooFewVertices { needed: 2, got: g.len() });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let spec = ProblemSpec::from_mask(g.clone(), vec![false; g.len()], S::one() + S::one());
    let sys = assemble_p2(&spec);
    let a = crate::linalg::SymSparse {
        diag: sys.matrix.diag.iter().map(to_f64).collect(),
        off: sys
            .matrix
            .off
            .iter()
            .map(|row| row.iter().map(|(j, v)| (*j, to_f64(v))).collect())
            .collect(),
    };
    let m: Vec<f64> = g.measures().iter().map(to_f64).collect();
    Ok(cast(smallest_generalized_eigs(&a, &m, 2)[1].0))
}
