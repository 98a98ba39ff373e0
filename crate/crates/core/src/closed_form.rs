//! Explicit torsion functions for paths and stars, and tabulated `p = 2`
//! reference values.
//!
//! Index convention: `F` is the number of free vertices of a path, `n` the
//! number of edges of a star. Vertex `v0` is always the Dirichlet vertex and
//! vectors returned here are indexed like the generators' vertices.

use crate::energy::VertexFunction;
use crate::error::{Error, Result};
use crate::generators::MassMode;
use crate::scalar::{from_usize, Real, Scalar};

/// Path `v0 – v1 – … – vF` with `V₀ = {v0}`, `c ≡ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSpecParams<S> {
    /// `m(v1), …, m(vF)`.
    pub masses: Vec<S>,
    /// `b(v0,v1), …, b(v_{F−1},v_F)`.
    pub weights: Vec<S>,
    pub p: S,
}

impl<S: Scalar> PathSpecParams<S> {
    pub fn free_count(&self) -> usize {
        self.masses.len()
    }

    fn validate(&self) -> Result<()> {
        if self.masses.is_empty() || self.masses.len() != self.weights.len() {
            return Err(Error::InvalidSize(format!(
                "{} masses and {} weights",
                self.masses.len(),
                self.weights.len()
            )));
        }
        Ok(())
    }
}

/// Masses for the uniform path with weight `b` under a mass mode.
pub fn path_masses<S: Scalar>(free: usize, mode: &MassMode<S>, b: S) -> Vec<S> {
    match mode {
        MassMode::Unit => vec![S::one(); free],
        MassMode::Degree => (1..=free)
            .map(|j| if j < free { b.clone() + b.clone() } else { b.clone() })
            .collect(),
        MassMode::Explicit(ms) => ms[1..].to_vec(),
    }
}

/// Generic in the inner power so the `p = 2` case stays exact.
fn path_tail_sums<S: Scalar>(masses: &[S], weights: &[S], mut root: impl FnMut(S) -> S) -> Vec<S> {
    let f = masses.len();
    let mut tail = S::zero();
    let mut increments = vec![S::zero(); f];
    for l in (0..f).rev() {
        tail = tail + masses[l].clone();
        increments[l] = root(tail.clone() / weights[l].clone());
    }
    let mut out = vec![S::zero(); f + 1];
    for j in 1..=f {
        out[j] = out[j - 1].clone() + increments[j - 1].clone();
    }
    out
}

/// `τ(v_j) = Σ_{ℓ≤j} ((1/b_ℓ) Σ_{k≥ℓ} m_k)^{1/(p−1)}`.
pub fn path_torsion<S: Real>(params: &PathSpecParams<S>) -> Result<VertexFunction<S>> {
    params.validate()?;
    let e = S::one() / (params.p - S::one());
    Ok(VertexFunction::new(path_tail_sums(
        &params.masses,
        &params.weights,
        |x: S| x.powf(e),
    )))
}

/// The `p = 2` path torsion over any field.
pub fn path_torsion_p2<S: Scalar>(masses: &[S], weights: &[S]) -> Result<VertexFunction<S>> {
    if masses.is_empty() || masses.len() != weights.len() {
        return Err(Error::InvalidSize("masses and weights must have equal positive length".into()));
    }
    Ok(VertexFunction::new(path_tail_sums(masses, weights, |x| x)))
}

/// Uniform path helper: `F` free vertices, weight `b`.
pub fn path_torsion_uniform<S: Real>(free: usize, mode: &MassMode<S>, b: S, p: S) -> VertexFunction<S> {
    let params = PathSpecParams {
        masses: path_masses(free, mode, b),
        weights: vec![b; free],
        p,
    };
    path_torsion(&params).expect("uniform path parameters are consistent")
}

/// `T_p` of a path, `(Σ τ m)^{p−1}`.
pub fn path_rigidity<S: Real>(params: &PathSpecParams<S>) -> Result<S> {
    let tau = path_torsion(params)?;
    let l1 = params
        .masses
        .iter()
        .zip(&tau.values()[1..])
        .fold(S::zero(), |a, (&m, &t)| a + m * t);
    Ok(l1.powf(params.p - S::one()))
}

/// Path `v0 – … – v_{2k}` with Dirichlet at both ends and mirror-symmetric
/// data. `masses` are `m(v1..v_{2k−1})`, `weights` are the `2k` edge weights
/// in order. Returns values on all `2k+1` vertices.
pub fn path_torsion_two_dirichlet_symmetric<S: Real>(
    masses: &[S],
    weights: &[S],
    p: S,
) -> Result<VertexFunction<S>> {
    let interior = masses.len();
    if interior % 2 == 0 {
        return Err(Error::EvenVertexCount(interior + 2));
    }
    let k = (interior + 1) / 2;
    if weights.len() != 2 * k {
        return Err(Error::InvalidSize(format!(
            "expected {} weights, got {}",
            2 * k,
            weights.len()
        )));
    }
    for l in 0..interior {
        if masses[l] != masses[interior - 1 - l] {
            return Err(Error::AsymmetricData(l + 1));
        }
    }
    for l in 0..2 * k {
        if weights[l] != weights[2 * k - 1 - l] {
            return Err(Error::AsymmetricData(l + 1));
        }
    }
    // Half path v0..vk with the middle mass halved.
    let two = S::one() + S::one();
    let mut half: Vec<S> = masses[..k].to_vec();
    half[k - 1] = half[k - 1] / two;
    let left = path_torsion(&PathSpecParams {
        masses: half,
        weights: weights[..k].to_vec(),
        p,
    })?
    .into_values();
    let mut out = vec![S::zero(); 2 * k + 1];
    for j in 0..=k {
        out[j] = left[j];
        out[2 * k - j] = left[j];
    }
    Ok(VertexFunction::new(out))
}

fn star_values<S: Scalar>(masses: &[S], weights: &[S], mut root: impl FnMut(S) -> S) -> Result<Vec<S>> {
    let n = masses.len();
    if n == 0 || weights.len() != n {
        return Err(Error::InvalidSize(format!("{n} masses and {} weights", weights.len())));
    }
    let total = masses.iter().fold(S::zero(), |a, m| a + m.clone());
    let centre = root(total / weights[0].clone());
    let mut out = vec![S::zero(); n + 1];
    out[1] = centre.clone();
    for j in 2..=n {
        out[j] = centre.clone() + root(masses[j - 1].clone() / weights[j - 1].clone());
    }
    Ok(out)
}

/// Star with centre `v1`, Dirichlet leaf `v0`, leaves `v2..vn`.
/// `masses` are `m(v1..vn)`, `weights` are `b(v1,v0), b(v1,v2), …, b(v1,vn)`.
pub fn star_torsion<S: Real>(masses: &[S], weights: &[S], p: S) -> Result<VertexFunction<S>> {
    let e = S::one() / (p - S::one());
    star_values(masses, weights, |x: S| x.powf(e)).map(VertexFunction::new)
}

/// The `p = 2` star torsion over any field.
pub fn star_torsion_p2<S: Scalar>(masses: &[S], weights: &[S]) -> Result<VertexFunction<S>> {
    star_values(masses, weights, |x| x).map(VertexFunction::new)
}

/// Star masses `m(v1..vn)` for unit weights.
pub fn star_masses<S: Scalar>(n: usize, mode: &MassMode<S>) -> Vec<S> {
    match mode {
        MassMode::Unit => vec![S::one(); n],
        MassMode::Degree => std::iter::once(from_usize(n))
            .chain(std::iter::repeat(S::one()).take(n - 1))
            .collect(),
        MassMode::Explicit(ms) => ms[1..].to_vec(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceKind {
    /// `T₂` of the path with `F = n` free vertices.
    PathT2,
    /// `T₂` of the `n`-edge star with one Dirichlet leaf.
    StarT2,
    /// `λ₀,₂` of the path with `F = n` free vertices.
    PathLambda02,
    /// `λ₀,₂` of the `n`-edge star with every leaf Dirichlet.
    StarLambda02,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceMass {
    Unit,
    Degree,
}

/// Reference rigidities, exact in any field.
///
/// The degree-mass star value is `n(2n−1) + (n−1)·2n = 4n² − 3n`.
pub fn reference_rigidity<S: Scalar>(kind: ReferenceKind, n: usize, mass: ReferenceMass) -> Result<S> {
    if n == 0 {
        return Err(Error::InvalidSize("n must be positive".into()));
    }
    let x: S = from_usize(n);
    let one = S::one();
    let two = one.clone() + one.clone();
    let three = two.clone() + one.clone();
    let four = two.clone() + two.clone();
    let six = three.clone() + three.clone();
    match (kind, mass) {
        (ReferenceKind::PathT2, ReferenceMass::Unit) => {
            Ok(x.clone() * (x.clone() + one.clone()) * (two * x + one) / six)
        }
        (ReferenceKind::PathT2, ReferenceMass::Degree) => {
            Ok(x.clone() * (two.clone() * x.clone() - one.clone()) * (two * x + one) / three)
        }
        (ReferenceKind::StarT2, ReferenceMass::Unit) => Ok(x.clone() * x.clone() + x - one),
        (ReferenceKind::StarT2, ReferenceMass::Degree) => Ok(four * x.clone() * x.clone() - three * x),
        _ => Err(Error::UnsupportedCombination(format!(
            "{kind:?} is not a rigidity"
        ))),
    }
}

/// Closed-form `p = 2` reference values.
pub fn reference_values<S: Real>(kind: ReferenceKind, n: usize, mass: ReferenceMass, p: S) -> Result<S> {
    if p != S::one() + S::one() {
        return Err(Error::UnsupportedCombination("closed forms are tabulated for p = 2 only".into()));
    }
    if n == 0 {
        return Err(Error::InvalidSize("n must be positive".into()));
    }
    let x: S = from_usize(n);
    let one = S::one();
    let two = one + one;
    match (kind, mass) {
        (ReferenceKind::PathLambda02, ReferenceMass::Unit) => {
            Ok(two * (one - (S::PI() / (two * x + one)).cos()))
        }
        (ReferenceKind::PathLambda02, ReferenceMass::Degree) => Ok(one - (S::PI() / (two * x)).cos()),
        (ReferenceKind::StarLambda02, ReferenceMass::Unit) => Ok(x),
        (ReferenceKind::StarLambda02, ReferenceMass::Degree) => Ok(one),
        _ => reference_rigidity(kind, n, mass),
    }
}
