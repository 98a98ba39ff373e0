//! Coarsest equitable partition and the quotient spec.
//!
//! On each cell of an equitable partition every vertex has the same measure,
//! potential and total weight into every other cell, so a function constant
//! on cells solves the quotient equation iff it solves the original one. By
//! uniqueness the torsion function and the ground state are constant on
//! cells. Solving on the quotient removes edges between vertices with equal
//! values, where `φ_p` is not Lipschitz for `p < 2` and coordinate sweeps
//! stall.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::graph::{ProblemSpec, WeightedGraph};
use crate::scalar::Scalar;

pub(crate) struct Quotient<S> {
    pub spec: ProblemSpec<S>,
    /// Original vertex → quotient vertex.
    pub cell: Vec<usize>,
}

impl<S: Scalar> Quotient<S> {
    #[cfg(test)]
    pub fn is_trivial(&self) -> bool {
        self.spec.len() == self.cell.len()
    }

    /// Takes one representative value per cell.
    pub fn restrict_pick(&self, values: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.spec.len()];
        for (v, &c) in self.cell.iter().enumerate().rev() {
            out[c] = values[v].clone();
        }
        out
    }

    pub fn lift(&self, values: &[S]) -> Vec<S> {
        self.cell.iter().map(|&c| values[c].clone()).collect()
    }
}

fn cmp_scalar<S: Scalar>(a: &S, b: &S) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

type Signature<S> = (usize, Vec<(usize, S)>);

fn cmp_signature<S: Scalar>(a: &Signature<S>, b: &Signature<S>) -> Ordering {
    a.0.cmp(&b.0).then_with(|| {
        for (x, y) in a.1.iter().zip(&b.1) {
            let o = x.0.cmp(&y.0).then_with(|| cmp_scalar(&x.1, &y.1));
            if o != Ordering::Equal {
                return o;
            }
        }
        a.1.len().cmp(&b.1.len())
    })
}

/// Assigns colours by sorting keys; colours are numbered in order of the
/// first vertex carrying them.
fn recolour<S: Scalar>(keys: &[Signature<S>]) -> Vec<usize> {
    let n = keys.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| cmp_signature(&keys[a], &keys[b]).then(a.cmp(&b)));
    let mut class = vec![0usize; n];
    let mut k = 0;
    for (pos, &v) in order.iter().enumerate() {
        if pos > 0 && cmp_signature(&keys[order[pos - 1]], &keys[v]) != Ordering::Equal {
            k += 1;
        }
        class[v] = k;
    }
    let mut renumber = vec![usize::MAX; k + 1];
    let mut next = 0;
    for v in 0..n {
        if renumber[class[v]] == usize::MAX {
            renumber[class[v]] = next;
            next += 1;
        }
    }
    class.iter().map(|&c| renumber[c]).collect()
}

pub(crate) fn equitable_quotient<S: Scalar>(spec: &ProblemSpec<S>) -> Quotient<S> {
    let g = spec.graph();
    let n = g.len();
    // Initial colours: all Dirichlet vertices together, free vertices by (m, c).
    let init: Vec<Signature<S>> = (0..n)
        .map(|v| {
            if spec.is_dirichlet(v) {
                (0, Vec::new())
            } else {
                (1, vec![(0, g.measure(v).clone()), (1, g.potential(v).clone())])
            }
        })
        .collect();
    let mut colour = recolour(&init);
    let mut count = colour.iter().max().map_or(0, |c| c + 1);
    loop {
        let keys: Vec<Signature<S>> = (0..n)
            .map(|v| {
                if spec.is_dirichlet(v) {
                    return (colour[v], Vec::new());
                }
                let mut nb: Vec<(usize, S)> = g
                    .neighbors(v)
                    .iter()
                    .map(|(w, b)| (colour[*w], b.clone()))
                    .collect();
                nb.sort_by(|x, y| x.0.cmp(&y.0).then_with(|| cmp_scalar(&x.1, &y.1)));
                (colour[v], nb)
            })
            .collect();
        let next = recolour(&keys);
        let next_count = next.iter().max().map_or(0, |c| c + 1);
        colour = next;
        if next_count == count {
            break;
        }
        count = next_count;
    }

    let mut ids = vec![String::new(); count];
    let mut measure = vec![S::zero(); count];
    let mut potential = vec![S::zero(); count];
    let mut dirichlet = vec![false; count];
    for v in (0..n).rev() {
        ids[colour[v]] = g.id(v).to_string();
    }
    for v in 0..n {
        let c = colour[v];
        measure[c] = measure[c].clone() + g.measure(v).clone();
        potential[c] = potential[c].clone() + g.potential(v).clone();
        dirichlet[c] = spec.is_dirichlet(v);
    }
    let mut pairs: BTreeMap<(usize, usize), S> = BTreeMap::new();
    for (i, j, b) in g.edges() {
        let (a, c) = (colour[i], colour[j]);
        if a == c {
            continue;
        }
        let slot = pairs.entry((a.min(c), a.max(c))).or_insert_with(S::zero);
        *slot = slot.clone() + b.clone();
    }
    Quotient {
        spec: ProblemSpec::from_mask(
            WeightedGraph::from_parts(ids, measure, potential, pairs),
            dirichlet,
            spec.p().clone(),
        ),
        cell: colour,
    }
}
