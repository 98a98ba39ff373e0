//! Sparse symmetric positive definite solves and the dense eigen oracle.

use std::collections::VecDeque;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::scalar::Scalar;

/// Symmetric matrix given by its diagonal and strictly off-diagonal entries
/// per row (both triangles present).
#[derive(Debug, Clone)]
pub(crate) struct SymSparse<S> {
    pub diag: Vec<S>,
    pub off: Vec<Vec<(usize, S)>>,
}

impl<S: Scalar> SymSparse<S> {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    #[cfg(test)]
    pub fn mul(&self, x: &[S]) -> Vec<S> {
        (0..self.len())
            .map(|i| {
                self.off[i]
                    .iter()
                    .fold(self.diag[i].clone() * x[i].clone(), |acc, (j, a)| {
                        acc + a.clone() * x[*j].clone()
                    })
            })
            .collect()
    }
}

/// Reverse Cuthill–McKee ordering; returns `perm[new] = old`.
fn rcm<S>(off: &[Vec<(usize, S)>]) -> Vec<usize> {
    let n = off.len();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (off[v].len(), v));
    for &start in &by_degree {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = off[v].iter().map(|(w, _)| *w).filter(|&w| !visited[w]).collect();
            next.sort_by_key(|&w| (off[w].len(), w));
            for w in next {
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}

/// Envelope `LDLᵀ` factorisation without pivoting.
#[derive(Debug, Clone)]
pub(crate) struct ProfileLdl<S> {
    perm: Vec<usize>,
    first: Vec<usize>,
    rows: Vec<Vec<S>>,
    d: Vec<S>,
}

impl<S: Scalar> ProfileLdl<S> {
    /// Returns `None` when a pivot is not positive (matrix not SPD).
    pub fn factor(a: &SymSparse<S>) -> Option<Self> {
        let n = a.len();
        let perm = rcm(&a.off);
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut first: Vec<usize> = (0..n).collect();
        for (old, row) in a.off.iter().enumerate() {
            let i = inv[old];
            for (w, _) in row {
                let j = inv[*w];
                if j < i {
                    first[i] = first[i].min(j);
                }
            }
        }
        let mut rows: Vec<Vec<S>> = Vec::with_capacity(n);
        let mut d: Vec<S> = Vec::with_capacity(n);
        for i in 0..n {
            let old = perm[i];
            let fi = first[i];
            let mut t = vec![S::zero(); i - fi];
            for (w, val) in &a.off[old] {
                let j = inv[*w];
                if j < i {
                    t[j - fi] = val.clone();
                }
            }
            for j in fi..i {
                let fj = first[j];
                let lo = fi.max(fj);
                let mut s = t[j - fi].clone();
                for k in lo..j {
                    s = s - t[k - fi].clone() * rows[j][k - fj].clone();
                }
                t[j - fi] = s;
            }
            let mut di = a.diag[old].clone();
            for j in fi..i {
                let l = t[j - fi].clone() / d[j].clone();
                di = di - l.clone() * t[j - fi].clone();
                t[j - fi] = l;
            }
            if !(di > S::zero()) {
                return None;
            }
            rows.push(t);
            d.push(di);
        }
        Some(Self { perm, first, rows, d })
    }

    pub fn solve(&self, b: &[S]) -> Vec<S> {
        let n = self.d.len();
        let mut y: Vec<S> = self.perm.iter().map(|&old| b[old].clone()).collect();
        for i in 0..n {
            let fi = self.first[i];
            let mut s = y[i].clone();
            for j in fi..i {
                s = s - self.rows[i][j - fi].clone() * y[j].clone();
            }
            y[i] = s;
        }
        for i in 0..n {
            y[i] = y[i].clone() / self.d[i].clone();
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let yi = y[i].clone();
            for j in fi..i {
                y[j] = y[j].clone() - self.rows[i][j - fi].clone() * yi.clone();
            }
        }
        let mut x = vec![S::zero(); n];
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = y[new].clone();
        }
        x
    }
}

/// The `count` smallest eigenpairs of `A x = λ diag(m) x`, ascending, with
/// eigenvectors normalised in `ℓ²(m)`.
pub(crate) fn smallest_generalized_eigs(
    a: &SymSparse<f64>,
    m: &[f64],
    count: usize,
) -> Vec<(f64, Vec<f64>)> {
    let n = a.len();
    let scale: Vec<f64> = m.iter().map(|x| 1.0 / x.sqrt()).collect();
    let mut dense = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        dense[(i, i)] = a.diag[i] * scale[i] * scale[i];
        for &(j, v) in &a.off[i] {
            dense[(i, j)] = v * scale[i] * scale[j];
        }
    }
    let eig = SymmetricEigen::new(dense);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]).then(x.cmp(&y)));
    idx.into_iter()
        .take(count)
        .map(|k| {
            let vec: Vec<f64> = (0..n).map(|i| eig.eigenvectors[(i, k)] * scale[i]).collect();
            (eig.eigenvalues[k], vec)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_path(n: usize) -> SymSparse<f64> {
        let mut off = vec![Vec::new(); n];
        for i in 0..n - 1 {
            off[i].push((i + 1, -1.0));
            off[i + 1].push((i, -1.0));
        }
        let mut diag = vec![2.0; n];
        diag[n - 1] = 1.0;
        SymSparse { diag, off }
    }

    #[test]
    fn ldl_solves_path_system() {
        let a = laplacian_path(3);
        let x = ProfileLdl::factor(&a).unwrap().solve(&[1.0, 1.0, 1.0]);
        for (got, want) in x.iter().zip([3.0, 5.0, 6.0]) {
            assert!((got - want).abs() < 1e-13);
        }
    }

    #[test]
    fn ldl_handles_wide_profile() {
        // star centre last in input order, random-ish weights
        let n = 6;
        let mut off = vec![Vec::new(); n];
        let w = [0.5, 1.5, 2.0, 0.25, 3.0];
        for (k, &b) in w.iter().enumerate() {
            off[k].push((n - 1, -b));
            off[n - 1].push((k, -b));
        }
        off[0].push((1, -0.75));
        off[1].push((0, -0.75));
        let mut diag: Vec<f64> = (0..n).map(|i| off[i].iter().map(|(_, v)| -v).sum::<f64>() + 0.1 * (i + 1) as f64).collect();
        diag[2] += 1.0;
        let a = SymSparse { diag, off };
        let b: Vec<f64> = (0..n).map(|i| (i as f64).sin() + 2.0).collect();
        let x = ProfileLdl::factor(&a).unwrap().solve(&b);
        let r = a.mul(&x);
        for (ri, bi) in r.iter().zip(&b) {
            assert!((ri - bi).abs() < 1e-12);
        }
    }

    #[test]
    fn indefinite_matrix_is_rejected() {
        let a = SymSparse {
            diag: vec![1.0, 1.0],
            off: vec![vec![(1, 2.0)], vec![(0, 2.0)]],
        };
        assert!(ProfileLdl::factor(&a).is_none());
    }

    #[test]
    fn dense_eigs_of_unit_edge() {
        let a = SymSparse {
            diag: vec![1.0, 1.0],
            off: vec![vec![(1, -1.0)], vec![(0, -1.0)]],
        };
        let e = smallest_generalized_eigs(&a, &[1.0, 1.0], 2);
        assert!(e[0].0.abs() < 1e-14);
        assert!((e[1].0 - 2.0).abs() < 1e-14);
    }
}
