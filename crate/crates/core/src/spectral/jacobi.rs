//! Truncated greedy Jacobi diagonalization.
//!
//! Each step annihilates the largest off-diagonal entry of the working matrix
//! `A = V^T L V` with one classical Jacobi rotation. After `J` steps the
//! diagonal of `A` is the eigenvalue estimate and `V = S_1 ... S_J`.

use nalgebra::{DMatrix, DVector};

use super::{BasisKind, GivensRotation, SpectralBasis};
use crate::graph::LaplacianView;
use crate::Scalar;

/// Rotation budget `round(factor * n * ln n)`.
pub fn rotation_count(factor: f64, n: usize) -> usize {
    if n < 2 {
        return 0;
    }
    (factor * n as f64 * (n as f64).ln()).round().max(0.0) as usize
}

#[derive(Debug, Clone)]
pub struct JacobiRun<T: Scalar> {
    pub basis: SpectralBasis<T>,
    /// Off-diagonal energy `||A - diag(A)||_F^2` before the first rotation and
    /// after every applied rotation.
    pub off_energy: Vec<T>,
}

pub fn truncated_jacobi<T: Scalar>(l: &LaplacianView<T>, rotations: usize) -> SpectralBasis<T> {
    truncated_jacobi_with_history(l, rotations).basis
}

/// Row-wise running maximum of `|A[r, c]|` over `c > r`.
struct PivotIndex<T: Scalar> {
    best: Vec<(T, usize)>,
}

impl<T: Scalar> PivotIndex<T> {
    fn new(a: &DMatrix<T>) -> Self {
        let n = a.nrows();
        let mut idx = Self {
            best: vec![(T::zero(), usize::MAX); n],
        };
        for r in 0..n {
            idx.rescan(a, r);
        }
        idx
    }

    fn rescan(&mut self, a: &DMatrix<T>, r: usize) {
        let mut best = (T::zero(), usize::MAX);
        for c in (r + 1)..a.ncols() {
            let v = a[(r, c)].abs();
            if v > best.0 {
                best = (v, c);
            }
        }
        self.best[r] = best;
    }

    /// Entry `(r, c)`, `c > r`, changed to `a[(r, c)]`.
    fn touch(&mut self, a: &DMatrix<T>, r: usize, c: usize) {
        let (cur, col) = self.best[r];
        let v = a[(r, c)].abs();
        if col == c {
            if v < cur {
                self.rescan(a, r);
            } else {
                self.best[r].0 = v;
            }
        } else if v > cur || (v == cur && v > T::zero() && c < col) {
            self.best[r] = (v, c);
        }
    }

    /// Largest entry, ties resolved to the lexicographically smallest `(p, q)`.
    fn pivot(&self) -> Option<(usize, usize)> {
        let mut best = (T::zero(), usize::MAX, usize::MAX);
        for (r, &(v, c)) in self.best.iter().enumerate() {
            if v > best.0 {
                best = (v, r, c);
            }
        }
        (best.1 != usize::MAX).then_some((best.1, best.2))
    }
}

pub fn truncated_jacobi_with_history<T: Scalar>(
    l: &LaplacianView<T>,
    rotations: usize,
) -> JacobiRun<T> {
    let n = l.n();
    let mut a = l.matrix.clone();
    let mut v = DMatrix::<T>::identity(n, n);
    let mut applied = Vec::with_capacity(rotations.min(n * n));

    let mut off = T::zero();
    for r in 0..n {
        for c in 0..n {
            if r != c {
                off += a[(r, c)] * a[(r, c)];
            }
        }
    }
    let mut history = Vec::with_capacity(rotations + 1);
    history.push(off);

    let mut index = PivotIndex::new(&a);
    let two = T::lit(2.0);
    for _ in 0..rotations {
        let Some((p, q)) = index.pivot() else { break };
        let apq = a[(p, q)];
        let theta = (a[(q, q)] - a[(p, p)]) / (two * apq);
        let sign = if theta >= T::zero() { T::one() } else { -T::one() };
        let t = sign / (theta.abs() + (theta * theta + T::one()).sqrt());
        let c = T::one() / (t * t + T::one()).sqrt();
        let s = t * c;

        for r in 0..n {
            if r == p || r == q {
                continue;
            }
            let arp = a[(r, p)];
            let arq = a[(r, q)];
            let np = c * arp - s * arq;
            let nq = s * arp + c * arq;
            a[(r, p)] = np;
            a[(p, r)] = np;
            a[(r, q)] = nq;
            a[(q, r)] = nq;
        }
        a[(p, p)] -= t * apq;
        a[(q, q)] += t * apq;
        a[(p, q)] = T::zero();
        a[(q, p)] = T::zero();

        let rot = GivensRotation { p, q, c, s };
        rot.apply_right(&mut v);
        applied.push(rot);

        off = (off - two * apq * apq).max(T::zero());
        history.push(off);

        index.rescan(&a, p);
        index.rescan(&a, q);
        for r in 0..n {
            if r == p || r == q {
                continue;
            }
            if r < p {
                index.touch(&a, r, p);
            }
            if r < q {
                index.touch(&a, r, q);
            }
        }
    }

    let diag: Vec<T> = (0..n).map(|i| a[(i, i)]).collect();
    let mut permutation: Vec<usize> = (0..n).collect();
    permutation.sort_by(|&x, &y| {
        diag[x]
            .partial_cmp(&diag[y])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let vectors = DMatrix::from_fn(n, n, |r, k| v[(r, permutation[k])]);
    let values = DVector::from_fn(n, |k, _| diag[permutation[k]]);

    JacobiRun {
        basis: SpectralBasis {
            vectors,
            values,
            kind: BasisKind::Fgft { rotations },
            rotations: applied,
            permutation,
        },
        off_energy: history,
    }
}
