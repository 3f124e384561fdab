//! Graph Fourier bases: exact eigenvectors of the Laplacian, or the
//! approximate basis `S_1 ... S_J` built from truncated Jacobi rotations.

mod filter;
mod jacobi;

use nalgebra::{DMatrix, DVector};

use crate::error::invalid;
use crate::graph::LaplacianView;
use crate::linalg;
use crate::{Result, Scalar};

pub use filter::{fgft_error, fgft_error_against, lp_filter, LowPassFilter};
pub use jacobi::{rotation_count, truncated_jacobi, truncated_jacobi_with_history, JacobiRun};

/// Largest graph the dense exact eigensolver is used on by default.
pub const ORACLE_CAP: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    Exact,
    /// Truncated Jacobi with the requested rotation budget.
    Fgft { rotations: usize },
}

/// Plane rotation acting on coordinates `p < q`.
///
/// As a matrix it is the identity except `S[p,p] = S[q,q] = c`,
/// `S[p,q] = s`, `S[q,p] = -s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GivensRotation<T: Scalar> {
    pub p: usize,
    pub q: usize,
    pub c: T,
    pub s: T,
}

impl<T: Scalar> GivensRotation<T> {
    /// `X <- S X` (mixes rows `p` and `q`).
    pub fn apply_left(&self, x: &mut DMatrix<T>) {
        for col in 0..x.ncols() {
            let a = x[(self.p, col)];
            let b = x[(self.q, col)];
            x[(self.p, col)] = self.c * a + self.s * b;
            x[(self.q, col)] = self.c * b - self.s * a;
        }
    }

    /// `X <- X S^T` (mixes columns `p` and `q`).
    pub fn apply_right_transpose(&self, x: &mut DMatrix<T>) {
        for row in 0..x.nrows() {
            let a = x[(row, self.p)];
            let b = x[(row, self.q)];
            x[(row, self.p)] = self.c * a + self.s * b;
            x[(row, self.q)] = self.c * b - self.s * a;
        }
    }

    /// `X <- X S` (the update that accumulates eigenvectors).
    pub fn apply_right(&self, x: &mut DMatrix<T>) {
        for row in 0..x.nrows() {
            let a = x[(row, self.p)];
            let b = x[(row, self.q)];
            x[(row, self.p)] = self.c * a - self.s * b;
            x[(row, self.q)] = self.s * a + self.c * b;
        }
    }

    pub fn to_dense(&self, n: usize) -> DMatrix<T> {
        let mut m = DMatrix::identity(n, n);
        m[(self.p, self.p)] = self.c;
        m[(self.q, self.q)] = self.c;
        m[(self.p, self.q)] = self.s;
        m[(self.q, self.p)] = -self.s;
        m
    }
}

/// Orthonormal basis with eigenvalue estimates in non-decreasing order.
#[derive(Debug, Clone)]
pub struct SpectralBasis<T: Scalar> {
    /// Columns are basis vectors, ordered to match `values`.
    pub vectors: DMatrix<T>,
    pub values: DVector<T>,
    pub kind: BasisKind,
    /// Rotations in application order (`S_1` first). Empty for exact bases.
    pub rotations: Vec<GivensRotation<T>>,
    /// `permutation[k]` is the unsorted working-matrix index that became
    /// column `k`. Identity for exact bases.
    pub permutation: Vec<usize>,
}

impl<T: Scalar> SpectralBasis<T> {
    pub fn n(&self) -> usize {
        self.vectors.nrows()
    }

    /// First `k` columns.
    pub fn band(&self, k: usize) -> DMatrix<T> {
        self.vectors.columns(0, k).into_owned()
    }

    /// `||V^T V - I||_F`.
    pub fn orthonormality_error(&self) -> T {
        linalg::identity_residual(&self.vectors.transpose(), &self.vectors)
    }

    /// Rows `S` of the first `k` columns, i.e. `C V_K`.
    pub fn sampled_band(&self, k: usize, set: &[usize]) -> DMatrix<T> {
        DMatrix::from_fn(set.len(), k, |r, c| self.vectors[(set[r], c)])
    }

    /// `Psi = (C V_K)^T C V_K`.
    pub fn information_matrix(&self, k: usize, set: &[usize]) -> DMatrix<T> {
        let cv = self.sampled_band(k, set);
        cv.transpose() * cv
    }
}

/// Full eigen-decomposition `L = V diag(lambda) V^T`, eigenvalues ascending.
pub fn exact_eigendecompose<T: Scalar>(l: &LaplacianView<T>) -> Result<SpectralBasis<T>> {
    exact_eigendecompose_capped(l, ORACLE_CAP)
}

pub fn exact_eigendecompose_capped<T: Scalar>(
    l: &LaplacianView<T>,
    cap: usize,
) -> Result<SpectralBasis<T>> {
    let n = l.n();
    if n > cap {
        return Err(invalid(format!(
            "{n} nodes exceeds the exact eigensolver cap of {cap}"
        )));
    }
    let (values, vectors) = linalg::symmetric_eigen(&l.matrix)?;
    Ok(SpectralBasis {
        vectors,
        values,
        kind: BasisKind::Exact,
        rotations: Vec::new(),
        permutation: (0..n).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{edges_from, gen_sensor_graph, Graph};

    #[test]
    fn two_node_path() {
        let g = Graph::new(2, edges_from(&[(0, 1, 1.0)])).unwrap();
        let b = exact_eigendecompose(&g.laplacian::<f64>()).unwrap();
        assert!((b.values[0]).abs() < 1e-14);
        assert!((b.values[1] - 2.0).abs() < 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((b.vectors[(0, 0)].abs() - h).abs() < 1e-14);
        assert!((b.vectors[(0, 0)] - b.vectors[(1, 0)]).abs() < 1e-14);
    }

    #[test]
    fn three_cycle() {
        let g = Graph::new(3, edges_from(&[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)])).unwrap();
        let b = exact_eigendecompose(&g.laplacian::<f64>()).unwrap();
        for (got, want) in b.values.iter().zip([0.0, 3.0, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn sensor_reconstruction_residual() {
        let g = gen_sensor_graph(64, 0.35, 4).unwrap();
        let l = g.laplacian::<f64>();
        let b = exact_eigendecompose(&l).unwrap();
        let rec = &b.vectors * DMatrix::from_diagonal(&b.values) * b.vectors.transpose();
        let rel = linalg::frobenius(&(rec - &l.matrix)) / linalg::frobenius(&l.matrix);
        assert!(rel <= 1e-9);
        assert!(b.orthonormality_error() <= 1e-10);
        assert!(b.values[0] >= -1e-10);
        assert!(b.values.as_slice().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn cap_is_enforced() {
        let g = gen_sensor_graph(20, 0.6, 1).unwrap();
        assert!(exact_eigendecompose_capped(&g.laplacian::<f64>(), 10).is_err());
    }

    #[test]
    fn single_precision_basis() {
        let g = gen_sensor_graph(30, 0.5, 9).unwrap();
        let b = exact_eigendecompose(&g.laplacian::<f32>()).unwrap();
        assert!(b.orthonormality_error() < 1e-4);
    }

    #[test]
    fn rotation_forms_agree() {
        let r = GivensRotation { p: 1, q: 3, c: 0.6, s: 0.8 };
        let x = DMatrix::from_fn(4, 4, |i, j| (i * 4 + j) as f64 - 3.0);
        let s = r.to_dense(4);
        let mut left = x.clone();
        r.apply_left(&mut left);
        assert!(linalg::frobenius(&(left - &s * &x)) < 1e-12);
        let mut rt = x.clone();
        r.apply_right_transpose(&mut rt);
        assert!(linalg::frobenius(&(rt - &x * s.transpose())) < 1e-12);
        let mut right = x.clone();
        r.apply_right(&mut right);
        assert!(linalg::frobenius(&(right - &x * &s)) < 1e-12);
    }
}
