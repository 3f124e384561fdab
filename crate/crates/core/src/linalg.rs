//! Dense helpers shared by the sampler, exchange and reconstruction code.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result, Scalar};

/// `m[rows, cols]` as a new dense matrix.
pub fn submatrix<T: Scalar>(m: &DMatrix<T>, rows: &[usize], cols: &[usize]) -> DMatrix<T> {
    DMatrix::from_fn(rows.len(), cols.len(), |r, c| m[(rows[r], cols[c])])
}

/// Principal submatrix `m[idx, idx]`.
pub fn principal<T: Scalar>(m: &DMatrix<T>, idx: &[usize]) -> DMatrix<T> {
    submatrix(m, idx, idx)
}

/// `m[rows, col]`.
pub fn column_part<T: Scalar>(m: &DMatrix<T>, rows: &[usize], col: usize) -> DVector<T> {
    DVector::from_fn(rows.len(), |r, _| m[(rows[r], col)])
}

pub fn frobenius<T: Scalar>(m: &DMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt()
}

/// Inverse of a symmetric positive-definite matrix through its Cholesky factor.
pub fn spd_inverse<T: Scalar>(m: &DMatrix<T>) -> Result<DMatrix<T>> {
    let chol = m.clone().cholesky().ok_or(Error::SingularSubmatrix)?;
    let mut inv = chol.inverse();
    symmetrize(&mut inv);
    Ok(inv)
}

/// Solve `m x = b` for symmetric positive-definite `m`.
pub fn spd_solve<T: Scalar>(m: &DMatrix<T>, b: &DVector<T>) -> Result<DVector<T>> {
    let chol = m.clone().cholesky().ok_or(Error::SingularSubmatrix)?;
    Ok(chol.solve(b))
}

pub fn symmetrize<T: Scalar>(m: &mut DMatrix<T>) {
    let n = m.nrows();
    let half = T::lit(0.5);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = (m[(i, j)] + m[(j, i)]) * half;
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

pub fn trace<T: Scalar>(m: &DMatrix<T>) -> T {
    (0..m.nrows().min(m.ncols())).fold(T::zero(), |acc, i| acc + m[(i, i)])
}

/// `||a * b - I||_F`.
pub fn identity_residual<T: Scalar>(a: &DMatrix<T>, b: &DMatrix<T>) -> T {
    let mut p = a * b;
    for i in 0..p.nrows().min(p.ncols()) {
        p[(i, i)] -= T::one();
    }
    frobenius(&p)
}

/// Eigen-decomposition of a symmetric matrix, eigenvalues ascending and
/// eigenvectors as matching columns.
pub fn symmetric_eigen<T: Scalar>(m: &DMatrix<T>) -> Result<(DVector<T>, DMatrix<T>)> {
    let n = m.nrows();
    let eig = nalgebra::SymmetricEigen::try_new(m.clone(), T::default_epsilon(), eigen_iteration_cap(m.nrows()))
        .ok_or(Error::ConvergenceFailure)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = DVector::from_fn(n, |i, _| eig.eigenvalues[order[i]]);
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

fn eigen_iteration_cap(n: usize) -> usize {
    1000 + 100 * n
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues<T: Scalar>(m: &DMatrix<T>) -> Result<Vec<T>> {
    let eig = nalgebra::SymmetricEigen::try_new(m.clone(), T::default_epsilon(), eigen_iteration_cap(m.nrows()))
        .ok_or(Error::ConvergenceFailure)?;
    let mut v: Vec<T> = eig.eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Ok(v)
}

/// Numerical rank from the singular values, counting those above
/// `rel_tol * max(1, s_max)`.
pub fn numerical_rank<T: Scalar>(m: &DMatrix<T>, rel_tol: T) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().singular_values();
    let smax = sv.iter().copied().fold(T::zero(), T::max);
    let cut = rel_tol * smax.max(T::one());
    sv.iter().filter(|&&s| s > cut).count()
}

/// Index of the minimum score; scores within `tol` of the minimum count as
/// tied and the smallest index among them wins.
///
/// The result does not depend on the order the candidates arrive in.
pub fn argmin_with_ties<T: Scalar>(scores: &[(usize, T)], tol: T) -> Option<usize> {
    let best = scores
        .iter()
        .map(|&(_, s)| s)
        .filter(|s| s.is_finite())
        .fold(None, |acc: Option<T>, s| Some(acc.map_or(s, |a| a.min(s))))?;
    scores
        .iter()
        .filter(|&&(_, s)| s.is_finite() && s <= best + tol)
        .map(|&(i, _)| i)
        .min()
}

/// Absolute tie window for greedy trace comparisons on an `n`-node problem
/// with shift `mu`. Objective values are bounded by `n / mu`.
pub fn tie_tolerance<T: Scalar>(n: usize, mu: T) -> T {
    T::lit(1e-12) * T::of_usize(n.max(1)) / mu
}
