//! Direct-inversion reference paths. Nothing here is used by the fast
//! sampler; these exist to check it.

use nalgebra::DMatrix;

use crate::error::invalid;
use crate::linalg;
use crate::spectral::{LowPassFilter, SpectralBasis};
use crate::{Result, Scalar};

/// `tr((T_S + mu I)^-1)` by a direct SPD inversion.
pub fn objective<T: Scalar>(filter: &LowPassFilter<T>, mu: T, set: &[usize]) -> Result<T> {
    if set.is_empty() {
        return Err(invalid("objective needs a non-empty set"));
    }
    let mut gs = linalg::principal(&filter.matrix, set);
    for i in 0..set.len() {
        gs[(i, i)] += mu;
    }
    Ok(linalg::trace(&linalg::spd_inverse(&gs)?))
}

/// `tr[((C V_K)^T C V_K + mu I)^-1]`, the shifted A-optimality criterion in
/// the `K`-dimensional spectral domain. An empty set gives `K / mu`.
pub fn augmented_a_optimal<T: Scalar>(
    basis: &SpectralBasis<T>,
    bandwidth: usize,
    mu: T,
    set: &[usize],
) -> Result<T> {
    let mut z = basis.information_matrix(bandwidth, set);
    for i in 0..bandwidth {
        z[(i, i)] += mu;
    }
    Ok(linalg::trace(&linalg::spd_inverse(&z)?))
}

fn shifted_trace<T: Scalar>(z: &DMatrix<T>) -> Option<T> {
    linalg::spd_inverse(z).ok().map(|inv| linalg::trace(&inv))
}

/// Greedy minimization of the spectral-domain criterion with one explicit
/// `K x K` inversion per candidate. Returns the chosen nodes in selection
/// order together with the criterion value after each addition.
pub fn naive_greedy_trajectory<T: Scalar>(
    basis: &SpectralBasis<T>,
    bandwidth: usize,
    mu: T,
    budget: usize,
) -> Result<(Vec<usize>, Vec<T>)> {
    let n = basis.n();
    if bandwidth == 0 || bandwidth > n {
        return Err(invalid(format!("bandwidth {bandwidth} outside 1..={n}")));
    }
    if budget > n {
        return Err(invalid(format!("budget {budget} exceeds {n} nodes")));
    }
    let rows = basis.band(bandwidth);
    let tol = linalg::tie_tolerance(n, mu);
    let mut z = DMatrix::<T>::identity(bandwidth, bandwidth) * mu;
    let mut chosen = Vec::with_capacity(budget);
    let mut in_set = vec![false; n];
    let mut values = Vec::with_capacity(budget);
    while chosen.len() < budget {
        let scored: Vec<(usize, T)> = (0..n)
            .filter(|&i| !in_set[i])
            .filter_map(|i| {
                let t = rows.row(i).transpose();
                let zi = &z + &t * t.transpose();
                shifted_trace(&zi).map(|v| (i, v))
            })
            .collect();
        let u = linalg::argmin_with_ties(&scored, tol).ok_or(crate::Error::SingularSubmatrix)?;
        let t = rows.row(u).transpose();
        z += &t * t.transpose();
        in_set[u] = true;
        chosen.push(u);
        values.push(shifted_trace(&z).ok_or(crate::Error::SingularSubmatrix)?);
    }
    Ok((chosen, values))
}

pub fn naive_a_optimal_greedy<T: Scalar>(
    basis: &SpectralBasis<T>,
    bandwidth: usize,
    mu: T,
    budget: usize,
) -> Result<Vec<usize>> {
    Ok(naive_greedy_trajectory(basis, bandwidth, mu, budget)?.0)
}
