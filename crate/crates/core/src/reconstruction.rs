//! Least-squares and filter-based biased reconstruction of bandlimited
//! signals, with closed-form mean squared errors for both.

use nalgebra::{DMatrix, DVector};

use crate::error::invalid;
use crate::linalg;
use crate::sampler::GfsState;
use crate::spectral::{BasisKind, LowPassFilter, SpectralBasis};
use crate::{Error, Result, Scalar};

/// Relative singular-value cut used for the rank check of `C V_K`.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Eigenvalues of `Psi` at or below this make the LS error unbounded.
pub const SIGMA_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct ObservedSamples<T: Scalar> {
    pub sample_set: Vec<usize>,
    pub values: DVector<T>,
    pub noise_variance: Option<T>,
}

impl<T: Scalar> ObservedSamples<T> {
    pub fn new(sample_set: Vec<usize>, values: DVector<T>) -> Result<Self> {
        if sample_set.len() != values.len() {
            return Err(Error::LengthMismatch(sample_set.len(), values.len()));
        }
        Ok(Self {
            sample_set,
            values,
            noise_variance: None,
        })
    }

    pub fn with_noise_variance(mut self, variance: T) -> Self {
        self.noise_variance = Some(variance);
        self
    }

    /// Noiseless samples of `signal` on `set`.
    pub fn of_signal(signal: &DVector<T>, set: &[usize]) -> Self {
        Self {
            sample_set: set.to_vec(),
            values: DVector::from_fn(set.len(), |r, _| signal[set[r]]),
            noise_variance: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReconMethod<T> {
    LeastSquares,
    GfsBiased(T),
}

#[derive(Debug, Clone)]
pub struct Reconstruction<T: Scalar> {
    pub signal: DVector<T>,
    pub method: ReconMethod<T>,
}

/// `beta = (1/K) * sum of the M smallest diagonal entries of T`, ties at the
/// cut going to the lower node index.
pub fn select_beta<T: Scalar>(filter: &LowPassFilter<T>, budget: usize) -> Result<T> {
    let n = filter.n();
    if budget == 0 || budget > n {
        return Err(invalid(format!("sample size {budget} outside 1..={n}")));
    }
    let diag = filter.diagonal();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        diag[a]
            .partial_cmp(&diag[b])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let sum = order[..budget]
        .iter()
        .fold(T::zero(), |acc, &i| acc + diag[i]);
    Ok(sum / T::of_usize(filter.bandwidth))
}

/// `x = V_K (C V_K)^+ y_S`.
pub fn ls_reconstruct<T: Scalar>(
    basis: &SpectralBasis<T>,
    bandwidth: usize,
    obs: &ObservedSamples<T>,
) -> Result<Reconstruction<T>> {
    let cv = basis.sampled_band(bandwidth, &obs.sample_set);
    let rank = linalg::numerical_rank(&cv, T::lit(RANK_TOLERANCE));
    if rank < bandwidth {
        return Err(Error::RankDeficient { rank, bandwidth });
    }
    let svd = cv.svd(true, true);
    let coeffs = svd
        .solve(&obs.values, T::default_epsilon())
        .map_err(|e| invalid(e.to_string()))?;
    Ok(Reconstruction {
        signal: basis.band(bandwidth) * coeffs,
        method: ReconMethod::LeastSquares,
    })
}

/// `x = T[:, S] (T_S + beta I)^-1 y_S` through a Cholesky solve.
pub fn gfs_reconstruct<T: Scalar>(
    filter: &LowPassFilter<T>,
    beta: T,
    obs: &ObservedSamples<T>,
) -> Result<Reconstruction<T>> {
    gfs_reconstruct_reusing(filter, beta, obs, None)
}

/// Like [`gfs_reconstruct`], but when `sampled = (state, mu)` covers the same
/// set and `beta == mu`, the sampler's maintained `G_S^-1` is applied instead
/// of a new factorization.
pub fn gfs_reconstruct_reusing<T: Scalar>(
    filter: &LowPassFilter<T>,
    beta: T,
    obs: &ObservedSamples<T>,
    sampled: Option<(&GfsState<T>, T)>,
) -> Result<Reconstruction<T>> {
    if beta <= T::zero() {
        return Err(invalid("reconstruction shift must be positive"));
    }
    let set = &obs.sample_set;
    let weights = match sampled {
        Some((state, mu)) if mu == beta && &state.sample_set == set => {
            &state.g_inverse * &obs.values
        }
        _ => {
            let mut h = linalg::principal(&filter.matrix, set);
            for i in 0..set.len() {
                h[(i, i)] += beta;
            }
            linalg::spd_solve(&h, &obs.values)?
        }
    };
    let all: Vec<usize> = (0..filter.n()).collect();
    let t_vs = linalg::submatrix(&filter.matrix, &all, set);
    Ok(Reconstruction {
        signal: t_vs * weights,
        method: ReconMethod::GfsBiased(beta),
    })
}

fn psi_eigen<T: Scalar>(
    basis: &SpectralBasis<T>,
    bandwidth: usize,
    set: &[usize],
) -> Result<(DVector<T>, DMatrix<T>)> {
    if basis.kind != BasisKind::Exact {
        return Err(invalid("closed-form MSE needs an exact basis"));
    }
    let (sigma, u) = linalg::symmetric_eigen(&basis.information_matrix(bandwidth, set))?;
    let rank = sigma.iter().filter(|&&s| s > T::lit(SIGMA_FLOOR)).count();
    if rank < bandwidth {
        return Err(Error::RankDeficient { rank, bandwidth });
    }
    Ok((sigma, u))
}

/// Bias and variance parts of the biased estimator's expected squared error.
pub fn theoretical_mse_gfs_parts<T: Scalar>(
    basis: &SpectralBasis<T>,
    bandwidth: usize,
    set: &[usize],
    beta: T,
    coeffs: &DVector<T>,
    noise_variance: T,
) -> Result<(T, T)> {
    if coeffs.len() != bandwidth {
        return Err(Error::LengthMismatch(coeffs.len(), bandwidth));
    }
    let (sigma, u) = psi_eigen(basis, bandwidth, set)?;
    let mut bias2 = T::zero();
    let mut var = T::zero();
    for i in 0..bandwidth {
        let proj = u.column(i).dot(coeffs);
        let shrink = T::one() / (T::one() + sigma[i] / beta);
        bias2 += shrink * shrink * proj * proj;
        var += sigma[i] / ((sigma[i] + beta) * (sigma[i] + beta));
    }
    Ok((bias2, noise_variance * var))
}

/// `sum (1 + s_i/beta)^-2 (u_i^T x_K)^2 + w^2 sum s_i / (s_i + beta)^2` with
/// `(s_i, u_i)` the eigenpairs of `Psi = (C V_K)^T C V_K`.
pub fn theoretical_mse_gfs<T: Scalar>(
    basis: &SpectralBasis<T>,
    bandwidth: usize,
    set: &[usize],
    beta: T,
    coeffs: &DVector<T>,
    noise_variance: T,
) -> Result<T> {
    let (b, v) = theoretical_mse_gfs_parts(basis, bandwidth, set, beta, coeffs, noise_variance)?;
    Ok(b + v)
}

/// `w^2 sum 1 / s_i`.
pub fn theoretical_mse_ls<T: Scalar>(
    basis: &SpectralBasis<T>,
    bandwidth: usize,
    set: &[usize],
    noise_variance: T,
) -> Result<T> {
    let (sigma, _) = psi_eigen(basis, bandwidth, set)?;
    Ok(noise_variance * sigma.iter().fold(T::zero(), |acc, &s| acc + T::one() / s))
}

/// Summed squared error `||estimate - truth||^2`.
pub fn empirical_mse<T: Scalar>(truth: &DVector<T>, estimate: &DVector<T>) -> Result<T> {
    if truth.len() != estimate.len() {
        return Err(Error::LengthMismatch(truth.len(), estimate.len()));
    }
    Ok((estimate - truth).norm_squared())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{edges_from, gen_sensor_graph, Graph};
    use crate::spectral::{exact_eigendecompose, lp_filter, truncated_jacobi};

    fn path() -> (SpectralBasis<f64>, LowPassFilter<f64>) {
        let g = Graph::new(2, edges_from(&[(0, 1, 1.0)])).unwrap();
        let b = exact_eigendecompose(&g.laplacian::<f64>()).unwrap();
        let t = lp_filter(&b, 1).unwrap();
        (b, t)
    }

    #[test]
    fn beta_on_path() {
        let (_, t) = path();
        assert!((select_beta(&t, 1).unwrap() - 0.5).abs() < 1e-15);
        assert!(select_beta(&t, 0).is_err());
        assert!(select_beta(&t, 3).is_err());
    }

    #[test]
    fn beta_of_identity_filter() {
        let g = gen_sensor_graph(10, 0.6, 1).unwrap();
        let b = exact_eigendecompose(&g.laplacian::<f64>()).unwrap();
        let t = lp_filter(&b, 10).unwrap();
        assert!((select_beta(&t, 10).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ls_on_path_recovers_dc() {
        let (b, _) = path();
        let obs = ObservedSamples::new(vec![0], DVector::from_element(1, 1.0)).unwrap();
        let r = ls_reconstruct(&b, 1, &obs).unwrap();
        assert!((r.signal[0] - 1.0).abs() < 1e-14 && (r.signal[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ls_needs_enough_samples() {
        let g = gen_sensor_graph(20, 0.5, 3).unwrap();
        let b = exact_eigendecompose(&g.laplacian::<f64>()).unwrap();
        let obs = ObservedSamples::new(vec![1, 2, 3], DVector::zeros(3)).unwrap();
        assert!(matches!(
            ls_reconstruct(&b, 5, &obs),
            Err(Error::RankDeficient { bandwidth: 5, .. })
        ));
    }

    #[test]
    fn gfs_on_path() {
        let (b, t) = path();
        let obs = ObservedSamples::new(vec![0], DVector::from_element(1, 1.0)).unwrap();
        let r = gfs_reconstruct(&t, 0.5, &obs).unwrap();
        assert!((r.signal[0] - 0.5).abs() < 1e-14 && (r.signal[1] - 0.5).abs() < 1e-14);
        let truth = DVector::from_element(2, 1.0);
        let err = empirical_mse(&truth, &r.signal).unwrap();
        assert!((err - 0.5).abs() < 1e-14);
        let coeffs = b.band(1).transpose() * &truth;
        let mse = theoretical_mse_gfs(&b, 1, &[0], 0.5, &coeffs, 0.0).unwrap();
        assert!((mse - 0.5).abs() < 1e-14);
        assert!(gfs_reconstruct(&t, 0.0, &obs).is_err());
    }

    #[test]
    fn ls_closed_forms_on_small_cases() {
        let (b, _) = path();
        assert!((theoretical_mse_ls(&b, 1, &[0], 0.3).unwrap() - 0.6).abs() < 1e-14);
        let g = gen_sensor_graph(16, 0.5, 2).unwrap();
        let b = exact_eigendecompose(&g.laplacian::<f64>()).unwrap();
        let all: Vec<usize> = (0..16).collect();
        assert!((theoretical_mse_ls(&b, 4, &all, 0.5).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn large_beta_shrinks_to_zero() {
        let g = gen_sensor_graph(16, 0.5, 2).unwrap();
        let b = exact_eigendecompose(&g.laplacian::<f64>()).unwrap();
        let coeffs = DVector::from_vec(vec![1.0, -0.5, 2.0]);
        let set = [0, 3, 5, 7, 9];
        let (bias2, var) = theoretical_mse_gfs_parts(&b, 3, &set, 1e12, &coeffs, 1.0).unwrap();
        assert!((bias2 - coeffs.norm_squared()).abs() < 1e-9);
        assert!(var < 1e-11);
    }

    #[test]
    fn closed_forms_need_exact_basis() {
        let g = gen_sensor_graph(16, 0.5, 2).unwrap();
        let fgft = truncated_jacobi(&g.laplacian::<f64>(), 30);
        assert!(theoretical_mse_ls(&fgft, 2, &[0, 1, 2], 1.0).is_err());
    }

    #[test]
    fn mse_metric() {
        let z = DVector::<f64>::zeros(2);
        let v = DVector::from_vec(vec![1.0, 1.0]);
        assert_eq!(empirical_mse(&v, &v).unwrap(), 0.0);
        assert_eq!(empirical_mse(&z, &v).unwrap(), 2.0);
        assert_eq!(empirical_mse(&z, &(&v * 3.0)).unwrap(), 9.0 * 2.0);
        assert!(empirical_mse(&z, &DVector::zeros(3)).is_err());
    }

    #[test]
    fn reuses_sampler_inverse() {
        let g = gen_sensor_graph(30, 0.4, 4).unwrap();
        let b = exact_eigendecompose(&g.laplacian::<f64>()).unwrap();
        let t = lp_filter(&b, 4).unwrap();
        let mu = 0.02;
        let state = crate::sampler::gfs_sample(&t, mu, 8).unwrap();
        let y = DVector::from_fn(8, |i, _| (i as f64).sin());
        let obs = ObservedSamples::new(state.sample_set.clone(), y).unwrap();
        let fresh = gfs_reconstruct(&t, mu, &obs).unwrap();
        let reused = gfs_reconstruct_reusing(&t, mu, &obs, Some((&state, mu))).unwrap();
        assert!((fresh.signal - reused.signal).amax() < 1e-9);
    }
}
