use nalgebra::DMatrix;

use super::{exact_eigendecompose, BasisKind, SpectralBasis};
use crate::error::invalid;
use crate::graph::LaplacianView;
use crate::linalg;
use crate::{Result, Scalar};

/// Ideal low-pass projector `T = V_K V_K^T` for the basis it came from.
#[derive(Debug, Clone)]
pub struct LowPassFilter<T: Scalar> {
    pub matrix: DMatrix<T>,
    pub bandwidth: usize,
    pub source: BasisKind,
}

impl<T: Scalar> LowPassFilter<T> {
    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.n()).map(|i| self.matrix[(i, i)]).collect()
    }

    /// `G = T + mu I`.
    pub fn shifted(&self, mu: T) -> DMatrix<T> {
        let mut g = self.matrix.clone();
        for i in 0..self.n() {
            g[(i, i)] += mu;
        }
        g
    }

    /// Builds `S_1 ... S_J B S_J^T ... S_1^T` by applying the stored
    /// rotations to the 0/1 selector `B`, without forming the basis.
    /// Exact bases have no rotations and fall back to [`lp_filter`].
    pub fn from_rotations(basis: &SpectralBasis<T>, bandwidth: usize) -> Result<Self> {
        check_bandwidth(basis.n(), bandwidth)?;
        if basis.kind == BasisKind::Exact {
            return lp_filter(basis, bandwidth);
        }
        let n = basis.n();
        let mut x = DMatrix::zeros(n, n);
        for &idx in &basis.permutation[..bandwidth] {
            x[(idx, idx)] = T::one();
        }
        for rot in basis.rotations.iter().rev() {
            // S X S^T: S mixes rows, S^T mixes columns.
            rot.apply_left(&mut x);
            rot.apply_right_transpose(&mut x);
        }
        linalg::symmetrize(&mut x);
        Ok(Self {
            matrix: x,
            bandwidth,
            source: basis.kind,
        })
    }
}

fn check_bandwidth(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(invalid(format!("bandwidth {k} outside 1..={n}")));
    }
    Ok(())
}

/// `T = V_K V_K^T` from the first `bandwidth` basis columns.
pub fn lp_filter<T: Scalar>(basis: &SpectralBasis<T>, bandwidth: usize) -> Result<LowPassFilter<T>> {
    check_bandwidth(basis.n(), bandwidth)?;
    let vk = basis.band(bandwidth);
    let mut matrix = &vk * vk.transpose();
    linalg::symmetrize(&mut matrix);
    Ok(LowPassFilter {
        matrix,
        bandwidth,
        source: basis.kind,
    })
}

/// `||T - T_approx||_F / ||T||_F`.
pub fn fgft_error_against<T: Scalar>(exact: &LowPassFilter<T>, approx: &LowPassFilter<T>) -> T {
    linalg::frobenius(&(&exact.matrix - &approx.matrix)) / linalg::frobenius(&exact.matrix)
}

/// Relative Frobenius error of the filter built from `basis` against the
/// exact ideal filter of `l`.
pub fn fgft_error<T: Scalar>(
    l: &LaplacianView<T>,
    basis: &SpectralBasis<T>,
    bandwidth: usize,
) -> Result<T> {
    let exact = lp_filter(&exact_eigendecompose(l)?, bandwidth)?;
    Ok(fgft_error_against(&exact, &lp_filter(basis, bandwidth)?))
}
