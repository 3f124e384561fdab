//! Screening of initial availability sets by their cutoff frequency
//! `Omega_k(S) = sigma_min(L^k[:, S^c])^(1/k)`.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::invalid;
use crate::graph::LaplacianView;
use crate::{Result, Scalar};

/// `L^k` of the Laplacian scaled into `[0, 1]`, reused across many sets.
#[derive(Debug, Clone)]
pub struct CutoffOracle<T: Scalar> {
    power: DMatrix<T>,
    scale: T,
    k: usize,
}

impl<T: Scalar> CutoffOracle<T> {
    pub fn new(laplacian: &LaplacianView<T>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(invalid("cutoff order k must be at least 1"));
        }
        let l = &laplacian.matrix;
        // Gershgorin bound on the spectral radius keeps L^k from overflowing
        let scale = (0..l.nrows())
            .map(|r| l.row(r).iter().fold(T::zero(), |acc, &v| acc + v.abs()))
            .fold(T::zero(), |a, b| if b > a { b } else { a });
        let scale = if scale > T::zero() { scale } else { T::one() };
        let base = l / scale;
        let mut power = base.clone();
        for _ in 1..k {
            power = &power * &base;
        }
        Ok(Self { power, scale, k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `Omega_k` for the sample set `set`; `+inf` when `set` covers every node.
    ///
    /// Values near `scale * eps^(1/k)` are at the floating point floor and
    /// cannot be told apart from zero.
    pub fn cutoff(&self, set: &[usize]) -> T {
        let n = self.power.nrows();
        let mut inside = vec![false; n];
        for &s in set {
            inside[s] = true;
        }
        let rest: Vec<usize> = (0..n).filter(|&i| !inside[i]).collect();
        if rest.is_empty() {
            return T::lit(f64::INFINITY);
        }
        let block = self.power.select_columns(&rest);
        let smin = block
            .singular_values()
            .iter()
            .fold(T::lit(f64::INFINITY), |a, &b| if b < a { b } else { a });
        let root = T::lit(smin.as_f64().max(0.0).powf(1.0 / self.k as f64));
        self.scale * root
    }

    /// [`screen_initial_set`] with the matrix power already built.
    pub fn screen(&self, mask: &[bool], draws: usize, rank: usize, seed: u64) -> Result<ScreenOutcome<T>> {
        let n = self.power.nrows();
        if mask.len() != n {
            return Err(crate::Error::LengthMismatch(mask.len(), n));
        }
        if rank == 0 || rank > draws {
            return Err(invalid(format!("rank {rank} must lie in 1..={draws}")));
        }
        let available: Vec<usize> = (0..n).filter(|&i| mask[i]).collect();
        if available.len() == n {
            return Ok(ScreenOutcome::Good);
        }
        let value = self.cutoff(&available);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut calibration: Vec<T> = (0..draws)
            .map(|_| {
                let set = rand::seq::index::sample(&mut rng, n, available.len()).into_vec();
                self.cutoff(&set)
            })
            .collect();
        calibration.sort_by(|a, b| a.partial_cmp(b).expect("cutoffs are not NaN"));
        let threshold = calibration[rank - 1];
        Ok(if value < threshold {
            ScreenOutcome::Bad { threshold, value }
        } else {
            ScreenOutcome::Good
        })
    }
}

/// Cutoff frequency of `set` for order `k`.
pub fn cutoff_frequency<T: Scalar>(laplacian: &LaplacianView<T>, set: &[usize], k: usize) -> Result<T> {
    if let Some(&bad) = set.iter().find(|&&s| s >= laplacian.n()) {
        return Err(invalid(format!("node {bad} is outside the graph")));
    }
    Ok(CutoffOracle::new(laplacian, k)?.cutoff(set))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScreenOutcome<T> {
    Good,
    Bad { threshold: T, value: T },
}

/// Compare the available set's cutoff against the `rank`-th smallest cutoff
/// of `draws` uniform random sets of the same size. Smaller is bad.
pub fn screen_initial_set<T: Scalar>(
    laplacian: &LaplacianView<T>,
    mask: &[bool],
    k: usize,
    draws: usize,
    rank: usize,
    seed: u64,
) -> Result<ScreenOutcome<T>> {
    let n = laplacian.n();
    if mask.len() != n {
        return Err(crate::Error::LengthMismatch(mask.len(), n));
    }
    if rank == 0 || rank > draws {
        return Err(invalid(format!("rank {rank} must lie in 1..={draws}")));
    }
    CutoffOracle::new(laplacian, k)?.screen(mask, draws, rank, seed)
}
