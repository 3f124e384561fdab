//! GFS: greedy minimization of `tr((T_S + mu I)^-1)` with the inverse of
//! `G_S` maintained through block (Schur complement) updates.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::invalid;
use crate::linalg;
use crate::spectral::LowPassFilter;
use crate::{Error, Result, Scalar};

/// Schur complements at or below this are treated as rank-deficient
/// extensions and the candidate is skipped.
pub const SCHUR_FLOOR: f64 = 1e-14;

/// Accepted nodes between rebuilds of the maintained inverse.
pub const REFRESH_INTERVAL: usize = 64;

/// Candidates per greedy scan above which the scan runs on the rayon pool.
const PARALLEL_SCAN_MIN: usize = 512;

/// Sample set with the inverse of `G_S = T_S + mu I` kept alongside.
#[derive(Debug, Clone)]
pub struct GfsState<T: Scalar> {
    pub sample_set: Vec<usize>,
    pub g_inverse: DMatrix<T>,
    pub objective: T,
}

impl<T: Scalar> GfsState<T> {
    pub fn empty() -> Self {
        Self {
            sample_set: Vec::new(),
            g_inverse: DMatrix::zeros(0, 0),
            objective: T::zero(),
        }
    }

    /// Build the state for an explicit set by direct inversion.
    pub fn from_set(g: &DMatrix<T>, set: Vec<usize>) -> Result<Self> {
        let g_inverse = linalg::spd_inverse(&linalg::principal(g, &set))?;
        let objective = linalg::trace(&g_inverse);
        Ok(Self {
            sample_set: set,
            g_inverse,
            objective,
        })
    }

    pub fn len(&self) -> usize {
        self.sample_set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sample_set.is_empty()
    }

    /// `||G_S G_S^-1 - I||_F` against the full shifted filter `g`.
    pub fn inverse_residual(&self, g: &DMatrix<T>) -> T {
        linalg::identity_residual(&linalg::principal(g, &self.sample_set), &self.g_inverse)
    }

    /// Recompute the maintained inverse from scratch.
    pub fn refresh(&mut self, g: &DMatrix<T>) -> Result<()> {
        self.g_inverse = linalg::spd_inverse(&linalg::principal(g, &self.sample_set))?;
        self.objective = linalg::trace(&self.g_inverse);
        Ok(())
    }

    pub(crate) fn debug_check(&self, g: &DMatrix<T>) {
        if cfg!(debug_assertions) && !self.is_empty() {
            let res = self.inverse_residual(g).as_f64();
            // 1e-6 |S| in double precision, widened for coarser scalars
            let widen = (T::default_epsilon().as_f64() / f64::EPSILON).sqrt().max(1.0);
            debug_assert!(
                res <= 1e-6 * widen * self.len() as f64,
                "maintained inverse drifted: residual {res:e} for |S| = {}",
                self.len()
            );
        }
    }
}

/// Inverse of `[[G_S, g], [g^T, g_ii]]` from `G_S^-1`.
pub fn block_inverse_extend<T: Scalar>(
    g_inv: &DMatrix<T>,
    g_col: &DVector<T>,
    g_ii: T,
) -> Result<DMatrix<T>> {
    let s = g_inv.nrows();
    if g_col.len() != s {
        return Err(Error::LengthMismatch(g_col.len(), s));
    }
    let w = g_inv * g_col;
    let h = g_ii - g_col.dot(&w);
    if h <= T::lit(SCHUR_FLOOR) {
        return Err(Error::NonPositiveSchur(h.as_f64()));
    }
    let h_inv = T::one() / h;
    let mut out = DMatrix::zeros(s + 1, s + 1);
    for r in 0..s {
        for c in 0..s {
            out[(r, c)] = g_inv[(r, c)] + w[r] * w[c] * h_inv;
        }
        out[(r, s)] = -w[r] * h_inv;
        out[(s, r)] = -w[r] * h_inv;
    }
    out[(s, s)] = h_inv;
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct GfsOptions {
    /// Nodes allowed into the sample set; `None` means every node.
    pub candidates: Option<Vec<bool>>,
    pub refresh_interval: usize,
}

impl Default for GfsOptions {
    fn default() -> Self {
        Self {
            candidates: None,
            refresh_interval: REFRESH_INTERVAL,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GfsRun<T: Scalar> {
    pub state: GfsState<T>,
    /// Objective after each accepted node.
    pub objectives: Vec<T>,
    /// Candidates rejected for a non-positive Schur complement, summed over
    /// all scans.
    pub skipped: usize,
}

/// Greedy GFS sampling of `budget` nodes.
pub fn gfs_sample<T: Scalar>(filter: &LowPassFilter<T>, mu: T, budget: usize) -> Result<GfsState<T>> {
    Ok(gfs_sample_with(filter, mu, budget, &GfsOptions::default())?.state)
}

/// Score of adding `i`: `tr(G_S^-1) + (1 + ||G_S^-1 g_i||^2) / h`, which is
/// the trace of the block-extended inverse without forming it.
fn candidate_score<T: Scalar>(g: &DMatrix<T>, state: &GfsState<T>, i: usize) -> Option<T> {
    let s = &state.sample_set;
    let g_col = linalg::column_part(g, s, i);
    let w = &state.g_inverse * &g_col;
    let h = g[(i, i)] - g_col.dot(&w);
    if h <= T::lit(SCHUR_FLOOR) {
        return None;
    }
    Some(state.objective + (T::one() + w.norm_squared()) / h)
}

pub fn gfs_sample_with<T: Scalar>(
    filter: &LowPassFilter<T>,
    mu: T,
    budget: usize,
    opts: &GfsOptions,
) -> Result<GfsRun<T>> {
    let n = filter.n();
    if !(mu > T::zero() && mu < T::one()) {
        return Err(Error::InvalidShift(mu.as_f64()));
    }
    if let Some(mask) = &opts.candidates {
        if mask.len() != n {
            return Err(Error::LengthMismatch(mask.len(), n));
        }
    }
    let allowed = |i: usize| opts.candidates.as_ref().is_none_or(|m| m[i]);
    let pool = (0..n).filter(|&i| allowed(i)).count();
    if budget == 0 || budget > pool {
        return Err(invalid(format!(
            "budget {budget} outside 1..={pool} selectable nodes"
        )));
    }

    let g = filter.shifted(mu);
    let tol = linalg::tie_tolerance(n, mu);
    let mut state = GfsState::empty();
    let mut in_set = vec![false; n];
    let mut objectives = Vec::with_capacity(budget);
    let mut skipped = 0;

    while state.len() < budget {
        let candidates: Vec<usize> = (0..n).filter(|&i| allowed(i) && !in_set[i]).collect();
        let score = |&i: &usize| candidate_score(&g, &state, i).map(|s| (i, s));
        let scored: Vec<(usize, T)> = if candidates.len() >= PARALLEL_SCAN_MIN {
            candidates.par_iter().filter_map(score).collect()
        } else {
            candidates.iter().filter_map(score).collect()
        };
        skipped += candidates.len() - scored.len();
        let u = linalg::argmin_with_ties(&scored, tol).ok_or(Error::SingularSubmatrix)?;

        let g_col = linalg::column_part(&g, &state.sample_set, u);
        state.g_inverse = block_inverse_extend(&state.g_inverse, &g_col, g[(u, u)])?;
        state.sample_set.push(u);
        in_set[u] = true;
        if opts.refresh_interval > 0 && state.len() % opts.refresh_interval == 0 {
            state.refresh(&g)?;
        } else {
            state.objective = linalg::trace(&state.g_inverse);
        }
        state.debug_check(&g);
        objectives.push(state.objective);
    }

    Ok(GfsRun {
        state,
        objectives,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{edges_from, gen_sensor_graph, Graph};
    use crate::spectral::{exact_eigendecompose, lp_filter};

    fn assert_close(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) {
        assert!(linalg::frobenius(&(a - b)) <= tol, "{a} vs {b}");
    }

    #[test]
    fn extend_two_by_two() {
        let inv = DMatrix::from_element(1, 1, 0.5);
        let out = block_inverse_extend(&inv, &DVector::from_element(1, 1.0), 2.0).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[2.0, -1.0, -1.0, 2.0]) / 3.0;
        assert_close(&out, &expected, 1e-15);
    }

    #[test]
    fn extend_with_zero_coupling_is_block_diagonal() {
        let inv = DMatrix::from_row_slice(2, 2, &[0.6, 0.1, 0.1, 0.3]);
        let out = block_inverse_extend(&inv, &DVector::zeros(2), 4.0).unwrap();
        let mut expected = DMatrix::zeros(3, 3);
        expected.view_mut((0, 0), (2, 2)).copy_from(&inv);
        expected[(2, 2)] = 0.25;
        assert_close(&out, &expected, 0.0);
    }

    #[test]
    fn extend_rejects_singular_extension() {
        // [[1, 1], [1, 1]] is singular
        let inv = DMatrix::from_element(1, 1, 1.0);
        assert!(matches!(
            block_inverse_extend(&inv, &DVector::from_element(1, 1.0), 1.0),
            Err(Error::NonPositiveSchur(_))
        ));
    }

    #[test]
    fn path_graph_tie_goes_to_lowest_index() {
        let g = Graph::new(2, edges_from(&[(0, 1, 1.0)])).unwrap();
        let b = exact_eigendecompose(&g.laplacian::<f64>()).unwrap();
        let t = lp_filter(&b, 1).unwrap();
        let s = gfs_sample(&t, 1.0 / 99.0, 1).unwrap();
        assert_eq!(s.sample_set, vec![0]);
        assert!((s.objective - 1.0 / (0.5 + 1.0 / 99.0)).abs() < 1e-12);
    }

    #[test]
    fn trace_and_inverse_along_the_run() {
        let g = gen_sensor_graph(60, 0.3, 21).unwrap();
        let b = exact_eigendecompose(&g.laplacian::<f64>()).unwrap();
        let t = lp_filter(&b, 8).unwrap();
        let mu = 1.0 / 99.0;
        let run = gfs_sample_with(&t, mu, 20, &GfsOptions::default()).unwrap();
        // tr(G_S^-1) grows with S; the augmented objective (K - M)/mu + tr falls
        assert!(run.objectives.windows(2).all(|w| w[1] > w[0]));
        let augmented: Vec<f64> = (run.objectives.iter().enumerate())
            .map(|(m, v)| (8.0 - (m + 1) as f64) / mu + v)
            .collect();
        assert!(augmented.windows(2).all(|w| w[1] <= w[0] + 1e-9));
        let gm = t.shifted(mu);
        assert!(run.state.inverse_residual(&gm) <= 1e-6 * 20.0);
        let direct = GfsState::from_set(&gm, run.state.sample_set.clone()).unwrap();
        assert!((direct.objective - run.state.objective).abs() < 1e-9 * direct.objective);
        let mut sorted = run.state.sample_set.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 20);
    }

    #[test]
    fn candidate_mask_is_respected() {
        let g = gen_sensor_graph(40, 0.35, 3).unwrap();
        let b = exact_eigendecompose(&g.laplacian::<f64>()).unwrap();
        let t = lp_filter(&b, 5).unwrap();
        let mask: Vec<bool> = (0..40).map(|i| i % 3 != 0).collect();
        let opts = GfsOptions {
            candidates: Some(mask.clone()),
            ..GfsOptions::default()
        };
        let run = gfs_sample_with(&t, 0.01, 12, &opts).unwrap();
        assert!(run.state.sample_set.iter().all(|&i| mask[i]));
        let opts = GfsOptions {
            candidates: Some(vec![false; 40]),
            ..GfsOptions::default()
        };
        assert!(gfs_sample_with(&t, 0.01, 1, &opts).is_err());
    }

    #[test]
    fn frequent_refresh_gives_same_set() {
        let g = gen_sensor_graph(50, 0.3, 8).unwrap();
        let b = exact_eigendecompose(&g.laplacian::<f64>()).unwrap();
        let t = lp_filter(&b, 6).unwrap();
        let a = gfs_sample(&t, 0.05, 15).unwrap();
        let opts = GfsOptions {
            refresh_interval: 1,
            ..GfsOptions::default()
        };
        let r = gfs_sample_with(&t, 0.05, 15, &opts).unwrap();
        assert_eq!(a.sample_set, r.state.sample_set);
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = gen_sensor_graph(10, 0.6, 3).unwrap();
        let b = exact_eigendecompose(&g.laplacian::<f64>()).unwrap();
        let t = lp_filter(&b, 3).unwrap();
        assert!(gfs_sample(&t, 0.0, 3).is_err());
        assert!(gfs_sample(&t, 0.1, 0).is_err());
        assert!(gfs_sample(&t, 0.1, 11).is_err());
        assert_eq!(gfs_sample(&t, 0.1, 10).unwrap().len(), 10);
    }

    #[test]
    fn single_precision_run() {
        let g = gen_sensor_graph(30, 0.4, 5).unwrap();
        let b = exact_eigendecompose(&g.laplacian::<f32>()).unwrap();
        let t = lp_filter(&b, 4).unwrap();
        let s = gfs_sample(&t, 0.05f32, 8).unwrap();
        assert_eq!(s.len(), 8);
        assert!(s.objective > 0.0);
    }
}
