//! GFS-NE: repair a sample set after availability changes by exchanging
//! nodes, keeping `G_S^-1` current through two rank-one updates.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};

use crate::error::invalid;
use crate::linalg;
use crate::sampler::{GfsState, REFRESH_INTERVAL};
use crate::{Error, Result, Scalar};

/// Sherman–Morrison denominators at or below this magnitude are degenerate.
pub const DENOMINATOR_FLOOR: f64 = 1e-12;

/// Partition of the current sample set against the availability mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeSets {
    /// `S ∩ A`: selected and still available.
    pub sa: Vec<usize>,
    /// `S \ A`: selected but gone; must be replaced.
    pub su: Vec<usize>,
    /// `A \ S`: replacement candidates.
    pub ua: Vec<usize>,
    /// Available, unselected nodes after the replacements (phase two pool).
    pub h_set: Vec<usize>,
}

impl ExchangeSets {
    pub fn new(sample_set: &[usize], mask: &[bool]) -> Self {
        let selected: BTreeSet<usize> = sample_set.iter().copied().collect();
        let (sa, su) = selected.iter().partition(|&&j| mask[j]);
        let ua = (0..mask.len())
            .filter(|i| mask[*i] && !selected.contains(i))
            .collect();
        Self {
            sa,
            su,
            ua,
            h_set: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExchangeConfig<T: Scalar> {
    /// Cap on accepted improvement swaps in phase two.
    pub k0: usize,
    /// Shift used to build `G`; sets the tie tolerance.
    pub mu: T,
}

#[derive(Debug, Clone)]
pub struct ExchangeRun<T: Scalar> {
    pub state: GfsState<T>,
    pub sets: ExchangeSets,
    /// `(removed, inserted)` in phase one order.
    pub replaced: Vec<(usize, usize)>,
    pub phase1_objective: T,
    /// Objective after each accepted phase-two swap.
    pub swap_objectives: Vec<T>,
    /// Candidates scored by direct solve because an update degenerated.
    pub fallbacks: usize,
}

impl<T: Scalar> ExchangeRun<T> {
    pub fn swaps(&self) -> usize {
        self.swap_objectives.len()
    }
}

struct Pieces<T: Scalar> {
    a: DVector<T>,
    b: DVector<T>,
    f: DVector<T>,
    r: DVector<T>,
    d1: T,
    d2: T,
}

// G~ = G_S + e_i p^T + q e_i^T with p = G[S~, k] - G[S, j] and
// q = p - (G_kk - G_jj) e_i. With A = G_S^-1, a = A e_i, b = A p:
//   F^-1  = A - a b^T / d1,                d1 = 1 + p.a
//   G~^-1 = F^-1 - f r^T / d2,             d2 = 1 + f_i
// where f = F^-1 q and r^T = e_i^T F^-1.
fn pieces<T: Scalar>(
    g_inv: &DMatrix<T>,
    set: &[usize],
    pos: usize,
    k: usize,
    g: &DMatrix<T>,
) -> std::result::Result<Pieces<T>, T> {
    let j = set[pos];
    let mut p = DVector::from_fn(set.len(), |r, _| g[(set[r], k)] - g[(set[r], j)]);
    let delta = g[(k, k)] - g[(j, j)];
    p[pos] = delta;
    let a = g_inv.column(pos).into_owned();
    let b = g_inv * &p;
    let d1 = T::one() + p.dot(&a);
    let floor = T::lit(DENOMINATOR_FLOOR);
    if d1.abs() <= floor {
        return Err(d1);
    }
    // A q = b - delta a
    let c = &b - &a * delta;
    // b.q = b.p - delta b_i
    let f = &c - &a * ((b.dot(&p) - delta * b[pos]) / d1);
    let r = &a - &b * (a[pos] / d1);
    let d2 = T::one() + f[pos];
    if d2.abs() <= floor {
        return Err(d2);
    }
    Ok(Pieces { a, b, f, r, d1, d2 })
}

/// `tr(G_S~^-1)` for `S~ = S` with `S[pos]` replaced by `k`, in `O(M^2)`.
/// `None` when an update denominator is degenerate.
pub fn exchange_trace<T: Scalar>(
    g_inv: &DMatrix<T>,
    set: &[usize],
    pos: usize,
    k: usize,
    g: &DMatrix<T>,
) -> Option<T> {
    let pc = pieces(g_inv, set, pos, k, g).ok()?;
    Some(linalg::trace(g_inv) - pc.a.dot(&pc.b) / pc.d1 - pc.r.dot(&pc.f) / pc.d2)
}

/// Inverse of `G_S~` where `S~` replaces node `j` (in `set`) by `k`, keeping
/// `k` at `j`'s position.
pub fn sm_rank1_exchange<T: Scalar>(
    g_inv: &DMatrix<T>,
    set: &[usize],
    j: usize,
    k: usize,
    g: &DMatrix<T>,
) -> Result<DMatrix<T>> {
    let pos = set
        .iter()
        .position(|&s| s == j)
        .ok_or_else(|| invalid(format!("node {j} is not in the sample set")))?;
    if set.contains(&k) {
        return Err(invalid(format!("node {k} is already in the sample set")));
    }
    let pc = pieces(g_inv, set, pos, k, g).map_err(|d| Error::DegenerateUpdate(d.as_f64()))?;
    let mut out = g_inv - &pc.a * (pc.b.transpose() / pc.d1) - &pc.f * (pc.r.transpose() / pc.d2);
    linalg::symmetrize(&mut out);
    Ok(out)
}

/// Working copy of the sample set with its maintained inverse.
struct Exchanger<'a, T: Scalar> {
    g: &'a DMatrix<T>,
    set: Vec<usize>,
    inv: DMatrix<T>,
    trace: T,
    updates: usize,
    fallbacks: usize,
}

impl<T: Scalar> Exchanger<'_, T> {
    fn swapped(&self, pos: usize, k: usize) -> Vec<usize> {
        let mut s = self.set.clone();
        s[pos] = k;
        s
    }

    fn score(&mut self, pos: usize, k: usize) -> Result<T> {
        match exchange_trace(&self.inv, &self.set, pos, k, self.g) {
            Some(v) => Ok(v),
            None => {
                self.fallbacks += 1;
                let inv = linalg::spd_inverse(&linalg::principal(self.g, &self.swapped(pos, k)))?;
                Ok(linalg::trace(&inv))
            }
        }
    }

    fn apply(&mut self, pos: usize, k: usize) -> Result<()> {
        let j = self.set[pos];
        let next = match sm_rank1_exchange(&self.inv, &self.set, j, k, self.g) {
            Ok(m) => m,
            Err(Error::DegenerateUpdate(_)) => {
                linalg::spd_inverse(&linalg::principal(self.g, &self.swapped(pos, k)))?
            }
            Err(e) => return Err(e),
        };
        self.set[pos] = k;
        self.inv = next;
        self.updates += 1;
        if self.updates.is_multiple_of(REFRESH_INTERVAL) {
            self.inv = linalg::spd_inverse(&linalg::principal(self.g, &self.set))?;
        }
        self.trace = linalg::trace(&self.inv);
        Ok(())
    }

    fn into_state(self) -> GfsState<T> {
        let state = GfsState {
            sample_set: self.set,
            g_inverse: self.inv,
            objective: self.trace,
        };
        state.debug_check(self.g);
        state
    }
}

/// One GFS-NE step: replace every unavailable node of `state` by the best
/// available candidate, then try first-improvement swaps (at most `k0`
/// accepted) over the remaining available nodes.
///
/// Nothing changes when all selected nodes are still available. Positions in
/// the sample set are stable: an inserted node takes its predecessor's slot.
pub fn gfs_ne<T: Scalar>(
    state: &GfsState<T>,
    g: &DMatrix<T>,
    mask: &[bool],
    cfg: &ExchangeConfig<T>,
) -> Result<ExchangeRun<T>> {
    let n = g.nrows();
    if mask.len() != n {
        return Err(Error::LengthMismatch(mask.len(), n));
    }
    if state.sample_set.iter().any(|&j| j >= n) {
        return Err(invalid("sample set refers to nodes outside the graph"));
    }
    let available = mask.iter().filter(|&&a| a).count();
    if available < state.len() {
        return Err(Error::InfeasibleAvailability {
            available,
            required: state.len(),
        });
    }
    if !(cfg.mu > T::zero()) {
        return Err(invalid("mu must be positive"));
    }
    let mut sets = ExchangeSets::new(&state.sample_set, mask);
    if sets.su.is_empty() {
        return Ok(ExchangeRun {
            state: state.clone(),
            sets,
            replaced: Vec::new(),
            phase1_objective: state.objective,
            swap_objectives: Vec::new(),
            fallbacks: 0,
        });
    }
    let tol = linalg::tie_tolerance(n, cfg.mu);
    let mut ex = Exchanger {
        g,
        set: state.sample_set.clone(),
        inv: state.g_inverse.clone(),
        trace: state.objective,
        updates: 0,
        fallbacks: 0,
    };

    // phase one: forced replacements, lowest node index first
    let mut pool: Vec<usize> = sets.ua.clone();
    let mut replaced = Vec::with_capacity(sets.su.len());
    for &j in &sets.su {
        let pos = ex.set.iter().position(|&s| s == j).expect("unavailable node is selected");
        let mut scores = Vec::with_capacity(pool.len());
        for &k in &pool {
            scores.push((k, ex.score(pos, k)?));
        }
        let best = linalg::argmin_with_ties(&scores, tol).ok_or(Error::SingularSubmatrix)?;
        ex.apply(pos, best)?;
        pool.retain(|&k| k != best);
        replaced.push((j, best));
    }
    let phase1_objective = ex.trace;

    // phase two: first improvement per frozen position over a frozen pool
    sets.h_set = pool;
    let mut swap_objectives = Vec::new();
    'positions: for pos in 0..ex.set.len() {
        for &k in &sets.h_set {
            if swap_objectives.len() >= cfg.k0 {
                break 'positions;
            }
            if ex.set.contains(&k) {
                continue;
            }
            let candidate = ex.score(pos, k)?;
            if candidate < ex.trace - tol {
                ex.apply(pos, k)?;
                swap_objectives.push(ex.trace);
            }
        }
    }

    let fallbacks = ex.fallbacks;
    Ok(ExchangeRun {
        state: ex.into_state(),
        sets,
        replaced,
        phase1_objective,
        swap_objectives,
        fallbacks,
    })
}
