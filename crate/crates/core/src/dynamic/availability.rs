use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::invalid;
use crate::Result;

/// Per-node on/off availability with symmetric crossover probability `eps`.
///
/// At `t = 0` exactly `round(p0 * n)` nodes are available, chosen uniformly.
/// Each step flips every node independently with probability `eps`. The
/// draw at step `t` depends only on `(seed, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AvailabilityProcess {
    pub p0: f64,
    pub eps: f64,
    pub seed: u64,
    pub t: u64,
    pub current: Vec<bool>,
}

fn stream(seed: u64, t: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(t);
    rng
}

impl AvailabilityProcess {
    pub fn new(n: usize, p0: f64, eps: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p0) || !(0.0..=1.0).contains(&eps) {
            return Err(invalid(format!(
                "availability probabilities must lie in [0, 1], got p0={p0}, eps={eps}"
            )));
        }
        let count = (p0 * n as f64).round() as usize;
        let mut current = vec![false; n];
        for i in rand::seq::index::sample(&mut stream(seed, 0), n, count) {
            current[i] = true;
        }
        Ok(Self {
            p0,
            eps,
            seed,
            t: 0,
            current,
        })
    }

    /// Process with an explicit mask at time `t` (replay).
    pub fn from_mask(current: Vec<bool>, p0: f64, eps: f64, seed: u64, t: u64) -> Self {
        Self {
            p0,
            eps,
            seed,
            t,
            current,
        }
    }

    pub fn n(&self) -> usize {
        self.current.len()
    }

    pub fn available(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.current[i]).collect()
    }

    pub fn available_count(&self) -> usize {
        self.current.iter().filter(|&&a| a).count()
    }

    /// The process one step later.
    pub fn evolve(&self) -> Self {
        let mut next = self.clone();
        next.advance();
        next
    }

    pub fn advance(&mut self) {
        self.t += 1;
        let mut rng = stream(self.seed, self.t);
        for state in self.current.iter_mut() {
            // one draw per node keeps the stream aligned regardless of eps
            let u: f64 = rng.random();
            if u < self.eps {
                *state = !*state;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_count_matches_p0() {
        let p = AvailabilityProcess::new(1000, 0.8, 0.02, 1).unwrap();
        assert_eq!(p.available_count(), 800);
        assert!(AvailabilityProcess::new(10, 1.5, 0.0, 1).is_err());
        assert!(AvailabilityProcess::new(10, 0.5, -0.1, 1).is_err());
    }

    #[test]
    fn no_crossover_keeps_mask() {
        let p = AvailabilityProcess::new(200, 0.7, 0.0, 3).unwrap();
        assert_eq!(p.evolve().current, p.current);
        assert_eq!(p.evolve().t, 1);
    }

    #[test]
    fn certain_crossover_complements() {
        let p = AvailabilityProcess::new(200, 0.7, 1.0, 3).unwrap();
        let q = p.evolve();
        assert!(p.current.iter().zip(&q.current).all(|(a, b)| a != b));
    }

    #[test]
    fn step_depends_only_on_seed_and_time() {
        let p = AvailabilityProcess::new(300, 0.8, 0.05, 9).unwrap();
        let two = p.evolve().evolve();
        let mut manual = p.clone();
        manual.advance();
        manual.advance();
        assert_eq!(two, manual);
    }

    #[test]
    fn flip_rate_matches_eps() {
        let (n, eps, steps) = (1000usize, 0.02, 10_000usize);
        let mut p = AvailabilityProcess::new(n, 0.8, eps, 17).unwrap();
        let mut flips = 0usize;
        for _ in 0..steps {
            let before = p.current.clone();
            p.advance();
            flips += before.iter().zip(&p.current).filter(|(a, b)| a != b).count();
        }
        let trials = (n * steps) as f64;
        let mean = trials * eps;
        let sd = (trials * eps * (1.0 - eps)).sqrt();
        assert!((flips as f64 - mean).abs() <= 5.0 * sd, "{flips} vs {mean}");
        // per step mean 20
        assert!(((flips as f64 / steps as f64) - 20.0).abs() <= 5.0 * sd / steps as f64);
    }
}
