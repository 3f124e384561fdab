use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::invalid;
use crate::Result;

/// `m` distinct nodes of `0..n`, uniformly without replacement, ascending.
pub fn random_sample(n: usize, m: usize, seed: u64) -> Result<Vec<usize>> {
    if m > n {
        return Err(invalid(format!("budget {m} exceeds {n} nodes")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut set = rand::seq::index::sample(&mut rng, n, m).into_vec();
    set.sort_unstable();
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_budget_is_everything() {
        assert_eq!(random_sample(7, 7, 1).unwrap(), (0..7).collect::<Vec<_>>());
        assert!(random_sample(3, 4, 1).is_err());
    }

    #[test]
    fn seeded_replay() {
        assert_eq!(random_sample(100, 10, 42).unwrap(), random_sample(100, 10, 42).unwrap());
        assert_ne!(random_sample(100, 10, 42).unwrap(), random_sample(100, 10, 43).unwrap());
    }

    #[test]
    fn inclusion_frequency_is_uniform() {
        let (n, m, draws) = (1000usize, 50usize, 10_000u64);
        let mut hits = vec![0u32; n];
        for seed in 0..draws {
            for i in random_sample(n, m, seed).unwrap() {
                hits[i] += 1;
            }
        }
        let p = m as f64 / n as f64;
        let mean = draws as f64 * p;
        let sd = (draws as f64 * p * (1.0 - p)).sqrt();
        for &h in &hits {
            assert!((h as f64 - mean).abs() <= 5.0 * sd, "count {h} vs {mean}");
        }
    }
}
