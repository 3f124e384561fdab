use gfs_core::graph::gen_sensor_graph;
use gfs_core::linalg;
use gfs_core::reconstruction::{
    empirical_mse, gfs_reconstruct, ls_reconstruct, select_beta, theoretical_mse_gfs, theoretical_mse_ls,
    ObservedSamples,
};
use gfs_core::sampler::{gfs_sample, random_sample};
use gfs_core::spectral::{exact_eigendecompose, lp_filter};
use gfs_core::{Basis, Vector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn bandlimited(basis: &Basis, k: usize, seed: u64) -> (Vector, Vector) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Normal::new(1.0, 0.5).unwrap();
    let coeffs = Vector::from_fn(k, |_, _| dist.sample(&mut rng));
    (basis.band(k) * &coeffs, coeffs)
}

#[test]
fn monte_carlo_matches_closed_forms() {
    let (n, k, m) = (32, 5, 10);
    let basis = exact_eigendecompose(&gen_sensor_graph(n, 0.4, 11).unwrap().laplacian::<f64>()).unwrap();
    let filter = lp_filter(&basis, k).unwrap();
    let set = gfs_sample(&filter, 1.0 / 99.0, m).unwrap().sample_set;
    let beta = select_beta(&filter, m).unwrap();
    let (x, coeffs) = bandlimited(&basis, k, 2);
    let w2 = x.norm_squared() / n as f64;
    let noise = Normal::new(0.0, w2.sqrt()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let draws = 20_000;
    let (mut gfs, mut ls) = (Vec::with_capacity(draws), Vec::with_capacity(draws));
    for _ in 0..draws {
        let y = Vector::from_fn(m, |r, _| x[set[r]] + noise.sample(&mut rng));
        let obs = ObservedSamples::new(set.clone(), y).unwrap();
        gfs.push(empirical_mse(&x, &gfs_reconstruct(&filter, beta, &obs).unwrap().signal).unwrap());
        ls.push(empirical_mse(&x, &ls_reconstruct(&basis, k, &obs).unwrap().signal).unwrap());
    }
    for (samples, expect) in [
        (gfs, theoretical_mse_gfs(&basis, k, &set, beta, &coeffs, w2).unwrap()),
        (ls, theoretical_mse_ls(&basis, k, &set, w2).unwrap()),
    ] {
        let mean = samples.iter().sum::<f64>() / draws as f64;
        let var = samples.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (draws - 1) as f64;
        let se = (var / draws as f64).sqrt();
        assert!((mean - expect).abs() <= 4.0 * se, "{mean} vs {expect} (se {se})");
    }
}

#[test]
fn noiseless_least_squares_is_exact() {
    let basis = exact_eigendecompose(&gen_sensor_graph(64, 0.3, 3).unwrap().laplacian::<f64>()).unwrap();
    for seed in 0..20 {
        let set = random_sample(64, 20, seed).unwrap();
        let (x, _) = bandlimited(&basis, 8, seed);
        let obs = ObservedSamples::of_signal(&x, &set);
        match ls_reconstruct(&basis, 8, &obs) {
            Ok(r) => assert!((r.signal - &x).amax() <= 1e-9),
            Err(e) => assert!(matches!(e, gfs_core::Error::RankDeficient { .. })),
        }
    }
}

#[test]
fn biased_estimate_lies_in_band() {
    let basis = exact_eigendecompose(&gen_sensor_graph(48, 0.35, 5).unwrap().laplacian::<f64>()).unwrap();
    let filter = lp_filter(&basis, 6).unwrap();
    let set = random_sample(48, 9, 4).unwrap();
    let y = Vector::from_fn(9, |r, _| (r as f64).sin());
    let xh = gfs_reconstruct(&filter, 0.3, &ObservedSamples::new(set, y).unwrap())
        .unwrap()
        .signal;
    let projected = &filter.matrix * &xh;
    assert!((projected - &xh).norm() <= 1e-8);
}

#[test]
fn beta_lower_bounds_average_sampled_diagonal() {
    let basis = exact_eigendecompose(&gen_sensor_graph(64, 0.3, 6).unwrap().laplacian::<f64>()).unwrap();
    let filter = lp_filter(&basis, 8).unwrap();
    let beta = select_beta(&filter, 10).unwrap();
    for seed in 0..200 {
        let set = random_sample(64, 10, seed).unwrap();
        let bound = linalg::trace(&linalg::principal(&filter.matrix, &set)) / 8.0;
        assert!(beta <= bound + 1e-12);
    }
}
