use gfs_core::{Basis, Error, Vector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// GFT coefficients of the first `bandwidth` frequencies drawn i.i.d. from
/// `N(coeff_mean, coeff_std^2)`; everything above the band is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalModel {
    pub bandwidth: usize,
    pub coeff_mean: f64,
    pub coeff_std: f64,
}

impl SignalModel {
    pub fn new(bandwidth: usize) -> Self {
        Self {
            bandwidth,
            coeff_mean: 1.0,
            coeff_std: 0.5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Signal {
    pub values: Vector,
    pub coeffs: Vector,
}

pub fn generate_signal(basis: &Basis, model: &SignalModel, seed: u64) -> Result<Signal, Error> {
    if model.bandwidth == 0 || model.bandwidth > basis.n() {
        return Err(Error::InvalidArgument(format!(
            "bandwidth {} outside 1..={}",
            model.bandwidth,
            basis.n()
        )));
    }
    let dist = Normal::new(model.coeff_mean, model.coeff_std)
        .map_err(|e| Error::InvalidArgument(format!("coefficient distribution: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = Vector::from_fn(model.bandwidth, |_, _| dist.sample(&mut rng));
    Ok(Signal {
        values: basis.band(model.bandwidth) * &coeffs,
        coeffs,
    })
}

/// Noise variance for a target SNR in dB against per-node power `||x||^2/N`.
/// An infinite SNR means no noise.
pub fn noise_variance(signal_power: f64, snr_db: f64) -> f64 {
    if snr_db == f64::INFINITY {
        0.0
    } else {
        signal_power * 10f64.powf(-snr_db / 10.0)
    }
}

pub fn signal_power(x: &Vector) -> f64 {
    x.norm_squared() / x.len() as f64
}

/// Samples with i.i.d. Gaussian noise added; returns the noise variance too.
pub fn add_noise(samples: &Vector, snr_db: f64, signal_power: f64, seed: u64) -> Result<(Vector, f64), Error> {
    if !(signal_power > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "signal power must be positive, got {signal_power}"
        )));
    }
    if snr_db.is_nan() {
        return Err(Error::InvalidArgument("snr is NaN".into()));
    }
    let w2 = noise_variance(signal_power, snr_db);
    if w2 == 0.0 {
        return Ok((samples.clone(), 0.0));
    }
    let dist = Normal::new(0.0, w2.sqrt()).expect("finite positive deviation");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((samples.map(|v| v + dist.sample(&mut rng)), w2))
}
