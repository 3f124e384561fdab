//! Stable seed derivation. Seeds must survive compiler and library upgrades,
//! so they come from SHA-256 over an explicit byte encoding rather than
//! `std::hash`.

use sha2::{Digest, Sha256};

/// One component of a seed derivation path.
#[derive(Debug, Clone, Copy)]
pub enum Part<'a> {
    Str(&'a str),
    Int(u64),
    Float(f64),
}

pub fn derive_seed(master: u64, parts: &[Part<'_>]) -> u64 {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    for part in parts {
        match *part {
            Part::Str(s) => {
                h.update([0u8]);
                h.update((s.len() as u64).to_le_bytes());
                h.update(s.as_bytes());
            }
            Part::Int(v) => {
                h.update([1u8]);
                h.update(v.to_le_bytes());
            }
            Part::Float(v) => {
                h.update([2u8]);
                h.update(v.to_bits().to_le_bytes());
            }
        }
    }
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

/// Seed for one (method, M, snr, trial) cell.
pub fn trial_seed(master: u64, method: &str, m: usize, snr_db: f64, trial: usize) -> u64 {
    derive_seed(
        master,
        &[
            Part::Str(method),
            Part::Int(m as u64),
            Part::Float(snr_db),
            Part::Int(trial as u64),
        ],
    )
}
