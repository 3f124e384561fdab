//! Greedy A-optimal sampling of bandlimited graph signals.
//!
//! The sampler minimizes the shifted A-optimality objective
//! `tr((T_S + mu I)^-1)`, where `T` is an ideal low-pass graph filter (or its
//! Givens-rotation approximation), using incremental block inverses so that
//! no candidate evaluation needs a full matrix inversion. On top of that the
//! crate provides node exchange for time-varying node availability and a
//! biased reconstruction that reuses the sampling filter.
//!
//! All numerical code is generic over [`Scalar`] (`f32` or `f64`); the `f64`
//! aliases at the crate root are what most callers want.

pub mod dynamic;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod reconstruction;
pub mod sampler;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{Graph, LaplacianView};
pub use scalar::Scalar;
pub use spectral::{BasisKind, GivensRotation, LowPassFilter, SpectralBasis};

/// Dense `f64` matrix.
pub type Mat = nalgebra::DMatrix<f64>;
/// Dense `f64` vector.
pub type Vector = nalgebra::DVector<f64>;

pub type Laplacian = LaplacianView<f64>;
pub type Basis = SpectralBasis<f64>;
pub type Filter = LowPassFilter<f64>;
pub type State = sampler::GfsState<f64>;
pub type Observed = reconstruction::ObservedSamples<f64>;
pub type Recon = reconstruction::Reconstruction<f64>;
