//! Numerical toolkit for Laurent (convolution) operators acting on weighted
//! rearrangement-invariant sequence spaces over the integers.
//!
//! The crate is organised bottom-up:
//!
//! - [`sequence`]: finitely supported complex sequences, the universal test vectors.
//! - [`spaces`]: Lebesgue, Lorentz and Orlicz norms, rearrangements, duality
//!   and Calderón products.
//! - [`weights`]: discrete Muckenhoupt characteristics and the probes built on them.
//! - [`boyd`]: dilation operators and numerical Boyd indices.
//! - [`symbols`]: periodic symbols, Fourier coefficients, Fejér means.
//! - [`laurent`]: finite sections and multiplier-norm estimation.
//! - [`experiments`]: configuration, experiment runners and report emission.

pub mod boyd;
pub mod bounds;
pub mod error;
pub mod experiments;
pub mod laurent;
pub(crate) mod numeric;
pub mod sequence;
pub mod spaces;
pub mod symbols;
pub mod weights;

pub use bounds::{BoundEstimate, EstimateParams, UpperMethod};
pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use sequence::FiniteSequence;
pub use spaces::{SpaceKind, SpaceSpec, YoungFunction};
pub use symbols::Symbol;
pub use weights::{Domain, Weight};
