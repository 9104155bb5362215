//! Feature accentuation on desk-scale CNNs.
//!
//! Gradient-ascent image synthesis seeded at a natural image and regularized
//! to stay close to that image in a latent layer of the model, plus the
//! supporting machinery: optimizable image parameterizations (pixel, Fourier,
//! phase-only), a crop/noise augmentation family with reified draws,
//! collectively-normalized attribution masks, and evaluation harnesses
//! (activation-path similarity, cascading weight randomization, trial
//! generation for extrapolation studies).
//!
//! The crate is `no_std` + `alloc`; everything here is deterministic given a
//! seed. IO, the CLI and file formats live in the companion `accent-cli`
//! crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod accent;
pub mod attrib;
pub mod augment;
pub mod dft;
pub mod error;
pub mod eval;
pub mod model;
pub mod param;
pub mod rng;
pub mod tensor;

pub use error::{CoreError, Result};
pub use tensor::Tensor;
