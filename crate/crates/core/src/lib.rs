//! Robust binaural relative-transfer-function (RTF) and time-difference-of-arrival
//! (TDOA) estimation.
//!
//! The pipeline takes a two-channel short-time Fourier representation, whitens the
//! noise with its known covariance, forms *rectified binaural ratios* whose exact law
//! is a complex t-distribution, and aggregates them either with an EM estimator
//! (free RTF per frequency) or by likelihood scoring of a finite candidate grid
//! (free-field TDOA).
//!
//! Modules, bottom-up:
//!
//! - [`cstat`]: complex Gaussian / complex-t densities, samplers, ratio law.
//! - [`whiten`]: noise whitening, including the rank-1 noise branch.
//! - [`rbr`]: rectified-ratio feature extraction.
//! - [`estimate`]: EM RTF estimation, grid selection, TDOA grid.
//! - [`baseline`]: mean ratio, mean ILD/IPD, random, PHAT-histogram.
//! - [`signal`]: STFT, delayed-pair synthesis, noise corruption, speech-like source.
//! - [`wav`]: 16-bit PCM WAV I/O.
//! - [`bench`]: Monte-Carlo experiment harness.

pub mod baseline;
pub mod bench;
pub mod cstat;
mod error;
pub mod estimate;
pub mod rbr;
pub mod signal;
pub mod wav;
pub mod whiten;

pub use error::{Error, Result};

/// Complex sample type used throughout the crate.
pub type C64 = num_complex::Complex64;
