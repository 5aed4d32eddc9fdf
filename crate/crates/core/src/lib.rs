//! Trapezoidal frame-split feature extraction and a small two-class
//! pattern-recognition toolkit.
//!
//! A song's amplitude envelope is roughly a trapezoid: an attack, a long
//! sustained body and a decay. This crate splits a mono signal into those
//! three frames ([`signal::split_frames`]), computes eight simple statistics
//! on each ([`features`]), and provides the machinery to rank, transform and
//! classify the resulting 24-dimensional vectors ([`selection`],
//! [`classifiers`], [`evaluation`]).
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! parallel drivers live in the `trapframe` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod classifiers;
pub mod dataset;
pub mod error;
pub mod evaluation;
pub mod features;
mod linalg;
pub mod selection;
pub mod signal;
pub mod spectral;
pub mod stats;

pub use dataset::{Class, Dataset};
pub use error::{Error, Result};
pub use features::{BaselineVector, FeatureConfig, FeatureVector, FrameFeatures};
pub use signal::{AudioClip, FrameTriple, MonoSignal};
