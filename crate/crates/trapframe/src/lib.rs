//! File formats, corpus handling and the command-line pipeline around
//! `trapframe-core`.

pub mod cache;
pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod extract;
pub mod manifest;
pub mod pipeline;
pub mod report;
pub mod synth;
pub mod wav;

pub use error::{AppError, AppResult};
pub use trapframe_core as core;
