//! File formats, dataset plumbing and the command line around
//! [`faceflow_core`]: landmark CSV tracks, manifests, run configs, `.flo`
//! flow files, images, strain feature tensors and the `faceflow` binary.

mod atomic;
mod error;

pub mod cli;
pub mod config;
pub mod featio;
pub mod flo;
pub mod generate;
pub mod imageio;
pub mod landmarks;
pub mod manifest;

pub use atomic::write_atomic;
pub use error::{Error, Result};
pub use faceflow_core as core;
