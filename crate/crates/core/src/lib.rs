//! Dense facial optical-flow synthesis from tracked landmarks, plus the
//! evaluators that go with it: flow losses and error metrics, flow-based
//! image warping, optical strain features and multiclass metrics.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line and all other IO live in the `faceflow` crate.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
mod math;

pub mod flow;
pub mod flowgen;
pub mod geometry;
pub mod image;
pub mod ingest;
pub mod metrics;
pub mod numerics;
pub mod strain;
pub mod synthetic;
pub mod viz;

pub use error::{Error, Result};
pub use flow::FlowField;
pub use geometry::{AffineMap2D, Barycentric, Point2, TriangleMesh};
pub use image::Image;
pub use ingest::{LandmarkFrame, RunConfig, Sequence};
