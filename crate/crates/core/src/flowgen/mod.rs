//! Dense flow synthesis for a landmark sequence.
//!
//! The frame-0 landmarks are triangulated once and the connectivity is kept
//! for the whole sequence. Frame-0 pixels inside the mesh are rasterized
//! once, then moved from frame to frame by the affine map of their
//! triangle. Each step's displacements, anchored at the pre-step
//! positions, are resampled onto the integer grid, and pixels outside the
//! landmark hull are set to zero.

mod crop;
mod propagate;
mod resample;

use alloc::vec::Vec;

pub use crop::{crop_box, crop_zoom, CropBox};
pub use propagate::{step_flow, PropagatedPixelSet, StepOutput};
pub use resample::{resample_to_grid, ScatteredFlowSamples};

use crate::flow::FlowField;
use crate::geometry::{convex_hull, delaunay, Point2};
use crate::ingest::{BackgroundPolicy, RunConfig, Sequence};
use crate::{Error, Result};

/// What happened at one step of [`generate_sequence_flow`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepLog {
    /// Index of the first frame of the pair (the flow goes from `k` to `k + 1`).
    pub k: usize,
    /// Samples used for resampling.
    pub anchors: usize,
    pub dropped_triangles: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceFlow {
    pub fields: Vec<FlowField>,
    pub steps: Vec<StepLog>,
}

/// One flow field per consecutive frame pair.
pub fn generate_sequence_flow(seq: &Sequence, cfg: &RunConfig) -> Result<SequenceFlow> {
    cfg.validate()?;
    let size = seq.image_size();
    let frames = seq.frames();
    let mut mesh = delaunay(frames[0].points())
        .map_err(|_| Error::DegenerateInput("frame-0 landmarks cannot be triangulated"))?;
    let mut prop = PropagatedPixelSet::from_mesh(&mesh, size);

    let mut fields = Vec::with_capacity(frames.len() - 1);
    let mut steps = Vec::with_capacity(frames.len() - 1);
    for k in 1..frames.len() {
        let next_mesh = mesh.reposition(frames[k].points().to_vec())?;
        let step = step_flow(&prop, &mesh, &next_mesh)?;
        let samples = step.samples.retain_within(size);
        let mut field = match resample_to_grid(&samples, size, cfg.resample_method) {
            Ok(f) => f,
            // Too few or collinear anchors: nothing inside the hull can be
            // interpolated, so the step is all background.
            Err(Error::DegenerateInput(_)) => FlowField::zeros(size.height, size.width)?,
            Err(e) => return Err(e),
        };
        match cfg.background_policy {
            BackgroundPolicy::ZeroFill => zero_outside_hull(&mut field, frames[k - 1].points()),
        }
        steps.push(StepLog {
            k: k - 1,
            anchors: samples.len(),
            dropped_triangles: step.dropped_triangles.len(),
        });
        fields.push(field);
        prop = step.next;
        mesh = next_mesh;
    }
    Ok(SequenceFlow { fields, steps })
}

/// Zeroes every pixel strictly outside the convex hull of `landmarks`.
pub fn zero_outside_hull(field: &mut FlowField, landmarks: &[Point2]) {
    let hull = convex_hull(landmarks);
    let (h, w) = field.size();
    let (lo, hi) = hull.vertices.iter().fold(
        (
            Point2::new(f64::INFINITY, f64::INFINITY),
            Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        ),
        |(lo, hi), p| {
            (
                Point2::new(lo.x.min(p.x), lo.y.min(p.y)),
                Point2::new(hi.x.max(p.x), hi.y.max(p.y)),
            )
        },
    );
    for y in 0..h {
        for x in 0..w {
            let p = Point2::new(x as f64, y as f64);
            let in_box = p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
            if !in_box || hull.strictly_outside(p) {
                field.set(x, y, [0.0, 0.0]);
            }
        }
    }
}
