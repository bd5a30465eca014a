//! Optical strain of a flow field and the strain feature image.

use alloc::vec::Vec;

use crate::flow::FlowField;
use crate::image::Image;
use crate::math::sqrt;
use crate::numerics::flow_gradients;
use crate::Result;

/// Default feature resolution.
pub const FEATURE_SIZE: (usize, usize) = (28, 28);

/// Symmetric strain tensor per pixel, `[e_xx, e_xy, e_yy]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StrainField {
    height: usize,
    width: usize,
    data: Vec<[f64; 3]>,
}

impl StrainField {
    pub fn size(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn data(&self) -> &[[f64; 3]] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> [f64; 3] {
        self.data[y * self.width + x]
    }
}

/// Symmetrized flow gradient, using the same forward differences as the
/// smoothness loss.
pub fn strain_tensor(flow: &FlowField) -> StrainField {
    let g = flow_gradients(flow);
    let data = (0..g.du_dx.len())
        .map(|i| [g.du_dx[i], 0.5 * (g.du_dy[i] + g.dv_dx[i]), g.dv_dy[i]])
        .collect();
    StrainField {
        height: g.height,
        width: g.width,
        data,
    }
}

/// `sqrt(e_xx² + e_yy² + 2 e_xy²)` of one tensor.
#[inline]
pub fn tensor_norm([exx, exy, eyy]: [f64; 3]) -> f64 {
    sqrt(exx * exx + eyy * eyy + 2.0 * exy * exy)
}

/// Per-pixel strain norm, row-major.
pub fn strain_norm(strain: &StrainField) -> Vec<f64> {
    strain.data.iter().map(|&t| tensor_norm(t)).collect()
}

/// Three-channel image `(u, v, strain norm)` bilinearly resized to
/// `out_size` (height, width). Values are left unquantized.
pub fn strain_feature(flow: &FlowField, out_size: (usize, usize)) -> Result<Image> {
    let norm = strain_norm(&strain_tensor(flow));
    let (h, w) = flow.size();
    let full = Image::from_fn(h, w, 3, |x, y, c| match c {
        0 => flow.get(x, y)[0],
        1 => flow.get(x, y)[1],
        _ => norm[y * w + x],
    });
    full.resize(out_size.0, out_size.1)
}
