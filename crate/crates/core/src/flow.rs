//! Dense optical-flow fields.

use alloc::vec;
use alloc::vec::Vec;

use crate::geometry::Point2;
use crate::image::resize_bilinear;
use crate::{Error, Result};

/// `height x width` grid of displacement vectors `(u, v)` in pixels:
/// `u` horizontal, `v` vertical, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowField {
    height: usize,
    width: usize,
    data: Vec<[f64; 2]>,
}

impl FlowField {
    pub fn zeros(height: usize, width: usize) -> Result<Self> {
        Self::from_vec(height, width, vec![[0.0; 2]; height * width])
    }

    pub fn constant(height: usize, width: usize, u: f64, v: f64) -> Result<Self> {
        Self::from_vec(height, width, vec![[u, v]; height * width])
    }

    pub fn from_vec(height: usize, width: usize, data: Vec<[f64; 2]>) -> Result<Self> {
        if height == 0 || width == 0 || data.len() != height * width {
            return Err(Error::DimensionMismatch {
                expected: (height, width),
                found: (data.len(), 1),
            });
        }
        if data.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::DegenerateInput("non-finite flow vector"));
        }
        Ok(Self {
            height,
            width,
            data,
        })
    }

    /// Builds a field from `f(x, y) -> (u, v)`.
    pub fn from_fn(
        height: usize,
        width: usize,
        mut f: impl FnMut(usize, usize) -> [f64; 2],
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(height * width);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::from_vec(height, width, data)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// `(height, width)`
    pub fn size(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn data(&self) -> &[[f64; 2]] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [[f64; 2]] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> [f64; 2] {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, uv: [f64; 2]) {
        self.data[y * self.width + x] = uv;
    }

    #[inline]
    pub fn vector(&self, x: usize, y: usize) -> Point2 {
        let [u, v] = self.get(x, y);
        Point2::new(u, v)
    }

    pub fn max_magnitude(&self) -> f64 {
        self.data
            .iter()
            .map(|&[u, v]| crate::math::hypot(u, v))
            .fold(0.0, f64::max)
    }

    pub fn scaled(&self, su: f64, sv: f64) -> FlowField {
        FlowField {
            height: self.height,
            width: self.width,
            data: self.data.iter().map(|&[u, v]| [u * su, v * sv]).collect(),
        }
    }

    pub(crate) fn ensure_same_size(&self, other: &FlowField) -> Result<()> {
        if self.size() != other.size() {
            return Err(Error::DimensionMismatch {
                expected: self.size(),
                found: other.size(),
            });
        }
        Ok(())
    }

    /// Bilinear resize to `(height, width)`. With `rescale` the components
    /// are multiplied by `width / self.width` and `height / self.height` so
    /// they stay in pixels of the resized grid.
    pub fn resize(&self, height: usize, width: usize, rescale: bool) -> Result<FlowField> {
        let flat: Vec<f64> = self.data.iter().flatten().copied().collect();
        let out = resize_bilinear(&flat, self.size(), 2, (height, width))?;
        let (su, sv) = if rescale {
            (
                width as f64 / self.width as f64,
                height as f64 / self.height as f64,
            )
        } else {
            (1.0, 1.0)
        };
        let data = out
            .chunks_exact(2)
            .map(|c| [c[0] * su, c[1] * sv])
            .collect();
        FlowField::from_vec(height, width, data)
    }
}
