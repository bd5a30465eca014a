//! Multi-channel real-valued images and bilinear sampling.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::floor;
use crate::{Error, Result};

/// `height x width x channels` image, row-major with interleaved channels.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    height: usize,
    width: usize,
    channels: usize,
    data: Vec<f64>,
}

impl Image {
    pub fn zeros(height: usize, width: usize, channels: usize) -> Self {
        Self {
            height,
            width,
            channels,
            data: vec![0.0; height * width * channels],
        }
    }

    pub fn from_vec(height: usize, width: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 || channels == 0 || data.len() != height * width * channels {
            return Err(Error::DimensionMismatch {
                expected: (height, width * channels),
                found: (data.len(), 1),
            });
        }
        Ok(Self {
            height,
            width,
            channels,
            data,
        })
    }

    /// Builds an image by evaluating `f(x, y, channel)` at every sample.
    pub fn from_fn(
        height: usize,
        width: usize,
        channels: usize,
        mut f: impl FnMut(usize, usize, usize) -> f64,
    ) -> Self {
        let mut data = Vec::with_capacity(height * width * channels);
        for y in 0..height {
            for x in 0..width {
                for c in 0..channels {
                    data.push(f(x, y, c));
                }
            }
        }
        Self {
            height,
            width,
            channels,
            data,
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn size(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, c: usize) -> f64 {
        self.data[(y * self.width + x) * self.channels + c]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, c: usize, v: f64) {
        self.data[(y * self.width + x) * self.channels + c] = v;
    }

    /// Bilinear sample of channel `c` at real position `(x, y)`, with the
    /// position clamped to the image.
    #[inline]
    pub fn sample_bilinear(&self, x: f64, y: f64, c: usize) -> f64 {
        sample_bilinear(&self.data, self.height, self.width, self.channels, x, y, c)
    }

    /// Bilinear resize to `(height, width)`; see [`resize_bilinear`].
    pub fn resize(&self, height: usize, width: usize) -> Result<Image> {
        let data = resize_bilinear(
            &self.data,
            (self.height, self.width),
            self.channels,
            (height, width),
        )?;
        Image::from_vec(height, width, self.channels, data)
    }

    /// Copy of the inclusive pixel window `[x0, x1] x [y0, y1]`.
    pub fn crop(&self, x0: usize, y0: usize, x1: usize, y1: usize) -> Result<Image> {
        if x0 > x1 || y0 > y1 || x1 >= self.width || y1 >= self.height {
            return Err(Error::EmptyCrop);
        }
        let (w, h) = (x1 - x0 + 1, y1 - y0 + 1);
        Ok(Image::from_fn(h, w, self.channels, |x, y, c| {
            self.get(x0 + x, y0 + y, c)
        }))
    }
}

#[inline]
pub(crate) fn sample_bilinear(
    data: &[f64],
    height: usize,
    width: usize,
    channels: usize,
    x: f64,
    y: f64,
    c: usize,
) -> f64 {
    let x = x.clamp(0.0, (width - 1) as f64);
    let y = y.clamp(0.0, (height - 1) as f64);
    let x0 = floor(x) as usize;
    let y0 = floor(y) as usize;
    let x1 = (x0 + 1).min(width - 1);
    let y1 = (y0 + 1).min(height - 1);
    let fx = x - x0 as f64;
    let fy = y - y0 as f64;
    let at = |xx: usize, yy: usize| data[(yy * width + xx) * channels + c];
    let top = at(x0, y0) + fx * (at(x1, y0) - at(x0, y0));
    if fy == 0.0 {
        return top;
    }
    let bottom = at(x0, y1) + fx * (at(x1, y1) - at(x0, y1));
    top + fy * (bottom - top)
}

/// Source coordinate of destination sample `i` when resampling `src` samples
/// onto `dst` samples with aligned pixel centres.
#[inline]
pub(crate) fn source_coord(i: usize, src: usize, dst: usize) -> f64 {
    (i as f64 + 0.5) * (src as f64 / dst as f64) - 0.5
}

/// Bilinear resize of interleaved `channels`-channel data. Pixel centres are
/// aligned (`src = (dst + 0.5) * scale - 0.5`) and borders clamp, so a
/// same-size resize is the identity and constants are preserved.
pub fn resize_bilinear(
    data: &[f64],
    (src_h, src_w): (usize, usize),
    channels: usize,
    (dst_h, dst_w): (usize, usize),
) -> Result<Vec<f64>> {
    if dst_h == 0 || dst_w == 0 || src_h == 0 || src_w == 0 {
        return Err(Error::DimensionMismatch {
            expected: (src_h, src_w),
            found: (dst_h, dst_w),
        });
    }
    let mut out = Vec::with_capacity(dst_h * dst_w * channels);
    for y in 0..dst_h {
        let sy = source_coord(y, src_h, dst_h);
        for x in 0..dst_w {
            let sx = source_coord(x, src_w, dst_w);
            for c in 0..channels {
                out.push(sample_bilinear(data, src_h, src_w, channels, sx, sy, c));
            }
        }
    }
    Ok(out)
}
