//! Flow-based warping, flow losses and flow error metrics.

use alloc::vec;
use alloc::vec::Vec;

use crate::flow::FlowField;
use crate::image::Image;
use crate::math::{abs, atan2, hypot, sqrt};
use crate::{Error, Result};

/// Number of prediction levels in a [`MultiScaleFlow`].
pub const LEVELS: usize = 5;

/// Predictions at `(H >> k, W >> k)` for `k = 1..=5`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiScaleFlow {
    base: (usize, usize),
    levels: Vec<FlowField>,
}

impl MultiScaleFlow {
    /// `levels[k - 1]` must be `(height >> k) x (width >> k)`.
    pub fn new(base: (usize, usize), levels: Vec<FlowField>) -> Result<Self> {
        if levels.len() != LEVELS {
            return Err(Error::DimensionMismatch {
                expected: (LEVELS, 1),
                found: (levels.len(), 1),
            });
        }
        for (i, f) in levels.iter().enumerate() {
            let want = Self::level_size(base, i + 1);
            if f.size() != want {
                return Err(Error::DimensionMismatch {
                    expected: want,
                    found: f.size(),
                });
            }
        }
        Ok(Self { base, levels })
    }

    /// `(H >> k, W >> k)`.
    pub fn level_size((h, w): (usize, usize), k: usize) -> (usize, usize) {
        (h >> k, w >> k)
    }

    pub fn base(&self) -> (usize, usize) {
        self.base
    }

    /// Level `k` in `1..=5`.
    pub fn level(&self, k: usize) -> &FlowField {
        &self.levels[k - 1]
    }

    pub fn levels(&self) -> &[FlowField] {
        &self.levels
    }
}

/// Scale weights and loss-term weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossWeights {
    /// `(λ1, λ2, λ3)` for the endpoint, cyclic and angular terms.
    pub lambda: [f64; 3],
    /// Rescale the `2^-k` scale weights to sum to one.
    pub normalize_scales: bool,
    /// Rescale ground-truth components when resizing it to each level.
    pub rescale_components: bool,
}

impl LossWeights {
    pub fn new(lambda: [f64; 3]) -> Self {
        Self {
            lambda,
            normalize_scales: false,
            rescale_components: false,
        }
    }

    /// `w_k` for `k = 1..=5`.
    pub fn scale_weights(&self) -> [f64; LEVELS] {
        let mut w = [0.0; LEVELS];
        let mut p = 1.0;
        for wk in &mut w {
            p *= 0.5;
            *wk = p;
        }
        if self.normalize_scales {
            let s: f64 = w.iter().sum();
            w.iter_mut().for_each(|x| *x /= s);
        }
        w
    }
}

impl Default for LossWeights {
    fn default() -> Self {
        Self::new([0.3, 0.5, 0.2])
    }
}

/// Backward warp: `out(p) = image(p - flow(p))`, bilinear, with source
/// positions clamped to the image.
pub fn warp_image(image: &Image, flow: &FlowField) -> Result<Image> {
    if image.size() != flow.size() {
        return Err(Error::DimensionMismatch {
            expected: image.size(),
            found: flow.size(),
        });
    }
    let (h, w) = flow.size();
    let ch = image.channels();
    let mut out = Image::zeros(h, w, ch);
    for y in 0..h {
        for x in 0..w {
            let [u, v] = flow.get(x, y);
            let (sx, sy) = (x as f64 - u, y as f64 - v);
            for c in 0..ch {
                out.set(x, y, c, image.sample_bilinear(sx, sy, c));
            }
        }
    }
    Ok(out)
}

/// Mean endpoint error.
pub fn epe(gt: &FlowField, pred: &FlowField) -> Result<f64> {
    gt.ensure_same_size(pred)?;
    let s: f64 = gt
        .data()
        .iter()
        .zip(pred.data())
        .map(|(a, b)| hypot(a[0] - b[0], a[1] - b[1]))
        .sum();
    Ok(s / gt.data().len() as f64)
}

/// `Σ_k w_k · epe(gt resized to level k, pred_k)`, with the λ1 factor
/// left to the caller.
pub fn multiscale_epe(gt: &FlowField, pred: &MultiScaleFlow, weights: &LossWeights) -> Result<f64> {
    if gt.size() != pred.base() {
        return Err(Error::DimensionMismatch {
            expected: pred.base(),
            found: gt.size(),
        });
    }
    let w = weights.scale_weights();
    let mut total = 0.0;
    for (k, wk) in w.iter().enumerate() {
        let level = pred.level(k + 1);
        if *wk == 0.0 {
            continue;
        }
        let resized = gt.resize(level.height(), level.width(), weights.rescale_components)?;
        total += wk * epe(&resized, level)?;
    }
    Ok(total)
}

/// Huber penalty with knee `d`.
#[inline]
pub fn huber(x: f64, d: f64) -> f64 {
    let a = abs(x);
    if a <= d {
        0.5 * x * x
    } else {
        0.5 * d * d + d * (a - d)
    }
}

/// Mean Huber penalty of the per-sample difference between two images.
pub fn cyclic_loss(x2: &Image, x2_hat: &Image, d: f64) -> Result<f64> {
    if x2.size() != x2_hat.size() || x2.channels() != x2_hat.channels() {
        return Err(Error::DimensionMismatch {
            expected: x2.size(),
            found: x2_hat.size(),
        });
    }
    let s: f64 = x2
        .data()
        .iter()
        .zip(x2_hat.data())
        .map(|(a, b)| huber(a - b, d))
        .sum();
    Ok(s / x2.data().len() as f64)
}

/// Forward-difference partials of a flow field.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowGradients {
    pub height: usize,
    pub width: usize,
    pub du_dx: Vec<f64>,
    pub du_dy: Vec<f64>,
    pub dv_dx: Vec<f64>,
    pub dv_dy: Vec<f64>,
}

/// Forward differences; the last column and row repeat their neighbour,
/// so the derivative across them is zero. Single-row or single-column
/// fields are allowed and get zero derivatives along the missing axis.
pub fn flow_gradients(flow: &FlowField) -> FlowGradients {
    let (h, w) = flow.size();
    let mut g = FlowGradients {
        height: h,
        width: w,
        du_dx: vec![0.0; h * w],
        du_dy: vec![0.0; h * w],
        dv_dx: vec![0.0; h * w],
        dv_dy: vec![0.0; h * w],
    };
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let here = flow.get(x, y);
            if x + 1 < w {
                let r = flow.get(x + 1, y);
                g.du_dx[i] = r[0] - here[0];
                g.dv_dx[i] = r[1] - here[1];
            }
            if y + 1 < h {
                let b = flow.get(x, y + 1);
                g.du_dy[i] = b[0] - here[0];
                g.dv_dy[i] = b[1] - here[1];
            }
        }
    }
    g
}

/// Mean over pixels of the Huber penalties of the four flow partials.
pub fn smoothness_loss(flow: &FlowField, d: f64) -> f64 {
    let g = flow_gradients(flow);
    let s: f64 = (0..g.du_dx.len())
        .map(|i| {
            huber(g.du_dx[i], d)
                + huber(g.du_dy[i], d)
                + huber(g.dv_dx[i], d)
                + huber(g.dv_dy[i], d)
        })
        .sum();
    s / g.du_dx.len() as f64
}

/// Angle between `(u1, v1, 1)` and `(u2, v2, 1)`, in `[0, π]`.
#[inline]
pub fn angular_error(a: [f64; 2], b: [f64; 2]) -> f64 {
    let (x, y) = ((a[0], a[1], 1.0), (b[0], b[1], 1.0));
    let cx = x.1 * y.2 - x.2 * y.1;
    let cy = x.2 * y.0 - x.0 * y.2;
    let cz = x.0 * y.1 - x.1 * y.0;
    let cross = sqrt(cx * cx + cy * cy + cz * cz);
    let dot = x.0 * y.0 + x.1 * y.1 + x.2 * y.2;
    atan2(cross, dot)
}

/// Mean angular error in radians.
pub fn aae(gt: &FlowField, pred: &FlowField) -> Result<f64> {
    gt.ensure_same_size(pred)?;
    let s: f64 = gt
        .data()
        .iter()
        .zip(pred.data())
        .map(|(a, b)| angular_error(*a, *b))
        .sum();
    Ok(s / gt.data().len() as f64)
}

/// `λ1 · multiscale_epe + λ2 · cyclic + λ3 · aae`, where the cyclic and
/// angular terms use the finest prediction brought to the input size by
/// bilinear resizing (components rescaled only if the weights say so).
pub fn total_loss(
    x1: &Image,
    x2: &Image,
    gt: &FlowField,
    pred: &MultiScaleFlow,
    weights: &LossWeights,
    d: f64,
) -> Result<f64> {
    let [l1, l2, l3] = weights.lambda;
    let mut total = 0.0;
    if l1 != 0.0 {
        total += l1 * multiscale_epe(gt, pred, weights)?;
    }
    if l2 != 0.0 || l3 != 0.0 {
        let (h, w) = gt.size();
        let full = pred.level(1).resize(h, w, weights.rescale_components)?;
        if l2 != 0.0 {
            total += l2 * cyclic_loss(x2, &warp_image(x1, &full)?, d)?;
        }
        if l3 != 0.0 {
            total += l3 * aae(gt, &full)?;
        }
    }
    Ok(total)
}
