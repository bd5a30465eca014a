//! Flow visualization on the Middlebury color wheel.

use alloc::vec::Vec;

use crate::flow::FlowField;
use crate::math::{atan2, floor, hypot};

const RY: usize = 15;
const YG: usize = 6;
const GC: usize = 4;
const CB: usize = 11;
const BM: usize = 13;
const MR: usize = 6;
/// Hues on the wheel.
pub const NCOLS: usize = RY + YG + GC + CB + BM + MR;

/// Magnitude normalization before colour lookup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Normalization {
    /// Divide by the field's largest magnitude.
    PerImage,
    /// Divide by a fixed magnitude; longer vectors are desaturated.
    Fixed(f64),
}

/// 8-bit RGB rendering of a flow field.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowVisualization {
    pub height: usize,
    pub width: usize,
    /// Row-major interleaved RGB.
    pub rgb: Vec<u8>,
    /// Magnitude that maps to the rim of the wheel (0 if the image is blank).
    pub max_magnitude_used: f64,
}

/// The 55-entry wheel, channel values in `0..=255`.
pub fn color_wheel() -> [[f64; 3]; NCOLS] {
    let mut w = [[0.0; 3]; NCOLS];
    let mut k = 0;
    let ramp = |i: usize, n: usize| floor(255.0 * i as f64 / n as f64);
    for i in 0..RY {
        w[k] = [255.0, ramp(i, RY), 0.0];
        k += 1;
    }
    for i in 0..YG {
        w[k] = [255.0 - ramp(i, YG), 255.0, 0.0];
        k += 1;
    }
    for i in 0..GC {
        w[k] = [0.0, 255.0, ramp(i, GC)];
        k += 1;
    }
    for i in 0..CB {
        w[k] = [0.0, 255.0 - ramp(i, CB), 255.0];
        k += 1;
    }
    for i in 0..BM {
        w[k] = [ramp(i, BM), 0.0, 255.0];
        k += 1;
    }
    for i in 0..MR {
        w[k] = [255.0, 0.0, 255.0 - ramp(i, MR)];
        k += 1;
    }
    w
}

/// Colour of a vector already divided by the normalization magnitude.
pub fn vector_color(wheel: &[[f64; 3]; NCOLS], u: f64, v: f64) -> [u8; 3] {
    // The per-image maximum can land a few ulps past 1 after division.
    let mut rad = hypot(u, v);
    if rad <= 1.0 + 1e-12 {
        rad = rad.min(1.0);
    }
    let a = atan2(-v, -u) / core::f64::consts::PI;
    let fk = (a + 1.0) / 2.0 * (NCOLS - 1) as f64;
    let k0 = floor(fk) as usize;
    let k1 = if k0 + 1 == NCOLS { 0 } else { k0 + 1 };
    let f = fk - k0 as f64;
    let mut out = [0u8; 3];
    for (c, o) in out.iter_mut().enumerate() {
        let col0 = wheel[k0][c] / 255.0;
        let col1 = wheel[k1][c] / 255.0;
        let mut col = (1.0 - f) * col0 + f * col1;
        if rad <= 1.0 {
            col = 1.0 - rad * (1.0 - col);
        } else {
            col *= 0.75;
        }
        *o = floor(255.0 * col) as u8;
    }
    out
}

/// Renders `flow`; zero vectors are white.
pub fn colorize(flow: &FlowField, normalize: Normalization) -> FlowVisualization {
    let max = match normalize {
        Normalization::PerImage => flow.max_magnitude(),
        Normalization::Fixed(m) => m,
    };
    let (h, w) = flow.size();
    let wheel = color_wheel();
    let mut rgb = Vec::with_capacity(h * w * 3);
    for &[u, v] in flow.data() {
        if !(max > 0.0) || (u == 0.0 && v == 0.0) {
            rgb.extend_from_slice(&[255, 255, 255]);
        } else {
            rgb.extend_from_slice(&vector_color(&wheel, u / max, v / max));
        }
    }
    FlowVisualization {
        height: h,
        width: w,
        rgb,
        max_magnitude_used: if max > 0.0 { max } else { 0.0 },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wheel_endpoints() {
        let w = color_wheel();
        assert_eq!(w[0], [255.0, 0.0, 0.0]);
        assert_eq!(w[RY], [255.0, 255.0, 0.0]);
        assert_eq!(w[NCOLS - 1], [255.0, 0.0, 255.0 - floor(255.0 * 5.0 / 6.0)]);
    }

    #[test]
    fn zero_field_is_white() {
        let v = colorize(&FlowField::zeros(3, 4).unwrap(), Normalization::PerImage);
        assert!(v.rgb.iter().all(|&c| c == 255));
        assert_eq!(v.max_magnitude_used, 0.0);
    }

    #[test]
    fn uniform_field_is_one_colour_and_scale_free() {
        let f = FlowField::constant(4, 5, 1.0, 0.0).unwrap();
        let v = colorize(&f, Normalization::PerImage);
        assert!(v.rgb.chunks_exact(3).all(|p| p == &v.rgb[..3]));
        assert_ne!(&v.rgb[..3], &[255, 255, 255]);
        let v3 = colorize(&f.scaled(3.0, 3.0), Normalization::PerImage);
        assert_eq!(v.rgb, v3.rgb);
    }

    #[test]
    fn rounding_past_unit_radius_is_not_darkened() {
        let w = color_wheel();
        let (u, v) = (0.6, 0.8);
        let e = 1.0 + 4.0 * f64::EPSILON;
        assert_eq!(vector_color(&w, u * e, v * e), vector_color(&w, u, v));
        assert_ne!(vector_color(&w, u * 1.01, v * 1.01), vector_color(&w, u, v));
    }
}
