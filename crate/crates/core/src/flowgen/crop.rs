use crate::flow::FlowField;
use crate::image::Image;
use crate::ingest::{ImageSize, LandmarkFrame, RunConfig};
use crate::math::{ceil, floor};
use crate::{Error, Result};

/// Inclusive pixel window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CropBox {
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
}

impl CropBox {
    pub fn width(&self) -> usize {
        self.x1 - self.x0 + 1
    }

    pub fn height(&self) -> usize {
        self.y1 - self.y0 + 1
    }
}

/// Landmark bounds grown by `offset` pixels on every side, clamped to the
/// image.
pub fn crop_box(landmarks: &LandmarkFrame, offset: u32, size: ImageSize) -> Result<CropBox> {
    let (lo, hi) = landmarks.bounds();
    let off = offset as f64;
    let x0 = floor(lo.x) - off;
    let y0 = floor(lo.y) - off;
    let x1 = ceil(hi.x) + off;
    let y1 = ceil(hi.y) + off;
    let (w, h) = (size.width as f64, size.height as f64);
    if x1 < 0.0 || y1 < 0.0 || x0 > w - 1.0 || y0 > h - 1.0 {
        return Err(Error::EmptyCrop);
    }
    Ok(CropBox {
        x0: x0.max(0.0) as usize,
        y0: y0.max(0.0) as usize,
        x1: x1.min(w - 1.0) as usize,
        y1: y1.min(h - 1.0) as usize,
    })
}

/// Crops image and flow to the landmark box and resizes both to `target`.
/// Flow components are rescaled so they stay in pixels of the resized frame.
pub fn crop_zoom(
    image: &Image,
    flow: &FlowField,
    landmarks: &LandmarkFrame,
    cfg: &RunConfig,
    target: ImageSize,
) -> Result<(Image, FlowField)> {
    if image.size() != flow.size() {
        return Err(Error::DimensionMismatch {
            expected: image.size(),
            found: flow.size(),
        });
    }
    let size = ImageSize::new(image.height(), image.width());
    let b = crop_box(landmarks, cfg.crop_offset, size)?;
    let img = image
        .crop(b.x0, b.y0, b.x1, b.y1)?
        .resize(target.height, target.width)?;
    let cropped = FlowField::from_fn(b.height(), b.width(), |x, y| flow.get(b.x0 + x, b.y0 + y))?;
    let su = target.width as f64 / b.width() as f64;
    let sv = target.height as f64 / b.height() as f64;
    let fl = cropped
        .resize(target.height, target.width, false)?
        .scaled(su, sv);
    Ok((img, fl))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point2;
    use crate::ingest::LANDMARK_COUNT;
    use alloc::vec::Vec;

    fn box_frame(x0: f64, y0: f64, x1: f64, y1: f64) -> LandmarkFrame {
        let pts: Vec<_> = (0..LANDMARK_COUNT)
            .map(|i| match i % 4 {
                0 => Point2::new(x0, y0),
                1 => Point2::new(x1, y0),
                2 => Point2::new(x1, y1),
                _ => Point2::new(x0, y1),
            })
            .collect();
        LandmarkFrame::new(0, pts, None).unwrap()
    }

    fn cfg(offset: u32) -> RunConfig {
        RunConfig {
            crop_offset: offset,
            ..RunConfig::default()
        }
    }

    #[test]
    fn components_scale_with_the_zoom() {
        let img = Image::zeros(300, 300, 3);
        let flow = FlowField::constant(300, 300, 1.0, 1.0).unwrap();
        let lm = box_frame(50.0, 50.0, 249.0, 249.0);
        let (i, f) = crop_zoom(&img, &flow, &lm, &cfg(0), ImageSize::new(384, 512)).unwrap();
        assert_eq!(i.size(), (384, 512));
        let [u, v] = f.get(10, 10);
        assert!((u - 2.56).abs() < 1e-12 && (v - 1.92).abs() < 1e-12);
    }

    #[test]
    fn constant_flow_doubles_on_2x_zoom() {
        let img = Image::zeros(150, 150, 3);
        let flow = FlowField::constant(150, 150, 1.0, 1.0).unwrap();
        let lm = box_frame(30.0, 30.0, 129.0, 129.0);
        let (_, f) = crop_zoom(&img, &flow, &lm, &cfg(0), ImageSize::new(200, 200)).unwrap();
        assert!(f
            .data()
            .iter()
            .all(|&[u, v]| (u - 2.0).abs() < 1e-12 && (v - 2.0).abs() < 1e-12));
    }

    #[test]
    fn full_frame_same_size_is_identity() {
        let img = Image::from_fn(40, 60, 3, |x, y, c| (x * 7 + y * 3 + c) as f64);
        let flow = FlowField::from_fn(40, 60, |x, y| [x as f64 * 0.1, -(y as f64)]).unwrap();
        let lm = box_frame(5.0, 5.0, 50.0, 30.0);
        let (i, f) = crop_zoom(&img, &flow, &lm, &cfg(100), ImageSize::new(40, 60)).unwrap();
        assert_eq!(i, img);
        assert_eq!(f, flow);
    }

    #[test]
    fn box_off_image_is_empty() {
        let lm = box_frame(500.0, 500.0, 600.0, 600.0);
        assert_eq!(
            crop_box(&lm, 20, ImageSize::new(100, 100)),
            Err(Error::EmptyCrop)
        );
        let b = crop_box(
            &box_frame(-5.5, 10.2, 50.0, 120.0),
            3,
            ImageSize::new(100, 100),
        )
        .unwrap();
        assert_eq!(
            b,
            CropBox {
                x0: 0,
                y0: 7,
                x1: 53,
                y1: 99
            }
        );
    }
}
