//! PNG and binary PPM images, converted to and from three-channel
//! `[0, 1]` images.

use std::path::Path;

use faceflow_core::ingest::ImageSize;
use faceflow_core::Image;
use image::codecs::png::PngEncoder;
use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{ExtendedColorType, ImageEncoder};

use crate::atomic::write_atomic;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RasterFormat {
    Png,
    Ppm,
}

impl RasterFormat {
    pub fn from_name(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "png" => Some(RasterFormat::Png),
            "ppm" => Some(RasterFormat::Ppm),
            _ => None,
        }
    }

    /// From the file extension, defaulting to PNG.
    pub fn for_path(path: &Path) -> Self {
        path.extension()
            .and_then(|x| x.to_str())
            .and_then(Self::from_name)
            .unwrap_or(RasterFormat::Png)
    }
}

fn image_error(path: &Path, source: image::ImageError) -> Error {
    Error::Image {
        path: path.to_owned(),
        source,
    }
}

pub fn image_dimensions(path: &Path) -> Result<ImageSize> {
    let (w, h) = image::image_dimensions(path).map_err(|e| image_error(path, e))?;
    Ok(ImageSize::new(h as usize, w as usize))
}

/// Any supported image as RGB with channel values `v / 255`.
pub fn load_image(path: &Path) -> Result<Image> {
    let rgb = image::open(path)
        .map_err(|e| image_error(path, e))?
        .into_rgb8();
    let (w, h) = rgb.dimensions();
    let data = rgb
        .into_raw()
        .into_iter()
        .map(|v| v as f64 / 255.0)
        .collect();
    Ok(Image::from_vec(h as usize, w as usize, 3, data)?)
}

/// Quantizes to 8 bits (`round(255 v)`, clamped). One-channel images are
/// replicated to grey.
pub fn quantize(image: &Image) -> Vec<u8> {
    let q = |v: f64| (v * 255.0).round().clamp(0.0, 255.0) as u8;
    let c = image.channels();
    image
        .data()
        .chunks(c)
        .flat_map(|px| match c {
            1 => [q(px[0]); 3],
            _ => [q(px[0]), q(px[1]), q(px[2])],
        })
        .collect()
}

pub fn save_rgb8(
    path: &Path,
    width: usize,
    height: usize,
    rgb: &[u8],
    format: RasterFormat,
) -> Result<()> {
    let (w, h) = (width as u32, height as u32);
    let mut buf = Vec::new();
    let encoded = match format {
        RasterFormat::Png => {
            PngEncoder::new(&mut buf).write_image(rgb, w, h, ExtendedColorType::Rgb8)
        }
        RasterFormat::Ppm => PnmEncoder::new(&mut buf)
            .with_subtype(PnmSubtype::Pixmap(SampleEncoding::Binary))
            .write_image(rgb, w, h, ExtendedColorType::Rgb8),
    };
    encoded.map_err(|e| image_error(path, e))?;
    write_atomic(path, |out| out.write_all(&buf))
}

pub fn save_image(path: &Path, image: &Image, format: RasterFormat) -> Result<()> {
    save_rgb8(
        path,
        image.width(),
        image.height(),
        &quantize(image),
        format,
    )
}
