//! Raw feature tensors: int32 height, width, channels, then float32 values
//! in row-major, channel-interleaved order. Little-endian throughout.

use std::path::Path;

use faceflow_core::Image;

use crate::atomic::write_atomic;
use crate::{Error, Result};

pub fn encode_feature(image: &Image) -> Vec<u8> {
    let mut out = Vec::with_capacity(12 + 4 * image.data().len());
    for d in [image.height(), image.width(), image.channels()] {
        out.extend_from_slice(&(d as i32).to_le_bytes());
    }
    for v in image.data() {
        out.extend_from_slice(&(*v as f32).to_le_bytes());
    }
    out
}

pub fn decode_feature(bytes: &[u8], path: &Path) -> Result<Image> {
    let truncated = |expected: usize| Error::TruncatedFile {
        path: path.to_owned(),
        expected: expected as u64,
        found: bytes.len() as u64,
    };
    let word = |i: usize| <[u8; 4]>::try_from(&bytes[i..i + 4]).unwrap();
    if bytes.len() < 12 {
        return Err(truncated(12));
    }
    let dims = [0, 4, 8].map(|i| i32::from_le_bytes(word(i)));
    if dims.iter().any(|&d| d <= 0) {
        return Err(Error::DimensionMismatch {
            path: path.to_owned(),
            width: dims[1] as i64,
            height: dims[0] as i64,
        });
    }
    let [h, w, c] = dims.map(|d| d as usize);
    let expected = 12 + 4 * h * w * c;
    if bytes.len() < expected {
        return Err(truncated(expected));
    }
    let data = (0..h * w * c)
        .map(|i| f32::from_le_bytes(word(12 + 4 * i)) as f64)
        .collect();
    Ok(Image::from_vec(h, w, c, data)?)
}

pub fn write_feature(path: &Path, image: &Image) -> Result<()> {
    let bytes = encode_feature(image);
    write_atomic(path, |w| w.write_all(&bytes))
}

pub fn read_feature(path: &Path) -> Result<Image> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_feature(&bytes, path)
}

/// Each channel min-max stretched to `[0, 1]` for viewing; constant
/// channels map to 0.
pub fn feature_preview(image: &Image) -> Image {
    let c = image.channels();
    let mut lo = vec![f64::INFINITY; c];
    let mut hi = vec![f64::NEG_INFINITY; c];
    for px in image.data().chunks(c) {
        for (k, v) in px.iter().enumerate() {
            lo[k] = lo[k].min(*v);
            hi[k] = hi[k].max(*v);
        }
    }
    Image::from_fn(image.height(), image.width(), c, |x, y, k| {
        let span = hi[k] - lo[k];
        if span > 0.0 {
            (image.get(x, y, k) - lo[k]) / span
        } else {
            0.0
        }
    })
}
