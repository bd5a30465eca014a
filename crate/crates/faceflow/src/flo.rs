//! Middlebury `.flo` files: the float tag 202021.25, int32 width, int32
//! height, then row-major interleaved `(u, v)` float32, all little-endian.

use std::path::Path;

use faceflow_core::FlowField;

use crate::atomic::write_atomic;
use crate::{Error, Result};

pub const TAG: f32 = 202021.25;
const HEADER: usize = 12;

pub fn encode_flo(flow: &FlowField) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER + 8 * flow.data().len());
    out.extend_from_slice(&TAG.to_le_bytes());
    out.extend_from_slice(&(flow.width() as i32).to_le_bytes());
    out.extend_from_slice(&(flow.height() as i32).to_le_bytes());
    for [u, v] in flow.data() {
        out.extend_from_slice(&(*u as f32).to_le_bytes());
        out.extend_from_slice(&(*v as f32).to_le_bytes());
    }
    out
}

/// `path` is only used in error messages.
pub fn decode_flo(bytes: &[u8], path: &Path) -> Result<FlowField> {
    let truncated = |expected: u64| Error::TruncatedFile {
        path: path.to_owned(),
        expected,
        found: bytes.len() as u64,
    };
    if bytes.len() < 4 {
        return Err(truncated(HEADER as u64));
    }
    let word = |i: usize| <[u8; 4]>::try_from(&bytes[i..i + 4]).unwrap();
    let tag = f32::from_le_bytes(word(0));
    if tag != TAG {
        return Err(Error::BadMagic {
            path: path.to_owned(),
            tag,
        });
    }
    if bytes.len() < HEADER {
        return Err(truncated(HEADER as u64));
    }
    let (width, height) = (
        i32::from_le_bytes(word(4)) as i64,
        i32::from_le_bytes(word(8)) as i64,
    );
    if width <= 0 || height <= 0 {
        return Err(Error::DimensionMismatch {
            path: path.to_owned(),
            width,
            height,
        });
    }
    let n = (width * height) as usize;
    let expected = (HEADER + 8 * n) as u64;
    if (bytes.len() as u64) < expected {
        return Err(truncated(expected));
    }
    let data = (0..n)
        .map(|i| {
            let at = HEADER + 8 * i;
            [
                f32::from_le_bytes(word(at)) as f64,
                f32::from_le_bytes(word(at + 4)) as f64,
            ]
        })
        .collect();
    Ok(FlowField::from_vec(height as usize, width as usize, data)?)
}

pub fn read_flo(path: &Path) -> Result<FlowField> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_flo(&bytes, path)
}

/// Values are stored as `f32`.
pub fn write_flo(path: &Path, flow: &FlowField) -> Result<()> {
    let bytes = encode_flo(flow);
    write_atomic(path, |w| w.write_all(&bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_field_layout() {
        let bytes = encode_flo(&FlowField::zeros(2, 2).unwrap());
        assert_eq!(bytes.len(), 12 + 32);
        assert_eq!(&bytes[..4], b"PIEH");
        assert_eq!(
            decode_flo(&bytes, Path::new("z")).unwrap(),
            FlowField::zeros(2, 2).unwrap()
        );
    }

    #[test]
    fn width_precedes_height() {
        let f = FlowField::from_fn(2, 3, |x, y| [x as f64, y as f64]).unwrap();
        let bytes = encode_flo(&f);
        assert_eq!(i32::from_le_bytes(bytes[4..8].try_into().unwrap()), 3);
        assert_eq!(i32::from_le_bytes(bytes[8..12].try_into().unwrap()), 2);
        // Second vector is pixel (1, 0).
        assert_eq!(f32::from_le_bytes(bytes[20..24].try_into().unwrap()), 1.0);
    }

    #[test]
    fn corrupt_files_are_rejected() {
        let p = Path::new("x.flo");
        let mut bytes = encode_flo(&FlowField::constant(3, 4, 1.5, -2.0).unwrap());
        assert!(matches!(
            decode_flo(&bytes[..bytes.len() - 1], p),
            Err(Error::TruncatedFile { .. })
        ));
        assert!(matches!(
            decode_flo(&bytes[..8], p),
            Err(Error::TruncatedFile { .. })
        ));
        assert!(matches!(
            decode_flo(&[], p),
            Err(Error::TruncatedFile { .. })
        ));
        bytes[8..12].copy_from_slice(&0i32.to_le_bytes());
        assert!(matches!(
            decode_flo(&bytes, p),
            Err(Error::DimensionMismatch { .. })
        ));
        bytes[..4].copy_from_slice(&1.0f32.to_le_bytes());
        assert!(matches!(decode_flo(&bytes, p), Err(Error::BadMagic { .. })));
    }
}
