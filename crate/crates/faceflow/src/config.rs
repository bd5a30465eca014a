//! `key=value` run configuration files.

use std::path::Path;

use faceflow_core::ingest::ResampleMethod;
use faceflow_core::RunConfig;

use crate::{Error, Result};

/// Parses a config file on top of the defaults. Blank lines and `#`
/// comments are ignored; unknown keys are errors.
pub fn read_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text).map_err(|(line, reason)| Error::MalformedConfig {
        path: path.to_owned(),
        line,
        reason,
    })
}

fn parse_config(text: &str) -> std::result::Result<RunConfig, (usize, String)> {
    let mut cfg = RunConfig::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |reason: String| (i + 1, reason);
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected key=value, found {line:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        let real = || {
            value
                .parse::<f64>()
                .map_err(|_| err(format!("{key}: not a number: {value:?}")))
        };
        match key {
            "crop_offset" => {
                cfg.crop_offset = value.parse().map_err(|_| {
                    err(format!(
                        "crop_offset: not a non-negative integer: {value:?}"
                    ))
                })?
            }
            "huber_delta" => cfg.huber_delta = real()?,
            "lambda1" => cfg.loss_weights[0] = real()?,
            "lambda2" => cfg.loss_weights[1] = real()?,
            "lambda3" => cfg.loss_weights[2] = real()?,
            "resample_method" => {
                cfg.resample_method = ResampleMethod::from_name(value)
                    .ok_or_else(|| err(format!("unknown resample_method {value:?}")))?
            }
            _ => return Err(err(format!("unknown key {key:?}"))),
        }
    }
    cfg.validate().map_err(|e| (0, e.to_string()))?;
    Ok(cfg)
}
