//! Option resolution: explicit flags, then the TOML config file, then
//! built-in defaults.

use std::path::Path;

use faceqa::metrics::{Metric, SsimParams};
use faceqa::sweep::Region;
use faceqa::{Rect, SkinThresholds};
use serde::Deserialize;

use crate::args::{MetricArgs, RegionArgs, ThresholdArgs};
use crate::error::CliError;

/// Everything a config file may set. All keys are optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub preset: Option<String>,
    pub cr_min: Option<u8>,
    pub cr_max: Option<u8>,
    pub cb_min: Option<u8>,
    pub cb_max: Option<u8>,
    pub fill_holes: Option<bool>,
    pub window: Option<usize>,
    pub stride: Option<usize>,
    pub k1: Option<f64>,
    pub k2: Option<f64>,
    pub metrics: Option<Vec<String>>,
    pub regions: Option<Vec<String>>,
    pub qualities: Option<Vec<u8>>,
    pub face_rect: Option<String>,
    pub body_rect: Option<String>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        })?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

/// Resolved thresholds plus a label for report headers.
pub struct ResolvedThresholds {
    pub thresholds: SkinThresholds,
    pub label: String,
    pub fill_holes: bool,
}

pub fn thresholds(flags: &ThresholdArgs, file: &FileConfig) -> Result<ResolvedThresholds, CliError> {
    let preset = flags.preset.as_deref().or(file.preset.as_deref()).unwrap_or("paper");
    let base = SkinThresholds::preset(preset)
        .ok_or_else(|| CliError::Usage(format!("unknown preset {preset:?} (expected paper or chai)")))?;
    let cr_min = flags.cr_min.or(file.cr_min).unwrap_or(base.cr_min);
    let cr_max = flags.cr_max.or(file.cr_max).unwrap_or(base.cr_max);
    let cb_min = flags.cb_min.or(file.cb_min).unwrap_or(base.cb_min);
    let cb_max = flags.cb_max.or(file.cb_max).unwrap_or(base.cb_max);
    let thresholds = SkinThresholds::new(cr_min, cr_max, cb_min, cb_max)?;
    let label = if thresholds == base {
        preset.to_ascii_lowercase()
    } else {
        format!("custom {thresholds}")
    };
    Ok(ResolvedThresholds {
        thresholds,
        label,
        fill_holes: flags.fill_holes || file.fill_holes.unwrap_or(false),
    })
}

pub fn ssim_params(flags: &MetricArgs, file: &FileConfig) -> Result<SsimParams, CliError> {
    let d = SsimParams::default();
    let p = SsimParams {
        k1: flags.k1.or(file.k1).unwrap_or(d.k1),
        k2: flags.k2.or(file.k2).unwrap_or(d.k2),
        bit_depth: d.bit_depth,
        window: flags.window.or(file.window).unwrap_or(d.window),
        stride: flags.stride.or(file.stride).unwrap_or(d.stride),
    };
    p.validate()?;
    Ok(p)
}

fn parse_all<T: std::str::FromStr<Err = faceqa::Error>>(v: &[String]) -> Result<Vec<T>, CliError> {
    v.iter().map(|s| s.parse::<T>().map_err(CliError::from)).collect()
}

pub fn metrics(flags: &MetricArgs, file: &FileConfig) -> Result<Vec<Metric>, CliError> {
    match (&flags.metrics, &file.metrics) {
        (Some(m), _) => Ok(m.clone()),
        (None, Some(m)) => parse_all(m),
        (None, None) => Ok(Metric::ALL.to_vec()),
    }
}

pub struct ResolvedRegions {
    /// Explicitly requested regions, if any.
    pub regions: Option<Vec<Region>>,
    pub face_rect: Option<Rect>,
    pub body_rect: Option<Rect>,
}

pub fn regions(flags: &RegionArgs, file: &FileConfig) -> Result<ResolvedRegions, CliError> {
    let regions = match (&flags.regions, &file.regions) {
        (Some(r), _) => Some(r.clone()),
        (None, Some(r)) => Some(parse_all(r)?),
        (None, None) => None,
    };
    let rect = |flag: Option<Rect>, file: &Option<String>| -> Result<Option<Rect>, CliError> {
        match (flag, file) {
            (Some(r), _) => Ok(Some(r)),
            (None, Some(s)) => Ok(Some(s.parse()?)),
            (None, None) => Ok(None),
        }
    };
    Ok(ResolvedRegions {
        regions,
        face_rect: rect(flags.face_rect, &file.face_rect)?,
        body_rect: rect(flags.body_rect, &file.body_rect)?,
    })
}

pub fn qualities(flags: Option<&Vec<u8>>, file: &FileConfig) -> Vec<u8> {
    flags
        .cloned()
        .or_else(|| file.qualities.clone())
        .unwrap_or_else(|| (1..=10).map(|q| q * 10).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_override_defaults() {
        let file: FileConfig = toml::from_str(
            r#"
            preset = "chai"
            cr-min = 120
            window = 11
            k1 = 0.02
            metrics = ["SSIM"]
            "#,
        )
        .unwrap();
        let flags = ThresholdArgs {
            cr_min: Some(130),
            ..Default::default()
        };
        let t = thresholds(&flags, &file).unwrap();
        assert_eq!(t.thresholds.cr_min, 130);
        assert_eq!(t.thresholds.cr_max, SkinThresholds::CHAI.cr_max);
        assert!(t.label.starts_with("custom"));

        let mflags = MetricArgs {
            window: Some(9),
            ..Default::default()
        };
        let p = ssim_params(&mflags, &file).unwrap();
        assert_eq!((p.window, p.k1, p.k2, p.stride), (9, 0.02, 0.03, 1));
        assert_eq!(metrics(&mflags, &file).unwrap(), vec![Metric::Ssim]);
        assert_eq!(
            metrics(&MetricArgs::default(), &FileConfig::default()).unwrap(),
            Metric::ALL.to_vec()
        );
    }

    #[test]
    fn unknown_keys_and_presets_are_usage_errors() {
        assert!(toml::from_str::<FileConfig>("colour = 1").is_err());
        let flags = ThresholdArgs {
            preset: Some("hsv".into()),
            ..Default::default()
        };
        assert!(matches!(
            thresholds(&flags, &FileConfig::default()),
            Err(CliError::Usage(_))
        ));
    }
}
