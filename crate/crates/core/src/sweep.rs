//! JPEG quality sweep: compress at each quality factor, decode, and score
//! face/body crops of the result against the uncompressed original.

use std::fmt;
use std::io::Cursor;
use std::str::FromStr;

use image::codecs::jpeg::JpegEncoder;
use image::{ExtendedColorType, ImageFormat};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metrics::{Metric, SsimParams};
use crate::pixel::{luma_plane, rgb_to_ycrcb, Plane, Rect, RgbImage};
use crate::segment::{detect_regions, RegionPair, SkinThresholds};

/// Identifies the codec used by [`jpeg_roundtrip`]; absolute scores depend
/// on it.
pub const CODEC_ID: &str = "image-rs 0.25 JpegEncoder (baseline, 4:4:4) / zune-jpeg decoder";

/// Encodes `img` as baseline JPEG at `quality` and decodes it again.
pub fn jpeg_roundtrip(img: &RgbImage, quality: u8) -> Result<RgbImage> {
    if !(1..=100).contains(&quality) {
        return Err(Error::InvalidParam(format!(
            "JPEG quality must be in 1..=100, got {quality}"
        )));
    }
    let mut buf = Vec::new();
    JpegEncoder::new_with_quality(&mut buf, quality)
        .encode(
            &img.to_interleaved(),
            img.width() as u32,
            img.height() as u32,
            ExtendedColorType::Rgb8,
        )
        .map_err(|e| Error::Codec(format!("encode at quality {quality}: {e}")))?;
    let decoded = image::load(Cursor::new(&buf), ImageFormat::Jpeg)
        .map_err(|e| Error::Codec(format!("decode at quality {quality}: {e}")))?;
    let out: RgbImage = decoded.to_rgb8().into();
    if out.width() != img.width() || out.height() != img.height() {
        return Err(Error::Codec(format!(
            "decoded {}x{} from a {}x{} source",
            out.width(),
            out.height(),
            img.width(),
            img.height()
        )));
    }
    Ok(out)
}

/// Image region a score refers to, in report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Region {
    Face,
    Body,
    Full,
}

impl Region {
    pub const ALL: [Region; 3] = [Region::Face, Region::Body, Region::Full];

    pub fn name(&self) -> &'static str {
        match self {
            Region::Face => "face",
            Region::Body => "body",
            Region::Full => "full",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "face" => Ok(Region::Face),
            "body" => Ok(Region::Body),
            "full" => Ok(Region::Full),
            other => Err(Error::InvalidParam(format!("unknown region {other:?}"))),
        }
    }
}

/// Where face and body rects come from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RegionSource {
    /// Segment the original image.
    Auto {
        thresholds: SkinThresholds,
        fill_holes: bool,
    },
    Explicit(RegionPair),
}

impl Default for RegionSource {
    fn default() -> Self {
        RegionSource::Auto {
            thresholds: SkinThresholds::PAPER,
            fill_holes: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    /// Strictly increasing JPEG quality factors in `1..=100`.
    pub qualities: Vec<u8>,
    pub metrics: Vec<Metric>,
    pub regions: Vec<Region>,
    pub region_source: RegionSource,
    pub ssim_params: SsimParams,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            qualities: (1..=10).map(|q| q * 10).collect(),
            metrics: Metric::ALL.to_vec(),
            regions: vec![Region::Face, Region::Body],
            region_source: RegionSource::default(),
            ssim_params: SsimParams::default(),
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.qualities.is_empty() {
            return Err(Error::InvalidParam("at least one quality level is required".into()));
        }
        if let Some(q) = self.qualities.iter().find(|q| !(1..=100).contains(*q)) {
            return Err(Error::InvalidParam(format!("quality {q} outside 1..=100")));
        }
        if self.qualities.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParam("qualities must be strictly increasing".into()));
        }
        if self.metrics.is_empty() {
            return Err(Error::InvalidParam("at least one metric is required".into()));
        }
        if self.regions.is_empty() {
            return Err(Error::InvalidParam("at least one region is required".into()));
        }
        self.ssim_params.validate()
    }

    fn canonical_metrics(&self) -> Vec<Metric> {
        let mut m = self.metrics.clone();
        m.sort();
        m.dedup();
        m
    }

    fn canonical_regions(&self) -> Vec<Region> {
        let mut r = self.regions.clone();
        r.sort();
        r.dedup();
        r
    }

    /// Rows a sweep with this config produces.
    pub fn row_count(&self) -> usize {
        self.qualities.len() * self.canonical_metrics().len() * self.canonical_regions().len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub quality: u8,
    pub region: Region,
    pub metric: Metric,
    pub value: f64,
}

/// Scores ordered by quality, then region, then metric.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn new(mut rows: Vec<SweepRow>) -> Self {
        rows.sort_by(|a, b| (a.quality, a.region, a.metric).cmp(&(b.quality, b.region, b.metric)));
        Self { rows }
    }

    pub fn get(&self, quality: u8, region: Region, metric: Metric) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.quality == quality && r.region == region && r.metric == metric)
            .map(|r| r.value)
    }

    /// `(quality, value)` pairs for one region and metric, by quality.
    pub fn series(&self, region: Region, metric: Metric) -> Vec<(u8, f64)> {
        self.rows
            .iter()
            .filter(|r| r.region == region && r.metric == metric)
            .map(|r| (r.quality, r.value))
            .collect()
    }

    fn distinct<T: Ord + Copy>(&self, f: impl Fn(&SweepRow) -> T) -> Vec<T> {
        let mut v: Vec<T> = self.rows.iter().map(f).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn qualities(&self) -> Vec<u8> {
        self.distinct(|r| r.quality)
    }

    pub fn regions(&self) -> Vec<Region> {
        self.distinct(|r| r.region)
    }

    pub fn metrics(&self) -> Vec<Metric> {
        self.distinct(|r| r.metric)
    }
}

/// Resolves the rect of every requested region on `img`.
pub fn resolve_regions(img: &RgbImage, cfg: &SweepConfig) -> Result<Vec<(Region, Rect)>> {
    let regions = cfg.canonical_regions();
    let needs_pair = regions.iter().any(|r| *r != Region::Full);
    let pair = match (needs_pair, cfg.region_source) {
        (false, _) => None,
        (true, RegionSource::Explicit(pair)) => Some(pair),
        (true, RegionSource::Auto { thresholds, fill_holes }) => {
            Some(detect_regions(&rgb_to_ycrcb(img), &thresholds, fill_holes)?.regions)
        }
    };
    let full = Rect::new(0, 0, img.width(), img.height());
    regions
        .into_iter()
        .map(|region| {
            let rect = match region {
                Region::Face => pair.expect("pair resolved").face,
                Region::Body => pair.expect("pair resolved").body,
                Region::Full => full,
            };
            rect.check_inside(img.width(), img.height())?;
            Ok((region, rect))
        })
        .collect()
}

fn check_region_size(region: Region, rect: Rect, cfg: &SweepConfig) -> Result<()> {
    let mut min = cfg.ssim_params.window;
    if cfg.metrics.contains(&Metric::Gssim) {
        min = min.max(3);
    }
    if rect.w < min || rect.h < min {
        return Err(Error::Size {
            what: format!("{region} region"),
            w: rect.w,
            h: rect.h,
            min_w: min,
            min_h: min,
        });
    }
    Ok(())
}

/// Runs the sweep with region rects already resolved.
pub fn run_sweep_on(original: &RgbImage, cfg: &SweepConfig, regions: &[(Region, Rect)]) -> Result<SweepTable> {
    cfg.validate()?;
    for &(region, rect) in regions {
        rect.check_inside(original.width(), original.height())?;
        check_region_size(region, rect, cfg)?;
    }
    let metrics = cfg.canonical_metrics();
    let reference = luma_plane(&rgb_to_ycrcb(original));
    let ref_crops: Vec<Plane> = regions
        .iter()
        .map(|&(_, rect)| reference.crop(rect))
        .collect::<Result<_>>()?;

    let per_quality: Vec<Vec<SweepRow>> = cfg
        .qualities
        .par_iter()
        .map(|&quality| {
            let degraded = luma_plane(&rgb_to_ycrcb(&jpeg_roundtrip(original, quality)?));
            let mut rows = Vec::with_capacity(regions.len() * metrics.len());
            for (&(region, rect), ref_crop) in regions.iter().zip(&ref_crops) {
                let deg_crop = degraded.crop(rect)?;
                for &metric in &metrics {
                    let value = metric.compute(ref_crop, &deg_crop, &cfg.ssim_params)?.score;
                    rows.push(SweepRow {
                        quality,
                        region,
                        metric,
                        value,
                    });
                }
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;

    Ok(SweepTable::new(per_quality.into_iter().flatten().collect()))
}

/// Resolves regions and runs the full sweep.
pub fn run_sweep(original: &RgbImage, cfg: &SweepConfig) -> Result<SweepTable> {
    cfg.validate()?;
    let regions = resolve_regions(original, cfg)?;
    run_sweep_on(original, cfg, &regions)
}
