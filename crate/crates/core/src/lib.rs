//! Full-reference image quality assessment for face and body regions.
//!
//! The crate provides three windowed quality metrics (the universal quality
//! index Q, SSIM and gradient-based SSIM), chroma-threshold skin segmentation
//! in YCrCb, and a JPEG quality sweep that scores face and body crops of a
//! compressed image against the uncompressed original.
//!
//! ```no_run
//! use faceqa::{load_image, rgb_to_ycrcb, luma_plane, ssim, SsimParams};
//!
//! let a = luma_plane(&rgb_to_ycrcb(&load_image("ref.png")?));
//! let b = luma_plane(&rgb_to_ycrcb(&load_image("test.jpg")?));
//! println!("{:.9}", ssim(&a, &b, &SsimParams::default())?.score);
//! # Ok::<(), faceqa::Error>(())
//! ```

pub mod error;
pub mod filter;
pub mod metrics;
pub mod pixel;
pub mod report;
pub mod segment;
pub mod sweep;

pub use error::{Error, Result};
pub use filter::gaussian_blur;
pub use metrics::{
    gradient_magnitude, gssim, pool, q_components, ssim, uiqi, window_stats, Metric, MetricResult, Pooling, ScoreMap,
    SsimParams, WindowStats,
};
pub use pixel::{crop, load_image, luma_plane, rgb_to_ycrcb, Plane, Rect, RgbImage, YCrCbImage};
pub use segment::{
    body_region, detect_regions, face_rect, fill_holes, largest_component, skin_mask, RegionMask, RegionPair,
    SkinThresholds,
};
pub use sweep::{jpeg_roundtrip, run_sweep, Region, RegionSource, SweepConfig, SweepRow, SweepTable};
