use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use faceqa::metrics::Metric;
use faceqa::sweep::Region;
use faceqa::Rect;

#[derive(Debug, Parser)]
#[command(name = "faceqa", version, about = "Face/body image quality under JPEG compression")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detect skin, write a 1-bit mask and print the face and body rects.
    Segment(SegmentArgs),
    /// Score a distorted image against a reference.
    Compare(CompareArgs),
    /// Run a JPEG quality sweep and write CSV plus plot data.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct SegmentArgs {
    pub image: PathBuf,

    #[command(flatten)]
    pub thresholds: ThresholdArgs,

    /// Mask output path (default: <image stem>.mask.png next to the input).
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// TOML config file; explicit flags take precedence over it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub reference: PathBuf,
    pub distorted: PathBuf,

    #[command(flatten)]
    pub thresholds: ThresholdArgs,

    #[command(flatten)]
    pub metric: MetricArgs,

    #[command(flatten)]
    pub regions: RegionArgs,

    /// Write per-window score maps into this directory.
    #[arg(long)]
    pub map_dir: Option<PathBuf>,

    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub image: PathBuf,

    #[command(flatten)]
    pub thresholds: ThresholdArgs,

    #[command(flatten)]
    pub metric: MetricArgs,

    #[command(flatten)]
    pub regions: RegionArgs,

    /// JPEG quality factors, strictly increasing.
    #[arg(long, value_delimiter = ',')]
    pub qualities: Option<Vec<u8>>,

    /// CSV output path.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Plot-data output path (default: the CSV path with a .dat extension).
    #[arg(long)]
    pub plot_out: Option<PathBuf>,

    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Default, Args)]
pub struct ThresholdArgs {
    /// Named threshold preset: paper or chai.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub cr_min: Option<u8>,
    #[arg(long)]
    pub cr_max: Option<u8>,
    #[arg(long)]
    pub cb_min: Option<u8>,
    #[arg(long)]
    pub cb_max: Option<u8>,
    /// Fill holes in the detected face blob before taking its bounding box.
    #[arg(long)]
    pub fill_holes: bool,
}

#[derive(Debug, Default, Args)]
pub struct MetricArgs {
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long)]
    pub stride: Option<usize>,
    #[arg(long)]
    pub k1: Option<f64>,
    #[arg(long)]
    pub k2: Option<f64>,
    /// Metrics to compute: Q, SSIM, GSSIM.
    #[arg(long, value_delimiter = ',')]
    pub metrics: Option<Vec<Metric>>,
}

#[derive(Debug, Default, Args)]
pub struct RegionArgs {
    /// Face rect as x,y,w,h (skips auto-detection).
    #[arg(long)]
    pub face_rect: Option<Rect>,
    /// Body rect as x,y,w,h.
    #[arg(long)]
    pub body_rect: Option<Rect>,
    /// Regions to score: face, body, full.
    #[arg(long, value_delimiter = ',')]
    pub regions: Option<Vec<Region>>,
}
