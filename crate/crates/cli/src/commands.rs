use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use faceqa::metrics::SsimParams;
use faceqa::report::{score_line, write_csv, write_score_map, ReportHeader, ReportRecord};
use faceqa::sweep::{resolve_regions, run_sweep_on, Region, RegionSource, SweepConfig, CODEC_ID};
use faceqa::{detect_regions, load_image, luma_plane, rgb_to_ycrcb, Rect, RegionPair, RgbImage};

use crate::args::{CompareArgs, SegmentArgs, SweepArgs};
use crate::config::{self, FileConfig, ResolvedRegions, ResolvedThresholds};
use crate::error::CliError;

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map_or_else(|| "out".into(), |s| s.to_string_lossy().into_owned());
    path.with_file_name(format!("{stem}{suffix}"))
}

/// Face and body rects: explicit flags win, anything missing is detected.
fn region_pair(img: &RgbImage, t: &ResolvedThresholds, r: &ResolvedRegions) -> Result<RegionPair, CliError> {
    if let (Some(face), Some(body)) = (r.face_rect, r.body_rect) {
        return Ok(RegionPair { face, body });
    }
    let detected = detect_regions(&rgb_to_ycrcb(img), &t.thresholds, t.fill_holes)?.regions;
    Ok(RegionPair {
        face: r.face_rect.unwrap_or(detected.face),
        body: r.body_rect.unwrap_or(detected.body),
    })
}

pub fn segment(args: &SegmentArgs, out: &mut impl Write) -> Result<(), CliError> {
    let file = FileConfig::load(args.config.as_deref())?;
    let t = config::thresholds(&args.thresholds, &file)?;
    let img = load_image(&args.image)?;
    let det = detect_regions(&rgb_to_ycrcb(&img), &t.thresholds, t.fill_holes)?;

    let mask_path = args
        .out
        .clone()
        .unwrap_or_else(|| with_suffix(&args.image, ".mask.png"));
    let mut png = Vec::new();
    det.skin.write_png(&mut png)?;
    write_file(&mask_path, &png)?;

    let RegionPair { face, body } = det.regions;
    writeln!(out, "face={face} body={body}").map_err(stdout_err)?;
    Ok(())
}

pub fn compare(args: &CompareArgs, out: &mut impl Write) -> Result<(), CliError> {
    let file = FileConfig::load(args.config.as_deref())?;
    let t = config::thresholds(&args.thresholds, &file)?;
    let params = config::ssim_params(&args.metric, &file)?;
    let mut metrics = config::metrics(&args.metric, &file)?;
    metrics.sort();
    metrics.dedup();
    let r = config::regions(&args.regions, &file)?;

    let reference = load_image(&args.reference)?;
    let distorted = load_image(&args.distorted)?;
    let f = luma_plane(&rgb_to_ycrcb(&reference));
    let g = luma_plane(&rgb_to_ycrcb(&distorted));
    f.check_shape(&g)?;

    let mut regions = r.regions.clone().unwrap_or_else(|| {
        let mut v = vec![Region::Full];
        if r.face_rect.is_some() {
            v.push(Region::Face);
        }
        if r.body_rect.is_some() {
            v.push(Region::Body);
        }
        v
    });
    regions.sort();
    regions.dedup();

    let needs_pair = regions.iter().any(|&reg| reg != Region::Full);
    let pair = if needs_pair {
        Some(region_pair(&reference, &t, &r)?)
    } else {
        None
    };
    if let Some(dir) = &args.map_dir {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.clone(),
            source,
        })?;
    }

    for region in regions {
        let rect = match region {
            Region::Full => f.full_rect(),
            Region::Face => pair.expect("pair resolved").face,
            Region::Body => pair.expect("pair resolved").body,
        };
        let (fc, gc) = (f.crop(rect)?, g.crop(rect)?);
        for &metric in &metrics {
            let res = metric.compute(&fc, &gc, &params)?;
            writeln!(out, "{}", score_line(region, metric, res.score)).map_err(stdout_err)?;
            if let Some(dir) = &args.map_dir {
                let path = dir.join(format!("{}_{}.map", region.name(), metric.name().to_ascii_lowercase()));
                let mut buf = Vec::new();
                write_score_map(&res.map, &mut buf).expect("writing to a Vec cannot fail");
                write_file(&path, &buf)?;
            }
        }
    }
    Ok(())
}

pub fn sweep(args: &SweepArgs, out: &mut impl Write) -> Result<(), CliError> {
    let file = FileConfig::load(args.config.as_deref())?;
    let t = config::thresholds(&args.thresholds, &file)?;
    let params = config::ssim_params(&args.metric, &file)?;
    let metrics = config::metrics(&args.metric, &file)?;
    let r = config::regions(&args.regions, &file)?;
    let qualities = config::qualities(args.qualities.as_ref(), &file);

    let img = load_image(&args.image)?;
    let regions = r.regions.clone().unwrap_or_else(|| vec![Region::Face, Region::Body]);
    let needs_pair = regions.iter().any(|&reg| reg != Region::Full);
    let region_source = if needs_pair {
        RegionSource::Explicit(region_pair(&img, &t, &r)?)
    } else {
        RegionSource::default()
    };
    let cfg = SweepConfig {
        qualities,
        metrics,
        regions,
        region_source,
        ssim_params: params,
    };
    cfg.validate()?;
    let rects = resolve_regions(&img, &cfg)?;
    let table = run_sweep_on(&img, &cfg, &rects)?;

    let csv_path = args
        .out
        .clone()
        .unwrap_or_else(|| with_suffix(&args.image, ".sweep.csv"));
    let plot_path = args.plot_out.clone().unwrap_or_else(|| csv_path.with_extension("dat"));
    let record = ReportRecord {
        header: header(&args.image, &t, params, rects),
        table,
    };

    let mut csv = Vec::new();
    write_csv(&record.table, &mut csv)?;
    write_file(&csv_path, &csv)?;
    write_file(&plot_path, record.plot_data_string().as_bytes())?;

    for line in record.header.lines() {
        writeln!(out, "{line}").map_err(stdout_err)?;
    }
    writeln!(out, "rows: {}", record.table.rows.len()).map_err(stdout_err)?;
    writeln!(out, "csv: {}", csv_path.display()).map_err(stdout_err)?;
    writeln!(out, "plot data: {}", plot_path.display()).map_err(stdout_err)?;
    Ok(())
}

fn header(image: &Path, t: &ResolvedThresholds, params: SsimParams, regions: Vec<(Region, Rect)>) -> ReportHeader {
    ReportHeader {
        tool_version: env!("CARGO_PKG_VERSION").into(),
        codec: CODEC_ID.into(),
        image_path: image.display().to_string(),
        thresholds: t.label.clone(),
        params,
        regions,
    }
}

fn stdout_err(source: std::io::Error) -> CliError {
    CliError::Io {
        path: "<stdout>".into(),
        source,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use faceqa::metrics::Metric;

    #[test]
    fn default_output_names() {
        assert_eq!(
            with_suffix(Path::new("a/b/photo.png"), ".mask.png"),
            Path::new("a/b/photo.mask.png")
        );
        assert_eq!(
            with_suffix(Path::new("photo.tif"), ".sweep.csv").with_extension("dat"),
            Path::new("photo.sweep.dat")
        );
    }

    #[test]
    fn metric_names_are_known() {
        for m in Metric::ALL {
            assert_eq!(m.name().parse::<Metric>().unwrap(), m);
        }
    }
}
