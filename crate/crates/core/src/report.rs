//! CSV and plot-data emission for sweep tables.
//!
//! Every number is written with exactly nine decimal places using Rust's
//! locale-independent formatting, so a table parsed back from CSV and
//! re-emitted is byte-identical.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::metrics::{Metric, SsimParams};
use crate::pixel::Rect;
use crate::sweep::{Region, SweepRow, SweepTable};

pub const CSV_HEADER: [&str; 4] = ["quality", "region", "metric", "value"];

/// Fixed nine-decimal rendering used for every reported score.
pub fn format_value(v: f64) -> String {
    format!("{v:.9}")
}

/// `<region> <metric> <value>` as printed by `compare`.
pub fn score_line(region: Region, metric: Metric, value: f64) -> String {
    format!("{region} {metric} {}", format_value(value))
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io {
            path: "<csv>".into(),
            source,
        },
        other => Error::InvalidParam(format!("malformed CSV: {other:?}")),
    }
}

pub fn write_csv<W: Write>(table: &SweepTable, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for row in &table.rows {
        w.write_record([
            row.quality.to_string(),
            row.region.to_string(),
            row.metric.to_string(),
            format_value(row.value),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: "<csv>".into(),
        source,
    })
}

pub fn to_csv_string(table: &SweepTable) -> String {
    let mut buf = Vec::new();
    write_csv(table, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV output is ASCII")
}

pub fn read_csv<R: Read>(input: R) -> Result<SweepTable> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers().map_err(csv_err)?.clone();
    if headers.iter().ne(CSV_HEADER) {
        return Err(Error::InvalidParam(format!(
            "expected CSV header {:?}, got {:?}",
            CSV_HEADER.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_err)?;
        let field = |i: usize| rec.get(i).unwrap_or_default();
        let quality = field(0)
            .parse()
            .map_err(|_| Error::InvalidParam(format!("bad quality {:?}", field(0))))?;
        let value = field(3)
            .parse()
            .map_err(|_| Error::InvalidParam(format!("bad value {:?}", field(3))))?;
        rows.push(SweepRow {
            quality,
            region: field(1).parse()?,
            metric: field(2).parse()?,
            value,
        });
    }
    Ok(SweepTable::new(rows))
}

/// Run metadata written ahead of the data.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportHeader {
    pub tool_version: String,
    pub codec: String,
    pub image_path: String,
    /// Preset name, or `custom` followed by the explicit bounds.
    pub thresholds: String,
    pub params: SsimParams,
    pub regions: Vec<(Region, Rect)>,
}

impl ReportHeader {
    pub fn overlapping_regions(&self) -> bool {
        let find = |want| self.regions.iter().find(|(r, _)| *r == want).map(|(_, rect)| *rect);
        match (find(Region::Face), find(Region::Body)) {
            (Some(f), Some(b)) => f.intersects(&b),
            _ => false,
        }
    }

    pub fn lines(&self) -> Vec<String> {
        let p = &self.params;
        let mut lines = vec![
            format!("faceqa {}", self.tool_version),
            format!("codec: {}", self.codec),
            format!("image: {}", self.image_path),
            format!("thresholds: {}", self.thresholds),
            format!(
                "params: window={} stride={} k1={} k2={} L={}",
                p.window,
                p.stride,
                p.k1,
                p.k2,
                p.dynamic_range()
            ),
        ];
        if !self.regions.is_empty() {
            let rects: Vec<String> = self.regions.iter().map(|(r, rect)| format!("{r}={rect}")).collect();
            lines.push(format!("regions: {}", rects.join(" ")));
        }
        if self.overlapping_regions() {
            lines.push("warning: face and body regions overlap".into());
        }
        lines
    }
}

/// A sweep table together with the metadata that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRecord {
    pub header: ReportHeader,
    pub table: SweepTable,
}

impl ReportRecord {
    /// Gnuplot-style data: `#` header comments, then one block per metric
    /// (two blank lines between blocks). Column 1 is the quality and the
    /// remaining columns follow region order (face, body, full).
    pub fn write_plot_data<W: Write>(&self, mut out: W) -> Result<()> {
        let io = |source| Error::Io {
            path: "<plot data>".into(),
            source,
        };
        let regions = self.table.regions();
        let metrics = self.table.metrics();
        for line in self.header.lines() {
            writeln!(out, "# {line}").map_err(io)?;
        }
        let cols: Vec<&str> = regions.iter().map(Region::name).collect();
        writeln!(out, "# columns: quality {}", cols.join(" ")).map_err(io)?;
        let names: Vec<&str> = metrics.iter().map(Metric::name).collect();
        writeln!(out, "# blocks: {}", names.join(" ")).map_err(io)?;

        for (i, &metric) in metrics.iter().enumerate() {
            if i > 0 {
                writeln!(out, "\n").map_err(io)?;
            }
            for q in self.table.qualities() {
                let mut line = q.to_string();
                for &region in &regions {
                    let v = self.table.get(q, region, metric).unwrap_or(f64::NAN);
                    line.push(' ');
                    line.push_str(&format_value(v));
                }
                writeln!(out, "{line}").map_err(io)?;
            }
        }
        Ok(())
    }

    pub fn plot_data_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_plot_data(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("plot data is UTF-8")
    }
}

/// Writes a per-window score map as a whitespace-separated matrix (one line
/// per window row). Skipped windows are written as `nan`.
pub fn write_score_map<W: Write>(map: &crate::metrics::ScoreMap, mut out: W) -> std::io::Result<()> {
    for row in 0..map.rows {
        let cells: Vec<String> = (0..map.cols)
            .map(|c| map.get(c, row).map_or_else(|| "nan".to_string(), format_value))
            .collect();
        writeln!(out, "{}", cells.join(" "))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table() -> SweepTable {
        let mut rows = Vec::new();
        for q in [10u8, 20] {
            for region in [Region::Face, Region::Body] {
                for metric in Metric::ALL {
                    rows.push(SweepRow {
                        quality: q,
                        region,
                        metric,
                        value: f64::from(q) / 100.0 + if region == Region::Face { 0.5 } else { 0.25 },
                    });
                }
            }
        }
        SweepTable::new(rows)
    }

    fn header() -> ReportHeader {
        ReportHeader {
            tool_version: "0.1.0".into(),
            codec: "test".into(),
            image_path: "x.png".into(),
            thresholds: "paper".into(),
            params: SsimParams::default(),
            regions: vec![
                (Region::Face, Rect::new(1, 1, 8, 8)),
                (Region::Body, Rect::new(0, 9, 10, 10)),
            ],
        }
    }

    #[test]
    fn nine_decimals() {
        assert_eq!(format_value(1.0), "1.000000000");
        assert_eq!(format_value(0.1234567891234), "0.123456789");
        assert_eq!(format_value(-0.5), "-0.500000000");
        assert_eq!(score_line(Region::Face, Metric::Ssim, 0.25), "face SSIM 0.250000000");
    }

    #[test]
    fn csv_layout() {
        let s = to_csv_string(&table());
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "quality,region,metric,value");
        assert_eq!(lines[1], "10,face,Q,0.600000000");
        assert_eq!(lines[4], "10,body,Q,0.350000000");
        assert_eq!(lines.len(), 13);
    }

    #[test]
    fn csv_rejects_wrong_header() {
        assert!(read_csv("q,r,m,v\n".as_bytes()).is_err());
        assert!(read_csv("quality,region,metric,value\n10,face,PSNR,1.0\n".as_bytes()).is_err());
    }

    #[test]
    fn plot_data_blocks() {
        let rec = ReportRecord {
            header: header(),
            table: table(),
        };
        let s = rec.plot_data_string();
        let data: Vec<&str> = s.lines().filter(|l| !l.starts_with('#')).collect();
        let blocks: Vec<Vec<&str>> = data
            .split(|l| l.is_empty())
            .filter(|b| !b.is_empty())
            .map(|b| b.to_vec())
            .collect();
        assert_eq!(blocks.len(), 3);
        assert!(blocks.iter().all(|b| b.len() == 2));
        assert_eq!(blocks[1][0], "10 0.600000000 0.350000000");
        assert!(s.contains("# columns: quality face body"));
        assert!(!s.contains("overlap"));
    }

    #[test]
    fn overlap_is_reported() {
        let mut h = header();
        h.regions[1].1 = Rect::new(0, 0, 5, 5);
        assert!(h.lines().iter().any(|l| l.contains("overlap")));
    }

    proptest! {
        #[test]
        fn csv_round_trip_is_byte_stable(values in proptest::collection::vec(-1.0f64..=1.0, 6)) {
            let rows = values
                .iter()
                .enumerate()
                .map(|(i, &v)| SweepRow {
                    quality: (i / 3 + 1) as u8 * 10,
                    region: Region::Full,
                    metric: Metric::ALL[i % 3],
                    value: v,
                })
                .collect();
            let first = to_csv_string(&SweepTable::new(rows));
            let reparsed = read_csv(first.as_bytes()).unwrap();
            prop_assert_eq!(to_csv_string(&reparsed), first);
        }
    }
}
