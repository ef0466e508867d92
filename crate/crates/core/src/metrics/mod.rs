//! Full-reference quality metrics over sliding windows.
//!
//! Each metric walks a `window x window` patch across both planes with the
//! configured stride, scores every position independently and pools the
//! resulting map by its arithmetic mean. Window statistics are plain
//! (unweighted) sample moments with an `n - 1` divisor.

mod gssim;
mod ssim;
mod stats;
mod uiqi;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pixel::Plane;

pub use gssim::{gradient_magnitude, gssim, GradientPlane};
pub use ssim::{ssim, ssim_components, SsimComponents};
pub use stats::{q_components, window_stats, Degeneracy, QComponents, WindowStats};
pub use uiqi::uiqi;

/// Constants and window geometry shared by all three metrics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SsimParams {
    pub k1: f64,
    pub k2: f64,
    pub bit_depth: u32,
    pub window: usize,
    pub stride: usize,
}

impl Default for SsimParams {
    fn default() -> Self {
        Self {
            k1: 0.01,
            k2: 0.03,
            bit_depth: 8,
            window: 8,
            stride: 1,
        }
    }
}

impl SsimParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.k1 > 0.0 && self.k1.is_finite()) || !(self.k2 > 0.0 && self.k2.is_finite()) {
            return Err(Error::InvalidParam(format!(
                "k1 and k2 must be positive, got k1={} k2={}",
                self.k1, self.k2
            )));
        }
        if self.window < 2 {
            return Err(Error::InvalidParam(format!("window must be >= 2, got {}", self.window)));
        }
        if self.stride < 1 {
            return Err(Error::InvalidParam("stride must be >= 1".into()));
        }
        if !(1..=32).contains(&self.bit_depth) {
            return Err(Error::InvalidParam(format!(
                "bit depth must be in 1..=32, got {}",
                self.bit_depth
            )));
        }
        Ok(())
    }

    /// `L = 2^bits - 1`.
    pub fn dynamic_range(&self) -> f64 {
        2f64.powi(self.bit_depth as i32) - 1.0
    }

    pub fn c1(&self) -> f64 {
        (self.k1 * self.dynamic_range()).powi(2)
    }

    pub fn c2(&self) -> f64 {
        (self.k2 * self.dynamic_range()).powi(2)
    }

    /// Number of window positions along an axis of length `len`.
    pub fn positions(&self, len: usize) -> usize {
        if len < self.window {
            0
        } else {
            (len - self.window) / self.stride + 1
        }
    }
}

/// The three supported metrics, in report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    Q,
    Ssim,
    Gssim,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Q, Metric::Ssim, Metric::Gssim];

    pub fn name(&self) -> &'static str {
        match self {
            Metric::Q => "Q",
            Metric::Ssim => "SSIM",
            Metric::Gssim => "GSSIM",
        }
    }

    pub fn compute(&self, reference: &Plane, distorted: &Plane, p: &SsimParams) -> Result<MetricResult> {
        match self {
            Metric::Q => uiqi(reference, distorted, p),
            Metric::Ssim => ssim(reference, distorted, p),
            Metric::Gssim => gssim(reference, distorted, p),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "Q" | "UIQI" => Ok(Metric::Q),
            "SSIM" => Ok(Metric::Ssim),
            "GSSIM" | "G-SSIM" => Ok(Metric::Gssim),
            other => Err(Error::InvalidParam(format!("unknown metric {other:?}"))),
        }
    }
}

/// Per-window scores laid out on the window grid. `None` marks a skipped
/// (degenerate) window.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreMap {
    pub cols: usize,
    pub rows: usize,
    pub window: usize,
    pub stride: usize,
    pub values: Vec<Option<f64>>,
}

impl ScoreMap {
    pub fn get(&self, col: usize, row: usize) -> Option<f64> {
        self.values[row * self.cols + col]
    }

    pub fn usable(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().filter_map(|v| *v)
    }
}

/// Pooled score plus the map it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricResult {
    pub score: f64,
    pub map: ScoreMap,
    pub windows_used: usize,
    pub windows_skipped: usize,
}

/// Reduction applied to a score map.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Pooling {
    #[default]
    Mean,
}

/// Pools usable window scores. Summation runs in index order so the result
/// does not depend on how the map was computed.
pub fn pool(scores: &[f64], method: Pooling) -> Result<f64> {
    if scores.is_empty() {
        return Err(Error::Degenerate);
    }
    match method {
        Pooling::Mean => Ok(scores.iter().sum::<f64>() / scores.len() as f64),
    }
}

/// Checks inputs and runs `score_at(x0, y0)` on every window position.
pub(crate) fn sliding<F>(f: &Plane, g: &Plane, p: &SsimParams, score_at: F) -> Result<MetricResult>
where
    F: Fn(usize, usize) -> Option<f64> + Sync,
{
    p.validate()?;
    f.check_shape(g)?;
    if f.width() < p.window || f.height() < p.window {
        return Err(Error::Size {
            what: "image".into(),
            w: f.width(),
            h: f.height(),
            min_w: p.window,
            min_h: p.window,
        });
    }
    let cols = p.positions(f.width());
    let rows = p.positions(f.height());
    let values: Vec<Option<f64>> = (0..rows * cols)
        .into_par_iter()
        .map(|i| score_at((i % cols) * p.stride, (i / cols) * p.stride))
        .collect();
    let usable: Vec<f64> = values.iter().filter_map(|v| *v).collect();
    let score = pool(&usable, Pooling::Mean)?;
    Ok(MetricResult {
        score,
        windows_used: usable.len(),
        windows_skipped: values.len() - usable.len(),
        map: ScoreMap {
            cols,
            rows,
            window: p.window,
            stride: p.stride,
            values,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pixel::Rect;
    use proptest::prelude::*;

    #[test]
    fn pool_examples() {
        assert_eq!(pool(&[1.0], Pooling::Mean).unwrap(), 1.0);
        assert_eq!(pool(&[0.5, 1.0], Pooling::Mean).unwrap(), 0.75);
        assert!(matches!(pool(&[], Pooling::Mean), Err(Error::Degenerate)));
    }

    #[test]
    fn default_constants() {
        let p = SsimParams::default();
        assert_eq!(p.dynamic_range(), 255.0);
        assert!((p.c1() - 6.5025).abs() < 1e-12);
        assert!((p.c2() - 58.5225).abs() < 1e-12);
    }

    #[test]
    fn params_validation() {
        let bad = [
            SsimParams {
                k1: 0.0,
                ..Default::default()
            },
            SsimParams {
                k2: -1.0,
                ..Default::default()
            },
            SsimParams {
                window: 1,
                ..Default::default()
            },
            SsimParams {
                stride: 0,
                ..Default::default()
            },
            SsimParams {
                bit_depth: 0,
                ..Default::default()
            },
        ];
        for p in bad {
            assert!(p.validate().is_err(), "{p:?}");
        }
    }

    #[test]
    fn window_count_arithmetic() {
        for (w, h, win, stride) in [(16, 16, 8, 1), (17, 9, 8, 3), (8, 8, 8, 5), (30, 12, 4, 4)] {
            let p = SsimParams {
                window: win,
                stride,
                ..Default::default()
            };
            let f = Plane::from_fn(w, h, |x, y| (x * 3 + y * 5 % 7) as f64).unwrap();
            let r = ssim(&f, &f, &p).unwrap();
            let expect = ((w - win) / stride + 1) * ((h - win) / stride + 1);
            assert_eq!(r.map.values.len(), expect);
            assert_eq!(r.windows_used + r.windows_skipped, expect);
        }
    }

    #[test]
    fn metric_names_round_trip() {
        for m in Metric::ALL {
            assert_eq!(m.name().parse::<Metric>().unwrap(), m);
        }
        assert!("PSNR".parse::<Metric>().is_err());
    }

    fn plane_pair() -> impl Strategy<Value = (Plane, Plane)> {
        let px = proptest::collection::vec(0u8..=255, 256);
        (px.clone(), px).prop_map(|(a, b)| {
            let to_plane = |v: Vec<u8>| Plane::new(16, 16, v.into_iter().map(f64::from).collect()).unwrap();
            (to_plane(a), to_plane(b))
        })
    }

    proptest! {
        #[test]
        fn bounded_and_symmetric((f, g) in plane_pair()) {
            let p = SsimParams::default();
            for m in Metric::ALL {
                let ab = m.compute(&f, &g, &p);
                let ba = m.compute(&g, &f, &p);
                match (ab, ba) {
                    (Ok(ab), Ok(ba)) => {
                        prop_assert!((ab.score - ba.score).abs() <= 1e-12);
                        match m {
                            Metric::Q => prop_assert!((-1.0..=1.0).contains(&ab.score)),
                            Metric::Ssim => prop_assert!(ab.score <= 1.0 + 1e-9),
                            Metric::Gssim => prop_assert!(ab.score.is_finite()),
                        }
                    }
                    (Err(Error::Degenerate), Err(Error::Degenerate)) => prop_assert_eq!(m, Metric::Q),
                    (a, b) => prop_assert!(false, "{:?} vs {:?}", a.err(), b.err()),
                }
            }
        }

        #[test]
        fn components_stay_in_unit_range((f, g) in plane_pair()) {
            let p = SsimParams::default();
            let w = Rect::new(4, 4, 8, 8);
            let s = window_stats(&f.crop(w).unwrap(), &g.crop(w).unwrap()).unwrap();
            let q = q_components(&s);
            let c = ssim_components(&s, p.c1(), p.c2());
            for v in [q.luminance, q.contrast, c.luminance, c.contrast] {
                prop_assert!((0.0..=1.0).contains(&v), "{v}");
            }
            prop_assert!((-1.0..=1.0).contains(&q.correlation));
        }
    }
}
