use crate::error::{Error, Result};
use crate::pixel::Plane;

/// First and second moments of a pair of co-located windows.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowStats {
    pub mean_f: f64,
    pub mean_g: f64,
    pub var_f: f64,
    pub var_g: f64,
    pub cov_fg: f64,
    pub n: usize,
}

impl WindowStats {
    /// Two-pass moments over the `w x h` window at `(x0, y0)`.
    pub(crate) fn over(f: &Plane, g: &Plane, x0: usize, y0: usize, w: usize, h: usize) -> Self {
        let n = w * h;
        let (mut sum_f, mut sum_g) = (0.0, 0.0);
        for y in y0..y0 + h {
            let (rf, rg) = (&f.row(y)[x0..x0 + w], &g.row(y)[x0..x0 + w]);
            sum_f += rf.iter().sum::<f64>();
            sum_g += rg.iter().sum::<f64>();
        }
        let mean_f = sum_f / n as f64;
        let mean_g = sum_g / n as f64;

        let (mut ff, mut gg, mut fg) = (0.0, 0.0, 0.0);
        for y in y0..y0 + h {
            let (rf, rg) = (&f.row(y)[x0..x0 + w], &g.row(y)[x0..x0 + w]);
            for (&a, &b) in rf.iter().zip(rg) {
                let (da, db) = (a - mean_f, b - mean_g);
                ff += da * da;
                gg += db * db;
                fg += da * db;
            }
        }
        let d = (n - 1) as f64;
        WindowStats {
            mean_f,
            mean_g,
            var_f: ff / d,
            var_g: gg / d,
            cov_fg: fg / d,
            n,
        }
    }
}

/// Sample means, variances and covariance of two equally sized windows.
///
/// Variances and covariance use the unbiased `n - 1` divisor.
pub fn window_stats(f_win: &Plane, g_win: &Plane) -> Result<WindowStats> {
    f_win.check_shape(g_win)?;
    if f_win.len() < 2 {
        return Err(Error::Size {
            what: "window".into(),
            w: f_win.width(),
            h: f_win.height(),
            min_w: 2,
            min_h: 1,
        });
    }
    Ok(WindowStats::over(f_win, g_win, 0, 0, f_win.width(), f_win.height()))
}

/// Why a window's Q components could not all be evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degeneracy {
    /// Both windows are flat with the same mean; treated as a perfect match.
    ConstantMatch,
    /// At least one window is flat (or the luminance term is 0/0) and the
    /// pair is not a constant match. Such windows are skipped when pooling.
    ZeroVariance,
}

/// Correlation, luminance and contrast factors of the quality index.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QComponents {
    pub correlation: f64,
    pub luminance: f64,
    pub contrast: f64,
    pub degeneracy: Option<Degeneracy>,
}

impl QComponents {
    /// Window score, or `None` if the window must be skipped.
    pub fn value(&self) -> Option<f64> {
        match self.degeneracy {
            None => Some(self.correlation * self.luminance * self.contrast),
            Some(Degeneracy::ConstantMatch) => Some(1.0),
            Some(Degeneracy::ZeroVariance) => None,
        }
    }
}

/// Splits Q into its three factors.
///
/// Each factor is bounded by 1 in magnitude; results are clamped so that
/// rounding cannot push them past the bound.
///
/// Zero denominators never produce NaN: the affected factor is set to 1 when
/// both sides agree (both flat, or both means zero) and the correlation is
/// set to 0 when only one side is flat. The `degeneracy` flag records which
/// case applied.
pub fn q_components(s: &WindowStats) -> QComponents {
    let sd_f = s.var_f.max(0.0).sqrt();
    let sd_g = s.var_g.max(0.0).sqrt();

    let lum_den = s.mean_f * s.mean_f + s.mean_g * s.mean_g;
    let luminance = if lum_den == 0.0 {
        1.0
    } else {
        (2.0 * s.mean_f * s.mean_g / lum_den).clamp(-1.0, 1.0)
    };

    let con_den = s.var_f + s.var_g;
    let contrast = if con_den == 0.0 {
        1.0
    } else {
        (2.0 * sd_f * sd_g / con_den).min(1.0)
    };

    let sd_prod = sd_f * sd_g;
    if sd_prod == 0.0 {
        let flat_match = s.var_f == 0.0 && s.var_g == 0.0 && s.mean_f == s.mean_g;
        return QComponents {
            correlation: if flat_match { 1.0 } else { 0.0 },
            luminance,
            contrast,
            degeneracy: Some(if flat_match {
                Degeneracy::ConstantMatch
            } else {
                Degeneracy::ZeroVariance
            }),
        };
    }

    QComponents {
        correlation: (s.cov_fg / sd_prod).clamp(-1.0, 1.0),
        luminance,
        contrast,
        degeneracy: (lum_den == 0.0).then_some(Degeneracy::ZeroVariance),
    }
}
