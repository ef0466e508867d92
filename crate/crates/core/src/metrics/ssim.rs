use super::{sliding, MetricResult, SsimParams, WindowStats};
use crate::error::Result;
use crate::pixel::Plane;

/// Per-window SSIM from precomputed moments.
#[inline]
pub(crate) fn ssim_window(s: &WindowStats, c1: f64, c2: f64) -> f64 {
    let num = (2.0 * s.mean_f * s.mean_g + c1) * (2.0 * s.cov_fg + c2);
    let den = (s.mean_f * s.mean_f + s.mean_g * s.mean_g + c1) * (s.var_f + s.var_g + c2);
    num / den
}

/// Luminance, contrast and structure terms of one SSIM window, with
/// `C3 = C2 / 2`. Their product equals the combined window score up to
/// rounding. Luminance and contrast are clamped to at most 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SsimComponents {
    pub luminance: f64,
    pub contrast: f64,
    pub structure: f64,
}

pub fn ssim_components(s: &WindowStats, c1: f64, c2: f64) -> SsimComponents {
    let (sd_f, sd_g) = (s.var_f.max(0.0).sqrt(), s.var_g.max(0.0).sqrt());
    let c3 = c2 / 2.0;
    SsimComponents {
        luminance: ((2.0 * s.mean_f * s.mean_g + c1) / (s.mean_f * s.mean_f + s.mean_g * s.mean_g + c1)).min(1.0),
        contrast: ((2.0 * sd_f * sd_g + c2) / (s.var_f + s.var_g + c2)).min(1.0),
        structure: (s.cov_fg + c3) / (sd_f * sd_g + c3),
    }
}

/// Mean SSIM over uniform sliding windows.
pub fn ssim(x: &Plane, y: &Plane, p: &SsimParams) -> Result<MetricResult> {
    let (c1, c2, win) = (p.c1(), p.c2(), p.window);
    sliding(x, y, p, |x0, y0| {
        Some(ssim_window(&WindowStats::over(x, y, x0, y0, win, win), c1, c2))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_zero_planes() {
        let p = SsimParams::default();
        let f = Plane::from_fn(12, 10, |x, y| ((x * 13 + y * 29) % 251) as f64).unwrap();
        assert_eq!(ssim(&f, &f, &p).unwrap().score, 1.0);
        let z = Plane::filled(8, 8, 0.0).unwrap();
        assert_eq!(ssim(&z, &z, &p).unwrap().score, 1.0);
    }

    #[test]
    fn components_multiply_to_window_score() {
        let f = Plane::from_fn(8, 8, |x, y| ((x * 31 + y * 17) % 97) as f64).unwrap();
        let g = Plane::from_fn(8, 8, |x, y| ((x * 11 + y * 23) % 89) as f64 + 5.0).unwrap();
        let s = crate::metrics::window_stats(&f, &g).unwrap();
        let p = SsimParams::default();
        let c = ssim_components(&s, p.c1(), p.c2());
        let whole = ssim_window(&s, p.c1(), p.c2());
        assert!((c.luminance * c.contrast * c.structure - whole).abs() < 1e-12);
        assert!(c.luminance <= 1.0 && c.contrast <= 1.0);
    }

    #[test]
    fn brightness_shift_only_lowers_luminance_term() {
        let p = SsimParams::default();
        let x = Plane::from_fn(8, 8, |i, j| (i * 8 + j * 3) as f64).unwrap();
        let y = x.map(|v| v + 10.0);
        let r = ssim(&x, &y, &p).unwrap();

        // one window; the contrast-structure factor is exactly 1
        let n = 64.0;
        let mx = x.samples().iter().sum::<f64>() / n;
        let my = mx + 10.0;
        let c1 = 6.5025;
        let lum = (2.0 * mx * my + c1) / (mx * mx + my * my + c1);
        assert!(lum < 1.0);
        assert!((r.score - lum).abs() < 1e-12, "{} vs {lum}", r.score);
    }
}
