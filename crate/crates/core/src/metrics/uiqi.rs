use super::{sliding, stats::q_components, MetricResult, SsimParams, WindowStats};
use crate::error::Result;
use crate::pixel::Plane;

/// Universal image quality index: correlation x luminance x contrast per
/// window, mean-pooled over the windows that are not degenerate.
///
/// `k1`, `k2` and `bit_depth` in `p` are unused; only the window geometry
/// applies.
pub fn uiqi(f: &Plane, g: &Plane, p: &SsimParams) -> Result<MetricResult> {
    let win = p.window;
    sliding(f, g, p, |x0, y0| {
        q_components(&WindowStats::over(f, g, x0, y0, win, win)).value()
    })
}
