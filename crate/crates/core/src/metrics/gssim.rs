use super::{sliding, MetricResult, SsimParams};
use crate::error::{Error, Result};
use crate::pixel::Plane;

/// Sobel gradient magnitude of a plane. Samples are non-negative.
#[derive(Clone, Debug, PartialEq)]
pub struct GradientPlane(Plane);

impl GradientPlane {
    pub fn plane(&self) -> &Plane {
        &self.0
    }

    pub fn into_plane(self) -> Plane {
        self.0
    }
}

/// Pads by one sample on each side. Missing samples are linearly
/// extrapolated from the two nearest (`s[-1] = 2 s[0] - s[1]`), which keeps
/// affine intensity ramps affine across the border.
fn pad_linear(p: &Plane) -> (Vec<f64>, usize) {
    let (w, h) = (p.width(), p.height());
    let pw = w + 2;
    let mut out = vec![0.0; pw * (h + 2)];
    for y in 0..h {
        let row = p.row(y);
        let dst = &mut out[(y + 1) * pw..(y + 2) * pw];
        dst[1..=w].copy_from_slice(row);
        dst[0] = 2.0 * row[0] - row[1];
        dst[w + 1] = 2.0 * row[w - 1] - row[w - 2];
    }
    for x in 0..pw {
        out[x] = 2.0 * out[pw + x] - out[2 * pw + x];
        out[(h + 1) * pw + x] = 2.0 * out[h * pw + x] - out[(h - 1) * pw + x];
    }
    (out, pw)
}

/// 3x3 Sobel responses combined as `sqrt(gx^2 + gy^2)`.
pub fn gradient_magnitude(p: &Plane) -> Result<GradientPlane> {
    let (w, h) = (p.width(), p.height());
    if w < 3 || h < 3 {
        return Err(Error::Size {
            what: "plane".into(),
            w,
            h,
            min_w: 3,
            min_h: 3,
        });
    }
    let (pad, pw) = pad_linear(p);
    let at = |x: usize, y: usize| pad[y * pw + x];
    let mut out = Vec::with_capacity(w * h);
    for y in 1..=h {
        for x in 1..=w {
            let gx = (at(x + 1, y - 1) - at(x - 1, y - 1))
                + 2.0 * (at(x + 1, y) - at(x - 1, y))
                + (at(x + 1, y + 1) - at(x - 1, y + 1));
            let gy = (at(x - 1, y + 1) - at(x - 1, y - 1))
                + 2.0 * (at(x, y + 1) - at(x, y - 1))
                + (at(x + 1, y + 1) - at(x + 1, y - 1));
            out.push((gx * gx + gy * gy).sqrt());
        }
    }
    Ok(GradientPlane(Plane::new(w, h, out)?))
}

/// Gradient-based SSIM.
///
/// Luminance comes from the intensity planes as in SSIM. Contrast and
/// structure use means of the gradient magnitudes `|∇x|`, `|∇y|` over the
/// window:
///
/// ```text
/// c = (2 μ_Gx μ_Gy + C2) / (μ_Gx² + μ_Gy² + C2)
/// s = (μ_GxGy + C3) / (μ_Gx μ_Gy + C3),   C3 = C2 / 2
/// ```
///
/// where `μ_GxGy` is the mean of `|∇x_i| |∇y_i|`. Note that `s` is only 1
/// on identical inputs when the window's gradient magnitude is constant;
/// otherwise it exceeds 1.
pub fn gssim(x: &Plane, y: &Plane, p: &SsimParams) -> Result<MetricResult> {
    p.validate()?;
    x.check_shape(y)?;
    let gx = gradient_magnitude(x)?.into_plane();
    let gy = gradient_magnitude(y)?.into_plane();
    let (c1, c2, win) = (p.c1(), p.c2(), p.window);
    let c3 = c2 / 2.0;
    let n = (win * win) as f64;

    sliding(x, y, p, |x0, y0| {
        let (mut sx, mut sy, mut sgx, mut sgy, mut sgxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for r in y0..y0 + win {
            let cols = x0..x0 + win;
            let (ix, iy) = (&x.row(r)[cols.clone()], &y.row(r)[cols.clone()]);
            let (ax, ay) = (&gx.row(r)[cols.clone()], &gy.row(r)[cols]);
            for k in 0..win {
                sx += ix[k];
                sy += iy[k];
                sgx += ax[k];
                sgy += ay[k];
                sgxy += ax[k] * ay[k];
            }
        }
        let (mx, my) = (sx / n, sy / n);
        let (mgx, mgy, mgxy) = (sgx / n, sgy / n, sgxy / n);
        let l = (2.0 * mx * my + c1) / (mx * mx + my * my + c1);
        let c = (2.0 * mgx * mgy + c2) / (mgx * mgx + mgy * mgy + c2);
        let s = (mgxy + c3) / (mgx * mgy + c3);
        Some(l * c * s)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_plane_has_no_gradient() {
        let g = gradient_magnitude(&Plane::filled(5, 4, 77.0).unwrap()).unwrap();
        assert!(g.plane().samples().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn vertical_step_edge() {
        let p = Plane::from_fn(8, 6, |x, _| if x < 4 { 0.0 } else { 255.0 }).unwrap();
        let g = gradient_magnitude(&p).unwrap();
        for y in 1..5 {
            assert_eq!(g.plane().get(3, y), 1020.0);
            assert_eq!(g.plane().get(4, y), 1020.0);
            assert_eq!(g.plane().get(1, y), 0.0);
        }
    }

    #[test]
    fn ramp_gradient_is_constant_including_borders() {
        let p = Plane::from_fn(9, 7, |x, y| (3 * x + 4 * y) as f64).unwrap();
        let g = gradient_magnitude(&p).unwrap();
        // gx = 8*3, gy = 8*4
        assert!(g.plane().samples().iter().all(|&v| v == 40.0));
    }

    #[test]
    fn too_small_planes_are_rejected() {
        assert!(matches!(
            gradient_magnitude(&Plane::filled(10, 1, 0.0).unwrap()),
            Err(Error::Size { .. })
        ));
        assert!(gradient_magnitude(&Plane::filled(2, 5, 0.0).unwrap()).is_err());
    }

    #[test]
    fn ramp_identity_and_offset() {
        let p = SsimParams::default();
        let x = Plane::from_fn(16, 16, |i, j| (5 * i + 2 * j) as f64).unwrap();
        assert!((gssim(&x, &x, &p).unwrap().score - 1.0).abs() < 1e-9);

        // offset keeps gradients; only the luminance term drops
        let y = x.map(|v| v + 20.0);
        let r = gssim(&x, &y, &p).unwrap();
        let c1 = p.c1();
        let mut expect = Vec::new();
        for y0 in 0..9 {
            for x0 in 0..9 {
                let mut s = 0.0;
                for j in y0..y0 + 8 {
                    for i in x0..x0 + 8 {
                        s += x.get(i, j);
                    }
                }
                let m = s / 64.0;
                let my = m + 20.0;
                expect.push((2.0 * m * my + c1) / (m * m + my * my + c1));
            }
        }
        let expect = expect.iter().sum::<f64>() / expect.len() as f64;
        assert!(r.score < 1.0);
        assert!((r.score - expect).abs() < 1e-12);
    }
}
