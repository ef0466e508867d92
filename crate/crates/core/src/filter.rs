//! Separable Gaussian blur on planes, used to produce controlled
//! degradations.

use crate::error::{Error, Result};
use crate::pixel::Plane;

fn kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil().max(1.0) as isize;
    let mut k: Vec<f64> = (-radius..=radius)
        .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = k.iter().sum();
    k.iter_mut().for_each(|v| *v /= sum);
    k
}

/// Blurs with a normalised Gaussian of standard deviation `sigma`, truncated
/// at `3 sigma`. Borders replicate the edge sample.
pub fn gaussian_blur(p: &Plane, sigma: f64) -> Result<Plane> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParam(format!("sigma must be positive, got {sigma}")));
    }
    let k = kernel(sigma);
    let r = (k.len() / 2) as isize;
    let (w, h) = (p.width() as isize, p.height() as isize);

    let horiz = Plane::from_fn(p.width(), p.height(), |x, y| {
        let row = p.row(y);
        k.iter()
            .enumerate()
            .map(|(i, kv)| kv * row[(x as isize + i as isize - r).clamp(0, w - 1) as usize])
            .sum()
    })?;
    Plane::from_fn(p.width(), p.height(), |x, y| {
        k.iter()
            .enumerate()
            .map(|(i, kv)| kv * horiz.get(x, (y as isize + i as isize - r).clamp(0, h - 1) as usize))
            .sum()
    })
}
