//! Pixel containers, decoding and colour conversion.
//!
//! Everything downstream works on [`Plane`]s of `f64` samples. Images are
//! decoded to 8-bit RGB, converted to full-resolution YCrCb (no chroma
//! subsampling) and the luma plane is handed to the metrics.

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

/// An 8-bit RGB image, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    pixels: Vec<[u8; 3]>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize, pixels: Vec<[u8; 3]>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "{} pixels supplied for a {width}x{height} image",
                pixels.len()
            )));
        }
        Ok(Self { width, height, pixels })
    }

    /// Builds an image by evaluating `f(x, y)` for every pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> [u8; 3]) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, pixels)
    }

    pub fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Result<Self> {
        Self::new(width, height, vec![rgb; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        self.pixels[y * self.width + x]
    }

    /// Interleaved `r, g, b, r, g, b, ...` bytes.
    pub fn to_interleaved(&self) -> Vec<u8> {
        self.pixels.iter().flatten().copied().collect()
    }

    pub fn from_interleaved(width: usize, height: usize, bytes: &[u8]) -> Result<Self> {
        if bytes.len() != width * height * 3 {
            return Err(Error::InvalidImage(format!(
                "{} bytes supplied for a {width}x{height} RGB image",
                bytes.len()
            )));
        }
        let pixels = bytes.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
        Self::new(width, height, pixels)
    }
}

impl From<image::RgbImage> for RgbImage {
    fn from(img: image::RgbImage) -> Self {
        let (w, h) = (img.width() as usize, img.height() as usize);
        let pixels = img.pixels().map(|p| p.0).collect();
        Self {
            width: w,
            height: h,
            pixels,
        }
    }
}

impl From<&RgbImage> for image::RgbImage {
    fn from(img: &RgbImage) -> Self {
        image::RgbImage::from_raw(img.width as u32, img.height as u32, img.to_interleaved())
            .expect("buffer length matches dimensions")
    }
}

/// Decodes a PNG, TIFF or JPEG file into 8-bit RGB.
pub fn load_image(path: impl AsRef<Path>) -> Result<RgbImage> {
    let path = path.as_ref();
    let reader = image::ImageReader::open(path)
        .map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?
        .with_guessed_format()
        .map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
    let decoded = reader.decode().map_err(|e| match e {
        image::ImageError::IoError(source) => Error::Io {
            path: path.to_owned(),
            source,
        },
        other => Error::Decode {
            path: path.to_owned(),
            message: other.to_string(),
        },
    })?;
    Ok(decoded.to_rgb8().into())
}

/// A single channel of real-valued samples, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Plane {
    width: usize,
    height: usize,
    samples: Vec<f64>,
}

impl Plane {
    pub fn new(width: usize, height: usize, samples: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if samples.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "{} samples supplied for a {width}x{height} plane",
                samples.len()
            )));
        }
        Ok(Self { width, height, samples })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut samples = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                samples.push(f(x, y));
            }
        }
        Self::new(width, height, samples)
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.samples[y * self.width + x]
    }

    pub fn row(&self, y: usize) -> &[f64] {
        &self.samples[y * self.width..(y + 1) * self.width]
    }

    pub fn same_shape(&self, other: &Plane) -> bool {
        self.width == other.width && self.height == other.height
    }

    /// Errors with [`Error::Shape`] unless both planes share dimensions.
    pub fn check_shape(&self, other: &Plane) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::Shape {
                left_w: self.width,
                left_h: self.height,
                right_w: other.width,
                right_h: other.height,
            })
        }
    }

    pub fn full_rect(&self) -> Rect {
        Rect::new(0, 0, self.width, self.height)
    }

    /// Copies out the sub-plane covered by `r`.
    pub fn crop(&self, r: Rect) -> Result<Plane> {
        r.check_inside(self.width, self.height)?;
        let mut samples = Vec::with_capacity(r.w * r.h);
        for y in r.y0..r.y0 + r.h {
            samples.extend_from_slice(&self.row(y)[r.x0..r.x0 + r.w]);
        }
        Plane::new(r.w, r.h, samples)
    }

    /// Applies `f` to every sample.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Plane {
        Plane {
            width: self.width,
            height: self.height,
            samples: self.samples.iter().map(|&v| f(v)).collect(),
        }
    }
}

/// Free-function form of [`Plane::crop`].
pub fn crop(p: &Plane, r: Rect) -> Result<Plane> {
    p.crop(r)
}

/// Axis-aligned rectangle in pixel coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rect {
    pub x0: usize,
    pub y0: usize,
    pub w: usize,
    pub h: usize,
}

impl Rect {
    pub const fn new(x0: usize, y0: usize, w: usize, h: usize) -> Self {
        Self { x0, y0, w, h }
    }

    pub fn area(&self) -> usize {
        self.w * self.h
    }

    /// Exclusive right edge.
    pub fn x1(&self) -> usize {
        self.x0 + self.w
    }

    /// Exclusive bottom edge.
    pub fn y1(&self) -> usize {
        self.y0 + self.h
    }

    pub fn check_inside(&self, img_w: usize, img_h: usize) -> Result<()> {
        if self.w == 0 || self.h == 0 || self.x1() > img_w || self.y1() > img_h {
            return Err(Error::Bounds {
                x0: self.x0,
                y0: self.y0,
                w: self.w,
                h: self.h,
                img_w,
                img_h,
            });
        }
        Ok(())
    }

    pub fn intersects(&self, other: &Rect) -> bool {
        self.x0 < other.x1() && other.x0 < self.x1() && self.y0 < other.y1() && other.y0 < self.y1()
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        x >= self.x0 && x < self.x1() && y >= self.y0 && y < self.y1()
    }

    /// Shifts the rect by another rect's origin.
    pub fn offset_by(&self, origin: &Rect) -> Rect {
        Rect::new(self.x0 + origin.x0, self.y0 + origin.y0, self.w, self.h)
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.x0, self.y0, self.w, self.h)
    }
}

impl std::str::FromStr for Rect {
    type Err = Error;

    /// Parses `x,y,w,h`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || Error::InvalidParam(format!("expected x,y,w,h but got {s:?}"));
        if parts.len() != 4 {
            return Err(bad());
        }
        let mut v = [0usize; 4];
        for (slot, part) in v.iter_mut().zip(&parts) {
            *slot = part.parse().map_err(|_| bad())?;
        }
        if v[2] == 0 || v[3] == 0 {
            return Err(Error::InvalidParam(format!("rect {s:?} has zero extent")));
        }
        Ok(Rect::new(v[0], v[1], v[2], v[3]))
    }
}

/// Full-resolution Y, Cr and Cb planes of one image.
#[derive(Clone, Debug, PartialEq)]
pub struct YCrCbImage {
    y: Plane,
    cr: Plane,
    cb: Plane,
}

impl YCrCbImage {
    pub fn from_planes(y: Plane, cr: Plane, cb: Plane) -> Result<Self> {
        y.check_shape(&cr)?;
        y.check_shape(&cb)?;
        Ok(Self { y, cr, cb })
    }

    pub fn width(&self) -> usize {
        self.y.width()
    }

    pub fn height(&self) -> usize {
        self.y.height()
    }

    pub fn y_plane(&self) -> &Plane {
        &self.y
    }

    pub fn cr_plane(&self) -> &Plane {
        &self.cr
    }

    pub fn cb_plane(&self) -> &Plane {
        &self.cb
    }
}

#[inline]
fn quantize(v: f64) -> f64 {
    (v + 0.5).floor().clamp(0.0, 255.0)
}

/// Full-range BT.601 (JFIF) conversion of one pixel, returned as `(Y, Cr, Cb)`.
///
/// Each output is rounded half-up and clamped to `[0, 255]`.
pub fn ycrcb_pixel([r, g, b]: [u8; 3]) -> (u8, u8, u8) {
    let (r, g, b) = (f64::from(r), f64::from(g), f64::from(b));
    let y = 0.299 * r + 0.587 * g + 0.114 * b;
    let cr = 128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b;
    let cb = 128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b;
    (quantize(y) as u8, quantize(cr) as u8, quantize(cb) as u8)
}

pub fn rgb_to_ycrcb(img: &RgbImage) -> YCrCbImage {
    let n = img.pixels.len();
    let (mut y, mut cr, mut cb) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for &px in &img.pixels {
        let (py, pcr, pcb) = ycrcb_pixel(px);
        y.push(f64::from(py));
        cr.push(f64::from(pcr));
        cb.push(f64::from(pcb));
    }
    let (w, h) = (img.width, img.height);
    YCrCbImage {
        y: Plane {
            width: w,
            height: h,
            samples: y,
        },
        cr: Plane {
            width: w,
            height: h,
            samples: cr,
        },
        cb: Plane {
            width: w,
            height: h,
            samples: cb,
        },
    }
}

/// Copy of the luma plane.
pub fn luma_plane(img: &YCrCbImage) -> Plane {
    img.y.clone()
}
