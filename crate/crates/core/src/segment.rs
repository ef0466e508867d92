//! Chroma-threshold skin detection and face/body region construction.
//!
//! Skin pixels are those whose Cr and Cb both fall inside closed intervals;
//! luma never participates. The face is the bounding box of the largest
//! 8-connected skin blob and the body is the largest rectangle of the image
//! that stays clear of it.

use std::fmt;
use std::io::Write;

use crate::error::{Error, Result};
use crate::pixel::{Rect, YCrCbImage};

/// Closed chroma intervals that classify a pixel as skin.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SkinThresholds {
    pub cr_min: u8,
    pub cr_max: u8,
    pub cb_min: u8,
    pub cb_max: u8,
}

impl SkinThresholds {
    /// Cr in [133, 173], Cb in [77, 127].
    pub const PAPER: SkinThresholds = SkinThresholds {
        cr_min: 133,
        cr_max: 173,
        cb_min: 77,
        cb_max: 127,
    };

    /// The narrower skin-colour map: Cr in [136, 156], Cb in [110, 123].
    pub const CHAI: SkinThresholds = SkinThresholds {
        cr_min: 136,
        cr_max: 156,
        cb_min: 110,
        cb_max: 123,
    };

    pub fn new(cr_min: u8, cr_max: u8, cb_min: u8, cb_max: u8) -> Result<Self> {
        if cr_min > cr_max || cb_min > cb_max {
            return Err(Error::InvalidParam(format!(
                "empty threshold interval: Cr [{cr_min}, {cr_max}], Cb [{cb_min}, {cb_max}]"
            )));
        }
        Ok(Self {
            cr_min,
            cr_max,
            cb_min,
            cb_max,
        })
    }

    /// Looks up a named preset (`paper` or `chai`).
    pub fn preset(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "paper" => Some(Self::PAPER),
            "chai" => Some(Self::CHAI),
            _ => None,
        }
    }

    #[inline]
    pub fn is_skin(&self, cr: f64, cb: f64) -> bool {
        cr >= f64::from(self.cr_min)
            && cr <= f64::from(self.cr_max)
            && cb >= f64::from(self.cb_min)
            && cb <= f64::from(self.cb_max)
    }
}

impl Default for SkinThresholds {
    fn default() -> Self {
        Self::PAPER
    }
}

impl fmt::Display for SkinThresholds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cr=[{},{}] cb=[{},{}]",
            self.cr_min, self.cr_max, self.cb_min, self.cb_max
        )
    }
}

/// One boolean per pixel, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl RegionMask {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "{} mask bits supplied for a {width}x{height} mask",
                bits.len()
            )));
        }
        Ok(Self { width, height, bits })
    }

    pub fn empty(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    /// Builds a mask from `(x, y)` coordinates of set pixels.
    pub fn from_points(width: usize, height: usize, points: &[(usize, usize)]) -> Result<Self> {
        let mut m = Self::empty(width, height);
        for &(x, y) in points {
            if x >= width || y >= height {
                return Err(Error::InvalidParam(format!(
                    "point ({x}, {y}) outside {width}x{height} mask"
                )));
            }
            m.set(x, y, true);
        }
        Ok(m)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.bits[y * self.width + x] = v;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_subset_of(&self, other: &RegionMask) -> bool {
        self.bits.len() == other.bits.len() && self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    /// Encodes the mask as a 1-bit greyscale PNG (set pixels are white).
    pub fn write_png<W: Write>(&self, out: W) -> Result<()> {
        let codec = |e: png::EncodingError| Error::Codec(format!("PNG mask: {e}"));
        let mut enc = png::Encoder::new(out, self.width as u32, self.height as u32);
        enc.set_color(png::ColorType::Grayscale);
        enc.set_depth(png::BitDepth::One);
        let mut w = enc.write_header().map_err(codec)?;
        let stride = self.width.div_ceil(8);
        let mut packed = vec![0u8; stride * self.height];
        for y in 0..self.height {
            for x in 0..self.width {
                if self.get(x, y) {
                    packed[y * stride + x / 8] |= 0x80 >> (x % 8);
                }
            }
        }
        w.write_image_data(&packed).map_err(codec)?;
        w.finish().map_err(codec)
    }
}

/// Face and body rectangles for one image.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegionPair {
    pub face: Rect,
    pub body: Rect,
}

impl RegionPair {
    /// User-supplied rects may overlap; auto-detected ones never do.
    pub fn overlapping(&self) -> bool {
        self.face.intersects(&self.body)
    }
}

/// Marks every pixel whose chroma lies inside `t`. Y is ignored.
pub fn skin_mask(img: &YCrCbImage, t: &SkinThresholds) -> RegionMask {
    let bits = img
        .cr_plane()
        .samples()
        .iter()
        .zip(img.cb_plane().samples())
        .map(|(&cr, &cb)| t.is_skin(cr, cb))
        .collect();
    RegionMask {
        width: img.width(),
        height: img.height(),
        bits,
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        // keep the smaller root so labels follow raster order
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi] = lo;
    }
}

/// Keeps only the largest 8-connected component.
///
/// Two-pass labelling with union-find. Ties go to the component whose first
/// pixel comes earliest in raster order.
pub fn largest_component(m: &RegionMask) -> RegionMask {
    let (w, h) = (m.width, m.height);
    let mut parent: Vec<usize> = (0..w * h).collect();

    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if !m.bits[i] {
                continue;
            }
            // already-visited neighbours: W, NW, N, NE
            if x > 0 && m.bits[i - 1] {
                union(&mut parent, i, i - 1);
            }
            if y > 0 {
                let up = i - w;
                if x > 0 && m.bits[up - 1] {
                    union(&mut parent, i, up - 1);
                }
                if m.bits[up] {
                    union(&mut parent, i, up);
                }
                if x + 1 < w && m.bits[up + 1] {
                    union(&mut parent, i, up + 1);
                }
            }
        }
    }

    let mut sizes = vec![0usize; w * h];
    for i in 0..w * h {
        if m.bits[i] {
            let r = find(&mut parent, i);
            sizes[r] += 1;
        }
    }
    // roots are the smallest index in their component, so the first max wins ties
    let best = sizes
        .iter()
        .enumerate()
        .fold(None, |acc: Option<(usize, usize)>, (i, &s)| match acc {
            Some((_, bs)) if bs >= s => acc,
            _ if s > 0 => Some((i, s)),
            _ => acc,
        });

    let Some((root, _)) = best else {
        return RegionMask::empty(w, h);
    };
    let bits = (0..w * h).map(|i| m.bits[i] && find(&mut parent, i) == root).collect();
    RegionMask {
        width: w,
        height: h,
        bits,
    }
}

/// Sets every false pixel that is not 4-connected to the image border.
pub fn fill_holes(m: &RegionMask) -> RegionMask {
    let (w, h) = (m.width, m.height);
    let mut outside = vec![false; w * h];
    let mut stack = Vec::new();
    let seed = |x: usize, y: usize, outside: &mut [bool], stack: &mut Vec<usize>| {
        let i = y * w + x;
        if !m.bits[i] && !outside[i] {
            outside[i] = true;
            stack.push(i);
        }
    };
    for x in 0..w {
        seed(x, 0, &mut outside, &mut stack);
        seed(x, h - 1, &mut outside, &mut stack);
    }
    for y in 0..h {
        seed(0, y, &mut outside, &mut stack);
        seed(w - 1, y, &mut outside, &mut stack);
    }
    while let Some(i) = stack.pop() {
        let (x, y) = (i % w, i / w);
        if x > 0 {
            seed(x - 1, y, &mut outside, &mut stack);
        }
        if x + 1 < w {
            seed(x + 1, y, &mut outside, &mut stack);
        }
        if y > 0 {
            seed(x, y - 1, &mut outside, &mut stack);
        }
        if y + 1 < h {
            seed(x, y + 1, &mut outside, &mut stack);
        }
    }
    RegionMask {
        width: w,
        height: h,
        bits: outside.into_iter().map(|o| !o).collect(),
    }
}

/// Tight bounding box of the set pixels.
pub fn face_rect(m: &RegionMask) -> Result<Rect> {
    let mut bounds: Option<(usize, usize, usize, usize)> = None;
    for y in 0..m.height {
        for x in 0..m.width {
            if m.get(x, y) {
                bounds = Some(match bounds {
                    None => (x, y, x, y),
                    Some((x0, y0, x1, y1)) => (x0.min(x), y0.min(y), x1.max(x), y1.max(y)),
                });
            }
        }
    }
    let (x0, y0, x1, y1) = bounds.ok_or(Error::NoFace)?;
    Ok(Rect::new(x0, y0, x1 - x0 + 1, y1 - y0 + 1))
}

/// Largest rectangle of the image that does not touch `face`.
///
/// Any such rectangle sits entirely above, below, left or right of the face,
/// so only the four maximal strips are candidates. Ties are broken by
/// topmost, then leftmost, then widest.
pub fn body_region(image_w: usize, image_h: usize, face: Rect) -> Result<Rect> {
    face.check_inside(image_w, image_h)?;
    let candidates = [
        Rect::new(0, 0, image_w, face.y0),
        Rect::new(0, face.y1(), image_w, image_h - face.y1()),
        Rect::new(0, 0, face.x0, image_h),
        Rect::new(face.x1(), 0, image_w - face.x1(), image_h),
    ];
    candidates
        .into_iter()
        .filter(|r| r.area() > 0)
        .min_by(|a, b| {
            b.area()
                .cmp(&a.area())
                .then(a.y0.cmp(&b.y0))
                .then(a.x0.cmp(&b.x0))
                .then(b.w.cmp(&a.w))
        })
        .ok_or(Error::NoBody)
}

/// Mask and regions found by auto-detection.
#[derive(Clone, Debug)]
pub struct Detection {
    pub skin: RegionMask,
    pub face_mask: RegionMask,
    pub regions: RegionPair,
}

/// Full segmentation pipeline: threshold, keep the largest blob, optionally
/// fill its holes, then derive face and body rects.
pub fn detect_regions(img: &YCrCbImage, t: &SkinThresholds, fill: bool) -> Result<Detection> {
    let skin = skin_mask(img, t);
    let mut face_mask = largest_component(&skin);
    if fill {
        face_mask = fill_holes(&face_mask);
    }
    let face = face_rect(&face_mask)?;
    let body = body_region(img.width(), img.height(), face)?;
    Ok(Detection {
        skin,
        face_mask,
        regions: RegionPair { face, body },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pixel::Plane;
    use proptest::prelude::*;

    fn chroma_image(w: usize, h: usize, cr: Vec<f64>, cb: Vec<f64>) -> YCrCbImage {
        YCrCbImage::from_planes(
            Plane::filled(w, h, 128.0).unwrap(),
            Plane::new(w, h, cr).unwrap(),
            Plane::new(w, h, cb).unwrap(),
        )
        .unwrap()
    }

    /// Independent recursive flood fill returning every 8-connected component size.
    fn flood_fill_sizes(m: &RegionMask) -> Vec<usize> {
        fn visit(m: &RegionMask, seen: &mut [bool], x: i64, y: i64) -> usize {
            if x < 0 || y < 0 || x >= m.width() as i64 || y >= m.height() as i64 {
                return 0;
            }
            let i = y as usize * m.width() + x as usize;
            if seen[i] || !m.bits()[i] {
                return 0;
            }
            seen[i] = true;
            let mut n = 1;
            for dy in -1..=1 {
                for dx in -1..=1 {
                    if dx != 0 || dy != 0 {
                        n += visit(m, seen, x + dx, y + dy);
                    }
                }
            }
            n
        }
        let mut seen = vec![false; m.bits().len()];
        let mut sizes = Vec::new();
        for y in 0..m.height() {
            for x in 0..m.width() {
                let n = visit(m, &mut seen, x as i64, y as i64);
                if n > 0 {
                    sizes.push(n);
                }
            }
        }
        sizes
    }

    #[test]
    fn threshold_examples() {
        let img = chroma_image(3, 1, vec![150.0, 100.0, 133.0], vec![100.0, 200.0, 127.0]);
        let m = skin_mask(&img, &SkinThresholds::PAPER);
        assert_eq!(m.bits(), &[true, false, true]);
    }

    #[test]
    fn presets_resolve() {
        assert_eq!(SkinThresholds::preset("paper"), Some(SkinThresholds::PAPER));
        assert_eq!(SkinThresholds::preset("CHAI"), Some(SkinThresholds::CHAI));
        assert_eq!(SkinThresholds::preset("hsv"), None);
        assert!(SkinThresholds::new(140, 130, 0, 255).is_err());
    }

    #[test]
    fn largest_component_examples() {
        let single = RegionMask::from_points(4, 4, &[(1, 1), (2, 2), (2, 1)]).unwrap();
        assert_eq!(largest_component(&single), single);

        let empty = RegionMask::empty(5, 5);
        assert_eq!(largest_component(&empty), empty);

        // 8x8 fixture: a diagonal-linked blob of 5 and an L of 3.
        let five = [(0, 0), (1, 1), (2, 2), (2, 3), (3, 3)];
        let three = [(6, 5), (6, 6), (7, 6)];
        let all: Vec<_> = five.iter().chain(three.iter()).copied().collect();
        let m = RegionMask::from_points(8, 8, &all).unwrap();
        let mut oracle = flood_fill_sizes(&m);
        oracle.sort_unstable();
        assert_eq!(oracle, vec![3, 5]);
        assert_eq!(largest_component(&m), RegionMask::from_points(8, 8, &five).unwrap());
    }

    #[test]
    fn fill_holes_closes_interior_only() {
        let ring: Vec<_> = (0..5)
            .flat_map(|y| (0..5).map(move |x| (x, y)))
            .filter(|&(x, y)| !(1..4).contains(&x) || !(1..4).contains(&y) || (x, y) == (2, 2))
            .map(|(x, y)| (x + 1, y + 1))
            .collect();
        let m = RegionMask::from_points(7, 7, &ring).unwrap();
        let filled = fill_holes(&m);
        assert_eq!(filled.count(), 25);
        assert!(m.is_subset_of(&filled));
        assert!(!filled.get(0, 0));
    }

    #[test]
    fn mask_png_decodes_back() {
        let m = RegionMask::from_points(11, 3, &[(0, 0), (8, 1), (10, 2)]).unwrap();
        let mut buf = Vec::new();
        m.write_png(&mut buf).unwrap();
        let img = image::load_from_memory(&buf).unwrap().to_luma8();
        assert_eq!(img.dimensions(), (11, 3));
        for y in 0..3 {
            for x in 0..11 {
                assert_eq!(img.get_pixel(x, y).0[0] == 255, m.get(x as usize, y as usize));
            }
        }
    }

    #[test]
    fn face_rect_examples() {
        let m = RegionMask::from_points(8, 8, &[(3, 4)]).unwrap();
        assert_eq!(face_rect(&m).unwrap(), Rect::new(3, 4, 1, 1));
        let m = RegionMask::from_points(8, 8, &[(1, 1), (5, 7)]).unwrap();
        assert_eq!(face_rect(&m).unwrap(), Rect::new(1, 1, 5, 7));
        assert!(matches!(face_rect(&RegionMask::empty(4, 4)), Err(Error::NoFace)));
    }

    /// Brute force over every rect in the image: max area, then topmost,
    /// leftmost, widest.
    fn body_oracle(w: usize, h: usize, face: Rect) -> Option<Rect> {
        let mut best: Option<Rect> = None;
        for y0 in 0..h {
            for x0 in 0..w {
                for rh in 1..=h - y0 {
                    for rw in 1..=w - x0 {
                        let r = Rect::new(x0, y0, rw, rh);
                        if r.intersects(&face) {
                            continue;
                        }
                        let better = match best {
                            None => true,
                            Some(b) => {
                                (r.area(), std::cmp::Reverse(r.y0), std::cmp::Reverse(r.x0), r.w)
                                    > (b.area(), std::cmp::Reverse(b.y0), std::cmp::Reverse(b.x0), b.w)
                            }
                        };
                        if better {
                            best = Some(r);
                        }
                    }
                }
            }
        }
        best
    }

    #[test]
    fn body_region_examples() {
        assert_eq!(
            body_region(100, 100, Rect::new(0, 0, 100, 50)).unwrap(),
            Rect::new(0, 50, 100, 50)
        );
        // all four strips tie at 4000 px; the top strip wins
        assert_eq!(
            body_region(100, 100, Rect::new(40, 40, 20, 20)).unwrap(),
            Rect::new(0, 0, 100, 40)
        );
        assert!(matches!(
            body_region(100, 100, Rect::new(0, 0, 100, 100)),
            Err(Error::NoBody)
        ));
    }

    #[test]
    fn body_region_matches_brute_force() {
        for (w, h) in [(6, 5), (7, 7), (9, 4)] {
            for fy in 0..h {
                for fx in 0..w {
                    for fh in 1..=h - fy {
                        for fw in 1..=w - fx {
                            let face = Rect::new(fx, fy, fw, fh);
                            assert_eq!(body_region(w, h, face).ok(), body_oracle(w, h, face), "{face:?}");
                        }
                    }
                }
            }
        }
    }

    fn arb_mask(max: usize) -> impl Strategy<Value = RegionMask> {
        (1..=max, 1..=max).prop_flat_map(|(w, h)| {
            proptest::collection::vec(any::<bool>(), w * h).prop_map(move |bits| RegionMask::new(w, h, bits).unwrap())
        })
    }

    proptest! {
        #[test]
        fn largest_component_agrees_with_flood_fill(m in arb_mask(16)) {
            let out = largest_component(&m);
            prop_assert!(out.is_subset_of(&m));
            let expect = flood_fill_sizes(&m).into_iter().max().unwrap_or(0);
            prop_assert_eq!(out.count(), expect);
            prop_assert!(flood_fill_sizes(&out).len() <= 1);
        }

        #[test]
        fn face_rect_is_tight(m in arb_mask(16)) {
            match face_rect(&m) {
                Err(_) => prop_assert_eq!(m.count(), 0),
                Ok(r) => {
                    for y in 0..m.height() {
                        for x in 0..m.width() {
                            if m.get(x, y) {
                                prop_assert!(r.contains(x, y));
                            }
                        }
                    }
                    let row_hit = |y| (r.x0..r.x1()).any(|x| m.get(x, y));
                    let col_hit = |x| (r.y0..r.y1()).any(|y| m.get(x, y));
                    prop_assert!(row_hit(r.y0) && row_hit(r.y1() - 1));
                    prop_assert!(col_hit(r.x0) && col_hit(r.x1() - 1));
                }
            }
        }

        #[test]
        fn body_never_touches_face(w in 1usize..64, h in 1usize..64, a in any::<u32>(), b in any::<u32>()) {
            let fx = a as usize % w;
            let fy = b as usize % h;
            let face = Rect::new(fx, fy, 1 + (a as usize / 64) % (w - fx), 1 + (b as usize / 64) % (h - fy));
            if let Ok(body) = body_region(w, h, face) {
                prop_assert!(!body.intersects(&face));
                prop_assert!(body.check_inside(w, h).is_ok());
            } else {
                prop_assert_eq!(face, Rect::new(0, 0, w, h));
            }
        }

        #[test]
        fn widening_thresholds_never_clears_bits(
            cr in proptest::collection::vec(0u8..=255, 36),
            cb in proptest::collection::vec(0u8..=255, 36),
            grow in (0u8..20, 0u8..20, 0u8..20, 0u8..20),
        ) {
            let img = chroma_image(6, 6, cr.iter().map(|&v| f64::from(v)).collect(), cb.iter().map(|&v| f64::from(v)).collect());
            let t = SkinThresholds::PAPER;
            let wide = SkinThresholds::new(
                t.cr_min.saturating_sub(grow.0),
                t.cr_max.saturating_add(grow.1),
                t.cb_min.saturating_sub(grow.2),
                t.cb_max.saturating_add(grow.3),
            ).unwrap();
            prop_assert!(skin_mask(&img, &t).is_subset_of(&skin_mask(&img, &wide)));
        }
    }
}
