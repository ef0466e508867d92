//! Regenerates the bundled test images under `tests/fixtures/`.
//!
//! `portrait.png` is a 512x512 synthetic frontal portrait: a shaded skin-tone
//! face with eyes, brows, nose and mouth, grey hair, a woven shirt and a
//! canvas-textured studio backdrop. `texture.png` is a 128x128 crop of its
//! background and shoulder. Everything is drawn from a fixed seed, so the
//! output is reproducible.
//!
//! cargo run -p faceqa --example make_fixtures

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const W: usize = 512;
const H: usize = 512;

/// Bilinear value noise on a random lattice with the given cell size.
struct ValueNoise {
    cell: f64,
    cols: usize,
    lattice: Vec<f64>,
}

impl ValueNoise {
    fn new(rng: &mut ChaCha8Rng, cell: f64) -> Self {
        let cols = (W as f64 / cell).ceil() as usize + 2;
        let rows = (H as f64 / cell).ceil() as usize + 2;
        let lattice = (0..cols * rows).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        Self { cell, cols, lattice }
    }

    fn at(&self, x: f64, y: f64) -> f64 {
        let (gx, gy) = (x / self.cell, y / self.cell);
        let (ix, iy) = (gx.floor() as usize, gy.floor() as usize);
        let (fx, fy) = (gx - gx.floor(), gy - gy.floor());
        // smoothstep weights
        let (sx, sy) = (fx * fx * (3.0 - 2.0 * fx), fy * fy * (3.0 - 2.0 * fy));
        let v = |i: usize, j: usize| self.lattice[j * self.cols + i];
        let top = v(ix, iy) * (1.0 - sx) + v(ix + 1, iy) * sx;
        let bot = v(ix, iy + 1) * (1.0 - sx) + v(ix + 1, iy + 1) * sx;
        top * (1.0 - sy) + bot * sy
    }
}

fn fbm(octaves: &[ValueNoise], x: f64, y: f64) -> f64 {
    octaves
        .iter()
        .enumerate()
        .map(|(i, n)| n.at(x, y) * 0.55f64.powi(i as i32))
        .sum()
}

fn clamp_rgb(c: [f64; 3]) -> [u8; 3] {
    c.map(|v| v.round().clamp(0.0, 255.0) as u8)
}

fn mix(a: [f64; 3], b: [f64; 3], t: f64) -> [f64; 3] {
    [0, 1, 2].map(|i| a[i] * (1.0 - t) + b[i] * t)
}

fn smoothstep(e0: f64, e1: f64, x: f64) -> f64 {
    let t = ((x - e0) / (e1 - e0)).clamp(0.0, 1.0);
    t * t * (3.0 - 2.0 * t)
}

/// Signed ellipse distance proxy: < 1 inside.
fn ellipse(x: f64, y: f64, cx: f64, cy: f64, rx: f64, ry: f64) -> f64 {
    ((x - cx) / rx).powi(2) + ((y - cy) / ry).powi(2)
}

fn portrait() -> image::RgbImage {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_face);
    let backdrop: Vec<ValueNoise> = [72.0, 36.0].iter().map(|&c| ValueNoise::new(&mut rng, c)).collect();
    let canvas: Vec<ValueNoise> = [2.0, 1.0].iter().map(|&c| ValueNoise::new(&mut rng, c)).collect();
    let folds: Vec<ValueNoise> = [48.0, 20.0].iter().map(|&c| ValueNoise::new(&mut rng, c)).collect();
    let skin_noise: Vec<ValueNoise> = [14.0, 5.0].iter().map(|&c| ValueNoise::new(&mut rng, c)).collect();
    let hair_noise = ValueNoise::new(&mut rng, 3.0);

    let (fcx, fcy, frx, fry) = (256.0, 205.0, 84.0, 108.0);
    let light = {
        let l: [f64; 3] = [-0.45, -0.35, 0.82];
        let n = (l[0] * l[0] + l[1] * l[1] + l[2] * l[2]).sqrt();
        l.map(|v| v / n)
    };
    let skin = [226.0, 176.0, 146.0];

    image::RgbImage::from_fn(W as u32, H as u32, |px, py| {
        let (x, y) = (px as f64 + 0.5, py as f64 + 0.5);

        // background: studio canvas backdrop, soft mottling plus fine grain
        let mottle = fbm(&backdrop, x, y);
        let grain = fbm(&canvas, x, y) + (rng.random::<f64>() - 0.5);
        let mut c = [
            92.0 + 22.0 * mottle + 9.0 * grain,
            116.0 + 24.0 * mottle + 9.0 * grain,
            128.0 + 22.0 * mottle + 9.0 * grain,
        ];

        // shoulders and shirt: fine navy knit with broad folds
        let shoulder = 395.0 + 0.0018 * (x - 256.0).powi(2);
        if y > shoulder.min(512.0) - 40.0 * (-((x - 256.0) / 70.0).powi(2)).exp() && y > 355.0 {
            let knit = ((x * 2.1).sin() * (y * 2.1 + 0.7 * x).cos()) * 0.5;
            let folds = fbm(&folds, x, y);
            let k = 0.95 + 0.22 * folds + 0.10 * knit + 0.06 * (rng.random::<f64>() - 0.5);
            c = [42.0 * k, 54.0 * k, 112.0 * k];
        }

        // neck
        let neck_half = 36.0;
        let in_neck = (x - 256.0).abs() < neck_half && y > fcy + 60.0 && y < 380.0;
        if in_neck {
            let shade = 0.72 + 0.12 * (1.0 - ((x - 256.0) / neck_half).powi(2));
            let under_chin = 1.0 - 0.18 * (1.0 - smoothstep(fcy + 95.0, fcy + 125.0, y));
            let k = shade * under_chin;
            c = skin.map(|v| v * k);
        }

        // face: ellipsoid shading, mild skin texture
        let e = ellipse(x, y, fcx, fcy, frx, fry);
        if e < 1.0 {
            let nx = (x - fcx) / frx;
            let ny = (y - fcy) / fry;
            let nz = (1.0 - nx * nx - ny * ny).max(0.0).sqrt();
            let lambert = (nx * light[0] + ny * light[1] + nz * light[2]).max(0.0);
            let sn = fbm(&skin_noise, x, y);
            let k = 0.55 + 0.5 * lambert + 0.03 * sn;
            c = skin.map(|v| v * k);

            // cheeks
            for cx in [fcx - 45.0, fcx + 45.0] {
                let ce = ellipse(x, y, cx, fcy + 30.0, 26.0, 18.0);
                if ce < 1.0 {
                    let t = 0.12 * (1.0 - ce);
                    c = mix(c, [c[0] * 1.05, c[1] * 0.9, c[2] * 0.9], t / 0.12 * 0.5);
                }
            }
            // nose: vertical shaded ridge and a shadow under it
            let nose_x = x - fcx;
            if (fcy - 20.0..fcy + 35.0).contains(&y) && nose_x.abs() < 14.0 {
                let side = if nose_x > 0.0 { 0.9 } else { 1.04 };
                let t = 1.0 - (nose_x.abs() / 14.0);
                c = c.map(|v| v * (1.0 + (side - 1.0) * t));
            }
            let nostril = ellipse(x, y, fcx, fcy + 38.0, 16.0, 5.0);
            if nostril < 1.0 {
                c = c.map(|v| v * (0.82 + 0.18 * nostril));
            }
            // eyes and brows
            for ex in [fcx - 34.0, fcx + 34.0] {
                let brow = ellipse(x, y, ex, fcy - 38.0 + 0.004 * (x - ex).powi(2), 22.0, 4.0);
                if brow < 1.0 {
                    c = mix(c, [60.0, 55.0, 52.0], 0.85 * (1.0 - brow * brow));
                }
                let eye = ellipse(x, y, ex, fcy - 16.0, 17.0, 8.0);
                if eye < 1.0 {
                    c = [232.0, 228.0, 222.0];
                    let iris = ellipse(x, y, ex, fcy - 16.0, 7.0, 7.0);
                    if iris < 1.0 {
                        c = mix([62.0, 70.0, 84.0], [20.0, 18.0, 18.0], 1.0 - iris);
                    }
                }
                let lid = ellipse(x, y, ex, fcy - 18.0, 20.0, 11.0);
                if (1.0..1.35).contains(&lid) && y < fcy - 16.0 {
                    c = c.map(|v| v * 0.75);
                }
            }
            // mouth
            let lip = ellipse(x, y, fcx, fcy + 62.0, 28.0, 8.0);
            if lip < 1.0 {
                c = mix(c, [188.0, 98.0, 96.0], 0.8);
                if ((y - (fcy + 62.0)).abs()) < 1.2 {
                    c = [110.0, 50.0, 52.0];
                }
            }
        }

        // hair: grey, soft strands, covers the top of the head
        let hair = ellipse(x, y, fcx, fcy - 22.0, frx + 14.0, fry + 6.0);
        let hairline = fcy - 60.0 + 0.006 * (x - fcx).powi(2);
        if hair < 1.0 && y < hairline {
            let strand = (x * 0.35 + 6.0 * hair_noise.at(x, y)).sin() * 0.5 + 0.5;
            let g = 58.0 + 22.0 * strand;
            c = [g, g, g];
        }

        image::Rgb(clamp_rgb(c))
    })
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    std::fs::create_dir_all(&dir)?;
    let img = portrait();
    img.save(dir.join("portrait.png"))?;
    let texture = image::imageops::crop_imm(&img, 0, 384, 128, 128).to_image();
    texture.save(dir.join("texture.png"))?;
    println!("wrote {}", dir.display());
    Ok(())
}
