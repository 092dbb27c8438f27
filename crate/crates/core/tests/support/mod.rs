// Each test binary uses a different subset of these helpers.
#![allow(dead_code)]

pub mod oracle;

use quincunx_core::raster::{EquirectImage, Pixel, Raster};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Texel centre of an equirectangular raster in degrees.
pub fn texel_coord(row: u32, col: u32, width: u32, height: u32) -> (f64, f64) {
    let lat = 90.0 - row as f64 * 180.0 / (height - 1) as f64;
    let lon = col as f64 * 360.0 / (width - 1) as f64 - 180.0;
    (lat, lon)
}

/// Independent RGB noise.
pub fn noise_image(width: u32, seed: u64) -> EquirectImage {
    let mut r = rng(seed);
    let raster = Raster::from_fn(width, width / 2, 3, |_, _| Pixel(r.gen())).unwrap();
    EquirectImage::new(raster).unwrap()
}

/// A gray image that is a smooth function on the sphere, continuous across
/// the dateline and single-valued at the poles.
pub fn smooth_image(width: u32) -> EquirectImage {
    let height = width / 2;
    let raster = Raster::from_fn(width, height, 1, |row, col| {
        let (lat, lon) = texel_coord(row, col, width, height);
        let (lat, lon) = (lat.to_radians(), lon.to_radians());
        let v = 128.0 + 40.0 * lon.sin() * lat.cos() + 30.0 * lat.sin();
        Pixel::gray(v.round() as u8)
    })
    .unwrap();
    EquirectImage::new(raster).unwrap()
}
