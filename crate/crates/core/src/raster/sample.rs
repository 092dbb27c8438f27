use super::{EquirectImage, Pixel, Sampling};
use crate::projection::{wrap_longitude, SphericalCoord};

/// Continuous pixel position of a sphere point. Column 0 and column `W-1` both
/// sit on the ±180° meridian, row 0 on the zenith and row `H-1` on the nadir.
fn position(img: &EquirectImage, s: SphericalCoord) -> (f64, f64) {
    let w = img.width() as f64;
    let h = img.height() as f64;
    (
        (s.lon + 180.0) * (w - 1.0) / 360.0,
        (90.0 - s.lat) * (h - 1.0) / 180.0,
    )
}

/// Nearest texel, rounding half away from zero. Anything outside the
/// latitude/longitude box returns `fill`.
pub fn sample_nearest(img: &EquirectImage, s: SphericalCoord, fill: Pixel) -> Pixel {
    let inside = (-180.0..=180.0).contains(&s.lon) && (-90.0..=90.0).contains(&s.lat);
    if !inside {
        return fill;
    }
    let (x, y) = position(img, s);
    img.raster().pixel(y.round() as u32, x.round() as u32)
}

/// Bilinear blend of the four surrounding texels. Longitude wraps across the
/// dateline and latitude is clamped at the poles; only non-finite input
/// returns `fill`.
pub fn sample_bilinear(img: &EquirectImage, s: SphericalCoord, fill: Pixel) -> Pixel {
    if !s.lat.is_finite() || !s.lon.is_finite() {
        return fill;
    }
    let s = SphericalCoord {
        lat: s.lat.clamp(-90.0, 90.0),
        lon: if s.lon == 180.0 {
            180.0
        } else {
            wrap_longitude(s.lon)
        },
    };
    let (x, y) = position(img, s);
    let w = img.width();
    let h = img.height();
    let x0 = (x.floor() as u32).min(w - 1);
    let y0 = (y.floor() as u32).min(h - 1);
    let wx = x - x0 as f64;
    let wy = y - y0 as f64;
    // the last column repeats the first meridian, so its right neighbour is column 1
    let x1 = if x0 + 1 < w { x0 + 1 } else { 1 % w };
    let y1 = (y0 + 1).min(h - 1);

    let r = img.raster();
    let p00 = r.pixel(y0, x0).0;
    let p01 = r.pixel(y0, x1).0;
    let p10 = r.pixel(y1, x0).0;
    let p11 = r.pixel(y1, x1).0;
    let mut out = [0u8; 3];
    for c in 0..3 {
        let top = p00[c] as f64 * (1.0 - wx) + p01[c] as f64 * wx;
        let bottom = p10[c] as f64 * (1.0 - wx) + p11[c] as f64 * wx;
        let v = top * (1.0 - wy) + bottom * wy;
        out[c] = v.round().clamp(0.0, 255.0) as u8;
    }
    Pixel(out)
}

pub fn sample(img: &EquirectImage, s: SphericalCoord, fill: Pixel, sampling: Sampling) -> Pixel {
    match sampling {
        Sampling::Nearest => sample_nearest(img, s, fill),
        Sampling::Bilinear => sample_bilinear(img, s, fill),
    }
}
