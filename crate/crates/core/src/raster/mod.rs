//! Images, sphere sampling, the render pipeline and file I/O.

mod io;
mod render;
mod sample;
mod tile;

pub use io::{decode_image, decode_raster, encode_png, load_image, save_image};
pub use render::{
    build_table, render, render_with_table, RenderMode, RenderOptions, Sampling, TableKey,
    DEFAULT_STEREO_CROP,
};
pub use sample::{sample, sample_bilinear, sample_nearest};
pub use tile::tile;

use crate::projection::ProjectionError;
use crate::warp::ControlError;

#[derive(Debug, thiserror::Error)]
pub enum RasterError {
    #[error("equirectangular input must be 2:1, got {width}x{height}")]
    Aspect { width: u32, height: u32 },
    #[error("image is empty")]
    Empty,
    #[error("unsupported channel count {0}; expected 1 (gray) or 3 (RGB)")]
    Channels(u8),
    #[error("pixel buffer holds {actual} bytes, expected {expected}")]
    BufferSize { expected: usize, actual: usize },
    #[error("{0}")]
    Options(String),
    #[error("tiling needs a square image, got {width}x{height}")]
    NotSquare { width: u32, height: u32 },
    #[error(transparent)]
    Projection(#[from] ProjectionError),
    #[error(transparent)]
    Control(#[from] ControlError),
    #[error("render was cancelled")]
    Cancelled,
    #[error("cannot decode image: {0}")]
    Decode(String),
    #[error("cannot encode image: {0}")]
    Encode(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// One sampled pixel. Gray images use the first component only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pixel(pub [u8; 3]);

impl Pixel {
    pub const MID_GRAY: Pixel = Pixel([128; 3]);

    pub fn gray(v: u8) -> Self {
        Pixel([v; 3])
    }
}

impl Default for Pixel {
    fn default() -> Self {
        Self::MID_GRAY
    }
}

/// Row-major 8-bit image with one or three channels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    width: u32,
    height: u32,
    channels: u8,
    data: Vec<u8>,
}

impl Raster {
    pub fn new(width: u32, height: u32, channels: u8, data: Vec<u8>) -> Result<Self, RasterError> {
        if channels != 1 && channels != 3 {
            return Err(RasterError::Channels(channels));
        }
        if width == 0 || height == 0 {
            return Err(RasterError::Empty);
        }
        let expected = width as usize * height as usize * channels as usize;
        if data.len() != expected {
            return Err(RasterError::BufferSize {
                expected,
                actual: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
        })
    }

    /// A raster filled with one value.
    pub fn filled(width: u32, height: u32, channels: u8, fill: Pixel) -> Result<Self, RasterError> {
        let mut data = Vec::with_capacity(width as usize * height as usize * channels as usize);
        for _ in 0..width as usize * height as usize {
            data.extend_from_slice(&fill.0[..channels as usize]);
        }
        Self::new(width, height, channels, data)
    }

    /// Builds an image from a per-pixel function of `(row, col)`.
    pub fn from_fn(
        width: u32,
        height: u32,
        channels: u8,
        mut f: impl FnMut(u32, u32) -> Pixel,
    ) -> Result<Self, RasterError> {
        let mut data = Vec::with_capacity(width as usize * height as usize * channels as usize);
        for row in 0..height {
            for col in 0..width {
                data.extend_from_slice(&f(row, col).0[..channels as usize]);
            }
        }
        Self::new(width, height, channels, data)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn channels(&self) -> u8 {
        self.channels
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    pub fn pixel(&self, row: u32, col: u32) -> Pixel {
        let c = self.channels as usize;
        let start = (row as usize * self.width as usize + col as usize) * c;
        let mut p = [0u8; 3];
        p[..c].copy_from_slice(&self.data[start..start + c]);
        if c == 1 {
            p = [p[0]; 3];
        }
        Pixel(p)
    }
}

/// An equirectangular panorama: longitude along the columns, latitude down the
/// rows, width exactly twice the height.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquirectImage(Raster);

impl EquirectImage {
    pub fn new(raster: Raster) -> Result<Self, RasterError> {
        if raster.width != 2 * raster.height {
            return Err(RasterError::Aspect {
                width: raster.width,
                height: raster.height,
            });
        }
        Ok(Self(raster))
    }

    pub fn raster(&self) -> &Raster {
        &self.0
    }

    pub fn into_raster(self) -> Raster {
        self.0
    }

    pub fn width(&self) -> u32 {
        self.0.width
    }

    pub fn height(&self) -> u32 {
        self.0.height
    }

    pub fn channels(&self) -> u8 {
        self.0.channels
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn raster_validation() {
        assert!(matches!(
            Raster::new(2, 1, 2, vec![0; 4]),
            Err(RasterError::Channels(2))
        ));
        assert!(matches!(
            Raster::new(0, 1, 1, vec![]),
            Err(RasterError::Empty)
        ));
        assert!(matches!(
            Raster::new(2, 2, 3, vec![0; 11]),
            Err(RasterError::BufferSize {
                expected: 12,
                actual: 11
            })
        ));
    }

    #[test]
    fn equirect_aspect() {
        let r = Raster::filled(200, 100, 1, Pixel::gray(3)).unwrap();
        assert!(EquirectImage::new(r).is_ok());
        let r = Raster::filled(1000, 700, 3, Pixel::gray(3)).unwrap();
        assert!(matches!(
            EquirectImage::new(r),
            Err(RasterError::Aspect {
                width: 1000,
                height: 700
            })
        ));
    }

    #[test]
    fn pixel_access() {
        let r = Raster::from_fn(3, 2, 3, |row, col| Pixel([row as u8, col as u8, 9])).unwrap();
        assert_eq!(r.pixel(1, 2), Pixel([1, 2, 9]));
        let g = Raster::from_fn(3, 2, 1, |row, col| Pixel::gray((row * 3 + col) as u8)).unwrap();
        assert_eq!(g.pixel(1, 1), Pixel::gray(4));
    }
}
