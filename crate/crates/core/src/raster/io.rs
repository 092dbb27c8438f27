use std::io::Cursor;
use std::path::Path;

use image::{ColorType, DynamicImage, ImageFormat};

use super::{EquirectImage, Raster, RasterError};

fn from_dynamic(img: DynamicImage) -> Result<Raster, RasterError> {
    let (width, height) = (img.width(), img.height());
    if width == 0 || height == 0 {
        return Err(RasterError::Empty);
    }
    let has_color = img.color().has_color();
    if has_color {
        Raster::new(width, height, 3, img.into_rgb8().into_raw())
    } else {
        Raster::new(width, height, 1, img.into_luma8().into_raw())
    }
}

/// Decodes PNG or JPEG bytes of any shape. Gray inputs stay single channel,
/// everything else becomes 8-bit RGB.
pub fn decode_raster(bytes: &[u8]) -> Result<Raster, RasterError> {
    if bytes.is_empty() {
        return Err(RasterError::Decode("no image data".into()));
    }
    let img = image::load_from_memory(bytes).map_err(|e| RasterError::Decode(e.to_string()))?;
    from_dynamic(img)
}

/// Decodes a panorama held in memory, rejecting anything but 2:1.
pub fn decode_image(bytes: &[u8]) -> Result<EquirectImage, RasterError> {
    EquirectImage::new(decode_raster(bytes)?)
}

pub fn load_image(path: impl AsRef<Path>) -> Result<EquirectImage, RasterError> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|source| RasterError::Io {
        path: path.display().to_string(),
        source,
    })?;
    decode_image(&bytes)
}

pub fn encode_png(img: &Raster) -> Result<Vec<u8>, RasterError> {
    let color = if img.channels() == 1 {
        ColorType::L8
    } else {
        ColorType::Rgb8
    };
    let mut out = Cursor::new(Vec::new());
    image::write_buffer_with_format(
        &mut out,
        img.data(),
        img.width(),
        img.height(),
        color,
        ImageFormat::Png,
    )
    .map_err(|e| RasterError::Encode(e.to_string()))?;
    Ok(out.into_inner())
}

/// Writes `img` as PNG.
pub fn save_image(img: &Raster, path: impl AsRef<Path>) -> Result<(), RasterError> {
    let path = path.as_ref();
    let bytes = encode_png(img)?;
    std::fs::write(path, bytes).map_err(|source| RasterError::Io {
        path: path.display().to_string(),
        source,
    })
}
