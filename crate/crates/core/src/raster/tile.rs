use super::{Raster, RasterError};

/// Repeats a square quincunx render `nx` by `ny` times. Cells whose column plus
/// row index is odd are turned by 180 degrees: a plain translation would put
/// meridians 180 degrees apart next to each other along every shared edge,
/// while the half-turn lines each folded edge meridian up with itself.
pub fn tile(img: &Raster, nx: u32, ny: u32) -> Result<Raster, RasterError> {
    if img.width() != img.height() {
        return Err(RasterError::NotSquare {
            width: img.width(),
            height: img.height(),
        });
    }
    if nx == 0 || ny == 0 {
        return Err(RasterError::Options(format!(
            "tile counts must be positive, got {nx}x{ny}"
        )));
    }
    let n = img.width() as usize;
    let c = img.channels() as usize;
    let width = n * nx as usize;
    let height = n * ny as usize;
    let src = img.data();
    let mut data = Vec::with_capacity(width * height * c);
    for row in 0..height {
        let (j, r) = (row / n, row % n);
        for i in 0..nx as usize {
            if (i + j) % 2 == 0 {
                data.extend_from_slice(&src[r * n * c..(r + 1) * n * c]);
            } else {
                let rr = n - 1 - r;
                for col in (0..n).rev() {
                    let at = (rr * n + col) * c;
                    data.extend_from_slice(&src[at..at + c]);
                }
            }
        }
    }
    Raster::new(width as u32, height as u32, img.channels(), data)
}
