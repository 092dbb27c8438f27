use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;

use super::{sample, EquirectImage, Pixel, Raster, RasterError};
use crate::projection::{self, PoleVariant, ProjectionTable, SphericalCoord};
use crate::warp::{warp, ControlPoints, InterpKernel};

/// Default latitude at the edge midpoints of the stereographic views.
pub const DEFAULT_STEREO_CROP: f64 = 85.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum RenderMode {
    /// Peirce quincunx without warping.
    #[default]
    Pq,
    /// Peirce quincunx with the 4-points warp applied to every fetch.
    WarpedPq,
    ApsZenith,
    ApsNadir,
    StereoZenith,
    StereoNadir,
}

impl RenderMode {
    pub const ALL: [RenderMode; 6] = [
        Self::Pq,
        Self::WarpedPq,
        Self::ApsZenith,
        Self::ApsNadir,
        Self::StereoZenith,
        Self::StereoNadir,
    ];

    pub fn is_stereographic(self) -> bool {
        matches!(self, Self::StereoZenith | Self::StereoNadir)
    }

    pub fn uses_controls(self) -> bool {
        self == Self::WarpedPq
    }
}

impl FromStr for RenderMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|m| m.to_string() == s)
            .ok_or_else(|| {
                format!(
                    "unknown mode {s:?} (expected pq, warped-pq, aps-zenith, aps-nadir, \
                     stereographic-zenith or stereographic-nadir)"
                )
            })
    }
}

impl fmt::Display for RenderMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Pq => "pq",
            Self::WarpedPq => "warped-pq",
            Self::ApsZenith => "aps-zenith",
            Self::ApsNadir => "aps-nadir",
            Self::StereoZenith => "stereographic-zenith",
            Self::StereoNadir => "stereographic-nadir",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Sampling {
    #[default]
    Nearest,
    Bilinear,
}

impl FromStr for Sampling {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "nearest" => Ok(Self::Nearest),
            "bilinear" => Ok(Self::Bilinear),
            other => Err(format!(
                "unknown sampling {other:?} (expected nearest or bilinear)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    /// Output pixels per side.
    pub size: usize,
    pub mode: RenderMode,
    pub sampling: Sampling,
    pub kernel: InterpKernel,
    /// Build the lookup table from the symmetric fundamental region.
    pub fast: bool,
    /// Returned for fetches outside the panorama.
    pub fill: Pixel,
    /// Stereographic modes only.
    pub stereo_crop_lat: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            size: 1024,
            mode: RenderMode::Pq,
            sampling: Sampling::Nearest,
            kernel: InterpKernel::Linear,
            fast: true,
            fill: Pixel::MID_GRAY,
            stereo_crop_lat: DEFAULT_STEREO_CROP,
        }
    }
}

impl RenderOptions {
    pub fn validate(&self) -> Result<(), RasterError> {
        if self.size < 2 {
            return Err(RasterError::Options(format!(
                "output size must be at least 2, got {}",
                self.size
            )));
        }
        if self.fast && self.size % 2 == 1 && !self.mode.is_stereographic() {
            return Err(RasterError::Options(format!(
                "the fast path needs an even output size, got {} (use the naive path for odd sizes)",
                self.size
            )));
        }
        if self.mode.is_stereographic()
            && !(self.stereo_crop_lat > 0.0 && self.stereo_crop_lat < 90.0)
        {
            return Err(RasterError::Options(format!(
                "stereographic crop latitude must lie strictly between 0 and 90, got {}",
                self.stereo_crop_lat
            )));
        }
        Ok(())
    }

    /// Key of the lookup table these options need.
    pub fn table_key(&self) -> TableKey {
        let mode = match self.mode {
            RenderMode::WarpedPq => RenderMode::Pq,
            m => m,
        };
        TableKey {
            size: self.size,
            mode,
            fast: self.fast && !mode.is_stereographic(),
            crop_bits: if mode.is_stereographic() {
                self.stereo_crop_lat.to_bits()
            } else {
                0
            },
        }
    }
}

/// Identifies a lookup table. Tables depend on the output geometry only, never
/// on the panorama or the control points, so warped and unwarped quincunx
/// renders share one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TableKey {
    pub size: usize,
    pub mode: RenderMode,
    pub fast: bool,
    crop_bits: u64,
}

/// Builds the lookup table for `opts`.
pub fn build_table(opts: &RenderOptions) -> Result<ProjectionTable, RasterError> {
    opts.validate()?;
    let n = opts.size;
    let table = match (opts.mode, opts.fast) {
        (RenderMode::Pq | RenderMode::WarpedPq, true) => projection::fast_pq_table(n)?,
        (RenderMode::Pq | RenderMode::WarpedPq, false) => projection::naive_pq_table(n)?,
        (RenderMode::ApsZenith, true) => projection::fast_aps_table(n, PoleVariant::Zenith)?,
        (RenderMode::ApsZenith, false) => projection::naive_aps_table(n, PoleVariant::Zenith)?,
        (RenderMode::ApsNadir, true) => projection::fast_aps_table(n, PoleVariant::Nadir)?,
        (RenderMode::ApsNadir, false) => projection::naive_aps_table(n, PoleVariant::Nadir)?,
        (RenderMode::StereoZenith, _) => {
            projection::stereographic_table(n, PoleVariant::Zenith, opts.stereo_crop_lat)?
        }
        (RenderMode::StereoNadir, _) => {
            projection::stereographic_table(n, PoleVariant::Nadir, opts.stereo_crop_lat)?
        }
    };
    Ok(table)
}

/// Renders through a prebuilt table. Rows are processed in parallel; `cancel`
/// is polled once per row and a positive answer aborts the render.
pub fn render_with_table(
    img: &EquirectImage,
    table: &ProjectionTable,
    cp: &ControlPoints,
    opts: &RenderOptions,
    cancel: &(dyn Fn() -> bool + Sync),
) -> Result<Raster, RasterError> {
    let n = table.size();
    let channels = img.channels() as usize;
    let mut data = vec![0u8; n * n * channels];
    let cancelled = AtomicBool::new(false);

    data.par_chunks_mut(n * channels)
        .enumerate()
        .for_each(|(row, out)| {
            if cancelled.load(Ordering::Relaxed) || cancel() {
                cancelled.store(true, Ordering::Relaxed);
                return;
            }
            for (px, entry) in out.chunks_exact_mut(channels).zip(table.row(row)) {
                let fetch = if opts.mode.uses_controls() {
                    let w = warp(entry.coord.lat, entry.coord.lon, cp, opts.kernel);
                    SphericalCoord {
                        lat: w.lat,
                        lon: w.lon,
                    }
                } else {
                    entry.coord
                };
                let p = sample(img, fetch, opts.fill, opts.sampling);
                px.copy_from_slice(&p.0[..channels]);
            }
        });

    if cancelled.into_inner() {
        return Err(RasterError::Cancelled);
    }
    Raster::new(n as u32, n as u32, channels as u8, data)
}

/// Table lookup, optional warp and sampling for every output pixel.
pub fn render(
    img: &EquirectImage,
    cp: &ControlPoints,
    opts: &RenderOptions,
) -> Result<Raster, RasterError> {
    let table = build_table(opts)?;
    render_with_table(img, &table, cp, opts, &|| false)
}
