//! The 4-points equator warp.
//!
//! Four control points on the panorama say where the four non-conformal points
//! of the quincunx should land. The warp is applied to every sphere fetch:
//! longitudes are stretched so the quadrant bounds -180/-90/0/90 hit the
//! control longitudes, and latitudes are bent so the equator passes through the
//! control latitudes while both poles stay fixed. All angles are degrees.

use std::fmt;
use std::str::FromStr;

use crate::projection::wrap_longitude;

/// Start of each longitude quadrant; the phantom bound 180 closes quadrant 4.
const QUADRANT_BOUNDS: [f64; 5] = [-180.0, -90.0, 0.0, 90.0, 180.0];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ControlError {
    #[error("expected 4 control points (8 numbers), got {0} numbers")]
    Count(usize),
    #[error("cannot parse control value {0:?}")]
    Parse(String),
    #[error("control point {index} has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("control longitude {value} is outside [-180, 180]")]
    Longitude { value: f64 },
    #[error("control latitude {value} is outside [-90, 90]")]
    Latitude { value: f64 },
    #[error(
        "control longitudes must be strictly increasing, -180 <= x1 < x2 < x3 < x4 <= 180; \
         longitude {value} is used twice"
    )]
    Duplicate { value: f64 },
    #[error("control longitudes -180 and 180 are the same meridian; x4 - x1 must be below 360")]
    FullTurn,
    #[error("control longitudes {a} and {b} are closer than {min} degrees")]
    TooClose { a: f64, b: f64, min: f64 },
}

/// Interpolation law used between neighbouring control points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum InterpKernel {
    #[default]
    Linear,
    CatmullRom,
    /// Cubic Hermite with zero end slopes.
    HermiteZeroSlope,
}

impl FromStr for InterpKernel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "linear" => Ok(Self::Linear),
            "catmull-rom" => Ok(Self::CatmullRom),
            "hermite" | "hermite-zero-slope" => Ok(Self::HermiteZeroSlope),
            other => Err(format!(
                "unknown kernel {other:?} (expected linear, catmull-rom or hermite)"
            )),
        }
    }
}

impl fmt::Display for InterpKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Linear => "linear",
            Self::CatmullRom => "catmull-rom",
            Self::HermiteZeroSlope => "hermite",
        })
    }
}

/// Four validated control points sorted by longitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlPoints {
    lon: [f64; 4],
    lat: [f64; 4],
}

impl ControlPoints {
    /// Control longitudes on the quadrant bounds and latitudes on the equator.
    pub fn identity() -> Self {
        Self {
            lon: [-180.0, -90.0, 0.0, 90.0],
            lat: [0.0; 4],
        }
    }

    /// Parses `lon1,lat1,...,lon4,lat4`.
    pub fn parse(s: &str) -> Result<Self, ControlError> {
        let values = s
            .split(',')
            .map(|v| {
                let v = v.trim();
                v.parse::<f64>()
                    .map_err(|_| ControlError::Parse(v.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_flat(&values)
    }

    /// Builds from eight numbers ordered lon, lat per point.
    pub fn from_flat(values: &[f64]) -> Result<Self, ControlError> {
        if values.len() != 8 {
            return Err(ControlError::Count(values.len()));
        }
        let raw = [0, 1, 2, 3].map(|i| (values[2 * i], values[2 * i + 1]));
        validate_controls(raw)
    }

    /// Longitudes `x1..x4`.
    pub fn longitudes(&self) -> [f64; 4] {
        self.lon
    }

    /// Latitudes `y1..y4`.
    pub fn latitudes(&self) -> [f64; 4] {
        self.lat
    }

    /// `(lon, lat)` of point `i` in `1..=4`.
    pub fn point(&self, i: usize) -> (f64, f64) {
        (self.lon[i - 1], self.lat[i - 1])
    }

    /// The phantom point `(x1 + 360, y1)`, the same sphere point as point 1.
    pub fn phantom(&self) -> (f64, f64) {
        (self.lon[0] + 360.0, self.lat[0])
    }

    /// Smallest longitude gap between neighbours, including the gap from x4 around to x1.
    pub fn min_separation(&self) -> f64 {
        let x = self.knot_lon_array();
        (1..=4)
            .map(|i| x[i + 1] - x[i])
            .fold(f64::INFINITY, f64::min)
    }

    /// Fails with the first neighbouring pair (cyclically) closer than `min` degrees.
    pub fn require_separation(&self, min: f64) -> Result<(), ControlError> {
        let x = self.knot_lon_array();
        for i in 1..=4 {
            if x[i + 1] - x[i] < min {
                let b = if i == 4 { self.lon[0] } else { x[i + 1] };
                return Err(ControlError::TooClose { a: x[i], b, min });
            }
        }
        Ok(())
    }

    /// Flat `lon1,lat1,...` form.
    pub fn to_flat(&self) -> [f64; 8] {
        let mut out = [0.0; 8];
        for i in 0..4 {
            out[2 * i] = self.lon[i];
            out[2 * i + 1] = self.lat[i];
        }
        out
    }

    /// Longitude knots `x0..x6` with periodic extension: `x0 = x4 - 360`,
    /// `x5 = x1 + 360`, `x6 = x2 + 360`.
    fn knot_lon_array(&self) -> [f64; 7] {
        let x = self.lon;
        [
            x[3] - 360.0,
            x[0],
            x[1],
            x[2],
            x[3],
            x[0] + 360.0,
            x[1] + 360.0,
        ]
    }

    fn knot_lat_array(&self) -> [f64; 7] {
        let y = self.lat;
        [y[3], y[0], y[1], y[2], y[3], y[0], y[1]]
    }
}

impl Default for ControlPoints {
    fn default() -> Self {
        Self::identity()
    }
}

impl fmt::Display for ControlPoints {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let flat = self.to_flat();
        for (k, v) in flat.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks ranges, sorts by longitude and enforces distinct longitudes.
pub fn validate_controls(raw: [(f64, f64); 4]) -> Result<ControlPoints, ControlError> {
    for (index, &(lon, lat)) in raw.iter().enumerate() {
        if !lon.is_finite() || !lat.is_finite() {
            return Err(ControlError::NonFinite { index: index + 1 });
        }
        if !(-180.0..=180.0).contains(&lon) {
            return Err(ControlError::Longitude { value: lon });
        }
        if !(-90.0..=90.0).contains(&lat) {
            return Err(ControlError::Latitude { value: lat });
        }
    }
    let mut sorted = raw;
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in sorted.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(ControlError::Duplicate { value: w[0].0 });
        }
    }
    if sorted[3].0 - sorted[0].0 >= 360.0 {
        return Err(ControlError::FullTurn);
    }
    Ok(ControlPoints {
        lon: sorted.map(|p| p.0),
        lat: sorted.map(|p| p.1),
    })
}

/// Cubic Hermite segment on `t ∈ [0, 1]`; slopes are per unit `t`.
#[derive(Debug, Clone, Copy)]
struct Segment {
    p0: f64,
    p1: f64,
    m0: f64,
    m1: f64,
}

impl Segment {
    fn eval(&self, t: f64) -> f64 {
        let t2 = t * t;
        let t3 = t2 * t;
        self.p0 * (2.0 * t3 - 3.0 * t2 + 1.0)
            + self.m0 * (t3 - 2.0 * t2 + t)
            + self.p1 * (3.0 * t2 - 2.0 * t3)
            + self.m1 * (t3 - t2)
    }

    /// Smallest derivative over `[0, 1]`. The derivative is a quadratic, so
    /// checking the ends and the vertex is exact.
    fn min_slope(&self) -> f64 {
        let d = self.p1 - self.p0;
        // derivative = a t² + b t + c
        let a = 3.0 * (self.m0 + self.m1) - 6.0 * d;
        let b = 6.0 * d - 4.0 * self.m0 - 2.0 * self.m1;
        let c = self.m0;
        let at = |t: f64| (a * t + b) * t + c;
        let mut lo = at(0.0).min(at(1.0));
        if a != 0.0 {
            let v = -b / (2.0 * a);
            if v > 0.0 && v < 1.0 {
                lo = lo.min(at(v));
            }
        }
        lo
    }
}

/// Segment `i` (1..=4) of the spline through `(s_k, v_k)`, `k = 0..=6`.
fn segment(kernel: InterpKernel, s: &[f64; 7], v: &[f64; 7], i: usize) -> Segment {
    let (m0, m1) = match kernel {
        InterpKernel::Linear | InterpKernel::HermiteZeroSlope => (0.0, 0.0),
        InterpKernel::CatmullRom => {
            let width = s[i + 1] - s[i];
            let tangent = |k: usize| (v[k + 1] - v[k - 1]) / (s[k + 1] - s[k - 1]) * width;
            (tangent(i), tangent(i + 1))
        }
    };
    Segment {
        p0: v[i],
        p1: v[i + 1],
        m0,
        m1,
    }
}

fn lerp(t: f64, p: f64, q: f64) -> f64 {
    (1.0 - t) * p + t * q
}

/// Quadrant of a longitude: `[-180,-90)`, `[-90,0)`, `[0,90)`, `[90,180]`.
fn quadrant(lon: f64) -> usize {
    if lon < -90.0 {
        1
    } else if lon < 0.0 {
        2
    } else if lon < 90.0 {
        3
    } else {
        4
    }
}

/// Maps the quadrant `[L, U]` containing `lon` onto `[x_i, x_{i+1}]`.
///
/// Returns the warped longitude, unwrapped (quadrant 4 may exceed 180 because it
/// interpolates towards the phantom point) and the quadrant index `1..=4`.
/// Spline kernels fall back to linear on any quadrant where the curve would
/// not be strictly increasing.
pub fn warp_longitude(lon: f64, cp: &ControlPoints, kernel: InterpKernel) -> (f64, usize) {
    let (raw, i, _) = longitude_step(lon, cp, kernel);
    (raw, i)
}

/// Warped longitude, quadrant, and the fraction of the way from `x_i` to
/// `x_{i+1}`. On a linear segment the fraction is the quadrant fraction
/// itself; recovering it by division would amplify rounding when two
/// control longitudes are close.
fn longitude_step(lon: f64, cp: &ControlPoints, kernel: InterpKernel) -> (f64, usize, f64) {
    let i = quadrant(lon);
    let lower = QUADRANT_BOUNDS[i - 1];
    let upper = QUADRANT_BOUNDS[i];
    let t = (lon - lower) / (upper - lower);
    let x = cp.knot_lon_array();
    if kernel != InterpKernel::Linear {
        let bounds = [-270.0, -180.0, -90.0, 0.0, 90.0, 180.0, 270.0];
        let seg = segment(kernel, &bounds, &x, i);
        if seg.min_slope() > 0.0 {
            let raw = seg.eval(t);
            return (raw, i, control_fraction(raw, i, &x));
        }
    }
    (lerp(t, x[i], x[i + 1]), i, t)
}

fn control_fraction(warped_lon: f64, i: usize, x: &[f64; 7]) -> f64 {
    (warped_lon - x[i]) / (x[i + 1] - x[i])
}

/// Latitude of the warped equator at the (unwrapped) warped longitude.
pub fn equator_latitude(
    warped_lon: f64,
    i: usize,
    cp: &ControlPoints,
    kernel: InterpKernel,
) -> f64 {
    let t = control_fraction(warped_lon, i, &cp.knot_lon_array());
    equator_at(t, i, cp, kernel)
}

fn equator_at(t: f64, i: usize, cp: &ControlPoints, kernel: InterpKernel) -> f64 {
    let x = cp.knot_lon_array();
    let y = cp.knot_lat_array();
    match kernel {
        InterpKernel::Linear => lerp(t, y[i], y[i + 1]),
        _ => segment(kernel, &x, &y, i).eval(t).clamp(-90.0, 90.0),
    }
}

/// Moves the equator to `equator_lat` while keeping both poles fixed. The
/// result is clamped so rounding never pushes it past a pole.
pub fn warp_latitude(lat: f64, equator_lat: f64) -> f64 {
    let out = if lat < 0.0 {
        let t = -lat / 90.0;
        (1.0 - t) * equator_lat - 90.0 * t
    } else {
        let t = lat / 90.0;
        (1.0 - t) * equator_lat + 90.0 * t
    };
    out.clamp(-90.0, 90.0)
}

/// Warped fetch coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WarpedCoord {
    pub lat: f64,
    pub lon: f64,
}

/// The full warp, with the longitude wrapped into `[-180, 180)`.
pub fn warp(lat: f64, lon: f64, cp: &ControlPoints, kernel: InterpKernel) -> WarpedCoord {
    let (warped_lon, i, t) = longitude_step(lon, cp, kernel);
    let equator = equator_at(t, i, cp, kernel);
    WarpedCoord {
        lat: warp_latitude(lat, equator),
        lon: wrap_longitude(warped_lon),
    }
}
