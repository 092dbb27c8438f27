//! Square-to-sphere mappings.
//!
//! Output images are computed by inverse mapping: every output pixel is turned
//! into a (latitude, longitude) to fetch from the panorama. The central piece
//! is [`cnrectify`], which maps a point of the unit square onto the southern
//! hemisphere through `cn(z | 1/2)` followed by an inverse stereographic
//! projection. The quincunx ([`pq_lookup`]) places one such hemisphere square,
//! rotated by 45°, in the middle of the output and reflects the other
//! hemisphere into the four corner triangles.
//!
//! Coordinates on the sphere are in degrees throughout.

use std::sync::LazyLock;

use crate::elliptic::{self, DEFAULT_TOL};

/// `K(1/2)`, the quarter period at the lemniscatic parameter.
static QUARTER_PERIOD: LazyLock<f64> =
    LazyLock::new(|| elliptic::quarter_period(0.5).expect("0.5 is a valid parameter"));

/// Radii within this distance of 1 are snapped onto the equator.
const EQUATOR_SNAP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProjectionError {
    #[error("latitude {0} projects to infinity")]
    Infinity(f64),
    #[error("table size must be at least 2, got {0}")]
    TooSmall(usize),
    #[error("the symmetric fast path needs an even size, got {0}")]
    OddSize(usize),
    #[error("crop latitude must lie strictly between 0 and 90 degrees, got {0}")]
    Crop(f64),
}

/// Wraps a longitude into `[-180, 180)`. In-range values are returned untouched.
pub fn wrap_longitude(lon: f64) -> f64 {
    if (-180.0..180.0).contains(&lon) || !lon.is_finite() {
        return lon;
    }
    let r = (lon + 180.0).rem_euclid(360.0);
    // rem_euclid can round up to the modulus for tiny negative inputs
    if r >= 360.0 {
        -180.0
    } else {
        r - 180.0
    }
}

/// Latitude/longitude pair on the panoramic sphere, in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SphericalCoord {
    pub lat: f64,
    pub lon: f64,
}

impl SphericalCoord {
    /// Builds a coordinate, wrapping the longitude into `[-180, 180)`.
    pub fn new(lat: f64, lon: f64) -> Self {
        Self {
            lat,
            lon: wrap_longitude(lon),
        }
    }
}

/// A point of the normalized output square, corners at `(±1, ±1)`, `y` up.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareCoord {
    pub x: f64,
    pub y: f64,
}

impl SquareCoord {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Center of pixel `(row, col)` in a `size`×`size` image, row 0 at the top.
    pub fn pixel_center(row: usize, col: usize, size: usize) -> Self {
        let n = size as f64;
        Self {
            x: (2.0 * col as f64 + 1.0 - n) / n,
            y: (n - 2.0 * row as f64 - 1.0) / n,
        }
    }
}

/// Cartesian point of the stereographic plane. The radius `tan(p/2)` encodes the
/// angular distance `p` from the south pole; the polar angle is the longitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StereoPoint {
    pub x: f64,
    pub y: f64,
}

impl StereoPoint {
    pub fn radius(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// Which hemisphere square a quincunx position was fetched from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hemisphere {
    North,
    South,
}

/// Selects the pole for the antipode-perimeter square and the stereographic views.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PoleVariant {
    Zenith,
    Nadir,
}

pub fn inverse_stereographic(p: StereoPoint) -> SphericalCoord {
    let lon = if p.x == 0.0 && p.y == 0.0 {
        0.0
    } else {
        p.y.atan2(p.x).to_degrees()
    };
    let lat = (2.0 * p.radius().atan2(1.0) - std::f64::consts::FRAC_PI_2).to_degrees();
    SphericalCoord::new(lat, lon)
}

pub fn forward_stereographic(s: SphericalCoord) -> Result<StereoPoint, ProjectionError> {
    if s.lat >= 90.0 {
        return Err(ProjectionError::Infinity(s.lat));
    }
    let r = ((s.lat + 90.0) / 2.0).to_radians().tan();
    let (sin, cos) = s.lon.to_radians().sin_cos();
    Ok(StereoPoint {
        x: r * cos,
        y: r * sin,
    })
}

/// Maps a point of the hemisphere square to the southern hemisphere.
///
/// The square is rotated and scaled onto the diamond with vertices `0`, `K+iK`,
/// `2K`, `K-iK` of the `cn(· | 1/2)` domain, whose image is the unit disk. The
/// square center lands on the south pole and its boundary on the equator; the
/// corners are the four non-conformal points. A pole of `cn` (only reachable
/// outside the square) is reported as the north pole.
pub fn cnrectify(sq: SquareCoord) -> SphericalCoord {
    let ke = *QUARTER_PERIOD;
    let re = ke * (sq.x - sq.y) / 2.0 + ke;
    let im = ke * (sq.x + sq.y) / 2.0;
    match elliptic::cn_complex(re, im, 0.5, DEFAULT_TOL) {
        Ok(w) => {
            let mut s = inverse_stereographic(StereoPoint { x: w.re, y: w.im });
            if (w.norm() - 1.0).abs() <= EQUATOR_SNAP {
                s.lat = 0.0;
            }
            s
        }
        Err(_) => SphericalCoord {
            lat: 90.0,
            lon: 0.0,
        },
    }
}

/// Hemisphere-square coordinates for a point of the full quincunx.
///
/// Inside the central diamond `|x| + |y| <= 1` this is a 45° rotation. The
/// corner triangles are reflected across the nearest diamond edge first, so
/// both sides of an edge reach the same hemisphere point.
pub fn quincunx_to_hemisphere(sq: SquareCoord) -> (Hemisphere, SquareCoord) {
    let SquareCoord { x, y } = sq;
    if x.abs() + y.abs() <= 1.0 {
        return (Hemisphere::South, SquareCoord::new(x + y, y - x));
    }
    let sx = x.signum();
    let sy = y.signum();
    let xr = sx - x;
    let yr = sy - y;
    let s = sx * sy;
    (
        Hemisphere::North,
        SquareCoord::new(s * (xr + yr), s * (xr - yr)),
    )
}

/// The sphere point shown at a position of the Peirce quincunx.
///
/// The central diamond holds the southern hemisphere (its center is the
/// south pole); the corner triangles hold the northern hemisphere, obtained by
/// mirroring the latitude. Points on the diamond edge count as southern.
pub fn pq_lookup(sq: SquareCoord) -> (Hemisphere, SphericalCoord) {
    let (hemisphere, h) = quincunx_to_hemisphere(sq);
    let s = cnrectify(h);
    match hemisphere {
        Hemisphere::South => (hemisphere, s),
        Hemisphere::North => (
            hemisphere,
            SphericalCoord {
                lat: -s.lat,
                lon: s.lon,
            },
        ),
    }
}

/// Longitude spin that aligns the antipode-perimeter square with the image axes.
pub const APS_SPIN: f64 = 45.0;

fn aps_from_hemisphere(s: SphericalCoord, variant: PoleVariant) -> SphericalCoord {
    // With every control latitude at a pole, the warped equator collapses onto
    // that pole: the southern hemisphere square covers the whole sphere with
    // latitude 90 + 2φ (zenith), and the northern one with -90 + 2φ (nadir).
    let lat = match variant {
        PoleVariant::Zenith => 90.0 + 2.0 * s.lat,
        PoleVariant::Nadir => -90.0 - 2.0 * s.lat,
    };
    SphericalCoord::new(lat, s.lon + APS_SPIN)
}

/// Antipode perimeter square: the whole sphere in one hemisphere square, with
/// the selected pole spread over the perimeter and its antipode at the center.
pub fn aps_lookup(sq: SquareCoord, variant: PoleVariant) -> SphericalCoord {
    aps_from_hemisphere(cnrectify(sq), variant)
}

/// Plain stereographic view scaled so that `crop_lat` (measured from the
/// projection center towards the far pole) lands on the edge midpoints.
pub fn stereographic_lookup(
    sq: SquareCoord,
    variant: PoleVariant,
    crop_lat: f64,
) -> Result<SphericalCoord, ProjectionError> {
    let scale = stereo_scale(crop_lat)?;
    Ok(stereo_at(sq, variant, scale))
}

fn stereo_scale(crop_lat: f64) -> Result<f64, ProjectionError> {
    if !(crop_lat > 0.0 && crop_lat < 90.0) {
        return Err(ProjectionError::Crop(crop_lat));
    }
    Ok(forward_stereographic(SphericalCoord::new(crop_lat, 0.0))?.radius())
}

fn stereo_at(sq: SquareCoord, variant: PoleVariant, scale: f64) -> SphericalCoord {
    let s = inverse_stereographic(StereoPoint {
        x: sq.x * scale,
        y: sq.y * scale,
    });
    match variant {
        PoleVariant::Nadir => s,
        PoleVariant::Zenith => SphericalCoord {
            lat: -s.lat,
            lon: s.lon,
        },
    }
}

/// One output pixel of a [`ProjectionTable`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableEntry {
    pub coord: SphericalCoord,
    pub hemisphere: Hemisphere,
}

/// Per-pixel sphere coordinates for a square output, row-major with row 0 on top.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionTable {
    size: usize,
    entries: Vec<TableEntry>,
    cn_evaluations: u64,
}

impl ProjectionTable {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entries(&self) -> &[TableEntry] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> TableEntry {
        self.entries[row * self.size + col]
    }

    pub fn row(&self, row: usize) -> &[TableEntry] {
        &self.entries[row * self.size..(row + 1) * self.size]
    }

    /// Number of complex `cn` evaluations spent building this table.
    pub fn cn_evaluations(&self) -> u64 {
        self.cn_evaluations
    }

    /// Largest per-entry difference to `other`, in degrees, with longitudes
    /// compared on the circle. `None` if the sizes differ.
    pub fn max_deviation(&self, other: &ProjectionTable) -> Option<f64> {
        if self.size != other.size {
            return None;
        }
        let worst = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| {
                let dlat = (a.coord.lat - b.coord.lat).abs();
                let dlon = (a.coord.lon - b.coord.lon).rem_euclid(360.0);
                dlat.max(dlon.min(360.0 - dlon))
            })
            .fold(0.0_f64, f64::max);
        Some(worst)
    }
}

fn check_size(size: usize) -> Result<(), ProjectionError> {
    if size < 2 {
        Err(ProjectionError::TooSmall(size))
    } else {
        Ok(())
    }
}

fn check_fast_size(size: usize) -> Result<(), ProjectionError> {
    check_size(size)?;
    if size % 2 == 1 {
        Err(ProjectionError::OddSize(size))
    } else {
        Ok(())
    }
}

fn per_pixel_table(
    size: usize,
    cn_per_pixel: u64,
    f: impl Fn(SquareCoord) -> TableEntry,
) -> ProjectionTable {
    let entries = (0..size * size)
        .map(|k| f(SquareCoord::pixel_center(k / size, k % size, size)))
        .collect();
    ProjectionTable {
        size,
        entries,
        cn_evaluations: cn_per_pixel * (size * size) as u64,
    }
}

/// Evaluates [`pq_lookup`] at every pixel center. Reference for [`fast_pq_table`].
pub fn naive_pq_table(size: usize) -> Result<ProjectionTable, ProjectionError> {
    check_size(size)?;
    Ok(per_pixel_table(size, 1, |sq| {
        let (hemisphere, coord) = pq_lookup(sq);
        TableEntry { coord, hemisphere }
    }))
}

/// Evaluates [`aps_lookup`] at every pixel center.
pub fn naive_aps_table(
    size: usize,
    variant: PoleVariant,
) -> Result<ProjectionTable, ProjectionError> {
    check_size(size)?;
    Ok(per_pixel_table(size, 1, |sq| TableEntry {
        coord: aps_lookup(sq, variant),
        hemisphere: aps_hemisphere(variant),
    }))
}

fn aps_hemisphere(variant: PoleVariant) -> Hemisphere {
    match variant {
        PoleVariant::Zenith => Hemisphere::South,
        PoleVariant::Nadir => Hemisphere::North,
    }
}

/// Stereographic table; cheap enough that no symmetric path is needed.
pub fn stereographic_table(
    size: usize,
    variant: PoleVariant,
    crop_lat: f64,
) -> Result<ProjectionTable, ProjectionError> {
    check_size(size)?;
    let scale = stereo_scale(crop_lat)?;
    Ok(per_pixel_table(size, 0, |sq| {
        let coord = stereo_at(sq, variant, scale);
        let hemisphere = if coord.lat >= 0.0 {
            Hemisphere::North
        } else {
            Hemisphere::South
        };
        TableEntry { coord, hemisphere }
    }))
}

/// Hemisphere-square samples on the integer lattice `(a, b) / denom`,
/// `|a|, |b| <= extent`, filled from one octant by the dihedral symmetries of
/// the square.
///
/// With `h = hx + i·hy`, the rectified value is `w = cn(K + K·e^{iπ/4}·h/√2)`.
/// At `m = 1/2` the lattice of periods is square, which gives
///
/// * `h → i·h` (quarter turn): `w → i·w`, longitude + 90°;
/// * `h → -i·conj(h)` (reflection in the anti-diagonal): `w → conj(w)`,
///   longitude negated;
///
/// and latitude is invariant under both.
struct SymmetricLattice {
    extent: i64,
    values: Vec<SphericalCoord>,
    evaluations: u64,
}

impl SymmetricLattice {
    fn build(extent: i64, denom: f64, admit: impl Fn(i64, i64) -> bool) -> Self {
        let side = (2 * extent + 1) as usize;
        let mut lattice = Self {
            extent,
            values: vec![
                SphericalCoord {
                    lat: f64::NAN,
                    lon: f64::NAN,
                };
                side * side
            ],
            evaluations: 0,
        };
        // fundamental octant 0 <= b <= a
        for a in 0..=extent {
            for b in 0..=a {
                if !admit(a, b) {
                    continue;
                }
                let s = cnrectify(SquareCoord::new(a as f64 / denom, b as f64 / denom));
                lattice.evaluations += 1;
                lattice.scatter(a, b, s);
            }
        }
        lattice
    }

    fn scatter(&mut self, a: i64, b: i64, s: SphericalCoord) {
        let lat = s.lat;
        let lon = s.lon;
        let images = [
            ((a, b), lon),
            ((-b, a), lon + 90.0),
            ((-a, -b), lon + 180.0),
            ((b, -a), lon - 90.0),
            ((-b, -a), -lon),
            ((a, -b), 90.0 - lon),
            ((b, a), 180.0 - lon),
            ((-a, b), -90.0 - lon),
        ];
        for ((i, j), l) in images {
            let k = self.index(i, j);
            self.values[k] = SphericalCoord::new(lat, l);
        }
    }

    fn index(&self, a: i64, b: i64) -> usize {
        let side = 2 * self.extent + 1;
        ((a + self.extent) * side + (b + self.extent)) as usize
    }

    fn get(&self, a: i64, b: i64) -> SphericalCoord {
        self.values[self.index(a, b)]
    }
}

/// The Peirce quincunx built from one sixteenth of the output.
///
/// For an even `size`, every pixel center of the quincunx lands on the
/// hemisphere lattice `(i, j)·2/size` with `i + j` odd, so the complex `cn` is
/// evaluated only on the octant `0 <= j <= i` of one hemisphere square; the
/// other seven octants follow from the dihedral symmetries and the other
/// hemisphere from negating latitude.
pub fn fast_pq_table(size: usize) -> Result<ProjectionTable, ProjectionError> {
    check_fast_size(size)?;
    let n = size as i64;
    let half = n / 2;
    let lattice = SymmetricLattice::build(half, half as f64, |a, b| (a + b) % 2 == 1);

    let mut entries = Vec::with_capacity(size * size);
    for row in 0..n {
        for col in 0..n {
            // twice the pixel center, scaled by size: odd integers in (-n, n)
            let x = 2 * col + 1 - n;
            let y = n - 2 * row - 1;
            let entry = if x.abs() + y.abs() <= n {
                TableEntry {
                    coord: lattice.get((x + y) / 2, (y - x) / 2),
                    hemisphere: Hemisphere::South,
                }
            } else {
                let sx = x.signum();
                let sy = y.signum();
                let xr = sx * n - x;
                let yr = sy * n - y;
                let s = sx * sy;
                let c = lattice.get(s * (xr + yr) / 2, s * (xr - yr) / 2);
                TableEntry {
                    coord: SphericalCoord {
                        lat: -c.lat,
                        lon: c.lon,
                    },
                    hemisphere: Hemisphere::North,
                }
            };
            entries.push(entry);
        }
    }
    Ok(ProjectionTable {
        size,
        entries,
        cn_evaluations: lattice.evaluations,
    })
}

/// Antipode-perimeter square from one eighth of the output.
pub fn fast_aps_table(
    size: usize,
    variant: PoleVariant,
) -> Result<ProjectionTable, ProjectionError> {
    check_fast_size(size)?;
    let n = size as i64;
    // pixel centers are odd multiples of 1/size
    let lattice = SymmetricLattice::build(n - 1, n as f64, |a, b| a % 2 == 1 && b % 2 == 1);
    let hemisphere = aps_hemisphere(variant);
    let mut entries = Vec::with_capacity(size * size);
    for row in 0..n {
        for col in 0..n {
            let s = lattice.get(2 * col + 1 - n, n - 2 * row - 1);
            entries.push(TableEntry {
                coord: aps_from_hemisphere(s, variant),
                hemisphere,
            });
        }
    }
    Ok(ProjectionTable {
        size,
        entries,
        cn_evaluations: lattice.evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn wrap_longitude_ranges() {
        assert_eq!(wrap_longitude(37.25), 37.25);
        assert_eq!(wrap_longitude(180.0), -180.0);
        assert_eq!(wrap_longitude(-180.0), -180.0);
        assert_eq!(wrap_longitude(190.0), -170.0);
        assert_eq!(wrap_longitude(-190.0), 170.0);
        assert_eq!(wrap_longitude(540.0), -180.0);
        assert_eq!(wrap_longitude(-1e-20 - 180.0), -180.0);
    }

    #[test]
    fn inverse_stereographic_examples() {
        assert_eq!(
            inverse_stereographic(StereoPoint { x: 0.0, y: 0.0 }),
            SphericalCoord {
                lat: -90.0,
                lon: 0.0
            }
        );
        let s = inverse_stereographic(StereoPoint { x: 1.0, y: 0.0 });
        assert!(close(s.lat, 0.0, 1e-14) && s.lon == 0.0);
        let s = inverse_stereographic(StereoPoint { x: 0.0, y: -1.0 });
        assert!(close(s.lat, 0.0, 1e-14) && close(s.lon, -90.0, 1e-14));
        // the origin keeps a canonical longitude even with signed zeros
        assert_eq!(
            inverse_stereographic(StereoPoint { x: -0.0, y: 0.0 }).lon,
            0.0
        );
        assert_eq!(
            inverse_stereographic(StereoPoint {
                x: f64::INFINITY,
                y: 0.0
            })
            .lat,
            90.0
        );
    }

    #[test]
    fn forward_stereographic_examples() {
        let p = forward_stereographic(SphericalCoord::new(-90.0, 123.0)).unwrap();
        assert!(p.radius() < 1e-15);
        let p = forward_stereographic(SphericalCoord::new(0.0, 0.0)).unwrap();
        assert!(close(p.x, 1.0, 1e-15) && close(p.y, 0.0, 1e-15));
        assert_eq!(
            forward_stereographic(SphericalCoord::new(90.0, 0.0)),
            Err(ProjectionError::Infinity(90.0))
        );
    }

    #[test]
    fn stereographic_round_trip() {
        for lat in [-89.5, -45.0, -1.0, 0.0, 12.5, 60.0, 89.0] {
            for lon in [-180.0, -97.3, 0.0, 45.0, 179.9] {
                let s = SphericalCoord::new(lat, lon);
                let back = inverse_stereographic(forward_stereographic(s).unwrap());
                assert!(close(back.lat, lat, 1e-10), "{s:?} -> {back:?}");
                let dlon = (back.lon - lon).rem_euclid(360.0);
                assert!(dlon.min(360.0 - dlon) < 1e-10, "{s:?} -> {back:?}");
            }
        }
    }

    #[test]
    fn cnrectify_examples() {
        let c = cnrectify(SquareCoord::new(0.0, 0.0));
        assert!(close(c.lat, -90.0, 1e-12) && c.lon == 0.0);
        let c = cnrectify(SquareCoord::new(1.0, -1.0));
        assert_eq!(
            c,
            SphericalCoord {
                lat: 0.0,
                lon: -180.0
            }
        );
        let c = cnrectify(SquareCoord::new(-1.0, 1.0));
        assert_eq!(c, SphericalCoord { lat: 0.0, lon: 0.0 });
    }

    #[test]
    fn cnrectify_against_frozen_references() {
        // mpmath: cn(K(x-y)/2 + K + iK(x+y)/2 | 1/2), then inverse stereographic
        let cases = [
            ((0.3, -0.2), -53.066_059_577_765_07, -168.740_817_798_878_2),
            ((0.5, 0.25), -35.306_106_881_540_46, -108.038_766_999_151_3),
            ((-0.75, 0.1), -18.771_828_545_237_18, 36.694_023_836_500_67),
            ((0.9, 0.9), -0.984_788_129_161_624_7, -90.0),
            ((0.25, 0.5), -35.306_106_881_540_46, -71.961_233_000_848_68),
        ];
        for ((x, y), lat, lon) in cases {
            let c = cnrectify(SquareCoord::new(x, y));
            assert!(close(c.lat, lat, 1e-11), "lat at ({x}, {y}): {}", c.lat);
            assert!(close(c.lon, lon, 1e-11), "lon at ({x}, {y}): {}", c.lon);
        }
    }

    #[test]
    fn square_boundary_is_the_equator() {
        for k in 0..=40 {
            let t = -1.0 + k as f64 / 20.0;
            for sq in [
                SquareCoord::new(t, 1.0),
                SquareCoord::new(t, -1.0),
                SquareCoord::new(1.0, t),
                SquareCoord::new(-1.0, t),
            ] {
                assert_eq!(cnrectify(sq).lat, 0.0, "{sq:?}");
            }
        }
    }

    #[test]
    fn pq_lookup_examples() {
        let (h, c) = pq_lookup(SquareCoord::new(0.0, 0.0));
        assert_eq!(h, Hemisphere::South);
        assert!(close(c.lat, -90.0, 1e-12));

        let (h, c) = pq_lookup(SquareCoord::new(0.5, 0.5));
        assert_eq!(h, Hemisphere::South);
        assert_eq!(c.lat, 0.0);

        let (h, c) = pq_lookup(SquareCoord::new(1.0, 1.0));
        assert_eq!(h, Hemisphere::North);
        assert!(close(c.lat, 90.0, 1e-12));
    }

    #[test]
    fn diamond_edges_are_continuous() {
        let eps = 1e-9;
        for k in 1..100 {
            let t = k as f64 / 100.0;
            for (x, y, nx, ny) in [
                (t, 1.0 - t, 1.0, 1.0),
                (-t, 1.0 - t, -1.0, 1.0),
                (t, t - 1.0, 1.0, -1.0),
            ] {
                let inside = pq_lookup(SquareCoord::new(x - nx * eps, y - ny * eps));
                let outside = pq_lookup(SquareCoord::new(x + nx * eps, y + ny * eps));
                assert_eq!(inside.0, Hemisphere::South);
                assert_eq!(outside.0, Hemisphere::North);
                assert!(close(inside.1.lat, outside.1.lat, 1e-6));
                assert!(close(inside.1.lon, outside.1.lon, 1e-6));
            }
        }
    }

    #[test]
    fn table_size_errors() {
        assert_eq!(naive_pq_table(0), Err(ProjectionError::TooSmall(0)));
        assert_eq!(naive_pq_table(1), Err(ProjectionError::TooSmall(1)));
        assert_eq!(fast_pq_table(1), Err(ProjectionError::TooSmall(1)));
        assert_eq!(fast_pq_table(7), Err(ProjectionError::OddSize(7)));
        assert_eq!(
            fast_aps_table(5, PoleVariant::Zenith),
            Err(ProjectionError::OddSize(5))
        );
    }

    #[test]
    fn naive_table_small_sizes() {
        let t = naive_pq_table(2).unwrap();
        assert_eq!(t.entries().len(), 4);
        // every centre sits on the diamond, which is the equator
        for e in t.entries() {
            assert_eq!(e.hemisphere, Hemisphere::South);
            assert!(close(e.coord.lat, 0.0, 1e-12));
        }
        let t = naive_pq_table(3).unwrap();
        assert!(close(t.get(1, 1).coord.lat, -90.0, 1e-12));
    }

    #[test]
    fn fast_matches_naive_on_small_even_sizes() {
        for n in [2, 4, 6, 10, 16, 30] {
            let fast = fast_pq_table(n).unwrap();
            let naive = naive_pq_table(n).unwrap();
            let dev = fast.max_deviation(&naive).unwrap();
            assert!(dev < 1e-10, "n = {n}: {dev}");
        }
    }

    #[test]
    fn fast_aps_matches_naive() {
        for variant in [PoleVariant::Zenith, PoleVariant::Nadir] {
            for n in [2, 8, 24] {
                let fast = fast_aps_table(n, variant).unwrap();
                let naive = naive_aps_table(n, variant).unwrap();
                assert!(fast.max_deviation(&naive).unwrap() < 1e-10);
                assert!(fast.cn_evaluations() < naive.cn_evaluations());
            }
        }
    }

    #[test]
    fn aps_examples() {
        let c = aps_lookup(SquareCoord::new(0.0, 0.0), PoleVariant::Zenith);
        assert!(close(c.lat, -90.0, 1e-12));
        let c = aps_lookup(SquareCoord::new(0.0, 0.0), PoleVariant::Nadir);
        assert!(close(c.lat, 90.0, 1e-12));
        for sq in [
            SquareCoord::new(1.0, 0.3),
            SquareCoord::new(-0.4, -1.0),
            SquareCoord::new(1.0, 1.0),
        ] {
            assert_eq!(aps_lookup(sq, PoleVariant::Zenith).lat, 90.0);
            assert_eq!(aps_lookup(sq, PoleVariant::Nadir).lat, -90.0);
        }
    }

    #[test]
    fn stereographic_views() {
        let c = stereographic_lookup(SquareCoord::new(0.0, 0.0), PoleVariant::Nadir, 85.0).unwrap();
        assert_eq!(c.lat, -90.0);
        let c =
            stereographic_lookup(SquareCoord::new(0.0, 0.0), PoleVariant::Zenith, 85.0).unwrap();
        assert_eq!(c.lat, 90.0);
        let c = stereographic_lookup(SquareCoord::new(1.0, 0.0), PoleVariant::Nadir, 85.0).unwrap();
        assert!(close(c.lat, 85.0, 1e-10));
        assert!(
            stereographic_lookup(SquareCoord::new(0.0, 0.0), PoleVariant::Nadir, 90.0).is_err()
        );
        assert!(stereographic_table(4, PoleVariant::Nadir, 0.0).is_err());
    }
}
