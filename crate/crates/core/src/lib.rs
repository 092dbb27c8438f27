//! Peirce quincuncial reprojection of equirectangular panoramas.
//!
//! [`elliptic`] evaluates the Jacobi functions behind the map, [`projection`]
//! turns output pixels into sphere coordinates and builds lookup tables,
//! [`warp`] moves the equator and dateline through four control points and
//! [`raster`] samples, renders, tiles and stores images.

pub mod elliptic;
pub mod projection;
pub mod raster;
pub mod warp;
