//! Derivation of the color model from a reference wheel image: AB
//! histogram, thinning, endpoint rays, base merging and labeling,
//! boundaries and critical radii.

pub mod bases;
pub mod histogram;
pub mod model;
pub mod radii;
pub mod skeleton;
pub mod wheel;

use image::RgbImage;

pub use bases::{
    anchor_angles, compute_boundaries, extract_bases, group_peaks, merge_angles, ChromogenBase,
};
pub use histogram::{build_histogram, AbHistogram, DEFAULT_BIN_SIZE};
pub use model::{ColorModel, HueInterval, ModelViolation, PreparedModel, MODEL_VERSION};
pub use radii::{compute_radii, Radii};
pub use skeleton::{skeletonize, BinaryGrid, SkeletonGraph};

use crate::error::{Error, Result};

/// Occupied bins closer than this to the AB origin count as gray.
pub const CHROMA_FLOOR: f64 = 1.0;

/// Intermediate products of a model build, kept for diagnostics.
#[derive(Debug, Clone)]
pub struct BuildTrace {
    pub histogram: AbHistogram,
    pub skeleton: SkeletonGraph,
    pub endpoint_angles: Vec<f64>,
}

pub fn build_model_traced(wheel: &RgbImage, bin_size: f64) -> Result<(ColorModel, BuildTrace)> {
    let histogram = build_histogram(wheel, bin_size)?;
    let chromatic = histogram.nonzero_bins().any(|(r, c, _)| {
        let (a, b) = histogram.center_of(r, c);
        a.hypot(b) >= CHROMA_FLOOR
    });
    if !chromatic {
        return Err(Error::NoChromaticContent);
    }
    let skeleton = skeletonize(&histogram)?;
    let bases = extract_bases(&skeleton)?;
    let boundaries = compute_boundaries(&bases);
    let radii = compute_radii(&skeleton)?;
    let model = ColorModel {
        version: MODEL_VERSION,
        bases,
        boundaries_deg: boundaries,
        r1: radii.r1,
        r2: radii.r2,
        r2_prime: radii.r2_prime,
        r3: radii.r3,
        brown_sector_deg: [0.0, 90.0],
        plateau_half_width_deg: 0.0,
    }
    .canonicalize()?;
    let endpoint_angles = bases::endpoint_angles(&skeleton);
    Ok((
        model,
        BuildTrace {
            histogram,
            skeleton,
            endpoint_angles,
        },
    ))
}

pub fn build_model(wheel: &RgbImage) -> Result<ColorModel> {
    build_model_traced(wheel, DEFAULT_BIN_SIZE).map(|(m, _)| m)
}
