//! Crisp per-pixel classification and segmentation masks.

use image::RgbImage;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::category::CategoryId;
use crate::colorspace::{normalize_deg, srgb_to_polar, PolarPixel, Rgb8};
use crate::error::{Error, Result};
use crate::knowledge::{ColorModel, ModelViolation, PreparedModel};

/// Neutral inside r1, Brown inside r2 within the brown sector, otherwise
/// the hue interval holding the angle. Intervals are half-open, so a
/// boundary angle belongs to the class counterclockwise of it.
pub fn classify_point(p: PolarPixel, m: &PreparedModel) -> CategoryId {
    let model = m.model();
    if p.radius <= model.r1 {
        CategoryId::Neutral
    } else if p.radius <= model.r2 && m.in_brown_sector(p.angle) {
        CategoryId::Brown
    } else {
        m.hue_at(p.angle)
    }
}

pub fn classify_rgb(c: Rgb8, m: &PreparedModel) -> CategoryId {
    classify_point(srgb_to_polar(c), m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    pub width: u32,
    pub height: u32,
    pub labels: Vec<CategoryId>,
}

impl LabelMap {
    pub fn get(&self, x: u32, y: u32) -> CategoryId {
        self.labels[(y * self.width + x) as usize]
    }

    /// Pixel count per category, indexed by `CategoryId::index`.
    pub fn counts(&self) -> [u64; 12] {
        let mut out = [0u64; 12];
        for l in &self.labels {
            out[l.index()] += 1;
        }
        out
    }

    pub fn pixel_count(&self) -> u64 {
        self.labels.len() as u64
    }

    /// Color-coded rendering of the labels.
    pub fn composite(&self) -> RgbImage {
        RgbImage::from_fn(self.width, self.height, |x, y| {
            image::Rgb(self.get(x, y).display_rgb())
        })
    }
}

pub fn classify_polar(
    width: u32,
    height: u32,
    pixels: &[PolarPixel],
    m: &PreparedModel,
) -> Result<LabelMap> {
    if pixels.is_empty() {
        return Err(Error::EmptyInput);
    }
    assert_eq!(pixels.len(), (width * height) as usize);
    let labels = pixels
        .par_iter()
        .with_min_len(4096)
        .map(|&p| classify_point(p, m))
        .collect();
    Ok(LabelMap {
        width,
        height,
        labels,
    })
}

pub fn polar_pixels(img: &RgbImage) -> Vec<PolarPixel> {
    img.as_raw()
        .par_chunks_exact(3)
        .with_min_len(4096)
        .map(|c| srgb_to_polar(Rgb8::new(c[0], c[1], c[2])))
        .collect()
}

pub fn classify_image(img: &RgbImage, m: &PreparedModel) -> Result<LabelMap> {
    classify_polar(img.width(), img.height(), &polar_pixels(img), m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryMask {
    pub category: CategoryId,
    pub width: u32,
    pub height: u32,
    pub bitmap: Vec<bool>,
}

impl CategoryMask {
    pub fn pixel_count(&self) -> usize {
        self.bitmap.iter().filter(|&&b| b).count()
    }

    /// White for members, black elsewhere.
    pub fn to_image(&self) -> image::GrayImage {
        let data = self
            .bitmap
            .iter()
            .map(|&b| if b { 255 } else { 0 })
            .collect();
        image::GrayImage::from_raw(self.width, self.height, data).expect("size matches")
    }
}

pub fn mask_for(lm: &LabelMap, category: CategoryId) -> CategoryMask {
    CategoryMask {
        category,
        width: lm.width,
        height: lm.height,
        bitmap: lm.labels.iter().map(|&l| l == category).collect(),
    }
}

/// One mask for every category that labels at least one pixel, in
/// canonical category order.
pub fn masks_from_labels(lm: &LabelMap) -> Vec<CategoryMask> {
    let counts = lm.counts();
    CategoryId::ALL
        .iter()
        .filter(|c| counts[c.index()] > 0)
        .map(|&c| mask_for(lm, c))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryEdit {
    /// Position in the model's sorted boundary list.
    pub index: usize,
    pub angle_deg: f64,
}

/// User edits layered over a base model. Moving r2 drags r2' and r3 along
/// with it.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ModelOverrides {
    #[serde(default)]
    pub boundaries: Vec<BoundaryEdit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r2: Option<f64>,
}

impl ModelOverrides {
    pub fn is_empty(&self) -> bool {
        self.boundaries.is_empty() && self.r1.is_none() && self.r2.is_none()
    }

    pub fn apply(&self, base: &ColorModel) -> std::result::Result<ColorModel, ModelViolation> {
        let mut m = base.clone();
        let len = m.boundaries_deg.len();
        for e in &self.boundaries {
            if e.index >= len {
                return Err(ModelViolation::BoundaryIndex {
                    index: e.index,
                    len,
                });
            }
            if !e.angle_deg.is_finite() {
                return Err(ModelViolation::AngleRange {
                    field: "boundary",
                    value: e.angle_deg,
                });
            }
            m.boundaries_deg[e.index] = normalize_deg(e.angle_deg);
        }
        m.boundaries_deg.sort_by(f64::total_cmp);
        if let Some(r1) = self.r1 {
            m.r1 = r1;
        }
        if let Some(r2) = self.r2 {
            m.r2_prime = r2 - (base.r2 - base.r2_prime);
            m.r3 = r2 + (base.r3 - base.r2);
            m.r2 = r2;
        }
        m.validate()?;
        Ok(m)
    }
}

/// Classify under `overrides` applied to `m`; `m` itself is untouched.
pub fn reclassify_with_overrides(
    img: &RgbImage,
    m: &ColorModel,
    overrides: &ModelOverrides,
) -> Result<LabelMap> {
    let edited = overrides.apply(m)?.prepare()?;
    classify_image(img, &edited)
}
