use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::bases::{group_peaks, ChromogenBase};
use super::radii::Radii;
use crate::category::CategoryId;
use crate::error::{Error, Result};

pub const MODEL_VERSION: u32 = 1;

/// Geometric knowledge used for classification and naming.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColorModel {
    pub version: u32,
    pub bases: Vec<ChromogenBase>,
    pub boundaries_deg: Vec<f64>,
    pub r1: f64,
    pub r2: f64,
    pub r2_prime: f64,
    pub r3: f64,
    pub brown_sector_deg: [f64; 2],
    /// Half-width of the fuzzy plateau around each group peak.
    #[serde(default)]
    pub plateau_half_width_deg: f64,
}

/// A broken model invariant. `name()` is a stable identifier suitable for
/// API error payloads.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelViolation {
    #[error(
        "radii must satisfy 0 < r1 < r2' < r2 < r3 (got r1={r1}, r2'={r2_prime}, r2={r2}, r3={r3})"
    )]
    RadiiOrdering {
        r1: f64,
        r2_prime: f64,
        r2: f64,
        r3: f64,
    },
    #[error("base at {angle} deg has non-hue category {category}")]
    BaseCategory { angle: f64, category: CategoryId },
    #[error("{field} = {value} is outside [0, 360)")]
    AngleRange { field: &'static str, value: f64 },
    #[error("boundaries must be strictly increasing")]
    BoundariesNotIncreasing,
    #[error("{boundaries} boundaries for {groups} base groups")]
    BoundaryCount { boundaries: usize, groups: usize },
    #[error("boundary at {boundary} deg does not sit between two base-group peaks")]
    BoundaryInterleaving { boundary: f64 },
    #[error("hue classes must each own exactly one interval: {0}")]
    CategoryCoverage(String),
    #[error("brown sector [{0}, {1}] is not a valid interval")]
    BrownSector(f64, f64),
    #[error("plateau half-width {0} must be >= 0 and stay inside every hue interval")]
    PlateauWidth(f64),
    #[error("boundary index {index} out of range (model has {len})")]
    BoundaryIndex { index: usize, len: usize },
}

impl ModelViolation {
    pub fn name(&self) -> &'static str {
        match self {
            ModelViolation::RadiiOrdering { .. } => "radii_ordering",
            ModelViolation::BaseCategory { .. } => "base_category",
            ModelViolation::AngleRange { .. } => "angle_range",
            ModelViolation::BoundariesNotIncreasing => "boundaries_increasing",
            ModelViolation::BoundaryCount { .. } => "boundary_count",
            ModelViolation::BoundaryInterleaving { .. } => "boundary_interleaving",
            ModelViolation::CategoryCoverage(_) => "category_coverage",
            ModelViolation::BrownSector(..) => "brown_sector",
            ModelViolation::PlateauWidth(_) => "plateau_width",
            ModelViolation::BoundaryIndex { .. } => "boundary_index",
        }
    }
}

/// One hue class's share of the circle. `lower` and `upper` are the
/// boundaries; `upper` may be numerically smaller when the interval wraps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HueInterval {
    pub category: CategoryId,
    pub lower: f64,
    pub upper: f64,
    pub peak: f64,
    pub prev_peak: f64,
    pub next_peak: f64,
}

/// A validated model with its hue intervals laid out for fast lookup.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedModel {
    model: ColorModel,
    intervals: Vec<HueInterval>,
}

fn in_range(field: &'static str, value: f64) -> std::result::Result<(), ModelViolation> {
    if value.is_finite() && (0.0..360.0).contains(&value) {
        Ok(())
    } else {
        Err(ModelViolation::AngleRange { field, value })
    }
}

impl ColorModel {
    pub fn radii(&self) -> Radii {
        Radii {
            r1: self.r1,
            r2: self.r2,
            r2_prime: self.r2_prime,
            r3: self.r3,
        }
    }

    pub fn group_peaks(&self) -> Vec<(f64, CategoryId)> {
        group_peaks(&self.bases)
    }

    pub fn validate(&self) -> std::result::Result<(), ModelViolation> {
        self.prepare().map(|_| ())
    }

    pub fn prepare(&self) -> std::result::Result<PreparedModel, ModelViolation> {
        self.radii().check()?;
        let [lo, hi] = self.brown_sector_deg;
        if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo < hi && hi <= 360.0) {
            return Err(ModelViolation::BrownSector(lo, hi));
        }
        for b in &self.bases {
            in_range("base angle", b.angle_deg)?;
            if !b.category.is_hue() {
                return Err(ModelViolation::BaseCategory {
                    angle: b.angle_deg,
                    category: b.category,
                });
            }
        }
        for &b in &self.boundaries_deg {
            in_range("boundary", b)?;
        }
        if self.boundaries_deg.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ModelViolation::BoundariesNotIncreasing);
        }
        let peaks = self.group_peaks();
        let n = self.boundaries_deg.len();
        if peaks.len() != n {
            return Err(ModelViolation::BoundaryCount {
                boundaries: n,
                groups: peaks.len(),
            });
        }
        if n < 2 {
            return Err(ModelViolation::CategoryCoverage(format!(
                "{} base group(s)",
                peaks.len()
            )));
        }
        // Exactly one peak strictly inside each [b_k, b_k+1).
        let mut owner: Vec<Option<usize>> = vec![None; n];
        for (pi, &(p, _)) in peaks.iter().enumerate() {
            let k = interval_index(&self.boundaries_deg, p);
            if p == self.boundaries_deg[k] || owner[k].is_some() {
                return Err(ModelViolation::BoundaryInterleaving {
                    boundary: self.boundaries_deg[k],
                });
            }
            owner[k] = Some(pi);
        }
        let owner: Vec<usize> = owner
            .into_iter()
            .map(|o| o.expect("n peaks fill n slots"))
            .collect();
        let mut intervals = Vec::with_capacity(n);
        for k in 0..n {
            let (peak, category) = peaks[owner[k]];
            intervals.push(HueInterval {
                category,
                lower: self.boundaries_deg[k],
                upper: self.boundaries_deg[(k + 1) % n],
                peak,
                prev_peak: peaks[owner[(k + n - 1) % n]].0,
                next_peak: peaks[owner[(k + 1) % n]].0,
            });
        }
        let mut seen: Vec<CategoryId> = intervals.iter().map(|i| i.category).collect();
        seen.sort();
        seen.dedup();
        if seen.len() != n || n != CategoryId::HUE_RING.len() {
            return Err(ModelViolation::CategoryCoverage(format!(
                "{} intervals covering {} distinct hue classes",
                n,
                seen.len()
            )));
        }
        let w = self.plateau_half_width_deg;
        let fits = |iv: &HueInterval| {
            let below = (iv.peak - iv.lower).rem_euclid(360.0);
            let above = (iv.upper - iv.peak).rem_euclid(360.0);
            w <= below && w <= above
        };
        if !(w.is_finite() && w >= 0.0 && intervals.iter().all(fits)) {
            return Err(ModelViolation::PlateauWidth(w));
        }
        Ok(PreparedModel {
            model: self.clone(),
            intervals,
        })
    }

    /// Canonical JSON text: fixed key order and six decimals on every real.
    pub fn to_json(&self) -> String {
        let f = |v: f64| format!("{:.6}", v + 0.0);
        let mut s = String::new();
        s.push_str("{\n");
        let _ = writeln!(s, "  \"version\": {},", self.version);
        s.push_str("  \"bases\": [\n");
        for (i, b) in self.bases.iter().enumerate() {
            let sep = if i + 1 < self.bases.len() { "," } else { "" };
            let _ = writeln!(
                s,
                "    {{ \"angle_deg\": {}, \"category\": \"{}\" }}{}",
                f(b.angle_deg),
                b.category,
                sep
            );
        }
        s.push_str("  ],\n");
        let list: Vec<String> = self.boundaries_deg.iter().map(|&v| f(v)).collect();
        let _ = writeln!(s, "  \"boundaries_deg\": [{}],", list.join(", "));
        let _ = writeln!(s, "  \"r1\": {},", f(self.r1));
        let _ = writeln!(s, "  \"r2\": {},", f(self.r2));
        let _ = writeln!(s, "  \"r2_prime\": {},", f(self.r2_prime));
        let _ = writeln!(s, "  \"r3\": {},", f(self.r3));
        let _ = writeln!(
            s,
            "  \"brown_sector_deg\": [{}, {}],",
            f(self.brown_sector_deg[0]),
            f(self.brown_sector_deg[1])
        );
        let _ = writeln!(
            s,
            "  \"plateau_half_width_deg\": {}",
            f(self.plateau_half_width_deg)
        );
        s.push_str("}\n");
        s
    }

    pub fn from_json(text: &str) -> Result<ColorModel> {
        let m: ColorModel = serde_json::from_str(text)?;
        if m.version != MODEL_VERSION {
            return Err(Error::UnsupportedVersion(m.version));
        }
        m.validate()?;
        Ok(m)
    }

    /// Write the canonical text and read it back, so the in-memory model
    /// equals what any later load of the file produces.
    pub fn canonicalize(&self) -> Result<ColorModel> {
        ColorModel::from_json(&self.to_json())
    }

    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_json().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn load(path: &Path) -> Result<ColorModel> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        ColorModel::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    /// The model built from the bundled reference wheel.
    pub fn default_model() -> ColorModel {
        ColorModel::from_json(DEFAULT_MODEL_JSON).expect("bundled default model is valid")
    }
}

pub const DEFAULT_MODEL_JSON: &str = include_str!("../../assets/default_model.json");

/// Index of the interval `[b_k, b_k+1)` holding `angle`; angles below the
/// first boundary belong to the last, wrapping interval.
pub fn interval_index(sorted_bounds: &[f64], angle: f64) -> usize {
    let i = sorted_bounds.partition_point(|&b| b <= angle);
    if i == 0 {
        sorted_bounds.len() - 1
    } else {
        i - 1
    }
}

impl PreparedModel {
    pub fn model(&self) -> &ColorModel {
        &self.model
    }

    pub fn intervals(&self) -> &[HueInterval] {
        &self.intervals
    }

    pub fn hue_at(&self, angle: f64) -> CategoryId {
        self.intervals[interval_index(&self.model.boundaries_deg, angle)].category
    }

    pub fn interval_of(&self, category: CategoryId) -> Option<&HueInterval> {
        self.intervals.iter().find(|i| i.category == category)
    }

    pub fn in_brown_sector(&self, angle: f64) -> bool {
        let [lo, hi] = self.model.brown_sector_deg;
        lo <= angle && angle <= hi
    }
}

impl TryFrom<ColorModel> for PreparedModel {
    type Error = ModelViolation;

    fn try_from(m: ColorModel) -> std::result::Result<Self, Self::Error> {
        m.prepare()
    }
}
