//! Fuzzy memberships and percentage-composition color names.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::category::CategoryId;
use crate::classifier::LabelMap;
use crate::colorspace::{lab_to_polar, lab_to_srgb, srgb_to_lab, LabColor, PolarPixel, Rgb8};
use crate::knowledge::{HueInterval, PreparedModel};

/// Composition entries below this share (in percent) are dropped.
pub const MIN_SHARE_PCT: f64 = 0.5;

/// Lab quantization step used to group pixels into shades.
pub const SHADE_STEP: f64 = 5.0;

pub const SHADES_PER_CATEGORY: usize = 10;

/// Trapezoid over the hue circle: 0 at the neighbor peaks `a` and `g`,
/// 0.5 at the boundaries `b` and `e`, 1 on the plateau `[c, d]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngularMembership {
    pub category: CategoryId,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub g: f64,
}

impl AngularMembership {
    pub fn from_interval(iv: &HueInterval, plateau_half_width: f64) -> Self {
        AngularMembership {
            category: iv.category,
            a: iv.prev_peak,
            b: iv.lower,
            c: iv.peak - plateau_half_width,
            d: iv.peak + plateau_half_width,
            e: iv.upper,
            g: iv.next_peak,
        }
    }

    /// Knots and `theta` unwrapped into a frame starting at `a`.
    fn unwrapped(&self, theta: f64) -> [f64; 7] {
        let u = |x: f64| self.a + (x - self.a).rem_euclid(360.0);
        let b = u(self.b);
        let c = b + (self.c - self.b).rem_euclid(360.0);
        let d = c + (self.d - self.c).rem_euclid(360.0);
        let e = d + (self.e - self.d).rem_euclid(360.0);
        let g = e + (self.g - self.e).rem_euclid(360.0);
        [self.a, b, c, d, e, g, u(theta)]
    }

    pub fn knots_ordered(&self) -> bool {
        let [a, b, c, d, e, g, _] = self.unwrapped(self.a);
        a < b && b <= c && c <= d && d <= e && e < g && g - a <= 360.0
    }
}

/// Piecewise-linear membership of `theta` (degrees).
pub fn angular_membership(theta: f64, f: &AngularMembership) -> f64 {
    let [a, b, c, d, e, g, t] = f.unwrapped(theta);
    if t <= a || t >= g {
        0.0
    } else if t < b {
        (t - a) / (2.0 * (b - a))
    } else if t < c {
        (t - 2.0 * b + c) / (2.0 * (c - b))
    } else if t <= d {
        1.0
    } else if t <= e {
        (t - 2.0 * e + d) / (2.0 * (d - e))
    } else {
        (t - g) / (2.0 * (e - g))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialMembership {
    pub r1: f64,
    pub r2_prime: f64,
    pub r3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialDegrees {
    pub achromatic: f64,
    pub near_achromatic: f64,
    pub chromatic: f64,
}

/// Achromatic is a crisp indicator of r <= r1. Near-achromatic holds at 1
/// up to r2' and falls linearly to 0 at r3, while chromatic rises from 0
/// at r2' to 1 at r3.
pub fn radial_memberships(r: f64, m: &RadialMembership) -> RadialDegrees {
    let (achromatic, near_achromatic, chromatic) = if r <= m.r1 {
        (1.0, 0.0, 0.0)
    } else if r <= m.r2_prime {
        (0.0, 1.0, 0.0)
    } else if r < m.r3 {
        (
            0.0,
            (r - m.r3) / (m.r2_prime - m.r3),
            (r - m.r2_prime) / (m.r3 - m.r2_prime),
        )
    } else {
        (0.0, 0.0, 1.0)
    };
    RadialDegrees {
        achromatic,
        near_achromatic,
        chromatic,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipVector {
    /// Raw degree per category, indexed by `CategoryId::index`.
    pub degrees: [f64; 12],
    /// Normalized shares in percent, largest first.
    pub composition: Vec<(CategoryId, f64)>,
}

impl MembershipVector {
    pub fn from_degrees(degrees: [f64; 12]) -> Self {
        let normalize = |items: Vec<(CategoryId, f64)>| {
            let total: f64 = items.iter().map(|x| x.1).sum();
            items
                .into_iter()
                .map(|(c, v)| (c, 100.0 * v / total))
                .collect::<Vec<_>>()
        };
        let nonzero: Vec<(CategoryId, f64)> = CategoryId::ALL
            .iter()
            .map(|&c| (c, degrees[c.index()]))
            .filter(|x| x.1 > 0.0)
            .collect();
        let mut composition = if nonzero.is_empty() {
            Vec::new()
        } else {
            let kept: Vec<_> = normalize(nonzero)
                .into_iter()
                .filter(|x| x.1 >= MIN_SHARE_PCT)
                .collect();
            normalize(kept)
        };
        composition.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));
        MembershipVector {
            degrees,
            composition,
        }
    }

    pub fn top(&self) -> Option<CategoryId> {
        self.composition.first().map(|x| x.0)
    }

    pub fn total_pct(&self) -> f64 {
        self.composition.iter().map(|x| x.1).sum()
    }

    /// `"44.00% Brown, 36.00% Light Orange, 20.00% Yellow"`; with
    /// `final_and` the last separator becomes `" and "`.
    pub fn render(&self, final_and: bool) -> String {
        let parts: Vec<String> = self
            .composition
            .iter()
            .map(|(c, p)| format!("{p:.2}% {c}"))
            .collect();
        match parts.len() {
            0 => String::new(),
            1 => parts[0].clone(),
            n if final_and => format!("{} and {}", parts[..n - 1].join(", "), parts[n - 1]),
            _ => parts.join(", "),
        }
    }
}

/// Membership functions for every hue class of a model.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyModel {
    pub angular: Vec<AngularMembership>,
    pub radial: RadialMembership,
    pub brown_sector_deg: [f64; 2],
}

impl FuzzyModel {
    pub fn new(m: &PreparedModel) -> Self {
        let model = m.model();
        FuzzyModel {
            angular: m
                .intervals()
                .iter()
                .map(|iv| AngularMembership::from_interval(iv, model.plateau_half_width_deg))
                .collect(),
            radial: RadialMembership {
                r1: model.r1,
                r2_prime: model.r2_prime,
                r3: model.r3,
            },
            brown_sector_deg: model.brown_sector_deg,
        }
    }

    /// Hue classes are weighted by the chromatic degree inside the brown
    /// sector, where Brown takes the near-achromatic degree. Elsewhere the
    /// near-achromatic degree stays with the hue classes.
    pub fn compose(&self, p: PolarPixel) -> MembershipVector {
        let rad = radial_memberships(p.radius, &self.radial);
        let mut degrees = [0.0; 12];
        degrees[CategoryId::Neutral.index()] = rad.achromatic;
        let [lo, hi] = self.brown_sector_deg;
        let hue_weight = if lo <= p.angle && p.angle <= hi {
            degrees[CategoryId::Brown.index()] = rad.near_achromatic;
            rad.chromatic
        } else {
            rad.near_achromatic + rad.chromatic
        };
        if hue_weight > 0.0 {
            for f in &self.angular {
                degrees[f.category.index()] = hue_weight * angular_membership(p.angle, f);
            }
        }
        MembershipVector::from_degrees(degrees)
    }
}

pub fn compose_name(p: PolarPixel, m: &PreparedModel) -> MembershipVector {
    FuzzyModel::new(m).compose(p)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Shade {
    /// Center of the quantized Lab cell.
    pub lab: [f64; 3],
    pub count: u64,
    pub composition: String,
    /// Mean color of the pixels in this shade, `#rrggbb`.
    pub swatch: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryShades {
    pub category: CategoryId,
    pub shades: Vec<Shade>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ShadeSummary {
    pub categories: Vec<CategoryShades>,
}

impl ShadeSummary {
    pub fn get(&self, c: CategoryId) -> Option<&CategoryShades> {
        self.categories.iter().find(|x| x.category == c)
    }
}

fn quantize(v: f64) -> i32 {
    (v / SHADE_STEP).round() as i32
}

#[derive(Default)]
struct Cell {
    count: u64,
    sum: [f64; 3],
}

/// Top shades per category from precomputed Lab values (one per pixel,
/// in the same order as the label map).
pub fn summarize_lab_pixels(
    labs: &[LabColor],
    labels: &LabelMap,
    m: &PreparedModel,
) -> ShadeSummary {
    assert_eq!(labs.len(), labels.labels.len());
    let fuzzy = FuzzyModel::new(m);
    let mut cells: HashMap<(CategoryId, [i32; 3]), Cell> = HashMap::new();
    for (lab, &cat) in labs.iter().zip(&labels.labels) {
        let key = [quantize(lab.l), quantize(lab.a), quantize(lab.b)];
        let cell = cells.entry((cat, key)).or_default();
        cell.count += 1;
        cell.sum[0] += lab.l;
        cell.sum[1] += lab.a;
        cell.sum[2] += lab.b;
    }
    let mut per_cat: Vec<Vec<([i32; 3], Cell)>> = (0..12).map(|_| Vec::new()).collect();
    for ((cat, key), cell) in cells {
        per_cat[cat.index()].push((key, cell));
    }
    let categories = CategoryId::ALL
        .iter()
        .zip(per_cat)
        .filter(|(_, v)| !v.is_empty())
        .map(|(&category, mut v)| {
            v.sort_by(|x, y| y.1.count.cmp(&x.1.count).then(x.0.cmp(&y.0)));
            v.truncate(SHADES_PER_CATEGORY);
            let shades = v
                .into_iter()
                .map(|(key, cell)| {
                    let n = cell.count as f64;
                    let mean = LabColor::new(cell.sum[0] / n, cell.sum[1] / n, cell.sum[2] / n);
                    let rgb = lab_to_srgb(mean);
                    Shade {
                        lab: key.map(|k| k as f64 * SHADE_STEP),
                        count: cell.count,
                        composition: fuzzy.compose(lab_to_polar(mean)).render(false),
                        swatch: format!("#{:02x}{:02x}{:02x}", rgb.r, rgb.g, rgb.b),
                    }
                })
                .collect();
            CategoryShades { category, shades }
        })
        .collect();
    ShadeSummary { categories }
}

pub fn summarize_shades(
    img: &image::RgbImage,
    labels: &LabelMap,
    m: &PreparedModel,
) -> ShadeSummary {
    let labs: Vec<LabColor> = img.pixels().map(|p| srgb_to_lab(Rgb8::from(p.0))).collect();
    summarize_lab_pixels(&labs, labels, m)
}
