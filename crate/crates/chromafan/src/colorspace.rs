//! sRGB to CIELAB (D65, 2 degree observer) and polar AB coordinates.

use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rgb8 {
    pub r: u8,
    pub g: u8,
    pub b: u8,
}

impl Rgb8 {
    pub const fn new(r: u8, g: u8, b: u8) -> Self {
        Rgb8 { r, g, b }
    }
}

impl From<[u8; 3]> for Rgb8 {
    fn from(c: [u8; 3]) -> Self {
        Rgb8::new(c[0], c[1], c[2])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabColor {
    pub l: f64,
    pub a: f64,
    pub b: f64,
}

impl LabColor {
    pub const fn new(l: f64, a: f64, b: f64) -> Self {
        LabColor { l, a, b }
    }
}

/// Chroma radius and hue angle of a pixel in the AB plane. `l` is carried
/// along for reporting only and never influences classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarPixel {
    pub radius: f64,
    pub angle: f64,
    pub l: f64,
}

impl PolarPixel {
    pub fn new(radius: f64, angle: f64) -> Self {
        PolarPixel {
            radius,
            angle: normalize_deg(angle),
            l: 0.0,
        }
    }

    pub fn to_ab(self) -> (f64, f64) {
        let t = self.angle.to_radians();
        (self.radius * t.cos(), self.radius * t.sin())
    }
}

// Linear sRGB -> XYZ, IEC 61966-2-1 primaries with a D65 white.
const M: [[f64; 3]; 3] = [
    [0.412_456_4, 0.357_576_1, 0.180_437_5],
    [0.212_672_9, 0.715_152_2, 0.072_175_0],
    [0.019_333_9, 0.119_192_0, 0.950_304_1],
];

// Reference white is the image of linear (1, 1, 1), so every gray lands
// exactly on the L axis.
const WHITE: [f64; 3] = [
    M[0][0] + M[0][1] + M[0][2],
    M[1][0] + M[1][1] + M[1][2],
    M[2][0] + M[2][1] + M[2][2],
];

const EPSILON: f64 = 216.0 / 24389.0;
const KAPPA: f64 = 24389.0 / 27.0;

pub fn srgb_decode(c: u8) -> f64 {
    let v = c as f64 / 255.0;
    if v <= 0.040_45 {
        v / 12.92
    } else {
        ((v + 0.055) / 1.055).powf(2.4)
    }
}

fn decode_table() -> &'static [f64; 256] {
    static TABLE: OnceLock<[f64; 256]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0.0; 256];
        for (i, v) in t.iter_mut().enumerate() {
            *v = srgb_decode(i as u8);
        }
        t
    })
}

fn lab_f(t: f64) -> f64 {
    if t > EPSILON {
        t.cbrt()
    } else {
        (KAPPA * t + 16.0) / 116.0
    }
}

pub fn srgb_to_lab(p: Rgb8) -> LabColor {
    let lut = decode_table();
    let lin = [lut[p.r as usize], lut[p.g as usize], lut[p.b as usize]];
    let xyz: [f64; 3] =
        std::array::from_fn(|i| M[i][0] * lin[0] + M[i][1] * lin[1] + M[i][2] * lin[2]);
    let fx = lab_f(xyz[0] / WHITE[0]);
    let fy = lab_f(xyz[1] / WHITE[1]);
    let fz = lab_f(xyz[2] / WHITE[2]);
    LabColor {
        l: (116.0 * fy - 16.0).clamp(0.0, 100.0),
        a: 500.0 * (fx - fy),
        b: 200.0 * (fy - fz),
    }
}

fn lab_f_inv(t: f64) -> f64 {
    if t.powi(3) > EPSILON {
        t.powi(3)
    } else {
        (116.0 * t - 16.0) / KAPPA
    }
}

fn m_inverse() -> &'static [[f64; 3]; 3] {
    static INV: OnceLock<[[f64; 3]; 3]> = OnceLock::new();
    INV.get_or_init(|| {
        let m = M;
        let cof = |r: usize, c: usize| {
            let (r1, r2) = ((r + 1) % 3, (r + 2) % 3);
            let (c1, c2) = ((c + 1) % 3, (c + 2) % 3);
            m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1]
        };
        let det = m[0][0] * cof(0, 0) + m[0][1] * cof(0, 1) + m[0][2] * cof(0, 2);
        std::array::from_fn(|i| std::array::from_fn(|j| cof(j, i) / det))
    })
}

fn srgb_encode(v: f64) -> u8 {
    let v = v.clamp(0.0, 1.0);
    let e = if v <= 0.003_130_8 {
        12.92 * v
    } else {
        1.055 * v.powf(1.0 / 2.4) - 0.055
    };
    (e * 255.0).round() as u8
}

/// Inverse of `srgb_to_lab`, clipping out-of-gamut colors channel-wise.
pub fn lab_to_srgb(c: LabColor) -> Rgb8 {
    let fy = (c.l + 16.0) / 116.0;
    let fx = fy + c.a / 500.0;
    let fz = fy - c.b / 200.0;
    let y = if c.l > KAPPA * EPSILON {
        fy.powi(3)
    } else {
        c.l / KAPPA
    };
    let xyz = [
        lab_f_inv(fx) * WHITE[0],
        y * WHITE[1],
        lab_f_inv(fz) * WHITE[2],
    ];
    let mi = m_inverse();
    let lin: [f64; 3] =
        std::array::from_fn(|i| mi[i][0] * xyz[0] + mi[i][1] * xyz[1] + mi[i][2] * xyz[2]);
    Rgb8::new(
        srgb_encode(lin[0]),
        srgb_encode(lin[1]),
        srgb_encode(lin[2]),
    )
}

/// Wrap any finite angle into [0, 360).
pub fn normalize_deg(a: f64) -> f64 {
    let r = a.rem_euclid(360.0);
    // rem_euclid can round up to exactly 360 for tiny negative inputs
    if r >= 360.0 {
        0.0
    } else {
        r
    }
}

pub fn lab_to_polar(c: LabColor) -> PolarPixel {
    let radius = c.a.hypot(c.b);
    let angle = if c.a == 0.0 && c.b == 0.0 {
        0.0
    } else {
        normalize_deg(c.b.atan2(c.a).to_degrees())
    };
    PolarPixel {
        radius,
        angle,
        l: c.l,
    }
}

pub fn srgb_to_polar(p: Rgb8) -> PolarPixel {
    lab_to_polar(srgb_to_lab(p))
}

/// Signed shortest rotation from `from` to `to`, in (-180, 180].
pub fn angle_diff(from: f64, to: f64) -> f64 {
    let d = (to - from).rem_euclid(360.0);
    if d > 180.0 {
        d - 360.0
    } else {
        d
    }
}

/// Unsigned circular distance in degrees, in [0, 180].
pub fn angle_dist(a: f64, b: f64) -> f64 {
    angle_diff(a, b).abs()
}

/// Circular mean of a set of angles in degrees.
pub fn circular_mean(angles: &[f64]) -> f64 {
    let (s, c) = angles.iter().fold((0.0, 0.0), |(s, c), a| {
        let t = a.to_radians();
        (s + t.sin(), c + t.cos())
    });
    normalize_deg(s.atan2(c).to_degrees())
}
