//! The reference hue wheel the default model is built from.

use image::{Rgb, RgbImage};

pub const WHEEL_SIZE: u32 = 1024;
pub const WHEEL_SECTORS: u32 = 24;

/// Fully saturated, full-value sRGB color for a hue in degrees.
pub fn hue_rgb(hue: f64) -> [f64; 3] {
    let h = hue.rem_euclid(360.0) / 60.0;
    let x = 1.0 - (h % 2.0 - 1.0).abs();
    match h as u32 {
        0 => [1.0, x, 0.0],
        1 => [x, 1.0, 0.0],
        2 => [0.0, 1.0, x],
        3 => [0.0, x, 1.0],
        4 => [x, 0.0, 1.0],
        _ => [1.0, 0.0, x],
    }
}

/// Disc of `sectors` flat hue wedges on a white background. Along each
/// wedge the color runs from white at the center to the pure hue at the
/// rim. The tint parameter is the squared normalized radius, so equal
/// steps of tint cover equal image areas and the near-white end of every
/// wedge is not starved of pixels.
pub fn reference_wheel(size: u32, sectors: u32) -> RgbImage {
    let half = size as f64 / 2.0;
    let width = 360.0 / sectors as f64;
    RgbImage::from_fn(size, size, |x, y| {
        let dx = x as f64 + 0.5 - half;
        let dy = half - (y as f64 + 0.5);
        let rho2 = (dx * dx + dy * dy) / (half * half);
        if rho2 > 1.0 {
            return Rgb([255, 255, 255]);
        }
        let angle = dy.atan2(dx).to_degrees().rem_euclid(360.0);
        let sector = (angle / width + 0.5).floor() as u32 % sectors;
        let pure = hue_rgb(sector as f64 * width);
        Rgb(pure.map(|p| ((1.0 - (1.0 - p) * rho2) * 255.0).round() as u8))
    })
}

pub fn default_wheel() -> RgbImage {
    reference_wheel(WHEEL_SIZE, WHEEL_SECTORS)
}
