use image::RgbImage;

use crate::colorspace::{srgb_to_lab, Rgb8};
use crate::error::{Error, Result};

/// Half-width of the histogram in AB units. sRGB never leaves |A|,|B| < 110.
pub const AB_EXTENT: f64 = 128.0;

/// Bins holding fewer than this fraction of all pixels are treated as noise.
pub const OCCUPANCY_FRACTION: f64 = 1e-4;

pub const DEFAULT_BIN_SIZE: f64 = 1.0;

/// Square 2-D histogram over the AB plane. Row index follows B, column
/// index follows A, and the (A, B) origin sits on the center of bin
/// `(half, half)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AbHistogram {
    bin_size: f64,
    half: usize,
    counts: Vec<u32>,
    total: u64,
}

impl AbHistogram {
    pub fn new(bin_size: f64) -> Self {
        assert!(
            bin_size > 0.0 && bin_size.is_finite(),
            "bin size must be positive"
        );
        let half = (AB_EXTENT / bin_size).ceil() as usize;
        let side = 2 * half + 1;
        AbHistogram {
            bin_size,
            half,
            counts: vec![0; side * side],
            total: 0,
        }
    }

    pub fn bin_size(&self) -> f64 {
        self.bin_size
    }

    pub fn side(&self) -> usize {
        2 * self.half + 1
    }

    /// Grid coordinates of the bin containing the AB origin.
    pub fn origin(&self) -> (usize, usize) {
        (self.half, self.half)
    }

    /// Number of samples added, including ones later thresholded away.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn bin_of(&self, a: f64, b: f64) -> Option<(usize, usize)> {
        let col = (a / self.bin_size).round() + self.half as f64;
        let row = (b / self.bin_size).round() + self.half as f64;
        let max = (self.side() - 1) as f64;
        if (0.0..=max).contains(&col) && (0.0..=max).contains(&row) {
            Some((row as usize, col as usize))
        } else {
            None
        }
    }

    /// (A, B) of a bin center.
    pub fn center_of(&self, row: usize, col: usize) -> (f64, f64) {
        (
            (col as f64 - self.half as f64) * self.bin_size,
            (row as f64 - self.half as f64) * self.bin_size,
        )
    }

    pub fn count(&self, row: usize, col: usize) -> u32 {
        self.counts[row * self.side() + col]
    }

    pub fn add(&mut self, a: f64, b: f64) {
        self.total += 1;
        if let Some((row, col)) = self.bin_of(a, b) {
            let side = self.side();
            self.counts[row * side + col] += 1;
        }
    }

    /// Zero every bin whose count is below `fraction` of the total.
    pub fn apply_threshold(&mut self, fraction: f64) {
        let min = fraction * self.total as f64;
        for c in &mut self.counts {
            if (*c as f64) < min {
                *c = 0;
            }
        }
    }

    pub fn nonzero_bins(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        let side = self.side();
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(move |(i, &c)| (i / side, i % side, c))
    }

    pub fn occupancy(&self) -> Vec<bool> {
        self.counts.iter().map(|&c| c > 0).collect()
    }
}

pub fn build_histogram_from_pixels<I>(pixels: I, bin_size: f64) -> Result<AbHistogram>
where
    I: IntoIterator<Item = Rgb8>,
{
    let mut h = AbHistogram::new(bin_size);
    for p in pixels {
        let lab = srgb_to_lab(p);
        h.add(lab.a, lab.b);
    }
    if h.total == 0 {
        return Err(Error::EmptyInput);
    }
    h.apply_threshold(OCCUPANCY_FRACTION);
    Ok(h)
}

pub fn build_histogram(img: &RgbImage, bin_size: f64) -> Result<AbHistogram> {
    build_histogram_from_pixels(img.pixels().map(|p| Rgb8::from(p.0)), bin_size)
}
