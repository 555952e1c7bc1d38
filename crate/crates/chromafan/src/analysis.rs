//! Whole-image analysis: labels, masks, shade summary and the report.

use std::io::Cursor;
use std::path::Path;
use std::time::Instant;

use image::{DynamicImage, GrayImage, ImageFormat, RgbImage, RgbaImage};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::category::CategoryId;
use crate::classifier::{classify_polar, masks_from_labels, CategoryMask, LabelMap};
use crate::colorspace::{lab_to_polar, srgb_to_lab, LabColor, Rgb8};
use crate::error::{Error, Result};
use crate::fuzzy::{summarize_lab_pixels, ShadeSummary};
use crate::knowledge::PreparedModel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceInfo {
    pub path: String,
    pub width: u32,
    pub height: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelInfo {
    pub id: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryStat {
    pub category: CategoryId,
    pub pixels: u64,
    pub percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaskEntry {
    pub category: CategoryId,
    pub file: String,
    pub pixels: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub source: SourceInfo,
    pub model: ModelInfo,
    pub pixel_total: u64,
    pub categories: Vec<CategoryStat>,
    pub shades: ShadeSummary,
    pub masks: Vec<MaskEntry>,
    pub composite: Option<String>,
    pub duration_ms: f64,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// JSON with the timing field zeroed, for comparing runs.
    pub fn to_json_untimed(&self) -> String {
        AnalysisReport {
            duration_ms: 0.0,
            ..self.clone()
        }
        .to_json()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} ({}x{}, {} pixels)\nmodel {} sha256 {}\n\n",
            self.source.path,
            self.source.width,
            self.source.height,
            self.pixel_total,
            self.model.id,
            &self.model.sha256[..12.min(self.model.sha256.len())]
        );
        for stat in self.categories.iter().filter(|s| s.pixels > 0) {
            out.push_str(&format!(
                "{:<12} {:>10} {:>7.2}%\n",
                stat.category.name(),
                stat.pixels,
                stat.percent
            ));
            if let Some(shades) = self.shades.get(stat.category) {
                for sh in &shades.shades {
                    out.push_str(&format!(
                        "    {} L{:>4} A{:>5} B{:>5} {:>9}  {}\n",
                        sh.swatch, sh.lab[0], sh.lab[1], sh.lab[2], sh.count, sh.composition
                    ));
                }
            }
        }
        if !self.masks.is_empty() {
            out.push_str("\nmasks:\n");
            for m in &self.masks {
                out.push_str(&format!("    {}\n", m.file));
            }
        }
        out.push_str(&format!("\nanalysis took {:.1} ms\n", self.duration_ms));
        out
    }
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub report: AnalysisReport,
    pub labels: LabelMap,
    pub masks: Vec<CategoryMask>,
}

pub fn category_stats(labels: &LabelMap) -> Vec<CategoryStat> {
    let counts = labels.counts();
    let total = labels.pixel_count() as f64;
    CategoryId::ALL
        .iter()
        .map(|&c| CategoryStat {
            category: c,
            pixels: counts[c.index()],
            percent: 100.0 * counts[c.index()] as f64 / total,
        })
        .collect()
}

/// Classify, mask and summarize one image.
pub fn analyze(
    img: &RgbImage,
    model: &PreparedModel,
    source_path: &str,
    model_id: &str,
) -> Result<Analysis> {
    let start = Instant::now();
    if img.width() == 0 || img.height() == 0 {
        return Err(Error::EmptyInput);
    }
    let labs: Vec<LabColor> = img
        .as_raw()
        .par_chunks_exact(3)
        .with_min_len(4096)
        .map(|c| srgb_to_lab(Rgb8::new(c[0], c[1], c[2])))
        .collect();
    let polar: Vec<_> = labs
        .par_iter()
        .with_min_len(4096)
        .map(|&l| lab_to_polar(l))
        .collect();
    let labels = classify_polar(img.width(), img.height(), &polar, model)?;
    let masks = masks_from_labels(&labels);
    let shades = summarize_lab_pixels(&labs, &labels, model);
    let report = AnalysisReport {
        source: SourceInfo {
            path: source_path.to_string(),
            width: img.width(),
            height: img.height(),
        },
        model: ModelInfo {
            id: model_id.to_string(),
            sha256: model.model().hash(),
        },
        pixel_total: labels.pixel_count(),
        categories: category_stats(&labels),
        shades,
        masks: Vec::new(),
        composite: None,
        duration_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    Ok(Analysis {
        report,
        labels,
        masks,
    })
}

/// An input image with its alpha channel split off, if it had one.
pub struct LoadedImage {
    pub rgb: RgbImage,
    pub alpha: Option<GrayImage>,
}

pub fn decode_image(img: DynamicImage) -> LoadedImage {
    let alpha = img.color().has_alpha().then(|| {
        let rgba = img.to_rgba8();
        GrayImage::from_fn(rgba.width(), rgba.height(), |x, y| {
            image::Luma([rgba.get_pixel(x, y).0[3]])
        })
    });
    LoadedImage {
        rgb: img.to_rgb8(),
        alpha,
    }
}

pub fn load_image(path: &Path) -> Result<LoadedImage> {
    let reader = image::ImageReader::open(path)
        .map_err(|e| Error::io(path, e))?
        .with_guessed_format()
        .map_err(|e| Error::io(path, e))?;
    Ok(decode_image(reader.decode()?))
}

pub fn load_image_bytes(bytes: &[u8]) -> Result<LoadedImage> {
    Ok(decode_image(image::load_from_memory(bytes)?))
}

/// Color-coded label image; carries the source alpha when given.
pub fn composite_image(labels: &LabelMap, alpha: Option<&GrayImage>) -> DynamicImage {
    let rgb = labels.composite();
    match alpha {
        Some(a) => {
            DynamicImage::ImageRgba8(RgbaImage::from_fn(rgb.width(), rgb.height(), |x, y| {
                let [r, g, b] = rgb.get_pixel(x, y).0;
                image::Rgba([r, g, b, a.get_pixel(x, y).0[0]])
            }))
        }
        None => DynamicImage::ImageRgb8(rgb),
    }
}

pub fn png_bytes(img: &DynamicImage) -> Result<Vec<u8>> {
    let mut buf = Cursor::new(Vec::new());
    img.write_to(&mut buf, ImageFormat::Png)?;
    Ok(buf.into_inner())
}

pub fn mask_file_name(stem: &str, category: CategoryId) -> String {
    format!("{stem}_{}.png", category.slug())
}

/// Write one PNG per nonempty mask plus `<stem>_labels.png`, and record
/// them in the report.
pub fn write_masks(
    analysis: &mut Analysis,
    out_dir: &Path,
    stem: &str,
    alpha: Option<&GrayImage>,
) -> Result<()> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut entries = Vec::new();
    for mask in &analysis.masks {
        let file = mask_file_name(stem, mask.category);
        let path = out_dir.join(&file);
        mask.to_image().save_with_format(&path, ImageFormat::Png)?;
        entries.push(MaskEntry {
            category: mask.category,
            file,
            pixels: mask.pixel_count() as u64,
        });
    }
    let composite = format!("{stem}_labels.png");
    composite_image(&analysis.labels, alpha)
        .save_with_format(out_dir.join(&composite), ImageFormat::Png)?;
    analysis.report.masks = entries;
    analysis.report.composite = Some(composite);
    Ok(())
}
