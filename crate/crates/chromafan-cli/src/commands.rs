use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use chromafan::analysis::{self, AnalysisReport};
use chromafan::knowledge::{build_model_traced, DEFAULT_BIN_SIZE};
use chromafan::ColorModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ReportFormat {
    Json,
    Text,
}

/// Model named on the command line, or the bundled default.
pub fn load_model(path: Option<&Path>) -> Result<(ColorModel, String)> {
    match path {
        Some(p) => {
            let m =
                ColorModel::load(p).with_context(|| format!("loading model {}", p.display()))?;
            Ok((m, p.display().to_string()))
        }
        None => Ok((ColorModel::default_model(), "default".to_string())),
    }
}

pub fn build_model(wheel: &Path, out: &Path) -> Result<String> {
    let img = analysis::load_image(wheel)?.rgb;
    let (model, trace) = build_model_traced(&img, DEFAULT_BIN_SIZE)?;
    model.save(out)?;
    Ok(summary_table(
        &model,
        &trace.skeleton.junction_radii(),
        trace.endpoint_angles.len(),
    ))
}

pub fn summary_table(model: &ColorModel, junction_radii: &[f64], endpoints: usize) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{endpoints} endpoints, {} bases", model.bases.len());
    let _ = writeln!(s, "\n  angle     category");
    for b in &model.bases {
        let _ = writeln!(s, "  {:>8.3}  {}", b.angle_deg, b.category);
    }
    let _ = writeln!(s, "\n  boundary  opens");
    if let Ok(p) = model.prepare() {
        for iv in p.intervals() {
            let _ = writeln!(s, "  {:>8.3}  {}", iv.lower, iv.category);
        }
    }
    let mut radii: Vec<f64> = junction_radii.to_vec();
    radii.sort_by(f64::total_cmp);
    let list: Vec<String> = radii.iter().map(|r| format!("{r:.2}")).collect();
    let _ = writeln!(s, "\njunction radii: {}", list.join(" "));
    let _ = writeln!(
        s,
        "r1 {:.3}  r2' {:.3}  r2 {:.3}  r3 {:.3}",
        model.r1, model.r2_prime, model.r2, model.r3
    );
    s
}

pub struct AnalyzeArgs<'a> {
    pub image: &'a Path,
    pub model: Option<&'a Path>,
    pub out_dir: &'a Path,
    pub masks: bool,
    pub format: ReportFormat,
}

pub struct AnalyzeOutput {
    pub report: AnalysisReport,
    pub report_path: PathBuf,
    pub rendered: String,
}

pub fn analyze(args: &AnalyzeArgs) -> Result<AnalyzeOutput> {
    let (model, model_id) = load_model(args.model)?;
    let prepared = model.prepare()?;
    let loaded = analysis::load_image(args.image)?;
    let start = Instant::now();
    let stem = args
        .image
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "image".to_string());
    let mut result = analysis::analyze(
        &loaded.rgb,
        &prepared,
        &args.image.display().to_string(),
        &model_id,
    )?;
    if args.masks {
        analysis::write_masks(&mut result, args.out_dir, &stem, loaded.alpha.as_ref())?;
    } else {
        std::fs::create_dir_all(args.out_dir)
            .with_context(|| format!("creating {}", args.out_dir.display()))?;
    }
    result.report.duration_ms = start.elapsed().as_secs_f64() * 1e3;
    let report_path = args.out_dir.join(format!("{stem}_report.json"));
    std::fs::write(&report_path, result.report.to_json())
        .with_context(|| format!("writing {}", report_path.display()))?;
    let rendered = match args.format {
        ReportFormat::Json => result.report.to_json(),
        ReportFormat::Text => result.report.to_text(),
    };
    Ok(AnalyzeOutput {
        report: result.report,
        report_path,
        rendered,
    })
}
