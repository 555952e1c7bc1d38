use std::path::Path;
use std::process::Command;

use chromafan::analysis::AnalysisReport;
use chromafan::ColorModel;
use image::{Rgb, RgbImage};

const WHEEL: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../chromafan/assets/wheel.png");

fn chromafan(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_chromafan"))
        .args(args)
        .output()
        .unwrap()
}

fn save(img: &RgbImage, path: &Path) {
    img.save(path).unwrap();
}

#[test]
fn build_model_reproduces_default() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("model.json");
    let o = chromafan(&["build-model", WHEEL, "-o", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text, ColorModel::default_model().to_json());
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("endpoints"));
    assert!(stdout.contains("r1 "));
}

#[test]
fn build_model_rejects_gray() {
    let dir = tempfile::tempdir().unwrap();
    let gray = dir.path().join("gray.png");
    save(
        &RgbImage::from_fn(40, 40, |x, _| Rgb([(x * 6) as u8; 3])),
        &gray,
    );
    let o = chromafan(&[
        "build-model",
        gray.to_str().unwrap(),
        "-o",
        dir.path().join("m.json").to_str().unwrap(),
    ]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("no chromatic content"));
}

#[test]
fn missing_input_fails() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.png");
    let o = chromafan(&[
        "build-model",
        missing.to_str().unwrap(),
        "-o",
        dir.path().join("m.json").to_str().unwrap(),
    ]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("nope.png"));
    let o = chromafan(&[
        "analyze",
        missing.to_str().unwrap(),
        "-o",
        dir.path().to_str().unwrap(),
    ]);
    assert!(!o.status.success());
}

#[test]
fn single_gray_pixel_is_neutral() {
    let dir = tempfile::tempdir().unwrap();
    let px = dir.path().join("px.png");
    save(&RgbImage::from_pixel(1, 1, Rgb([128, 128, 128])), &px);
    let o = chromafan(&[
        "analyze",
        px.to_str().unwrap(),
        "-o",
        dir.path().to_str().unwrap(),
        "--masks",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("px_report.json")).unwrap();
    let report: AnalysisReport = serde_json::from_str(&text).unwrap();
    let neutral = report
        .categories
        .iter()
        .find(|c| c.category == chromafan::CategoryId::Neutral)
        .unwrap();
    assert_eq!(neutral.pixels, 1);
    assert_eq!(neutral.percent, 100.0);
    assert_eq!(report.masks.len(), 1);
    assert!(dir.path().join("px_neutral.png").exists());
    assert!(dir.path().join("px_labels.png").exists());
}

#[test]
fn analyze_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let img = dir.path().join("strip.png");
    save(
        &RgbImage::from_fn(120, 30, |x, y| {
            Rgb([(x * 2) as u8, (y * 8) as u8, 255 - (x * 2) as u8])
        }),
        &img,
    );
    let mut reports = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("run{run}"));
        let o = chromafan(&[
            "analyze",
            img.to_str().unwrap(),
            "-o",
            out.to_str().unwrap(),
            "--masks",
            "--format",
            "text",
        ]);
        assert!(o.status.success());
        assert!(String::from_utf8_lossy(&o.stdout).contains("analysis took"));
        let text = std::fs::read_to_string(out.join("strip_report.json")).unwrap();
        let report: AnalysisReport = serde_json::from_str(&text).unwrap();
        assert!(report.duration_ms > 0.0);
        let total: f64 = report.categories.iter().map(|c| c.percent).sum();
        assert!((total - 100.0).abs() < 0.01);
        assert_eq!(
            report.categories.iter().map(|c| c.pixels).sum::<u64>(),
            report.pixel_total
        );
        reports.push(report.to_json_untimed());
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn wheel_subcommand_matches_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.png");
    let o = chromafan(&["wheel", "-o", out.to_str().unwrap()]);
    assert!(o.status.success());
    let a = image::open(&out).unwrap().to_rgb8();
    let b = image::open(WHEEL).unwrap().to_rgb8();
    assert!(a == b);
}

#[test]
fn serve_fails_on_busy_port() {
    let listener = std::net::TcpListener::bind("0.0.0.0:0").unwrap();
    let port = listener.local_addr().unwrap().port().to_string();
    let o = chromafan(&["serve", "-p", &port]);
    assert!(!o.status.success());
}
