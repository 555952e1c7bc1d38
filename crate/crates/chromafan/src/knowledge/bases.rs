use serde::{Deserialize, Serialize};

use super::skeleton::SkeletonGraph;
use crate::category::CategoryId;
use crate::colorspace::{angle_dist, circular_mean, normalize_deg, srgb_to_polar, Rgb8};
use crate::error::{Error, Result};

/// Endpoint rays closer than this are merged into one base.
pub const MERGE_THRESHOLD_DEG: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChromogenBase {
    pub angle_deg: f64,
    pub category: CategoryId,
}

/// Landmark colors for each hue class: the sRGB primaries and secondaries
/// plus the fully saturated tertiaries between them.
pub const LANDMARKS: [(CategoryId, Rgb8); 10] = [
    (CategoryId::Pink, Rgb8::new(255, 0, 128)),
    (CategoryId::Red, Rgb8::new(255, 0, 0)),
    (CategoryId::DeepOrange, Rgb8::new(255, 64, 0)),
    (CategoryId::LightOrange, Rgb8::new(255, 128, 0)),
    (CategoryId::Yellow, Rgb8::new(255, 255, 0)),
    (CategoryId::Green, Rgb8::new(0, 255, 0)),
    (CategoryId::Teal, Rgb8::new(0, 255, 255)),
    (CategoryId::Blue, Rgb8::new(0, 0, 255)),
    (CategoryId::Ultramarine, Rgb8::new(128, 0, 255)),
    (CategoryId::Purple, Rgb8::new(255, 0, 255)),
];

/// Hue angle of each landmark, in `CategoryId::HUE_RING` order.
pub fn anchor_angles() -> [(CategoryId, f64); 10] {
    LANDMARKS.map(|(c, rgb)| (c, srgb_to_polar(rgb).angle))
}

/// Single-linkage merge of angles on the circle: neighbors closer than
/// `threshold` end up in the same group, including across 0/360. Each
/// group is replaced by its circular mean. Output is sorted.
pub fn merge_angles(angles: &[f64], threshold: f64) -> Vec<f64> {
    let mut a: Vec<f64> = angles.iter().map(|&x| normalize_deg(x)).collect();
    a.sort_by(f64::total_cmp);
    let n = a.len();
    if n < 2 {
        return a;
    }
    let gap_after = |i: usize| {
        let next = a[(i + 1) % n] + if i + 1 == n { 360.0 } else { 0.0 };
        next - a[i]
    };
    // Start cutting at a gap that is wide enough; without one the whole
    // circle chains into a single group.
    let Some(cut) = (0..n).find(|&i| gap_after(i) >= threshold) else {
        return vec![circular_mean(&a)];
    };
    let mut out = Vec::new();
    let mut group = Vec::new();
    for k in 1..=n {
        let i = (cut + k) % n;
        group.push(a[i]);
        if gap_after(i) >= threshold {
            out.push(circular_mean(&group));
            group.clear();
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Label sorted base angles with hue classes. Classes keep their circular
/// order, each class gets at least one contiguous run of bases, and the
/// total angular distance from bases to their class anchors is minimal.
/// Ties go to the first rotation found.
pub fn assign_categories(angles: &[f64]) -> Result<Vec<ChromogenBase>> {
    let n = angles.len();
    let k = CategoryId::HUE_RING.len();
    if n < k {
        return Err(Error::DegenerateSkeleton(format!(
            "{n} distinct base directions, need at least {k}"
        )));
    }
    let anchors = anchor_angles();
    let mut best: Option<(f64, usize, Vec<usize>)> = None;
    for start in 0..n {
        let seq: Vec<f64> = (0..n).map(|i| angles[(start + i) % n]).collect();
        // cost[c][j]: first j bases spread over the first c classes, base j-1
        // belonging to class c-1.
        let mut cost = vec![vec![f64::INFINITY; n + 1]; k + 1];
        let mut opened = vec![vec![false; n + 1]; k + 1];
        cost[0][0] = 0.0;
        for c in 1..=k {
            let anchor = anchors[c - 1].1;
            for j in 1..=n {
                let d = angle_dist(seq[j - 1], anchor);
                let stay = cost[c][j - 1] + d;
                let open = cost[c - 1][j - 1] + d;
                if open <= stay {
                    cost[c][j] = open;
                    opened[c][j] = true;
                } else {
                    cost[c][j] = stay;
                }
            }
        }
        let total = cost[k][n];
        if best.as_ref().is_some_and(|(b, _, _)| total >= *b) {
            continue;
        }
        let mut labels = vec![0; n];
        let (mut c, mut j) = (k, n);
        while j > 0 {
            labels[j - 1] = c - 1;
            if opened[c][j] {
                c -= 1;
            }
            j -= 1;
        }
        best = Some((total, start, labels));
    }
    let (_, start, labels) = best.expect("n >= 1");
    let mut bases: Vec<ChromogenBase> = (0..n)
        .map(|i| ChromogenBase {
            angle_deg: angles[(start + i) % n],
            category: anchors[labels[i]].0,
        })
        .collect();
    bases.sort_by(|a, b| a.angle_deg.total_cmp(&b.angle_deg));
    Ok(bases)
}

pub fn endpoint_angles(g: &SkeletonGraph) -> Vec<f64> {
    g.endpoints
        .iter()
        .filter(|&&(r, c)| (r as f64, c as f64) != g.origin)
        .map(|&(r, c)| g.angle_of(r as f64, c as f64))
        .collect()
}

pub fn extract_bases(g: &SkeletonGraph) -> Result<Vec<ChromogenBase>> {
    let angles = endpoint_angles(g);
    if angles.len() < 2 {
        return Err(Error::DegenerateSkeleton(format!(
            "{} endpoints",
            angles.len()
        )));
    }
    assign_categories(&merge_angles(&angles, MERGE_THRESHOLD_DEG))
}

/// Maximal circular runs of same-category bases, each reduced to its
/// circular-mean peak. Output is sorted by peak angle.
pub fn group_peaks(bases: &[ChromogenBase]) -> Vec<(f64, CategoryId)> {
    let mut sorted = bases.to_vec();
    sorted.sort_by(|a, b| a.angle_deg.total_cmp(&b.angle_deg));
    let n = sorted.len();
    if n == 0 {
        return Vec::new();
    }
    let Some(first_change) =
        (0..n).find(|&i| sorted[i].category != sorted[(i + n - 1) % n].category)
    else {
        let angles: Vec<f64> = sorted.iter().map(|b| b.angle_deg).collect();
        return vec![(circular_mean(&angles), sorted[0].category)];
    };
    let mut peaks = Vec::new();
    let mut run: Vec<f64> = Vec::new();
    for k in 0..n {
        let i = (first_change + k) % n;
        run.push(sorted[i].angle_deg);
        let next = &sorted[(i + 1) % n];
        if next.category != sorted[i].category || k == n - 1 {
            peaks.push((circular_mean(&run), sorted[i].category));
            run.clear();
        }
    }
    peaks.sort_by(|a, b| a.0.total_cmp(&b.0));
    peaks
}

/// Bisector of the counterclockwise arc from `a` to `b`.
pub fn bisector(a: f64, b: f64) -> f64 {
    let gap = (b - a).rem_euclid(360.0);
    normalize_deg(a + gap / 2.0)
}

/// One boundary between each pair of circularly consecutive base groups,
/// halfway between the group peaks. Sorted ascending.
pub fn compute_boundaries(bases: &[ChromogenBase]) -> Vec<f64> {
    let peaks = group_peaks(bases);
    if peaks.len() < 2 {
        return Vec::new();
    }
    let n = peaks.len();
    let mut out: Vec<f64> = (0..n)
        .map(|i| bisector(peaks[i].0, peaks[(i + 1) % n].0))
        .collect();
    out.sort_by(f64::total_cmp);
    out
}
