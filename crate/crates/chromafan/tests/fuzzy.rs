use chromafan::category::CategoryId;
use chromafan::classifier::{classify_image, classify_point, mask_for};
use chromafan::colorspace::{angle_dist, PolarPixel};
use chromafan::fuzzy::{
    angular_membership, compose_name, radial_memberships, summarize_shades, FuzzyModel,
    SHADES_PER_CATEGORY,
};
use chromafan::{ColorModel, PreparedModel};
use image::{Rgb, RgbImage};
use proptest::prelude::*;

fn default_prepared() -> PreparedModel {
    ColorModel::default_model().prepare().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn adjacent_memberships_sum_to_one(theta in 0.0f64..360.0) {
        let f = FuzzyModel::new(&default_prepared());
        let vals: Vec<f64> = f.angular.iter().map(|m| angular_membership(theta, m)).collect();
        let total: f64 = vals.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-9, "{}", total);
        prop_assert!(vals.iter().filter(|&&v| v > 0.0).count() <= 2);
        prop_assert!(vals.iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn radial_degrees_partition(r in 0.0f64..200.0) {
        let f = FuzzyModel::new(&default_prepared());
        let d = radial_memberships(r, &f.radial);
        if r <= f.radial.r1 {
            prop_assert_eq!((d.achromatic, d.near_achromatic, d.chromatic), (1.0, 0.0, 0.0));
        } else {
            prop_assert_eq!(d.achromatic, 0.0);
            prop_assert!((d.near_achromatic + d.chromatic - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn composition_is_a_sorted_percentage(r in 0.0f64..140.0, theta in 0.0f64..360.0) {
        let v = compose_name(PolarPixel::new(r, theta), &default_prepared());
        prop_assert!((v.total_pct() - 100.0).abs() < 0.01);
        for w in v.composition.windows(2) {
            prop_assert!(w[0].1 > w[1].1 || (w[0].1 == w[1].1 && w[0].0 < w[1].0));
        }
    }

    #[test]
    fn chromatic_argmax_matches_crisp(extra in 0.001f64..100.0, theta in 0.0f64..360.0) {
        let m = default_prepared();
        prop_assume!(m.model().boundaries_deg.iter().all(|&b| angle_dist(b, theta) > 1e-6));
        let p = PolarPixel::new(m.model().r3 + extra, theta);
        prop_assert_eq!(compose_name(p, &m).top(), Some(classify_point(p, &m)));
    }
}

#[test]
fn trapezoid_shape_per_class() {
    let m = default_prepared();
    let f = FuzzyModel::new(&m);
    for t in &f.angular {
        assert!(t.knots_ordered());
        assert!((angular_membership(t.b, t) - 0.5).abs() < 1e-9);
        assert!((angular_membership(t.e, t) - 0.5).abs() < 1e-9);
        assert!((angular_membership(t.c, t) - 1.0).abs() < 1e-9);
        assert!((angular_membership(t.a, t) - 0.0).abs() < 1e-9);
        assert!((angular_membership(t.g, t) - 0.0).abs() < 1e-9);
    }
}

#[test]
fn peak_at_full_chroma_is_pure() {
    let m = default_prepared();
    for iv in m.intervals() {
        let v = compose_name(PolarPixel::new(m.model().r3 + 5.0, iv.peak), &m);
        assert_eq!(v.composition, vec![(iv.category, 100.0)]);
    }
    let v = compose_name(PolarPixel::new(m.model().r1 * 0.5, 123.0), &m);
    assert_eq!(v.render(false), "100.00% Neutral");
}

fn gradient_strip() -> RgbImage {
    RgbImage::from_fn(256, 24, |x, y| {
        Rgb([x as u8, (255 - x) as u8, (y * 10) as u8])
    })
}

#[test]
fn shade_counts_match_mask_counts() {
    let m = default_prepared();
    let img = gradient_strip();
    let lm = classify_image(&img, &m).unwrap();
    let summary = summarize_shades(&img, &lm, &m);
    assert!(!summary.categories.is_empty());
    for cs in &summary.categories {
        assert!(cs.shades.len() <= SHADES_PER_CATEGORY);
        for w in cs.shades.windows(2) {
            assert!(w[0].count >= w[1].count);
        }
        let mask = mask_for(&lm, cs.category).pixel_count() as u64;
        let listed: u64 = cs.shades.iter().map(|s| s.count).sum();
        if cs.shades.len() < SHADES_PER_CATEGORY {
            assert_eq!(listed, mask, "{}", cs.category);
        } else {
            assert!(listed <= mask);
        }
    }
}

/// Every shade cell of a coarse image is kept, so the identity holds exactly.
#[test]
fn shade_counts_match_masks_for_few_shades() {
    let m = default_prepared();
    let img = RgbImage::from_fn(60, 10, |x, _| Rgb([(x / 6 * 25) as u8, 40, 200]));
    let lm = classify_image(&img, &m).unwrap();
    let summary = summarize_shades(&img, &lm, &m);
    for c in CategoryId::ALL {
        let listed: u64 = summary
            .get(c)
            .map_or(0, |cs| cs.shades.iter().map(|s| s.count).sum());
        assert_eq!(listed, mask_for(&lm, c).pixel_count() as u64, "{c}");
    }
}

#[test]
fn top_ten_of_twelve_patches() {
    let m = default_prepared();
    // twelve grays of decreasing area, all Neutral
    let mut px = Vec::new();
    for k in 0..12u32 {
        for _ in 0..(20 - k) {
            px.push((20 + 18 * k) as u8);
        }
    }
    let img = RgbImage::from_fn(px.len() as u32, 1, |x, _| {
        let v = px[x as usize];
        Rgb([v, v, v])
    });
    let lm = classify_image(&img, &m).unwrap();
    let s = summarize_shades(&img, &lm, &m);
    let neutral = s.get(CategoryId::Neutral).unwrap();
    assert_eq!(neutral.shades.len(), 10);
    let counts: Vec<u64> = neutral.shades.iter().map(|s| s.count).collect();
    assert_eq!(counts, (11..=20).rev().collect::<Vec<u64>>());
}
