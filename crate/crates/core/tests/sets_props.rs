mod common;

use common::strategies::*;
use common::{c, distinct_root_count};
use num_complex::Complex64;
use preimage_core::decompose::Order;
use preimage_core::sets::{hausdorff, image, julia_sample, preimage, set_equal, smallest_enclosing_circle, symmetry_group, CompactSet, JuliaMethod, JuliaParams};
use preimage_core::Field;
use preimage_core::parse::parse_exact;
use proptest::collection::vec;
use proptest::prelude::*;

fn cloud(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Complex64>> {
    vec((-10.0..10.0f64, -10.0..10.0f64), n).prop_map(|v| v.into_iter().map(|(a, b)| c(a, b)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn preimage_cardinality_bound(f in exact_poly(1..=8), k in vec(gauss_int(3, 2), 1..=5)) {
        let mut k = k;
        k.sort_by_key(|w| w.to_string());
        k.dedup();
        let pts: Vec<Complex64> = k.iter().map(Field::to_complex).collect();
        let pre = preimage(&f, &CompactSet::points(pts)).unwrap();
        let card = pre.as_finite().unwrap().len();
        let exact: usize = k.iter().map(|w| distinct_root_count(&f, w)).sum();
        prop_assert_eq!(card, exact);
        prop_assert!(card >= f.deg() * (k.len() - 1) + 1);
    }

    #[test]
    fn image_of_preimage_is_the_set(f in exact_poly(1..=6), k in cloud(1..=5)) {
        let s = CompactSet::points(k);
        let back = image(&f, &preimage(&f, &s).unwrap()).unwrap();
        let (eq, gap) = set_equal(&back, &s, 1e-6);
        prop_assert!(eq, "gap {}", gap);
    }

    #[test]
    fn enclosing_circle_contains_and_touches(pts in cloud(1..=40)) {
        let sec = smallest_enclosing_circle(&pts).unwrap();
        prop_assert!(pts.iter().all(|z| (z - sec.center).norm() <= sec.radius + 1e-12));
        let on_boundary = pts.iter().filter(|z| ((*z - sec.center).norm() - sec.radius).abs() <= 1e-9).count();
        let need = if pts.len() == 1 { 1 } else { 2 };
        prop_assert!(on_boundary >= need, "{} boundary points", on_boundary);
    }

    #[test]
    fn symmetric_orbits_are_detected(b in 2usize..=6, seeds in cloud(1..=3), cx in -3.0..3.0f64, cy in -3.0..3.0f64) {
        let center = c(cx, cy);
        let eps = Complex64::from_polar(1.0, std::f64::consts::TAU / b as f64);
        let pts: Vec<Complex64> = seeds.iter().flat_map(|z| (0..b).map(move |k| center + z * eps.powu(k as u32))).collect();
        prop_assume!(seeds.iter().all(|z| z.norm() > 0.5));
        let s = CompactSet::points(pts.clone());
        let grp = symmetry_group(&s).unwrap();
        let Order::Finite(order) = grp.order else { return Err(TestCaseError::fail("infinite group")) };
        prop_assert_eq!(order % b, 0);
        prop_assert!((grp.center - center).norm() <= 1e-8);
        let gen = grp.generator.unwrap();
        let moved: Vec<Complex64> = pts.iter().map(|z| gen.apply_complex(*z)).collect();
        prop_assert!(hausdorff(&moved, &pts) <= 1e-8);
    }

    #[test]
    fn hausdorff_is_a_metric(a in cloud(1..=20), b in cloud(1..=20), d in cloud(1..=20)) {
        prop_assert_eq!(hausdorff(&a, &a), 0.0);
        prop_assert!((hausdorff(&a, &b) - hausdorff(&b, &a)).abs() <= 1e-12);
        prop_assert!(hausdorff(&a, &d) <= hausdorff(&a, &b) + hausdorff(&b, &d) + 1e-12);
    }
}

/// Doubling the sample count moves the distance to a dense reference cloud by
/// less than half the 0.05 acceptance tolerance.
#[test]
fn julia_sampling_is_stable() {
    for text in ["z^2 - 1", "z^2 + 1/4*i", "z^3 - 3/5*z", "z^2 - 2"] {
        let f = parse_exact(text).unwrap();
        let reference = julia_sample(&f, &JuliaParams { method: JuliaMethod::Both, samples: 80_000, seed: 99, ..JuliaParams::default() }).unwrap();
        let at = |n: usize| hausdorff(&julia_sample(&f, &JuliaParams::with_samples(n)).unwrap().samples, &reference.samples);
        let (d1, d2) = (at(10_000), at(20_000));
        assert!((d1 - d2).abs() < 0.025, "{text}: {d1} vs {d2}");
    }
}
