mod common;

use common::strategies::*;
use common::g;
use num_integer::Integer;
use preimage_core::classify::{cardinality_gate, classify_shared_preimage, find_mu, julia_equal, theorem4_suite, DEFAULT_JULIA_THRESHOLD};
use preimage_core::parse::parse_exact;
use preimage_core::sets::{preimage, CompactSet, JuliaParams};
use preimage_core::{chebyshev, iterate, ExactPoly, Field, GaussRat, Poly};
use proptest::prelude::*;

/// Pairs in power or Chebyshev form over a common right component, and unrelated pairs.
fn shared_pair() -> impl Strategy<Value = (ExactPoly, ExactPoly)> {
    prop_oneof![
        (2usize..=3, 1usize..=3, exact_poly(1..=3), exact_poly(1..=2), linear_map(), linear_map()).prop_map(|(a, k, r, w, s1, s2)| {
            let c = if a == 2 { 1 } else { 1 + k % 2 };
            let za = Poly::monomial(g(1), a);
            let f2 = (&Poly::monomial(g(1), c) * &r.compose(&za)).apply_linear(&s2).compose(&w);
            (za.apply_linear(&s1).compose(&w), f2)
        }),
        (2usize..=5, 2usize..=5, exact_poly(1..=2), linear_map(), linear_map())
            .prop_filter("coprime", |(a, b, ..)| a.gcd(b) == 1)
            .prop_map(|(a, b, w, s1, s2)| (chebyshev::<GaussRat>(a).apply_linear(&s1).compose(&w), chebyshev::<GaussRat>(b).apply_linear(&s2).compose(&w))),
        (exact_poly(2..=4), exact_poly(2..=5)),
    ]
}

/// Pairs that often satisfy the twisted commutation, plus unrelated pairs.
fn commuting_candidates() -> impl Strategy<Value = (ExactPoly, ExactPoly)> {
    let units = prop_oneof![Just(g(1)), Just(g(-1)), Just(GaussRat::imag_unit()), Just(-GaussRat::imag_unit())];
    prop_oneof![
        (exact_poly(2..=3), 2usize..=3).prop_map(|(f, k)| (f.clone(), iterate(&f, k).unwrap())),
        (2usize..=5, 2usize..=5, units.clone()).prop_map(|(a, b, e)| (Poly::monomial(g(1), a), Poly::monomial(e, b))),
        (2usize..=5, 2usize..=5, prop_oneof![Just(g(1)), Just(g(-1))]).prop_map(|(a, b, e)| (chebyshev::<GaussRat>(a), chebyshev::<GaussRat>(b).scale(&e))),
        (exact_poly(2..=4), exact_poly(2..=4)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn emitted_witnesses_recompose_exactly((f1, f2) in shared_pair()) {
        let Ok(result) = classify_shared_preimage(&f1, &f2) else { return Ok(()) };
        if let Some(w) = result.witness() {
            let (a, b) = if w.swapped { (&f2, &f1) } else { (&f1, &f2) };
            prop_assert_eq!(&w.f1, a);
            prop_assert_eq!(&w.f2, b);
            prop_assert_eq!(w.g1.compose(&w.f1), w.g2.compose(&w.f2));
            prop_assert_eq!(w.f1_tilde.compose(&w.w), w.f1.clone());
            prop_assert_eq!(w.f2_tilde.compose(&w.w), w.f2.clone());
            prop_assert_eq!(w.g1.deg(), w.f2.deg() / w.d);
            prop_assert_eq!(w.g2.deg(), w.f1.deg() / w.d);
            prop_assert!(w.passed());
        }
    }

    #[test]
    fn found_mu_satisfies_twisted_commutation((f1, f2) in commuting_candidates()) {
        if let Some(mu) = find_mu(&f1, &f2) {
            prop_assert_eq!(f1.compose(&f2), f2.compose(&f1).apply_linear(&mu));
        }
    }

    #[test]
    fn iterates_commute_with_identity_mu(f in exact_poly(2..=3)) {
        let mu = find_mu(&f, &iterate(&f, 2).unwrap());
        prop_assert!(mu.is_some_and(|m| m.is_identity()));
    }

    /// A K1 with more than d2/d points forces card f1⁻¹(K1) ≥ lcm(d1, d2).
    #[test]
    fn large_k1_implies_lcm_bound(f1 in exact_poly(1..=6), d2 in 1usize..=6, extra in 0usize..=2) {
        let (d1, d) = (f1.deg(), f1.deg().gcd(&d2));
        let pts: Vec<_> = (0..=(d2 / d + extra)).map(|k| g(k as i64).to_complex()).collect();
        let k1 = pts.len();
        let card = preimage(&f1, &CompactSet::points(pts)).unwrap().as_finite().unwrap().len();
        prop_assert!(cardinality_gate(d1, d2, card, k1, 0));
        prop_assert!(card >= d1.lcm(&d2));
    }
}

#[test]
fn cardinality_gate_boundaries() {
    // d1 = 2, d2 = 3: lcm 6, K1 needs 4 points, K2 needs 3
    assert!(cardinality_gate(2, 3, 6, 0, 0));
    assert!(!cardinality_gate(2, 3, 5, 3, 2));
    assert!(cardinality_gate(2, 3, 5, 4, 0));
    assert!(cardinality_gate(2, 3, 5, 0, 3));
    // d1 = 4, d2 = 6: d = 2, lcm 12, K1 needs 4 points, K2 needs 3
    assert!(!cardinality_gate(4, 6, 11, 3, 2));
    assert!(cardinality_gate(4, 6, 12, 0, 0));
    assert!(cardinality_gate(4, 6, 0, 4, 0));
    assert!(cardinality_gate(4, 6, 0, 0, 3));
}

/// Families where the twisted commutation holds by construction have equal
/// sampled Julia sets, and the suite reports all three conditions together.
#[test]
fn constructed_commuting_families_agree() {
    let params = JuliaParams::default();
    let cases = [("z^2 + 1/4*i", None), ("z^3 - 3/5*z", None), ("z^2", Some("-z^3")), ("z^2 - 2", Some("z^3 - 3z")), ("z^3", Some("i*z^5"))];
    for (a, b) in cases {
        let f1 = parse_exact(a).unwrap();
        let f2 = b.map_or_else(|| iterate(&f1, 2).unwrap(), |s| parse_exact(s).unwrap());
        let mu = find_mu(&f1, &f2).expect("commuting by construction");
        assert_eq!(f1.compose(&f2), f2.compose(&f1).apply_linear(&mu));
        let (eq, dist) = julia_equal(&f1, &f2, &params, DEFAULT_JULIA_THRESHOLD).unwrap();
        assert!(eq, "{a}: sampled Julia distance {dist}");
        let point = CompactSet::points(vec![num_complex::Complex64::new(0.0, 0.0)]);
        let rep = theorem4_suite(&f1, &f2, &point, &point, &params, DEFAULT_JULIA_THRESHOLD, 1e-8).unwrap();
        assert!(rep.conditions.iter().all(|&c| c), "{a}: {:?}", rep.conditions);
        assert!(rep.agree);
    }
}
