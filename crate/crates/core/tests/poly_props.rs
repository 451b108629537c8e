mod common;

use common::strategies::*;
use common::c;
use num_complex::Complex64;
use preimage_core::parse::{parse_approx, parse_exact};
use preimage_core::roots::roots;
use preimage_core::{chebyshev, conjugate, ApproxPoly, GaussRat, Poly};
use proptest::collection::vec;
use proptest::prelude::*;

fn approx_poly(deg: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = ApproxPoly> {
    deg.prop_flat_map(|d| vec((-2.0..2.0f64, -2.0..2.0f64), d + 1))
        .prop_map(|cs| Poly::new(cs.into_iter().map(|(re, im)| c(re, im)).collect()))
        .prop_filter("nonconstant", |p| p.deg() >= 1 && p.lead().norm() > 0.1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn composition_is_associative(a in exact_poly(0..=6), b in exact_poly(0..=6), d in exact_poly(0..=6)) {
        prop_assert_eq!(a.compose(&b.compose(&d)), a.compose(&b).compose(&d));
    }

    #[test]
    fn degrees_multiply(gp in exact_poly(1..=8), f in exact_poly(1..=8)) {
        prop_assert_eq!(gp.compose(&f).deg(), gp.deg() * f.deg());
        prop_assert_eq!(gp.composed_degree(&f), gp.deg() * f.deg());
    }

    #[test]
    fn composition_evaluates_pointwise(gp in approx_poly(1..=4), f in approx_poly(1..=4), re in -1.0..1.0f64, im in -1.0..1.0f64) {
        let x = c(re, im);
        let lhs = gp.compose(&f).eval_complex(x);
        let rhs = gp.eval_complex(f.eval_complex(x));
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()), "{lhs} vs {rhs}");
    }

    #[test]
    fn roots_have_small_backward_error(f in exact_poly(1..=10)) {
        let fa = f.to_approx();
        let bound = 1e-8 * (1.0 + fa.max_abs_coeff());
        let rs = roots(&f).unwrap();
        prop_assert_eq!(rs.iter().map(|r| r.mult).sum::<usize>(), f.deg());
        for r in rs {
            prop_assert!(fa.eval_complex(r.z).norm() <= bound, "|f({})| = {}", r.z, fa.eval_complex(r.z).norm());
        }
    }

    #[test]
    fn conjugation_round_trips(f in exact_poly(1..=6), m in linear_map()) {
        prop_assert_eq!(conjugate(&conjugate(&f, &m), &m.inverse()), f.clone());
        prop_assert!(m.compose(&m.inverse()).is_identity());
        let x = common::g(3);
        prop_assert_eq!(conjugate(&f, &m).eval(&m.apply(&x)), m.apply(&f.eval(&x)));
    }

    #[test]
    fn text_round_trips(f in exact_poly(0..=8)) {
        prop_assert_eq!(parse_exact(&f.to_string()).unwrap(), f.clone());
        let fa = f.to_approx();
        prop_assert_eq!(parse_approx(&fa.to_string()).unwrap(), fa);
    }

    #[test]
    fn chebyshev_semigroup(m in 1usize..=16, n in 1usize..=16) {
        prop_assert_eq!(chebyshev::<GaussRat>(m).compose(&chebyshev(n)), chebyshev(m * n));
        let approx: ApproxPoly = chebyshev(m);
        prop_assert_eq!(approx, chebyshev::<GaussRat>(m).to_approx());
    }
}

#[test]
fn chebyshev_is_cosine_of_multiple_angle() {
    for n in 0..12 {
        let t: ApproxPoly = chebyshev(n);
        for k in 0..20 {
            let th = 0.3 * k as f64;
            let v = t.eval_complex(Complex64::new(th.cos(), 0.0));
            assert!((v.re - (n as f64 * th).cos()).abs() < 1e-10 && v.im.abs() < 1e-12);
        }
    }
}
