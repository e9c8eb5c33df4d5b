use m2dq_core::symbol::{exact_complex, rational, Coefficient};
use m2dq_core::{covariance_check, ExactComplex, ExactSymbol as S, LieAlgebraElement as L};
use proptest::prelude::*;

fn coefficient() -> impl Strategy<Value = ExactComplex> {
    (-9i64..=9, -9i64..=9, 1i64..=8).prop_map(|(a, b, d)| exact_complex(a, b, d))
}

fn symbol(kmax: u32, nmax: i64) -> impl Strategy<Value = S> {
    prop::collection::vec((0..=kmax, -nmax..=nmax, coefficient()), 0..5).prop_map(S::from_terms)
}

/// `P^r` straight from the definition, with no degree shortcuts.
fn p_r_oracle(f: &S, g: &S, r: u32) -> S {
    let mut out = S::zero();
    let mut binom: i64 = 1;
    for m in 0..=r {
        if m > 0 {
            binom = binom * i64::from(r - m + 1) / i64::from(m);
        }
        let sign = if (r - m) % 2 == 0 { binom } else { -binom };
        let term = f.derivative(m, r - m).mul(&g.derivative(r - m, m));
        out = out + term.scale(&rational(sign, 1));
    }
    out
}

/// `(1/2i)^r / r!`
fn weight(r: u32) -> ExactComplex {
    let mut w = ExactComplex::one();
    for j in 1..=r {
        // 1/(2i) = −i/2
        w = w * exact_complex(0, -1, 2) * rational(1, i64::from(j));
    }
    w
}

fn dyadic() -> impl Strategy<Value = f64> {
    (-64i32..=64).prop_map(|k| k as f64 / 8.0)
}

fn dyadic_element() -> impl Strategy<Value = L> {
    (dyadic(), dyadic(), dyadic()).prop_map(|(a, b, c)| L::new(a, b, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn termination(f in symbol(4, 4), g in symbol(4, 4)) {
        let d = f.xdeg() + g.xdeg();
        for r in d + 1..=d + 3 {
            prop_assert!(p_r_oracle(&f, &g, r).is_zero());
            prop_assert!(f.p_r(&g, r).is_zero());
        }
        for r in 0..=d {
            prop_assert_eq!(f.p_r(&g, r), p_r_oracle(&f, &g, r));
        }
    }

    #[test]
    fn associativity(f in symbol(3, 3), g in symbol(3, 3), h in symbol(3, 3)) {
        prop_assert_eq!(f.star(&g).star(&h), f.star(&g.star(&h)));
    }

    #[test]
    fn deformation_of_pointwise_product(f in symbol(3, 3), g in symbol(3, 3)) {
        prop_assert_eq!(f.p_r(&g, 0), f.mul(&g));
        prop_assert_eq!(f.p_r(&g, 1), f.poisson(&g));
        let mut series = S::zero();
        for r in 1..=f.xdeg() + g.xdeg() {
            series = series + p_r_oracle(&f, &g, r).scale(&weight(r));
        }
        prop_assert_eq!(f.star(&g) - f.mul(&g), series);
    }

    #[test]
    fn conjugation_reverses_order(f in symbol(3, 3), g in symbol(3, 3)) {
        prop_assert_eq!(f.star(&g).conj(), g.conj().star(&f.conj()));
    }

    #[test]
    fn unit_is_neutral(f in symbol(4, 4)) {
        prop_assert_eq!(S::one().star(&f), f.clone());
        prop_assert_eq!(f.star(&S::one()), f);
    }

    #[test]
    fn star_is_bilinear(f in symbol(3, 3), g in symbol(3, 3), h in symbol(3, 3), c in coefficient()) {
        prop_assert_eq!(f.star(&(g.clone() + h.clone())), f.star(&g) + f.star(&h));
        prop_assert_eq!(f.scale(&c).star(&g), f.star(&g).scale(&c));
    }

    // the JSON format carries doubles, which hold dyadic rationals exactly
    #[test]
    fn json_round_trip(
        f in prop::collection::vec(
            (0..=4u32, -4i64..=4, -64i64..=64, -64i64..=64, 0u32..6),
            0..6,
        )
        .prop_map(|t| S::from_terms(t.into_iter().map(|(k, n, a, b, e)| (k, n, exact_complex(a, b, 1 << e))))),
    ) {
        let back = S::from_json(&f.to_json()).unwrap();
        prop_assert_eq!(back, f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn covariance_at_sampled_radii(
        pairs in prop::collection::vec((dyadic_element(), dyadic_element()), 1..8),
    ) {
        for radius in [0.5, 1.0, 2.0, 5.0] {
            let report = covariance_check(radius, &pairs).unwrap();
            prop_assert!(report.passed(), "{:?}", report);
        }
    }
}

#[test]
fn covariance_holds_for_non_dyadic_doubles() {
    // every finite double is dyadic, so values like 0.1 are still exact inputs
    let pairs = [(L::new(0.1, 0.2, 0.3), L::new(-0.7, 1.0 / 3.0, 2.9))];
    assert!(covariance_check(std::f64::consts::PI, &pairs)
        .unwrap()
        .passed());
}
