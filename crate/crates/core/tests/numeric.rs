mod common;

use common::{encloses, Fixed};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use robin_forge::numeric::{compare, exp_gamma, ln_rational, Dyadic, HPInterval, Verdict};

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn pow2(k: i32) -> f64 {
    2f64.powi(k)
}

#[test]
fn ln_matches_fixed_point_oracle() {
    for (num, den, digits) in [
        (3, 1, "1.09861228866810969139"),
        (7, 3, "0.84729786038720361371"),
        (2, 1, "0.69314718055994530941"),
        (1, 1000, "-6.90775527898213705205"),
    ] {
        let want = common::ln(&big(num), &big(den));
        assert!(
            common::matches_digits(&want, digits),
            "oracle ln({num}/{den})"
        );
        for precision in [64, 128, 256] {
            let got = ln_rational(&big(num), &big(den), precision).unwrap();
            assert!(
                encloses(&got, &want),
                "ln({num}/{den}) at {precision}: {got}"
            );
            let bound = pow2(2 - precision as i32) * want.to_f64().abs().max(1.0);
            assert!(
                got.width_f64() <= bound,
                "width {} at {precision}",
                got.width_f64()
            );
        }
    }
}

#[test]
fn ln_of_one_is_exact() {
    let l = ln_rational(&big(1), &big(1), 128).unwrap();
    assert!(l.width_f64() < pow2(-126));
    assert!(l.contains(&Dyadic::zero()));
}

#[test]
fn ln_rejects_non_positive() {
    assert!(ln_rational(&big(0), &big(1), 128).is_err());
    assert!(ln_rational(&big(-3), &big(1), 128).is_err());
    assert!(ln_rational(&big(3), &big(0), 128).is_err());
}

#[test]
fn gamma_by_two_methods() {
    let g = common::euler_gamma();
    // second method: the first digits of the constant as usually tabulated
    assert!(common::matches_digits(&g, "0.577215664901532"));
    let eg = common::exp_gamma();
    assert!(common::matches_digits(&eg, "1.781072417990197"));
}

#[test]
fn exp_gamma_contract() {
    let want = common::exp_gamma();
    for precision in [53, 64, 128, 256, 512] {
        let x = exp_gamma(precision);
        assert!(encloses(&x, &want), "e^γ at {precision}");
        assert!(x.width_f64() <= pow2(4 - precision as i32));
    }
    assert!(exp_gamma(64).within(1.78107241799, 1e-11));
    assert!(exp_gamma(128).width_f64() < pow2(-124));
    assert!(exp_gamma(64).encloses(&exp_gamma(256)));
}

#[test]
fn compare_examples() {
    let iv =
        |a: i64, b: i64| HPInterval::new(Dyadic::from_i64(a), Dyadic::from_i64(b), 64).unwrap();
    assert_eq!(compare(&iv(1, 2), &iv(3, 4)), Verdict::Less);
    assert_eq!(compare(&iv(3, 4), &iv(1, 2)), Verdict::Greater);
    assert_eq!(compare(&iv(1, 3), &iv(2, 4)), Verdict::Overlap);
    assert_eq!(compare(&iv(1, 2), &iv(2, 3)), Verdict::Overlap);

    // G(5040) = 19344 / (5040 ln ln 5040)
    let w = 128;
    let ln_n = ln_rational(&big(5040), &big(1), w).unwrap();
    let g = HPInterval::from_ratio(&big(19344), &big(5040), w)
        .unwrap()
        .div(&ln_n.ln().unwrap())
        .unwrap();
    assert!(encloses(
        &g,
        &common::g_value(&[(2, 4), (3, 2), (5, 1), (7, 1)])
    ));
    assert_eq!(compare(&exp_gamma(w), &g), Verdict::Less);
}

#[test]
fn arithmetic_against_oracle() {
    let w = 128;
    let third = HPInterval::from_ratio(&big(1), &big(3), w).unwrap();
    let x = HPInterval::from_ratio(&big(7), &big(5), w).unwrap();
    let exact = |n: i64, d: i64| BigRational::new(big(n), big(d));
    assert!(third.add(&x).contains_rational(&exact(26, 15)));
    assert!(third.sub(&x).contains_rational(&exact(-16, 15)));
    assert!(third.mul(&x).contains_rational(&exact(7, 15)));
    assert!(third.div(&x).unwrap().contains_rational(&exact(5, 21)));
    assert!(x.powi(5).contains_rational(&exact(16807, 3125)));

    // (7/5)^(1/3) = exp(ln(7/5)/3)
    let want = common::exp(&common::ln(&big(7), &big(5)).div_int(3));
    let got = x.powf(&third).unwrap();
    assert!(encloses(&got, &want));
    let e = HPInterval::one(w).exp().unwrap();
    assert!(encloses(&e, &common::exp(&Fixed::from_int(1))));
    assert!(third.div(&HPInterval::zero(w)).is_err());
}

#[test]
fn refinement_nests_and_narrows_on_fixed_inputs() {
    let inputs = [
        (2, 1),
        (3, 1),
        (10, 7),
        (1, 97),
        (123456789, 1000),
        (5040, 1),
    ];
    for (num, den) in inputs {
        for p in [64, 128, 256] {
            let coarse = ln_rational(&big(num), &big(den), p).unwrap();
            let fine = ln_rational(&big(num), &big(den), 2 * p).unwrap();
            assert!(coarse.encloses(&fine));
            let wc = coarse.width_f64();
            if wc > 0.0 {
                assert!(fine.width_f64() <= wc / 2.0, "ln({num}/{den}) at {p}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn ln_nests_across_doubled_precision(num in 1i64..1_000_000_000, den in 1i64..1_000_000_000, p in 64u32..200) {
        let coarse = ln_rational(&big(num), &big(den), p).unwrap();
        let fine = ln_rational(&big(num), &big(den), 2 * p).unwrap();
        prop_assert!(coarse.encloses(&fine));
    }
}

fn arb_interval() -> impl Strategy<Value = HPInterval> {
    (-1_000_000i64..1_000_000, 1i64..1000, 0i64..1000).prop_map(|(num, den, spread)| {
        let lo = HPInterval::from_ratio(&big(num), &big(den), 96).unwrap();
        let hi = HPInterval::from_ratio(&big(num + spread), &big(den), 96).unwrap();
        lo.hull(&hi)
    })
}

proptest! {
    #[test]
    fn add_then_subtract_contains_original(a in arb_interval(), b in arb_interval()) {
        let back = a.add(&b).sub(&b);
        prop_assert!(back.encloses(&a));
    }

    #[test]
    fn operations_contain_exact_results(n1 in -10_000i64..10_000, d1 in 1i64..500, n2 in 1i64..10_000, d2 in 1i64..500) {
        let w = 80;
        let a = HPInterval::from_ratio(&big(n1), &big(d1), w).unwrap();
        let b = HPInterval::from_ratio(&big(n2), &big(d2), w).unwrap();
        let (ra, rb) = (BigRational::new(big(n1), big(d1)), BigRational::new(big(n2), big(d2)));
        prop_assert!(a.add(&b).contains_rational(&(&ra + &rb)));
        prop_assert!(a.sub(&b).contains_rational(&(&ra - &rb)));
        prop_assert!(a.mul(&b).contains_rational(&(&ra * &rb)));
        prop_assert!(a.div(&b).unwrap().contains_rational(&(&ra / &rb)));
    }

    #[test]
    fn exp_and_ln_are_inverse_enclosures(n in 1i64..1_000_000, d in 1i64..1000) {
        let x = HPInterval::from_ratio(&big(n), &big(d), 128).unwrap();
        let back = x.ln().unwrap().exp().unwrap();
        prop_assert!(back.contains_rational(&BigRational::new(big(n), big(d))));
    }
}
