mod common;

use common::{encloses, Fixed};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use robin_forge::ca::{CAStep, CaEngine, FactoredCA, QuotientPrime, StepKind};
use robin_forge::metrics::{
    abundancy_ratio_exact, aek7_ratio, band_margin, classify_band, g_value, growth_decomposition,
    lemma1_ratio, lemma2_value, lemma3_pair, robin_check, verify_lemma45, BandClass, BandParams,
    CheckMode, MetricsError, RatioKind, RobinStatus,
};
use robin_forge::numeric::{compare, exp_gamma, HPInterval, Verdict};

const F12: &[(u64, u32)] = &[(2, 2), (3, 1)];
const F5040: &[(u64, u32)] = &[(2, 4), (3, 2), (5, 1), (7, 1)];
const F55440: &[(u64, u32)] = &[(2, 4), (3, 2), (5, 1), (7, 1), (11, 1)];
const F720720: &[(u64, u32)] = &[(2, 4), (3, 2), (5, 1), (7, 1), (11, 1), (13, 1)];
const F1441440: &[(u64, u32)] = &[(2, 5), (3, 2), (5, 1), (7, 1), (11, 1), (13, 1)];
const F367567200: &[(u64, u32)] = &[(2, 5), (3, 3), (5, 2), (7, 1), (11, 1), (13, 1), (17, 1)];

fn ca(factors: &[(u64, u32)]) -> FactoredCA {
    FactoredCA::from_factors(factors, 0, 128).unwrap()
}

fn value(factors: &[(u64, u32)]) -> u64 {
    factors.iter().map(|&(p, a)| p.pow(a)).product()
}

fn loglog(factors: &[(u64, u32)]) -> Fixed {
    common::ln_fixed(&common::ln_u64(value(factors)))
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn step(q: &[(u64, u32)]) -> CAStep {
    CAStep {
        step_index: 0,
        quotient: q
            .iter()
            .map(|&(prime, prior_exponent)| QuotientPrime {
                prime,
                prior_exponent,
            })
            .collect(),
        kind: if q.len() == 2 {
            StepKind::Semiprime
        } else {
            StepKind::Prime
        },
        epsilon: HPInterval::zero(64),
        tie: false,
    }
}

/// Engine states and steps, with `states[i]` the state after `steps[i]`.
fn run(steps: usize) -> (Vec<FactoredCA>, Vec<CAStep>) {
    let mut engine = CaEngine::with_precision(128).unwrap();
    let mut states = Vec::new();
    let mut taken = Vec::new();
    for _ in 0..steps {
        taken.push(engine.next_step().unwrap());
        states.push(engine.state().clone());
    }
    (states, taken)
}

#[test]
fn g_values_against_oracle() {
    for (factors, digits) in [
        (F12, "2.563440313761713"),
        (F5040, "1.790973366534881"),
        (F55440, "1.751246514887494"),
    ] {
        let want = common::g_value(factors);
        assert!(
            common::matches_digits(&want, digits),
            "oracle G({})",
            value(factors)
        );
        for precision in [64, 128, 256] {
            let g = g_value(&ca(factors), precision).unwrap();
            assert!(encloses(&g, &want), "G({}) at {precision}", value(factors));
        }
    }
    assert!(g_value(&ca(&[(2, 1)]), 128).is_err());
}

#[test]
fn robin_verdicts() {
    let v = robin_check(&ca(F5040), 4096).unwrap();
    assert_eq!(v.status, RobinStatus::Boundary);
    let g = v.g_value.unwrap();
    assert!(g.width_f64() < 1e-20);
    assert!(encloses(&g, &common::g_value(F5040)));
    assert_eq!(compare(&g, &exp_gamma(128)), Verdict::Greater);

    let v = robin_check(&ca(F55440), 4096).unwrap();
    assert_eq!(v.status, RobinStatus::Satisfies);
    let margin = common::exp_gamma().sub(&common::g_value(F55440));
    assert!(common::matches_digits(&margin, "0.029825903102704"));
    assert!(encloses(&v.margin.unwrap(), &margin));

    assert_eq!(
        robin_check(&ca(F12), 4096).unwrap().status,
        RobinStatus::Boundary
    );
}

#[test]
fn ratio_law_fixtures() {
    let (states, steps) = run(9);
    // 2520 -> 5040 raises 2 from 2^3
    let r = abundancy_ratio_exact(&steps[7], |p| states[6].exponent_of(p)).unwrap();
    assert_eq!(r.kind, RatioKind::PrimeExisting);
    assert_eq!(r.exact_ratio, ratio(31, 30));
    // 5040 -> 55440 brings in 11
    let r = abundancy_ratio_exact(&steps[8], |p| states[7].exponent_of(p)).unwrap();
    assert_eq!(r.kind, RatioKind::PrimeNew);
    assert_eq!(r.exact_ratio, ratio(12, 11));
    // σ-side of both identities, from trial division
    let direct =
        |m: u64, n: u64| ratio((common::sigma(n) * m) as i64, (common::sigma(m) * n) as i64);
    assert_eq!(direct(2520, 5040), ratio(31, 30));
    assert_eq!(direct(5040, 55440), ratio(12, 11));

    let both = abundancy_ratio_exact(&step(&[(2, 0), (3, 0)]), |_| 0).unwrap();
    assert_eq!(both.kind, RatioKind::BothNew);
    assert_eq!(both.exact_ratio, ratio(2, 1));
    let mixed = abundancy_ratio_exact(&step(&[(2, 1), (5, 0)]), |p| (p == 2) as u32).unwrap();
    assert_eq!(mixed.kind, RatioKind::ExistingNew);
    assert_eq!(mixed.exact_ratio, ratio(7, 6) * ratio(6, 5));

    // a prior exponent that disagrees with m is a contract error
    let bad = abundancy_ratio_exact(&step(&[(2, 2)]), |_| 3);
    assert!(matches!(bad, Err(MetricsError::Contract(_))));
    let repeated = abundancy_ratio_exact(&step(&[(3, 0), (3, 0)]), |_| 0);
    assert!(matches!(repeated, Err(MetricsError::Contract(_))));
}

#[test]
fn ratio_law_exact_and_interval_modes() {
    let (states, steps) = run(300);
    let mut previous = FactoredCA::one(128);
    for (state, step) in states.iter().zip(&steps) {
        let exact = verify_lemma45(step, &previous, state, 10_000_000).unwrap();
        let n = state.value();
        if n <= 10_000_000u32.into() {
            assert_eq!(exact.mode, CheckMode::Exact);
            let (m, n) = (
                u64::try_from(previous.value()).unwrap(),
                u64::try_from(n).unwrap(),
            );
            let oracle = BigRational::new(
                BigInt::from(common::sigma(n)) * m,
                BigInt::from(common::sigma(m)) * n,
            );
            assert_eq!(exact.case.exact_ratio, oracle, "{m} -> {n}");
        } else {
            assert_eq!(exact.mode, CheckMode::Interval);
        }
        assert!(exact.holds, "step {}", step.step_index);
        let interval = verify_lemma45(step, &previous, state, 0).unwrap();
        assert_eq!(interval.mode, CheckMode::Interval);
        assert!(interval.holds, "interval step {}", step.step_index);
        previous = state.clone();
    }
}

#[test]
fn lemma1_examples() {
    let r = lemma1_ratio(&ca(F5040), &ca(F55440)).unwrap();
    let want = loglog(F5040).div(&loglog(F55440));
    assert!(common::matches_digits(&want, "0.896333432595616"));
    assert!(encloses(&r.ratio, &want));
    assert!(r.deviation.hi().to_f64() <= r.envelope2.hi().to_f64());

    let r = lemma1_ratio(&ca(F720720), &ca(F1441440)).unwrap();
    let l = 720720f64.ln();
    let bound = 2f64.ln() / (l * l.ln()) + 1e-3;
    assert!(r.deviation.hi().to_f64() < bound);

    let n = ca(F55440);
    let same = lemma1_ratio(&n, &n).unwrap();
    assert!(same.ratio.is_point());
    assert_eq!(same.ratio, HPInterval::one(128));
    assert!(lemma1_ratio(&ca(&[(2, 1)]), &n).is_err());
}

#[test]
fn lemma2_examples() {
    for (factors, p, digits) in [
        (F55440, 11, "0.165269746591660"),
        (&[(2u64, 1u32), (3, 1)][..], 3, "0.385654738946329"),
    ] {
        let want = common::exp(&loglog(factors).div_int(4)).div_int(p);
        assert!(common::matches_digits(&want, digits));
        assert!(encloses(&lemma2_value(&ca(factors), 0.25).unwrap(), &want));
    }
    let n = ca(F55440);
    assert!(lemma2_value(&n, 0.5).is_err());
    assert!(lemma2_value(&n, 0.0).is_err());
    assert!(lemma2_value(&n, -0.1).is_err());
}

#[test]
fn lemma3_examples() {
    let pair = lemma3_pair(&ca(F55440)).unwrap();
    assert_eq!((pair.prime, pair.exponent), (11, 1));
    assert!(pair.damped.contains_rational(&ratio(1, 132)));
    assert!(pair.plain.contains_rational(&ratio(1, 11)));
    assert_eq!(pair.exact_ratio, ratio(1, 12));

    let pair = lemma3_pair(&ca(&[(2, 2)])).unwrap();
    assert!(pair.damped.contains_rational(&ratio(1, 14)));
    assert!(pair.plain.contains_rational(&ratio(1, 2)));
    assert_eq!(pair.exact_ratio, ratio(1, 7));
}

#[test]
fn lemma3_ratio_bound_along_the_run() {
    let (states, _) = run(2000);
    for s in &states {
        let pair = lemma3_pair(s).unwrap();
        assert!(pair.exact_ratio <= ratio(1, 1 + pair.prime as i64));
        assert!(pair
            .damped
            .div(&pair.plain)
            .unwrap()
            .contains_rational(&pair.exact_ratio));
    }
}

#[test]
fn aek7_examples() {
    for (factors, p, digits) in [
        (F55440, 11, "1.007044124068502"),
        (&[(2u64, 1u32)][..], 2, "2.885390081777927"),
        (F367567200, 17, "0.8619633305541588"),
    ] {
        let want = Fixed::from_int(p).div(&common::ln_u64(value(factors)));
        assert!(common::matches_digits(&want, digits));
        assert!(encloses(&aek7_ratio(&ca(factors)).unwrap(), &want));
    }
}

#[test]
fn band_margin_at_55440() {
    let params = BandParams::default();
    let report = band_margin(&ca(F55440), &params, Some(&ca(F5040)), 4096).unwrap();
    // (G/e^γ - 1) (log n)^(1/4)
    let l = common::ln_u64(55440);
    let scale = common::exp(&common::ln_fixed(&l).div_int(4));
    let want = common::g_value(F55440)
        .div(&common::exp_gamma())
        .sub(&Fixed::from_int(1))
        .mul(&scale);
    assert!(common::matches_digits(&want, "-0.030443744665559"));
    assert!(encloses(&report.normalized_excess, &want));
    assert_eq!(report.band, BandClass::BelowBand);
    assert_eq!(report.band_direct, BandClass::BelowBand);
    assert_eq!(report.robin.status, RobinStatus::Satisfies);
    assert!(report.lemma1.is_some());
    assert!(BandParams::new(0.5, 1.0).is_err());
    assert!(BandParams::new(0.25, 0.0).is_err());
}

#[test]
fn synthetic_in_band_fixture() {
    let w = 256;
    for (b, c, log_n) in [(0.25, 1.0, 10.0), (0.1, 0.5, 1e4), (0.49, 3.0, 2.5e6)] {
        let params = BandParams::new(b, c).unwrap();
        let log_n = HPInterval::from_f64(log_n, w).unwrap();
        let scale = HPInterval::from_f64(b, w)
            .unwrap()
            .mul(&log_n.ln().unwrap())
            .exp()
            .unwrap();
        let half_c = HPInterval::from_f64(c / 2.0, w).unwrap();
        let g = exp_gamma(w).mul(&HPInterval::one(w).add(&half_c.div(&scale).unwrap()));
        let reading = classify_band(&g, &log_n, &params).unwrap();
        assert_eq!(reading.from_excess, BandClass::InBand);
        assert_eq!(reading.direct, BandClass::InBand);
        assert!(reading.normalized_excess.within(c / 2.0, 1e-30));
    }
}

#[test]
fn growth_fixture_and_degenerate_case() {
    let (states, steps) = run(9);
    let g = growth_decomposition(&states[7], &states[8], Some(&steps[8])).unwrap();
    assert!(g.abundancy_ratio.contains_rational(&ratio(12, 11)));
    assert!(encloses(
        &g.loglog_ratio,
        &loglog(F5040).div(&loglog(F55440))
    ));
    let want = common::g_value(F55440).div(&common::g_value(F5040));
    assert!(common::matches_digits(&want, "0.977818290104308"));
    assert!(encloses(&g.product, &want));
    let direct = g_value(&states[8], 128)
        .unwrap()
        .div(&g_value(&states[7], 128).unwrap())
        .unwrap();
    assert!(g.product.intersects(&direct));

    let without_step = growth_decomposition(&states[7], &states[8], None).unwrap();
    assert!(without_step.product.intersects(&g.product));

    let same = growth_decomposition(&states[8], &states[8], None).unwrap();
    let one = HPInterval::one(128);
    assert_eq!(
        (same.abundancy_ratio, same.loglog_ratio, same.product),
        (one.clone(), one.clone(), one)
    );
}

fn arb_band() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    (0.01f64..0.49, 0.01f64..5.0, 2.0f64..1e6, -2.0f64..2.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn band_classifications_agree((b, c, log_n, t) in arb_band()) {
        // G = e^γ (1 + t c/(log n)^b): t < 0 below, 0 < t < 1 in band, t > 1 above
        let w = 128;
        let params = BandParams::new(b, c).unwrap();
        let log_n = HPInterval::from_f64(log_n, w).unwrap();
        let scale = HPInterval::from_f64(b, w).unwrap().mul(&log_n.ln().unwrap()).exp().unwrap();
        let tc = HPInterval::from_f64(t * c, w).unwrap();
        let g = exp_gamma(w).mul(&HPInterval::one(w).add(&tc.div(&scale).unwrap()));
        let reading = classify_band(&g, &log_n, &params).unwrap();
        prop_assert_eq!(reading.from_excess, reading.direct);
        let expected = if t < 0.0 {
            BandClass::BelowBand
        } else if t < 1.0 {
            BandClass::InBand
        } else {
            BandClass::AboveBand
        };
        if t.abs() > 1e-9 && (t - 1.0).abs() > 1e-9 {
            prop_assert_eq!(reading.direct, expected);
        }
    }
}
