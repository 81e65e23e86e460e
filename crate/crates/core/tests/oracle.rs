mod common;

use num_rational::BigRational;
use proptest::prelude::*;
use robin_forge::oracle::{
    ca_bruteforce, is_subsequence, sigma_bruteforce, superabundant_bruteforce, OracleError,
    SigmaTable,
};

#[test]
fn sigma_examples() {
    assert_eq!(sigma_bruteforce(1), Ok(1));
    assert_eq!(sigma_bruteforce(12), Ok(28));
    assert_eq!(sigma_bruteforce(5040), Ok(19344));
    assert_eq!(common::sigma(5040), 19344);
    assert!(sigma_bruteforce(0).is_err());
    let t = SigmaTable::new(100).unwrap();
    assert_eq!(
        t.sigma(101),
        Err(OracleError::OutOfRange { k: 101, max: 100 })
    );
}

#[test]
fn table_agrees_with_trial_division() {
    let t = SigmaTable::new(20_000).unwrap();
    assert_eq!(t.sigma(1), Ok(1));
    for k in 1..=2000 {
        assert_eq!(t.sigma(k), Ok(common::sigma(k)));
    }
    for p in (2..20_000).filter(|&k| common::trial_prime(k)) {
        assert_eq!(t.sigma(p), Ok(p + 1));
    }
}

#[test]
fn ca_lists() {
    assert_eq!(ca_bruteforce(100).unwrap(), vec![2, 6, 12, 60]);
    assert_eq!(
        ca_bruteforce(10_000).unwrap(),
        vec![2, 6, 12, 60, 120, 360, 2520, 5040]
    );
    assert_eq!(
        ca_bruteforce(1_500_000).unwrap(),
        vec![2, 6, 12, 60, 120, 360, 2520, 5040, 55440, 720720, 1441440]
    );
    assert!(ca_bruteforce(1).unwrap().is_empty());
    assert!(ca_bruteforce(200_000_000).is_err());
}

#[test]
fn superabundant_lists() {
    let sa = superabundant_bruteforce(100_000).unwrap();
    assert_eq!(&sa[..10], &[1, 2, 4, 6, 12, 24, 36, 48, 60, 120]);
    // σ(n)/n strictly increases along the list
    let ratio = |k: u64| BigRational::new(common::sigma(k).into(), k.into());
    for w in sa.windows(2) {
        assert!(ratio(w[1]) > ratio(w[0]));
    }
    // and beats every smaller k, checked directly
    for &n in sa.iter().take_while(|&&n| n <= 5040) {
        assert!((1..n).all(|k| ratio(k) < ratio(n)), "{n}");
    }
    let ca = ca_bruteforce(100_000).unwrap();
    assert!(is_subsequence(&ca, &sa));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn sigma_is_multiplicative(a in 1u64..2000, b0 in 1u64..2000) {
        // step b up to the next value coprime to a
        let b = (b0..).find(|&b| common::gcd(a, b) == 1).unwrap();
        let t = table();
        prop_assert_eq!(t.sigma(a * b).unwrap(), t.sigma(a).unwrap() * t.sigma(b).unwrap());
    }
}

fn table() -> &'static SigmaTable {
    static T: std::sync::OnceLock<SigmaTable> = std::sync::OnceLock::new();
    T.get_or_init(|| SigmaTable::new(4_100_000).unwrap())
}
