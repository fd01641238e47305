//! Integer factorization: pinned table values and randomized reconstruction
//! properties.

use misiurewicz::intfactor::{
    factor_int, is_prime, is_prime_u64, primality, valuation, verify_factorization,
    Certainty, FactorList, Primality,
};
use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;

fn big(s: &str) -> BigInt {
    s.parse().unwrap()
}

#[test]
fn primality_pinned() {
    assert!(is_prime(&big("2551")));
    assert!(is_prime(&big("24554691821639909")));
    assert!(!is_prime(&big("58673"))); // 23 * 2551
    assert!(!is_prime(&big("-7")));
    assert!(!is_prime(&big("1")));
    // 43-digit factor of a degree-63 discriminant: beyond the deterministic
    // range, so only probable.
    assert_eq!(
        primality(&big("1858730157152877176856713108209153714699601")),
        Primality::ProbablePrime
    );
    assert_eq!(primality(&big("24554691821639909")), Primality::Prime);
    assert_eq!(primality(&big("58673")), Primality::Composite);
}

#[test]
fn factor_pinned_small() {
    let f = factor_int(&big("58673"), 100_000).unwrap();
    assert_eq!(f.to_text(), "23 * 2551");
    assert_eq!(f.value(), big("58673"));

    let f = factor_int(&big("-4"), 100_000).unwrap();
    assert_eq!(f.to_text(), "-1 * 2^2");

    let f = factor_int(&big("1"), 100_000).unwrap();
    assert_eq!(f.to_text(), "1");
    let f = factor_int(&big("-1"), 100_000).unwrap();
    assert_eq!(f.to_text(), "-1");

    assert!(factor_int(&BigInt::from(0), 100_000).is_err());
}

#[test]
fn factor_pinned_degree_five_discriminant() {
    // Disc of the period-5 Gleason polynomial for z^2 + c.
    let f = factor_int(&big("319210993681318817"), 1_000_000).unwrap();
    assert_eq!(f.to_text(), "13 * 24554691821639909");
    assert!(f.entries.iter().all(|e| e.certainty == Certainty::PrimeCertified));
}

#[test]
fn factor_pinned_degree_four_cubic_discriminant() {
    // 13424896 = 2^8 * 229^2.
    let f = factor_int(&big("13424896"), 100_000).unwrap();
    assert_eq!(f.to_text(), "2^8 * 229^2");
}

#[test]
fn effort_zero_leaves_composite_residue() {
    let p = big("2305843009213693951"); // 2^61 - 1
    let q = big("2147483647"); // 2^31 - 1
    let n = &p * &q;
    let f = factor_int(&n, 0).unwrap();
    assert_eq!(f.value(), n);
    assert_eq!(f.entries.len(), 1);
    assert_eq!(f.entries[0].certainty, Certainty::CompositeResidue);
    assert!(f.has_composite_residue());

    // With a real budget the same product splits completely.
    let f = factor_int(&n, 5_000_000).unwrap();
    assert_eq!(f.to_text(), "2147483647 * 2305843009213693951");
    assert!(!f.has_composite_residue());
}

#[test]
fn valuation_pinned() {
    assert_eq!(valuation(&big("13424896"), &big("2")).unwrap(), 8);
    assert_eq!(
        valuation(&big("-1041479942838787424502668691138595310951"), &big("13")).unwrap(),
        2
    );
    assert_eq!(valuation(&big("23"), &big("23")).unwrap(), 1);
    assert_eq!(valuation(&big("23"), &big("5")).unwrap(), 0);
    assert!(valuation(&BigInt::from(0), &big("2")).is_err());
    assert!(valuation(&big("10"), &big("6")).is_err());
}

#[test]
fn verify_pinned_degree_seven_discriminant() {
    // Seven-prime factorization of the period-7 discriminant for z^2 + c,
    // checked in verification mode: the 43-digit prime is far beyond the
    // discovery budget.
    let primes = [
        "8291",
        "9137",
        "420221",
        "189946395389",
        "4813162343551332730513",
        "2837919018511214750008829",
        "1858730157152877176856713108209153714699601",
    ];
    let mut n = -BigInt::one();
    for p in primes {
        n *= big(p);
    }
    let text = format!("-1 * {}", primes.join(" * "));
    let claimed = FactorList::from_text(&text).unwrap();
    assert!(verify_factorization(&n, &claimed));
    // Tampering breaks it.
    assert!(!verify_factorization(&(&n + BigInt::one()), &claimed));
    let bogus = FactorList::from_text("-1 * 8291 * 9137").unwrap();
    assert!(!verify_factorization(&n, &bogus));

    let verify_58673 = FactorList::from_text("23 * 2551").unwrap();
    assert!(verify_factorization(&big("58673"), &verify_58673));
}

#[test]
fn text_round_trip_with_signs() {
    let f = FactorList::from_text("-1 * 2^8 * 229^2").unwrap();
    assert_eq!(f.sign, -1);
    assert_eq!(f.value(), big("-13424896"));
    assert_eq!(f.to_text(), "-1 * 2^8 * 229^2");
    // Unsorted and duplicated input normalizes.
    let f = FactorList::from_text("229 * 2^8 * 229").unwrap();
    assert_eq!(f.to_text(), "2^8 * 229^2");
    assert!(FactorList::from_text("2^0").is_err());
    assert!(FactorList::from_text("two").is_err());
    assert!(FactorList::from_text("").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prop_factor_reconstructs(n in prop::num::i64::ANY.prop_filter("nonzero", |&n| n != 0)) {
        let n = BigInt::from(n);
        let f = factor_int(&n, 200_000).unwrap();
        prop_assert_eq!(f.value(), n);
        // Bases strictly increasing.
        for w in f.entries.windows(2) {
            prop_assert!(w[0].base < w[1].base);
        }
        // At most one composite residue.
        let residues = f
            .entries
            .iter()
            .filter(|e| e.certainty == Certainty::CompositeResidue)
            .count();
        prop_assert!(residues <= 1);
    }

    #[test]
    fn prop_planted_products_fully_split(
        idx in prop::collection::vec(0usize..9, 1..=4),
        exps in prop::collection::vec(1u32..=3, 4),
    ) {
        let pool: [i64; 9] = [
            2, 3, 101, 9137, 100003, 104729, 1299709, 15485863, 2147483647,
        ];
        let mut n = BigInt::one();
        for (j, &i) in idx.iter().enumerate() {
            n *= num_traits::Pow::pow(&BigInt::from(pool[i]), exps[j % 4]);
        }
        let f = factor_int(&n, 2_000_000).unwrap();
        prop_assert_eq!(f.value(), n);
        prop_assert!(!f.has_composite_residue());
        for e in &f.entries {
            // Everything here is under 2^64, so certified, and the
            // deterministic test must agree with itself.
            prop_assert_eq!(e.certainty, Certainty::PrimeCertified);
            prop_assert!(is_prime_u64(e.base.to_string().parse::<u64>().unwrap()));
        }
    }

    #[test]
    fn prop_valuation_additive(
        a in prop::num::i32::ANY.prop_filter("nonzero", |&a| a != 0),
        b in prop::num::i32::ANY.prop_filter("nonzero", |&b| b != 0),
        pidx in 0usize..5,
    ) {
        let pool: [i64; 5] = [2, 3, 5, 13, 229];
        let p = BigInt::from(pool[pidx]);
        let (a, b) = (BigInt::from(a), BigInt::from(b));
        let lhs = valuation(&(&a * &b), &p).unwrap();
        let rhs = valuation(&a, &p).unwrap() + valuation(&b, &p).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn prop_text_round_trip(n in prop::num::i64::ANY.prop_filter("nonzero", |&n| n != 0)) {
        let n = BigInt::from(n);
        let f = factor_int(&n, 200_000).unwrap();
        let back = FactorList::from_text(&f.to_text()).unwrap();
        prop_assert_eq!(back.value(), n);
    }
}
