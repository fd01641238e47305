//! Integer primality, bounded-effort factorization, and p-adic valuations.
//!
//! Primality is deterministic below 2^64 (Miller-Rabin with a proven base
//! set) and strong-probable-prime beyond, with the distinction surfaced in
//! [`Certainty`]. Factorization runs trial division to 10^5 followed by
//! Brent-cycle Pollard rho under an explicit iteration budget; an unsplit
//! cofactor is reported as a composite residue rather than looping forever.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// How certain the classification of a factor-list base is.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certainty {
    /// Proven prime (deterministic test, valid below 2^64).
    PrimeCertified,
    /// Passed a multi-base strong-probable-prime test.
    ProbablePrime,
    /// Known composite, left unsplit by the effort bound.
    CompositeResidue,
}

/// Three-valued primality verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Primality {
    Composite,
    ProbablePrime,
    Prime,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorEntry {
    pub base: BigInt,
    pub exp: u32,
    pub certainty: Certainty,
}

/// `sign * prod base_i^exp_i` with strictly increasing bases and at most one
/// composite-residue entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorList {
    pub sign: i8,
    pub entries: Vec<FactorEntry>,
}

impl FactorList {
    pub fn value(&self) -> BigInt {
        let mut acc = BigInt::from(self.sign);
        for e in &self.entries {
            acc *= num_traits::Pow::pow(&e.base, e.exp);
        }
        acc
    }

    pub fn has_composite_residue(&self) -> bool {
        self.entries
            .iter()
            .any(|e| e.certainty == Certainty::CompositeResidue)
    }

    /// Table-style text: `-1 * 2^8 * 229^2`; exponent 1 prints bare.
    pub fn to_text(&self) -> String {
        let mut parts = Vec::new();
        if self.sign < 0 {
            parts.push("-1".to_string());
        }
        for e in &self.entries {
            if e.exp == 1 {
                parts.push(e.base.to_string());
            } else {
                parts.push(format!("{}^{}", e.base, e.exp));
            }
        }
        if parts.is_empty() {
            return "1".to_string();
        }
        parts.join(" * ")
    }

    /// Parses the `to_text` format. Certainty flags are re-derived by a
    /// primality test on each base, so round-trips are semantically faithful
    /// even though the flags are not written out.
    pub fn from_text(s: &str) -> Result<FactorList> {
        let mut sign: i8 = 1;
        let mut entries: Vec<FactorEntry> = Vec::new();
        for raw in s.split('*') {
            let tok = raw.trim();
            if tok.is_empty() {
                return Err(Error::Parse(format!("empty factor term in {s:?}")));
            }
            let (base_s, exp_s) = match tok.split_once('^') {
                Some((b, e)) => (b.trim(), Some(e.trim())),
                None => (tok, None),
            };
            let base: BigInt = base_s
                .parse()
                .map_err(|_| Error::Parse(format!("bad factor base {base_s:?}")))?;
            let exp: u32 = match exp_s {
                Some(e) => e
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent {e:?}")))?,
                None => 1,
            };
            if exp == 0 {
                return Err(Error::Parse("zero exponent".into()));
            }
            if base.is_zero() {
                return Err(Error::Parse("zero factor base".into()));
            }
            if base.is_negative() {
                if exp % 2 == 1 {
                    sign = -sign;
                }
                let abs = -&base;
                if !abs.is_one() {
                    entries.push(FactorEntry { base: abs, exp, certainty: Certainty::PrimeCertified });
                }
            } else if !base.is_one() {
                entries.push(FactorEntry { base, exp, certainty: Certainty::PrimeCertified });
            }
        }
        // Normalize: sort, merge duplicates, re-derive certainty.
        entries.sort_by(|a, b| a.base.cmp(&b.base));
        let mut merged: Vec<FactorEntry> = Vec::new();
        for e in entries {
            match merged.last_mut() {
                Some(last) if last.base == e.base => last.exp += e.exp,
                _ => merged.push(e),
            }
        }
        for e in &mut merged {
            e.certainty = match primality(&e.base) {
                Primality::Prime => Certainty::PrimeCertified,
                Primality::ProbablePrime => Certainty::ProbablePrime,
                Primality::Composite => Certainty::CompositeResidue,
            };
        }
        Ok(FactorList { sign, entries: merged })
    }
}

impl fmt::Display for FactorList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

// --- Primality ---

fn mulmod64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc: u64 = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod64(acc, base, m);
        }
        base = mulmod64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Strong-probable-prime test to base `a`; `true` means `n` survives.
fn sprp64(n: u64, a: u64) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    let mut x = powmod64(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mulmod64(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic for all n < 2^64: this base set has no strong pseudoprime
/// below 3.3 * 10^24.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    MR_BASES.iter().all(|&a| sprp64(n, a))
}

fn sprp_big(n: &BigUint, a: &BigUint) -> bool {
    let one = BigUint::one();
    let nm1 = n - &one;
    let a = a % n;
    if a.is_zero() {
        return true;
    }
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    let mut x = a.modpow(&d, n);
    if x.is_one() || x == nm1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == nm1 {
            return true;
        }
    }
    false
}

/// Classifies `n`: deterministic below 2^64, 36-round strong-probable-prime
/// (12 fixed plus 24 seeded-random bases) beyond.
pub fn primality(n: &BigInt) -> Primality {
    if n.sign() != Sign::Plus {
        return Primality::Composite;
    }
    let m = n.magnitude();
    if let Some(small) = m.to_u64() {
        return if is_prime_u64(small) { Primality::Prime } else { Primality::Composite };
    }
    for p in MR_BASES {
        if (m % BigUint::from(p)).is_zero() {
            return Primality::Composite;
        }
        if !sprp_big(m, &BigUint::from(p)) {
            return Primality::Composite;
        }
    }
    // Seed from the number itself so reruns agree.
    let mut seed = [0u8; 32];
    for (i, b) in m.to_bytes_le().iter().enumerate() {
        seed[i % 32] ^= *b;
    }
    let mut rng = ChaCha8Rng::from_seed(seed);
    let lo = BigUint::from(2u32);
    let hi = m - BigUint::from(2u32);
    for _ in 0..24 {
        let a = rng.gen_biguint_range(&lo, &hi);
        if !sprp_big(m, &a) {
            return Primality::Composite;
        }
    }
    Primality::ProbablePrime
}

pub fn is_prime(n: &BigInt) -> bool {
    primality(n) != Primality::Composite
}

// --- Factorization ---

const TRIAL_BOUND: u64 = 100_000;

/// Sieved primes up to 100000, shared by trial division and prime scans.
pub fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_BOUND as usize;
        let mut sieve = vec![true; n + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= n {
            if sieve[i] {
                let mut j = i * i;
                while j <= n {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        (2..=n).filter(|&i| sieve[i]).map(|i| i as u64).collect()
    })
}

/// Brent-cycle Pollard rho on a u64 composite. Returns a nontrivial factor,
/// or `None` when the iteration budget runs out.
fn rho_u64(n: u64, budget: &mut u64) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    let mut c: u64 = 1;
    loop {
        let f = |x: u64| (mulmod64(x, x, n) + c) % n;
        let mut x: u64 = 2;
        let mut y: u64 = 2;
        let mut d: u64 = 1;
        while d == 1 {
            if *budget == 0 {
                return None;
            }
            *budget -= 1;
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return Some(d);
        }
        c += 1;
        if c > 20 {
            return None;
        }
    }
}

/// Brent-cycle Pollard rho on a BigUint composite with batched GCDs.
fn rho_big(n: &BigUint, budget: &mut u64) -> Option<BigUint> {
    if (n % 2u32).is_zero() {
        return Some(BigUint::from(2u32));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x4d69_7375_7265_7769);
    for _attempt in 0..20 {
        let c = rng.gen_biguint_below(n);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = rng.gen_biguint_below(n);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        const BATCH: u64 = 128;
        'outer: while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                if *budget == 0 {
                    return None;
                }
                *budget -= 1;
                y = f(&y);
            }
            let mut k: u64 = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let lim = BATCH.min(r - k);
                for _ in 0..lim {
                    if *budget == 0 {
                        return None;
                    }
                    *budget -= 1;
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += lim;
            }
            r *= 2;
            if r > 1 << 40 {
                break 'outer;
            }
        }
        if g == *n {
            // Batch overshot: retry the last block one step at a time.
            loop {
                if *budget == 0 {
                    return None;
                }
                *budget -= 1;
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && g != *n {
            return Some(g);
        }
    }
    None
}

/// Factors `n` with bounded effort. Trial division to 10^5 first, then rho
/// splitting with `effort` total iterations; anything still unsplit lands in
/// a single composite-residue entry, so the product always reconstructs `n`.
pub fn factor_int(n: &BigInt, effort: u64) -> Result<FactorList> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let sign: i8 = if n.is_negative() { -1 } else { 1 };
    let mut m = n.magnitude().clone();
    let mut primes: Vec<(BigUint, u32, Certainty)> = Vec::new();

    for &p in small_primes() {
        if m.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > m {
            break;
        }
        let mut e = 0u32;
        loop {
            let (q, r) = m.div_rem(&pb);
            if r.is_zero() {
                m = q;
                e += 1;
            } else {
                break;
            }
        }
        if e > 0 {
            primes.push((pb, e, Certainty::PrimeCertified));
        }
    }

    let mut budget = effort;
    let mut composites: Vec<BigUint> = Vec::new();
    let mut stack: Vec<BigUint> = if m.is_one() { vec![] } else { vec![m] };
    while let Some(x) = stack.pop() {
        match primality(&BigInt::from(x.clone())) {
            Primality::Prime => {
                push_prime(&mut primes, x, Certainty::PrimeCertified);
                continue;
            }
            Primality::ProbablePrime => {
                push_prime(&mut primes, x, Certainty::ProbablePrime);
                continue;
            }
            Primality::Composite => {}
        }
        // Perfect powers split for free and matter for rho-resistant squares.
        if let Some((root, k)) = perfect_power(&x) {
            for _ in 0..k {
                stack.push(root.clone());
            }
            continue;
        }
        let split = match x.to_u64() {
            Some(small) => rho_u64(small, &mut budget).map(BigUint::from),
            None => rho_big(&x, &mut budget),
        };
        match split {
            Some(d) => {
                let q = &x / &d;
                stack.push(d);
                stack.push(q);
            }
            None => composites.push(x),
        }
    }

    let mut entries: Vec<FactorEntry> = primes
        .into_iter()
        .map(|(base, exp, certainty)| FactorEntry {
            base: BigInt::from(base),
            exp,
            certainty,
        })
        .collect();
    if !composites.is_empty() {
        let all_equal = composites.windows(2).all(|w| w[0] == w[1]);
        let (base, exp) = if all_equal {
            (composites[0].clone(), composites.len() as u32)
        } else {
            (composites.iter().product::<BigUint>(), 1)
        };
        entries.push(FactorEntry {
            base: BigInt::from(base),
            exp,
            certainty: Certainty::CompositeResidue,
        });
    }
    entries.sort_by(|a, b| a.base.cmp(&b.base));
    Ok(FactorList { sign, entries })
}

fn push_prime(primes: &mut Vec<(BigUint, u32, Certainty)>, p: BigUint, c: Certainty) {
    for (base, exp, _) in primes.iter_mut() {
        if *base == p {
            *exp += 1;
            return;
        }
    }
    primes.push((p, 1, c));
}

/// `Some((r, k))` with `r^k = n`, k >= 2, when n is a perfect power.
fn perfect_power(n: &BigUint) -> Option<(BigUint, u32)> {
    let bits = n.bits();
    for k in (2..=bits.max(2)).rev() {
        let k32 = k as u32;
        let root = n.nth_root(k32);
        if num_traits::Pow::pow(&root, k32) == *n {
            return Some((root, k32));
        }
    }
    None
}

/// Largest e with p^e dividing n. Rejects n = 0 and non-prime p.
pub fn valuation(n: &BigInt, p: &BigInt) -> Result<u32> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let mut e = 0u32;
    let mut m = n.magnitude().clone();
    let pm = p.magnitude();
    loop {
        let (q, r) = m.div_rem(pm);
        if r.is_zero() {
            m = q;
            e += 1;
        } else {
            return Ok(e);
        }
    }
}

/// True iff the claimed list multiplies back to `n` and every base not
/// flagged composite-residue passes the primality test.
pub fn verify_factorization(n: &BigInt, claimed: &FactorList) -> bool {
    if claimed.value() != *n {
        return false;
    }
    claimed
        .entries
        .iter()
        .all(|e| e.certainty == Certainty::CompositeResidue || is_prime(&e.base))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primality() {
        assert!(!is_prime_u64(0));
        assert!(!is_prime_u64(1));
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(3));
        assert!(!is_prime_u64(4));
        assert!(is_prime_u64(2551));
        assert!(!is_prime_u64(58673));
        assert!(is_prime_u64(24554691821639909));
    }

    #[test]
    fn perfect_power_detection() {
        assert_eq!(
            perfect_power(&BigUint::from(729u32)),
            Some((BigUint::from(3u32), 6))
        );
        assert_eq!(perfect_power(&BigUint::from(10u32)), None);
    }

    #[test]
    fn factor_back_to_value() {
        let n = BigInt::from(-58673);
        let f = factor_int(&n, 10_000).unwrap();
        assert_eq!(f.value(), n);
        assert_eq!(f.to_text(), "-1 * 23 * 2551");
    }
}
