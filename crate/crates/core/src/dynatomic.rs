//! Critical-orbit polynomials of the unicritical family z^d + c.
//!
//! Everything here lives in Z[c]: the iterates f^n(0), the periodic and
//! preperiodic dynatomic polynomials specialized at the critical point, the
//! Gleason polynomials G_d(m, n) whose roots are the Misiurewicz parameters
//! of preperiod m and period n, and the closed-form count of those roots.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exactpoly::IntPoly;

/// Variable tag used for every polynomial produced by this module.
pub const PARAM_VAR: &str = "c";

/// Preperiod m >= 0 and period n >= 1 of a critical orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PeriodPair {
    pub m: u32,
    pub n: u32,
}

impl PeriodPair {
    /// Panics if n = 0; a period is always at least 1.
    pub fn new(m: u32, n: u32) -> Self {
        assert!(n >= 1, "period must be at least 1");
        PeriodPair { m, n }
    }
}

/// A Gleason polynomial together with the data that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GleasonResult {
    pub d: u32,
    pub pair: PeriodPair,
    pub poly: IntPoly,
    /// True when m != 0 and n | (m - 1): the case where the raw preperiodic
    /// dynatomic polynomial carries an extra factor of the periodic one to
    /// the power d - 1.
    pub special_case: bool,
}

/// Degree budget for iterate construction; degrees grow as d^(n-1).
///
/// Reads MISIUREWICZ_RESOURCE_CAP on every call so long-running tools can
/// raise it without recompiling. Defaults to 10^6.
pub fn resource_cap() -> u64 {
    std::env::var("MISIUREWICZ_RESOURCE_CAP")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(1_000_000)
}

fn iterate_cache() -> &'static Mutex<HashMap<(u32, u32), IntPoly>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), IntPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// f_{d,c}^n(0) via P_1 = c, P_{k+1} = P_k^d + c. Degree d^(n-1).
///
/// Results are memoized per (d, n) behind a mutex, so repeated Gleason
/// constructions share work.
pub fn critical_iterate(d: u32, n: u32) -> Result<IntPoly> {
    assert!(d >= 2, "map degree must be at least 2");
    assert!(n >= 1, "iterate index must be at least 1");
    let requested = (d as u64).checked_pow(n - 1).unwrap_or(u64::MAX);
    let cap = resource_cap();
    if requested > cap {
        return Err(Error::ResourceCap { requested, cap });
    }
    let mut cache = iterate_cache().lock().unwrap();
    if let Some(p) = cache.get(&(d, n)) {
        return Ok(p.clone());
    }
    let c = IntPoly::identity(PARAM_VAR);
    let mut k = 1u32;
    let mut p = c.clone();
    for j in (2..n).rev() {
        if let Some(q) = cache.get(&(d, j)) {
            k = j;
            p = q.clone();
            break;
        }
    }
    while k < n {
        p = &p.pow(d) + &c;
        k += 1;
        cache.insert((d, k), p.clone());
    }
    Ok(p)
}

/// Standard Mobius function.
pub fn mobius(n: u32) -> i32 {
    assert!(n >= 1, "mobius argument must be at least 1");
    let mut n = n;
    let mut factors = 0u32;
    let mut p = 2u32;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            factors += 1;
        }
        p += 1;
    }
    if n > 1 {
        factors += 1;
    }
    if factors % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Divisors of `n` in ascending order.
pub fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|k| n % k == 0).collect()
}

/// Splits a Mobius product over the divisors of n into numerator and
/// denominator, then divides exactly. `term(k)` supplies the k-th factor.
fn mobius_quotient<F>(n: u32, mut term: F) -> Result<IntPoly>
where
    F: FnMut(u32) -> Result<IntPoly>,
{
    let mut num = IntPoly::constant(PARAM_VAR, 1);
    let mut den = IntPoly::constant(PARAM_VAR, 1);
    for k in divisors(n) {
        match mobius(n / k) {
            1 => num = &num * &term(k)?,
            -1 => den = &den * &term(k)?,
            _ => {}
        }
    }
    num.exact_div(&den)
}

/// The n-th dynatomic polynomial of f_{d,c} evaluated at the critical point:
/// prod_{k | n} f^k(0)^{mu(n/k)}, exact in Z[c].
pub fn dynatomic_periodic(d: u32, n: u32) -> Result<IntPoly> {
    assert!(d >= 2, "map degree must be at least 2");
    assert!(n >= 1, "period must be at least 1");
    mobius_quotient(n, |k| critical_iterate(d, k))
}

/// f^j(0) with the convention f^0(0) = 0.
fn iterate_or_zero(d: u32, j: u32) -> Result<IntPoly> {
    if j == 0 {
        Ok(IntPoly::zero(PARAM_VAR))
    } else {
        critical_iterate(d, j)
    }
}

/// F_k = (f^{m+k}(0) - f^m(0)) / (f^{m+k-1}(0) - f^{m-1}(0)), a polynomial
/// in c for every m >= 1, k >= 1.
pub fn f_k_poly(d: u32, m: u32, k: u32) -> Result<IntPoly> {
    assert!(d >= 2, "map degree must be at least 2");
    assert!(m >= 1, "preperiod must be at least 1 here");
    assert!(k >= 1, "index must be at least 1");
    let num = &critical_iterate(d, m + k)? - &critical_iterate(d, m)?;
    let den = &iterate_or_zero(d, m + k - 1)? - &iterate_or_zero(d, m - 1)?;
    num.exact_div(&den)
}

/// The generalized dynatomic polynomial at the critical point for preperiod
/// m >= 1 and period n: prod_{k | n} F_k^{mu(n/k)}.
pub fn dynatomic_preperiodic(d: u32, m: u32, n: u32) -> Result<IntPoly> {
    assert!(d >= 2, "map degree must be at least 2");
    assert!(m >= 1, "preperiod must be at least 1 here");
    assert!(n >= 1, "period must be at least 1");
    mobius_quotient(n, |k| f_k_poly(d, m, k))
}

/// The Gleason polynomial G_d(m, n), whose roots are exactly the (m, n)
/// Misiurewicz parameters. For m = 0 this is the periodic dynatomic
/// polynomial; for m >= 1 the preperiodic one, with an exact division by
/// dynatomic_periodic^(d-1) when n | (m - 1).
pub fn gleason(d: u32, m: u32, n: u32) -> Result<GleasonResult> {
    let pair = PeriodPair::new(m, n);
    assert!(d >= 2, "map degree must be at least 2");
    if m == 0 {
        let poly = dynatomic_periodic(d, n)?;
        return Ok(GleasonResult { d, pair, poly, special_case: false });
    }
    let raw = dynatomic_preperiodic(d, m, n)?;
    let special_case = (m - 1) % n == 0;
    let poly = if special_case {
        let periodic = dynatomic_periodic(d, n)?;
        raw.exact_div(&periodic.pow(d - 1))?
    } else {
        raw
    };
    Ok(GleasonResult { d, pair, poly, special_case })
}

/// Number of (m, n) Misiurewicz points of z^d + c, counted with multiplicity
/// one (they are all simple). Matches deg G_d(m, n).
///
/// The inner sum runs over the divisors k of n.
pub fn misiurewicz_count(d: u32, m: u32, n: u32) -> BigInt {
    assert!(d >= 2, "map degree must be at least 2");
    assert!(n >= 1, "period must be at least 1");
    let dd = BigInt::from(d);
    let mut nu = BigInt::from(0);
    for k in divisors(n) {
        nu += BigInt::from(mobius(n / k)) * dd.pow(k - 1);
    }
    if m == 0 {
        return nu;
    }
    let shell = if (m - 1) % n == 0 {
        dd.pow(m) - dd.pow(m - 1) - &dd + 1
    } else {
        dd.pow(m) - dd.pow(m - 1)
    };
    shell * nu
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mobius_small_values() {
        let expected = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
        for (i, &e) in expected.iter().enumerate() {
            assert_eq!(mobius(i as u32 + 1), e);
        }
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(210), 1);
    }

    #[test]
    fn divisors_ordered() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
    }

    #[test]
    fn cap_rejects_huge_iterate() {
        match critical_iterate(2, 40) {
            Err(Error::ResourceCap { requested, cap }) => {
                assert_eq!(requested, 1u64 << 39);
                assert_eq!(cap, resource_cap());
            }
            other => panic!("expected resource cap error, got {other:?}"),
        }
    }
}
