//! Transversality in positive characteristic: discriminants of Gleason
//! polynomials, ramification bookkeeping mod p, and the finite-field
//! dynamical searches that locate the primes where critical orbits collide.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::dynatomic::{critical_iterate, gleason, mobius, PARAM_VAR};
use crate::error::{Error, Result};
use crate::exactpoly::IntPoly;
use crate::finitefield::{reduce_mod_p, ExtField, Field, FieldPoly, PrimeField};
use crate::intfactor::small_primes;

/// A parameter in a finite field whose critical orbit under z^d + c returns
/// to the origin with vanishing derivative: a transversality failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransFailure {
    pub d: u32,
    pub n: u32,
    pub p: u64,
    /// Extension degree: the failure lives in F_{p^k}.
    pub k: u32,
    /// Canonical text of the parameter value.
    pub c: String,
    pub minimal_period: u32,
}

impl TransFailure {
    /// One scan row: d, n, p, k, c, period.
    pub fn tsv_row(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}",
            self.d, self.n, self.p, self.k, self.c, self.minimal_period
        )
    }
}

/// Ramification data of a Gleason factor mod p, with the valuation bound
/// sum_i (e_i - 1) f_i it implies for the discriminant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamificationReport {
    pub p: u64,
    /// (e_i, f_i) per irreducible factor mod p: multiplicity and degree.
    pub pairs: Vec<(u32, u32)>,
    pub lower_bound: u32,
    pub observed_valuation: u32,
    /// True when every e_i is coprime to p; then the bound is attained.
    pub tame: bool,
}

/// D_d(m, n) = Disc(G_d(m, n)), with the convention Disc = 1 in degree <= 1.
pub fn disc_gleason(d: u32, m: u32, n: u32) -> Result<BigInt> {
    let g = gleason(d, m, n)?.poly;
    match g.degree() {
        Some(deg) if deg >= 2 => g.discriminant(),
        _ => Ok(BigInt::one()),
    }
}

/// One step of F_{d,c}(x, y) = (x^d + c, d x^{d-1} y + 1) over any field.
/// The second coordinate tracks d/dc of the first along the critical orbit.
pub fn step_2d<F: Field>(
    fld: &F,
    d: u32,
    c: &F::Elem,
    state: &(F::Elem, F::Elem),
) -> (F::Elem, F::Elem) {
    let (x, y) = state;
    let xd1 = fld.pow(x, &BigUint::from(d - 1));
    let nx = fld.add(&fld.mul(&xd1, x), c);
    let dy = fld.mul(&fld.from_u64(d as u64), &xd1);
    let ny = fld.add(&fld.mul(&dy, y), &fld.one());
    (nx, ny)
}

/// Least n <= n_max with F_{d,c}^n(0, 0) = (0, 0), if any.
pub fn min_period_2d<F: Field>(fld: &F, d: u32, c: &F::Elem, n_max: u32) -> Option<u32> {
    let mut state = (fld.zero(), fld.zero());
    for i in 1..=n_max {
        state = step_2d(fld, d, c, &state);
        if fld.is_zero(&state.0) && fld.is_zero(&state.1) {
            return Some(i);
        }
    }
    None
}

/// Exhaustive search over all c in F_{p^k} for every prime p <= p_max,
/// recording parameters whose minimal (0,0)-return period lies in n_range.
/// Parallel over primes; output sorted by (p, n, element index).
pub fn scan_primes(
    d: u32,
    n_range: std::ops::RangeInclusive<u32>,
    p_max: u64,
    k: u32,
) -> Vec<TransFailure> {
    assert!(d >= 2, "map degree must be at least 2");
    assert!(k == 1 || k == 2, "only extension degrees 1 and 2 are scanned");
    assert!(
        p_max <= 100_000,
        "scan is budgeted for p_max <= 100000; raise the sieve first"
    );
    let primes: Vec<u64> = small_primes().iter().copied().take_while(|&q| q <= p_max).collect();
    let mut rows: Vec<(u64, u32, u64, TransFailure)> = primes
        .into_par_iter()
        .flat_map_iter(|p| scan_one_prime(d, &n_range, p, k))
        .collect();
    rows.sort_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)));
    rows.into_iter().map(|(_, _, _, f)| f).collect()
}

fn scan_one_prime(
    d: u32,
    n_range: &std::ops::RangeInclusive<u32>,
    p: u64,
    k: u32,
) -> Vec<(u64, u32, u64, TransFailure)> {
    let n_max = *n_range.end();
    let mut out = Vec::new();
    if k == 1 {
        let fld = PrimeField::new(p).expect("sieve yields primes");
        for idx in 0..p {
            let c = fld.elem_from_index(idx);
            if let Some(n0) = min_period_2d(&fld, d, &c, n_max) {
                if n_range.contains(&n0) {
                    let fail = TransFailure {
                        d,
                        n: n0,
                        p,
                        k,
                        c: fld.elem_to_string(&c),
                        minimal_period: n0,
                    };
                    out.push((p, n0, idx, fail));
                }
            }
        }
    } else {
        let fld = ExtField::new(p, 2).expect("sieve yields primes");
        for idx in 0..p * p {
            let c = fld.elem_from_index(idx);
            if let Some(n0) = min_period_2d(&fld, d, &c, n_max) {
                if n_range.contains(&n0) {
                    let fail = TransFailure {
                        d,
                        n: n0,
                        p,
                        k,
                        c: fld.elem_to_string(&c),
                        minimal_period: n0,
                    };
                    out.push((p, n0, idx, fail));
                }
            }
        }
    }
    out
}

/// One step of R_d(x, y, z) = (y, y^d + y - x^d, d x^{d-1} z + 1).
pub fn step_3d<F: Field>(
    fld: &F,
    d: u32,
    state: &(F::Elem, F::Elem, F::Elem),
) -> (F::Elem, F::Elem, F::Elem) {
    let (x, y, z) = state;
    let xd1 = fld.pow(x, &BigUint::from(d - 1));
    let xd = fld.mul(&xd1, x);
    let yd = fld.pow(y, &BigUint::from(d));
    let ny = fld.sub(&fld.add(&yd, y), &xd);
    let dz = fld.mul(&fld.from_u64(d as u64), &xd1);
    let nz = fld.add(&fld.mul(&dz, z), &fld.one());
    (y.clone(), ny, nz)
}

fn poly_pow<F: Field>(base: &FieldPoly<F>, e: u32) -> FieldPoly<F> {
    let mut result = FieldPoly::constant(base.field().clone(), base.var(), 1);
    let mut sq = base.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul(&sq);
        }
        e >>= 1;
        if e > 0 {
            sq = sq.mul(&sq);
        }
    }
    result
}

/// G_d(0, n) reduced mod p, built directly in F_p[c] so the integer
/// coefficients of high iterates are never materialized.
pub fn gleason_mod_p(p: u64, d: u32, n: u32) -> Result<FieldPoly<PrimeField>> {
    assert!(d >= 2, "map degree must be at least 2");
    assert!(n >= 1, "period must be at least 1");
    let fld = PrimeField::new(p)?;
    let c = FieldPoly::identity(fld.clone(), PARAM_VAR);
    let mut iter = c.clone();
    let mut iterates = vec![c.clone()];
    for _ in 2..=n {
        iter = poly_pow(&iter, d).add(&c);
        iterates.push(iter.clone());
    }
    let mut num = FieldPoly::constant(fld.clone(), PARAM_VAR, 1);
    let mut den = num.clone();
    for k in 1..=n {
        if n % k != 0 {
            continue;
        }
        let term = &iterates[k as usize - 1];
        match mobius(n / k) {
            1 => num = num.mul(term),
            -1 => den = den.mul(term),
            _ => {}
        }
    }
    num.exact_div(&den)
}

fn lift_to_ext(poly: &FieldPoly<PrimeField>, ext: &ExtField) -> FieldPoly<ExtField> {
    let coeffs: Vec<Vec<u64>> = poly.coeffs().iter().map(|&c| ext.from_u64(c)).collect();
    FieldPoly::from_elems(ext.clone(), poly.var(), coeffs)
}

/// Cross-checks the discriminant criterion against the dynamical one at a
/// single prime: multiple roots of G_d(0, n) mod p exist iff some parameter
/// in F_p-bar has (0, 0) of minimal period n. Requires p coprime to d.
///
/// When gcd(G, G') is constant, an exhaustive F_p sweep confirms the absence
/// of rational failures; otherwise every root of the gcd, found in the
/// splitting field of its irreducible factors, must have minimal period
/// exactly n.
pub fn reform_equivalence_check(d: u32, p: u64, n: u32) -> Result<bool> {
    assert!(d as u64 % p != 0, "requires p coprime to d");
    let g = gleason_mod_p(p, d, n)?;
    let s = g.gcd(&g.derivative());
    if s.degree() == Some(0) {
        let fld = PrimeField::new(p)?;
        for idx in 0..p {
            let c = fld.elem_from_index(idx);
            if min_period_2d(&fld, d, &c, n) == Some(n) {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    let mut any_root = false;
    for (w, _) in s.factor(0).factors {
        let e = w.degree().expect("gcd factors are nonconstant") as u32;
        if e == 1 {
            let fld = w.field().clone();
            let root = fld.neg(&w.coeff(0));
            any_root = true;
            if min_period_2d(&fld, d, &root, n) != Some(n) {
                return Ok(false);
            }
        } else {
            let ext = ExtField::new(p, e)?;
            let lifted = lift_to_ext(&w, &ext);
            let roots = lifted.roots_with_multiplicity();
            if roots.len() != e as usize {
                return Err(Error::Internal("irreducible factor must split in its own degree"));
            }
            for (root, _) in roots {
                any_root = true;
                if min_period_2d(&ext, d, &root, n) != Some(n) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(any_root)
}

/// Factors a Gleason component mod p and compares the tame lower bound
/// sum (e_i - 1) f_i with an observed discriminant valuation.
pub fn ramification_report(
    g_factor: &IntPoly,
    p: u64,
    observed_valuation: u32,
) -> Result<RamificationReport> {
    let reduced = reduce_mod_p(g_factor, p)?;
    if reduced.degree() != g_factor.degree() {
        return Err(Error::LeadingCoeffVanishes(p));
    }
    let fact = reduced.factor(0);
    let pairs: Vec<(u32, u32)> = fact
        .factors
        .iter()
        .map(|(w, e)| (*e, w.degree().expect("factors are nonconstant") as u32))
        .collect();
    let lower_bound = pairs.iter().map(|&(e, f)| (e - 1) * f).sum();
    let tame = pairs.iter().all(|&(e, _)| e as u64 % p != 0);
    Ok(RamificationReport { p, pairs, lower_bound, observed_valuation, tame })
}

/// Rewrites f_{d,c}^n(0)/c as a polynomial h(t) with t = c^{d-1}; every
/// exponent in f^n(0)/c is a multiple of d - 1, so the substitution is a
/// relabeling.
pub fn collapse_to_t(d: u32, n: u32) -> Result<IntPoly> {
    let f = critical_iterate(d, n)?;
    let c = IntPoly::identity(PARAM_VAR);
    let q = f.exact_div(&c)?;
    let step = (d - 1) as usize;
    if step == 1 {
        return Ok(q.rename("t"));
    }
    let deg = q.degree().expect("iterate quotient is nonzero");
    let mut out = vec![BigInt::zero(); deg / step + 1];
    for (j, coeff) in q.coeffs().iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        if j % step != 0 {
            return Err(Error::PatternViolation(format!(
                "exponent {j} in f^{n}(0)/c is not a multiple of {step}"
            )));
        }
        out[j / step] = coeff.clone();
    }
    Ok(IntPoly::new("t", out))
}

/// Res(G_d(0, n), G_d(0, m)) exactly; distinct-period Gleason polynomials
/// are coprime, so callers expect +-1.
pub fn resultant_coprime_check(d: u32, n: u32, m: u32) -> Result<BigInt> {
    assert!(n != m, "periods must differ");
    let gn = gleason(d, 0, n)?.poly;
    let gm = gleason(d, 0, m)?.poly;
    gn.resultant(&gm)
}

/// Checks Disc(f^n(0)) = prod_{k | n} D_d(0, k) exactly.
pub fn disc_multiplicativity_check(d: u32, n: u32) -> Result<bool> {
    let f = critical_iterate(d, n)?;
    let lhs = if f.degree() == Some(1) { BigInt::one() } else { f.discriminant()? };
    let mut rhs = BigInt::one();
    for k in 1..=n {
        if n % k == 0 {
            rhs *= disc_gleason(d, 0, k)?;
        }
    }
    Ok(lhs == rhs)
}

/// Checks that A_n = Disc(f^n(0)) is a divisibility sequence up to n_max:
/// m | n implies A_m | A_n.
pub fn divisibility_sequence_check(d: u32, n_max: u32) -> Result<bool> {
    let mut a = Vec::with_capacity(n_max as usize + 1);
    for n in 1..=n_max {
        let f = critical_iterate(d, n)?;
        let disc = if f.degree() == Some(1) { BigInt::one() } else { f.discriminant()? };
        a.push(disc);
    }
    for n in 1..=n_max as usize {
        for m in 1..n {
            if n % m == 0 {
                if a[m - 1].is_zero() {
                    return Ok(false);
                }
                if (&a[n - 1] % &a[m - 1]) != BigInt::zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
