//! Bicritical cubic family g_{a,v}(z) = z^3 - 3a^2 z + (2a^3 + v).
//!
//! The critical points are +a and -a and the critical value at +a is v.
//! `t_poly` builds the polynomial T(m,n,±a) in Z[a,v] whose vanishing says
//! the chosen critical point enters an n-cycle after exactly m steps;
//! `pcf_solve` intersects two of them (one per critical point) and returns
//! the finitely many PCF parameters with portraits and Jacobian data.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;

use crate::dynatomic::{self, PeriodPair};
use crate::error::{Error, Result};
use crate::exactpoly::{BiPoly, IntPoly};

/// Parameter variable names used by every polynomial in this module.
pub const A_VAR: &str = "a";
pub const V_VAR: &str = "v";

/// Orbit points beyond this radius are treated as escaping.
const ESCAPE_RADIUS: f64 = 1e6;
/// Relative residual bound for accepting a recovered (a, v) pair.
const RESIDUAL_REL_TOL: f64 = 1e-6;
/// Two recovered v values closer than this (relatively) are one root.
const DEDUPE_TOL: f64 = 1e-8;

/// Which critical point of g_{a,v} an orbit starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CriticalSign {
    Plus,
    Minus,
}

impl CriticalSign {
    pub fn as_str(self) -> &'static str {
        match self {
            CriticalSign::Plus => "+a",
            CriticalSign::Minus => "-a",
        }
    }

    /// The starting point ±a as a polynomial in a.
    fn base_point(self) -> IntPoly {
        let a = IntPoly::identity(A_VAR);
        match self {
            CriticalSign::Plus => a,
            CriticalSign::Minus => a.scale(&BigInt::from(-1)),
        }
    }
}

/// Preperiodicity polynomial for one critical point of the cubic family.
#[derive(Debug, Clone)]
pub struct TPoly {
    pub pair: PeriodPair,
    pub sign: CriticalSign,
    pub poly: BiPoly,
    /// Set when m >= 1 and n | (m-1): the raw Mobius product was divided
    /// exactly once by T(0,n,±a).
    pub special_case: bool,
}

/// One point of the PCF variety, numerically isolated and annotated.
#[derive(Debug, Clone)]
pub struct PcfSolution {
    pub a: Complex64,
    pub v: Complex64,
    /// Radius of a disk around `a` certified to contain the eliminant root.
    pub error_radius: f64,
    /// Primitive eliminant Res_v(T1, T2) whose root this solution refines.
    pub eliminant: IntPoly,
    /// Detected preperiod/period of +a at (a, v).
    pub portrait_plus: PeriodPair,
    /// Detected preperiod/period of -a at (a, v).
    pub portrait_minus: PeriodPair,
    /// det d(T1,T2)/d(a,v) at the solution; |det| < 1e-6 flags multiplicity.
    pub jacobian_det: Complex64,
    /// Set by the a=0 exclusion rule; flagged rather than dropped so callers
    /// see the full variety.
    pub excluded: bool,
}

impl PcfSolution {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "a": [self.a.re, self.a.im],
            "v": [self.v.re, self.v.im],
            "portraits": [
                [self.portrait_plus.m, self.portrait_plus.n],
                [self.portrait_minus.m, self.portrait_minus.n],
            ],
            "jac": [self.jacobian_det.re, self.jacobian_det.im],
            "excluded": self.excluded,
            "eliminant": self.eliminant.to_text(),
        })
    }
}

fn g_cache() -> &'static Mutex<HashMap<(u32, CriticalSign), BiPoly>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, CriticalSign), BiPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// One application of g_{a,v} to a bivariate polynomial in (a, v).
fn apply_g(w: &BiPoly) -> Result<BiPoly> {
    let a = IntPoly::identity(A_VAR);
    let three_a2 = BiPoly::from_a_poly(a.pow(2).scale(&BigInt::from(3)), V_VAR);
    let crit_value = BiPoly::from_a_poly(a.pow(3).scale(&BigInt::from(2)), V_VAR)
        .try_add(&BiPoly::v_identity(A_VAR, V_VAR))?;
    let w3 = w.try_mul(w)?.try_mul(w)?;
    w3.try_sub(&three_a2.try_mul(w)?)?.try_add(&crit_value)
}

/// g^n(±a) as an element of Z[a,v], with the convention g^0(±a) = ±a.
///
/// Degrees grow like 3^n; requests past `MISIUREWICZ_RESOURCE_CAP` are
/// rejected up front. Intermediate iterates are cached.
pub fn g_iterate(n: u32, sign: CriticalSign) -> Result<BiPoly> {
    let cap = dynatomic::resource_cap();
    let requested = 3u64.checked_pow(n).unwrap_or(u64::MAX);
    if requested > cap {
        return Err(Error::ResourceCap { requested, cap });
    }
    let start = BiPoly::from_a_poly(sign.base_point(), V_VAR);
    if n == 0 {
        return Ok(start);
    }
    let mut cache = g_cache().lock().unwrap();
    let mut j = (1..=n).rev().find(|j| cache.contains_key(&(*j, sign))).unwrap_or(0);
    let mut cur = if j == 0 { start } else { cache[&(j, sign)].clone() };
    while j < n {
        cur = apply_g(&cur)?;
        j += 1;
        cache.insert((j, sign), cur.clone());
    }
    Ok(cur)
}

/// The exact quotient (g^{m+k} - g^m)/(g^{m+k-1} - g^{m-1}) along the orbit
/// of ±a, computed by the closed form F^2 + FG + G^2 - 3a^2 with
/// F = g^{m+k-1}(±a) and G = g^{m-1}(±a). No division is performed.
pub fn fk_bicritical(m: u32, k: u32, sign: CriticalSign) -> Result<BiPoly> {
    assert!(m >= 1 && k >= 1, "fk_bicritical needs m >= 1 and k >= 1");
    let f = g_iterate(m + k - 1, sign)?;
    let g = g_iterate(m - 1, sign)?;
    let three_a2 =
        BiPoly::from_a_poly(IntPoly::identity(A_VAR).pow(2).scale(&BigInt::from(3)), V_VAR);
    f.try_mul(&f)?
        .try_add(&f.try_mul(&g)?)?
        .try_add(&g.try_mul(&g)?)?
        .try_sub(&three_a2)
}

/// Mobius-weighted product over divisors: numerator and denominator are
/// accumulated separately, then divided exactly.
fn mobius_quotient_bi(n: u32, mut term: impl FnMut(u32) -> Result<BiPoly>) -> Result<BiPoly> {
    let mut num = BiPoly::constant(A_VAR, V_VAR, 1);
    let mut den = BiPoly::constant(A_VAR, V_VAR, 1);
    for k in dynatomic::divisors(n) {
        let t = term(k)?;
        match dynatomic::mobius(n / k) {
            1 => num = num.try_mul(&t)?,
            -1 => den = den.try_mul(&t)?,
            _ => {}
        }
    }
    num.exact_div(&den)
}

/// T(m,n,±a): the defining polynomial for ±a having preperiod exactly m and
/// exact period n. For m >= 1 with n | (m-1) the raw product is divisible by
/// T(0,n,±a) exactly once; the quotient is returned and flagged.
pub fn t_poly(m: u32, n: u32, sign: CriticalSign) -> Result<TPoly> {
    assert!(n >= 1, "period must be positive");
    let pair = PeriodPair::new(m, n);
    if m == 0 {
        let base = BiPoly::from_a_poly(sign.base_point(), V_VAR);
        let poly = mobius_quotient_bi(n, |k| g_iterate(k, sign)?.try_sub(&base))?;
        return Ok(TPoly { pair, sign, poly, special_case: false });
    }
    let raw = mobius_quotient_bi(n, |k| fk_bicritical(m, k, sign))?;
    let special_case = (m - 1) % n == 0;
    let poly = if special_case {
        let periodic = t_poly(0, n, sign)?.poly;
        raw.exact_div(&periodic)?
    } else {
        raw
    };
    Ok(TPoly { pair, sign, poly, special_case })
}

fn bigint_to_f64(b: &BigInt) -> f64 {
    b.to_f64().unwrap_or(if b.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

fn eval_intpoly(p: &IntPoly, z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in p.coeffs().iter().rev() {
        acc = acc * z + bigint_to_f64(c);
    }
    acc
}

fn eval_bipoly(p: &BiPoly, a: Complex64, v: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in p.coeffs_v().iter().rev() {
        acc = acc * v + eval_intpoly(c, a);
    }
    acc
}

/// Sum of |coefficient| monomials at (|a|, |v|); scales relative residuals.
fn abs_eval_bipoly(p: &BiPoly, a: Complex64, v: Complex64) -> f64 {
    let (ra, rv) = (a.norm(), v.norm());
    let mut acc = 0.0;
    for c in p.coeffs_v().iter().rev() {
        let mut inner = 0.0;
        for x in c.coeffs().iter().rev() {
            inner = inner * ra + bigint_to_f64(&x.abs());
        }
        acc = acc * rv + inner;
    }
    acc
}

fn rel_residual(p: &BiPoly, a: Complex64, v: Complex64) -> f64 {
    eval_bipoly(p, a, v).norm() / (1.0 + abs_eval_bipoly(p, a, v))
}

fn horner_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut d = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        d = d * z + p;
        p = p * z + c;
    }
    (p, d)
}

/// All complex roots of a polynomial given by ascending coefficients, found
/// by Aberth simultaneous iteration. Deterministic: fixed initial circle.
fn complex_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().map_or(false, |x| x.norm() == 0.0) {
        c.pop();
    }
    if c.len() <= 1 {
        return Ok(Vec::new());
    }
    let lead = c[c.len() - 1];
    for x in c.iter_mut() {
        *x /= lead;
    }
    let n = c.len() - 1;
    let radius = 1.0 + c[..n].iter().map(|x| x.norm()).fold(0.0_f64, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut max_step = 0.0_f64;
        for i in 0..n {
            let (p, d) = horner_with_derivative(&c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let newton = if d.norm() > 0.0 { p / d } else { p * 1e12 };
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() > 1e-300 {
                        sum += diff.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * sum;
            let step = if denom.norm() > 1e-300 { newton / denom } else { newton };
            z[i] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
        }
        if max_step < 1e-14 {
            break;
        }
    }
    Ok(z)
}

/// Newton refinement; returns the polished point and the last step size.
fn newton_polish(coeffs: &[Complex64], mut z: Complex64) -> (Complex64, f64) {
    let mut last = 0.0;
    for _ in 0..60 {
        let (p, d) = horner_with_derivative(coeffs, z);
        if d.norm() < 1e-300 {
            break;
        }
        let step = p / d;
        z -= step;
        last = step.norm();
        if last < 1e-15 * (1.0 + z.norm()) {
            break;
        }
    }
    (z, last)
}

fn intpoly_to_c(p: &IntPoly) -> Vec<Complex64> {
    p.coeffs().iter().map(|c| Complex64::new(bigint_to_f64(c), 0.0)).collect()
}

/// Quantized sort key making the output ordering reproducible across
/// rounding noise in the last bits.
fn sort_key(x: f64) -> f64 {
    (x * 1e12).round()
}

/// Signed Jacobian determinant det d(P,Q)/d(a,v) at a complex point.
pub fn jacobian_det(p: &BiPoly, q: &BiPoly, at: (Complex64, Complex64)) -> Complex64 {
    let (a, v) = at;
    let pa = eval_bipoly(&p.derivative_a(), a, v);
    let pv = eval_bipoly(&p.derivative_v(), a, v);
    let qa = eval_bipoly(&q.derivative_a(), a, v);
    let qv = eval_bipoly(&q.derivative_v(), a, v);
    pa * qv - pv * qa
}

fn g_eval(a: Complex64, v: Complex64, z: Complex64) -> Complex64 {
    z * z * z - 3.0 * a * a * z + 2.0 * a * a * a + v
}

fn portrait_of(a: Complex64, v: Complex64, z0: Complex64, n_max: u32, tol: f64) -> Result<PeriodPair> {
    let len = 2 * n_max as usize + 1;
    let mut orbit = Vec::with_capacity(len);
    let mut z = z0;
    for step in 0..len {
        if z.norm() > ESCAPE_RADIUS {
            return Err(Error::OrbitUnbounded(step as u32));
        }
        orbit.push(z);
        z = g_eval(a, v, z);
    }
    for n in 1..=n_max as usize {
        for m in 0..=n_max as usize {
            if (orbit[m + n] - orbit[m]).norm() < tol {
                return Ok(PeriodPair::new(m as u32, n as u32));
            }
        }
    }
    Err(Error::NoPeriodFound(n_max))
}

/// Numeric preperiod/period of both critical orbits of g_{a,v}. Scans n
/// ascending then m ascending, so the reported pair is minimal.
pub fn orbit_portrait(
    a: Complex64,
    v: Complex64,
    n_max: u32,
    tol: f64,
) -> Result<(PeriodPair, PeriodPair)> {
    let plus = portrait_of(a, v, a, n_max, tol)?;
    let minus = portrait_of(a, v, -a, n_max, tol)?;
    Ok((plus, minus))
}

fn is_constant(p: &BiPoly) -> bool {
    p.deg_v().unwrap_or(0) == 0 && p.deg_a().unwrap_or(0) == 0
}

/// Solves T(m1,n1,+a) = T(m2,n2,-a) = 0.
///
/// v is eliminated by a resultant; the primitive eliminant's roots are
/// isolated on its squarefree part, polished, and paired with v values read
/// off the lower-degree specialization. When n1 = n2 and both preperiods
/// satisfy n | (m-1), points with a ~ 0 whose v is a root of the unicritical
/// period-n1 polynomial for z^3 + v are flagged `excluded` (they coincide
/// with the one-critical-point family) but still returned.
pub fn pcf_solve(m1: u32, n1: u32, m2: u32, n2: u32, tol: f64) -> Result<Vec<PcfSolution>> {
    let t1 = t_poly(m1, n1, CriticalSign::Plus)?;
    let t2 = t_poly(m2, n2, CriticalSign::Minus)?;
    if is_constant(&t1.poly) || is_constant(&t2.poly) {
        return Ok(Vec::new());
    }
    let resultant = t1.poly.resultant_v(&t2.poly)?;
    if resultant.is_zero() {
        return Err(Error::Internal("pcf system has a common component"));
    }
    let eliminant = resultant.primitive_part();
    if eliminant.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let repeated = eliminant.gcd_poly(&eliminant.derivative())?;
    let radical = eliminant.exact_div(&repeated)?;
    let radical_c = intpoly_to_c(&radical);

    let mut a_roots = complex_roots(&radical_c)?;
    for r in a_roots.iter_mut() {
        *r = newton_polish(&radical_c, *r).0;
    }
    // Simple-root certification: disks of radius deg*|p/p'| must be disjoint.
    let deg = (radical_c.len() - 1) as f64;
    let mut radii = Vec::with_capacity(a_roots.len());
    for (i, &r) in a_roots.iter().enumerate() {
        let (p, d) = horner_with_derivative(&radical_c, r);
        let err = if d.norm() > 0.0 { deg * p.norm() / d.norm() } else { f64::INFINITY };
        let err = err.max(f64::EPSILON * (1.0 + r.norm()));
        let sep = a_roots
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, s)| (r - s).norm())
            .fold(f64::INFINITY, f64::min);
        if !err.is_finite() || 2.0 * err > sep {
            return Err(Error::IllConditioned(err));
        }
        radii.push(err);
    }

    // The exclusion rule applies only to matched-period tuples fixing a = 0.
    let rule_active = n1 == n2
        && (i64::from(m1) - 1).rem_euclid(i64::from(n1)) == 0
        && (i64::from(m2) - 1).rem_euclid(i64::from(n2)) == 0;
    let unicritical_roots = if rule_active {
        let g3 = dynatomic::gleason(3, 0, n1)?.poly;
        let mut roots = complex_roots(&intpoly_to_c(&g3))?;
        let g3c = intpoly_to_c(&g3);
        for r in roots.iter_mut() {
            *r = newton_polish(&g3c, *r).0;
        }
        roots
    } else {
        Vec::new()
    };

    // v comes from the lower v-degree factor; the other one filters.
    let (vsrc, vother) =
        if t2.poly.deg_v().unwrap_or(0) >= 1 { (&t2.poly, &t1.poly) } else { (&t1.poly, &t2.poly) };
    let portrait_nmax = (m1 + n1).max(m2 + n2).max(4) + 2;

    let solved: Result<Vec<Vec<PcfSolution>>> = a_roots
        .par_iter()
        .zip(radii.par_iter())
        .map(|(&a_star, &radius)| {
            let specialized: Vec<Complex64> =
                vsrc.coeffs_v().iter().map(|c| eval_intpoly(c, a_star)).collect();
            let mut kept: Vec<Complex64> = Vec::new();
            for v0 in complex_roots(&specialized)? {
                let v_star = newton_polish(&specialized, v0).0;
                if rel_residual(vother, a_star, v_star) > RESIDUAL_REL_TOL
                    || rel_residual(vsrc, a_star, v_star) > RESIDUAL_REL_TOL
                {
                    continue;
                }
                let dup = kept
                    .iter()
                    .any(|w| (w - v_star).norm() < DEDUPE_TOL * (1.0 + v_star.norm()));
                if !dup {
                    kept.push(v_star);
                }
            }
            kept.into_iter()
                .map(|v_star| {
                    let excluded = rule_active
                        && a_star.norm() < tol
                        && unicritical_roots.iter().any(|r| (r - v_star).norm() < tol);
                    let (portrait_plus, portrait_minus) =
                        orbit_portrait(a_star, v_star, portrait_nmax, tol)?;
                    Ok(PcfSolution {
                        a: a_star,
                        v: v_star,
                        error_radius: radius,
                        eliminant: eliminant.clone(),
                        portrait_plus,
                        portrait_minus,
                        jacobian_det: jacobian_det(&t1.poly, &t2.poly, (a_star, v_star)),
                        excluded,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect();
    let mut solutions: Vec<PcfSolution> = solved?.into_iter().flatten().collect();
    solutions.sort_by(|x, y| {
        let kx = (sort_key(x.a.re), sort_key(x.a.im), sort_key(x.v.re), sort_key(x.v.im));
        let ky = (sort_key(y.a.re), sort_key(y.a.im), sort_key(y.v.re), sort_key(y.v.im));
        kx.partial_cmp(&ky).unwrap()
    });
    Ok(solutions)
}
