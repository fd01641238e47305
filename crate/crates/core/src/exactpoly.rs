//! Exact univariate and bivariate polynomial arithmetic over arbitrary
//! precision integers, with subresultant-style GCD, resultants, and
//! discriminants.
//!
//! Conventions, fixed once here and relied on everywhere else:
//! - coefficients are stored dense, low-to-high, with a trimmed leading
//!   coefficient (the zero polynomial has an empty coefficient vector and
//!   degree `None`);
//! - `Res(A, B) = lc(A)^{deg B} * prod B(alpha_i)` over the roots of `A`,
//!   so e.g. `Res(v - a, v + a) = 2a`;
//! - `Disc(P) = (-1)^{n(n-1)/2} * Res(P, P') / lc(P)` for `n = deg P`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

fn trim<T: Zero>(coeffs: &mut Vec<T>) {
    while coeffs.last().map_or(false, |c| c.is_zero()) {
        coeffs.pop();
    }
}

/// Dense univariate polynomial over Z with a symbolic variable tag.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    var: String,
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    /// Builds a polynomial from low-to-high coefficients, trimming leading zeros.
    pub fn new(var: &str, coeffs: Vec<BigInt>) -> Self {
        let mut coeffs = coeffs;
        trim(&mut coeffs);
        IntPoly { var: var.to_string(), coeffs }
    }

    pub fn from_i64(var: &str, coeffs: &[i64]) -> Self {
        Self::new(var, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(var: &str) -> Self {
        IntPoly { var: var.to_string(), coeffs: Vec::new() }
    }

    pub fn constant(var: &str, c: impl Into<BigInt>) -> Self {
        Self::new(var, vec![c.into()])
    }

    /// The monomial `x` itself.
    pub fn identity(var: &str) -> Self {
        Self::from_i64(var, &[0, 1])
    }

    pub fn monomial(var: &str, coeff: impl Into<BigInt>, deg: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        coeffs[deg] = coeff.into();
        Self::new(var, coeffs)
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() { None } else { Some(self.coeffs.len() - 1) }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn leading_coeff(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map_or(false, |c| c.is_one())
    }

    fn check_var(&self, other: &Self) -> Result<()> {
        if self.var == other.var {
            Ok(())
        } else {
            Err(Error::VarMismatch(self.var.clone(), other.var.clone()))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_var(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + other.coeff(i));
        }
        Ok(Self::new(&self.var, coeffs))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_var(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) - other.coeff(i));
        }
        Ok(Self::new(&self.var, coeffs))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_var(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.var));
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Ok(Self::new(&self.var, coeffs))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(&self.var, self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::constant(&self.var, 1);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Horner evaluation at an integer point.
    pub fn evaluate(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn evaluate_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Formal derivative with respect to the polynomial's own variable.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero(&self.var);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        Self::new(&self.var, coeffs)
    }

    /// Substitution `self(inner(x))`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.check_var(inner)?;
        let mut acc = Self::zero(&self.var);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Self::constant(&self.var, c.clone());
        }
        Ok(acc)
    }

    /// Exact division over Z: returns `R` with `divisor * R = self`.
    ///
    /// `NotDivisible` signals a construction bug upstream; nothing is ever
    /// silently truncated.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        self.check_var(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(&self.var));
        }
        let dd = divisor.degree().unwrap();
        let dn = self.degree().unwrap();
        if dn < dd {
            return Err(Error::NotDivisible);
        }
        let dlc = divisor.leading_coeff();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); dn - dd + 1];
        for i in (0..=dn - dd).rev() {
            let lead = rem[i + dd].clone();
            if lead.is_zero() {
                continue;
            }
            let (q, r) = lead.div_rem(&dlc);
            if !r.is_zero() {
                return Err(Error::NotDivisible);
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &q * dc;
            }
            quot[i] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::NotDivisible);
        }
        Ok(Self::new(&self.var, quot))
    }

    /// Splits into sign, nonnegative content, and primitive part with
    /// positive leading coefficient; `sign * content * primitive = self`.
    /// The zero polynomial yields `(0, 0, 0)`.
    pub fn content_primitive(&self) -> (i8, BigInt, IntPoly) {
        if self.is_zero() {
            return (0, BigInt::zero(), self.clone());
        }
        let mut content = BigInt::zero();
        for c in &self.coeffs {
            content = content.gcd(c);
            if content.is_one() {
                break;
            }
        }
        let sign: i8 = if self.leading_coeff().is_negative() { -1 } else { 1 };
        let signed = if sign < 0 { -&content } else { content.clone() };
        let primitive = Self::new(
            &self.var,
            self.coeffs.iter().map(|c| c / &signed).collect(),
        );
        (sign, content, primitive)
    }

    pub fn primitive_part(&self) -> IntPoly {
        self.content_primitive().2
    }

    /// Primitive GCD over Q with integer coefficients and positive leading
    /// coefficient; input contents are irrelevant.
    pub fn gcd_poly(&self, other: &Self) -> Result<IntPoly> {
        self.check_var(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::BothZero);
        }
        if self.is_zero() {
            return Ok(other.primitive_part());
        }
        if other.is_zero() {
            return Ok(self.primitive_part());
        }
        let g = prs_gcd(&self.coeffs, &other.coeffs);
        Ok(Self::new(&self.var, g).primitive_part())
    }

    /// Exact resultant of two nonzero polynomials.
    pub fn resultant(&self, other: &Self) -> Result<BigInt> {
        self.check_var(other)?;
        if self.is_zero() || other.is_zero() {
            return Err(Error::ZeroOperand);
        }
        prs_resultant(&self.coeffs, &other.coeffs)
    }

    /// `Disc(P) = (-1)^{n(n-1)/2} * Res(P, P') / lc(P)`, exact over Z.
    pub fn discriminant(&self) -> Result<BigInt> {
        let n = match self.degree() {
            Some(n) if n >= 1 => n,
            _ => return Err(Error::DegreeTooSmall(1)),
        };
        let res = self.resultant(&self.derivative())?;
        let lc = self.leading_coeff();
        let (q, r) = res.div_rem(&lc);
        if !r.is_zero() {
            return Err(Error::Internal("Res(P, P') not divisible by lc(P)"));
        }
        if (n * (n - 1) / 2) % 2 == 1 {
            Ok(-q)
        } else {
            Ok(q)
        }
    }

    /// Canonical text form: `poly(c)=[a0,a1,...]`, low-to-high.
    pub fn to_text(&self) -> String {
        let body = self
            .coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",");
        format!("poly({})=[{}]", self.var, body)
    }

    pub fn from_text(s: &str) -> Result<Self> {
        let s = s.trim();
        let rest = s
            .strip_prefix("poly(")
            .ok_or_else(|| Error::Parse(format!("expected poly(var)=[...]: {s}")))?;
        let (var, rest) = rest
            .split_once(")=[")
            .ok_or_else(|| Error::Parse(format!("expected poly(var)=[...]: {s}")))?;
        let body = rest
            .strip_suffix(']')
            .ok_or_else(|| Error::Parse(format!("missing closing bracket: {s}")))?;
        let mut coeffs = Vec::new();
        if !body.trim().is_empty() {
            for part in body.split(',') {
                let c: BigInt = part
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad coefficient {part:?}")))?;
                coeffs.push(c);
            }
        }
        Ok(Self::new(var, coeffs))
    }

    /// Same coefficients under a new variable tag.
    pub fn rename(&self, var: &str) -> Self {
        Self::new(var, self.coeffs.clone())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

macro_rules! int_poly_binop {
    ($trait_:ident, $method:ident, $try_:ident) => {
        impl $trait_<&IntPoly> for &IntPoly {
            type Output = IntPoly;
            fn $method(self, rhs: &IntPoly) -> IntPoly {
                self.$try_(rhs).expect("variable tag mismatch")
            }
        }
    };
}
int_poly_binop!(Add, add, try_add);
int_poly_binop!(Sub, sub, try_sub);
int_poly_binop!(Mul, mul, try_mul);

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(&self.var, self.coeffs.iter().map(|c| -c).collect())
    }
}

// ---------------------------------------------------------------------------
// Generic polynomial remainder sequences.
//
// The same fraction-free machinery serves Z[x] (coefficients BigInt) and
// Z[a][v] (coefficients IntPoly in a). The sequence uses the subresultant
// division rule R_{i+1} = prem(R_{i-1}, R_i) / (g * h^delta), which keeps
// intermediate coefficients integral without rational arithmetic. For the
// resultant the exact scalar relation
//   Res(A, B) = (-1)^{mn} * lc(B)^{m - deg R - (delta+1) n} * (g h^delta)^n
//               * Res(B, R / (g h^delta))
// is tracked as a reduced fraction, which by theory clears at the end.
// ---------------------------------------------------------------------------

/// Coefficient-ring operations needed by the remainder sequences.
trait PrsRing: Clone {
    fn ris_zero(&self) -> bool;
    /// Constant `k` in the same variable context as `self`.
    fn rconst(&self, k: i64) -> Self;
    fn rmul(&self, other: &Self) -> Self;
    fn rsub(&self, other: &Self) -> Self;
    fn rneg(&self) -> Self;
    /// `None` when the division is not exact.
    fn rexact_div(&self, other: &Self) -> Option<Self>;
    fn rgcd(&self, other: &Self) -> Self;
    fn rpow(&self, e: usize) -> Self {
        let mut acc = self.rconst(1);
        for _ in 0..e {
            acc = acc.rmul(self);
        }
        acc
    }
}

impl PrsRing for BigInt {
    fn ris_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn rconst(&self, k: i64) -> Self {
        BigInt::from(k)
    }
    fn rmul(&self, other: &Self) -> Self {
        self * other
    }
    fn rsub(&self, other: &Self) -> Self {
        self - other
    }
    fn rneg(&self) -> Self {
        -self
    }
    fn rexact_div(&self, other: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(other);
        if r.ris_zero() { Some(q) } else { None }
    }
    fn rgcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn rpow(&self, e: usize) -> Self {
        num_traits::Pow::pow(self, e)
    }
}

impl PrsRing for IntPoly {
    fn ris_zero(&self) -> bool {
        IntPoly::is_zero(self)
    }
    fn rconst(&self, k: i64) -> Self {
        IntPoly::constant(self.var(), k)
    }
    fn rmul(&self, other: &Self) -> Self {
        self * other
    }
    fn rsub(&self, other: &Self) -> Self {
        self - other
    }
    fn rneg(&self) -> Self {
        -self
    }
    fn rexact_div(&self, other: &Self) -> Option<Self> {
        IntPoly::exact_div(self, other).ok()
    }
    fn rgcd(&self, other: &Self) -> Self {
        IntPoly::gcd_poly(self, other).expect("gcd of zero polynomials")
    }
    fn rpow(&self, e: usize) -> Self {
        IntPoly::pow(self, e as u32)
    }
}

fn pdeg<C: PrsRing>(p: &[C]) -> Option<usize> {
    if p.is_empty() { None } else { Some(p.len() - 1) }
}

fn ptrim<C: PrsRing>(mut p: Vec<C>) -> Vec<C> {
    while p.last().map_or(false, |c| c.ris_zero()) {
        p.pop();
    }
    p
}

fn pscale_div<C: PrsRing>(p: &[C], d: &C) -> Option<Vec<C>> {
    p.iter().map(|c| c.rexact_div(d)).collect()
}

/// Fraction-free pseudo-remainder: `lc(B)^{deg A - deg B + 1} A = Q B + R`.
fn prem<C: PrsRing>(a: &[C], b: &[C]) -> Vec<C> {
    let db = pdeg(b).expect("prem by zero");
    let lb = b[db].clone();
    let mut r: Vec<C> = a.to_vec();
    let mut e = pdeg(a).map_or(0, |da| da.saturating_sub(db)) + 1;
    while pdeg(&r).map_or(false, |dr| dr >= db) {
        let dr = pdeg(&r).unwrap();
        let lead = r[dr].clone();
        // r = lb*r - lead*x^{dr-db}*b
        let mut next = vec![lead.rconst(0); dr];
        for (i, c) in r.iter().enumerate().take(dr) {
            next[i] = c.rmul(&lb);
        }
        for (j, bc) in b.iter().enumerate().take(db) {
            let k = dr - db + j;
            next[k] = next[k].rsub(&lead.rmul(bc));
        }
        r = ptrim(next);
        e -= 1;
    }
    if e > 0 {
        let f = lb.rpow(e);
        r = r.iter().map(|c| c.rmul(&f)).collect();
    }
    r
}

/// Reduced fraction over the coefficient ring.
struct Frac<C: PrsRing> {
    num: C,
    den: C,
}

impl<C: PrsRing> Frac<C> {
    fn one(sample: &C) -> Self {
        Frac { num: sample.rconst(1), den: sample.rconst(1) }
    }
    fn mul_num(&mut self, x: &C) {
        self.num = self.num.rmul(x);
        self.reduce();
    }
    fn mul_den(&mut self, x: &C) {
        self.den = self.den.rmul(x);
        self.reduce();
    }
    fn negate(&mut self) {
        self.num = self.num.rneg();
    }
    fn reduce(&mut self) {
        let g = self.num.rgcd(&self.den);
        if let (Some(n), Some(d)) = (self.num.rexact_div(&g), self.den.rexact_div(&g)) {
            self.num = n;
            self.den = d;
        }
    }
}

/// Resultant of two nonzero coefficient vectors via the subresultant PRS.
fn prs_resultant<C: PrsRing>(a: &[C], b: &[C]) -> Result<C> {
    let a = ptrim(a.to_vec());
    let b = ptrim(b.to_vec());
    let (da, db) = match (pdeg(&a), pdeg(&b)) {
        (Some(da), Some(db)) => (da, db),
        _ => return Err(Error::ZeroOperand),
    };
    if da == 0 && db == 0 {
        return Ok(a[0].rconst(1));
    }
    if da == 0 {
        return Ok(a[0].rpow(db));
    }
    if db == 0 {
        return Ok(b[0].rpow(da));
    }
    let (mut a, mut b, mut factor) = if da < db {
        let mut f = Frac::one(&a[0]);
        if (da * db) % 2 == 1 {
            f.negate();
        }
        (b, a, f)
    } else {
        let f = Frac::one(&a[0]);
        (a, b, f)
    };

    let mut g = a[0].rconst(1);
    let mut h = a[0].rconst(1);
    loop {
        let m = pdeg(&a).unwrap();
        let n = match pdeg(&b) {
            None => return Ok(a[0].rconst(0)),
            Some(0) => {
                // Res(A, const) = const^{deg A}
                let base = b[0].rpow(m);
                let total = base.rmul(&factor.num);
                return total
                    .rexact_div(&factor.den)
                    .ok_or(Error::Internal("resultant correction factor not integral"));
            }
            Some(n) => n,
        };
        let delta = m - n;
        let r = prem(&a, &b);
        let dr = pdeg(&r);
        // Res(A,B) = (-1)^{mn} lc(B)^{m - dr - (delta+1)n} (g h^delta)^n Res(B, R/(g h^delta))
        if (m * n) % 2 == 1 {
            factor.negate();
        }
        let lb = b[n].clone();
        let e_num = m as i64 - dr.map_or(0, |d| d as i64) - ((delta + 1) * n) as i64;
        if e_num >= 0 {
            factor.mul_num(&lb.rpow(e_num as usize));
        } else {
            factor.mul_den(&lb.rpow((-e_num) as usize));
        }
        let divisor = g.rmul(&h.rpow(delta));
        factor.mul_num(&divisor.rpow(n));
        let next = if r.is_empty() {
            Vec::new()
        } else {
            pscale_div(&r, &divisor)
                .ok_or(Error::Internal("subresultant division not exact"))?
        };
        a = b;
        b = next;
        g = a[pdeg(&a).unwrap()].clone();
        h = if delta == 0 {
            h
        } else {
            g.rpow(delta)
                .rexact_div(&h.rpow(delta - 1))
                .ok_or(Error::Internal("subresultant h-update not exact"))?
        };
    }
}

/// Last nonzero term of the subresultant PRS (an associate of the GCD).
fn prs_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut a = ptrim(a.to_vec());
    let mut b = ptrim(b.to_vec());
    if pdeg(&a) < pdeg(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    if b.is_empty() {
        return a;
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let m = pdeg(&a).unwrap();
        let n = match pdeg(&b) {
            None => return a,
            Some(0) => return b,
            Some(n) => n,
        };
        let delta = m - n;
        let r = prem(&a, &b);
        let divisor = PrsRing::rmul(&g, &PrsRing::rpow(&h, delta));
        let next = if r.is_empty() {
            Vec::new()
        } else {
            pscale_div(&r, &divisor).expect("subresultant division not exact")
        };
        a = b;
        b = next;
        g = a[pdeg(&a).unwrap()].clone();
        if delta > 0 {
            h = PrsRing::rexact_div(&PrsRing::rpow(&g, delta), &PrsRing::rpow(&h, delta - 1))
                .expect("subresultant h-update not exact");
        }
    }
}

// ---------------------------------------------------------------------------
// Bivariate polynomials, recursive-dense in v with IntPoly coefficients in a.
// ---------------------------------------------------------------------------

/// Bivariate polynomial over Z in `(a, v)`, stored as a dense polynomial in
/// `v` whose coefficients are `IntPoly` in `a`. Elimination always happens
/// in `v`.
#[derive(Clone, PartialEq, Eq)]
pub struct BiPoly {
    a_var: String,
    v_var: String,
    coeffs: Vec<IntPoly>,
}

impl BiPoly {
    pub fn new(a_var: &str, v_var: &str, coeffs: Vec<IntPoly>) -> Result<Self> {
        for c in &coeffs {
            if c.var() != a_var {
                return Err(Error::VarMismatch(a_var.to_string(), c.var().to_string()));
            }
        }
        let mut coeffs = coeffs;
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Ok(BiPoly { a_var: a_var.to_string(), v_var: v_var.to_string(), coeffs })
    }

    pub fn zero(a_var: &str, v_var: &str) -> Self {
        BiPoly { a_var: a_var.to_string(), v_var: v_var.to_string(), coeffs: Vec::new() }
    }

    pub fn constant(a_var: &str, v_var: &str, c: impl Into<BigInt>) -> Self {
        Self::new(a_var, v_var, vec![IntPoly::constant(a_var, c)]).unwrap()
    }

    /// Embeds a polynomial in `a` as a degree-0 polynomial in `v`.
    pub fn from_a_poly(p: IntPoly, v_var: &str) -> Self {
        let a_var = p.var().to_string();
        Self::new(&a_var, v_var, vec![p]).unwrap()
    }

    /// The monomial `v`.
    pub fn v_identity(a_var: &str, v_var: &str) -> Self {
        Self::new(
            a_var,
            v_var,
            vec![IntPoly::zero(a_var), IntPoly::constant(a_var, 1)],
        )
        .unwrap()
    }

    pub fn a_var(&self) -> &str {
        &self.a_var
    }

    pub fn v_var(&self) -> &str {
        &self.v_var
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in `v`; `None` for the zero polynomial.
    pub fn deg_v(&self) -> Option<usize> {
        if self.coeffs.is_empty() { None } else { Some(self.coeffs.len() - 1) }
    }

    /// Total degree in `a` over all coefficients.
    pub fn deg_a(&self) -> Option<usize> {
        self.coeffs.iter().filter_map(|c| c.degree()).max()
    }

    pub fn coeffs_v(&self) -> &[IntPoly] {
        &self.coeffs
    }

    pub fn coeff_v(&self, i: usize) -> IntPoly {
        self.coeffs.get(i).cloned().unwrap_or_else(|| IntPoly::zero(&self.a_var))
    }

    pub fn leading_coeff_v(&self) -> IntPoly {
        self.coeffs.last().cloned().unwrap_or_else(|| IntPoly::zero(&self.a_var))
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.a_var != other.a_var {
            return Err(Error::VarMismatch(self.a_var.clone(), other.a_var.clone()));
        }
        if self.v_var != other.v_var {
            return Err(Error::VarMismatch(self.v_var.clone(), other.v_var.clone()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.coeff_v(i).try_add(&other.coeff_v(i)))
            .collect::<Result<_>>()?;
        Self::new(&self.a_var, &self.v_var, coeffs)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.coeff_v(i).try_sub(&other.coeff_v(i)))
            .collect::<Result<_>>()?;
        Self::new(&self.a_var, &self.v_var, coeffs)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.a_var, &self.v_var));
        }
        let mut coeffs =
            vec![IntPoly::zero(&self.a_var); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, p) in self.coeffs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            for (j, q) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(p * q);
            }
        }
        Self::new(&self.a_var, &self.v_var, coeffs)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::constant(&self.a_var, &self.v_var, 1);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact division in Z[a][v]: schoolbook division in `v` with exact
    /// IntPoly coefficient division at each step.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        self.check_vars(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(&self.a_var, &self.v_var));
        }
        let dd = divisor.deg_v().unwrap();
        let dn = self.deg_v().unwrap();
        if dn < dd {
            return Err(Error::NotDivisible);
        }
        let dlc = divisor.leading_coeff_v();
        let mut rem: Vec<IntPoly> = self.coeffs.clone();
        let mut quot = vec![IntPoly::zero(&self.a_var); dn - dd + 1];
        for i in (0..=dn - dd).rev() {
            let lead = rem[i + dd].clone();
            if lead.is_zero() {
                continue;
            }
            let q = lead.exact_div(&dlc)?;
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = &rem[i + j] - &(&q * dc);
            }
            quot[i] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::NotDivisible);
        }
        Self::new(&self.a_var, &self.v_var, quot)
    }

    /// Formal partial derivative in `a`.
    pub fn derivative_a(&self) -> Self {
        Self::new(
            &self.a_var,
            &self.v_var,
            self.coeffs.iter().map(|c| c.derivative()).collect(),
        )
        .unwrap()
    }

    /// Formal partial derivative in `v`.
    pub fn derivative_v(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero(&self.a_var, &self.v_var);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&BigInt::from(i)))
            .collect();
        Self::new(&self.a_var, &self.v_var, coeffs).unwrap()
    }

    /// Substitutes a rational point for both variables.
    pub fn evaluate(&self, a: &BigRational, v: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * v + c.evaluate_rational(a);
        }
        acc
    }

    /// Substitutes `a = a0`, leaving a polynomial in `v`.
    pub fn evaluate_a(&self, a0: &BigInt) -> IntPoly {
        IntPoly::new(
            &self.v_var,
            self.coeffs.iter().map(|c| c.evaluate(a0)).collect(),
        )
    }

    /// Substitutes `v = v0`, leaving a polynomial in `a`.
    pub fn evaluate_v(&self, v0: &BigInt) -> IntPoly {
        let mut acc = IntPoly::zero(&self.a_var);
        for c in self.coeffs.iter().rev() {
            acc = &acc.scale(v0) + c;
        }
        acc
    }

    /// Resultant eliminating `v`; the result is an `IntPoly` in `a`.
    pub fn resultant_v(&self, other: &Self) -> Result<IntPoly> {
        self.check_vars(other)?;
        if self.is_zero() || other.is_zero() {
            return Err(Error::ZeroOperand);
        }
        prs_resultant(&self.coeffs, &other.coeffs)
    }

    /// Canonical nested text form: outer index = degree in v.
    pub fn to_text(&self) -> String {
        let body = self
            .coeffs
            .iter()
            .map(|c| {
                let inner = c
                    .coeffs()
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                format!("[{inner}]")
            })
            .collect::<Vec<_>>()
            .join(",");
        format!("poly({},{})=[{}]", self.a_var, self.v_var, body)
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

macro_rules! bi_poly_binop {
    ($trait_:ident, $method:ident, $try_:ident) => {
        impl $trait_<&BiPoly> for &BiPoly {
            type Output = BiPoly;
            fn $method(self, rhs: &BiPoly) -> BiPoly {
                self.$try_(rhs).expect("variable tag mismatch")
            }
        }
    };
}
bi_poly_binop!(Add, add, try_add);
bi_poly_binop!(Sub, sub, try_sub);
bi_poly_binop!(Mul, mul, try_mul);

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly::new(
            &self.a_var,
            &self.v_var,
            self.coeffs.iter().map(|c| -c).collect(),
        )
        .unwrap()
    }
}

// ---------------------------------------------------------------------------
// Rational-denominator polynomials (plumbing for quotients whose exactness
// is certified later, and the naive rational Euclid used as a test oracle).
// ---------------------------------------------------------------------------

/// `num / den` with `den > 0` and `gcd(content(num), den) = 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatPoly {
    num: IntPoly,
    den: BigInt,
}

impl RatPoly {
    pub fn new(num: IntPoly, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut num = num;
        let mut den = den;
        if den.is_negative() {
            num = -&num;
            den = -den;
        }
        if num.is_zero() {
            return Ok(RatPoly { num, den: BigInt::one() });
        }
        let (_, content, _) = num.content_primitive();
        let g = content.gcd(&den);
        if !g.is_one() {
            num = IntPoly::new(num.var(), num.coeffs().iter().map(|c| c / &g).collect());
            den /= &g;
        }
        Ok(RatPoly { num, den })
    }

    pub fn from_int_poly(p: IntPoly) -> Self {
        RatPoly { num: p, den: BigInt::one() }
    }

    pub fn num(&self) -> &IntPoly {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn degree(&self) -> Option<usize> {
        self.num.degree()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let num = &self.num.scale(&other.den).try_add(&other.num.scale(&self.den))?;
        Self::new(num.clone(), &self.den * &other.den)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        let num = &self.num.scale(&other.den).try_sub(&other.num.scale(&self.den))?;
        Self::new(num.clone(), &self.den * &other.den)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        Self::new(self.num.try_mul(&other.num)?, &self.den * &other.den)
    }

    /// Polynomial remainder over Q.
    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = divisor.degree().unwrap();
        let mut r = self.clone();
        while r.degree().map_or(false, |dr| dr >= dd) {
            let dr = r.degree().unwrap();
            // r -= (lc(r)/lc(d)) * x^{dr-dd} * d
            let shift =
                IntPoly::monomial(self.num.var(), r.num.leading_coeff(), dr - dd);
            let scaled = Self::new(
                shift.try_mul(&divisor.num)?,
                &r.den * &divisor.num.leading_coeff(),
            )?;
            r = r.try_sub(&scaled)?;
            if r.degree().map_or(false, |d2| d2 >= dr) {
                return Err(Error::Internal("rational remainder failed to reduce degree"));
            }
        }
        Ok(r)
    }

    /// If the denominator is 1, the certified-exact integer polynomial.
    pub fn into_exact(self) -> Result<IntPoly> {
        if self.den.is_one() {
            Ok(self.num)
        } else {
            Err(Error::NotDivisible)
        }
    }
}
