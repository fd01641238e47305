//! Arithmetic in F_p and F_{p^k} and polynomial factorization mod p:
//! squarefree decomposition (with p-th-root extraction), distinct-degree
//! splitting, and randomized equal-degree splitting, plus root finding.
//!
//! Field descriptors are small immutable values; all operations are pure,
//! and the randomized splitting is seedable so runs reproduce exactly.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactpoly::IntPoly;
use crate::intfactor::is_prime_u64;

/// Finite field descriptor: carries the modulus data and implements element
/// arithmetic. Elements are plain data; all operations go through the field.
pub trait Field: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + PartialEq + Eq + Ord + std::hash::Hash + fmt::Debug;

    fn characteristic(&self) -> u64;
    fn ext_degree(&self) -> u32;
    fn order_big(&self) -> BigUint {
        BigUint::from(self.characteristic()).pow(self.ext_degree())
    }

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_u64(&self, x: u64) -> Self::Elem;
    fn from_bigint(&self, x: &BigInt) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` exactly for the zero element.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn pow(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                acc = self.mul(&acc, &base);
            }
            if i + 1 < bits {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Inverse Frobenius: the unique b with b^p = a.
    fn pth_root(&self, a: &Self::Elem) -> Self::Elem {
        let k = self.ext_degree();
        if k == 1 {
            return a.clone();
        }
        let e = BigUint::from(self.characteristic()).pow(k - 1);
        self.pow(a, &e)
    }

    /// Canonical enumeration of all field elements by index in [0, order).
    fn elem_from_index(&self, idx: u64) -> Self::Elem;

    /// Flat integer key used for deterministic ordering and printing.
    fn elem_key(&self, a: &Self::Elem) -> Vec<u64>;

    fn random_elem(&self, rng: &mut ChaCha8Rng) -> Self::Elem;

    /// Decimal for prime fields, `[c0,c1,...]` coordinates for extensions.
    fn elem_to_string(&self, a: &Self::Elem) -> String;
}

/// F_p for a 64-bit prime p, certified prime at construction.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

fn mulmod64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

impl Field for PrimeField {
    type Elem = u64;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn ext_degree(&self) -> u32 {
        1
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_u64(&self, x: u64) -> u64 {
        x % self.p
    }
    fn from_bigint(&self, x: &BigInt) -> u64 {
        x.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p { s - self.p } else { s }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b { a - b } else { a + self.p - b }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mulmod64(*a, *b, self.p)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 { 0 } else { self.p - a }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Fermat: a^{p-2}.
        let mut acc: u64 = 1;
        let mut base = *a;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod64(acc, base, self.p);
            }
            base = mulmod64(base, base, self.p);
            e >>= 1;
        }
        Some(acc)
    }
    fn elem_from_index(&self, idx: u64) -> u64 {
        idx % self.p
    }
    fn elem_key(&self, a: &u64) -> Vec<u64> {
        vec![*a]
    }
    fn random_elem(&self, rng: &mut ChaCha8Rng) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn elem_to_string(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// F_{p^k} as F_p[x] modulo the lexicographically least monic irreducible of
/// degree k (so serialized elements compare across runs). Elements are
/// length-k coordinate vectors, low degree first.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtField {
    base: PrimeField,
    k: u32,
    /// Monic modulus coefficients, low-to-high, length k+1.
    modulus: Vec<u64>,
}

impl ExtField {
    /// Finds and certifies the canonical modulus. The candidate order is the
    /// integer counter sum(a_i p^i) over the non-leading coefficients, so the
    /// first irreducible hit is the lexicographic least.
    pub fn new(p: u64, k: u32) -> Result<Self> {
        let base = PrimeField::new(p)?;
        if k == 0 {
            return Err(Error::DegreeTooSmall(1));
        }
        let mut counter = vec![0u64; k as usize];
        loop {
            let mut coeffs: Vec<u64> = counter.clone();
            coeffs.push(1);
            let candidate = FieldPoly::from_elems(base, "x", coeffs.clone());
            if candidate.is_irreducible() {
                // Certify via an independent full factorization.
                let fact = candidate.factor(0);
                if fact.factors.len() != 1 || fact.factors[0].1 != 1 {
                    return Err(Error::Internal("modulus certification failed"));
                }
                return Ok(ExtField { base, k, modulus: coeffs });
            }
            // Increment the base-p counter; it cannot overflow because an
            // irreducible of every degree exists over F_p.
            let mut i = 0;
            loop {
                counter[i] += 1;
                if counter[i] < p {
                    break;
                }
                counter[i] = 0;
                i += 1;
            }
        }
    }

    pub fn p(&self) -> u64 {
        self.base.p()
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn modulus_coeffs(&self) -> &[u64] {
        &self.modulus
    }

    /// Embeds a base-field element.
    pub fn embed(&self, a: u64) -> Vec<u64> {
        let mut v = vec![0u64; self.k as usize];
        v[0] = a % self.p();
        v
    }

    fn reduce(&self, mut poly: Vec<u64>) -> Vec<u64> {
        let p = self.p();
        let k = self.k as usize;
        while poly.len() > k {
            let top = poly.pop().unwrap();
            if top == 0 {
                continue;
            }
            let shift = poly.len() - k;
            for i in 0..k {
                let t = mulmod64(top, self.modulus[i], p);
                let idx = shift + i;
                poly[idx] = (poly[idx] + p - t) % p;
            }
        }
        poly.resize(k, 0);
        poly
    }
}

impl Field for ExtField {
    type Elem = Vec<u64>;

    fn characteristic(&self) -> u64 {
        self.base.p()
    }
    fn ext_degree(&self) -> u32 {
        self.k
    }
    fn zero(&self) -> Vec<u64> {
        vec![0; self.k as usize]
    }
    fn one(&self) -> Vec<u64> {
        self.embed(1)
    }
    fn from_u64(&self, x: u64) -> Vec<u64> {
        self.embed(x)
    }
    fn from_bigint(&self, x: &BigInt) -> Vec<u64> {
        self.embed(self.base.from_bigint(x))
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&c| c == 0)
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let p = self.p();
        let k = self.k as usize;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mulmod64(x, y, p)) % p;
            }
        }
        self.reduce(prod)
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn inv(&self, a: &Vec<u64>) -> Option<Vec<u64>> {
        if self.is_zero(a) {
            return None;
        }
        // Extended Euclid on (a, modulus) over F_p.
        let fp = self.base;
        let var = "x";
        let mut r0 = FieldPoly::from_elems(fp, var, self.modulus.clone());
        let mut r1 = FieldPoly::from_elems(fp, var, a.clone());
        let mut s0 = FieldPoly::zero(fp, var);
        let mut s1 = FieldPoly::constant(fp, var, 1);
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1);
            let s = s0.sub(&s1.mul(&q));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        // r0 = gcd(a, modulus) is a nonzero constant (modulus irreducible).
        let c = r0.coeff(0);
        let cinv = fp.inv(&c)?;
        let mut out = s0.scale(&cinv).coeffs().to_vec();
        out.resize(self.k as usize, 0);
        Some(out)
    }
    fn elem_from_index(&self, idx: u64) -> Vec<u64> {
        let p = self.p();
        let mut v = Vec::with_capacity(self.k as usize);
        let mut idx = idx;
        for _ in 0..self.k {
            v.push(idx % p);
            idx /= p;
        }
        v
    }
    fn elem_key(&self, a: &Vec<u64>) -> Vec<u64> {
        a.clone()
    }
    fn random_elem(&self, rng: &mut ChaCha8Rng) -> Vec<u64> {
        let p = self.p();
        (0..self.k).map(|_| rng.gen_range(0..p)).collect()
    }
    fn elem_to_string(&self, a: &Vec<u64>) -> String {
        let body = a.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        format!("[{body}]")
    }
}

/// Dense polynomial over a finite field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FieldPoly<F: Field> {
    field: F,
    var: String,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> FieldPoly<F> {
    pub fn from_u64s(field: F, var: &str, coeffs: &[u64]) -> Self {
        let coeffs = coeffs.iter().map(|&c| field.from_u64(c)).collect();
        Self::from_elems(field, var, coeffs)
    }

    pub fn from_elems(field: F, var: &str, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().map_or(false, |c| field.is_zero(c)) {
            coeffs.pop();
        }
        FieldPoly { field, var: var.to_string(), coeffs }
    }

    pub fn zero(field: F, var: &str) -> Self {
        FieldPoly { field, var: var.to_string(), coeffs: Vec::new() }
    }

    pub fn constant(field: F, var: &str, c: u64) -> Self {
        let e = field.from_u64(c);
        Self::from_elems(field, var, vec![e])
    }

    pub fn constant_elem(field: F, var: &str, e: F::Elem) -> Self {
        Self::from_elems(field, var, vec![e])
    }

    /// The monomial `x`.
    pub fn identity(field: F, var: &str) -> Self {
        let coeffs = vec![field.zero(), field.one()];
        Self::from_elems(field, var, coeffs)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() { None } else { Some(self.coeffs.len() - 1) }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeff(&self, i: usize) -> F::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn leading_coeff(&self) -> F::Elem {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map_or(false, |c| *c == self.field.one())
    }

    fn assert_same(&self, other: &Self) {
        assert!(self.field == other.field, "field mismatch");
        assert!(self.var == other.var, "variable tag mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.field.add(&self.coeff(i), &other.coeff(i)))
            .collect();
        Self::from_elems(self.field.clone(), &self.var, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_same(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.field.sub(&self.coeff(i), &other.coeff(i)))
            .collect();
        Self::from_elems(self.field.clone(), &self.var, coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field.clone(), &self.var);
        }
        let mut coeffs =
            vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if self.field.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let t = self.field.mul(a, b);
                coeffs[i + j] = self.field.add(&coeffs[i + j], &t);
            }
        }
        Self::from_elems(self.field.clone(), &self.var, coeffs)
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| self.field.neg(c)).collect();
        Self::from_elems(self.field.clone(), &self.var, coeffs)
    }

    pub fn scale(&self, k: &F::Elem) -> Self {
        let coeffs = self.coeffs.iter().map(|c| self.field.mul(c, k)).collect();
        Self::from_elems(self.field.clone(), &self.var, coeffs)
    }

    /// `(unit, self / unit)` with the quotient monic; zero stays zero.
    pub fn to_monic(&self) -> (F::Elem, Self) {
        if self.is_zero() {
            return (self.field.one(), self.clone());
        }
        let lc = self.leading_coeff();
        if lc == self.field.one() {
            return (lc, self.clone());
        }
        let inv = self.field.inv(&lc).expect("nonzero leading coefficient");
        (lc, self.scale(&inv))
    }

    /// Quotient and remainder; the divisor may be any nonzero polynomial.
    pub fn divmod(&self, divisor: &Self) -> (Self, Self) {
        self.assert_same(divisor);
        let dd = divisor.degree().expect("division by zero polynomial");
        let dlc_inv = self
            .field
            .inv(&divisor.leading_coeff())
            .expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() < dd + 1 {
            return (Self::zero(self.field.clone(), &self.var), self.clone());
        }
        let dn = rem.len() - 1;
        let mut quot = vec![self.field.zero(); dn - dd + 1];
        for i in (0..=dn - dd).rev() {
            let lead = rem[i + dd].clone();
            if self.field.is_zero(&lead) {
                continue;
            }
            let q = self.field.mul(&lead, &dlc_inv);
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                let t = self.field.mul(&q, dc);
                rem[i + j] = self.field.sub(&rem[i + j], &t);
            }
            quot[i] = q;
        }
        (
            Self::from_elems(self.field.clone(), &self.var, quot),
            Self::from_elems(self.field.clone(), &self.var, rem),
        )
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.divmod(divisor).1
    }

    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.divmod(divisor);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NotDivisible)
        }
    }

    /// Monic GCD; `gcd(f, 0) = monic(f)`.
    pub fn gcd(&self, other: &Self) -> Self {
        self.assert_same(other);
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.to_monic().1
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero(self.field.clone(), &self.var);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| {
                let k = self.field.from_u64(i as u64);
                self.field.mul(c, &k)
            })
            .collect();
        Self::from_elems(self.field.clone(), &self.var, coeffs)
    }

    pub fn evaluate(&self, x: &F::Elem) -> F::Elem {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = self.field.add(&self.field.mul(&acc, x), c);
        }
        acc
    }

    /// `self^e mod m` by square-and-multiply.
    pub fn pow_mod(&self, e: &BigUint, m: &Self) -> Self {
        let mut acc = Self::constant(self.field.clone(), &self.var, 1).rem(m);
        let mut base = self.rem(m);
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
            if i + 1 < bits {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }

    /// For f(x) = g(x^p) returns g with p-th roots applied to coefficients,
    /// so that the result^p = f.
    fn pth_root_poly(&self) -> Self {
        let p = self.field.characteristic() as usize;
        let mut coeffs = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i % p == 0 {
                coeffs.push(self.field.pth_root(c));
            } else {
                debug_assert!(self.field.is_zero(c), "not a p-th power");
            }
        }
        Self::from_elems(self.field.clone(), &self.var, coeffs)
    }

    /// Squarefree decomposition in characteristic p: returns pairwise coprime
    /// monic squarefree parts with their multiplicities, product = monic(self).
    pub fn squarefree_decomposition(&self) -> Vec<(Self, u32)> {
        let mut out: Vec<(Self, u32)> = Vec::new();
        let (_, mut f) = self.to_monic();
        if f.is_constant() {
            return out;
        }
        let mut e: u32 = 1;
        let p = self.field.characteristic() as u32;
        loop {
            let d = f.derivative();
            let mut t = f.gcd(&d);
            let mut w = f.exact_div(&t).expect("gcd divides");
            let mut i: u32 = 1;
            while !w.is_constant() {
                let y = w.gcd(&t);
                let z = w.exact_div(&y).expect("gcd divides");
                if !z.is_constant() {
                    out.push((z, i * e));
                }
                t = t.exact_div(&y).expect("gcd divides");
                w = y;
                i += 1;
            }
            if t.is_constant() {
                break;
            }
            // Every multiplicity left in t is divisible by p.
            f = t.pth_root_poly();
            e *= p;
        }
        out
    }

    /// Distinct-degree splitting of a monic squarefree polynomial: pairs
    /// (product of irreducible factors of degree d, d).
    fn distinct_degree(&self) -> Vec<(Self, usize)> {
        let q = self.field.order_big();
        let x = Self::identity(self.field.clone(), &self.var);
        let mut fstar = self.clone();
        let mut h = x.rem(&fstar);
        let mut out = Vec::new();
        let mut d = 0usize;
        while fstar.degree().map_or(false, |n| n >= 2 * (d + 1)) {
            d += 1;
            h = h.pow_mod(&q, &fstar);
            let g = fstar.gcd(&h.sub(&x));
            if !g.is_constant() {
                out.push((g.clone(), d));
                fstar = fstar.exact_div(&g).expect("gcd divides");
                h = h.rem(&fstar);
            }
        }
        if let Some(n) = fstar.degree() {
            if n > 0 {
                out.push((fstar, n));
            }
        }
        out
    }

    /// Cantor-Zassenhaus equal-degree splitting: `self` monic squarefree,
    /// all irreducible factors of degree d.
    fn equal_degree_factor(&self, d: usize, rng: &mut ChaCha8Rng) -> Vec<Self> {
        let n = self.degree().unwrap();
        if n == d {
            return vec![self.clone()];
        }
        let field = self.field.clone();
        let q = field.order_big();
        let one = Self::constant(field.clone(), &self.var, 1);
        loop {
            // Random poly of degree < n, not constant-zero.
            let coeffs: Vec<F::Elem> = (0..n).map(|_| field.random_elem(rng)).collect();
            let a = Self::from_elems(field.clone(), &self.var, coeffs);
            if a.is_constant() {
                continue;
            }
            let g1 = self.gcd(&a);
            let split = if !g1.is_constant() && g1.degree() < self.degree() {
                Some(g1)
            } else if field.characteristic() == 2 {
                // Trace map sum a^{2^i} over i < k*d.
                let rounds = field.ext_degree() as usize * d;
                let mut t = a.rem(self);
                let mut acc = t.clone();
                for _ in 1..rounds {
                    t = t.mul(&t).rem(self);
                    acc = acc.add(&t);
                }
                let g = self.gcd(&acc);
                (!g.is_constant() && g.degree() < self.degree()).then_some(g)
            } else {
                let e = (q.pow(d as u32) - BigUint::one()) >> 1;
                let b = a.pow_mod(&e, self);
                let g = self.gcd(&b.sub(&one));
                (!g.is_constant() && g.degree() < self.degree()).then_some(g)
            };
            if let Some(g) = split {
                let rest = self.exact_div(&g).expect("gcd divides");
                let mut out = g.equal_degree_factor(d, rng);
                out.extend(rest.equal_degree_factor(d, rng));
                return out;
            }
        }
    }

    /// Complete factorization into monic irreducibles. The seed pins the
    /// equal-degree randomness; identical inputs and seeds give identical
    /// output, and factors are sorted (degree, then coefficient order) anyway.
    pub fn factor(&self, seed: u64) -> FieldFactorization<F> {
        assert!(!self.is_zero(), "factor of zero polynomial");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (unit, monic) = self.to_monic();
        let mut factors: Vec<(Self, u32)> = Vec::new();
        for (part, mult) in monic.squarefree_decomposition() {
            for (prod, d) in part.distinct_degree() {
                for irr in prod.equal_degree_factor(d, &mut rng) {
                    factors.push((irr, mult));
                }
            }
        }
        factors.sort_by(|a, b| {
            let ka = (a.0.degree(), coeff_keys(&a.0));
            let kb = (b.0.degree(), coeff_keys(&b.0));
            ka.cmp(&kb)
        });
        FieldFactorization { unit, factors }
    }

    /// Roots lying in the coefficient field, with multiplicities, sorted.
    pub fn roots_with_multiplicity(&self) -> Vec<(F::Elem, u32)> {
        assert!(!self.is_zero(), "roots of zero polynomial");
        let field = self.field.clone();
        let mut out: Vec<(F::Elem, u32)> = Vec::new();
        for (part, mult) in self.squarefree_decomposition() {
            // Restrict to roots in F: gcd with x^q - x.
            let q = field.order_big();
            let x = Self::identity(field.clone(), &self.var);
            let xq = x.pow_mod(&q, &part);
            let lin = part.gcd(&xq.sub(&x));
            if lin.is_constant() {
                continue;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for factor in lin.equal_degree_factor(1, &mut rng) {
                // factor = x + c, root = -c.
                let root = field.neg(&factor.coeff(0));
                out.push((root, mult));
            }
        }
        out.sort_by(|a, b| field.elem_key(&a.0).cmp(&field.elem_key(&b.0)));
        out
    }

    /// Rabin irreducibility test (deterministic).
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            Some(n) if n >= 1 => n,
            _ => return false,
        };
        if n == 1 {
            return true;
        }
        let field = self.field.clone();
        let q = field.order_big();
        let x = Self::identity(field.clone(), &self.var);
        // x^{q^n} == x mod f
        let mut h = x.clone();
        for _ in 0..n {
            h = h.pow_mod(&q, self);
        }
        if !h.sub(&x).rem(self).is_zero() {
            return false;
        }
        // For each prime t | n: gcd(x^{q^{n/t}} - x, f) constant.
        let mut m = n;
        let mut prime_divs = Vec::new();
        let mut t = 2;
        while t * t <= m {
            if m % t == 0 {
                prime_divs.push(t);
                while m % t == 0 {
                    m /= t;
                }
            }
            t += 1;
        }
        if m > 1 {
            prime_divs.push(m);
        }
        for t in prime_divs {
            let mut h = x.clone();
            for _ in 0..n / t {
                h = h.pow_mod(&q, self);
            }
            let g = self.gcd(&h.sub(&x));
            if !g.is_constant() {
                return false;
            }
        }
        true
    }

    /// Canonical text: `poly(c)=[...]` with field-canonical coefficients.
    pub fn to_text(&self) -> String {
        let body = self
            .coeffs
            .iter()
            .map(|c| self.field.elem_to_string(c))
            .collect::<Vec<_>>()
            .join(",");
        format!("poly({})=[{}]", self.var, body)
    }
}

fn coeff_keys<F: Field>(p: &FieldPoly<F>) -> Vec<Vec<u64>> {
    p.coeffs().iter().map(|c| p.field().elem_key(c)).collect()
}

/// `unit * prod factor_i^{mult_i}` = the factored polynomial; factors monic
/// irreducible, sorted by degree then coefficients.
#[derive(Clone, Debug)]
pub struct FieldFactorization<F: Field> {
    pub unit: F::Elem,
    pub factors: Vec<(FieldPoly<F>, u32)>,
}

impl<F: Field> FieldFactorization<F> {
    pub fn verify(&self, original: &FieldPoly<F>) -> bool {
        let field = original.field().clone();
        let mut acc = FieldPoly::constant_elem(field, original.var(), self.unit.clone());
        for (f, m) in &self.factors {
            for _ in 0..*m {
                acc = acc.mul(f);
            }
        }
        acc == *original
    }

    /// Serialization `p^k; unit; [(factor, mult), ...]`.
    pub fn to_text(&self, field: &F) -> String {
        let head = format!("{}^{}", field.characteristic(), field.ext_degree());
        let unit = field.elem_to_string(&self.unit);
        let body = self
            .factors
            .iter()
            .map(|(f, m)| format!("({},{})", f.to_text(), m))
            .collect::<Vec<_>>()
            .join(",");
        format!("{head}; {unit}; [{body}]")
    }
}

// --- Reductions from Z[x] ---

/// Coefficientwise reduction of an integer polynomial mod p.
pub fn reduce_mod_p(poly: &IntPoly, p: u64) -> Result<FieldPoly<PrimeField>> {
    let field = PrimeField::new(p)?;
    let coeffs = poly.coeffs().iter().map(|c| field.from_bigint(c)).collect();
    Ok(FieldPoly::from_elems(field, poly.var(), coeffs))
}

/// Reduction into an extension field (coefficients land in the prime
/// subfield).
pub fn reduce_mod_ext(poly: &IntPoly, field: &ExtField) -> FieldPoly<ExtField> {
    let coeffs = poly
        .coeffs()
        .iter()
        .map(|c| field.from_bigint(c))
        .collect();
    FieldPoly::from_elems(field.clone(), poly.var(), coeffs)
}

/// True iff P mod p is squarefree, i.e. gcd(P mod p, P' mod p) is constant.
/// Rejects p | lc(P): the degree drop invalidates the discriminant criterion.
pub fn is_squarefree_mod(poly: &IntPoly, p: u64) -> Result<bool> {
    let reduced = reduce_mod_p(poly, p)?;
    if reduced.degree() != poly.degree() {
        return Err(Error::LeadingCoeffVanishes(p));
    }
    let g = reduced.gcd(&reduced.derivative());
    Ok(g.is_constant())
}
