//! Factorization of integer polynomials into irreducibles over Q:
//! squarefree split, good-prime modular factorization, quadratic Hensel
//! lifting to a Mignotte-style bound, and subset recombination with
//! early-exit trial division.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactpoly::IntPoly;
use crate::finitefield::{reduce_mod_p, Field, FieldPoly, PrimeField};
use crate::intfactor::is_prime_u64;

/// `content * prod factors_i^{mult_i}` = the input; factors are primitive
/// irreducible with positive leading coefficient, pairwise non-associate,
/// sorted by degree then coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyFactorization {
    pub content: BigRational,
    pub factors: Vec<(IntPoly, u32)>,
}

impl PolyFactorization {
    pub fn verify(&self, original: &IntPoly) -> bool {
        if original.is_zero() {
            return false;
        }
        let mut acc = IntPoly::constant(original.var(), 1);
        for (f, m) in &self.factors {
            for _ in 0..*m {
                acc = &acc * f;
            }
        }
        // content is integral for integer input; scale and compare.
        if !self.content.denom().is_one() {
            return false;
        }
        acc.scale(self.content.numer()) == *original
    }

    /// `-23 * (poly(c)=[1,1])^2` style text.
    pub fn to_text(&self) -> String {
        let mut parts = Vec::new();
        if !self.content.is_one() || self.factors.is_empty() {
            parts.push(self.content.to_string());
        }
        for (f, m) in &self.factors {
            if *m == 1 {
                parts.push(format!("({})", f.to_text()));
            } else {
                parts.push(format!("({})^{}", f.to_text(), m));
            }
        }
        parts.join(" * ")
    }
}

/// How irreducibility was decided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IrredCertificate {
    /// Irreducible modulo this good prime, hence over Q.
    IrreducibleModP(u64),
    /// Full rational factorization was computed.
    FactoredOverQ,
}

#[derive(Clone, Debug)]
pub struct IrreducibilityReport {
    pub irreducible: bool,
    /// Number of distinct irreducible factors over Q.
    pub num_factors: usize,
    pub certificate: IrredCertificate,
}

// --- Arithmetic helpers mod m (m a prime power, coefficients in [0, m)) ---

fn reduce(f: &IntPoly, m: &BigInt) -> IntPoly {
    IntPoly::new(f.var(), f.coeffs().iter().map(|c| c.mod_floor(m)).collect())
}

fn add_m(a: &IntPoly, b: &IntPoly, m: &BigInt) -> IntPoly {
    reduce(&(a + b), m)
}

fn sub_m(a: &IntPoly, b: &IntPoly, m: &BigInt) -> IntPoly {
    reduce(&(a - b), m)
}

fn mul_m(a: &IntPoly, b: &IntPoly, m: &BigInt) -> IntPoly {
    reduce(&(a * b), m)
}

/// Division by a monic divisor with all arithmetic mod m.
fn divmod_monic_m(f: &IntPoly, h: &IntPoly, m: &BigInt) -> (IntPoly, IntPoly) {
    let dd = h.degree().expect("monic divisor");
    debug_assert!(h.leading_coeff().is_one());
    let mut rem: Vec<BigInt> = f.coeffs().to_vec();
    if rem.len() < dd + 1 {
        return (IntPoly::zero(f.var()), f.clone());
    }
    let dn = rem.len() - 1;
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for i in (0..=dn - dd).rev() {
        let lead = rem[i + dd].clone();
        if lead.is_zero() {
            continue;
        }
        for (j, hc) in h.coeffs().iter().enumerate() {
            rem[i + j] = (&rem[i + j] - &lead * hc).mod_floor(m);
        }
        quot[i] = lead;
    }
    (IntPoly::new(f.var(), quot), IntPoly::new(f.var(), rem))
}

/// Maps coefficients from [0, m) to the symmetric range (-m/2, m/2].
fn symmetric(f: &IntPoly, m: &BigInt) -> IntPoly {
    let coeffs = f
        .coeffs()
        .iter()
        .map(|c| if c * 2 > *m { c - m } else { c.clone() })
        .collect();
    IntPoly::new(f.var(), coeffs)
}

fn modinv(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

// --- Squarefree decomposition over Q (Yun) ---

/// Primitive positive-lc squarefree parts with multiplicities; the product
/// of part^mult is the primitive part of the input.
pub fn squarefree_parts(f: &IntPoly) -> Result<Vec<(IntPoly, u32)>> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let f = f.primitive_part();
    if f.is_constant() {
        return Ok(Vec::new());
    }
    // Yun: all quotients below are exact over Z because the divisors are
    // primitive polynomials dividing over Q (Gauss).
    let df = f.derivative();
    let a0 = f.gcd_poly(&df)?;
    if a0.is_constant() {
        return Ok(vec![(f, 1)]);
    }
    let mut b = f.exact_div(&a0)?;
    let c = df.exact_div(&a0)?;
    let mut d = &c - &b.derivative();
    let mut out = Vec::new();
    let mut i: u32 = 1;
    loop {
        if b.is_constant() {
            break;
        }
        let a = b.gcd_poly(&d)?;
        if !a.is_constant() {
            out.push((a.clone(), i));
        }
        b = b.exact_div(&a)?;
        let c_next = d.exact_div(&a)?;
        d = &c_next - &b.derivative();
        i += 1;
    }
    Ok(out)
}

// --- Hensel lifting (factor tree, quadratic steps) ---

struct HenselNode {
    poly: IntPoly,
    kind: NodeKind,
}

enum NodeKind {
    Leaf,
    Split {
        left: Box<HenselNode>,
        right: Box<HenselNode>,
        s: IntPoly,
        t: IntPoly,
    },
}

/// Bezout pair for coprime (g, h) over F_p with s g + t h = 1,
/// deg s < deg h, deg t < deg g.
fn bezout_mod_p(
    g: &FieldPoly<PrimeField>,
    h: &FieldPoly<PrimeField>,
) -> (FieldPoly<PrimeField>, FieldPoly<PrimeField>) {
    let field = *g.field();
    let var = g.var();
    let mut r0 = g.clone();
    let mut r1 = h.clone();
    let mut s0 = FieldPoly::constant(field, var, 1);
    let mut s1 = FieldPoly::zero(field, var);
    while !r1.is_zero() {
        let (q, r) = r0.divmod(&r1);
        let s = s0.sub(&s1.mul(&q));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    // r0 is a nonzero constant gamma; x = s0/gamma satisfies x g ≡ 1 mod h.
    let gamma_inv = field.inv(&r0.coeff(0)).expect("coprime inputs");
    let x = s0.scale(&gamma_inv);
    let s = x.rem(h);
    // t = (1 - s g)/h exactly.
    let one = FieldPoly::constant(field, var, 1);
    let t = one.sub(&s.mul(g)).exact_div(h).expect("bezout identity");
    (s, t)
}

fn field_to_int(f: &FieldPoly<PrimeField>) -> IntPoly {
    IntPoly::new(
        f.var(),
        f.coeffs().iter().map(|&c| BigInt::from(c)).collect(),
    )
}

/// Builds the factor tree mod p. `factors` are monic mod p; the leftmost
/// leaf is pre-multiplied by lc so every right sibling stays monic.
fn build_tree(factors: &[FieldPoly<PrimeField>]) -> HenselNode {
    if factors.len() == 1 {
        return HenselNode { poly: field_to_int(&factors[0]), kind: NodeKind::Leaf };
    }
    let mid = factors.len() / 2;
    let left = build_tree(&factors[..mid]);
    let right = build_tree(&factors[mid..]);
    let mut gp = factors[0].clone();
    for f in &factors[1..mid] {
        gp = gp.mul(f);
    }
    let mut hp = factors[mid].clone();
    for f in &factors[mid + 1..] {
        hp = hp.mul(f);
    }
    let (s, t) = bezout_mod_p(&gp, &hp);
    HenselNode {
        poly: field_to_int(&gp.mul(&hp)),
        kind: NodeKind::Split {
            left: Box::new(left),
            right: Box::new(right),
            s: field_to_int(&s),
            t: field_to_int(&t),
        },
    }
}

/// One quadratic Hensel step: f ≡ g h (mod m), s g + t h ≡ 1 (mod m),
/// h monic, deg f = deg g + deg h. Returns (g*, h*, s*, t*) with the same
/// relations mod m^2.
fn hensel_step(
    f: &IntPoly,
    g: &IntPoly,
    h: &IntPoly,
    s: &IntPoly,
    t: &IntPoly,
    m2: &BigInt,
) -> (IntPoly, IntPoly, IntPoly, IntPoly) {
    let one = IntPoly::constant(f.var(), 1);
    let e = sub_m(f, &mul_m(g, h, m2), m2);
    let (q, r) = divmod_monic_m(&mul_m(s, &e, m2), h, m2);
    let g2 = add_m(g, &add_m(&mul_m(t, &e, m2), &mul_m(&q, g, m2), m2), m2);
    let h2 = add_m(h, &r, m2);
    let b = sub_m(&add_m(&mul_m(s, &g2, m2), &mul_m(t, &h2, m2), m2), &one, m2);
    let (c, d) = divmod_monic_m(&mul_m(s, &b, m2), &h2, m2);
    let s2 = sub_m(s, &d, m2);
    let t2 = sub_m(t, &add_m(&mul_m(t, &b, m2), &mul_m(&c, &g2, m2), m2), m2);
    (g2, h2, s2, t2)
}

fn lift_rec(node: &mut HenselNode, target: IntPoly, m2: &BigInt) {
    match &mut node.kind {
        NodeKind::Leaf => {
            node.poly = target;
        }
        NodeKind::Split { left, right, s, t } => {
            let (g2, h2, s2, t2) = hensel_step(&target, &left.poly, &right.poly, s, t, m2);
            *s = s2;
            *t = t2;
            lift_rec(left, g2, m2);
            lift_rec(right, h2, m2);
            node.poly = target;
        }
    }
}

fn collect_leaves<'a>(node: &'a HenselNode, out: &mut Vec<&'a IntPoly>) {
    match &node.kind {
        NodeKind::Leaf => out.push(&node.poly),
        NodeKind::Split { left, right, .. } => {
            collect_leaves(left, out);
            collect_leaves(right, out);
        }
    }
}

// --- Subset recombination ---

/// k-combination index iterator over 0..n.
struct Combos {
    n: usize,
    idx: Vec<usize>,
    started: bool,
    done: bool,
}

impl Combos {
    fn new(n: usize, k: usize) -> Self {
        Combos { n, idx: (0..k).collect(), started: false, done: k > n }
    }
}

impl Iterator for Combos {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.idx.clone());
        }
        let k = self.idx.len();
        if k == 0 {
            self.done = true;
            return None;
        }
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.idx[i] < self.n - (k - i) {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                return Some(self.idx.clone());
            }
        }
    }
}

/// Coefficient bound for the lift: every factor candidate lc(f)·h with h a
/// monic modular image of a true divisor of f satisfies
/// ||·||_inf <= 2^{deg f} * ||f||_2 * |lc(f)|
/// (Landau-Mignotte, with the binomial factors majorized by 2^{deg f}).
/// Lifting to modulus > 2B guarantees symmetric representatives are exact.
fn mignotte_bound(f: &IntPoly) -> BigInt {
    let norm_sq: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let sqrt = norm_sq.sqrt() + 1;
    let lc = f.leading_coeff().abs();
    (BigInt::one() << f.degree().unwrap()) * sqrt * lc
}

/// Factors a primitive squarefree positive-lc polynomial of degree >= 1.
fn factor_squarefree(f: &IntPoly) -> Result<Vec<IntPoly>> {
    let n = f.degree().unwrap();
    if n == 1 {
        return Ok(vec![f.clone()]);
    }
    let disc = f.discriminant()?;
    debug_assert!(!disc.is_zero());
    let lc = f.leading_coeff();

    // Good prime selection: p coprime to lc and Disc, minimizing the modular
    // factor count. Recombination is exponential in that count, so try 5
    // good primes, and keep looking (up to 25) while the best exceeds 20.
    let mut best: Option<(u64, Vec<FieldPoly<PrimeField>>)> = None;
    let mut good_seen = 0usize;
    let mut p: u64 = 2;
    while good_seen < 25 {
        p += 1;
        while !is_prime_u64(p) {
            p += 1;
        }
        let pb = BigInt::from(p);
        if (&lc % &pb).is_zero() || (&disc % &pb).is_zero() {
            continue;
        }
        good_seen += 1;
        let reduced = reduce_mod_p(f, p)?;
        let fact = reduced.factor(p);
        let monic_factors: Vec<FieldPoly<PrimeField>> =
            fact.factors.into_iter().map(|(g, _)| g).collect();
        let count = monic_factors.len();
        if count == 1 {
            return Ok(vec![f.clone()]);
        }
        if best.as_ref().map_or(true, |(_, b)| count < b.len()) {
            best = Some((p, monic_factors));
        }
        let best_count = best.as_ref().unwrap().1.len();
        if good_seen >= 5 && best_count <= 20 {
            break;
        }
    }
    let (p, mut modular) = best.expect("at least one good prime exists");

    // Attach lc to the leftmost factor so every Hensel division stays monic.
    let fp = PrimeField::new(p)?;
    let lc_p = fp.from_bigint(&lc);
    modular[0] = modular[0].scale(&lc_p);

    let bound = mignotte_bound(f);
    let target = &bound * 2 + 1;
    let mut tree = build_tree(&modular);
    let mut m = BigInt::from(p);
    while m < target {
        let m2 = &m * &m;
        lift_rec(&mut tree, reduce(f, &m2), &m2);
        m = m2;
    }

    // Recover monic lifted factors (divide the lc back out of leaf 0).
    let mut leaves = Vec::new();
    collect_leaves(&tree, &mut leaves);
    let lc_inv = modinv(&lc, &m).expect("p does not divide lc");
    let mut lifted: Vec<IntPoly> = leaves.into_iter().cloned().collect();
    lifted[0] = reduce(&lifted[0].scale(&lc_inv), &m);

    // Subset recombination, smallest subsets first, removing found factors.
    let mut found: Vec<IntPoly> = Vec::new();
    let mut fcur = f.clone();
    'outer: loop {
        let r = lifted.len();
        let dcur = match fcur.degree() {
            Some(d) if d >= 1 => d,
            _ => break,
        };
        if r == 1 {
            break;
        }
        let lcur = fcur.leading_coeff();
        let f0 = fcur.coeff(0);
        for size in 1..=r / 2 {
            for combo in Combos::new(r, size) {
                let dsum: usize = combo
                    .iter()
                    .map(|&i| lifted[i].degree().unwrap())
                    .sum();
                if dsum >= dcur {
                    continue;
                }
                // Cheap pretest on the trailing coefficient.
                if !f0.is_zero() {
                    let mut t0 = lcur.mod_floor(&m);
                    for &i in &combo {
                        t0 = (t0 * lifted[i].coeff(0)).mod_floor(&m);
                    }
                    if &t0 * 2 > m {
                        t0 = &t0 - &m;
                    }
                    if t0.is_zero() || !(&lcur * &f0 % &t0).is_zero() {
                        continue;
                    }
                }
                let mut cand = IntPoly::constant(f.var(), lcur.clone());
                for &i in &combo {
                    cand = reduce(&(&cand * &lifted[i]), &m);
                }
                let cand = symmetric(&cand, &m).primitive_part();
                if cand.is_constant() {
                    continue;
                }
                if let Ok(quot) = fcur.exact_div(&cand) {
                    found.push(cand);
                    fcur = quot.primitive_part();
                    let keep: Vec<IntPoly> = lifted
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| !combo.contains(i))
                        .map(|(_, g)| g.clone())
                        .collect();
                    lifted = keep;
                    continue 'outer;
                }
            }
        }
        break;
    }
    if fcur.degree().map_or(false, |d| d >= 1) {
        found.push(fcur);
    }
    Ok(found)
}

/// Complete factorization over Q.
pub fn factor_over_q(f: &IntPoly) -> Result<PolyFactorization> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let (sign, content, prim) = f.content_primitive();
    let content = BigRational::from_integer(BigInt::from(sign) * content);
    let mut factors: Vec<(IntPoly, u32)> = Vec::new();
    for (part, mult) in squarefree_parts(&prim)? {
        for irr in factor_squarefree(&part)? {
            factors.push((irr, mult));
        }
    }
    factors.sort_by(|a, b| {
        let ka = (a.0.degree(), a.0.coeffs().to_vec());
        let kb = (b.0.degree(), b.0.coeffs().to_vec());
        ka.cmp(&kb)
    });
    Ok(PolyFactorization { content, factors })
}

/// Irreducibility over Q with a cheap mod-p certificate when one exists.
pub fn is_irreducible_q(f: &IntPoly) -> Result<IrreducibilityReport> {
    match f.degree() {
        Some(d) if d >= 1 => {}
        _ => return Err(Error::DegreeTooSmall(1)),
    }
    let prim = f.primitive_part();
    let disc = prim.discriminant()?;
    if !disc.is_zero() {
        // Fast path: irreducible mod a good prime implies irreducible over Q.
        let lc = prim.leading_coeff();
        let mut good_seen = 0;
        let mut p: u64 = 2;
        while good_seen < 5 {
            p += 1;
            while !is_prime_u64(p) {
                p += 1;
            }
            let pb = BigInt::from(p);
            if (&lc % &pb).is_zero() || (&disc % &pb).is_zero() {
                continue;
            }
            good_seen += 1;
            let reduced = reduce_mod_p(&prim, p)?;
            if reduced.is_irreducible() {
                return Ok(IrreducibilityReport {
                    irreducible: true,
                    num_factors: 1,
                    certificate: IrredCertificate::IrreducibleModP(p),
                });
            }
        }
    }
    let fact = factor_over_q(&prim)?;
    let irreducible = fact.factors.len() == 1 && fact.factors[0].1 == 1;
    Ok(IrreducibilityReport {
        irreducible,
        num_factors: fact.factors.len(),
        certificate: IrredCertificate::FactoredOverQ,
    })
}
