//! Exact polynomial arithmetic: pinned example values, a dense Sylvester
//! determinant oracle for resultants, and randomized structural properties.

use misiurewicz::exactpoly::{BiPoly, IntPoly, RatPoly};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn p(coeffs: &[i64]) -> IntPoly {
    IntPoly::from_i64("c", coeffs)
}

fn big(s: &str) -> BigInt {
    s.parse().unwrap()
}

// --- Independent resultant oracle: Bareiss elimination on the Sylvester
// matrix. Shares no code with the subresultant path under test.

fn sylvester_resultant(a: &IntPoly, b: &IntPoly) -> BigInt {
    let m = a.degree().expect("nonzero");
    let n = b.degree().expect("nonzero");
    if m == 0 && n == 0 {
        return BigInt::one();
    }
    let size = m + n;
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for row in 0..n {
        for (k, c) in a.coeffs().iter().enumerate() {
            mat[row][row + m - k] = c.clone();
        }
    }
    for row in 0..m {
        for (k, c) in b.coeffs().iter().enumerate() {
            mat[n + row][row + n - k] = c.clone();
        }
    }
    // Fraction-free Bareiss determinant.
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..size {
        if mat[k][k].is_zero() {
            let swap = (k + 1..size).find(|&r| !mat[r][k].is_zero());
            match swap {
                Some(r) => {
                    mat.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = &mat[i][j] * &mat[k][k] - &mat[i][k] * &mat[k][j];
                mat[i][j] = num / &prev;
            }
            mat[i][k] = BigInt::zero();
        }
        prev = mat[k][k].clone();
    }
    sign * mat[size - 1][size - 1].clone()
}

// --- Pinned examples.

#[test]
fn degree_and_leading_coeff() {
    assert_eq!(p(&[]).degree(), None);
    assert_eq!(p(&[5]).degree(), Some(0));
    assert_eq!(p(&[0, 0, 3]).degree(), Some(2));
    assert_eq!(p(&[0, 0, 3]).leading_coeff(), BigInt::from(3));
    assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
}

#[test]
fn arithmetic_basics() {
    let f = p(&[1, 1]);
    let g = p(&[-1, 1]);
    assert_eq!(&f * &g, p(&[-1, 0, 1]));
    assert_eq!(&f + &g, p(&[0, 2]));
    assert_eq!(&f - &g, p(&[2]));
    assert_eq!(f.pow(3), p(&[1, 3, 3, 1]));
}

#[test]
fn var_mismatch_is_rejected() {
    let f = IntPoly::from_i64("c", &[1, 1]);
    let g = IntPoly::from_i64("t", &[1, 1]);
    assert!(f.try_add(&g).is_err());
    assert!(f.try_mul(&g).is_err());
    assert!(f.resultant(&g).is_err());
}

#[test]
fn compose_square_plus_c() {
    // f(z) = z^2 + c as a polynomial in z has no place here; composition is
    // checked on the one-variable model instead: (c^2+1) o (c+1) = c^2+2c+2.
    let outer = p(&[1, 0, 1]);
    let inner = p(&[1, 1]);
    assert_eq!(outer.compose(&inner).unwrap(), p(&[2, 2, 1]));
}

#[test]
fn evaluate_matches_horner() {
    let f = p(&[3, -2, 0, 1]);
    assert_eq!(f.evaluate(&BigInt::from(2)), BigInt::from(7));
    assert_eq!(f.evaluate(&BigInt::from(-1)), BigInt::from(4));
}

#[test]
fn exact_div_examples() {
    let prod = p(&[-1, 0, 1]);
    assert_eq!(prod.exact_div(&p(&[1, 1])).unwrap(), p(&[-1, 1]));
    assert_eq!(prod.exact_div(&p(&[-1, 1])).unwrap(), p(&[1, 1]));
    assert!(p(&[1, 0, 1]).exact_div(&p(&[1, 1])).is_err());
    assert!(p(&[1, 1]).exact_div(&p(&[])).is_err());
    // Non-monic exact divisor.
    let f = &p(&[0, 2]) * &p(&[3, 0, 1]);
    assert_eq!(f.exact_div(&p(&[0, 2])).unwrap(), p(&[3, 0, 1]));
}

#[test]
fn content_primitive_examples() {
    // 6c^2 + 4c -> (+, 2, 3c^2 + 2c)
    let (sign, content, prim) = p(&[0, 4, 6]).content_primitive();
    assert_eq!(sign, 1);
    assert_eq!(content, BigInt::from(2));
    assert_eq!(prim, p(&[0, 2, 3]));
    // -c -> (-, 1, c)
    let (sign, content, prim) = p(&[0, -1]).content_primitive();
    assert_eq!(sign, -1);
    assert_eq!(content, BigInt::one());
    assert_eq!(prim, p(&[0, 1]));
    // 0 -> (0, 0, 0)
    let (sign, content, prim) = p(&[]).content_primitive();
    assert_eq!(sign, 0);
    assert!(content.is_zero());
    assert!(prim.is_zero());
}

#[test]
fn gcd_examples() {
    let f = &p(&[1, 1]) * &p(&[-1, 1]);
    let g = &p(&[1, 1]) * &p(&[2, 1]);
    assert_eq!(f.gcd_poly(&g).unwrap(), p(&[1, 1]));
    // Coprime pair gives 1.
    assert_eq!(p(&[1, 0, 1]).gcd_poly(&p(&[0, 1])).unwrap(), p(&[1]));
    // Contents are stripped: gcd(2c+2, 4c+4) = c+1.
    assert_eq!(p(&[2, 2]).gcd_poly(&p(&[4, 4])).unwrap(), p(&[1, 1]));
    // gcd with zero returns the primitive part of the other argument.
    assert_eq!(p(&[]).gcd_poly(&p(&[0, -3])).unwrap(), p(&[0, 1]));
    assert!(p(&[]).gcd_poly(&p(&[])).is_err());
}

#[test]
fn resultant_examples() {
    // Res(c, c+1) = 1.
    assert_eq!(p(&[0, 1]).resultant(&p(&[1, 1])).unwrap(), BigInt::one());
    // Shared root forces zero.
    let f = &p(&[1, 1]) * &p(&[-2, 1]);
    let g = &p(&[1, 1]) * &p(&[5, 1]);
    assert_eq!(f.resultant(&g).unwrap(), BigInt::zero());
    // Res(v - a, v + a) = 2a under the convention lc(A)^{deg B} prod B(roots of A).
    let a_var = "a";
    let vma = BiPoly::new(
        a_var,
        "v",
        vec![IntPoly::from_i64(a_var, &[0, -1]), IntPoly::from_i64(a_var, &[1])],
    )
    .unwrap();
    let vpa = BiPoly::new(
        a_var,
        "v",
        vec![IntPoly::from_i64(a_var, &[0, 1]), IntPoly::from_i64(a_var, &[1])],
    )
    .unwrap();
    assert_eq!(vma.resultant_v(&vpa).unwrap(), IntPoly::from_i64(a_var, &[0, 2]));
}

#[test]
fn resultant_of_constants() {
    assert_eq!(p(&[7]).resultant(&p(&[5])).unwrap(), BigInt::one());
    assert_eq!(p(&[7]).resultant(&p(&[1, 0, 1])).unwrap(), BigInt::from(49));
    assert_eq!(p(&[1, 0, 1]).resultant(&p(&[7])).unwrap(), BigInt::from(49));
}

#[test]
fn discriminant_examples() {
    // Disc(c^3 + 2c^2 + c + 1) = -23 pins both convention and sign.
    assert_eq!(p(&[1, 1, 2, 1]).discriminant().unwrap(), BigInt::from(-23));
    assert_eq!(p(&[1, 0, 1]).discriminant().unwrap(), BigInt::from(-4));
    // Repeated root kills the discriminant.
    let sq = &p(&[-1, 1]) * &p(&[-1, 1]);
    assert_eq!(sq.discriminant().unwrap(), BigInt::zero());
    // Quadratic formula check: Disc(ax^2+bx+c) = b^2 - 4ac.
    assert_eq!(p(&[5, 3, 2]).discriminant().unwrap(), BigInt::from(9 - 40));
    // Constants are rejected.
    assert!(p(&[3]).discriminant().is_err());
    assert!(p(&[]).discriminant().is_err());
}

#[test]
fn discriminant_large_pinned() {
    // Disc(c^7 + 14c^4 - 7c^3 + 49c + 7) computed by an independent system.
    let f = p(&[7, 49, 0, -7, 14, 0, 0, 1]);
    assert_eq!(f.discriminant().unwrap(), big("6550755941807273"));
}

#[test]
fn text_forms() {
    assert_eq!(p(&[1, 1, 2, 1]).to_text(), "poly(c)=[1,1,2,1]");
    assert_eq!(p(&[]).to_text(), "poly(c)=[]");
    let f = IntPoly::from_text("poly(c)=[1,1,2,1]").unwrap();
    assert_eq!(f, p(&[1, 1, 2, 1]));
    assert!(IntPoly::from_text("poly(c)=[1,x]").is_err());
    assert!(IntPoly::from_text("nope").is_err());
    // Bivariate nesting, outer index = degree in v.
    let t = BiPoly::new(
        "a",
        "v",
        vec![IntPoly::from_i64("a", &[0, 0, 0, 4]), IntPoly::from_i64("a", &[1])],
    )
    .unwrap();
    assert_eq!(t.to_text(), "poly(a,v)=[[0,0,0,4],[1]]");
}

#[test]
fn bipoly_arithmetic_and_eval() {
    let a = "a";
    let v = BiPoly::v_identity(a, "v");
    let a_poly = BiPoly::from_a_poly(IntPoly::identity(a), "v");
    // (v - a)(v + a) = v^2 - a^2
    let prod = &(&v - &a_poly) * &(&v + &a_poly);
    let expect = &(&v * &v)
        - &BiPoly::from_a_poly(IntPoly::from_i64(a, &[0, 0, 1]), "v");
    assert_eq!(prod, expect);
    assert_eq!(prod.deg_v(), Some(2));
    assert_eq!(prod.deg_a(), Some(2));
    // Partial evaluation both ways.
    assert_eq!(prod.evaluate_a(&BigInt::from(3)), IntPoly::from_i64("v", &[-9, 0, 1]));
    assert_eq!(prod.evaluate_v(&BigInt::from(3)), IntPoly::from_i64(a, &[9, 0, -1]));
    // Full rational evaluation.
    let two = num_rational::BigRational::from_integer(BigInt::from(2));
    let five = num_rational::BigRational::from_integer(BigInt::from(5));
    assert_eq!(
        prod.evaluate(&two, &five),
        num_rational::BigRational::from_integer(BigInt::from(21))
    );
}

#[test]
fn bipoly_exact_div_and_derivatives() {
    let a = "a";
    let v = BiPoly::v_identity(a, "v");
    let a_poly = BiPoly::from_a_poly(IntPoly::identity(a), "v");
    let f = &(&v - &a_poly) * &(&v + &a_poly);
    assert_eq!(f.exact_div(&(&v - &a_poly)).unwrap(), &v + &a_poly);
    assert!(f.exact_div(&(&v + &BiPoly::constant(a, "v", 1))).is_err());
    // d/dv (v^2 - a^2) = 2v, d/da = -2a.
    let dv = f.derivative_v();
    assert_eq!(dv, &v + &v);
    let da = f.derivative_a();
    assert_eq!(
        da,
        BiPoly::from_a_poly(IntPoly::from_i64(a, &[0, -2]), "v")
    );
}

#[test]
fn ratpoly_reduction_and_rem() {
    let num = IntPoly::from_i64("c", &[2, 4]);
    let r = RatPoly::new(num, BigInt::from(-6)).unwrap();
    // (2+4c)/(-6) normalizes to (-1-2c)/3.
    assert_eq!(r.num(), &IntPoly::from_i64("c", &[-1, -2]));
    assert_eq!(r.den(), &BigInt::from(3));
    // Remainder over Q: c^2+1 mod 2c+1 leaves 5/4.
    let f = RatPoly::from_int_poly(IntPoly::from_i64("c", &[1, 0, 1]));
    let g = RatPoly::from_int_poly(IntPoly::from_i64("c", &[1, 2]));
    let rem = f.rem(&g).unwrap();
    assert_eq!(rem.num(), &IntPoly::from_i64("c", &[5]));
    assert_eq!(rem.den(), &BigInt::from(4));
}

// --- Naive rational-Euclid GCD oracle built on RatPoly (monic remainders).

fn euclid_gcd_oracle(f: &IntPoly, g: &IntPoly) -> IntPoly {
    let mut a = RatPoly::from_int_poly(f.clone());
    let mut b = RatPoly::from_int_poly(g.clone());
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        let r = a.rem(&b).unwrap();
        a = b;
        b = r;
    }
    a.num().primitive_part()
}

// --- Randomized structural properties.

fn arb_poly(max_deg: usize, max_abs: i64) -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-max_abs..=max_abs, 1..=max_deg + 1)
        .prop_map(|cs| IntPoly::from_i64("c", &cs))
}

fn arb_nonzero_poly(max_deg: usize, max_abs: i64) -> impl Strategy<Value = IntPoly> {
    arb_poly(max_deg, max_abs).prop_filter("nonzero", |f| !f.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn prop_resultant_matches_sylvester_oracle(
        f in arb_nonzero_poly(6, 20),
        g in arb_nonzero_poly(6, 20),
    ) {
        prop_assert_eq!(f.resultant(&g).unwrap(), sylvester_resultant(&f, &g));
    }

    #[test]
    fn prop_resultant_swap_sign(
        f in arb_nonzero_poly(6, 20),
        g in arb_nonzero_poly(6, 20),
    ) {
        let rfg = f.resultant(&g).unwrap();
        let rgf = g.resultant(&f).unwrap();
        let m = f.degree().unwrap();
        let n = g.degree().unwrap();
        if (m * n) % 2 == 0 {
            prop_assert_eq!(rfg, rgf);
        } else {
            prop_assert_eq!(rfg, -rgf);
        }
    }

    #[test]
    fn prop_resultant_multiplicative(
        f in arb_nonzero_poly(4, 10),
        g in arb_nonzero_poly(4, 10),
        h in arb_nonzero_poly(4, 10),
    ) {
        let fg = &f * &g;
        let lhs = fg.resultant(&h).unwrap();
        let rhs = f.resultant(&h).unwrap() * g.resultant(&h).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn prop_disc_product_rule(
        f in arb_nonzero_poly(4, 10).prop_filter("deg>=1", |f| f.degree().unwrap() >= 1),
        g in arb_nonzero_poly(4, 10).prop_filter("deg>=1", |g| g.degree().unwrap() >= 1),
    ) {
        // Disc(fg) = Disc(f) Disc(g) Res(f,g)^2
        let fg = &f * &g;
        let lhs = fg.discriminant().unwrap();
        let res = f.resultant(&g).unwrap();
        let rhs = f.discriminant().unwrap() * g.discriminant().unwrap() * (&res * &res);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn prop_exact_div_recovers_factor(
        f in arb_nonzero_poly(5, 12),
        g in arb_nonzero_poly(5, 12),
    ) {
        let fg = &f * &g;
        prop_assert_eq!(fg.exact_div(&g).unwrap(), f);
    }

    #[test]
    fn prop_gcd_matches_euclid_oracle(
        f in arb_nonzero_poly(8, 15),
        g in arb_nonzero_poly(8, 15),
        h in arb_nonzero_poly(3, 6),
    ) {
        // Plant a common factor so nontrivial GCDs are actually exercised.
        let fh = &f * &h;
        let gh = &g * &h;
        prop_assert_eq!(fh.gcd_poly(&gh).unwrap(), euclid_gcd_oracle(&fh, &gh));
    }

    #[test]
    fn prop_gcd_divides_both(
        f in arb_nonzero_poly(6, 12),
        g in arb_nonzero_poly(6, 12),
    ) {
        let d = f.gcd_poly(&g).unwrap();
        prop_assert!(f.exact_div(&d).is_ok() || f.is_zero());
        prop_assert!(g.exact_div(&d).is_ok() || g.is_zero());
    }

    #[test]
    fn prop_content_primitive_reassembles(
        f in arb_poly(6, 30),
    ) {
        let (sign, content, prim) = f.content_primitive();
        let signed = BigInt::from(sign) * content;
        prop_assert_eq!(prim.scale(&signed), f.clone());
        if !f.is_zero() {
            prop_assert!(prim.leading_coeff().is_positive());
            let (_, c2, _) = prim.content_primitive();
            prop_assert_eq!(c2, BigInt::one());
        }
    }

    #[test]
    fn prop_text_round_trip(f in arb_poly(8, 1000)) {
        prop_assert_eq!(IntPoly::from_text(&f.to_text()).unwrap(), f);
    }

    #[test]
    fn prop_bipoly_resultant_commutes_with_eval(
        fc in prop::collection::vec(-6i64..=6, 2..=4),
        gc in prop::collection::vec(-6i64..=6, 2..=4),
        a0 in -5i64..=5,
    ) {
        // Res_v specializes correctly: Res(F, G)|_{a=a0} = +/- lc-adjusted
        // Res(F|_{a0}, G|_{a0}); testing only the generic case where the
        // leading v-coefficients do not vanish at a0 keeps the statement exact.
        let mk = |cs: &[i64]| {
            let coeffs = cs.iter().enumerate().map(|(i, &k)| {
                IntPoly::from_i64("a", &[k, if i == 0 { 1 } else { 0 }])
            }).collect();
            BiPoly::new("a", "v", coeffs).unwrap()
        };
        let f = mk(&fc);
        let g = mk(&gc);
        let a0 = BigInt::from(a0);
        let fa = f.evaluate_a(&a0);
        let ga = g.evaluate_a(&a0);
        prop_assume!(fa.degree() == f.deg_v() && ga.degree() == g.deg_v());
        let r = f.resultant_v(&g).unwrap();
        prop_assert_eq!(r.evaluate(&a0), fa.resultant(&ga).unwrap());
    }
}
