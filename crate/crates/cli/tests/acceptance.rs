//! Acceptance gate: one test per shipping criterion, each printing a single
//! PASS/FAIL line with its runtime. Tolerances and budgets are pinned here.

use std::panic::AssertUnwindSafe;
use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Pow;

use misiurewicz::bicritical::{
    fk_bicritical, g_iterate, jacobian_det, pcf_solve, t_poly, CriticalSign, A_VAR, V_VAR,
};
use misiurewicz::dynatomic::{critical_iterate, divisors, gleason, misiurewicz_count, PeriodPair};
use misiurewicz::exactpoly::{BiPoly, IntPoly};
use misiurewicz::finitefield::is_squarefree_mod;
use misiurewicz::intfactor::{factor_int, valuation};
use misiurewicz::ratfactor::factor_over_q;
use misiurewicz::transversality::{
    disc_gleason, disc_multiplicativity_check, divisibility_sequence_check, ramification_report,
    resultant_coprime_check, scan_primes,
};

fn criterion(id: u32, name: &str, budget: Duration, body: impl FnOnce()) {
    let start = Instant::now();
    let outcome = std::panic::catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    match outcome {
        Ok(()) if elapsed <= budget => {
            println!("criterion {id:02} [{name}]: PASS ({elapsed:.2?})");
        }
        Ok(()) => {
            println!(
                "criterion {id:02} [{name}]: FAIL (over budget: {elapsed:.2?} > {budget:.2?})"
            );
            panic!("criterion {id} exceeded its runtime budget");
        }
        Err(cause) => {
            println!("criterion {id:02} [{name}]: FAIL ({elapsed:.2?})");
            std::panic::resume_unwind(cause);
        }
    }
}

fn big(s: &str) -> BigInt {
    s.parse().unwrap()
}

fn bpow(b: u64, e: u32) -> BigInt {
    Pow::pow(&BigInt::from(b), e)
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_misiurewicz"))
}

fn run_cli(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../golden").join(name)
}

#[test]
fn acceptance_01_disc_table_d2() {
    criterion(1, "discriminant table d=2", Duration::from_secs(30 + 600), || {
        let expected = [
            BigInt::from(1),
            BigInt::from(1),
            BigInt::from(-23),
            BigInt::from(23u64 * 2551),
            BigInt::from(13u64) * BigInt::from(24554691821639909u64),
            -(BigInt::from(13u64 * 13)
                * BigInt::from(949818439u64)
                * big("6488190752068386528993226361")),
        ];
        let t = Instant::now();
        for (n, want) in (1..=6).zip(expected) {
            assert_eq!(disc_gleason(2, 0, n).unwrap(), want, "D_2(0,{n})");
        }
        assert!(t.elapsed() < Duration::from_secs(30), "n <= 6 within 30 s");

        // n = 7 is verified against the shipped factor table, not discovered.
        let path = golden("disc_d2_m0_n7.txt");
        let t = Instant::now();
        let out = run_cli(&[
            "disc", "--d", "2", "--m", "0", "--n", "7", "--factor", "verify",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        let stdout = String::from_utf8(out.stdout).unwrap();
        assert!(stdout.starts_with("verified -1 * 8291 * 9137 * 420221"));
        assert!(t.elapsed() < Duration::from_secs(600), "n = 7 within 10 min");
    });
}

#[test]
fn acceptance_02_disc_table_d3() {
    criterion(2, "discriminant table d=3", Duration::from_secs(60 + 600), || {
        let expected = [
            BigInt::from(-4),
            bpow(2, 8) * bpow(229, 2),
            bpow(2, 24) * bpow(41, 2) * bpow(101, 2) * bpow(1163, 2) * bpow(2136287, 2),
        ];
        let t = Instant::now();
        for (n, want) in (2..=4).zip(expected) {
            assert_eq!(disc_gleason(3, 0, n).unwrap(), want, "D_3(0,{n})");
        }
        assert!(t.elapsed() < Duration::from_secs(60));

        let path = golden("disc_d3_m0_n5.txt");
        let out = run_cli(&[
            "disc", "--d", "3", "--m", "0", "--n", "5", "--factor", "verify",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        let stdout = String::from_utf8(out.stdout).unwrap();
        assert!(stdout.starts_with("verified 2^80 * 23^2 * 4327254999"));
    });
}

#[test]
fn acceptance_03_disc_d5_and_mod_shapes() {
    criterion(3, "D_5(0,3) and ramification shapes", Duration::from_secs(60), || {
        let disc = disc_gleason(5, 0, 3).unwrap();
        assert_eq!(disc, bpow(2, 48) * bpow(101, 4) * bpow(431, 4));

        let g = gleason(5, 0, 3).unwrap().poly;
        // Mod 101: four squared linear factors.
        let rep = ramification_report(&g, 101, valuation(&disc, &BigInt::from(101)).unwrap())
            .unwrap();
        let repeated: Vec<&(u32, u32)> = rep.pairs.iter().filter(|(e, _)| *e > 1).collect();
        assert_eq!(repeated, vec![&(2, 1); 4]);
        assert_eq!(rep.lower_bound, 4);
        assert_eq!(rep.observed_valuation, 4);
        // Mod 431: two squared quadratic factors.
        let rep = ramification_report(&g, 431, valuation(&disc, &BigInt::from(431)).unwrap())
            .unwrap();
        let repeated: Vec<&(u32, u32)> = rep.pairs.iter().filter(|(e, _)| *e > 1).collect();
        assert_eq!(repeated, vec![&(2, 2); 2]);
        assert_eq!(rep.lower_bound, 4);
        assert_eq!(rep.observed_valuation, 4);
    });
}

#[test]
fn acceptance_04_degree_seven_recombination() {
    criterion(4, "G_7(0,3) factor/disc/resultant recombination", Duration::from_secs(300), || {
        let g = gleason(7, 0, 3).unwrap().poly;
        let fz = factor_over_q(&g).unwrap();
        assert!(fz.verify(&g));
        let mut degrees: Vec<usize> =
            fz.factors.iter().map(|(f, _)| f.degree().unwrap()).collect();
        degrees.sort_unstable();
        assert_eq!(degrees, vec![6, 6, 36]);
        assert!(fz.factors.iter().all(|(_, m)| *m == 1));

        let mut comps: Vec<IntPoly> = fz.factors.iter().map(|(f, _)| f.clone()).collect();
        comps.sort_by_key(|f| f.degree().unwrap());
        let d1 = comps[0].discriminant().unwrap();
        let d2 = comps[1].discriminant().unwrap();
        let d3 = comps[2].discriminant().unwrap();
        assert_eq!(d1, -bpow(3, 9));
        assert_eq!(d2, -bpow(3, 9));
        assert_eq!(d3, bpow(2, 36) * bpow(3, 36) * bpow(14731, 6));

        let r12 = comps[0].resultant(&comps[1]).unwrap();
        let r13 = comps[0].resultant(&comps[2]).unwrap();
        let r23 = comps[1].resultant(&comps[2]).unwrap();
        assert_eq!(r12.magnitude(), bpow(2, 6).magnitude());
        assert_eq!(r13.magnitude(), bpow(19, 3).magnitude());
        assert_eq!(r23.magnitude(), bpow(19, 3).magnitude());

        // Disc(PQR) = Disc(P) Disc(Q) Disc(R) (Res(P,Q) Res(P,R) Res(Q,R))^2.
        let recombined = &d1 * &d2 * &d3 * (&r12 * &r13 * &r23).pow(2u32);
        let want = bpow(2, 48) * bpow(3, 54) * bpow(19, 12) * bpow(14731, 6);
        assert_eq!(recombined, want);
        assert_eq!(disc_gleason(7, 0, 3).unwrap(), want);
    });
}

#[test]
fn acceptance_05_prime_scan_table() {
    criterion(5, "prime scan d=2, p <= 2600", Duration::from_secs(300), || {
        let out = run_cli(&["primes", "--d", "2", "--nmax", "14", "--pmax", "2600"]);
        assert!(out.status.success());
        let stdout = String::from_utf8(out.stdout).unwrap();
        let mut pairs: Vec<(u32, u64)> = stdout
            .lines()
            .map(|row| {
                let cols: Vec<&str> = row.split('\t').collect();
                assert_eq!(cols.len(), 6);
                assert_eq!(cols[0], "2");
                assert_eq!(cols[3], "1");
                (cols[1].parse().unwrap(), cols[2].parse().unwrap())
            })
            .collect();
        pairs.sort_unstable();
        // The published pairs plus (4,23): 23 divides D_2(0,4) = 23 * 2551,
        // so the scan must report it; the table's (4,24) line is a typo and
        // contributes nothing at p <= 2600.
        let want: Vec<(u32, u64)> = vec![
            (3, 23),
            (4, 23),
            (4, 2551),
            (5, 13),
            (8, 1433),
            (9, 137),
            (11, 547),
            (11, 1613),
            (12, 211),
            (13, 317),
            (14, 431),
            (14, 2179),
        ];
        assert_eq!(pairs, want);
        assert!(!pairs.iter().any(|(n, _)| *n == 7), "n = 7 prime exceeds the cutoff");

        // Extension fields: n = 6 invisible over F_13, visible over F_169.
        let out = run_cli(&["primes", "--d", "2", "--nmax", "6", "--pmax", "13", "--ext", "1"]);
        let k1 = String::from_utf8(out.stdout).unwrap();
        assert!(!k1.lines().any(|r| r.split('\t').nth(1) == Some("6")));
        let out = run_cli(&["primes", "--d", "2", "--nmax", "6", "--pmax", "13", "--ext", "2"]);
        let k2 = String::from_utf8(out.stdout).unwrap();
        let hits: Vec<&str> =
            k2.lines().filter(|r| r.split('\t').nth(1) == Some("6")).collect();
        assert_eq!(hits, vec!["2\t6\t13\t2\t[5,1]\t6", "2\t6\t13\t2\t[5,12]\t6"]);
    });
}

#[test]
fn acceptance_06_mod13_ramification() {
    criterion(6, "G_2(0,6) mod 13 ramification", Duration::from_secs(10), || {
        let g = gleason(2, 0, 6).unwrap().poly;
        let disc = disc_gleason(2, 0, 6).unwrap();
        let val = valuation(&disc, &BigInt::from(13)).unwrap();
        assert_eq!(val, 2);
        let rep = ramification_report(&g, 13, val).unwrap();
        let repeated: Vec<&(u32, u32)> = rep.pairs.iter().filter(|(e, _)| *e > 1).collect();
        assert_eq!(repeated, vec![&(2, 2)], "one repeated factor, degree 2, multiplicity 2");
        assert_eq!(rep.lower_bound, 2);
        assert_eq!(rep.observed_valuation, 2);
        assert!(rep.tame);
    });
}

#[test]
fn acceptance_07_counting_formula() {
    criterion(7, "deg G = closed count", Duration::from_secs(60), || {
        let mut cases: Vec<(u32, u32, u32)> = Vec::new();
        for d in [2, 3] {
            for m in 0..=3 {
                for n in 1..=3 {
                    cases.push((d, m, n));
                }
            }
        }
        for d in [4, 5] {
            for m in 0..=2 {
                for n in 1..=2 {
                    cases.push((d, m, n));
                }
            }
        }
        for (d, m, n) in cases {
            let g = gleason(d, m, n).unwrap();
            let deg = g.poly.degree().map(BigInt::from).unwrap_or_default();
            assert_eq!(deg, misiurewicz_count(d, m, n), "(d,m,n)=({d},{m},{n})");
        }
    });
}

#[test]
fn acceptance_08_structural_identities() {
    criterion(8, "product/disc/resultant/divisibility identities", Duration::from_secs(300), || {
        // prod_{k|n} G_d(0,k) = f^n(0).
        for d in 2..=5u32 {
            for n in 1..=6u32 {
                let mut prod = IntPoly::constant("c", 1);
                for k in divisors(n) {
                    prod = &prod * &gleason(d, 0, k).unwrap().poly;
                }
                assert_eq!(prod, critical_iterate(d, n).unwrap(), "d={d} n={n}");
            }
        }
        // Disc(f^n(0)) recombines from the G_d(0,k) discs and resultants.
        for d in 2..=3u32 {
            for n in 1..=5u32 {
                assert!(disc_multiplicativity_check(d, n).unwrap(), "d={d} n={n}");
            }
        }
        // Distinct periods are coprime.
        for d in 2..=3u32 {
            for n in 2..=5u32 {
                for m in 1..n {
                    let r = resultant_coprime_check(d, n, m).unwrap();
                    assert!(r.magnitude() == bpow(1, 1).magnitude(), "d={d} m={m} n={n}");
                }
            }
        }
        // Disc(f^m(0)) | Disc(f^n(0)) for m | n.
        assert!(divisibility_sequence_check(2, 6).unwrap());
        // Monic and squarefree over Q in every computed case.
        for d in 2..=3u32 {
            for m in 0..=3u32 {
                for n in 1..=3u32 {
                    let g = gleason(d, m, n).unwrap().poly;
                    if let Some(deg) = g.degree() {
                        assert_eq!(g.coeff(deg), BigInt::from(1), "monic d={d} m={m} n={n}");
                        if deg > 0 {
                            let gcd = g.gcd_poly(&g.derivative()).unwrap();
                            assert_eq!(gcd.degree(), Some(0), "squarefree d={d} m={m} n={n}");
                        }
                    }
                }
            }
        }
    });
}

#[test]
fn acceptance_09_characteristic_p_specials() {
    criterion(9, "characteristic-p behavior", Duration::from_secs(120), || {
        // Squarefree mod 2 despite disc parity heuristics.
        for n in 1..=8u32 {
            assert!(is_squarefree_mod(&gleason(2, 0, n).unwrap().poly, 2).unwrap(), "n={n}");
        }
        // No failures at p | d.
        assert!(scan_primes(2, 1..=12, 2, 1).is_empty());
        assert!(scan_primes(3, 1..=12, 3, 1).iter().all(|r| r.p != 3));
        // val_2(D_3(0,n)) = deg G_3(0,n).
        for n in 2..=4u32 {
            let disc = disc_gleason(3, 0, n).unwrap();
            let g = gleason(3, 0, n).unwrap().poly;
            assert_eq!(
                valuation(&disc, &BigInt::from(2)).unwrap() as usize,
                g.degree().unwrap(),
                "n={n}"
            );
        }
        // Every prime valuation of D_3(0,n) is even for n <= 4.
        for n in 2..=4u32 {
            let disc = disc_gleason(3, 0, n).unwrap();
            let factors = factor_int(&disc, 1_000_000).unwrap();
            assert!(!factors.has_composite_residue(), "n={n}");
            assert!(factors.entries.iter().all(|e| e.exp % 2 == 0), "n={n}");
        }
    });
}

#[test]
fn acceptance_10_bicritical_example() {
    criterion(10, "bicritical identities and PCF solve", Duration::from_secs(300), || {
        // Orbit-quotient identity, exact in Z[a,v].
        for sign in [CriticalSign::Plus, CriticalSign::Minus] {
            for m in 1..=3u32 {
                for k in 1..=2u32 {
                    let lhs = g_iterate(m + k, sign)
                        .unwrap()
                        .try_sub(&g_iterate(m, sign).unwrap())
                        .unwrap();
                    let den = g_iterate(m + k - 1, sign)
                        .unwrap()
                        .try_sub(&g_iterate(m - 1, sign).unwrap())
                        .unwrap();
                    let rhs = den.try_mul(&fk_bicritical(m, k, sign).unwrap()).unwrap();
                    assert_eq!(lhs, rhs, "m={m} k={k} {}", sign.as_str());
                }
            }
        }

        // The multiplicity-2 intersection point of T(2,2,+a) and T(1,2,-a).
        let sols = pcf_solve(2, 2, 1, 2, 1e-6).unwrap();
        let scale = 4.0_f64.powf(-1.0 / 3.0);
        let target = (Complex64::new(0.0, scale), Complex64::new(0.0, -scale));
        let hit = sols
            .iter()
            .find(|s| (s.a - target.0).norm() < 1e-8 && (s.v - target.1).norm() < 1e-8)
            .expect("pinned example point");
        assert_eq!(hit.portrait_plus, PeriodPair::new(2, 2));
        assert_eq!(hit.portrait_minus, PeriodPair::new(1, 2));
        assert!(hit.jacobian_det.norm() < 1e-6, "multiplicity > 1 at the example point");
        let vplus_a = BiPoly::new(
            A_VAR,
            V_VAR,
            vec![IntPoly::identity(A_VAR), IntPoly::constant(A_VAR, 1)],
        )
        .unwrap();
        let t2 = t_poly(1, 2, CriticalSign::Minus).unwrap().poly;
        assert!(
            jacobian_det(&vplus_a, &t2, (hit.a, hit.v)).norm() > 1e-3,
            "transverse after replacing T1 by v + a"
        );

        // Fixed-point versus fixed-point: two survivors after exclusion.
        let sols = pcf_solve(0, 1, 0, 1, 1e-6).unwrap();
        let kept: Vec<_> = sols.iter().filter(|s| !s.excluded).collect();
        assert_eq!(kept.len(), 2);
        for s in kept {
            assert!((s.v - s.a).norm() < 1e-10);
            assert!((s.a * s.a - Complex64::new(-0.5, 0.0)).norm() < 1e-10);
        }
    });
}
