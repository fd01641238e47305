//! `misiurewicz`: exact computations around critically preperiodic
//! polynomials, scriptable from the shell.
//!
//! Every command is deterministic for fixed flags (plus `--seed` where a
//! subroutine is randomized). Exit codes: 0 success, 1 verification
//! mismatch, 2 usage error, 3 resource cap.

use std::fmt::Display;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_traits::Signed;

use misiurewicz::bicritical::{orbit_portrait, pcf_solve};
use misiurewicz::dynatomic::{critical_iterate, divisors, gleason, misiurewicz_count};
use misiurewicz::exactpoly::IntPoly;
use misiurewicz::finitefield::is_squarefree_mod;
use misiurewicz::intfactor::{factor_int, verify_factorization, FactorList};
use misiurewicz::ratfactor::factor_over_q;
use misiurewicz::transversality::{
    disc_gleason, disc_multiplicativity_check, divisibility_sequence_check,
    resultant_coprime_check, scan_primes,
};
use misiurewicz::Error;

#[derive(Parser)]
#[command(name = "misiurewicz", version, about = "Gleason polynomials, their discriminants mod p, and the bicritical cubic PCF variety", propagate_version = true)]
struct Cli {
    /// Output format: `coeffs` and `text` are synonyms; `json` is
    /// machine-readable and also routes errors to stderr as JSON.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Coeffs,
    Json,
}

impl Format {
    fn json(self) -> bool {
        self == Format::Json
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the defining polynomial G_d(m,n) of exact period (m,n).
    Gleason {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
    },
    /// Print deg G_d(m,n) from the closed counting formula.
    Count {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
    },
    /// Discriminant D_d(m,n) = Disc(G_d(m,n)), optionally factored.
    Disc {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        /// `discover` factors the value; `verify` checks it against FILE.
        #[arg(long, value_enum)]
        factor: Option<FactorMode>,
        /// Pollard-rho budget for `--factor discover` (accepts 1e6 notation).
        #[arg(long, default_value = "1e6", value_parser = parse_effort)]
        effort: u64,
        /// Golden factorization file for `--factor verify`.
        file: Option<PathBuf>,
    },
    /// Scan primes p <= pmax for parameters where transversality fails.
    Primes {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        nmax: u32,
        #[arg(long)]
        pmax: u64,
        /// Extension degree k: failures are sought in F_{p^k}.
        #[arg(long, default_value_t = 1)]
        ext: u32,
        /// Reserved for randomized subroutines; the scan itself is exhaustive.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads for the scan.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Factor G_d(m,n) into irreducibles over Q.
    Factorq {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
    },
    /// Run a structural identity suite; exits 1 if any case fails.
    Check {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        nmax: u32,
    },
    /// Bicritical cubic family g_{a,v}(z) = z^3 - 3a^2 z + (2a^3 + v).
    Bicritical {
        #[command(subcommand)]
        cmd: BicriticalCmd,
    },
    /// Numeric portrait of both critical orbits of g_{a,v}.
    Portrait {
        /// Complex a as RE,IM.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        a: Complex64,
        /// Complex v as RE,IM.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        v: Complex64,
        #[arg(long, default_value_t = 12)]
        nmax: u32,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum BicriticalCmd {
    /// Solve T(m1,n1,+a) = T(m2,n2,-a) = 0; one JSON object per solution.
    Solve {
        #[arg(long)]
        m1: u32,
        #[arg(long)]
        n1: u32,
        #[arg(long)]
        m2: u32,
        #[arg(long)]
        n2: u32,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FactorMode {
    Discover,
    Verify,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    /// prod_{k|n} G_d(0,k) = f^n(0).
    Products,
    /// Disc(f^n(0)) = prod_{k|n} D_d(0,k) * (pairwise resultants)^2.
    Discmult,
    /// |Res(G_d(0,n), G_d(0,m))| = 1 for m < n.
    Coprime,
    /// Disc(f^m(0)) | Disc(f^n(0)) when m | n.
    Divseq,
    /// G_2(0,n) squarefree mod 2 (specific to d = 2).
    GleasonMod2,
}

/// Failure carrying the process exit code. Code 1 = verification mismatch,
/// 2 = usage, 3 = resource cap.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ResourceCap { .. } => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Display) -> Failure {
    Failure { code: 2, message: message.to_string() }
}

fn mismatch(message: impl Display) -> Failure {
    Failure { code: 1, message: message.to_string() }
}

fn parse_effort(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = s.parse().map_err(|_| format!("invalid effort {s:?}"))?;
    if !f.is_finite() || f < 0.0 || f > u64::MAX as f64 {
        return Err(format!("effort {s:?} out of range"));
    }
    Ok(f.round() as u64)
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected RE,IM, got {s:?}"))?;
    let re: f64 = re.trim().parse().map_err(|_| format!("bad real part {re:?}"))?;
    let im: f64 = im.trim().parse().map_err(|_| format!("bad imaginary part {im:?}"))?;
    Ok(Complex64::new(re, im))
}

fn validate_family(d: u32, n: u32) -> Result<(), Failure> {
    if d < 2 {
        return Err(usage(format!("--d must be at least 2, got {d}")));
    }
    if n < 1 {
        return Err(usage(format!("--n must be at least 1, got {n}")));
    }
    Ok(())
}

fn main() {
    // Die quietly when a pipeline consumer closes stdout early instead of
    // panicking mid-println.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli.command, format) {
        Ok(code) => std::process::exit(code),
        Err(f) => {
            if format.json() {
                eprintln!(
                    "{}",
                    serde_json::json!({"error": f.message, "exit_code": f.code})
                );
            } else {
                eprintln!("error: {}", f.message);
            }
            std::process::exit(f.code);
        }
    }
}

fn run(command: Command, format: Format) -> Result<i32, Failure> {
    match command {
        Command::Gleason { d, m, n } => {
            validate_family(d, n)?;
            let g = gleason(d, m, n)?;
            if format.json() {
                println!(
                    "{}",
                    serde_json::json!({
                        "d": d, "m": m, "n": n,
                        "degree": g.poly.degree().unwrap_or(0),
                        "special_case": g.special_case,
                        "poly": g.poly.to_text(),
                    })
                );
            } else {
                println!("{}", g.poly.to_text());
            }
            Ok(0)
        }
        Command::Count { d, m, n } => {
            validate_family(d, n)?;
            let count = misiurewicz_count(d, m, n);
            if format.json() {
                println!(
                    "{}",
                    serde_json::json!({"d": d, "m": m, "n": n, "count": count.to_string()})
                );
            } else {
                println!("{count}");
            }
            Ok(0)
        }
        Command::Disc { d, m, n, factor, effort, file } => {
            validate_family(d, n)?;
            let disc = disc_gleason(d, m, n)?;
            match factor {
                None => {
                    if format.json() {
                        println!(
                            "{}",
                            serde_json::json!({"d": d, "m": m, "n": n, "disc": disc.to_string()})
                        );
                    } else {
                        println!("{disc}");
                    }
                    Ok(0)
                }
                Some(FactorMode::Discover) => {
                    let factors = factor_int(&disc, effort)?;
                    if format.json() {
                        println!(
                            "{}",
                            serde_json::json!({
                                "d": d, "m": m, "n": n,
                                "disc": disc.to_string(),
                                "factors": factors.to_text(),
                                "composite_residue": factors.has_composite_residue(),
                            })
                        );
                    } else {
                        println!("{}", factors.to_text());
                    }
                    Ok(0)
                }
                Some(FactorMode::Verify) => {
                    let path = file.ok_or_else(|| usage("--factor verify needs a FILE argument"))?;
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
                    let claimed = FactorList::from_text(text.trim())?;
                    let ok = verify_factorization(&disc, &claimed);
                    if format.json() {
                        println!(
                            "{}",
                            serde_json::json!({
                                "d": d, "m": m, "n": n,
                                "disc": disc.to_string(),
                                "claimed": claimed.to_text(),
                                "verified": ok,
                            })
                        );
                    } else if ok {
                        println!("verified {}", claimed.to_text());
                    } else {
                        println!("mismatch: claimed {} != {}", claimed.to_text(), disc);
                    }
                    if ok {
                        Ok(0)
                    } else {
                        Err(mismatch(format!(
                            "factorization in {} does not verify against D_{d}({m},{n})",
                            path.display()
                        )))
                    }
                }
            }
        }
        Command::Primes { d, nmax, pmax, ext, seed: _, jobs } => {
            validate_family(d, nmax)?;
            if !(1..=2).contains(&ext) {
                return Err(usage(format!("--ext must be 1 or 2, got {ext}")));
            }
            if pmax > 100_000 {
                return Err(usage(format!("--pmax is capped at 100000, got {pmax}")));
            }
            if jobs < 1 {
                return Err(usage("--jobs must be at least 1"));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| usage(format!("cannot build worker pool: {e}")))?;
            let rows = pool.install(|| scan_primes(d, 1..=nmax, pmax, ext));
            for row in &rows {
                if format.json() {
                    println!(
                        "{}",
                        serde_json::json!({
                            "d": row.d, "n": row.n, "p": row.p, "k": row.k,
                            "c": row.c, "period": row.minimal_period,
                        })
                    );
                } else {
                    println!("{}", row.tsv_row());
                }
            }
            Ok(0)
        }
        Command::Factorq { d, m, n } => {
            validate_family(d, n)?;
            let g = gleason(d, m, n)?;
            if g.poly.degree().is_none() {
                return Err(usage("G is zero; nothing to factor"));
            }
            let fz = factor_over_q(&g.poly)?;
            if format.json() {
                let factors: Vec<serde_json::Value> = fz
                    .factors
                    .iter()
                    .map(|(f, mult)| {
                        serde_json::json!({
                            "poly": f.to_text(),
                            "degree": f.degree().unwrap_or(0),
                            "multiplicity": mult,
                        })
                    })
                    .collect();
                println!(
                    "{}",
                    serde_json::json!({
                        "d": d, "m": m, "n": n,
                        "content": fz.content.to_string(),
                        "factors": factors,
                    })
                );
            } else {
                println!("{}", fz.to_text());
            }
            Ok(0)
        }
        Command::Check { suite, d, nmax } => {
            validate_family(d, nmax)?;
            run_check(suite, d, nmax, format)
        }
        Command::Bicritical { cmd } => {
            let BicriticalCmd::Solve { m1, n1, m2, n2, tol } = cmd;
            if n1 < 1 || n2 < 1 {
                return Err(usage("periods --n1 and --n2 must be at least 1"));
            }
            if !(tol.is_finite() && tol > 0.0) {
                return Err(usage("--tol must be a positive number"));
            }
            let solutions = pcf_solve(m1, n1, m2, n2, tol)?;
            for s in &solutions {
                println!("{}", s.to_json());
            }
            Ok(0)
        }
        Command::Portrait { a, v, nmax, tol } => {
            if nmax < 1 {
                return Err(usage("--nmax must be at least 1"));
            }
            if !(tol.is_finite() && tol > 0.0) {
                return Err(usage("--tol must be a positive number"));
            }
            let (plus, minus) = orbit_portrait(a, v, nmax, tol)?;
            if format.json() {
                println!(
                    "{}",
                    serde_json::json!({"plus": [plus.m, plus.n], "minus": [minus.m, minus.n]})
                );
            } else {
                println!("+a\t{}\t{}", plus.m, plus.n);
                println!("-a\t{}\t{}", minus.m, minus.n);
            }
            Ok(0)
        }
    }
}

fn report_case(format: Format, suite: &str, d: u32, label: String, ok: bool) {
    if format.json() {
        println!(
            "{}",
            serde_json::json!({"suite": suite, "d": d, "case": label, "ok": ok})
        );
    } else {
        println!("{suite}\td={d}\t{label}\t{}", if ok { "ok" } else { "FAIL" });
    }
}

fn run_check(suite: Suite, d: u32, nmax: u32, format: Format) -> Result<i32, Failure> {
    let mut all_ok = true;
    match suite {
        Suite::Products => {
            for n in 1..=nmax {
                let mut prod = IntPoly::constant(misiurewicz::dynatomic::PARAM_VAR, 1);
                for k in divisors(n) {
                    prod = &prod * &gleason(d, 0, k)?.poly;
                }
                let ok = prod == critical_iterate(d, n)?;
                all_ok &= ok;
                report_case(format, "products", d, format!("n={n}"), ok);
            }
        }
        Suite::Discmult => {
            for n in 1..=nmax {
                let ok = disc_multiplicativity_check(d, n)?;
                all_ok &= ok;
                report_case(format, "discmult", d, format!("n={n}"), ok);
            }
        }
        Suite::Coprime => {
            for n in 2..=nmax {
                for m in 1..n {
                    let r = resultant_coprime_check(d, n, m)?;
                    let ok = r.abs() == num_bigint::BigInt::from(1);
                    all_ok &= ok;
                    report_case(format, "coprime", d, format!("m={m} n={n}"), ok);
                }
            }
        }
        Suite::Divseq => {
            let ok = divisibility_sequence_check(d, nmax)?;
            all_ok &= ok;
            report_case(format, "divseq", d, format!("nmax={nmax}"), ok);
        }
        Suite::GleasonMod2 => {
            if d != 2 {
                return Err(usage(
                    "--suite gleason-mod2 applies to d=2 only; other d have positive 2-adic discriminant valuation",
                ));
            }
            for n in 1..=nmax {
                let ok = is_squarefree_mod(&gleason(2, 0, n)?.poly, 2)?;
                all_ok &= ok;
                report_case(format, "gleason-mod2", d, format!("n={n}"), ok);
            }
        }
    }
    if all_ok {
        Ok(0)
    } else {
        Err(mismatch("one or more identity checks failed"))
    }
}
