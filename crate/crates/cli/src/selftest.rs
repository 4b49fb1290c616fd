//! Built-in oracle suites: every formula-computed answer in the library is
//! re-derived here by brute force at desk scale. Any mismatch makes the
//! command exit nonzero, so a passing `selftest` is a machine check that
//! the arithmetic core is internally consistent on this build.

use std::process::ExitCode;

use quadtwist_core::certify;
use quadtwist_core::cohomology::{brute_force_h1, FiniteModule};
use quadtwist_core::cyclotomic::CycField;
use quadtwist_core::exactmath::{
    cornacchia, gcd, hilbert_symbol, is_prime, isqrt, legendre_i64, mod_pow, rat, rat_int, Int,
    Place,
};
use quadtwist_core::localpowers::{is_power_in_qp_at_precision, is_power_mod_prime};

struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn range(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next() % (hi - lo + 1) as u64) as i64
    }
}

type Suite = (&'static str, fn() -> Result<(), String>);

fn legendre_multiplicativity() -> Result<(), String> {
    for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        for a in -15i64..15 {
            for b in -15i64..15 {
                let lhs = legendre_i64(a * b, p).map_err(|e| e.to_string())?;
                let rhs = legendre_i64(a, p).map_err(|e| e.to_string())?
                    * legendre_i64(b, p).map_err(|e| e.to_string())?;
                if lhs != rhs {
                    return Err(format!("multiplicativity fails at a={a}, b={b}, p={p}"));
                }
            }
        }
    }
    Ok(())
}

fn quadratic_reciprocity() -> Result<(), String> {
    let primes: Vec<u64> = (3..1000).filter(|&p| is_prime(p)).collect();
    for (i, &p) in primes.iter().enumerate() {
        for &q in &primes[i + 1..] {
            let lhs = legendre_i64(p as i64, q).map_err(|e| e.to_string())?
                * legendre_i64(q as i64, p).map_err(|e| e.to_string())?;
            let rhs = if p % 4 == 3 && q % 4 == 3 { -1 } else { 1 };
            if lhs != rhs {
                return Err(format!("reciprocity fails at p={p}, q={q}"));
            }
        }
    }
    Ok(())
}

fn hilbert_reciprocity() -> Result<(), String> {
    let mut rng = Rng(0x5eed);
    let mut checked = 0;
    while checked < 500 {
        let a = rat(rng.range(-60, 60), rng.range(1, 30));
        let b = rat(rng.range(-60, 60), rng.range(1, 30));
        if a == rat_int(0) || b == rat_int(0) {
            continue;
        }
        let mut support = vec![Place::Infinity, Place::Finite(2)];
        for value in [a.numer(), a.denom(), b.numer(), b.denom()] {
            let mut v = u64::try_from(&value.clone().into_parts().1).unwrap();
            while v % 2 == 0 {
                v /= 2;
            }
            let mut p = 3u64;
            while p * p <= v {
                if v % p == 0 {
                    while v % p == 0 {
                        v /= p;
                    }
                    if !support.contains(&Place::Finite(p)) {
                        support.push(Place::Finite(p));
                    }
                }
                p += 2;
            }
            if v > 2 && !support.contains(&Place::Finite(v)) {
                support.push(Place::Finite(v));
            }
        }
        let mut product = 1i32;
        for v in support {
            product *= hilbert_symbol(&a, &b, v).map_err(|e| e.to_string())?;
        }
        if product != 1 {
            return Err(format!("reciprocity product != 1 for a={a}, b={b}"));
        }
        checked += 1;
    }
    Ok(())
}

fn cornacchia_oracle() -> Result<(), String> {
    for d in 1..=4u64 {
        for n in 1..=400u64 {
            let answer = cornacchia(d, n);
            let mut expected = None;
            for b in 0..=isqrt(n / d) {
                let rest = n - d * b * b;
                let a = isqrt(rest);
                if a * a == rest {
                    expected = Some((a, b));
                    break;
                }
            }
            if answer != expected {
                return Err(format!(
                    "cornacchia({d}, {n}) = {answer:?}, oracle {expected:?}"
                ));
            }
        }
    }
    Ok(())
}

fn h1_formula_vs_enumeration() -> Result<(), String> {
    // Fixed instances first.
    let negation = FiniteModule::new(vec![4], vec![vec![3]]).map_err(|e| e.to_string())?;
    let h1 = brute_force_h1(2, &negation).map_err(|e| e.to_string())?;
    if h1.size != 2 {
        return Err(format!("Z/2 on Z/4 by negation: got {}", h1.size));
    }
    let signs = FiniteModule::new(vec![2], vec![vec![1]]).map_err(|e| e.to_string())?;
    if brute_force_h1(3, &signs).map_err(|e| e.to_string())?.size != 1 {
        return Err("Z/3 on signs should have trivial H^1".to_string());
    }
    if brute_force_h1(2, &signs).map_err(|e| e.to_string())?.size != 2 {
        return Err("Z/2 on signs should have H^1 of size 2".to_string());
    }
    // Randomized instances; brute_force_h1 errors internally on any
    // formula/enumeration mismatch.
    let mut rng = Rng(0xabcdef);
    let mut ran = 0;
    while ran < 50 {
        let m = [2u64, 3, 4, 6, 8, 12][(rng.next() % 6) as usize];
        let n = 2 + rng.next() % 30;
        let mut unit = 1;
        for candidate in (1..n).rev() {
            if gcd(candidate, n) == 1 && mod_pow(candidate, m, n) == 1 % n {
                unit = candidate;
                if rng.next().is_multiple_of(2) {
                    break;
                }
            }
        }
        let module = match FiniteModule::new(vec![n], vec![vec![unit % n]]) {
            Ok(module) => module,
            Err(_) => continue,
        };
        brute_force_h1(m, &module)
            .map_err(|e| format!("mismatch on Z/{n} with action {unit}: {e}"))?;
        ran += 1;
    }
    Ok(())
}

fn power_mod_prime_oracle() -> Result<(), String> {
    for q in (3..=200u64).filter(|&q| is_prime(q)) {
        for m in [2u64, 4, 8] {
            for alpha in [-16i64, -2, 2, 3, 16] {
                if alpha.rem_euclid(q as i64) == 0 {
                    continue;
                }
                let expected =
                    (1..q).any(|x| mod_pow(x, m, q) == alpha.rem_euclid(q as i64) as u64);
                let got = is_power_mod_prime(&Int::from(alpha), m, q).map_err(|e| e.to_string())?;
                if got != expected {
                    return Err(format!("alpha={alpha}, m={m}, q={q}: got {got}"));
                }
            }
        }
    }
    Ok(())
}

fn qp_precision_stability() -> Result<(), String> {
    for p in [2u64, 3, 5] {
        for m in [2u64, 4, 8] {
            let v = if p == 2 { m.trailing_zeros() } else { 0 };
            let base = 2 * v + 1;
            for alpha in [-16i64, -2, 2, 9, 16, 17, 81] {
                let a = rat_int(alpha);
                let reference =
                    is_power_in_qp_at_precision(&a, m, p, base).map_err(|e| e.to_string())?;
                for extra in 1..=2u32 {
                    let widened = is_power_in_qp_at_precision(&a, m, p, base + extra)
                        .map_err(|e| e.to_string())?;
                    if widened != reference {
                        return Err(format!(
                            "precision instability at alpha={alpha}, m={m}, p={p}"
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

fn gauss_sum_squares() -> Result<(), String> {
    for (p, n) in [(5u64, 15u64), (7, 21), (11, 33), (13, 39), (37, 111)] {
        let field = CycField::new(n).map_err(|e| e.to_string())?;
        let g = field.gauss_sum(p).map_err(|e| e.to_string())?;
        let square = field.mul(&g, &g).map_err(|e| e.to_string())?;
        let expected = if p % 4 == 1 { p as i64 } else { -(p as i64) };
        if square != field.from_i64(expected) {
            return Err(format!("gauss_sum({p})^2 != {expected}"));
        }
    }
    Ok(())
}

fn sqrt_minus3_squares() -> Result<(), String> {
    for n in [3u64, 15, 39] {
        let field = CycField::new(n).map_err(|e| e.to_string())?;
        let s = field.sqrt_minus3().map_err(|e| e.to_string())?;
        if field.mul(&s, &s).map_err(|e| e.to_string())? != field.from_i64(-3) {
            return Err(format!("sqrt(-3)^2 != -3 at conductor {n}"));
        }
    }
    Ok(())
}

fn certificate_roundtrip() -> Result<(), String> {
    let certificate = certify::verify_theorem(13).map_err(|e| e.to_string())?;
    if !certificate.is_verified() {
        return Err(format!("p = 13: {}", certificate.verdict));
    }
    if !certify::revalidate(&certificate).map_err(|e| e.to_string())? {
        return Err("certificate for p = 13 does not revalidate".to_string());
    }
    Ok(())
}

pub fn run() -> ExitCode {
    let suites: &[Suite] = &[
        ("legendre-multiplicativity", legendre_multiplicativity),
        ("quadratic-reciprocity-to-1000", quadratic_reciprocity),
        ("hilbert-reciprocity-500-random", hilbert_reciprocity),
        ("cornacchia-vs-exhaustive", cornacchia_oracle),
        ("h1-formula-vs-enumeration", h1_formula_vs_enumeration),
        ("power-mod-prime-vs-root-search", power_mod_prime_oracle),
        ("qp-precision-stability", qp_precision_stability),
        ("gauss-sum-squares", gauss_sum_squares),
        ("sqrt-minus3-squares", sqrt_minus3_squares),
        ("certificate-roundtrip-p13", certificate_roundtrip),
    ];
    let mut failures = 0;
    for (name, suite) in suites {
        match suite() {
            Ok(()) => println!("ok   {name}"),
            Err(msg) => {
                failures += 1;
                println!("FAIL {name}: {msg}");
            }
        }
    }
    if failures == 0 {
        println!("selftest: all {} suites passed", suites.len());
        ExitCode::SUCCESS
    } else {
        eprintln!("selftest: {failures} suite(s) failed");
        ExitCode::from(1)
    }
}
