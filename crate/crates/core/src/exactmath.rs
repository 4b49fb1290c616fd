//! Arbitrary-precision integer and rational number theory.
//!
//! Everything is exact and deterministic: primality is decided by the
//! Miller-Rabin test with the fixed witness set {2, 3, ..., 37}, which is a
//! proven primality criterion for all inputs below 3.3 * 10^24 and therefore
//! for the whole `u64` range accepted here. No operation ever returns a
//! probabilistic answer.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Arbitrary-precision integer used throughout the crate.
pub type Int = BigInt;

/// Arbitrary-precision rational, always stored reduced with positive
/// denominator (the canonical form maintained by `num-rational`).
pub type Rat = num_rational::BigRational;

/// Largest input accepted by [`factorize`] and the operations built on it.
pub const MAGNITUDE_BOUND: u64 = 1 << 63;

/// Shorthand for an integer rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// Shorthand for `n/d` as an exact rational.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// Canonical "num/den" rendering, with the slash always present.
pub fn rat_slash_string(r: &Rat) -> alloc::string::String {
    alloc::format!("{}/{}", r.numer(), r.denom())
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Modular exponentiation `base^exp mod m` with `u128` intermediates.
pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Greatest common divisor.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Modular inverse of `a` mod `m`, or `None` when gcd(a, m) != 1.
pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Integer square root: the largest `r` with `r*r <= n`.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    // Newton iteration from a power-of-two overestimate.
    let mut x = 1u64 << (n.ilog2() / 2 + 1);
    loop {
        let y = (x + n / x) / 2;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// Deterministic primality test, exact for every `u64`.
///
/// Uses Miller-Rabin with witnesses {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31,
/// 37}; that witness set decides primality for all n < 3.3 * 10^24.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A complete prime factorization, sorted by prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// The factored value.
    pub fn value(&self) -> u64 {
        self.value
    }

    /// Sorted `(prime, exponent)` pairs; empty exactly for value 1.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// The distinct prime divisors, ascending.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Euler's totient of the factored value.
    pub fn phi(&self) -> u64 {
        self.factors
            .iter()
            .fold(1u64, |acc, &(p, e)| acc * (p - 1) * p.pow(e - 1))
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

fn pollard_rho(n: u64) -> u64 {
    // Brent's cycle-finding variant; n must be odd, composite, not a prime
    // power of a small prime (small factors are stripped by the caller).
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Complete factorization of `n >= 1`.
///
/// Pollard rho supplies divisor candidates, but every reported prime is
/// certified by [`is_prime`] and the product is checked against `n`, so the
/// result is never wrong. Inputs above [`MAGNITUDE_BOUND`] are rejected.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Precondition("factorize requires n >= 1".to_string()));
    }
    if n > MAGNITUDE_BOUND {
        return Err(Error::UnsupportedMagnitude(n.to_string()));
    }
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut rest = n;
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        if rest % p == 0 {
            let mut e = 0u32;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            match factors.iter_mut().find(|(p, _)| *p == m) {
                Some((_, e)) => *e += 1,
                None => factors.push((m, 1)),
            }
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    factors.sort_unstable();
    let product = factors.iter().fold(1u64, |acc, &(p, e)| acc * p.pow(e));
    debug_assert_eq!(product, n);
    Ok(Factorization { value: n, factors })
}

/// Euler's totient function.
pub fn euler_phi(n: u64) -> Result<u64> {
    Ok(factorize(n)?.phi())
}

/// True when `n` has no repeated prime factor.
pub fn is_squarefree(n: u64) -> Result<bool> {
    Ok(factorize(n)?.factors().iter().all(|&(_, e)| e == 1))
}

/// Multiplicative order of `a` modulo `n`, requiring gcd(a, n) = 1.
pub fn multiplicative_order(a: u64, n: u64) -> Result<u64> {
    let a = a % n;
    if gcd(a, n) != 1 {
        return Err(Error::NotCoprime {
            value: a,
            modulus: n,
        });
    }
    if n == 1 {
        return Ok(1);
    }
    let phi = euler_phi(n)?;
    let mut order = phi;
    for (q, _) in factorize(phi)?.factors() {
        while order % q == 0 && mod_pow(a, order / q, n) == 1 {
            order /= q;
        }
    }
    Ok(order)
}

/// Legendre symbol (a | p) for an odd prime `p`, by Euler's criterion.
pub fn legendre_symbol(a: &Int, p: u64) -> Result<i32> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotAnOddPrime(p));
    }
    let r = a.mod_floor(&Int::from(p));
    let r = u64::try_from(&r).expect("residue fits u64");
    if r == 0 {
        return Ok(0);
    }
    match mod_pow(r, (p - 1) / 2, p) {
        1 => Ok(1),
        x if x == p - 1 => Ok(-1),
        _ => unreachable!("Euler criterion value is always +-1 for a unit"),
    }
}

/// Legendre symbol with machine-integer arguments.
pub fn legendre_i64(a: i64, p: u64) -> Result<i32> {
    legendre_symbol(&Int::from(a), p)
}

/// Jacobi symbol (a | n) for odd `n >= 1`.
pub fn jacobi_symbol(a: &Int, n: u64) -> Result<i32> {
    if n == 0 || n % 2 == 0 {
        return Err(Error::Precondition(
            "jacobi symbol requires odd positive modulus".to_string(),
        ));
    }
    let mut a = u64::try_from(&a.mod_floor(&Int::from(n))).expect("residue fits u64");
    let mut n = n;
    let mut sign = 1i32;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                sign = -sign;
            }
        }
        core::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    Ok(if n == 1 { sign } else { 0 })
}

/// Kronecker symbol (a | n) for `n >= 1`, extending Jacobi to even moduli.
pub fn kronecker_symbol(a: &Int, n: u64) -> i32 {
    if n == 0 {
        let one: Int = One::one();
        return if a.abs() == one { 1 } else { 0 };
    }
    let mut n_odd = n;
    let mut twos = 0u32;
    while n_odd % 2 == 0 {
        n_odd /= 2;
        twos += 1;
    }
    let mut sign = 1i32;
    if twos > 0 {
        if a.is_even() {
            return 0;
        }
        let a8 = u64::try_from(&a.mod_floor(&Int::from(8))).unwrap();
        // (a | 2) = +1 for a = +-1 mod 8, -1 for a = +-3 mod 8.
        let k2 = if matches!(a8, 1 | 7) { 1 } else { -1 };
        if twos % 2 == 1 {
            sign *= k2;
        }
    }
    sign * jacobi_symbol(a, n_odd).expect("n_odd is odd")
}

/// A place of Q: a finite prime or the archimedean place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    /// A finite prime p.
    Finite(u64),
    /// The real place.
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "infinity"),
        }
    }
}

/// p-adic valuation of a nonzero rational.
pub fn rat_valuation(x: &Rat, p: u64) -> i64 {
    assert!(!x.is_zero(), "valuation of zero");
    int_valuation(x.numer(), p) as i64 - int_valuation(x.denom(), p) as i64
}

/// Exponent of `p` in a nonzero integer.
pub fn int_valuation(x: &Int, p: u64) -> u64 {
    assert!(!x.is_zero(), "valuation of zero");
    let p = Int::from(p);
    let mut v = 0u64;
    let mut x = x.clone();
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        x = q;
    }
}

/// Unit part of `x` at `p`: the rational `x / p^v` with `v = v_p(x)`.
pub fn rat_unit_part(x: &Rat, p: u64) -> (i64, Rat) {
    let v = rat_valuation(x, p);
    let scale = Int::from(p).pow(v.unsigned_abs() as u32);
    let unit = if v >= 0 {
        x / Rat::from_integer(scale)
    } else {
        x * Rat::from_integer(scale)
    };
    (v, unit)
}

/// Residue of a p-adically integral rational modulo `p^k`.
pub fn rat_mod_prime_power(x: &Rat, p: u64, k: u32) -> Result<u64> {
    let modulus = p
        .checked_pow(k)
        .ok_or_else(|| Error::UnsupportedMagnitude("p^k exceeds u64".to_string()))?;
    let m = Int::from(modulus);
    let num = u64::try_from(&x.numer().mod_floor(&m)).unwrap();
    let den = u64::try_from(&x.denom().mod_floor(&m)).unwrap();
    let den_inv = mod_inv(den, modulus)
        .ok_or_else(|| Error::Precondition("rational is not p-adically integral".to_string()))?;
    Ok(mul_mod(num, den_inv, modulus))
}

fn eps_mod2(u: u64) -> u32 {
    // (u - 1)/2 mod 2 for odd u, read off u mod 4.
    if u % 4 == 3 {
        1
    } else {
        0
    }
}

fn omega_mod2(u: u64) -> u32 {
    // (u^2 - 1)/8 mod 2 for odd u, read off u mod 8.
    if matches!(u % 8, 3 | 5) {
        1
    } else {
        0
    }
}

/// Hilbert symbol (a, b)_v over Q at the place `v`.
///
/// The value is +1 exactly when `z^2 = a x^2 + b y^2` has a nontrivial
/// solution over the completion at `v`. At odd p the standard tame formula
/// applies; at p = 2 the symbol is (-1)^(eps(u)eps(w) + alpha omega(w) +
/// beta omega(u)) for a = 2^alpha u, b = 2^beta w, with eps(u) = (u-1)/2
/// and omega(u) = (u^2-1)/8 mod 2: the exponent formulas of Serre,
/// "A Course in Arithmetic", Ch. III, Thm. 1.
pub fn hilbert_symbol(a: &Rat, b: &Rat, v: Place) -> Result<i32> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Precondition(
            "hilbert symbol requires nonzero arguments".to_string(),
        ));
    }
    match v {
        Place::Infinity => Ok(if a.is_negative() && b.is_negative() {
            -1
        } else {
            1
        }),
        Place::Finite(2) => {
            let (alpha, u) = rat_unit_part(a, 2);
            let (beta, w) = rat_unit_part(b, 2);
            let u8 = rat_mod_prime_power(&u, 2, 3)?;
            let w8 = rat_mod_prime_power(&w, 2, 3)?;
            let exponent = eps_mod2(u8) * eps_mod2(w8)
                + (alpha.rem_euclid(2) as u32) * omega_mod2(w8)
                + (beta.rem_euclid(2) as u32) * omega_mod2(u8);
            Ok(if exponent % 2 == 0 { 1 } else { -1 })
        }
        Place::Finite(p) => {
            if !is_prime(p) {
                return Err(Error::NotAnOddPrime(p));
            }
            let (alpha, u) = rat_unit_part(a, p);
            let (beta, w) = rat_unit_part(b, p);
            let u_res = rat_mod_prime_power(&u, p, 1)?;
            let w_res = rat_mod_prime_power(&w, p, 1)?;
            let leg_u = legendre_symbol(&Int::from(u_res), p)?;
            let leg_w = legendre_symbol(&Int::from(w_res), p)?;
            let mut sign = 1i32;
            if alpha.rem_euclid(2) == 1 && beta.rem_euclid(2) == 1 && (p - 1) / 2 % 2 == 1 {
                sign = -sign;
            }
            if beta.rem_euclid(2) == 1 {
                sign *= leg_u;
            }
            if alpha.rem_euclid(2) == 1 {
                sign *= leg_w;
            }
            Ok(sign)
        }
    }
}

/// Whether `t` is a norm from the imaginary quadratic field Q(sqrt(-d)).
///
/// Decided by Hilbert symbols (t, -d)_v at every place in the joint support
/// of 2, d and t; the symbol is automatically +1 elsewhere, and the product
/// formula makes the finite check complete.
pub fn is_norm_from_imag_quadratic(t: &Rat, d: u64) -> Result<bool> {
    if t.is_zero() {
        return Err(Error::ZeroElement);
    }
    if d == 0 || !is_squarefree(d)? {
        return Err(Error::Precondition(
            "field discriminant parameter must be positive squarefree".to_string(),
        ));
    }
    let minus_d = -Rat::from_integer(Int::from(d));
    let mut places = vec![Place::Infinity, Place::Finite(2)];
    let mut push_primes = |n: &Int| -> Result<()> {
        if n.is_zero() {
            return Ok(());
        }
        let n = u64::try_from(&n.abs())
            .map_err(|_| Error::UnsupportedMagnitude("support exceeds u64".to_string()))?;
        for p in factorize(n)?.primes() {
            let place = Place::Finite(p);
            if !places.contains(&place) {
                places.push(place);
            }
        }
        Ok(())
    };
    push_primes(&Int::from(d))?;
    push_primes(t.numer())?;
    push_primes(t.denom())?;
    for v in places {
        if hilbert_symbol(t, &minus_d, v)? != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest-b solution of `a^2 + d b^2 = n` in nonnegative integers.
///
/// Deterministic bounded search in increasing b; exact at desk scale, which
/// is all the certificate pipeline needs (n = 3p with p <= 1000).
pub fn cornacchia(d: u64, n: u64) -> Option<(u64, u64)> {
    if d == 0 || n == 0 {
        return None;
    }
    let mut b = 0u64;
    loop {
        let db2 = (d as u128) * (b as u128) * (b as u128);
        if db2 > n as u128 {
            return None;
        }
        let rest = n - db2 as u64;
        let a = isqrt(rest);
        if a * a == rest {
            return Some((a, b));
        }
        b += 1;
    }
}

/// Chinese remainder theorem for pairwise coprime moduli.
///
/// Returns `(r, M)` with `M` the product of the moduli and `r` the unique
/// residue matching every input pair. The empty system yields `0 mod 1`.
pub fn crt(residues: &[(u64, u64)]) -> Result<(u64, u64)> {
    let mut r0: u64 = 0;
    let mut m0: u64 = 1;
    for &(r, m) in residues {
        if m == 0 {
            return Err(Error::Precondition("zero modulus in CRT".to_string()));
        }
        let g = gcd(m0, m);
        if g != 1 {
            return Err(Error::NonCoprimeModuli { a: m0, b: m });
        }
        let merged = m0
            .checked_mul(m)
            .ok_or_else(|| Error::UnsupportedMagnitude("CRT modulus exceeds u64".to_string()))?;
        let r = r % m;
        // x = r0 + m0 * t with t = (r - r0) / m0 mod m.
        let diff = (r as i128 - (r0 % m) as i128).rem_euclid(m as i128) as u64;
        let t = mul_mod(diff, mod_inv(m0 % m, m).expect("coprime"), m);
        r0 += m0 * t;
        m0 = merged;
    }
    Ok((r0 % m0, m0))
}
