//! Exact arithmetic in E = Q(zeta_n).
//!
//! Elements are coordinate vectors of length phi(n) over the power basis
//! 1, zeta, ..., zeta^(phi(n)-1), always kept reduced modulo the n-th
//! cyclotomic polynomial, so equal field elements have identical coefficient
//! vectors. A [`CycField`] holds the per-conductor reduction table (the
//! expansions of zeta^k for phi(n) <= k < n), built once and shared
//! read-only by every operation.
//!
//! Norms over large subgroups are the one hot path: they clear denominators
//! first and run a balanced product over integer coefficient vectors, then
//! divide back, which keeps the rational-gcd overhead out of the inner loop.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactmath::{gcd, legendre_i64, Int, Rat};
use crate::galois::Subgroup;
use crate::{Error, Result};

/// The n-th cyclotomic polynomial as an ascending integer coefficient
/// vector of length phi(n) + 1 (monic).
///
/// Computed by exact division: Phi_n = (x^n - 1) / prod of the Phi_d over
/// the proper divisors d of n.
pub fn cyclotomic_polynomial(n: u64) -> Result<Vec<Int>> {
    if n == 0 {
        return Err(Error::Precondition(
            "conductor must be positive".to_string(),
        ));
    }
    let mut divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    divisors.sort_unstable();
    let mut table: Vec<(u64, Vec<Int>)> = Vec::new();
    for d in divisors {
        // x^d - 1.
        let mut poly = vec![Int::zero(); d as usize + 1];
        poly[0] = -Int::one();
        poly[d as usize] = Int::one();
        for (e, phi_e) in &table {
            if d % e == 0 {
                poly = poly_div_exact(&poly, phi_e);
            }
        }
        table.push((d, poly));
    }
    Ok(table.pop().expect("n divides n").1)
}

/// Exact division of integer polynomials; the divisor must be monic and the
/// remainder must vanish.
fn poly_div_exact(num: &[Int], den: &[Int]) -> Vec<Int> {
    debug_assert!(den.last().map(|c| c.is_one()).unwrap_or(false));
    let mut rem: Vec<Int> = num.to_vec();
    let dn = den.len() - 1;
    let mut quot = vec![Int::zero(); rem.len() - dn];
    for k in (dn..rem.len()).rev() {
        let c = core::mem::replace(&mut rem[k], Int::zero());
        if c.is_zero() {
            continue;
        }
        for (i, d) in den[..dn].iter().enumerate() {
            let sub = d * &c;
            rem[k - dn + i] -= sub;
        }
        quot[k - dn] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// An element of Q(zeta_n): phi(n) rational coordinates over the power basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycElem {
    n: u64,
    coeffs: Vec<Rat>,
}

impl CycElem {
    /// The conductor n.
    pub fn conductor(&self) -> u64 {
        self.n
    }

    /// Coordinates over 1, zeta, ..., zeta^(phi(n)-1).
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Whether this is the zero element.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

/// A nonzero element of E^x up to sign, stored as the representative whose
/// lowest-index nonzero coordinate is positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjUnit {
    rep: CycElem,
}

impl ProjUnit {
    /// Normalize a nonzero element; `x` and `-x` yield equal values.
    pub fn new(x: CycElem) -> Result<ProjUnit> {
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        let leading = x.coeffs.iter().find(|c| !c.is_zero()).expect("nonzero");
        let rep = if leading.is_negative() {
            CycElem {
                n: x.n,
                coeffs: x.coeffs.iter().map(|c| -c).collect(),
            }
        } else {
            x
        };
        Ok(ProjUnit { rep })
    }

    /// The sign-normalized representative.
    pub fn rep(&self) -> &CycElem {
        &self.rep
    }
}

/// Shared per-conductor context: the minimal polynomial and the reduction
/// table expressing zeta^k in the power basis for phi(n) <= k < n.
#[derive(Debug, Clone)]
pub struct CycField {
    n: u64,
    phi: usize,
    min_poly: Vec<Int>,
    reduction: Vec<Vec<i64>>,
}

impl CycField {
    /// Build the field context for conductor n.
    pub fn new(n: u64) -> Result<CycField> {
        let min_poly = cyclotomic_polynomial(n)?;
        let phi = min_poly.len() - 1;
        // Base row: zeta^phi = -(lower coefficients of Phi_n).
        let base: Vec<i64> = min_poly[..phi]
            .iter()
            .map(|c| {
                i64::try_from(&-c).map_err(|_| {
                    Error::UnsupportedMagnitude("reduction table coefficient".to_string())
                })
            })
            .collect::<Result<_>>()?;
        let mut reduction: Vec<Vec<i64>> = Vec::with_capacity((n as usize).saturating_sub(phi));
        if (phi as u64) < n {
            reduction.push(base);
            for _ in (phi as u64 + 1)..n {
                let prev = reduction.last().expect("nonempty");
                let spill = prev[phi - 1];
                let mut row = vec![0i64; phi];
                row[1..phi].copy_from_slice(&prev[..phi - 1]);
                if spill != 0 {
                    let first = &reduction[0];
                    for i in 0..phi {
                        let add = spill.checked_mul(first[i]).ok_or_else(|| {
                            Error::UnsupportedMagnitude("reduction table overflow".to_string())
                        })?;
                        row[i] = row[i].checked_add(add).ok_or_else(|| {
                            Error::UnsupportedMagnitude("reduction table overflow".to_string())
                        })?;
                    }
                }
                reduction.push(row);
            }
        }
        Ok(CycField {
            n,
            phi,
            min_poly,
            reduction,
        })
    }

    /// The conductor n.
    pub fn conductor(&self) -> u64 {
        self.n
    }

    /// The degree phi(n) of the field over Q.
    pub fn degree(&self) -> usize {
        self.phi
    }

    /// The minimal polynomial Phi_n.
    pub fn min_poly(&self) -> &[Int] {
        &self.min_poly
    }

    fn check(&self, x: &CycElem) -> Result<()> {
        if x.n != self.n {
            return Err(Error::ConductorMismatch {
                left: self.n,
                right: x.n,
            });
        }
        Ok(())
    }

    /// The zero element.
    pub fn zero(&self) -> CycElem {
        CycElem {
            n: self.n,
            coeffs: vec![Rat::zero(); self.phi],
        }
    }

    /// Embed a rational.
    pub fn from_rat(&self, r: Rat) -> CycElem {
        let mut e = self.zero();
        e.coeffs[0] = r;
        e
    }

    /// Embed a machine integer.
    pub fn from_i64(&self, k: i64) -> CycElem {
        self.from_rat(Rat::from_integer(Int::from(k)))
    }

    /// The multiplicative identity.
    pub fn one(&self) -> CycElem {
        self.from_i64(1)
    }

    /// An element from explicit power-basis coordinates.
    pub fn from_coeffs(&self, coeffs: Vec<Rat>) -> Result<CycElem> {
        if coeffs.len() != self.phi {
            return Err(Error::Precondition(
                "coefficient vector length must equal phi(n)".to_string(),
            ));
        }
        Ok(CycElem { n: self.n, coeffs })
    }

    /// zeta_n^k, reduced into the power basis.
    pub fn zeta_pow(&self, k: u64) -> CycElem {
        let k = (k % self.n) as usize;
        let mut coeffs = vec![Rat::zero(); self.phi];
        if k < self.phi {
            coeffs[k] = Rat::one();
        } else {
            for (i, &r) in self.reduction[k - self.phi].iter().enumerate() {
                if r != 0 {
                    coeffs[i] = Rat::from_integer(Int::from(r));
                }
            }
        }
        CycElem { n: self.n, coeffs }
    }

    /// Exact sum.
    pub fn add(&self, x: &CycElem, y: &CycElem) -> Result<CycElem> {
        self.check(x)?;
        self.check(y)?;
        let coeffs = x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| a + b).collect();
        Ok(CycElem { n: self.n, coeffs })
    }

    /// Exact difference.
    pub fn sub(&self, x: &CycElem, y: &CycElem) -> Result<CycElem> {
        self.add(x, &self.neg(y))
    }

    /// Negation.
    pub fn neg(&self, x: &CycElem) -> CycElem {
        CycElem {
            n: x.n,
            coeffs: x.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Scale by a rational.
    pub fn scalar_mul(&self, x: &CycElem, r: &Rat) -> CycElem {
        CycElem {
            n: x.n,
            coeffs: x.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    fn reduce_rat_buffer(&self, buf: Vec<Rat>) -> Vec<Rat> {
        let mut out: Vec<Rat> = buf[..self.phi].to_vec();
        for (k, c) in buf.iter().enumerate().skip(self.phi) {
            if c.is_zero() {
                continue;
            }
            for (i, &r) in self.reduction[k - self.phi].iter().enumerate() {
                match r {
                    0 => {}
                    1 => out[i] += c,
                    -1 => out[i] -= c,
                    _ => out[i] += c * Rat::from_integer(Int::from(r)),
                }
            }
        }
        out
    }

    fn reduce_int_buffer(&self, buf: Vec<Int>) -> Vec<Int> {
        let mut out: Vec<Int> = buf[..self.phi].to_vec();
        for (k, c) in buf.iter().enumerate().skip(self.phi) {
            if c.is_zero() {
                continue;
            }
            for (i, &r) in self.reduction[k - self.phi].iter().enumerate() {
                match r {
                    0 => {}
                    1 => out[i] += c,
                    -1 => out[i] -= c,
                    _ => out[i] += c * Int::from(r),
                }
            }
        }
        out
    }

    /// Exact product, reduced modulo Phi_n.
    pub fn mul(&self, x: &CycElem, y: &CycElem) -> Result<CycElem> {
        self.check(x)?;
        self.check(y)?;
        let n = self.n as usize;
        let mut buf = vec![Rat::zero(); n.max(self.phi)];
        for (i, a) in x.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let mut e = i + j;
                if e >= n {
                    e -= n; // zeta^n = 1
                }
                buf[e] += a * b;
            }
        }
        Ok(CycElem {
            n: self.n,
            coeffs: self.reduce_rat_buffer(buf),
        })
    }

    fn mul_int(&self, x: &[Int], y: &[Int]) -> Vec<Int> {
        let n = self.n as usize;
        let mut buf = vec![Int::zero(); n.max(self.phi)];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let mut e = i + j;
                if e >= n {
                    e -= n;
                }
                buf[e] += a * b;
            }
        }
        self.reduce_int_buffer(buf)
    }

    /// Multiplicative inverse of a nonzero element, by the extended Euclidean
    /// algorithm against Phi_n over Q.
    pub fn inv(&self, x: &CycElem) -> Result<CycElem> {
        self.check(x)?;
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        // r0 = Phi_n, r1 = x as polynomials; keep t with t * x = r mod Phi_n.
        let mut r0: Vec<Rat> = self
            .min_poly
            .iter()
            .map(|c| Rat::from_integer(c.clone()))
            .collect();
        let mut r1: Vec<Rat> = x.coeffs.clone();
        trim(&mut r0);
        trim(&mut r1);
        let mut t0: Vec<Rat> = Vec::new();
        let mut t1: Vec<Rat> = vec![Rat::one()];
        while r1.len() > 1 {
            let (q, r) = poly_divmod(&r0, &r1);
            let t = poly_sub(&t0, &poly_mul(&q, &t1));
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t;
        }
        let c = r1.first().cloned().ok_or(Error::InternalContradiction(
            "gcd(x, Phi_n) must be constant for x nonzero".to_string(),
        ))?;
        let inv_c = Rat::one() / c;
        let mut coeffs = vec![Rat::zero(); self.phi];
        for (i, a) in t1.iter().enumerate() {
            coeffs[i] = a * &inv_c;
        }
        Ok(CycElem { n: self.n, coeffs })
    }

    /// The Galois automorphism sigma_a sending zeta to zeta^a, for a coprime
    /// to n.
    pub fn galois_apply(&self, a: u64, x: &CycElem) -> Result<CycElem> {
        self.check(x)?;
        let a = a % self.n;
        if gcd(a, self.n) != 1 {
            return Err(Error::NotCoprime {
                value: a,
                modulus: self.n,
            });
        }
        let n = self.n as usize;
        let mut buf = vec![Rat::zero(); n.max(self.phi)];
        for (i, c) in x.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = (a as u128 * i as u128 % self.n as u128) as usize;
            buf[e] += c;
        }
        Ok(CycElem {
            n: self.n,
            coeffs: self.reduce_rat_buffer(buf),
        })
    }

    fn galois_apply_int(&self, a: u64, x: &[Int]) -> Vec<Int> {
        let n = self.n as usize;
        let mut buf = vec![Int::zero(); n.max(self.phi)];
        for (i, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = (a as u128 * i as u128 % self.n as u128) as usize;
            buf[e] += c;
        }
        self.reduce_int_buffer(buf)
    }

    /// The norm over a subgroup C of (Z/nZ)^x: the product of sigma_a(x)
    /// over all a in C. The result is fixed by every element of C.
    ///
    /// Denominators are cleared up front and restored once at the end, so the
    /// balanced product in the middle runs on integer coefficient vectors.
    pub fn norm_over(&self, subgroup: &Subgroup, x: &CycElem) -> Result<CycElem> {
        self.check(x)?;
        if subgroup.modulus() != self.n {
            return Err(Error::ConductorMismatch {
                left: self.n,
                right: subgroup.modulus(),
            });
        }
        let mut denom = Int::one();
        for c in &x.coeffs {
            denom = denom.lcm(c.denom());
        }
        let scaled: Vec<Int> = x
            .coeffs
            .iter()
            .map(|c| c.numer() * (&denom / c.denom()))
            .collect();
        let mut conjugates: Vec<Vec<Int>> = subgroup
            .elements()
            .iter()
            .map(|&a| self.galois_apply_int(a, &scaled))
            .collect();
        // Balanced product keeps the integer operands of comparable size.
        while conjugates.len() > 1 {
            let mut next = Vec::with_capacity(conjugates.len().div_ceil(2));
            let mut iter = conjugates.chunks(2);
            for chunk in &mut iter {
                match chunk {
                    [a, b] => next.push(self.mul_int(a, b)),
                    [a] => next.push(a.clone()),
                    _ => unreachable!(),
                }
            }
            conjugates = next;
        }
        let product = conjugates.pop().expect("nonempty subgroup");
        let scale = Rat::new(Int::one(), denom.pow(subgroup.order() as u32));
        let coeffs = product
            .into_iter()
            .map(|c| Rat::from_integer(c) * &scale)
            .collect();
        Ok(CycElem { n: self.n, coeffs })
    }

    /// sqrt(-3) = zeta_3 - zeta_3^2 expressed in Q(zeta_n); requires 3 | n.
    pub fn sqrt_minus3(&self) -> Result<CycElem> {
        if self.n % 3 != 0 {
            return Err(Error::MissingSquareRoot { d: -3, n: self.n });
        }
        self.sub(&self.zeta_pow(self.n / 3), &self.zeta_pow(2 * self.n / 3))
    }

    /// The quadratic Gauss sum g_p = sum_t (t|p) zeta_p^t inside Q(zeta_n),
    /// for an odd prime p | n. Satisfies g_p^2 = (-1)^((p-1)/2) p.
    pub fn gauss_sum(&self, p: u64) -> Result<CycElem> {
        if p < 3 || !crate::exactmath::is_prime(p) {
            return Err(Error::NotAnOddPrime(p));
        }
        if self.n % p != 0 {
            return Err(Error::Precondition("gauss_sum requires p | n".to_string()));
        }
        let step = self.n / p;
        let n = self.n as usize;
        let mut buf = vec![Rat::zero(); n.max(self.phi)];
        for t in 1..p {
            let sign = legendre_i64(t as i64, p)?;
            let e = (t * step % self.n) as usize;
            if sign == 1 {
                buf[e] += Rat::one();
            } else {
                buf[e] -= Rat::one();
            }
        }
        Ok(CycElem {
            n: self.n,
            coeffs: self.reduce_rat_buffer(buf),
        })
    }

    /// `Some(r)` when x is the rational r.
    pub fn is_rational(&self, x: &CycElem) -> Option<Rat> {
        if x.coeffs[1..].iter().all(Zero::is_zero) {
            Some(x.coeffs[0].clone())
        } else {
            None
        }
    }

    /// The sign eps with sigma_a(x) = eps * x, when the orbit stays in
    /// {x, -x}; `None` otherwise.
    pub fn conjugation_sign(&self, a: u64, x: &CycElem) -> Result<Option<i32>> {
        let image = self.galois_apply(a, x)?;
        if image == *x {
            Ok(Some(1))
        } else if image == self.neg(x) {
            Ok(Some(-1))
        } else {
            Ok(None)
        }
    }

    /// Whether every element of C fixes x exactly (tested on generators).
    pub fn is_fixed_by(&self, subgroup: &Subgroup, x: &CycElem) -> Result<bool> {
        for &g in subgroup.generators() {
            if self.galois_apply(g, x)? != *x {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether every element of C fixes the projective class of u, i.e.
    /// sends the representative to itself or its negative.
    pub fn is_fixed_mod_sign(&self, subgroup: &Subgroup, u: &ProjUnit) -> Result<bool> {
        for &g in subgroup.generators() {
            if self.conjugation_sign(g, u.rep())?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Product of projective units (well-defined on classes).
    pub fn proj_mul(&self, u: &ProjUnit, v: &ProjUnit) -> Result<ProjUnit> {
        ProjUnit::new(self.mul(u.rep(), v.rep())?)
    }
}

fn trim(p: &mut Vec<Rat>) {
    while p.last().map(Zero::is_zero).unwrap_or(false) {
        p.pop();
    }
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

fn poly_divmod(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lead = b.last().expect("nonzero divisor");
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Rat::zero(); rem.len() - db];
    for k in (db..rem.len()).rev() {
        let c = &rem[k] / lead;
        if c.is_zero() {
            continue;
        }
        for (i, d) in b[..db].iter().enumerate() {
            let sub = d * &c;
            rem[k - db + i] -= sub;
        }
        rem[k] = Rat::zero();
        quot[k - db] = c;
    }
    trim(&mut rem);
    trim(&mut quot);
    (quot, rem)
}
