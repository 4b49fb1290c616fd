//! m-th power tests: in residue fields, in Q_p, in completions of real
//! quadratic fields, and globally, with the local/global violation scanner.
//!
//! Everything is exact. Local unit tests run at the Hensel-sufficient
//! precision 2 v(m) + 1 in the relevant uniformizer: a unit congruent to an
//! m-th power at that precision is an m-th power, and an exact m-th power
//! reduces to a witness, so the finite search decides the infinite
//! statement in both directions. Ramified and dyadic places of Q(sqrt(d))
//! are handled by exhaustive search in the finite quotient O/(q^k) after an
//! exact valuation split, rather than by implementing local-field
//! arithmetic.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactmath::{
    factorize, gcd, int_valuation, is_prime, is_squarefree, legendre_i64, mod_inv, mod_pow,
    rat_mod_prime_power, rat_unit_part, rat_valuation, Int, Rat,
};
use crate::{Error, Result};

/// The base field of a power-residue question.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumberField {
    /// The rationals.
    Rational,
    /// The real quadratic field Q(sqrt(d)), d > 1 squarefree.
    RealQuadratic(u64),
}

impl core::fmt::Display for NumberField {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            NumberField::Rational => write!(f, "Q"),
            NumberField::RealQuadratic(d) => write!(f, "Q(sqrt({d}))"),
        }
    }
}

fn validate_field(field: &NumberField) -> Result<()> {
    if let NumberField::RealQuadratic(d) = field {
        if *d < 2 || !is_squarefree(*d)? {
            return Err(Error::Precondition(format!(
                "quadratic field parameter must be squarefree and > 1, got {d}"
            )));
        }
    }
    Ok(())
}

/// Whether `alpha` is an m-th power modulo the odd prime q, for q not
/// dividing alpha.
///
/// The multiplicative group mod q is cyclic of order q - 1, so alpha is an
/// m-th power iff alpha^((q-1)/g) = 1 with g = gcd(m, q - 1).
pub fn is_power_mod_prime(alpha: &Int, m: u64, q: u64) -> Result<bool> {
    if m == 0 {
        return Err(Error::Precondition("power must be positive".to_string()));
    }
    if q < 3 || !is_prime(q) {
        return Err(Error::NotAnOddPrime(q));
    }
    let residue = u64::try_from(&alpha.mod_floor(&Int::from(q))).expect("residue fits");
    if residue == 0 {
        return Err(Error::Precondition(format!(
            "{q} divides alpha; use the valuation-aware local test"
        )));
    }
    let g = gcd(m % (q - 1), q - 1); // gcd(m, q-1), with gcd(0, x) = x
    Ok(mod_pow(residue, (q - 1) / g, q) == 1)
}

fn unit_power_search(u: &Rat, m: u64, p: u64, k: u32) -> Result<bool> {
    let modulus = p
        .checked_pow(k)
        .ok_or_else(|| Error::UnsupportedMagnitude("p^k exceeds the machine range".to_string()))?;
    let target = rat_mod_prime_power(u, p, k)?;
    for x in 1..modulus {
        if x % p == 0 {
            continue;
        }
        if mod_pow(x, m, modulus) == target {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Whether `alpha` lies in (Q_p^x)^m, tested at an explicit unit precision
/// p^k. Exposed so the precision-stability property can be exercised; the
/// default precision of [`is_power_in_qp`] is k = 2 v_p(m) + 1, which is
/// already sufficient by Hensel's lemma.
pub fn is_power_in_qp_at_precision(alpha: &Rat, m: u64, p: u64, k: u32) -> Result<bool> {
    if alpha.is_zero() {
        return Err(Error::ZeroElement);
    }
    if m == 0 {
        return Err(Error::Precondition("power must be positive".to_string()));
    }
    if !is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    let v = rat_valuation(alpha, p);
    if v.rem_euclid(m as i64) != 0 {
        return Ok(false);
    }
    let (_, unit) = rat_unit_part(alpha, p);
    unit_power_search(&unit, m, p, k)
}

/// Whether `alpha` is an m-th power in Q_p.
///
/// The valuation must be divisible by m and the unit part must be an m-th
/// power of a unit; the latter is decided at precision p^(2 v_p(m) + 1),
/// which Hensel's lemma makes both necessary and sufficient. When p is odd
/// and prime to m the unit test collapses to the residue-field criterion.
pub fn is_power_in_qp(alpha: &Rat, m: u64, p: u64) -> Result<bool> {
    if alpha.is_zero() {
        return Err(Error::ZeroElement);
    }
    if m == 0 {
        return Err(Error::Precondition("power must be positive".to_string()));
    }
    if !is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    let v = rat_valuation(alpha, p);
    if v.rem_euclid(m as i64) != 0 {
        return Ok(false);
    }
    let (_, unit) = rat_unit_part(alpha, p);
    if p % 2 == 1 && m % p != 0 {
        // Simple Hensel: the unit is an m-th power iff its residue is one
        // in F_p^x.
        let residue = rat_mod_prime_power(&unit, p, 1)?;
        let g = gcd(m % (p - 1), p - 1);
        return Ok(mod_pow(residue, (p - 1) / g, p) == 1);
    }
    let k = 2 * int_valuation(&Int::from(m), p) as u32 + 1;
    unit_power_search(&unit, m, p, k)
}

/// Splitting behaviour of a rational prime in Q(sqrt(d)).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitType {
    /// One place, residue field F_q, ramification index 2.
    Ramified,
    /// Two places, each completion Q_q.
    Split,
    /// One place, unramified of residue degree 2.
    Inert,
}

/// How the prime q behaves in Q(sqrt(d)) for squarefree d > 1.
pub fn split_type(d: u64, q: u64) -> Result<SplitType> {
    if q == 2 {
        return Ok(match d % 8 {
            1 => SplitType::Split,
            5 => SplitType::Inert,
            _ => SplitType::Ramified, // d even or d = 3 (mod 4)
        });
    }
    if d % q == 0 {
        return Ok(SplitType::Ramified);
    }
    Ok(if legendre_i64((d % q) as i64, q)? == 1 {
        SplitType::Split
    } else {
        SplitType::Inert
    })
}

/// An exact element c0 + c1 sqrt(d) of Q(sqrt(d)).
#[derive(Debug, Clone, PartialEq, Eq)]
struct QuadElem {
    c0: Rat,
    c1: Rat,
}

impl QuadElem {
    fn from_int(k: i64) -> QuadElem {
        QuadElem {
            c0: Rat::from_integer(Int::from(k)),
            c1: Rat::zero(),
        }
    }

    fn mul(&self, other: &QuadElem, d: u64) -> QuadElem {
        let d = Rat::from_integer(Int::from(d));
        QuadElem {
            c0: &self.c0 * &other.c0 + &self.c1 * &other.c1 * &d,
            c1: &self.c0 * &other.c1 + &self.c1 * &other.c0,
        }
    }

    fn conj(&self) -> QuadElem {
        QuadElem {
            c0: self.c0.clone(),
            c1: -self.c1.clone(),
        }
    }

    fn norm(&self, d: u64) -> Rat {
        &self.c0 * &self.c0 - &self.c1 * &self.c1 * Rat::from_integer(Int::from(d))
    }

    fn scale(&self, r: &Rat) -> QuadElem {
        QuadElem {
            c0: &self.c0 * r,
            c1: &self.c1 * r,
        }
    }

    fn pow(&self, e: u64, d: u64) -> QuadElem {
        let mut acc = QuadElem::from_int(1);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, d);
            }
            base = base.mul(&base, d);
            e >>= 1;
        }
        acc
    }
}

/// The finite quotient ring O_K / (q^k) with elements over the integral
/// basis {1, w}, where w = sqrt(d) or w = (1 + sqrt(d))/2 as d demands.
struct QuotientRing {
    modulus: u64,
    d: u64,
    half_basis: bool,
}

impl QuotientRing {
    fn new(d: u64, q: u64, k: u32) -> Result<QuotientRing> {
        let modulus = q.checked_pow(k).ok_or_else(|| {
            Error::UnsupportedMagnitude("q^k exceeds the machine range".to_string())
        })?;
        Ok(QuotientRing {
            modulus,
            d,
            half_basis: d % 4 == 1,
        })
    }

    fn mul(&self, x: (u64, u64), y: (u64, u64)) -> (u64, u64) {
        let m = self.modulus as u128;
        let (x0, x1) = (x.0 as u128, x.1 as u128);
        let (y0, y1) = (y.0 as u128, y.1 as u128);
        if self.half_basis {
            // w^2 = w + (d - 1)/4.
            let c = ((self.d - 1) / 4) as u128 % m;
            let cross = x1 * y1 % m;
            let a = (x0 * y0 % m + cross * c % m) % m;
            let b = (x0 * y1 % m + x1 * y0 % m + cross) % m;
            (a as u64, b as u64)
        } else {
            // w^2 = d.
            let a = (x0 * y0 % m + x1 * y1 % m * (self.d as u128 % m)) % m;
            let b = (x0 * y1 % m + x1 * y0 % m) % m;
            (a as u64, b as u64)
        }
    }

    fn pow(&self, x: (u64, u64), e: u64) -> (u64, u64) {
        let mut acc = (1 % self.modulus, 0);
        let mut base = x;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Reduce an exact field element with q-integral coordinates into the
    /// ring, converting from the sqrt(d) basis to the integral basis.
    fn reduce(&self, x: &QuadElem) -> Result<(u64, u64)> {
        let (s0, s1) = if self.half_basis {
            // c0 + c1 sqrt(d) = (c0 - c1) + 2 c1 w.
            (&x.c0 - &x.c1, &x.c1 * Rat::from_integer(Int::from(2)))
        } else {
            (x.c0.clone(), x.c1.clone())
        };
        let q_pow = self.modulus;
        let reduce_rat = |r: &Rat| -> Result<u64> {
            let m = Int::from(q_pow);
            let num = u64::try_from(&r.numer().mod_floor(&m)).expect("fits");
            let den = u64::try_from(&r.denom().mod_floor(&m)).expect("fits");
            let inv = mod_inv(den, q_pow).ok_or_else(|| {
                Error::Precondition("coordinate has a q-adic denominator".to_string())
            })?;
            Ok((num as u128 * inv as u128 % q_pow as u128) as u64)
        };
        Ok((reduce_rat(&s0)?, reduce_rat(&s1)?))
    }

    /// Whether some ring element has m-th power equal to the target.
    fn has_mth_root(&self, target: (u64, u64), m: u64) -> bool {
        for x0 in 0..self.modulus {
            for x1 in 0..self.modulus {
                if self.pow((x0, x1), m) == target {
                    return true;
                }
            }
        }
        false
    }
}

/// A uniformizer above the ramified prime q in Q(sqrt(d)), as an exact
/// field element, together with the unit eps = pi^2 / q.
fn ramified_uniformizer(d: u64, q: u64) -> Result<(QuadElem, QuadElem)> {
    let sqrt_d = QuadElem {
        c0: Rat::zero(),
        c1: Rat::one(),
    };
    let pi = if q % 2 == 1 || d % 4 == 2 {
        // v_q(d) = 1, so sqrt(d) itself is a uniformizer.
        sqrt_d
    } else {
        // d = 3 (mod 4): search a small element of norm +-2.
        let mut found = None;
        'search: for x1 in 1i64..=64 {
            for x0 in 0i64..=256 {
                let candidate = QuadElem {
                    c0: Rat::from_integer(Int::from(x0)),
                    c1: Rat::from_integer(Int::from(x1)),
                };
                let norm = candidate.norm(d);
                if norm.clone().abs() == Rat::from_integer(Int::from(2)) {
                    found = Some(candidate);
                    break 'search;
                }
            }
        }
        found.ok_or_else(|| {
            Error::UnsupportedMagnitude(format!(
                "no principal uniformizer above 2 in Q(sqrt({d})) within the search bound"
            ))
        })?
    };
    let q_rat = Rat::from_integer(Int::from(q));
    let eps = pi.mul(&pi, d).scale(&(Rat::one() / q_rat));
    Ok((pi, eps))
}

/// Whether `alpha` (rational) is an m-th power in the completion of
/// K = Q(sqrt(d)) at the place(s) above `q`, or at a real place for
/// `q = None`.
///
/// Split places are completions of Q and defer to [`is_power_in_qp`]. Inert
/// places reduce to the residue field F_(q^2) when q is odd and prime to m,
/// and otherwise to an exhaustive search in O/(q^k) at the Hensel-sufficient
/// precision. Ramified places first split off the exact pi-valuation (even
/// for rational alpha; the unit twist eps^(-t) appears when the root must
/// carry an odd power of the uniformizer) and then search the finite
/// quotient. For rational alpha the verdict is the same at both places
/// above a split prime, so one answer per rational q suffices.
pub fn is_power_in_quadratic_completion(
    alpha: &Rat,
    m: u64,
    d: u64,
    q: Option<u64>,
) -> Result<bool> {
    validate_field(&NumberField::RealQuadratic(d))?;
    if alpha.is_zero() {
        return Err(Error::ZeroElement);
    }
    if m == 0 {
        return Err(Error::Precondition("power must be positive".to_string()));
    }
    let Some(q) = q else {
        // Real embeddings: a rational is an m-th power in R iff it is
        // positive or m is odd.
        return Ok(alpha.is_positive() || m % 2 == 1);
    };
    if !is_prime(q) {
        return Err(Error::Precondition(format!("{q} is not prime")));
    }
    match split_type(d, q)? {
        SplitType::Split => is_power_in_qp(alpha, m, q),
        SplitType::Inert => {
            let v = rat_valuation(alpha, q);
            if v.rem_euclid(m as i64) != 0 {
                return Ok(false);
            }
            let (_, unit) = rat_unit_part(alpha, q);
            if q % 2 == 1 && m % q != 0 {
                // Residue field F_(q^2); a rational unit lies in the prime
                // field, so the gcd test reduces to arithmetic mod q.
                let order = q as u128 * q as u128 - 1;
                let g = {
                    let mut g = order;
                    let mut b = m as u128;
                    while b != 0 {
                        let t = g % b;
                        g = b;
                        b = t;
                    }
                    g
                };
                let exponent = ((order / g) % (q as u128 - 1)) as u64;
                let residue = rat_mod_prime_power(&unit, q, 1)?;
                return Ok(mod_pow(residue, exponent, q) == 1);
            }
            let k = 2 * int_valuation(&Int::from(m), q) as u32 + 1;
            let ring = QuotientRing::new(d, q, k)?;
            let target = ring.reduce(&QuadElem {
                c0: unit,
                c1: Rat::zero(),
            })?;
            Ok(ring.has_mth_root(target, m))
        }
        SplitType::Ramified => {
            let t = rat_valuation(alpha, q);
            // pi-adic valuation of a rational is 2 v_q, and the root would
            // need valuation 2t/m.
            if (2 * t).rem_euclid(m as i64) != 0 {
                return Ok(false);
            }
            let w = 2 * t / m as i64;
            let (_, unit) = rat_unit_part(alpha, q);
            let mut target = QuadElem {
                c0: unit,
                c1: Rat::zero(),
            };
            if w.rem_euclid(2) == 1 {
                // alpha = q^t eps^t y^m demands the extra unit twist.
                let (_pi, eps) = ramified_uniformizer(d, q)?;
                let eps_inv = eps.conj().scale(&(Rat::one() / eps.norm(d)));
                let twist = if t >= 0 {
                    eps_inv.pow(t as u64, d)
                } else {
                    eps.pow(t.unsigned_abs(), d)
                };
                target = target.mul(&twist, d);
            }
            // pi-precision 2 v_pi(m) + 1 with v_pi(m) = 2 v_q(m); the ring
            // mod q^k carries pi-precision 2k.
            let k = 2 * int_valuation(&Int::from(m), q) as u32 + 1;
            let ring = QuotientRing::new(d, q, k)?;
            let target = ring.reduce(&target)?;
            Ok(ring.has_mth_root(target, m))
        }
    }
}

fn int_is_mth_power(n: &Int, m: u64) -> bool {
    if n.is_zero() {
        return true;
    }
    if n.is_negative() && m % 2 == 0 {
        return false;
    }
    let root = n.abs().nth_root(m as u32);
    num_traits::pow(root, m as usize) == n.abs()
}

fn rational_is_mth_power(x: &Rat, m: u64) -> bool {
    if x.is_negative() && m % 2 == 0 {
        return false;
    }
    int_is_mth_power(x.numer(), m) && int_is_mth_power(x.denom(), m)
}

/// Ceiling of |n|^(1/m).
fn root_bound(n: &Int, m: u64) -> Result<i64> {
    let floor = n.abs().nth_root(m as u32);
    let exact = num_traits::pow(floor.clone(), m as usize) == n.abs();
    let bound = if exact { floor } else { floor + 1 };
    i64::try_from(&bound)
        .map_err(|_| Error::UnsupportedMagnitude("root bound exceeds the search range".to_string()))
}

/// Roots of Y^m = N inside Q(sqrt(d)), by bounded search: integer roots,
/// then monic quadratic factors Y^2 - s Y + t of Y^m - N whose discriminant
/// is d times a nonzero square. Root magnitude |N|^(1/m) bounds |s| and |t|.
fn integral_root_in_quadratic(n: &Int, m: u64, d: u64) -> Result<bool> {
    if int_is_mth_power(n, m) {
        return Ok(true);
    }
    let b = root_bound(n, m)?;
    let t_bound = root_bound(&(n * n), m)?;
    if b > 1_000_000 || t_bound > 1_000_000 {
        return Err(Error::UnsupportedMagnitude(
            "quadratic factor search bound exceeds 10^6".to_string(),
        ));
    }
    for s in -2 * b..=2 * b {
        for t in -t_bound..=t_bound {
            // Y^m mod (Y^2 - s Y + t) via the linear recurrence
            // Y^(k+1) = (a s + b) Y - a t for Y^k = a Y + b.
            let (mut ca, mut cb) = (Int::one(), Int::zero());
            for _ in 1..m {
                let na = &ca * s + &cb;
                let nb = -(&ca * t);
                ca = na;
                cb = nb;
            }
            if !ca.is_zero() || cb != *n {
                continue;
            }
            let disc = s.checked_mul(s).and_then(|s2| s2.checked_sub(4 * t));
            let Some(disc) = disc else { continue };
            if disc <= 0 || disc % d as i64 != 0 {
                continue;
            }
            let square = (disc / d as i64) as u64;
            let r = crate::exactmath::isqrt(square);
            if r > 0 && r * r == square {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Whether alpha is an m-th power of an element of the field.
pub fn is_global_power(alpha: &Rat, m: u64, field: &NumberField) -> Result<bool> {
    validate_field(field)?;
    if alpha.is_zero() {
        return Err(Error::ZeroElement);
    }
    if m == 0 {
        return Err(Error::Precondition("power must be positive".to_string()));
    }
    match field {
        NumberField::Rational => Ok(rational_is_mth_power(alpha, m)),
        NumberField::RealQuadratic(d) => {
            // Clear denominators: x^m = A/B iff (Bx)^m = A B^(m-1).
            let n = alpha.numer() * num_traits::pow(alpha.denom().clone(), m as usize - 1);
            integral_root_in_quadratic(&n, m, *d)
        }
    }
}

/// The global pair: is +alpha an m-th power, is -alpha an m-th power.
pub fn is_global_pm_power(alpha: &Rat, m: u64, field: &NumberField) -> Result<(bool, bool)> {
    Ok((
        is_global_power(alpha, m, field)?,
        is_global_power(&-alpha.clone(), m, field)?,
    ))
}

/// One examined place with its verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaceResult {
    /// Human-readable place descriptor.
    pub place: String,
    /// Whether alpha is an m-th power in that completion.
    pub is_mth_power: bool,
}

/// The assembled local/global report for one (alpha, m, field) triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalPowerReport {
    /// The tested element.
    pub alpha: Rat,
    /// The power.
    pub m: u64,
    /// The base field.
    pub field: NumberField,
    /// Verdicts at the archimedean places and at every place above each
    /// examined prime.
    pub places: Vec<PlaceResult>,
    /// Whether +alpha is a global m-th power.
    pub global_plus: bool,
    /// Whether -alpha is a global m-th power.
    pub global_minus: bool,
    /// Locally a power at every checked place, globally neither +-alpha is:
    /// the local-global violation pattern.
    pub violation: bool,
}

/// Evaluate alpha at every place up to `prime_bound` (plus the ramified and
/// archimedean places), run the global test, and flag the violation pattern.
pub fn gw_scan(
    alpha: &Rat,
    m: u64,
    field: &NumberField,
    prime_bound: u64,
) -> Result<LocalPowerReport> {
    validate_field(field)?;
    if alpha.is_zero() {
        return Err(Error::ZeroElement);
    }
    if m == 0 {
        return Err(Error::Precondition("power must be positive".to_string()));
    }
    let mut places = Vec::new();
    match field {
        NumberField::Rational => {
            places.push(PlaceResult {
                place: "infinity".to_string(),
                is_mth_power: alpha.is_positive() || m % 2 == 1,
            });
            for p in 2..=prime_bound.max(2) {
                if !is_prime(p) {
                    continue;
                }
                places.push(PlaceResult {
                    place: p.to_string(),
                    is_mth_power: is_power_in_qp(alpha, m, p)?,
                });
            }
        }
        NumberField::RealQuadratic(d) => {
            let real = is_power_in_quadratic_completion(alpha, m, *d, None)?;
            places.push(PlaceResult {
                place: "infinity #1".to_string(),
                is_mth_power: real,
            });
            places.push(PlaceResult {
                place: "infinity #2".to_string(),
                is_mth_power: real,
            });
            // Ramified primes are always on the list, bound or not.
            let mut primes: Vec<u64> = (2..=prime_bound.max(2)).filter(|&p| is_prime(p)).collect();
            let disc_primes: Vec<u64> = if d % 4 == 1 {
                factorize(*d)?.primes().collect()
            } else {
                core::iter::once(2).chain(factorize(*d)?.primes()).collect()
            };
            for p in disc_primes {
                if !primes.contains(&p) {
                    primes.push(p);
                }
            }
            primes.sort_unstable();
            primes.dedup();
            for q in primes {
                let verdict = is_power_in_quadratic_completion(alpha, m, *d, Some(q))?;
                match split_type(*d, q)? {
                    SplitType::Ramified => places.push(PlaceResult {
                        place: format!("{q} (ramified)"),
                        is_mth_power: verdict,
                    }),
                    SplitType::Inert => places.push(PlaceResult {
                        place: format!("{q} (inert)"),
                        is_mth_power: verdict,
                    }),
                    SplitType::Split => {
                        places.push(PlaceResult {
                            place: format!("{q} (split #1)"),
                            is_mth_power: verdict,
                        });
                        places.push(PlaceResult {
                            place: format!("{q} (split #2)"),
                            is_mth_power: verdict,
                        });
                    }
                }
            }
        }
    }
    let (global_plus, global_minus) = is_global_pm_power(alpha, m, field)?;
    let violation = places.iter().all(|p| p.is_mth_power) && !global_plus && !global_minus;
    Ok(LocalPowerReport {
        alpha: alpha.clone(),
        m,
        field: *field,
        places,
        global_plus,
        global_minus,
        violation,
    })
}
