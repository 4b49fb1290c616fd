//! The Galois group of Q(zeta_n)/Q, realized as the unit group (Z/nZ)^x.
//!
//! Subgroups are stored as explicit sorted element lists; at desk scale
//! (phi(n) up to a few thousand) containment, enumeration and canonical
//! ordering all become plain set operations. The module provides the
//! subgroups the certificate pipeline needs: maximally cyclic subgroups,
//! decomposition groups at arbitrary primes, the complex-conjugation
//! subgroup, Sylow 2-subgroups, and the index-two subgroups fixing the
//! quadratic subfields of Q(zeta_n).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::exactmath::{crt, factorize, gcd, kronecker_symbol, mod_pow, multiplicative_order, Int};
use crate::{Error, Result};

/// The unit group (Z/nZ)^x presented as an internal direct product of cyclic
/// factors, one per prime power dividing n (two for 2^k with k >= 3).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueGroup {
    n: u64,
    decomposition: Vec<(u64, u64)>,
}

impl ResidueGroup {
    /// The modulus.
    pub fn modulus(&self) -> u64 {
        self.n
    }

    /// `(generator, order)` pairs of the cyclic factors, sorted by order.
    pub fn decomposition(&self) -> &[(u64, u64)] {
        &self.decomposition
    }

    /// Group order: the product of the factor orders, equal to phi(n).
    pub fn order(&self) -> u64 {
        self.decomposition.iter().map(|&(_, o)| o).product()
    }
}

/// A subgroup of (Z/nZ)^x, stored as its full sorted element list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Subgroup {
    n: u64,
    elements: Vec<u64>,
    generators: Vec<u64>,
    cyclic_generator: Option<u64>,
}

impl Subgroup {
    fn from_elements(n: u64, mut elements: Vec<u64>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        debug_assert!(elements.contains(&1));
        let order = elements.len() as u64;
        let cyclic_generator = elements
            .iter()
            .copied()
            .find(|&a| multiplicative_order(a, n).expect("unit") == order);
        let generators = match cyclic_generator {
            Some(1) => Vec::new(),
            Some(g) => vec![g],
            None => {
                // Greedy minimal generating set over the ascending elements.
                let mut gens: Vec<u64> = Vec::new();
                let mut span = vec![1u64];
                for &a in &elements {
                    if span.binary_search(&a).is_err() {
                        gens.push(a);
                        span = closure(n, &gens);
                        if span.len() == elements.len() {
                            break;
                        }
                    }
                }
                gens
            }
        };
        Subgroup {
            n,
            elements,
            generators,
            cyclic_generator,
        }
    }

    /// The ambient modulus n.
    pub fn modulus(&self) -> u64 {
        self.n
    }

    /// Number of elements.
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    /// Sorted residues.
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    /// A canonical generating set (a single generator when cyclic).
    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    /// Whether some element generates the whole subgroup.
    pub fn is_cyclic(&self) -> bool {
        self.cyclic_generator.is_some()
    }

    /// The smallest generator, when the subgroup is cyclic.
    pub fn cyclic_generator(&self) -> Option<u64> {
        self.cyclic_generator
    }

    /// Membership test.
    pub fn contains(&self, a: u64) -> bool {
        self.elements.binary_search(&(a % self.n)).is_ok()
    }

    /// Whether `other` is contained in `self`.
    pub fn contains_subgroup(&self, other: &Subgroup) -> bool {
        self.n == other.n && other.elements.iter().all(|&a| self.contains(a))
    }
}

fn closure(n: u64, gens: &[u64]) -> Vec<u64> {
    let mut seen: BTreeSet<u64> = BTreeSet::new();
    seen.insert(1);
    let mut queue = vec![1u64];
    while let Some(x) = queue.pop() {
        for &g in gens {
            let y = (x as u128 * g as u128 % n as u128) as u64;
            if seen.insert(y) {
                queue.push(y);
            }
        }
    }
    seen.into_iter().collect()
}

/// All residues coprime to n, ascending.
pub fn coprime_residues(n: u64) -> Vec<u64> {
    (1..n.max(2)).filter(|&a| gcd(a, n) == 1).collect()
}

/// The full group (Z/nZ)^x as a [`Subgroup`] of itself.
pub fn full_group(n: u64) -> Subgroup {
    Subgroup::from_elements(n, coprime_residues(n))
}

/// Intersection of two subgroups of the same unit group.
pub fn intersection(a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
    if a.modulus() != b.modulus() {
        return Err(Error::ConductorMismatch {
            left: a.modulus(),
            right: b.modulus(),
        });
    }
    let elements: Vec<u64> = a
        .elements()
        .iter()
        .copied()
        .filter(|&x| b.contains(x))
        .collect();
    Ok(Subgroup::from_elements(a.modulus(), elements))
}

/// The subgroup generated by the given residues (the trivial subgroup for an
/// empty list). Errors when a generator is not coprime to n.
pub fn subgroup_generated(n: u64, gens: &[u64]) -> Result<Subgroup> {
    for &g in gens {
        if gcd(g % n, n) != 1 {
            return Err(Error::NotCoprime {
                value: g % n,
                modulus: n,
            });
        }
    }
    let reduced: Vec<u64> = gens.iter().map(|&g| g % n).collect();
    Ok(Subgroup::from_elements(n, closure(n, &reduced)))
}

fn primitive_root_mod_prime(q: u64) -> u64 {
    if q == 2 {
        return 1;
    }
    let phi_factors: Vec<u64> = factorize(q - 1).expect("q - 1 in range").primes().collect();
    (2..q)
        .find(|&g| phi_factors.iter().all(|&f| mod_pow(g, (q - 1) / f, q) != 1))
        .expect("every prime has a primitive root")
}

fn primitive_root_mod_prime_power(q: u64, e: u32) -> u64 {
    let g = primitive_root_mod_prime(q);
    if e == 1 {
        return g;
    }
    // g lifts to q^e exactly when g^(q-1) != 1 mod q^2; otherwise g + q does.
    let q2 = q * q;
    if mod_pow(g, q - 1, q2) != 1 {
        g
    } else {
        g + q
    }
}

/// Decomposition of (Z/nZ)^x into cyclic factors with explicit generators.
///
/// For each odd prime power q^e dividing n the factor is generated by a lift
/// of a primitive root; the factor at 2^e (e >= 3) splits as the span of -1
/// and of 3. Generators are lifted through the CRT so that each is trivial
/// modulo the complementary part of n.
pub fn unit_group(n: u64) -> Result<ResidueGroup> {
    let factorization = factorize(n)?;
    let mut decomposition: Vec<(u64, u64)> = Vec::new();
    for &(q, e) in factorization.factors() {
        let qe = q.pow(e);
        let cofactor = n / qe;
        let lift = |local: u64| -> u64 {
            if cofactor == 1 {
                local % n
            } else {
                crt(&[(local, qe), (1, cofactor)])
                    .expect("coprime by construction")
                    .0
            }
        };
        if q == 2 {
            match e {
                1 => {}
                2 => decomposition.push((lift(3), 2)),
                _ => {
                    decomposition.push((lift(qe - 1), 2));
                    decomposition.push((lift(3), 1 << (e - 2)));
                }
            }
        } else {
            let g = primitive_root_mod_prime_power(q, e);
            decomposition.push((lift(g), (q - 1) * q.pow(e - 1)));
        }
    }
    decomposition.sort_unstable_by_key(|&(g, o)| (o, g));
    let group = ResidueGroup { n, decomposition };
    debug_assert_eq!(group.order(), factorization.phi());
    Ok(group)
}

/// Whether (Z/nZ)^x is cyclic, i.e. n is 1, 2, 4, q^k or 2 q^k for odd q.
pub fn is_cyclic_group(n: u64) -> Result<bool> {
    if n == 0 {
        return Err(Error::Precondition("modulus must be positive".to_string()));
    }
    if n <= 4 {
        return Ok(true);
    }
    let reduced = if n % 2 == 0 { n / 2 } else { n };
    if reduced % 2 == 0 {
        return Ok(false);
    }
    let f = factorize(reduced)?;
    Ok(f.factors().len() == 1)
}

/// All cyclic subgroups of `parent`, one per distinct element set.
fn cyclic_subgroups_in(parent: &Subgroup) -> Vec<Subgroup> {
    let n = parent.modulus();
    let mut seen: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    for &a in parent.elements() {
        let mut powers = vec![1u64];
        let mut x = a;
        while x != 1 {
            powers.push(x);
            x = (x as u128 * a as u128 % n as u128) as u64;
        }
        powers.sort_unstable();
        seen.entry(powers).or_insert(a);
    }
    seen.into_keys()
        .map(|elements| Subgroup::from_elements(n, elements))
        .collect()
}

/// Maximally cyclic subgroups of `parent`: cyclic subgroups contained in no
/// strictly larger cyclic subgroup of `parent`.
///
/// Sorted by descending order, then by element list, so the result is
/// deterministic.
pub fn maximally_cyclic_subgroups_in(parent: &Subgroup) -> Vec<Subgroup> {
    let cyclics = cyclic_subgroups_in(parent);
    let mut maximal: Vec<Subgroup> = cyclics
        .iter()
        .filter(|c| {
            !cyclics
                .iter()
                .any(|d| d.order() > c.order() && d.contains_subgroup(c))
        })
        .cloned()
        .collect();
    maximal.sort_by(|a, b| {
        b.order()
            .cmp(&a.order())
            .then_with(|| a.elements.cmp(&b.elements))
    });
    maximal
}

/// Maximally cyclic subgroups of the full group (Z/nZ)^x.
pub fn maximally_cyclic_subgroups(n: u64) -> Vec<Subgroup> {
    maximally_cyclic_subgroups_in(&full_group(n))
}

/// The decomposition group of the prime `q` inside (Z/nZ)^x.
///
/// For q not dividing n this is the Frobenius span `<q mod n>`. For q | n,
/// write n = q^k m: the decomposition group is the CRT image of the full
/// local unit group (Z/q^k)^x times `<q mod m>`, which is the standard
/// description of decomposition at ramified primes of Q(zeta_n)/Q.
pub fn decomposition_group(n: u64, q: u64) -> Result<Subgroup> {
    if !crate::exactmath::is_prime(q) {
        return Err(Error::Precondition(
            "decomposition group requires a prime".to_string(),
        ));
    }
    if n % q != 0 {
        return subgroup_generated(n, &[q % n]);
    }
    let mut qk = 1u64;
    let mut m = n;
    while m % q == 0 {
        m /= q;
        qk *= q;
    }
    let mut gens: Vec<u64> = Vec::new();
    // Inertia part: all units mod q^k, lifted to be 1 mod m.
    for local in coprime_residues(qk) {
        if m == 1 {
            gens.push(local % n);
        } else {
            gens.push(crt(&[(local, qk), (1, m)])?.0);
        }
    }
    // Frobenius part: q mod m, lifted to be 1 mod q^k.
    if m > 1 {
        gens.push(crt(&[(1, qk), (q % m, m)])?.0);
    }
    let gens: Vec<u64> = gens.into_iter().filter(|&g| g != 1).collect();
    subgroup_generated(n, &gens)
}

/// The order-two subgroup generated by complex conjugation (residue n - 1).
pub fn archimedean_subgroup(n: u64) -> Result<Subgroup> {
    subgroup_generated(n, &[n - 1])
}

/// The 2-Sylow subgroup of (Z/nZ)^x: the elements of 2-power order.
pub fn sylow2_subgroup(n: u64) -> Result<Subgroup> {
    let mut elements = Vec::new();
    for a in coprime_residues(n) {
        if multiplicative_order(a, n)?.is_power_of_two() {
            elements.push(a);
        }
    }
    Ok(Subgroup::from_elements(n, elements))
}

/// Squarefree integers d != 1 with Q(sqrt(d)) contained in Q(zeta_n).
///
/// These are exactly the d whose quadratic field discriminant divides n:
/// signed products of the prime discriminants p* = (-1)^((p-1)/2) p over odd
/// p | n, together with the 2-adic entries -1, +-2 when 4 | n resp. 8 | n.
/// Sorted by absolute value, then sign.
pub fn quadratic_subfields(n: u64) -> Result<Vec<i64>> {
    let primes: Vec<u64> = factorize(n)?.primes().collect();
    let mut out: Vec<i64> = Vec::new();
    for mask in 0..(1u32 << primes.len()) {
        let mut base: i64 = 1;
        for (i, &p) in primes.iter().enumerate() {
            if mask & (1 << i) != 0 {
                base = base
                    .checked_mul(p as i64)
                    .ok_or_else(|| Error::UnsupportedMagnitude("discriminant".to_string()))?;
            }
        }
        for d in [base, -base] {
            if d == 1 {
                continue;
            }
            let disc = if d.rem_euclid(4) == 1 { d } else { 4 * d };
            if n % disc.unsigned_abs() == 0 {
                out.push(d);
            }
        }
    }
    out.sort_unstable_by_key(|&d| (d.unsigned_abs(), d));
    out.dedup();
    Ok(out)
}

/// The index-two subgroup of (Z/nZ)^x fixing sqrt(d), for a squarefree d
/// with sqrt(d) in Q(zeta_n).
///
/// This is the kernel of the quadratic character attached to d, evaluated
/// via the Kronecker symbol of the field discriminant.
pub fn fixing_subgroup_of_quadratic(n: u64, d: i64) -> Result<Subgroup> {
    if !quadratic_subfields(n)?.contains(&d) {
        return Err(Error::MissingSquareRoot { d, n });
    }
    let disc = if d.rem_euclid(4) == 1 { d } else { 4 * d };
    let elements: Vec<u64> = coprime_residues(n)
        .into_iter()
        .filter(|&a| kronecker_symbol(&Int::from(disc), a) == 1)
        .collect();
    let subgroup = Subgroup::from_elements(n, elements);
    debug_assert_eq!(subgroup.order() * 2, factorize(n)?.phi());
    Ok(subgroup)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_group_decompositions() {
        let g39 = unit_group(39).unwrap();
        let orders: Vec<u64> = g39.decomposition().iter().map(|&(_, o)| o).collect();
        assert_eq!(orders, vec![2, 12]);
        assert_eq!(g39.order(), 24);

        let g9 = unit_group(9).unwrap();
        assert_eq!(g9.decomposition().len(), 1);
        assert_eq!(g9.order(), 6);

        let g15 = unit_group(15).unwrap();
        let orders: Vec<u64> = g15.decomposition().iter().map(|&(_, o)| o).collect();
        assert_eq!(orders, vec![2, 4]);
    }

    #[test]
    fn unit_group_generators_generate() {
        for n in [8u64, 9, 12, 15, 16, 24, 39, 40, 45, 60] {
            let g = unit_group(n).unwrap();
            let gens: Vec<u64> = g.decomposition().iter().map(|&(gen, _)| gen).collect();
            let span = subgroup_generated(n, &gens).unwrap();
            assert_eq!(span.order(), g.order(), "span mismatch at n = {n}");
            for &(gen, order) in g.decomposition() {
                assert_eq!(multiplicative_order(gen, n).unwrap(), order);
            }
        }
    }

    #[test]
    fn cyclicity() {
        assert!(is_cyclic_group(9).unwrap());
        assert!(!is_cyclic_group(39).unwrap());
        assert!(is_cyclic_group(25).unwrap());
        assert!(is_cyclic_group(4).unwrap());
        assert!(is_cyclic_group(18).unwrap()); // 2 * 3^2
        assert!(!is_cyclic_group(8).unwrap());
        assert!(!is_cyclic_group(15).unwrap());
        // Structural rule agrees with the maximal element order.
        for n in 3..120u64 {
            let phi = factorize(n).unwrap().phi();
            let max_order = coprime_residues(n)
                .into_iter()
                .map(|a| multiplicative_order(a, n).unwrap())
                .max()
                .unwrap();
            assert_eq!(is_cyclic_group(n).unwrap(), max_order == phi, "n = {n}");
        }
    }

    #[test]
    fn generated_subgroups() {
        let s = subgroup_generated(39, &[38]).unwrap();
        assert_eq!(s.elements(), &[1, 38]);
        assert!(s.is_cyclic());

        let s = subgroup_generated(39, &[2]).unwrap();
        assert_eq!(s.order(), 12);
        assert_eq!(s.cyclic_generator(), Some(2));

        let s = subgroup_generated(39, &[]).unwrap();
        assert_eq!(s.elements(), &[1]);
        assert!(s.is_cyclic());

        assert!(subgroup_generated(39, &[3]).is_err());
    }

    #[test]
    fn maximally_cyclic_at_39() {
        let subs = maximally_cyclic_subgroups(39);
        let orders: Vec<u64> = subs.iter().map(|s| s.order()).collect();
        assert_eq!(orders, vec![12, 12, 6, 6]);
        // Every cyclic subgroup embeds in one of them.
        let full = full_group(39);
        for c in cyclic_subgroups_in(&full) {
            assert!(subs.iter().any(|m| m.contains_subgroup(&c)));
        }
    }

    #[test]
    fn maximally_cyclic_cyclic_group_is_itself() {
        let subs = maximally_cyclic_subgroups(9);
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].order(), 6);
    }

    #[test]
    fn maximally_cyclic_brute_force_small() {
        // Against the definition, for every cyclic subgroup of each group.
        for n in [15u64, 16, 35, 39, 40, 45, 56, 60] {
            let full = full_group(n);
            let cyclics = cyclic_subgroups_in(&full);
            let maximal = maximally_cyclic_subgroups(n);
            for c in &cyclics {
                let is_max = !cyclics
                    .iter()
                    .any(|d| d.order() > c.order() && d.contains_subgroup(c));
                assert_eq!(maximal.contains(c), is_max, "n = {n}");
            }
        }
    }

    #[test]
    fn decomposition_groups_at_39() {
        let d2 = decomposition_group(39, 2).unwrap();
        assert_eq!(d2.order(), 12);
        assert!(d2.is_cyclic());
        assert_eq!(d2.cyclic_generator(), Some(2));

        let d13 = decomposition_group(39, 13).unwrap();
        assert_eq!(d13.order(), 12);
        assert!(d13.is_cyclic());

        let d3 = decomposition_group(39, 3).unwrap();
        assert_eq!(d3.order(), 6);
        assert!(d3.is_cyclic());

        // Unramified case: order equals the multiplicative order of q.
        for q in [2u64, 5, 7, 11, 17, 23] {
            let d = decomposition_group(39, q).unwrap();
            assert_eq!(d.order(), multiplicative_order(q, 39).unwrap());
        }
    }

    #[test]
    fn archimedean_subgroups() {
        for n in [39u64, 15, 12] {
            let c = archimedean_subgroup(n).unwrap();
            assert_eq!(c.elements(), &[1, n - 1]);
        }
    }

    #[test]
    fn sylow2_subgroups() {
        // For p = 13 (p = 5 mod 8), the 2-Sylow subgroup is Z/2 x Z/4:
        // order 8, not cyclic, with an element of order exactly 4.
        let s = sylow2_subgroup(39).unwrap();
        assert_eq!(s.order(), 8);
        assert!(!s.is_cyclic());
        let max_order = s
            .elements()
            .iter()
            .map(|&a| multiplicative_order(a, 39).unwrap())
            .max()
            .unwrap();
        assert_eq!(max_order, 4);
        assert_eq!(sylow2_subgroup(9).unwrap().order(), 2);
        assert_eq!(sylow2_subgroup(15).unwrap().order(), 8);
    }

    #[test]
    fn quadratic_subfield_lists() {
        assert_eq!(quadratic_subfields(13).unwrap(), vec![13]);
        assert_eq!(quadratic_subfields(21).unwrap(), vec![-3, -7, 21]);
        assert_eq!(quadratic_subfields(39).unwrap(), vec![-3, 13, -39]);
        assert_eq!(quadratic_subfields(8).unwrap(), vec![-1, -2, 2]);
        assert_eq!(quadratic_subfields(4).unwrap(), vec![-1]);
        assert_eq!(quadratic_subfields(3).unwrap(), vec![-3]);
    }

    #[test]
    fn fixing_subgroups() {
        let g1 = fixing_subgroup_of_quadratic(39, -3).unwrap();
        assert_eq!(g1.order(), 12);
        assert!(g1.elements().iter().all(|&a| a % 3 == 1));

        let h = fixing_subgroup_of_quadratic(39, 13).unwrap();
        assert_eq!(h.order(), 12);
        for &a in h.elements() {
            assert_eq!(crate::exactmath::legendre_i64(a as i64, 13).unwrap(), 1);
        }

        let k = fixing_subgroup_of_quadratic(15, -15).unwrap();
        assert_eq!(k.order(), 4);

        assert!(matches!(
            fixing_subgroup_of_quadratic(39, 5),
            Err(Error::MissingSquareRoot { .. })
        ));
    }

    #[test]
    fn subgroup_axioms_exhaustive() {
        for n in [15u64, 39, 40] {
            for sub in maximally_cyclic_subgroups(n)
                .into_iter()
                .chain([sylow2_subgroup(n).unwrap(), full_group(n)])
            {
                let els = sub.elements();
                assert!(els.contains(&1));
                assert_eq!(factorize(n).unwrap().phi() % sub.order(), 0);
                for &a in els {
                    for &b in els {
                        let ab = (a as u128 * b as u128 % n as u128) as u64;
                        assert!(sub.contains(ab));
                    }
                    let inv = crate::exactmath::mod_inv(a, n).unwrap();
                    assert!(sub.contains(inv));
                }
            }
        }
    }
}
