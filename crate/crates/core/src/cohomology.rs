//! Cyclic-group cohomology of the sign module and the inflated twist class.
//!
//! A class is represented by the pair (G_1, y): an index-two subgroup G_1 of
//! (Z/nZ)^x together with a projective unit y fixed by G_1 up to sign, whose
//! norm to the quotient is trivial modulo signs. Inflation from the order-two
//! quotient produces a class in H^1(G, E^x/{+-1}); the three checkers below
//! decide the conditions under which that class certifies a strongly-locally
//! -quadratic-but-not-quadratic obstruction:
//!
//! - condition (i): the class is nontrivial, witnessed by a G_1 element that
//!   moves the lift to its negative;
//! - condition (ii'): the class restricts trivially to every maximally
//!   cyclic subgroup, decided through the injective norm map into
//!   H^2(C, {+-1});
//! - condition (iii): local triviality at every place with at most one
//!   exception, audited through decomposition groups and the archimedean
//!   norm.
//!
//! Triviality on a cyclic subgroup is always decided by the norm of a lift:
//! the connecting map H^1(C, E^x/{+-1}) -> H^2(C, {+-1}) is injective by
//! Hilbert 90, so a +1 norm is a complete proof and a -1 norm a complete
//! refutation. No general coboundary search is attempted anywhere.
//!
//! The module also carries a brute-force H^1 oracle over explicit finite
//! modules, used by the test suite and the self-test command to validate the
//! norm-quotient formula against raw cocycle enumeration.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::One;

use crate::cyclotomic::{CycElem, CycField, ProjUnit};
use crate::exactmath::{factorize, Place, Rat};
use crate::galois::{
    archimedean_subgroup, decomposition_group, full_group, intersection,
    maximally_cyclic_subgroups_in, sylow2_subgroup, Subgroup,
};
use crate::{Error, Result};

/// |H^i(C, {+-1})| for a cyclic group of the given order and any i >= 1.
pub fn h_sign_cyclic(order: u64, i: u32) -> u64 {
    debug_assert!(i >= 1);
    if order % 2 == 0 {
        2
    } else {
        1
    }
}

/// Value of the restricted cocycle at a generator of a cyclic subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Restriction {
    /// The subgroup lies inside G_1, where the inflated cocycle vanishes.
    Trivial,
    /// The class of y: every generator of the subgroup lies outside G_1.
    Value(ProjUnit),
}

/// Outcome of the norm-map triviality test on one cyclic subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupCheck {
    /// The cyclic subgroup that was tested.
    pub subgroup: Subgroup,
    /// Whether the restriction of the class to it is trivial.
    pub passes: bool,
    /// The exact norm value +-1 when the norm test ran; `None` when the
    /// restriction was already trivial by inflation or by odd order.
    pub norm: Option<i32>,
}

/// Verification status of one place in the condition (iii) audit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaceStatus {
    /// Ramified prime with cyclic decomposition group: covered by (ii').
    VerifiedCyclic,
    /// Real place: the archimedean norm test passed.
    VerifiedArchimedean,
    /// Not certified by this audit.
    Unverified,
}

impl PlaceStatus {
    /// Stable label used in reports.
    pub fn label(&self) -> &'static str {
        match self {
            PlaceStatus::VerifiedCyclic => "verified-cyclic",
            PlaceStatus::VerifiedArchimedean => "verified-archimedean",
            PlaceStatus::Unverified => "unverified",
        }
    }
}

/// Per-place audit for condition (iii).
///
/// Unramified places are covered wholesale by cyclic decomposition plus
/// condition (ii'), so only the real place and the primes dividing n are
/// listed. The class-field-theory residue sum absorbs one failure, hence the
/// audit passes with at most one unverified place.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaceAudit {
    /// Status per examined place; the real place first, then ascending
    /// ramified primes.
    pub entries: Vec<(Place, PlaceStatus)>,
    /// Number of unverified entries.
    pub unverified: usize,
}

impl PlaceAudit {
    /// Condition (iii) holds when at most one place stayed unverified.
    pub fn passes(&self) -> bool {
        self.unverified <= 1
    }
}

/// Result of condition (i): nontriviality of the class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConditionI {
    /// Whether the class was proven nontrivial.
    pub holds: bool,
    /// A G_1 element negating the lift, when one exists.
    pub witness: Option<u64>,
}

/// The assembled three-condition report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    /// Nontriviality via the sign character of G_1.
    pub condition_i: ConditionI,
    /// Norm checks over the maximally cyclic subgroups.
    pub condition_ii: Vec<SubgroupCheck>,
    /// Per-place audit.
    pub condition_iii: PlaceAudit,
}

impl ConditionReport {
    /// The full verdict: (i), every (ii') check, and (iii) must hold.
    pub fn overall(&self) -> bool {
        self.condition_i.holds
            && self.condition_ii.iter().all(|c| c.passes)
            && self.condition_iii.passes()
    }
}

/// A cohomology class inflated from the order-two quotient G/G_1, given by
/// the projective unit y with a chosen lift in E^x.
#[derive(Debug, Clone)]
pub struct InflatedClass {
    field: CycField,
    g1: Subgroup,
    y: ProjUnit,
    lift: CycElem,
}

impl InflatedClass {
    /// Validate and build a class from its parts.
    ///
    /// Requires G_1 of index exactly two, y fixed by G_1 modulo sign, and
    /// the coset norm sigma_s(lift) * lift equal to an exact rational +-1;
    /// any violation is reported as a malformed class, not as a verdict.
    pub fn new(field: CycField, g1: Subgroup, lift: CycElem) -> Result<InflatedClass> {
        let n = field.conductor();
        if g1.modulus() != n || lift.conductor() != n {
            return Err(Error::ConductorMismatch {
                left: n,
                right: g1.modulus(),
            });
        }
        let phi = factorize(n)?.phi();
        if g1.order() * 2 != phi {
            return Err(Error::MalformedClass(format!(
                "G1 has order {} but index two in a group of order {phi} was required",
                g1.order()
            )));
        }
        let y = ProjUnit::new(lift.clone())?;
        if !field.is_fixed_mod_sign(&g1, &y)? {
            return Err(Error::MalformedClass(
                "y is not fixed by G1 modulo sign".to_string(),
            ));
        }
        let class = InflatedClass { field, g1, y, lift };
        // One coset representative suffices: the G1 signs absorb the rest.
        let s = class.smallest_outside_g1();
        class.coset_norm_sign(s)?;
        Ok(class)
    }

    /// The ambient field context.
    pub fn field(&self) -> &CycField {
        &self.field
    }

    /// The index-two subgroup the class is inflated along.
    pub fn g1(&self) -> &Subgroup {
        &self.g1
    }

    /// The projective unit representing the class.
    pub fn y(&self) -> &ProjUnit {
        &self.y
    }

    /// The chosen lift of y to E^x.
    pub fn lift(&self) -> &CycElem {
        &self.lift
    }

    /// The conductor n.
    pub fn conductor(&self) -> u64 {
        self.field.conductor()
    }

    fn smallest_outside_g1(&self) -> u64 {
        crate::galois::coprime_residues(self.conductor())
            .into_iter()
            .find(|&a| !self.g1.contains(a))
            .expect("index two leaves a nontrivial coset")
    }

    /// The exact sign of sigma_s(lift) * lift for a residue s outside G_1.
    ///
    /// This is the norm of the lift over the quotient G/G_1; the class is
    /// well formed exactly when it is +-1. The sign itself depends on the
    /// coset representative s and is recorded, not interpreted.
    pub fn coset_norm_sign(&self, s: u64) -> Result<i32> {
        if self.g1.contains(s) {
            return Err(Error::Precondition(
                "coset norm requires a representative outside G1".to_string(),
            ));
        }
        let image = self.field.galois_apply(s, &self.lift)?;
        let product = self.field.mul(&image, &self.lift)?;
        match self.field.is_rational(&product) {
            Some(r) if r == Rat::one() => Ok(1),
            Some(r) if r == -Rat::one() => Ok(-1),
            _ => Err(Error::MalformedClass(format!(
                "sigma_{s}(y) * y is not +-1; the norm of y over G/G1 is not trivial mod signs"
            ))),
        }
    }

    /// The coset norm sign at complex conjugation (residue n - 1).
    pub fn conjugation_sign(&self) -> Result<i32> {
        self.coset_norm_sign(self.conductor() - 1)
    }

    /// Value of the restricted cocycle on a cyclic subgroup C: trivial when
    /// C lies in G_1, the class of y otherwise (every generator of C is then
    /// outside G_1, since a generator inside G_1 would trap C there).
    pub fn restriction_value(&self, c: &Subgroup) -> Result<Restriction> {
        if !c.is_cyclic() {
            return Err(Error::NotCyclic);
        }
        if self.g1.contains_subgroup(c) {
            Ok(Restriction::Trivial)
        } else {
            Ok(Restriction::Value(self.y.clone()))
        }
    }

    /// Decide whether the class restricts trivially to the cyclic subgroup
    /// C, returning the exact norm value when the norm test was consulted.
    ///
    /// Subgroups inside G_1 and subgroups of odd order are trivial for free
    /// (inflation, resp. vanishing H^2(C, {+-1})). Otherwise N_C(lift) is an
    /// exact rational +-1 and decides the question: the connecting map into
    /// H^2(C, {+-1}) = {+-1} is injective and computed by the norm of a
    /// lift. The answer does not depend on the choice of lift because |C| is
    /// even whenever the norm is consulted.
    pub fn is_trivial_on_cyclic(&self, c: &Subgroup) -> Result<(bool, Option<i32>)> {
        match self.restriction_value(c)? {
            Restriction::Trivial => Ok((true, None)),
            Restriction::Value(_) if c.order() % 2 == 1 => Ok((true, None)),
            Restriction::Value(_) => {
                let norm = self.field.norm_over(c, &self.lift)?;
                match self.field.is_rational(&norm) {
                    Some(r) if r == Rat::one() => Ok((true, Some(1))),
                    Some(r) if r == -Rat::one() => Ok((false, Some(-1))),
                    _ => Err(Error::MalformedClass(format!(
                        "norm over the cyclic subgroup of order {} is not +-1",
                        c.order()
                    ))),
                }
            }
        }
    }

    fn condition_i_within(&self, domain: &[u64]) -> Result<ConditionI> {
        // The image of y in H^1(G1, {+-1}) is the sign character
        // a -> sigma_a(lift)/lift; it is nontrivial iff some element negates.
        for &a in domain {
            if a == 1 {
                continue;
            }
            match self.field.conjugation_sign(a, &self.lift)? {
                Some(1) => {}
                Some(_) => {
                    return Ok(ConditionI {
                        holds: true,
                        witness: Some(a),
                    })
                }
                None => {
                    return Err(Error::MalformedClass(format!(
                        "sigma_{a} does not preserve y up to sign"
                    )))
                }
            }
        }
        Ok(ConditionI {
            holds: false,
            witness: None,
        })
    }

    /// Condition (i): the class is nontrivial, because y maps nontrivially
    /// to H^1(G_1, {+-1}). The witness is the smallest negating element.
    pub fn check_condition_i(&self) -> Result<ConditionI> {
        self.condition_i_within(self.g1.elements())
    }

    /// Condition (ii') over the maximally cyclic subgroups of `parent`.
    pub fn check_condition_ii_in(&self, parent: &Subgroup) -> Result<Vec<SubgroupCheck>> {
        let mut checks = Vec::new();
        for c in maximally_cyclic_subgroups_in(parent) {
            let (passes, norm) = self.is_trivial_on_cyclic(&c)?;
            checks.push(SubgroupCheck {
                subgroup: c,
                passes,
                norm,
            });
        }
        Ok(checks)
    }

    /// Condition (ii'): triviality over every maximally cyclic subgroup of
    /// the full Galois group.
    pub fn check_condition_ii(&self) -> Result<Vec<SubgroupCheck>> {
        self.check_condition_ii_in(&full_group(self.conductor()))
    }

    /// Condition (iii): the per-place audit.
    ///
    /// The examined places are the real place and the primes dividing n;
    /// everywhere else the decomposition group is cyclic and unramified, so
    /// condition (ii') already gives local triviality. The real place is
    /// verified by the norm over the conjugation subgroup; a ramified prime
    /// is verified when its decomposition group is cyclic (it then sits
    /// inside a maximally cyclic subgroup and inherits triviality). At most
    /// one unverified place is tolerated: the sum of the local residues
    /// vanishes, so a single failure is absorbed.
    pub fn check_condition_iii(&self) -> Result<PlaceAudit> {
        let n = self.conductor();
        let mut entries = Vec::new();
        let arch = archimedean_subgroup(n)?;
        let (arch_trivial, _) = self.is_trivial_on_cyclic(&arch)?;
        entries.push((
            Place::Infinity,
            if arch_trivial {
                PlaceStatus::VerifiedArchimedean
            } else {
                PlaceStatus::Unverified
            },
        ));
        for q in factorize(n)?.primes() {
            let d = decomposition_group(n, q)?;
            entries.push((
                Place::Finite(q),
                if d.is_cyclic() {
                    PlaceStatus::VerifiedCyclic
                } else {
                    PlaceStatus::Unverified
                },
            ));
        }
        let unverified = entries
            .iter()
            .filter(|(_, s)| *s == PlaceStatus::Unverified)
            .count();
        Ok(PlaceAudit {
            entries,
            unverified,
        })
    }

    /// Run all three condition checkers and assemble the report.
    pub fn condition_report(&self) -> Result<ConditionReport> {
        Ok(ConditionReport {
            condition_i: self.check_condition_i()?,
            condition_ii: self.check_condition_ii()?,
            condition_iii: self.check_condition_iii()?,
        })
    }

    /// Cross-check via odd-degree reduction: conditions (i) and (ii') may be
    /// decided inside the 2-Sylow subgroup H (the fixed field of H has odd
    /// degree over Q). Returns true when the reduced verdicts agree with the
    /// full-group ones.
    pub fn odd_reduction_crosscheck(&self) -> Result<bool> {
        let n = self.conductor();
        let sylow = sylow2_subgroup(n)?;

        let i_full = self.check_condition_i()?.holds;
        let g1_sylow = intersection(&self.g1, &sylow)?;
        let i_reduced = self.condition_i_within(g1_sylow.elements())?.holds;

        let ii_full = self.check_condition_ii()?.iter().all(|c| c.passes);
        let ii_reduced = self.check_condition_ii_in(&sylow)?.iter().all(|c| c.passes);

        Ok(i_full == i_reduced && ii_full == ii_reduced)
    }
}

/// An explicit finite abelian group with an automorphism, the raw material
/// for the brute-force H^1 oracle. Elements are coefficient vectors over
/// the listed cyclic factor orders; the action matrix gives the image of
/// each basis vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteModule {
    orders: Vec<u64>,
    action: Vec<Vec<u64>>,
}

/// Size of H^1 with explicit class representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H1Result {
    /// |H^1(C, M)|.
    pub size: u64,
    /// One cocycle value (at the generator) per cohomology class.
    pub representatives: Vec<Vec<u64>>,
}

impl FiniteModule {
    /// Validate the presentation: the action must be a well-defined
    /// automorphism of the direct sum of Z/orders\[i\].
    pub fn new(orders: Vec<u64>, action: Vec<Vec<u64>>) -> Result<FiniteModule> {
        if orders.is_empty() || orders.contains(&0) {
            return Err(Error::Precondition(
                "module orders must be positive".to_string(),
            ));
        }
        let size: u64 = orders.iter().product();
        if size > 1000 {
            return Err(Error::UnsupportedMagnitude(
                "finite module larger than 10^3".to_string(),
            ));
        }
        if action.len() != orders.len() || action.iter().any(|row| row.len() != orders.len()) {
            return Err(Error::Precondition(
                "action matrix shape must match the factor count".to_string(),
            ));
        }
        // Well-defined: orders[i] * action(e_i) = 0 componentwise.
        for (i, row) in action.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if (orders[i] as u128 * c as u128) % orders[j] as u128 != 0 {
                    return Err(Error::Precondition(
                        "action is not well-defined on the presented module".to_string(),
                    ));
                }
            }
        }
        let module = FiniteModule { orders, action };
        // Bijective on elements.
        let mut images: Vec<Vec<u64>> = module.elements().map(|x| module.apply(&x)).collect();
        images.sort_unstable();
        images.dedup();
        if images.len() as u64 != size {
            return Err(Error::Precondition(
                "action is not an automorphism".to_string(),
            ));
        }
        Ok(module)
    }

    /// Number of elements.
    pub fn size(&self) -> u64 {
        self.orders.iter().product()
    }

    fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        let orders = self.orders.clone();
        let total = self.size();
        (0..total).map(move |mut k| {
            orders
                .iter()
                .map(|&o| {
                    let digit = k % o;
                    k /= o;
                    digit
                })
                .collect()
        })
    }

    fn zero(&self) -> Vec<u64> {
        vec![0; self.orders.len()]
    }

    fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.orders)
            .map(|((&x, &y), &o)| (x + y) % o)
            .collect()
    }

    fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(&self.orders)
            .map(|(&x, &o)| (o - x) % o)
            .collect()
    }

    fn apply(&self, a: &[u64]) -> Vec<u64> {
        let mut out = self.zero();
        for (i, &c) in a.iter().enumerate() {
            for (j, &m) in self.action[i].iter().enumerate() {
                out[j] = ((out[j] as u128 + c as u128 * m as u128) % self.orders[j] as u128) as u64;
            }
        }
        out
    }
}

/// Compute |H^1(C, M)| for a cyclic group of order `m` acting through the
/// module's automorphism, twice over, and insist the answers agree:
///
/// (a) by the cyclic-cohomology formula ker(N) / im(g - 1);
/// (b) by enumerating explicit 1-cocycles (checking the cocycle identity on
///     all pairs of group elements) modulo explicit coboundaries.
///
/// Any disagreement is an internal contradiction, not a report.
pub fn brute_force_h1(m: u64, module: &FiniteModule) -> Result<H1Result> {
    if m == 0 || m > 12 {
        return Err(Error::Precondition(
            "cyclic group order must be between 1 and 12".to_string(),
        ));
    }
    // The action must have order dividing m to define a C-module.
    for x in module.elements() {
        let mut y = x.clone();
        for _ in 0..m {
            y = module.apply(&y);
        }
        if y != x {
            return Err(Error::Precondition(
                "automorphism order does not divide the group order".to_string(),
            ));
        }
    }

    // Route (a): the formula.
    let norm = |x: &[u64]| {
        let mut acc = module.zero();
        let mut pow = x.to_vec();
        for _ in 0..m {
            acc = module.add(&acc, &pow);
            pow = module.apply(&pow);
        }
        acc
    };
    let kernel_size = module
        .elements()
        .filter(|x| norm(x) == module.zero())
        .count() as u64;
    let mut image: Vec<Vec<u64>> = module
        .elements()
        .map(|x| module.add(&module.apply(&x), &module.neg(&x)))
        .collect();
    image.sort_unstable();
    image.dedup();
    let by_formula = kernel_size / image.len() as u64;

    // Route (b): explicit cocycles as full value tables c(g^j).
    let cocycle_of = |v: &[u64]| {
        let mut table: Vec<Vec<u64>> = Vec::with_capacity(m as usize);
        table.push(module.zero());
        for j in 1..m as usize {
            // c(g^j) = v + g(c(g^(j-1))).
            let moved = module.apply(&table[j - 1]);
            table.push(module.add(v, &moved));
        }
        table
    };
    let is_cocycle = |table: &[Vec<u64>]| {
        let mu = m as usize;
        for i in 0..mu {
            for j in 0..mu {
                let mut moved = table[j].clone();
                for _ in 0..i {
                    moved = module.apply(&moved);
                }
                // c(g^i g^j) = c(g^i) + g^i c(g^j), with wraparound.
                let lhs = &table[(i + j) % mu];
                let rhs = module.add(&table[i], &moved);
                if *lhs != rhs {
                    return false;
                }
            }
        }
        true
    };
    let mut cocycles: Vec<Vec<Vec<u64>>> = Vec::new();
    for v in module.elements() {
        let table = cocycle_of(&v);
        if is_cocycle(&table) {
            cocycles.push(table);
        }
    }
    let mut coboundaries: Vec<Vec<Vec<u64>>> = Vec::new();
    for x in module.elements() {
        let mut table = Vec::with_capacity(m as usize);
        let mut pow = x.clone();
        for _ in 0..m {
            table.push(module.add(&pow, &module.neg(&x)));
            pow = module.apply(&pow);
        }
        coboundaries.push(table);
    }
    coboundaries.sort_unstable();
    coboundaries.dedup();
    let by_enumeration = cocycles.len() as u64 / coboundaries.len() as u64;

    if by_formula != by_enumeration {
        return Err(Error::InternalContradiction(format!(
            "H^1 formula gives {by_formula} but cocycle enumeration gives {by_enumeration}"
        )));
    }

    // Representatives: peel cosets of the coboundary set off the cocycles.
    let mut representatives: Vec<Vec<u64>> = Vec::new();
    let mut used: Vec<Vec<Vec<u64>>> = Vec::new();
    for table in &cocycles {
        if used.contains(table) {
            continue;
        }
        representatives.push(table[1.min(m as usize - 1)].clone());
        for cob in &coboundaries {
            let shifted: Vec<Vec<u64>> = table
                .iter()
                .zip(cob)
                .map(|(a, b)| module.add(a, b))
                .collect();
            used.push(shifted);
        }
    }
    debug_assert_eq!(representatives.len() as u64, by_formula);

    Ok(H1Result {
        size: by_formula,
        representatives,
    })
}
