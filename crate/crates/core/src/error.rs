use alloc::string::String;
use core::fmt;

/// Errors shared by every module of the crate.
///
/// Mathematical failures (a condition that does not hold) are reported as
/// ordinary values, never as errors; an `Error` always means the input was
/// outside an operation's contract or an internal invariant was violated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The input exceeds the declared exact-arithmetic bound.
    UnsupportedMagnitude(String),
    /// An argument violated an operation precondition.
    Precondition(String),
    /// `p` was required to be an odd prime.
    NotAnOddPrime(u64),
    /// A residue was required to be coprime to the modulus.
    NotCoprime { value: u64, modulus: u64 },
    /// CRT moduli must be pairwise coprime.
    NonCoprimeModuli { a: u64, b: u64 },
    /// Two field elements with different conductors were combined.
    ConductorMismatch { left: u64, right: u64 },
    /// Inversion (or projective normalization) of zero.
    ZeroElement,
    /// A subgroup argument was required to be cyclic.
    NotCyclic,
    /// sqrt(d) does not lie in Q(zeta_n).
    MissingSquareRoot { d: i64, n: u64 },
    /// A cohomology class failed a structural invariant; this signals bad
    /// input data, not a failed mathematical condition.
    MalformedClass(String),
    /// An identity guaranteed by the underlying theory failed to hold.
    InternalContradiction(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnsupportedMagnitude(msg) => write!(f, "unsupported magnitude: {msg}"),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::NotAnOddPrime(p) => write!(f, "{p} is not an odd prime"),
            Error::NotCoprime { value, modulus } => {
                write!(f, "{value} is not coprime to {modulus}")
            }
            Error::NonCoprimeModuli { a, b } => {
                write!(f, "moduli {a} and {b} are not coprime")
            }
            Error::ConductorMismatch { left, right } => {
                write!(f, "conductor mismatch: {left} vs {right}")
            }
            Error::ZeroElement => write!(f, "operation requires a nonzero element"),
            Error::NotCyclic => write!(f, "subgroup is not cyclic"),
            Error::MissingSquareRoot { d, n } => {
                write!(f, "sqrt({d}) does not lie in Q(zeta_{n})")
            }
            Error::MalformedClass(msg) => write!(f, "malformed cohomology class: {msg}"),
            Error::InternalContradiction(msg) => write!(f, "internal contradiction: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
