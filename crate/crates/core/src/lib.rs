//! Exact arithmetic in cyclotomic fields and the Galois-cohomology machinery
//! needed to certify local-global obstructions for quadratic twist classes.
//!
//! Everything here is computed with arbitrary-precision rationals: there is no
//! floating point and no probabilistic answer anywhere in the crate. The main
//! entry points are:
//!
//! - [`exactmath`]: integer/rational number theory (primality, factorization,
//!   Legendre/Jacobi/Kronecker and Hilbert symbols, norm-form solving, CRT);
//! - [`cyclotomic`]: the field Q(zeta_n) in a reduced power basis, with the
//!   Galois action, subgroup norms, square roots of -3 and Gauss sums;
//! - [`galois`]: the unit group (Z/nZ)^x as the Galois group of Q(zeta_n)/Q,
//!   with subgroup enumeration, decomposition groups and quadratic subfields;
//! - [`cohomology`]: cyclic-group cohomology of the sign module, the inflated
//!   twist class and the three condition checkers, plus a brute-force H^1
//!   oracle over finite modules;
//! - [`certify`]: end-to-end certificate pipelines (theorem verification for
//!   primes p = 13 mod 24, minimality classification of odd conductors, and
//!   range scans);
//! - [`localpowers`]: m-th power tests in residue fields, in Q_p and in
//!   completions of real quadratic fields, with the local/global violation
//!   scanner.
//!
//! The crate is `no_std` (it only needs `alloc`); IO, the CLI and the JSON
//! file formats live in the companion `quadtwist-cli` crate.

#![cfg_attr(not(test), no_std)]
// Divisibility reads as `x % n == 0` throughout, matching the notation of
// the number theory it implements.
#![allow(clippy::manual_is_multiple_of)]

extern crate alloc;

pub mod certify;
pub mod cohomology;
pub mod cyclotomic;
mod error;
pub mod exactmath;
pub mod galois;
pub mod localpowers;

pub use error::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
