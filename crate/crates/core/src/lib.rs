//! Exact F_q-linear calculus over K = F_q((x)).
//!
//! The crate provides, over a configurable coefficient field F_q:
//!
//! * exact polynomial and precision-tracked Laurent series arithmetic
//!   ([`series`]);
//! * the Carlitz arithmetic constants `[i]`, `D_i`, `L_i`, `Gamma_j` and
//!   the Carlitz binomial ([`constants`]);
//! * the Carlitz polynomial families and the orthonormal h-basis with
//!   sup-norm computation ([`basis`]);
//! * F_q-linear functions on the ring of integers O in three interchangeable
//!   representations, the difference operator, ladder operators, Taylor
//!   coefficient recovery and coefficient-decay diagnostics ([`fqlinear`]);
//! * the indefinite sum and the Volkenborn-type integral ([`calculus`]);
//! * the Carlitz module action, logarithm and exponential with their
//!   integral identities ([`specialfn`]);
//! * a named-check verification suite covering every displayed identity
//!   at brute-force-checkable parameters ([`verify`]).
//!
//! All coefficient arithmetic is exact; truncation happens only where a
//! genuine series inverse forces it, and every value then carries its
//! precision explicitly.

pub mod basis;
pub mod calculus;
pub mod constants;
pub mod error;
pub mod field;
pub mod fqlinear;
pub mod series;
pub mod specialfn;
pub mod verify;

pub use error::{Error, Result};
pub use field::{Fq, FqContext};
pub use series::{parse_laurent, parse_poly, AbsValue, Laurent, Poly, EXACT};
