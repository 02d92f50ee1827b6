//! Class polynomials for imaginary quadratic orders of discriminant -n, n ≡ 11 (mod 24).
//!
//! The crate constructs the Hilbert class polynomial H_n from j-values at CM
//! points, recovers the minimal polynomial P_n of the Ramanujan class invariant
//! t_n by integer-relation detection, computes both discriminants exactly, and
//! verifies the divisibility, sign, and 3-adic statements relating them,
//! cross-checking everything against an embedded reference dataset.

pub mod construct;
pub mod dataset;
pub mod error;
pub mod factor;
pub mod lattice;
pub mod modfunc;
pub mod numerics;
pub mod polyz;
pub mod quadform;
pub mod verify;

pub use error::{Error, Result};
