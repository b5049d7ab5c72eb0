//! Construction, enumeration, counting and verification of self-dual binary
//! codes that are left ideals of the dihedral group algebra F2[D_{8m}].
//!
//! The pipeline runs bottom-up:
//!
//! * [`gf2poly`] — bit-packed GF(2) polynomials;
//! * [`cyclofactor`] — `m = 2^λ0·m0` and the ordered factorization of `x^m0 - 1`;
//! * [`chainring`] — the chain rings `F2[x]/<f^s>` with the `x -> x^{-1}` map;
//! * [`wset`] — the solution sets of `w(x)w(x^{-1}) = 1 mod f^s`;
//! * [`crt`] — idempotents and the concatenated binary embedding;
//! * [`codes`] — component standard forms, duals, self-dual enumeration and counts;
//! * [`analysis`] — rank, duality, minimum distance and weight enumerators;
//! * [`fixtures`] and [`record`] — bundled reference data and the I/O formats.

pub mod analysis;
pub mod chainring;
pub mod codes;
pub mod crt;
pub mod cyclofactor;
pub mod error;
pub mod fixtures;
pub mod gf2poly;
pub mod record;
pub mod wset;

pub use error::{Error, Result};
pub use gf2poly::Poly;
