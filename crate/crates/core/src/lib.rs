//! Exact computational algebra for cyclotomic towers over Z: norm and trace
//! calculus, degree-p cyclic Galois extensions, operations on cyclic
//! extensions and almost-cyclic symbol algebras.
//!
//! Every object is built from exact integer data and every structural claim
//! (Galois, Azumaya, freeness, isomorphism) is certified by an explicit
//! computation rather than assumed.

pub mod error;
pub mod ring;
pub mod linalg;
pub mod norm;
pub mod kummer;
pub mod galois;
pub mod azumaya;
pub mod checks;
pub mod export;

pub use error::{Error, Result};
pub use ring::{ring_parse, Case, Elt, Mono, Ring, RingDescriptor};

/// Arbitrary precision integer used for all coordinates.
pub type Int = num_bigint::BigInt;
