//! Fractal strings over a p-adic or archimedean place.
//!
//! A fractal string is a bounded open set identified with the nonincreasing
//! sequence of lengths (Haar measures) of its maximal balls or intervals.
//! This crate computes, exactly where the arithmetic allows it:
//!
//! * p-adic valuations, balls, and canonical decompositions of ball unions
//!   ([`padic`]),
//! * length sequences, counting functions, and total lengths ([`strings`]),
//! * geometric zeta functions as rational functions of `z = p^{-s}`, their
//!   poles (complex dimensions), and residues ([`zeta`]),
//! * thick/thin inner-tube volumes and truncated explicit tube formulas
//!   ([`tube`]),
//! * Minkowski-dimension estimates and Mellin-integral identity checks
//!   ([`analysis`]).
//!
//! Exact rational arithmetic is used for every set-theoretic and volume
//! computation; floating point enters only for zeta evaluation at complex
//! arguments, root finding, and least-squares fits.

pub mod analysis;
pub mod error;
pub mod grid;
pub mod numeric;
pub mod padic;
pub mod poly;
pub mod roots;
pub mod strings;
pub mod tube;
pub mod zeta;

pub use error::Error;
