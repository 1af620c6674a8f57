//! Exact computations with polyhedral divisors and divisorial fans.
//!
//! A normal variety with an effective torus action is described by
//! polyhedral divisors on a quotient base: formal sums of polyhedra over
//! prime divisors sharing a tail cone. This crate implements
//!
//! - an exact rational polyhedral kernel ([`geom`]) with a double
//!   description core and lattice utilities,
//! - bases and their divisors ([`base`]),
//! - polyhedral divisors with evaluation, the pp test and localization
//!   ([`ppdiv`]),
//! - fans of divisors: closure, face tests, coherence certificates and the
//!   separatedness and completeness verdicts ([`fan`]),
//! - toric downgrades to subtorus actions ([`downgrade`]) and the standard
//!   examples ([`constructions`]),
//! - JSON documents and SVG rendering ([`io`]).
//!
//! All arithmetic is over `BigRational`. Pairwise work runs on rayon when
//! the `parallel` feature is enabled; [`par::set_sequential`] forces the
//! sequential path at runtime, and results never depend on the choice.

// Polyhedra cache their H-representation in a OnceLock that Eq and Ord ignore.
#![allow(clippy::mutable_key_type)]

pub mod base;
pub mod constructions;
pub mod downgrade;
pub mod error;
pub mod fan;
pub mod geom;
pub mod io;
pub mod par;
pub mod ppdiv;
