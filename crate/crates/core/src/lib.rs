//! A type checker for guarded cubical type theory.
//!
//! The kernel is split into [`syntax`] (terms and contexts), [`cofib`]
//! (interval and face reasoning), [`eval`] (weak-head evaluation) and
//! [`check`] (bidirectional checking and conversion). [`surface`] parses and
//! prints `.ctt` files, [`driver`] checks whole modules and implements the
//! command line, and [`corpus`] runs manifest-driven golden tests.

pub mod check;
pub mod cofib;
pub mod corpus;
pub mod driver;
pub mod eval;
pub mod surface;
pub mod syntax;
