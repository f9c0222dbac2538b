//! Executable Cartesian differential categories.
//!
//! Models implement [`category::Model`]; differential and linearizing
//! combinators are capabilities over a model ([`combinator`]); the
//! [`laws`] module checks their axioms on generated instances.

pub mod biproduct;
pub mod category;
pub mod closed;
pub mod commands;
pub mod combinator;
pub mod error;
pub mod expr;
pub mod laws;
pub mod poly;
pub mod shape;
pub mod smooth;
pub mod mutants;
pub mod suites;
pub mod tower;

pub use category::{Closed, ClosedStructure, EqContract, Model, Slice, Structure};
pub use error::{Error, ParseError, Result};
pub use shape::Shape;
