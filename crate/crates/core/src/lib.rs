//! Realisations of transitive Lie algebra pairs as formal vector fields.
//!
//! The crate works over exact rationals throughout:
//!
//! - [`liealg`]: Lie algebras by structure constants, transitive pairs and
//!   their ideals.
//! - [`uea`]: PBW normal ordering in the universal enveloping algebra.
//! - [`series`] and [`vecfield`]: truncated power series and formal vector
//!   fields.
//! - [`realise`]: the realisation formula with its checks and closed-form
//!   lifting of coefficients.
//! - [`jets`]: prolongation and Lie point symmetries of explicit ODEs.
//! - [`catalog`]: Lie's tables of transitive algebras in two variables.

// Index loops read better than iterator chains in the matrix code.
#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod error;
pub mod expr;
pub mod jets;
pub mod liealg;
pub mod linalg;
pub mod rational;
pub mod realise;
pub mod series;
pub mod uea;
pub mod vecfield;

pub use error::{Error, Result};
pub use rational::Q;
