//! Exact computations for metabelian doubly-slice obstructions of high-dimensional
//! knots: L² ρ-invariants of Hermitian matrices over `Z[u, u^-1]`, orders of branched
//! cover homology, Livingston's vanishing criterion, metabelian group arithmetic, and
//! lagrangian checks for Blanchfield pairings.

#![allow(clippy::needless_range_loop)]

pub mod blanchfield;
pub mod cli;
pub mod covers;
pub mod error;
pub mod laurent;
pub mod linalg;
pub mod metabelian;
pub mod numbers;
pub mod rho;
pub mod serde_util;

pub use error::{Error, Result};
