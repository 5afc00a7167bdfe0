//! Periodic Schrödinger operators `-y'' + q y` on rectangular and n-cubic
//! quantum graphs with Kirchhoff vertex conditions.
//!
//! The entry points are [`interval::solve_interval`] for the fundamental
//! solutions on one edge, the characteristic functions in [`dispersion`] and
//! [`tilings`], and the spectral routines in [`spectrum`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod detkit;
pub mod dispersion;
pub mod error;
pub mod exec;
pub mod interval;
pub mod roots;
pub mod spectrum;
pub mod tilings;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Execution;
pub use interval::{solve_interval, IntervalData, Potential};
