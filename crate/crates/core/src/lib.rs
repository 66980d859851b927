//! Exact-position discrete measures, gap-constrained periodic combs, and
//! the multiscale construction of a crystalline measure whose Fourier
//! transform is not translation bounded.

// Negated float comparisons in this crate are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod build;
pub mod dft;
pub mod error;
pub mod io;
pub mod measure;
pub mod meyer;
pub mod rational;
pub mod schwartz;
pub mod sum;
pub mod verify;

pub use error::{Error, Result};
