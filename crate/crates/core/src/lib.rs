//! Free energies, critical temperatures, ground states and exact finite-size
//! partition functions of inhomogeneous mean-field quantum spin models.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is pure
//! computation; file formats and the command line live in `mfq-cli`.

#![no_std]

extern crate alloc;

pub mod combinatorics;
pub mod error;
pub mod groundstate;
pub mod numeric;
pub mod observables;
pub mod oracle;
pub mod repsum;
pub mod variational;

pub use error::{Error, Result};
