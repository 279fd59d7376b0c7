//! Geometry, counting, and combinatorics kernels for needle-set experiments.
//!
//! Everything in this crate is a pure function over immutable values: unit
//! directions and line segments, half-open mesh rasterization and box-counting,
//! cut-and-move decompositions, centre-field constructions, lattice difference
//! sets, and zoom-out similarity scaling. IO, file formats, and the experiment
//! runner live in the companion `kakeya-cli` crate.
//!
//! The crate is `no_std` (with `alloc`); transcendental math goes through
//! `libm` so results are bit-identical across platforms.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod counting;
pub mod cutmove;
pub mod geometry;
pub mod kakeya;
pub mod lattice;
mod math;
pub mod rng;
pub mod tangent;

use alloc::string::String;
use core::fmt;

/// Error type shared by all modules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A precondition on an argument failed; the message names the argument.
    InvalidInput(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
