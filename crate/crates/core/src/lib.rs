//! Joint network-source coding over GF(2).
//!
//! The crate designs linear broadcast network codes on DAGs, sparsifies the
//! per-terminal parity-check matrices they induce, and measures syndrome
//! decoding error rates when terminals hold correlated side information.

pub mod cli;
pub mod error;
pub mod gf2;
pub mod gf2m;
pub mod harness;
pub mod matrix_io;
pub mod netcode;
pub mod network;
pub mod rd;
pub mod rng;
pub mod sparsifier;
pub mod syndrome;

pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVec};
pub use gf2m::{GfField, GfMatrix};
