//! Exhaustive classification of divisible binary linear codes.
//!
//! Codes are handled as generator matrices over GF(2) and, for isomorphism
//! questions, as multisets of points in GF(2)^k.

pub mod canon;
pub mod classify;
pub mod cli;
pub mod decompose;
pub mod divlen;
pub mod extcode;
pub mod extend;
pub mod gf2core;
pub mod golden;
pub mod spectra;

mod error;

pub use error::{Error, Result};
pub use gf2core::{BinaryCode, ColumnMultiplicity, WeightEnumerator};
