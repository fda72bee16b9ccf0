//! Weighted two-layer set systems, spectral/Cheeger expansion certificates,
//! and linear codes modelled over such systems, with bit-flip correction,
//! testability and distance verifiers, and a single-orbit affine-invariant
//! construction.

pub mod affine;
pub mod cli;
pub mod code;
pub mod error;
pub mod expansion;
pub mod experiment;
pub mod field;
pub mod graph;
pub mod io;
pub mod ratio;
pub mod system;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
