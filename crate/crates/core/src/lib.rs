//! Exact computer algebra for rank-two self-adjoint commuting ordinary
//! differential operator pairs and their hyperelliptic spectral curves,
//! together with a pseudospectral solver for the associated evolution
//! system with rapid-decay initial data.
//!
//! The symbolic layers work over arbitrary-precision rationals and never
//! round; the simulator is the only floating-point component.

pub mod diffop;
pub mod error;
pub mod family;
pub mod linalg;
pub mod poly;
pub mod qbuilder;
pub mod rational;
pub mod report;
pub mod rings;
pub mod sim;
pub mod verify;

pub use error::{Error, Result};
pub use rational::Rat;
