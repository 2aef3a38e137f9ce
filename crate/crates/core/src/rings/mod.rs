//! Coefficient rings for differential operators: the quadratic-differential
//! ring generated by u with (u')^2 = R(u), the plain polynomial-in-x ring,
//! and the jet ring of differential polynomials in free function symbols.

pub mod jet;
pub mod quad;

pub use jet::{JetElem, JetRing};
pub use quad::{FuncElem, FuncRing, UPoly};

use std::fmt;

use crate::rational::Rat;

/// A commutative differential ring element, as needed by the operator layer.
///
/// Ring-mismatch between operands is a programming error and panics; the
/// public module APIs check ring compatibility up front.
pub trait RingElem: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Derivation of the ring (d/dx, or the total derivative for jets).
    fn derive(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn scale(&self, c: &Rat) -> Self;
    /// Largest |rational coefficient|, for residual diagnostics.
    fn max_abs(&self) -> Rat;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}
