//! Univariate polynomials in the spectral parameter z over `Rat`.
//!
//! Coefficients are stored ascending by degree with no trailing zeros;
//! the zero polynomial has an empty coefficient vector and `degree()`
//! returns `None` for it.

use std::fmt;

use num_traits::Zero;

use crate::rational::{rat_str, rat_to_f64, Rat};

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PolyZ {
    coeffs: Vec<Rat>,
}

impl PolyZ {
    pub fn zero() -> Self {
        PolyZ { coeffs: Vec::new() }
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Rat::from_integer(1.into()))
    }

    /// The indeterminate z.
    pub fn var() -> Self {
        Self::from_coeffs(vec![Rat::zero(), Rat::from_integer(1.into())])
    }

    /// c·z^k
    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        PolyZ { coeffs }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + other.coeff(k));
        }
        Self::from_coeffs(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        PolyZ {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, z: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn eval_f64(&self, z: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * z + rat_to_f64(c);
        }
        acc
    }

    pub fn pow(&self, mut n: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Largest |coefficient|, used for residual diagnostics.
    pub fn max_abs(&self) -> Rat {
        let mut m = Rat::zero();
        for c in &self.coeffs {
            let a = num_traits::Signed::abs(c);
            if a > m {
                m = a;
            }
        }
        m
    }
}

impl fmt::Display for PolyZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", rat_str(c))?,
                1 => write!(f, "({})*z", rat_str(c))?,
                _ => write!(f, "({})*z^{}", rat_str(c), k)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rint};

    #[test]
    fn difference_of_squares() {
        let z = PolyZ::var();
        let p = z.add(&PolyZ::one()).mul(&z.sub(&PolyZ::one()));
        assert_eq!(p, PolyZ::from_coeffs(vec![rint(-1), rint(0), rint(1)]));
    }

    #[test]
    fn square_cancellation() {
        // (z + 1/4 - alpha0)^2 at alpha0 = 1/4 is z^2
        let alpha0 = rat(1, 4);
        let p = PolyZ::var().add(&PolyZ::constant(rat(1, 4) - alpha0));
        assert_eq!(p.mul(&p), PolyZ::monomial(rint(1), 2));
    }

    #[test]
    fn mul_degree_adds() {
        let a = PolyZ::from_coeffs(vec![rint(2), rint(3), rint(1)]);
        let b = PolyZ::from_coeffs(vec![rint(-1), rint(5)]);
        assert_eq!(a.mul(&b).degree(), Some(3));
        assert_eq!(PolyZ::zero().degree(), None);
    }

    #[test]
    fn eval_is_ring_hom() {
        let a = PolyZ::from_coeffs(vec![rat(1, 2), rint(3)]);
        let b = PolyZ::from_coeffs(vec![rint(-2), rint(0), rat(7, 3)]);
        let r = rat(5, 4);
        assert_eq!(a.mul(&b).eval(&r), a.eval(&r) * b.eval(&r));
        assert_eq!(a.add(&b).eval(&r), a.eval(&r) + b.eval(&r));
    }
}
