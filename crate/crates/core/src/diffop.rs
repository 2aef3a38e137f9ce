//! Ordinary differential operators with coefficients in a differential ring.
//!
//! Normal form keeps coefficients to the left of powers of the derivation:
//! A = sum_i c_i ∂^i, coefficients ascending, leading coefficient nonzero.
//! Composition expands by the Leibniz rule; adjoint and z-substitution
//! re-normalize to this form immediately, so equality-to-zero is a plain
//! coefficient check.

use std::fmt;

use num_integer::binomial;
use num_bigint::BigInt;

use crate::rational::Rat;
use crate::rings::RingElem;

#[derive(Clone, PartialEq, Debug)]
pub struct DiffOp<C: RingElem> {
    /// c[i] multiplies ∂^i; no trailing zeros. Empty = zero operator.
    coeffs: Vec<C>,
}

impl<C: RingElem> DiffOp<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        DiffOp { coeffs }
    }

    pub fn zero() -> Self {
        DiffOp { coeffs: Vec::new() }
    }

    /// Multiplication operator by a ring element.
    pub fn mul_op(c: C) -> Self {
        Self::new(vec![c])
    }

    /// ∂^n (the coefficient 1 is cloned in shape from `one`).
    pub fn derivation(one: C, n: usize) -> Self {
        let mut coeffs = vec![one.zero_like(); n + 1];
        coeffs[n] = one.one_like();
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Option<&C> {
        self.coeffs.get(i)
    }

    pub fn order(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest |rational coefficient| over all operator coefficients,
    /// reported by verification diagnostics.
    pub fn max_abs(&self) -> Rat {
        let mut m = Rat::from_integer(0.into());
        for c in &self.coeffs {
            let a = c.max_abs();
            if a > m {
                m = a;
            }
        }
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i);
            let b = other.coeffs.get(i);
            out.push(match (a, b) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        DiffOp {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.scale(r)).collect())
    }

    /// Left multiplication by a ring element.
    pub fn scale_elem(&self, e: &C) -> Self {
        Self::new(self.coeffs.iter().map(|c| e.mul(c)).collect())
    }

    /// Operator composition A∘B via (f ∂^i)∘(g ∂^j) =
    /// sum_k binom(i,k) f d^k(g) ∂^(i+j-k).
    pub fn compose(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let max_i = self.coeffs.len() - 1;
        // d^k of each coefficient of B, k = 0..=max_i
        let mut derivs: Vec<Vec<C>> = vec![other.coeffs.clone()];
        for k in 1..=max_i {
            let prev = &derivs[k - 1];
            derivs.push(prev.iter().map(|c| c.derive()).collect());
        }
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, f) in self.coeffs.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            for k in 0..=i {
                let binom = Rat::from_integer(binomial(
                    BigInt::from(i),
                    BigInt::from(k),
                ));
                for (j, gk) in derivs[k].iter().enumerate() {
                    if gk.is_zero() {
                        continue;
                    }
                    let term = f.mul(gk).scale(&binom);
                    out[i + j - k] = out[i + j - k].add(&term);
                }
            }
        }
        Self::new(out)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.compose(other).sub(&other.compose(self))
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        self.compose(other).add(&other.compose(self))
    }

    /// Formal adjoint: sum_i (-1)^i ∂^i ∘ c_i.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let di = Self::derivation(c.one_like(), i);
            let mut term = di.compose(&Self::mul_op(c.clone()));
            if i % 2 == 1 {
                term = term.neg();
            }
            out = out.add(&term);
        }
        out
    }

    pub fn pow(&self, n: usize) -> Self {
        if n == 0 {
            let one = self
                .coeffs
                .first()
                .map(|c| c.one_like())
                .expect("cannot take 0th power of the zero operator without a ring sample");
            return Self::mul_op(one);
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.compose(self);
        }
        acc
    }

    /// Applies the operator to a ring element: sum_i c_i d^i(e).
    pub fn apply(&self, e: &C) -> C {
        let mut out = e.zero_like();
        let mut d = e.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                d = d.derive();
            }
            if !c.is_zero() {
                out = out.add(&c.mul(&d));
            }
        }
        out
    }

    /// sum_j templates[j] ∘ L^j, powers of L composed on the right.
    pub fn subst_z(templates: &[Self], l: &Self) -> Self {
        let mut out = Self::zero();
        let mut lpow: Option<Self> = None; // L^j, built incrementally
        for (j, t) in templates.iter().enumerate() {
            let term = if j == 0 {
                t.clone()
            } else {
                let p = match lpow {
                    None => l.clone(),
                    Some(prev) => prev.compose(l),
                };
                let term = t.compose(&p);
                lpow = Some(p);
                term
            };
            out = out.add(&term);
        }
        out
    }

    /// Deterministic text form, coefficients ascending in ∂-order.
    pub fn debug_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut lines = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            lines.push(format!("d^{}: {}", i, c));
        }
        lines.join("\n")
    }
}

impl<C: RingElem> fmt::Display for DiffOp<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.debug_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rint};
    use crate::rings::{FuncElem, FuncRing};

    fn trig_ring() -> FuncRing {
        FuncRing::quad(rint(1), rint(0), rint(-1), rint(0))
    }

    fn d(ring: &FuncRing, n: usize) -> DiffOp<FuncElem> {
        DiffOp::derivation(FuncElem::one(ring), n)
    }

    #[test]
    fn leibniz_compose() {
        // ∂∘u = u∂ + u'
        let ring = trig_ring();
        let u = FuncElem::gen(&ring);
        let lhs = d(&ring, 1).compose(&DiffOp::mul_op(u.clone()));
        let expect = DiffOp::new(vec![u.derive(), u]);
        assert_eq!(lhs, expect);
    }

    #[test]
    fn commutator_with_multiplication() {
        // [∂, u] = u'
        let ring = trig_ring();
        let u = FuncElem::gen(&ring);
        let c = d(&ring, 1).commutator(&DiffOp::mul_op(u.clone()));
        assert_eq!(c, DiffOp::mul_op(u.derive()));
    }

    #[test]
    fn anticommutator_with_derivation() {
        // <f, ∂> = 2 f ∂ + f'
        let ring = trig_ring();
        let up = FuncElem::gen_prime(&ring);
        let a = DiffOp::mul_op(up.clone()).anticommutator(&d(&ring, 1));
        let expect = DiffOp::new(vec![up.derive(), up.scale(&rint(2))]);
        assert_eq!(a, expect);
    }

    #[test]
    fn compose_d3_uprime_trig() {
        // ∂^3∘u' = u'∂^3 + 3u''∂^2 + 3u'''∂ + u'''' with u'' = g2 u + g1/2
        let (g2, g1, g0) = (rat(5, 3), rat(-2, 7), rat(1, 2));
        let ring = FuncRing::quad(g0, g1.clone(), g2.clone(), rint(0));
        let up = FuncElem::gen_prime(&ring);
        let lhs = d(&ring, 3).compose(&DiffOp::mul_op(up.clone()));
        let u = FuncElem::gen(&ring);
        let upp = u.scale(&g2).add(&FuncElem::from_rat(&ring, g1 / rint(2)));
        let expect = DiffOp::new(vec![
            upp.mul(&FuncElem::from_rat(&ring, g2.clone())), // u'''' = g2 u''
            up.scale(&g2).scale(&rint(3)),                   // 3 u''' = 3 g2 u'
            upp.scale(&rint(3)),
            up,
        ]);
        assert_eq!(lhs, expect);
    }

    #[test]
    fn associativity() {
        let ring = trig_ring();
        let u = FuncElem::gen(&ring);
        let up = FuncElem::gen_prime(&ring);
        let a = DiffOp::new(vec![u.clone(), up.clone(), FuncElem::one(&ring)]);
        let b = DiffOp::new(vec![up.mul(&u), u.clone()]);
        let c = DiffOp::new(vec![FuncElem::from_rat(&ring, rat(1, 3)), u.mul(&u), up.clone()]);
        assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
    }

    #[test]
    fn jacobi_and_antisymmetry() {
        let ring = trig_ring();
        let u = FuncElem::gen(&ring);
        let up = FuncElem::gen_prime(&ring);
        let a = DiffOp::new(vec![u.clone(), FuncElem::one(&ring)]);
        let b = DiffOp::new(vec![up.clone(), u.mul(&u)]);
        let c = DiffOp::new(vec![u.mul(&up), FuncElem::from_rat(&ring, rat(-1, 2))]);
        assert_eq!(a.commutator(&b), b.commutator(&a).neg());
        let jac = a
            .commutator(&b.commutator(&c))
            .add(&b.commutator(&c.commutator(&a)))
            .add(&c.commutator(&a.commutator(&b)));
        assert!(jac.is_zero());
    }

    #[test]
    fn adjoint_involution_antihom() {
        let ring = trig_ring();
        let u = FuncElem::gen(&ring);
        let up = FuncElem::gen_prime(&ring);
        let a = DiffOp::new(vec![u.clone(), up.clone(), FuncElem::one(&ring)]);
        let b = DiffOp::new(vec![up.mul(&u), u.clone(), FuncElem::from_rat(&ring, rat(2, 5))]);
        assert_eq!(a.adjoint().adjoint(), a);
        assert_eq!(a.compose(&b).adjoint(), b.adjoint().compose(&a.adjoint()));
        // adjoint(∂) = -∂
        assert_eq!(d(&ring, 1).adjoint(), d(&ring, 1).neg());
    }

    #[test]
    fn subst_z_edges() {
        let ring = trig_ring();
        let u = FuncElem::gen(&ring);
        let l = DiffOp::new(vec![u.clone(), FuncElem::one(&ring)]);
        // identity template at j = 1 reproduces L
        let id = DiffOp::mul_op(FuncElem::one(&ring));
        let got = DiffOp::subst_z(&[DiffOp::zero(), id], &l);
        assert_eq!(got, l);
        // all-zero templates give the zero operator
        let z: DiffOp<FuncElem> = DiffOp::subst_z(&[DiffOp::zero(), DiffOp::zero()], &l);
        assert!(z.is_zero());
    }

    #[test]
    fn apply_operator() {
        let ring = trig_ring();
        let u = FuncElem::gen(&ring);
        // (∂^2)(u^2) = 2 u u'' + 2 (u')^2
        let got = d(&ring, 2).apply(&u.mul(&u));
        let expect = u.mul(&u.derive().derive()).scale(&rint(2)).add(
            &u.derive().mul(&u.derive()).scale(&rint(2)),
        );
        assert_eq!(got, expect);
    }
}
