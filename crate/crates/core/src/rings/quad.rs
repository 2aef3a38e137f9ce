//! Elements of a quadratic-differential function ring.
//!
//! A `FuncElem` denotes even(u) + odd(u)·u' where u is the ring generator
//! and (u')^2 = R(u) with deg R <= 3. Multiplication reduces every u'·u'
//! through the defining relation, so canonical form never carries a power
//! of u' above one. The same type also hosts the plain polynomial-in-x
//! ring (generator x, d(x) = 1, no odd part), used by the Dixmier family.
//!
//! Coefficients of powers of u are themselves polynomials in the spectral
//! parameter z, which stays a genuine indeterminate throughout.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::PolyZ;
use crate::rational::{rat_to_f64, Rat};
use crate::rings::RingElem;

#[derive(Clone, PartialEq, Debug)]
pub enum FuncRing {
    /// (u')^2 = r[3] u^3 + r[2] u^2 + r[1] u + r[0]
    Quad { r: [Rat; 4] },
    /// Polynomials in x with the standard derivative.
    PolyX,
}

impl FuncRing {
    pub fn quad(r0: Rat, r1: Rat, r2: Rat, r3: Rat) -> Self {
        FuncRing::Quad { r: [r0, r1, r2, r3] }
    }

    /// R(u) as a u-polynomial (zero polynomial for PolyX).
    fn relation(&self) -> UPoly {
        match self {
            FuncRing::Quad { r } => UPoly::from_coeffs(
                r.iter().map(|c| PolyZ::constant(c.clone())).collect(),
            ),
            FuncRing::PolyX => UPoly::zero(),
        }
    }

    /// R'(u)/2, the second derivative of u.
    fn half_relation_derivative(&self) -> UPoly {
        self.relation().derive_u().scale(&crate::rational::rat(1, 2))
    }
}

/// Polynomial in the ring generator with PolyZ coefficients, ascending.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct UPoly(Vec<PolyZ>);

impl UPoly {
    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn from_coeffs(mut coeffs: Vec<PolyZ>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly(coeffs)
    }

    pub fn coeffs(&self) -> &[PolyZ] {
        &self.0
    }

    pub fn coeff(&self, k: usize) -> PolyZ {
        self.0.get(k).cloned().unwrap_or_else(PolyZ::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        Self::from_coeffs((0..n).map(|k| self.coeff(k).add(&other.coeff(k))).collect())
    }

    pub fn neg(&self) -> Self {
        UPoly(self.0.iter().map(|c| c.neg()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![PolyZ::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::from_coeffs(self.0.iter().map(|a| a.scale(c)).collect())
    }

    pub fn scale_polyz(&self, p: &PolyZ) -> Self {
        Self::from_coeffs(self.0.iter().map(|a| a.mul(p)).collect())
    }

    /// Formal d/du.
    pub fn derive_u(&self) -> Self {
        Self::from_coeffs(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&Rat::from_integer(k.into())))
                .collect(),
        )
    }

    fn max_abs(&self) -> Rat {
        let mut m = Rat::zero();
        for c in &self.0 {
            let a = c.max_abs();
            if a > m {
                m = a;
            }
        }
        m
    }

    fn eval_f64(&self, z: f64, u: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.0.iter().rev() {
            acc = acc * u + c.eval_f64(z);
        }
        acc
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct FuncElem {
    ring: FuncRing,
    even: UPoly,
    odd: UPoly,
}

impl FuncElem {
    pub fn zero(ring: &FuncRing) -> Self {
        FuncElem {
            ring: ring.clone(),
            even: UPoly::zero(),
            odd: UPoly::zero(),
        }
    }

    pub fn one(ring: &FuncRing) -> Self {
        Self::from_polyz(ring, PolyZ::one())
    }

    pub fn from_rat(ring: &FuncRing, c: Rat) -> Self {
        Self::from_polyz(ring, PolyZ::constant(c))
    }

    /// A z-polynomial as a ring constant (x-free).
    pub fn from_polyz(ring: &FuncRing, p: PolyZ) -> Self {
        FuncElem {
            ring: ring.clone(),
            even: UPoly::from_coeffs(vec![p]),
            odd: UPoly::zero(),
        }
    }

    /// The generator u (or x for PolyX).
    pub fn gen(ring: &FuncRing) -> Self {
        FuncElem {
            ring: ring.clone(),
            even: UPoly::from_coeffs(vec![PolyZ::zero(), PolyZ::one()]),
            odd: UPoly::zero(),
        }
    }

    /// u'. Panics for the PolyX flavor, which has no odd part.
    pub fn gen_prime(ring: &FuncRing) -> Self {
        assert!(
            matches!(ring, FuncRing::Quad { .. }),
            "u' only exists in the quadratic-differential flavor"
        );
        FuncElem {
            ring: ring.clone(),
            even: UPoly::zero(),
            odd: UPoly::from_coeffs(vec![PolyZ::one()]),
        }
    }

    pub fn from_parts(ring: &FuncRing, even: UPoly, odd: UPoly) -> Self {
        assert!(
            odd.is_zero() || matches!(ring, FuncRing::Quad { .. }),
            "PolyX elements have no odd part"
        );
        FuncElem {
            ring: ring.clone(),
            even,
            odd,
        }
    }

    pub fn ring(&self) -> &FuncRing {
        &self.ring
    }

    pub fn even(&self) -> &UPoly {
        &self.even
    }

    pub fn odd(&self) -> &UPoly {
        &self.odd
    }

    fn check_ring(&self, other: &Self) {
        assert!(
            self.ring == other.ring,
            "ring mismatch: {:?} vs {:?}",
            self.ring,
            other.ring
        );
    }

    pub fn scale_polyz(&self, p: &PolyZ) -> Self {
        FuncElem {
            ring: self.ring.clone(),
            even: self.even.scale_polyz(p),
            odd: self.odd.scale_polyz(p),
        }
    }

    /// Degree in u, counting both parts; None for zero.
    pub fn u_degree(&self) -> Option<usize> {
        let e = self.even.coeffs().len();
        let o = self.odd.coeffs().len();
        if e == 0 && o == 0 {
            None
        } else {
            Some(e.max(o).saturating_sub(1))
        }
    }

    /// Extracts a pure z-polynomial if the element is x-free.
    pub fn to_polyz(&self) -> Option<PolyZ> {
        if !self.odd.is_zero() || self.even.coeffs().len() > 1 {
            return None;
        }
        Some(self.even.coeff(0))
    }

    /// Coefficient of z^k, as an element of the same ring.
    pub fn coeff_z(&self, k: usize) -> FuncElem {
        let pick = |p: &UPoly| {
            UPoly::from_coeffs(
                p.coeffs()
                    .iter()
                    .map(|c| PolyZ::constant(c.coeff(k)))
                    .collect(),
            )
        };
        FuncElem {
            ring: self.ring.clone(),
            even: pick(&self.even),
            odd: pick(&self.odd),
        }
    }

    pub fn z_degree(&self) -> usize {
        let deg = |p: &UPoly| {
            p.coeffs()
                .iter()
                .filter_map(|c| c.degree())
                .max()
                .unwrap_or(0)
        };
        deg(&self.even).max(deg(&self.odd))
    }

    /// Pointwise evaluation on numeric samples of (u, u') with z fixed.
    ///
    /// Samples must satisfy the defining relation to 1e-12 (relative to the
    /// local magnitude), otherwise they are rejected.
    pub fn eval_grid(&self, z: &Rat, u: &[f64], uprime: &[f64]) -> Result<Vec<f64>> {
        let FuncRing::Quad { r } = &self.ring else {
            return Err(Error::RingMismatch(
                "grid evaluation needs the quadratic-differential flavor".into(),
            ));
        };
        if u.len() != uprime.len() {
            return Err(Error::BadConfig(
                "u and u' sample sequences differ in length".into(),
            ));
        }
        let rf: Vec<f64> = r.iter().map(rat_to_f64).collect();
        for (&uv, &upv) in u.iter().zip(uprime) {
            let rel = rf[0] + uv * (rf[1] + uv * (rf[2] + uv * rf[3]));
            let scale = 1.0 + upv * upv + rel.abs();
            if (upv * upv - rel).abs() > 1e-12 * scale {
                return Err(Error::BadConfig(format!(
                    "samples violate (u')^2 = R(u): residual {:e} at u = {}",
                    (upv * upv - rel).abs(),
                    uv
                )));
            }
        }
        let zf = rat_to_f64(z);
        Ok(u.iter()
            .zip(uprime)
            .map(|(&uv, &upv)| self.even.eval_f64(zf, uv) + self.odd.eval_f64(zf, uv) * upv)
            .collect())
    }
}

impl RingElem for FuncElem {
    fn zero_like(&self) -> Self {
        Self::zero(&self.ring)
    }

    fn one_like(&self) -> Self {
        Self::one(&self.ring)
    }

    fn add(&self, other: &Self) -> Self {
        self.check_ring(other);
        FuncElem {
            ring: self.ring.clone(),
            even: self.even.add(&other.even),
            odd: self.odd.add(&other.odd),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        self.check_ring(other);
        // (e1 + o1 u')(e2 + o2 u') = e1 e2 + o1 o2 R + (e1 o2 + o1 e2) u'
        let rel = self.ring.relation();
        let even = self
            .even
            .mul(&other.even)
            .add(&self.odd.mul(&other.odd).mul(&rel));
        let odd = self.even.mul(&other.odd).add(&self.odd.mul(&other.even));
        FuncElem {
            ring: self.ring.clone(),
            even,
            odd,
        }
    }

    fn neg(&self) -> Self {
        FuncElem {
            ring: self.ring.clone(),
            even: self.even.neg(),
            odd: self.odd.neg(),
        }
    }

    fn derive(&self) -> Self {
        match &self.ring {
            FuncRing::Quad { .. } => {
                // d(e(u)) = e'(u) u',  d(o(u) u') = o'(u) R(u) + o(u) R'(u)/2
                let even = self
                    .odd
                    .derive_u()
                    .mul(&self.ring.relation())
                    .add(&self.odd.mul(&self.ring.half_relation_derivative()));
                let odd = self.even.derive_u();
                FuncElem {
                    ring: self.ring.clone(),
                    even,
                    odd,
                }
            }
            FuncRing::PolyX => FuncElem {
                ring: FuncRing::PolyX,
                even: self.even.derive_u(),
                odd: UPoly::zero(),
            },
        }
    }

    fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }

    fn scale(&self, c: &Rat) -> Self {
        FuncElem {
            ring: self.ring.clone(),
            even: self.even.scale(c),
            odd: self.odd.scale(c),
        }
    }

    fn max_abs(&self) -> Rat {
        let a = self.even.max_abs();
        let b = self.odd.max_abs();
        if a > b {
            a
        } else {
            b
        }
    }
}

impl fmt::Display for FuncElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gen_name = match self.ring {
            FuncRing::Quad { .. } => "u",
            FuncRing::PolyX => "x",
        };
        let show = |f: &mut fmt::Formatter<'_>, p: &UPoly| -> fmt::Result {
            let mut first = true;
            for (k, c) in p.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                match k {
                    0 => write!(f, "({})", c)?,
                    1 => write!(f, "({})*{}", c, gen_name)?,
                    _ => write!(f, "({})*{}^{}", c, gen_name, k)?,
                }
            }
            if first {
                write!(f, "0")?;
            }
            Ok(())
        };
        if self.is_zero() {
            return write!(f, "0");
        }
        if !self.even.is_zero() {
            show(f, &self.even)?;
        }
        if !self.odd.is_zero() {
            if !self.even.is_zero() {
                write!(f, " + ")?;
            }
            write!(f, "[")?;
            show(f, &self.odd)?;
            write!(f, "]*{}'", gen_name)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rint};

    fn wp_ring(g2: Rat, g1: Rat, g0: Rat) -> FuncRing {
        FuncRing::quad(g0, g1, g2, rint(4))
    }

    fn trig_ring(g2: Rat, g1: Rat, g0: Rat) -> FuncRing {
        FuncRing::quad(g0, g1, g2, rint(0))
    }

    #[test]
    fn uprime_squared_is_relation() {
        let ring = wp_ring(rat(2, 3), rint(5), rint(-1));
        let up = FuncElem::gen_prime(&ring);
        let u = FuncElem::gen(&ring);
        let expect = u
            .mul(&u)
            .mul(&u)
            .scale(&rint(4))
            .add(&u.mul(&u).scale(&rat(2, 3)))
            .add(&u.scale(&rint(5)))
            .add(&FuncElem::from_rat(&ring, rint(-1)));
        assert_eq!(up.mul(&up), expect);
    }

    #[test]
    fn conjugate_product() {
        let ring = trig_ring(rint(-1), rint(0), rint(1));
        let one = FuncElem::one(&ring);
        let up = FuncElem::gen_prime(&ring);
        let lhs = one.add(&up).mul(&one.sub(&up));
        let rel = up.mul(&up);
        assert_eq!(lhs, one.sub(&rel));
    }

    #[test]
    fn second_derivative_trig() {
        // P'' = g2 P + g1/2
        let (g2, g1) = (rat(7, 2), rat(-3, 5));
        let ring = trig_ring(g2.clone(), g1.clone(), rint(2));
        let u = FuncElem::gen(&ring);
        let expect = u.scale(&g2).add(&FuncElem::from_rat(&ring, g1 / rint(2)));
        assert_eq!(u.derive().derive(), expect);
    }

    #[test]
    fn fourth_derivative_weierstrass() {
        // d^4 u = 120 u^3 + 30 g2 u^2 + (18 g1 + g2^2) u + g1 g2 / 2 + 12 g0
        let (g2, g1, g0) = (rat(1, 3), rat(5, 7), rat(-2, 9));
        let ring = wp_ring(g2.clone(), g1.clone(), g0.clone());
        let u = FuncElem::gen(&ring);
        let mut d = u.clone();
        for _ in 0..4 {
            d = d.derive();
        }
        let u2 = u.mul(&u);
        let u3 = u2.mul(&u);
        let expect = u3
            .scale(&rint(120))
            .add(&u2.scale(&(rint(30) * &g2)))
            .add(&u.scale(&(rint(18) * &g1 + &g2 * &g2)))
            .add(&FuncElem::from_rat(&ring, &g1 * &g2 / rint(2) + rint(12) * &g0));
        assert_eq!(d, expect);
    }

    #[test]
    fn leibniz_rule() {
        let ring = wp_ring(rat(3, 4), rat(-1, 2), rat(5, 6));
        let u = FuncElem::gen(&ring);
        let up = FuncElem::gen_prime(&ring);
        let a = u.mul(&u).add(&up.scale(&rat(2, 3)));
        let b = u.scale(&rat(-7, 3)).add(&up.mul(&u)).add(&FuncElem::one(&ring));
        let lhs = a.mul(&b).derive();
        let rhs = a.derive().mul(&b).add(&a.mul(&b.derive()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn relation_consistency() {
        // d((u')^2) = d(R(u)) identically
        let ring = wp_ring(rat(1, 5), rat(2, 7), rat(-3, 11));
        let up = FuncElem::gen_prime(&ring);
        let lhs = up.mul(&up).derive();
        let rel = up.mul(&up);
        assert_eq!(lhs, rel.derive());
    }

    #[test]
    fn parity_swap() {
        let ring = wp_ring(rint(1), rint(2), rint(3));
        let u = FuncElem::gen(&ring);
        let even = u.mul(&u).add(&u.scale(&rint(5)));
        let d = even.derive();
        assert!(d.even().is_zero());
        let odd = FuncElem::gen_prime(&ring).mul(&u);
        let d2 = odd.derive();
        assert!(d2.odd().is_zero());
    }

    #[test]
    fn polyx_derivative() {
        let ring = FuncRing::PolyX;
        let x = FuncElem::gen(&ring);
        let p = x.mul(&x).mul(&x).add(&x.scale(&rat(1, 2)));
        let expect = x.mul(&x).scale(&rint(3)).add(&FuncElem::from_rat(&ring, rat(1, 2)));
        assert_eq!(p.derive(), expect);
    }

    #[test]
    fn sech_degeneration_grid() {
        // R = 4u^3 + 4a^2 u^2 with u = -a^2 sech^2(ax)
        let a = 0.5_f64;
        let ring = wp_ring(rint(1), rint(0), rint(0));
        // ring above has g2 = 1; build the degenerate one explicitly
        let _ = ring;
        let ring = FuncRing::quad(rint(0), rint(0), rint(1), rint(4));
        let xs: Vec<f64> = (-20..=20).map(|i| i as f64 * 0.37).collect();
        let u: Vec<f64> = xs.iter().map(|x| -a * a / (a * x).cosh().powi(2)).collect();
        let up: Vec<f64> = xs
            .iter()
            .map(|x| 2.0 * a.powi(3) * (a * x).tanh() / (a * x).cosh().powi(2))
            .collect();
        let upe = FuncElem::gen_prime(&ring);
        let vals = upe.eval_grid(&rint(0), &u, &up).unwrap();
        // x = 0 is in the grid: u' vanishes there
        let mid = xs.iter().position(|&x| x == 0.0).unwrap();
        assert!(vals[mid].abs() < 1e-15);
        // corrupted samples are rejected
        let mut bad = up.clone();
        bad[3] += 1e-3;
        assert!(upe.eval_grid(&rint(0), &u, &bad).is_err());
    }
}
