//! Jet ring: differential polynomials in free function symbols.
//!
//! Each function symbol S carries a derivative tower S = S_0, S_1, S_2, ...
//! with the total derivative D(S_k) = S_{k+1} extended by the Leibniz rule.
//! The ring may also carry parameter symbols (such as the spectral
//! parameter z) which D annihilates.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::rational::{rat_str, Rat};
use crate::rings::RingElem;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JetRing {
    /// Function symbols, e.g. ["V", "W", "Vt", "Wt"].
    pub funcs: Vec<String>,
    /// Constant symbols, e.g. ["z"].
    pub params: Vec<String>,
}

impl JetRing {
    pub fn new(funcs: &[&str], params: &[&str]) -> Arc<Self> {
        Arc::new(JetRing {
            funcs: funcs.iter().map(|s| s.to_string()).collect(),
            params: params.iter().map(|s| s.to_string()).collect(),
        })
    }

    pub fn func_index(&self, name: &str) -> Option<usize> {
        self.funcs.iter().position(|f| f == name)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Var {
    /// (symbol index, x-derivative order)
    Func(usize, usize),
    Param(usize),
}

/// Sorted (variable, exponent) list; empty = the monomial 1.
pub type Monomial = Vec<(Var, u32)>;

#[derive(Clone, Debug)]
pub struct JetElem {
    ring: Arc<JetRing>,
    terms: BTreeMap<Monomial, Rat>,
}

impl PartialEq for JetElem {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.terms == other.terms
    }
}

impl JetElem {
    pub fn zero(ring: &Arc<JetRing>) -> Self {
        JetElem {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn from_rat(ring: &Arc<JetRing>, c: Rat) -> Self {
        let mut e = Self::zero(ring);
        if !c.is_zero() {
            e.terms.insert(Vec::new(), c);
        }
        e
    }

    pub fn one(ring: &Arc<JetRing>) -> Self {
        Self::from_rat(ring, Rat::from_integer(1.into()))
    }

    /// The k-th derivative of a function symbol.
    pub fn func(ring: &Arc<JetRing>, name: &str, k: usize) -> Self {
        let s = ring
            .func_index(name)
            .unwrap_or_else(|| panic!("unknown function symbol {name}"));
        let mut e = Self::zero(ring);
        e.terms
            .insert(vec![(Var::Func(s, k), 1)], Rat::from_integer(1.into()));
        e
    }

    pub fn param(ring: &Arc<JetRing>, name: &str) -> Self {
        let p = ring
            .params
            .iter()
            .position(|q| q == name)
            .unwrap_or_else(|| panic!("unknown parameter symbol {name}"));
        let mut e = Self::zero(ring);
        e.terms
            .insert(vec![(Var::Param(p), 1)], Rat::from_integer(1.into()));
        e
    }

    pub fn ring(&self) -> &Arc<JetRing> {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rat> {
        &self.terms
    }

    fn insert(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    o.insert(sum);
                }
            }
        }
    }

    fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
        let mut m: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in a.iter().chain(b.iter()) {
            *m.entry(v.clone()).or_insert(0) += e;
        }
        m.into_iter().collect()
    }

    /// Replaces each function symbol in `map` by the given element,
    /// with (s, k) going to D^k of the replacement. Symbols not in the
    /// map stay as they are.
    pub fn substitute(&self, map: &BTreeMap<usize, JetElem>) -> JetElem {
        // Cache D^k of each replacement on demand.
        let mut deriv_cache: BTreeMap<(usize, usize), JetElem> = BTreeMap::new();
        let mut out = Self::zero(&self.ring);
        for (mono, coef) in &self.terms {
            let mut term = Self::from_rat(&self.ring, coef.clone());
            for (var, exp) in mono {
                let factor = match var {
                    Var::Func(s, k) if map.contains_key(s) => {
                        let key = (*s, *k);
                        if !deriv_cache.contains_key(&key) {
                            let mut e = map[s].clone();
                            for _ in 0..*k {
                                e = e.derive();
                            }
                            deriv_cache.insert(key, e);
                        }
                        deriv_cache[&key].clone()
                    }
                    v => {
                        let mut e = Self::zero(&self.ring);
                        e.terms
                            .insert(vec![(v.clone(), 1)], Rat::from_integer(1.into()));
                        e
                    }
                };
                for _ in 0..*exp {
                    term = term.mul(&factor);
                }
            }
            out = out.add(&term);
        }
        out
    }
}

impl RingElem for JetElem {
    fn zero_like(&self) -> Self {
        Self::zero(&self.ring)
    }

    fn one_like(&self) -> Self {
        Self::one(&self.ring)
    }

    fn add(&self, other: &Self) -> Self {
        assert!(self.ring == other.ring, "jet ring mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        assert!(self.ring == other.ring, "jet ring mismatch");
        let mut out = Self::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.insert(Self::mono_mul(ma, mb), ca * cb);
            }
        }
        out
    }

    fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    fn derive(&self) -> Self {
        let mut out = Self::zero(&self.ring);
        for (mono, coef) in &self.terms {
            for (i, (var, exp)) in mono.iter().enumerate() {
                let Var::Func(s, k) = var else { continue };
                // d/dx of v^e contributes e v^(e-1) v_x times the rest
                let mut m: BTreeMap<Var, u32> = mono.iter().cloned().collect();
                let e = *exp;
                if e == 1 {
                    m.remove(var);
                } else {
                    m.insert(var.clone(), e - 1);
                }
                *m.entry(Var::Func(*s, k + 1)).or_insert(0) += 1;
                let _ = i;
                out.insert(
                    m.into_iter().collect(),
                    coef * Rat::from_integer((e as i64).into()),
                );
            }
        }
        out
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.clone() * c;
        }
        out
    }

    fn max_abs(&self) -> Rat {
        let mut m = Rat::zero();
        for c in self.terms.values() {
            let a = num_traits::Signed::abs(c);
            if a > m {
                m = a;
            }
        }
        m
    }
}

impl fmt::Display for JetElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mono, coef) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", rat_str(coef))?;
            for (var, exp) in mono {
                let name = match var {
                    Var::Func(s, 0) => self.ring.funcs[*s].clone(),
                    Var::Func(s, k) => format!("{}_{}", self.ring.funcs[*s], k),
                    Var::Param(p) => self.ring.params[*p].clone(),
                };
                if *exp == 1 {
                    write!(f, "*{}", name)?;
                } else {
                    write!(f, "*{}^{}", name, exp)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rint;

    fn ring() -> Arc<JetRing> {
        JetRing::new(&["V", "W"], &["z"])
    }

    #[test]
    fn total_derivative_shifts() {
        let r = ring();
        let v = JetElem::func(&r, "V", 0);
        assert_eq!(v.derive(), JetElem::func(&r, "V", 1));
        let mut d3 = v.clone();
        for _ in 0..3 {
            d3 = d3.derive();
        }
        assert_eq!(d3, JetElem::func(&r, "V", 3));
    }

    #[test]
    fn leibniz() {
        let r = ring();
        let v = JetElem::func(&r, "V", 0);
        let w = JetElem::func(&r, "W", 0);
        let lhs = v.mul(&w).derive();
        let rhs = v.derive().mul(&w).add(&v.mul(&w.derive()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn params_are_constants() {
        let r = ring();
        let z = JetElem::param(&r, "z");
        assert!(z.derive().is_zero());
        let v = JetElem::func(&r, "V", 0);
        let zv = z.mul(&v);
        assert_eq!(zv.derive(), z.mul(&JetElem::func(&r, "V", 1)));
    }

    #[test]
    fn substitution_respects_derivatives() {
        let r = ring();
        // replace W by V^2; then W_1 must become 2 V V_1
        let v = JetElem::func(&r, "V", 0);
        let w1 = JetElem::func(&r, "W", 1);
        let mut map = BTreeMap::new();
        map.insert(r.func_index("W").unwrap(), v.mul(&v));
        let out = w1.substitute(&map);
        let expect = v.mul(&JetElem::func(&r, "V", 1)).scale(&rint(2));
        assert_eq!(out, expect);
    }
}
