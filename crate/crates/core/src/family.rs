//! The operator families: trigonometric, cos, elliptic, rapid-decay,
//! Lamé and the Dixmier pair, each with its parameter constraints and
//! its fourth-order (or second-order, for Lamé) operator.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::rational::{rat, rat_str, rint, Rat};
use crate::rings::{FuncElem, FuncRing, RingElem};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyTag {
    Trig,
    Cos,
    Elliptic,
    RapidDecay,
    Lame,
    Dixmier,
}

impl FamilyTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            FamilyTag::Trig => "trig",
            FamilyTag::Cos => "cos",
            FamilyTag::Elliptic => "elliptic",
            FamilyTag::RapidDecay => "rapid-decay",
            FamilyTag::Lame => "lame",
            FamilyTag::Dixmier => "dixmier",
        }
    }
}

/// Which eigenvalue problem the pair solves: the fourth-order rank-two
/// operator, or the second-order Schrödinger (Lamé) operator.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PairKind {
    Rank2,
    Schrodinger,
}

#[derive(Clone, Debug)]
pub struct Family {
    pub tag: FamilyTag,
    pub genus: usize,
    pub params: BTreeMap<String, Rat>,
}

/// The built L-operator together with the potentials it came from.
pub struct BuiltOperator {
    pub op: DiffOp<FuncElem>,
    /// V for rank-two families; the full Schrödinger potential for Lamé.
    pub v: FuncElem,
    /// W for rank-two families; zero for Lamé.
    pub w: FuncElem,
    pub ring: FuncRing,
    pub kind: PairKind,
}

impl Family {
    pub fn new(tag: FamilyTag, genus: usize, params: BTreeMap<String, Rat>) -> Self {
        Family { tag, genus, params }
    }

    fn param(&self, name: &str) -> Result<Rat> {
        self.params
            .get(name)
            .cloned()
            .ok_or_else(|| Error::FamilyConstraint(format!("missing parameter {name}")))
    }

    fn param_or(&self, name: &str, default: Rat) -> Rat {
        self.params.get(name).cloned().unwrap_or(default)
    }

    pub fn kind(&self) -> PairKind {
        match self.tag {
            FamilyTag::Lame => PairKind::Schrodinger,
            _ => PairKind::Rank2,
        }
    }

    /// Genus-derived elliptic-family constants.
    pub fn elliptic_constants(genus: usize, alpha0: &Rat, g2: &Rat) -> (Rat, Rat, Rat) {
        let g = rint(genus as i64);
        let gg1 = &g * (&g + rint(1)); // g(g+1)
        let alpha1 = rat(1, 4) - rint(2) * &g * &g - rint(2) * &g;
        let s1 = rat(1, 4) * &gg1 * (rint(16) * alpha0 + rint(5) * g2);
        let s2 = rint(-4) * &g * (&g + rint(2)) * (&g * &g - rint(1));
        (alpha1, s1, s2)
    }

    /// Effective quadratic-differential ring parameters (g2, g1, g0) and
    /// cubic flag, after family fixups.
    pub fn ring(&self) -> Result<FuncRing> {
        match self.tag {
            FamilyTag::Trig => Ok(FuncRing::quad(
                self.param("g0")?,
                self.param("g1")?,
                self.param("g2")?,
                Rat::zero(),
            )),
            FamilyTag::Cos => Ok(FuncRing::quad(rint(1), rint(0), rint(-1), rint(0))),
            FamilyTag::Elliptic => Ok(FuncRing::quad(
                self.param("g0")?,
                self.param("g1")?,
                self.param("g2")?,
                rint(4),
            )),
            FamilyTag::RapidDecay => {
                let a = self.param("a")?;
                Ok(FuncRing::quad(rint(0), rint(0), rint(4) * &a * &a, rint(4)))
            }
            FamilyTag::Lame => Ok(FuncRing::quad(
                self.param("g0")?,
                self.param("g1")?,
                Rat::zero(),
                rint(4),
            )),
            FamilyTag::Dixmier => Ok(FuncRing::PolyX),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.tag != FamilyTag::Dixmier && self.genus < 1 {
            return Err(Error::FamilyConstraint("genus must be >= 1".into()));
        }
        match self.tag {
            FamilyTag::Trig => {
                if self.param("alpha1")?.is_zero() {
                    return Err(Error::FamilyConstraint("trig family needs alpha1 != 0".into()));
                }
                if self.param("g2")?.is_zero() {
                    return Err(Error::FamilyConstraint("trig family needs g2 != 0".into()));
                }
            }
            FamilyTag::Cos => {
                if self.param("alpha1")?.is_zero() {
                    return Err(Error::FamilyConstraint("cos family needs alpha1 != 0".into()));
                }
            }
            FamilyTag::RapidDecay => {
                if self.param("a")?.is_zero() {
                    return Err(Error::FamilyConstraint("rapid-decay family needs a != 0".into()));
                }
            }
            FamilyTag::Elliptic | FamilyTag::Lame | FamilyTag::Dixmier => {}
        }
        Ok(())
    }

    /// Builds the family operator: L4 = (∂^2 + V)^2 + W for the rank-two
    /// families, L2 = -∂^2 + g(g+1)℘ for Lamé, L_D for Dixmier.
    pub fn build(&self) -> Result<BuiltOperator> {
        self.validate()?;
        let ring = self.ring()?;
        let g = self.genus;
        let gg1 = rint((g * (g + 1)) as i64);
        let u = FuncElem::gen(&ring);
        match self.tag {
            FamilyTag::Trig | FamilyTag::Cos => {
                let alpha1 = self.param("alpha1")?;
                let alpha0 = self.param_or("alpha0", Rat::zero());
                let g2 = match self.tag {
                    FamilyTag::Cos => rint(-1),
                    _ => self.param("g2")?,
                };
                let v = u.scale(&alpha1).add(&FuncElem::from_rat(&ring, alpha0));
                let w = u.scale(&(&alpha1 * &g2 * &gg1));
                Ok(self.assemble_l4(ring, v, w))
            }
            FamilyTag::Elliptic | FamilyTag::RapidDecay => {
                let alpha0 = self.param_or("alpha0", Rat::zero());
                let g2 = match self.tag {
                    FamilyTag::RapidDecay => {
                        let a = self.param("a")?;
                        rint(4) * &a * &a
                    }
                    _ => self.param("g2")?,
                };
                let (alpha1, s1, s2) = Self::elliptic_constants(g, &alpha0, &g2);
                let v = u.scale(&alpha1).add(&FuncElem::from_rat(&ring, alpha0));
                let w = u.scale(&s1).add(&u.mul(&u).scale(&s2));
                Ok(self.assemble_l4(ring, v, w))
            }
            FamilyTag::Lame => {
                let pot = u.scale(&gg1);
                let d2 = DiffOp::derivation(FuncElem::one(&ring), 2);
                let op = d2.neg().add(&DiffOp::mul_op(pot.clone()));
                Ok(BuiltOperator {
                    op,
                    v: pot,
                    w: FuncElem::zero(&ring),
                    ring,
                    kind: PairKind::Schrodinger,
                })
            }
            FamilyTag::Dixmier => {
                let h = self.param("h")?;
                let x = FuncElem::gen(&ring);
                let v = x
                    .mul(&x)
                    .mul(&x)
                    .add(&FuncElem::from_rat(&ring, h));
                let w = x.scale(&rint(2));
                Ok(self.assemble_l4(ring, v, w))
            }
        }
    }

    fn assemble_l4(&self, ring: FuncRing, v: FuncElem, w: FuncElem) -> BuiltOperator {
        let d2 = DiffOp::derivation(FuncElem::one(&ring), 2);
        let h = d2.add(&DiffOp::mul_op(v.clone()));
        let op = h.compose(&h).add(&DiffOp::mul_op(w.clone()));
        BuiltOperator {
            op,
            v,
            w,
            ring,
            kind: PairKind::Rank2,
        }
    }

    pub fn params_json(&self) -> serde_json::Map<String, serde_json::Value> {
        self.params
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(rat_str(v))))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(tag: FamilyTag, genus: usize, params: &[(&str, Rat)]) -> Family {
        Family::new(
            tag,
            genus,
            params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        )
    }

    #[test]
    fn trig_g1_w_closed_form() {
        // (alpha1, alpha0, g2, g1, g0) = (1, 0, -1, 0, 1): W = -2 alpha1 u
        let f = fam(
            FamilyTag::Trig,
            1,
            &[
                ("alpha1", rint(1)),
                ("alpha0", rint(0)),
                ("g2", rint(-1)),
                ("g1", rint(0)),
                ("g0", rint(1)),
            ],
        );
        let built = f.build().unwrap();
        let u = FuncElem::gen(&built.ring);
        assert_eq!(built.w, u.scale(&rint(-2)));
        assert_eq!(built.op.order(), Some(4));
        // (∂^2+V)^2 = ∂^4 + 2V∂^2 + 2V'∂ + V''+V^2, plus W
        let v = &built.v;
        assert_eq!(built.op.coeff(2).unwrap().clone(), v.scale(&rint(2)));
        assert_eq!(built.op.coeff(3).unwrap().clone(), FuncElem::zero(&built.ring));
    }

    #[test]
    fn elliptic_g1_constants() {
        let (alpha1, _s1, s2) = Family::elliptic_constants(1, &rint(0), &rint(0));
        assert_eq!(alpha1, rat(-15, 4));
        assert!(s2.is_zero());
        let (alpha1, _, s2) = Family::elliptic_constants(2, &rint(0), &rint(0));
        assert_eq!(alpha1, rat(-47, 4));
        assert_eq!(s2, rint(-96));
    }

    #[test]
    fn constraint_violations() {
        let f = fam(
            FamilyTag::Trig,
            1,
            &[
                ("alpha1", rint(0)),
                ("alpha0", rint(0)),
                ("g2", rint(1)),
                ("g1", rint(0)),
                ("g0", rint(1)),
            ],
        );
        assert!(matches!(f.build(), Err(Error::FamilyConstraint(_))));
    }

    #[test]
    fn dixmier_polynomial_coefficients() {
        let f = fam(FamilyTag::Dixmier, 1, &[("h", rat(3, 2))]);
        let built = f.build().unwrap();
        assert_eq!(built.op.order(), Some(4));
        assert_eq!(built.ring, FuncRing::PolyX);
    }
}
