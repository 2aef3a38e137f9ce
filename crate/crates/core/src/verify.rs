//! Pair verification: partner construction, commutativity and
//! Burchnall-Chaundy certification, the Dixmier identities, the Lax form
//! of the evolution system, the elliptic traveling-wave solution, and the
//! Schrödinger eigenfunction factorization.

use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::family::{BuiltOperator, Family, FamilyTag, PairKind};
use crate::poly::PolyZ;
use crate::qbuilder::{
    self, annihilator, extract_curve, schrodinger_functional, solve_q, QPolynomial, SpectralCurve,
};
use crate::rational::{rat, rat_str, rint, Rat};
use crate::report::{CheckStatus, VerificationReport};
use crate::rings::{FuncElem, FuncRing, JetElem, JetRing, RingElem};

/// F(L) = sum_i f_i L^i by Horner's rule on operators.
pub fn poly_of_op(f: &PolyZ, l: &DiffOp<FuncElem>) -> DiffOp<FuncElem> {
    let one = l
        .coeffs()
        .first()
        .expect("polynomial of the zero operator")
        .one_like();
    let mut acc = DiffOp::zero();
    for c in f.coeffs().iter().rev() {
        acc = acc.compose(l);
        if !c.is_zero() {
            acc = acc.add(&DiffOp::mul_op(one.scale(c)));
        }
    }
    acc
}

/// The partner operator realizing multiplication by w on the common
/// kernel: M = sum_j (q_j ∂^2 - q_j' ∂ + (q_j''/2 + V q_j)) ∘ L^j for the
/// fourth-order pair, M = sum_j (q_j ∂ - q_j'/2) ∘ L^j for Schrödinger.
pub fn build_partner(
    q: &QPolynomial,
    v: &FuncElem,
    l: &DiffOp<FuncElem>,
    kind: PairKind,
) -> DiffOp<FuncElem> {
    let mut templates = Vec::with_capacity(q.genus() + 1);
    for j in 0..=q.genus() {
        let qj = q.z_coeff(j);
        let t = match kind {
            PairKind::Rank2 => DiffOp::new(vec![
                qj.derive().derive().scale(&rat(1, 2)).add(&v.mul(&qj)),
                qj.derive().neg(),
                qj,
            ]),
            PairKind::Schrodinger => DiffOp::new(vec![qj.derive().scale(&rat(-1, 2)), qj]),
        };
        templates.push(t);
    }
    let m = DiffOp::subst_z(&templates, l);
    // The Schrödinger composition q_g ∂ ∘ L^g leads with (-1)^g ∂^(2g+1);
    // flip the sign at odd genus so M is monic (M^2 is unaffected).
    let lead_negative = m
        .order()
        .and_then(|o| m.coeff(o))
        .map_or(false, |c| *c == c.one_like().neg());
    if lead_negative {
        m.neg()
    } else {
        m
    }
}

/// Everything the verifier derives from one family instance.
pub struct ConstructedPair {
    pub built: BuiltOperator,
    pub q: QPolynomial,
    pub curve: SpectralCurve,
    pub partner: DiffOp<FuncElem>,
}

pub fn construct_pair(family: &Family) -> Result<ConstructedPair> {
    let built = family.build()?;
    let q = solve_q(&built.v, &built.w, family.genus, built.kind)?;
    let curve = extract_curve(&q, &built.v, &built.w, built.kind)?;
    let partner = build_partner(&q, &built.v, &built.op, built.kind);
    Ok(ConstructedPair {
        built,
        q,
        curve,
        partner,
    })
}

/// The four hard identities of a commuting pair, plus the skew-symmetry
/// of the annihilator, reported with exact residuals.
pub fn verify_pair(
    label: &str,
    l: &DiffOp<FuncElem>,
    m: &DiffOp<FuncElem>,
    curve: &SpectralCurve,
    kind: PairKind,
) -> VerificationReport {
    let t0 = Instant::now();
    let mut rep = VerificationReport::new(label);
    let g = curve.genus;
    let (l_ord, m_ord) = match kind {
        PairKind::Rank2 => (4, 4 * g + 2),
        PairKind::Schrodinger => (2, 2 * g + 1),
    };
    rep.record_order("L", l.order().unwrap_or(0));
    rep.record_order("M", m.order().unwrap_or(0));

    let comm = l.commutator(m);
    rep.push_exact(
        "commutator",
        comm.is_zero(),
        rat_str(&comm.max_abs()),
        "[L, M] = 0",
    );

    let m2 = m.compose(m);
    let fl = poly_of_op(&curve.f, l);
    let plus = m2.sub(&fl);
    let minus = m2.add(&fl);
    let (ok, sign, residual) = if plus.is_zero() {
        (true, "+", Rat::zero())
    } else if minus.is_zero() {
        (true, "-", Rat::zero())
    } else {
        (false, "?", plus.max_abs().min(minus.max_abs()))
    };
    rep.push_exact(
        "burchnall-chaundy",
        ok,
        rat_str(&residual),
        format!("M^2 = {}F(L) exactly", if sign == "-" { "-" } else { "" }),
    );

    let adj = l.adjoint().sub(l);
    rep.push_exact(
        "self-adjoint",
        adj.is_zero(),
        rat_str(&adj.max_abs()),
        "adjoint(L) = L",
    );

    let orders_ok = l.order() == Some(l_ord)
        && m.order() == Some(m_ord)
        && m.coeff(m_ord).map_or(false, |c| c == &c.one_like());
    rep.push_exact(
        "orders",
        orders_ok,
        "1".into(),
        format!("ord L = {l_ord}, ord M = {m_ord}, M monic"),
    );
    rep.elapsed_ms = t0.elapsed().as_millis();
    rep
}

/// Full pipeline for one family instance: construct, certify the hard
/// identities, cross-check the recurrence path and the printed
/// closed-form curve (soft comparisons).
pub fn verify_family(family: &Family) -> Result<(VerificationReport, ConstructedPair)> {
    let t0 = Instant::now();
    let pair = construct_pair(family)?;
    let label = format!("{}-g{}", family.tag.as_str(), family.genus);
    let mut rep = verify_pair(&label, &pair.built.op, &pair.partner, &pair.curve, pair.built.kind);

    // Skew-symmetry of the annihilator in the coefficient ring.
    let ann = annihilator(&pair.built.v, &pair.built.w, &pair.built.ring, pair.built.kind);
    let skew = ann.adjoint().add(&ann);
    rep.push_exact(
        "annihilator-skew",
        skew.is_zero(),
        rat_str(&skew.max_abs()),
        "adjoint of the annihilator is its negative",
    );

    // W is recovered from the subleading z-coefficient of Q.
    let w_for_trace = match pair.built.kind {
        PairKind::Rank2 => &pair.built.w,
        PairKind::Schrodinger => &pair.built.v,
    };
    rep.push_exact(
        "w-trace",
        qbuilder::check_w_trace(&pair.q, w_for_trace, &pair.curve),
        "1".into(),
        "potential = 2 [z^(g-1)]Q - c_2g",
    );

    // Independent recurrence path must reproduce the nullspace Q.
    if family.tag != FamilyTag::Dixmier {
        match qbuilder::build_q_recurrence(family) {
            Ok(qr) => rep.push_exact(
                "recurrence-crosscheck",
                qr == pair.q,
                "1".into(),
                "triangular recurrence reproduces the nullspace Q",
            ),
            Err(e) => rep.push(
                "recurrence-crosscheck",
                CheckStatus::Fail,
                "1",
                format!("recurrence failed: {e}"),
            ),
        }
    }

    // Printed closed-form curve: match or discrepancy, never a failure.
    if let Ok(cmp) = qbuilder::printed_curve(&pair.q, family, &pair.curve) {
        rep.push(
            format!("printed-curve-{}", cmp.label),
            if cmp.all_match {
                CheckStatus::Pass
            } else {
                CheckStatus::Discrepancy
            },
            if cmp.all_match { "0" } else { "1" },
            if cmp.all_match {
                "printed closed form matches the extracted curve".to_string()
            } else {
                format!(
                    "printed closed form differs at z-degrees {:?}; extracted curve is authoritative",
                    cmp.mismatched_degrees
                )
            },
        );
    }
    rep.elapsed_ms = t0.elapsed().as_millis();
    Ok((rep, pair))
}

/// [L_D, M_D] = 0 and M_D^2 - L_D^3 = h for the quartic Airy-type pair
/// L_D = (∂^2 + x^3 + h)^2 + 2x, M_D = H^3 + (3/2)<x, H>.
pub fn dixmier_check(h: &Rat) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let mut params = BTreeMap::new();
    params.insert("h".to_string(), h.clone());
    let family = Family::new(FamilyTag::Dixmier, 1, params);
    let built = family.build()?;
    let ring = &built.ring;
    let one = FuncElem::one(ring);
    let x = FuncElem::gen(ring);
    let hh = DiffOp::derivation(one.clone(), 2).add(&DiffOp::mul_op(built.v.clone()));
    let m = hh
        .pow(3)
        .add(&DiffOp::mul_op(x.clone()).anticommutator(&hh).scale(&rat(3, 2)));

    let mut rep = VerificationReport::new(format!("dixmier-h={}", rat_str(h)));
    rep.record_order("L", built.op.order().unwrap_or(0));
    rep.record_order("M", m.order().unwrap_or(0));

    let comm = built.op.commutator(&m);
    rep.push_exact(
        "commutator",
        comm.is_zero(),
        rat_str(&comm.max_abs()),
        "[L, M] = 0",
    );

    // With V = x^3 + h the exact constant is -h; the usual statement
    // M^2 - L^3 = h corresponds to the opposite sign convention for h
    // inside the potential.
    let diff = m.compose(&m).sub(&built.op.pow(3));
    let expect = DiffOp::mul_op(FuncElem::from_rat(ring, -h));
    let ok = diff == expect;
    rep.push_exact(
        "cubic-relation",
        ok,
        rat_str(&diff.sub(&expect).max_abs()),
        format!("M^2 - L^3 = {}", rat_str(&(-h))),
    );
    rep.push(
        "cubic-relation-printed-sign",
        if h.is_zero() { CheckStatus::Pass } else { CheckStatus::Discrepancy },
        "0",
        "stated form M^2 - L^3 = +h holds under h -> -h in the potential",
    );

    let adj = built.op.adjoint().sub(&built.op);
    rep.push_exact(
        "self-adjoint",
        adj.is_zero(),
        rat_str(&adj.max_abs()),
        "adjoint(L) = L",
    );
    rep.elapsed_ms = t0.elapsed().as_millis();
    Ok(rep)
}

fn jet_l4(ring: &std::sync::Arc<JetRing>) -> DiffOp<JetElem> {
    let one = JetElem::one(ring);
    let v = JetElem::func(ring, "V", 0);
    let w = JetElem::func(ring, "W", 0);
    let h = DiffOp::derivation(one, 2).add(&DiffOp::mul_op(v));
    h.compose(&h).add(&DiffOp::mul_op(w))
}

fn jet_a3(ring: &std::sync::Arc<JetRing>) -> DiffOp<JetElem> {
    let one = JetElem::one(ring);
    let v = JetElem::func(ring, "V", 0);
    let v1 = JetElem::func(ring, "V", 1);
    DiffOp::derivation(one.clone(), 3)
        .add(&DiffOp::new(vec![JetElem::zero(ring), v.scale(&rat(3, 2))]))
        .add(&DiffOp::mul_op(v1.scale(&rat(3, 4))))
}

fn substitute_op(op: &DiffOp<JetElem>, map: &BTreeMap<usize, JetElem>) -> DiffOp<JetElem> {
    DiffOp::new(op.coeffs().iter().map(|c| c.substitute(map)).collect())
}

/// Certifies that the commutativity condition [L4, ∂_t - A3] = 0 is
/// exactly the evolution system
/// V_t = (6 V V_x + 6 W_x + V_xxx)/4, W_t = (-3 V W_x - W_xxx)/2,
/// working with free jet symbols V, W, Vt, Wt.
pub fn lax_check() -> VerificationReport {
    let t0 = Instant::now();
    let ring = JetRing::new(&["V", "W", "Vt", "Wt"], &["z"]);
    let mut rep = VerificationReport::new("lax");

    let l4 = jet_l4(&ring);
    let a3 = jet_a3(&ring);
    let vt = JetElem::func(&ring, "Vt", 0);
    let wt = JetElem::func(&ring, "Wt", 0);
    let v = JetElem::func(&ring, "V", 0);
    let one = JetElem::one(&ring);

    // L4_t = <Vt, ∂^2 + V> + Wt (the time derivative of L4 hits only the
    // coefficient fields).
    let h = DiffOp::derivation(one, 2).add(&DiffOp::mul_op(v.clone()));
    let l4t = DiffOp::mul_op(vt.clone())
        .anticommutator(&h)
        .add(&DiffOp::mul_op(wt.clone()));
    let residual = l4t.sub(&a3.commutator(&l4));

    let iv = ring.func_index("Vt").unwrap();
    let iw = ring.func_index("Wt").unwrap();
    let v1 = JetElem::func(&ring, "V", 1);
    let v3 = JetElem::func(&ring, "V", 3);
    let w1 = JetElem::func(&ring, "W", 1);
    let w3 = JetElem::func(&ring, "W", 3);
    let rhs_v = v
        .mul(&v1)
        .scale(&rint(6))
        .add(&w1.scale(&rint(6)))
        .add(&v3)
        .scale(&rat(1, 4));
    let rhs_w = v.mul(&w1).scale(&rint(-3)).sub(&w3).scale(&rat(1, 2));

    let mut flow = BTreeMap::new();
    flow.insert(iv, rhs_v.clone());
    flow.insert(iw, rhs_w.clone());
    let substituted = substitute_op(&residual, &flow);
    rep.push_exact(
        "flow-substitution",
        substituted.is_zero(),
        rat_str(&substituted.max_abs()),
        "residual vanishes identically under the evolution system",
    );

    // KdV reduction: W = 0, Wt = 0 collapses the system to
    // Vt = (6 V V_x + V_xxx)/4.
    let mut kdv = BTreeMap::new();
    kdv.insert(ring.func_index("W").unwrap(), JetElem::zero(&ring));
    kdv.insert(iw, JetElem::zero(&ring));
    let reduced = substitute_op(&residual, &kdv);
    let mut kdv_flow = BTreeMap::new();
    kdv_flow.insert(
        iv,
        v.mul(&v1).scale(&rint(6)).add(&v3).scale(&rat(1, 4)),
    );
    let reduced0 = substitute_op(&reduced, &kdv_flow);
    rep.push_exact(
        "kdv-reduction",
        reduced0.is_zero(),
        rat_str(&reduced0.max_abs()),
        "W = 0 reduces the flow to the Korteweg-de Vries equation",
    );

    // Static fields do not satisfy a nontrivial flow.
    let mut frozen = BTreeMap::new();
    frozen.insert(iv, JetElem::zero(&ring));
    frozen.insert(iw, JetElem::zero(&ring));
    let static_residual = substitute_op(&residual, &frozen);
    rep.push_exact(
        "static-nonzero",
        !static_residual.is_zero(),
        "0".into(),
        "Vt = Wt = 0 leaves a nonzero residual for free V, W",
    );

    // Uniqueness: the residual is affine-linear in (Vt, Wt); the images
    // of the two unit directions are 2∂^2 + 2V and 1, which have
    // different orders, so the flow determining the zero set is unique.
    let base = static_residual;
    let mut unit_v = BTreeMap::new();
    unit_v.insert(iv, JetElem::one(&ring));
    unit_v.insert(iw, JetElem::zero(&ring));
    let img_v = substitute_op(&residual, &unit_v).sub(&base);
    let mut unit_w = BTreeMap::new();
    unit_w.insert(iv, JetElem::zero(&ring));
    unit_w.insert(iw, JetElem::one(&ring));
    let img_w = substitute_op(&residual, &unit_w).sub(&base);
    let expect_v = DiffOp::new(vec![v.scale(&rint(2)), JetElem::zero(&ring), JetElem::one(&ring).scale(&rint(2))]);
    let inj = img_v == expect_v && img_w == DiffOp::mul_op(JetElem::one(&ring))
        && img_v.order() != img_w.order();
    rep.push_exact(
        "flow-uniqueness",
        inj,
        "1".into(),
        "substitution map is injective: images 2(∂^2 + V) and 1 are independent",
    );

    // Skew-symmetry of the fifth-order annihilator in the jet ring.
    let w = JetElem::func(&ring, "W", 0);
    let z = JetElem::param(&ring, "z");
    let onej = JetElem::one(&ring);
    let d1 = DiffOp::derivation(onej.clone(), 1);
    let d3 = DiffOp::derivation(onej.clone(), 3);
    let d5 = DiffOp::derivation(onej, 5);
    let c = z.add(&w.neg()).add(&v.derive().derive().neg());
    let l5 = d5
        .add(&DiffOp::mul_op(v).anticommutator(&d3).scale(&rint(2)))
        .add(&DiffOp::mul_op(c).anticommutator(&d1).scale(&rint(2)));
    let skew = l5.adjoint().add(&l5);
    rep.push_exact(
        "l5-skew-jet",
        skew.is_zero(),
        rat_str(&skew.max_abs()),
        "adjoint of the fifth-order annihilator is its negative (free V, W)",
    );

    rep.elapsed_ms = t0.elapsed().as_millis();
    rep
}

/// Closed-form solution of the traveling-wave reduction, together with
/// the extra parameter constraint the ansatz forces.
#[derive(Clone, Debug, Serialize)]
pub struct TravelingWaveReport {
    /// V = p u + v0, W = q u^2 + r u + c (c free, it never enters).
    pub p: String,
    pub q: String,
    pub r: String,
    pub v0: String,
    /// Branches of the quadratic system rejected on the way to (p, q).
    pub rejected_branches: Vec<String>,
    /// Constant-level residual 2br + 3 r v0 + 3 q g1 + r g2; zero iff the
    /// solution closes for the given parameters.
    pub constraint_residual: String,
    /// The g1 value that makes the constraint vanish (b, g2 fixed).
    pub g1_required: String,
    pub holds_at_given_g1: bool,
    pub printed_v0_match: bool,
    pub printed_r_match: bool,
    pub report: VerificationReport,
}

/// The two reduced equations of the traveling-wave ansatz, divided by
/// the common odd factor u': returns (E1/u', E2/u') as even elements.
fn traveling_wave_residuals(
    ring: &FuncRing,
    b: &Rat,
    p: &Rat,
    q: &Rat,
    r: &Rat,
    v0: &Rat,
) -> (FuncElem, FuncElem) {
    let u = FuncElem::gen(ring);
    let v = u.scale(p).add(&FuncElem::from_rat(ring, v0.clone()));
    let w = u.mul(&u).scale(q).add(&u.scale(r));
    let vx = v.derive();
    let wx = w.derive();
    let vxxx = vx.derive().derive();
    let wxxx = wx.derive().derive();
    // E1 = b V_x - (6 V V_x + 6 W_x + V_xxx)/4
    let e1 = vx.scale(b).sub(
        &v.mul(&vx)
            .scale(&rint(6))
            .add(&wx.scale(&rint(6)))
            .add(&vxxx)
            .scale(&rat(1, 4)),
    );
    // E2 = b W_x + (3 V W_x + W_xxx)/2
    let e2 = wx
        .scale(b)
        .add(&v.mul(&wx).scale(&rat(3, 2)))
        .add(&wxxx.scale(&rat(1, 2)));
    // Both are pure u'-multiples; divide out u' by keeping the odd part
    // as an even element.
    let div_uprime = |e: &FuncElem| {
        assert!(e.even().is_zero(), "traveling-wave residual has an even part");
        FuncElem::from_parts(ring, e.odd().clone(), crate::rings::UPoly::zero())
    };
    (div_uprime(&e1), div_uprime(&e2))
}

pub fn traveling_wave_solve(b: &Rat, g2: &Rat, g1: &Rat, g0: &Rat) -> Result<TravelingWaveReport> {
    let t0 = Instant::now();
    let ring = FuncRing::quad(g0.clone(), g1.clone(), g2.clone(), rint(4));
    let mut rep = VerificationReport::new("traveling-wave");
    let mut rejected = Vec::new();

    // The quadratic levels of the two equations in (p, q):
    //   E1 u^1: 6p^2 + 12p + 12q = 0,
    //   E2 u^2: 3q(p + 10) = 0.
    // Enumerate the exact solution set of that pair.
    let mut pq: Option<(Rat, Rat)> = None;
    for p_try in [rint(0), rint(-2), rint(-10), rint(8)] {
        let q_try = -(&p_try * &p_try + rint(2) * &p_try) / rint(2);
        let e1_level = rint(6) * &p_try * &p_try + rint(12) * &p_try + rint(12) * &q_try;
        let e2_level = rint(3) * &q_try * (&p_try + rint(10));
        if !e1_level.is_zero() || !e2_level.is_zero() {
            rejected.push(format!(
                "p = {}: E2 u^2-level = {}",
                rat_str(&p_try),
                rat_str(&e2_level)
            ));
            continue;
        }
        if q_try.is_zero() {
            rejected.push(format!(
                "p = {}: degenerate branch with q = 0 (W loses its u^2 term)",
                rat_str(&p_try)
            ));
            continue;
        }
        pq = Some((p_try, q_try));
    }
    let Some((p, q)) = pq else {
        return Err(Error::NoSolution);
    };

    // Linear levels: E1 u^0 gives r(p, v0); eliminating r against E2 u^1
    // pins v0, then r follows.
    // E1 u^0: bp - (6 p v0 + 6 r + p g2)/4 = 0
    // E2 u^1: 2bq + (3/2) p r + 3 q v0 + 4 q g2 + 6 r = 0
    // Solve the two linear equations in (r, v0).
    let a11 = rat(-6, 4); // coefficient of r in E1 u^0
    let a12 = -rat(6, 4) * &p; // coefficient of v0
    let b1 = -(b * &p) + rat(1, 4) * &p * g2; // move constants right: a11 r + a12 v0 = b1
    let a21 = rat(3, 2) * &p + rint(6);
    let a22 = rint(3) * &q;
    let b2 = -(rint(2) * b * &q) - rint(4) * &q * g2;
    let det = &a11 * &a22 - &a12 * &a21;
    if det.is_zero() {
        return Err(Error::NoSolution);
    }
    let r = (&b1 * &a22 - &a12 * &b2) / &det;
    let v0 = (&a11 * &b2 - &b1 * &a21) / &det;

    // Residual constraint from the constant level of E2:
    // 2 b r + 3 r v0 + 3 q g1 + r g2 = 0.
    let kappa = rint(2) * b * &r + rint(3) * &r * &v0 + rint(3) * &q * g1 + &r * g2;
    let g1_required = if q.is_zero() {
        Rat::zero()
    } else {
        -(rint(2) * b * &r + rint(3) * &r * &v0 + &r * g2) / (rint(3) * &q)
    };

    // Certify the closed forms by direct ring computation.
    let (e1, e2) = traveling_wave_residuals(&ring, b, &p, &q, &r, &v0);
    rep.push_exact(
        "first-equation",
        e1.is_zero(),
        rat_str(&e1.max_abs()),
        "first traveling-wave equation vanishes identically",
    );
    let expect_e2 = FuncElem::from_rat(&ring, kappa.clone() / rint(2));
    rep.push_exact(
        "second-equation-shape",
        e2 == expect_e2,
        rat_str(&e2.sub(&expect_e2).max_abs()),
        "second equation reduces to its constant level",
    );
    let holds = kappa.is_zero();
    rep.push(
        "constraint",
        if holds {
            CheckStatus::Pass
        } else {
            CheckStatus::Discrepancy
        },
        rat_str(&kappa),
        if holds {
            "constant-level constraint satisfied; the printed solution closes".to_string()
        } else {
            format!(
                "printed solution closes only on the locus 2br + 3rv0 + 3qg1 + rg2 = 0; here it needs g1 = {}",
                rat_str(&g1_required)
            )
        },
    );
    // And certify that the constraint is exactly what is missing: on the
    // adjusted locus the second equation vanishes too.
    let ring_star = FuncRing::quad(g0.clone(), g1_required.clone(), g2.clone(), rint(4));
    let (e1s, e2s) = traveling_wave_residuals(&ring_star, b, &p, &q, &r, &v0);
    rep.push_exact(
        "closes-on-locus",
        e1s.is_zero() && e2s.is_zero(),
        rat_str(&e1s.max_abs().max(e2s.max_abs())),
        "both equations vanish identically at the required g1",
    );
    let printed_v0 = -rat(2, 21) * b - rat(5, 6) * g2;
    let printed_r = -rat(20, 21) * (rint(8) * b + rint(7) * g2);
    rep.elapsed_ms = t0.elapsed().as_millis();
    Ok(TravelingWaveReport {
        p: rat_str(&p),
        q: rat_str(&q),
        r: rat_str(&r),
        v0: rat_str(&v0),
        rejected_branches: rejected,
        constraint_residual: rat_str(&kappa),
        g1_required: rat_str(&g1_required),
        holds_at_given_g1: holds,
        printed_v0_match: v0 == printed_v0,
        printed_r_match: r == printed_r,
        report: rep,
    })
}

/// Decides which curve functional closes for the Schrödinger family:
/// the printed 4(z-u)Q^2 - (Q')^2 + QQ'' or the doubled-QQ'' variant,
/// and checks the variant's curve is the one all hard identities use.
/// The variant is the denominator-cleared form of the first-order
/// factorization certifying the eigenfunction formula.
pub fn lame_eigen_check(genus: usize, g1: &Rat, g0: &Rat) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let mut params = BTreeMap::new();
    params.insert("g1".to_string(), g1.clone());
    params.insert("g0".to_string(), g0.clone());
    let family = Family::new(FamilyTag::Lame, genus, params);
    let built = family.build()?;
    let q = solve_q(&built.v, &built.w, genus, PairKind::Schrodinger)?;
    let qe = q.as_elem();
    let mut rep = VerificationReport::new(format!("lame-eigen-g{genus}"));

    let variant = schrodinger_functional(&qe, &built.v, 2);
    let variant_ok = variant.to_polyz().is_some();
    rep.push_exact(
        "variant-identity",
        variant_ok,
        "1".into(),
        "4(z-u)Q^2 - (Q')^2 + 2QQ'' is x-free (factorization certificate)",
    );

    let printed = schrodinger_functional(&qe, &built.v, 1);
    let printed_ok = printed.to_polyz().is_some();
    rep.push(
        "printed-identity",
        if printed_ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Discrepancy
        },
        if printed_ok { "0".to_string() } else { rat_str(&printed.max_abs()) },
        if printed_ok {
            "single-QQ'' form is x-free".to_string()
        } else {
            "single-QQ'' form retains x-dependence; the doubled form is the identity".to_string()
        },
    );
    if !variant_ok && !printed_ok {
        rep.push(
            "no-identity",
            CheckStatus::Fail,
            rat_str(&variant.max_abs()),
            "neither curve functional closes",
        );
        rep.elapsed_ms = t0.elapsed().as_millis();
        return Ok(rep);
    }

    // The closing form must reproduce the curve the pair identities use.
    let curve = extract_curve(&q, &built.v, &built.w, PairKind::Schrodinger)?;
    let expect = printed_lame_curve(genus, g1, g0);
    let matches = expect.as_ref() == Some(&curve.f);
    if let Some(expect) = expect {
        rep.push_exact(
            "curve-vs-closed-form",
            matches,
            rat_str(&curve.f.sub(&expect).max_abs()),
            "variant curve equals the printed genus-specific curve",
        );
    }
    if genus == 3 {
        rep.push(
            "curve-constant-term-placement",
            CheckStatus::Discrepancy,
            "0",
            "stated genus-3 last term belongs on z, not the constant term",
        );
    }
    rep.elapsed_ms = t0.elapsed().as_millis();
    Ok(rep)
}

/// Closed-form Schrödinger curves for genus 1..3 (g2 = 0). The stated
/// genus-3 form puts (3375/16)(27 g0^2 + g1^3) in the constant term;
/// the exact curve carries that quantity on z with constant term 0, so
/// the corrected placement is used here.
pub fn printed_lame_curve(genus: usize, g1: &Rat, g0: &Rat) -> Option<PolyZ> {
    match genus {
        1 => Some(PolyZ::from_coeffs(vec![
            -g0 / rint(4),
            g1 / rint(4),
            Rat::zero(),
            Rat::one(),
        ])),
        2 => Some(PolyZ::from_coeffs(vec![
            rat(81, 4) * g0 * g1,
            rat(27, 4) * g1 * g1,
            rat(27, 4) * g0,
            rat(21, 4) * g1,
            Rat::zero(),
            Rat::one(),
        ])),
        3 => Some(PolyZ::from_coeffs(vec![
            Rat::zero(),
            rat(3375, 16) * (rint(27) * g0 * g0 + g1 * g1 * g1),
            rat(18225, 8) * g0 * g1,
            rat(4185, 16) * g1 * g1,
            rat(297, 2) * g0,
            rat(63, 2) * g1,
            Rat::zero(),
            Rat::one(),
        ])),
        _ => None,
    }
}

/// The printed genus-1 cosine-family partner operator,
/// H^3 + (1/8)<1 - 4a0 - 12 a1 cos, H> + a1 cos, for the sign comparison.
pub fn printed_cos_g1_partner(ring: &FuncRing, alpha1: &Rat, alpha0: &Rat) -> DiffOp<FuncElem> {
    let one = FuncElem::one(ring);
    let u = FuncElem::gen(ring);
    let v = u.scale(alpha1).add(&FuncElem::from_rat(ring, alpha0.clone()));
    let h = DiffOp::derivation(one, 2).add(&DiffOp::mul_op(v));
    let mid = FuncElem::from_rat(ring, Rat::one() - rint(4) * alpha0)
        .sub(&u.scale(&(rint(12) * alpha1)));
    h.pow(3)
        .add(&DiffOp::mul_op(mid).anticommutator(&h).scale(&rat(1, 8)))
        .add(&DiffOp::mul_op(u.scale(alpha1)))
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
    fn cos_g1_pair_verifies() {
        let f = fam(
            FamilyTag::Cos,
            1,
            &[("alpha1", rat(2, 3)), ("alpha0", rat(-1, 5))],
        );
        let (rep, pair) = verify_family(&f).unwrap();
        assert!(rep.all_hard_pass(), "{:#?}", rep.checks);
        assert_eq!(pair.partner.order(), Some(6));
    }

    #[test]
    fn cos_g1_partner_matches_printed_up_to_sign() {
        let (a1, a0) = (rat(1, 2), rat(1, 3));
        let f = fam(FamilyTag::Cos, 1, &[("alpha1", a1.clone()), ("alpha0", a0.clone())]);
        let pair = construct_pair(&f).unwrap();
        let printed = printed_cos_g1_partner(&pair.built.ring, &a1, &a0);
        let plus = pair.partner == printed;
        let minus = pair.partner.neg() == printed;
        assert!(
            plus ^ minus,
            "exactly one sign of M must match the printed operator (plus={plus}, minus={minus})"
        );
    }

    #[test]
    fn lame_g1_pair_verifies() {
        let f = fam(FamilyTag::Lame, 1, &[("g1", rat(5, 2)), ("g0", rat(-1, 3))]);
        let (rep, pair) = verify_family(&f).unwrap();
        assert!(rep.all_hard_pass(), "{:#?}", rep.checks);
        assert_eq!(pair.partner.order(), Some(3));
        // Schrödinger partner squares to minus the curve polynomial.
        let bc = rep
            .checks
            .iter()
            .find(|c| c.check == "burchnall-chaundy")
            .unwrap();
        assert!(bc.details.contains("-F(L)"));
    }

    #[test]
    fn trig_g2_pair_verifies() {
        let f = fam(
            FamilyTag::Trig,
            2,
            &[
                ("alpha1", rat(3, 4)),
                ("alpha0", rat(1, 6)),
                ("g2", rat(-5, 3)),
                ("g1", rat(2, 7)),
                ("g0", rat(1, 2)),
            ],
        );
        let (rep, pair) = verify_family(&f).unwrap();
        assert!(rep.all_hard_pass(), "{:#?}", rep.checks);
        assert_eq!(pair.partner.order(), Some(10));
        let bc = rep
            .checks
            .iter()
            .find(|c| c.check == "burchnall-chaundy")
            .unwrap();
        assert_eq!(bc.details, "M^2 = F(L) exactly");
    }

    #[test]
    fn elliptic_g1_pair_verifies() {
        let f = fam(
            FamilyTag::Elliptic,
            1,
            &[
                ("alpha0", rat(1, 4)),
                ("g2", rint(0)),
                ("g1", rat(2, 5)),
                ("g0", rat(-1, 7)),
            ],
        );
        let (rep, _) = verify_family(&f).unwrap();
        assert!(rep.all_hard_pass(), "{:#?}", rep.checks);
    }

    #[test]
    fn dixmier_identities() {
        for h in [rat(3, 2), rint(-1), rat(7, 5)] {
            let rep = dixmier_check(&h).unwrap();
            assert!(rep.all_hard_pass(), "h = {}: {:#?}", rat_str(&h), rep.checks);
        }
    }

    #[test]
    fn lax_16_certified() {
        let rep = lax_check();
        assert!(rep.all_hard_pass(), "{:#?}", rep.checks);
    }

    #[test]
    fn traveling_wave_forces_printed_coefficients() {
        let r = traveling_wave_solve(&rint(1), &rint(0), &rat(1, 3), &rat(2, 7)).unwrap();
        assert_eq!(r.p, "-10");
        assert_eq!(r.q, "-40");
        assert!(r.printed_v0_match);
        assert!(r.printed_r_match);
        assert!(r.report.all_hard_pass(), "{:#?}", r.report.checks);
        // Generic g1 misses the locus; the required g1 closes it.
        assert!(!r.holds_at_given_g1);
        let g1_star = crate::rational::rat_parse(&r.g1_required).unwrap();
        let r2 = traveling_wave_solve(&rint(1), &rint(0), &g1_star, &rat(2, 7)).unwrap();
        assert!(r2.holds_at_given_g1, "{:#?}", r2.report.checks);
    }

    #[test]
    fn lame_eigen_variant_wins() {
        for g in 1..=3usize {
            let rep = lame_eigen_check(g, &rat(3, 5), &rat(-2, 9)).unwrap();
            assert!(rep.all_hard_pass(), "g = {g}: {:#?}", rep.checks);
            let printed = rep
                .checks
                .iter()
                .find(|c| c.check == "printed-identity")
                .unwrap();
            assert_eq!(printed.status, CheckStatus::Discrepancy, "g = {g}");
            let variant = rep
                .checks
                .iter()
                .find(|c| c.check == "variant-identity")
                .unwrap();
            assert_eq!(variant.status, CheckStatus::Pass, "g = {g}");
        }
    }
}
