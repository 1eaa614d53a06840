//! Cusp potentials: `K` (cusp free), `KL` (cusp on a given divisor) and
//! `KP` (cusp at a given point), for both targets, plus the corrections for
//! rule covers on the quadric.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::Zero;

use crate::enriched::EnrichedSet;
use crate::error::{Error, Result};
use crate::series::{
    rat, ratio, CurveClass, ExpDir, ExponentTuple, Potential, PotentialKind, Rational, Target,
};
use crate::targets::{check_admissible, TargetDescriptor};

const V: ExponentTuple = ExponentTuple::new(0, 1, 0);
const V2: ExponentTuple = ExponentTuple::new(0, 2, 0);
const W: ExponentTuple = ExponentTuple::new(0, 0, 1);

#[derive(Clone, Debug)]
pub struct CuspSet {
    pub kp: Potential,
    pub kl: Potential,
    pub k: Potential,
}

impl CuspSet {
    fn publish(kp: Potential, kl: Potential, k: Potential) -> Result<Self> {
        let set = CuspSet {
            kp: kp.with_kind(PotentialKind::KP),
            kl: kl.with_kind(PotentialKind::KL),
            k: k.with_kind(PotentialKind::K),
        };
        for p in [&set.kp, &set.kl, &set.k] {
            check_admissible(p)?;
        }
        Ok(set)
    }
}

fn require_g(g: &Potential, target: Target) -> Result<()> {
    if g.kind() != PotentialKind::G || g.target() != target {
        return Err(Error::KindTargetMismatch {
            kind: g.kind(),
            target: g.target(),
        });
    }
    Ok(())
}

/// `Σ X_{x_e} γ^{ef} (G_ss)_{x_f}` for the plane: `X_s·𝓛G_ss + X_u·𝓟G_ss`.
fn plane_bracket(desc: &TargetDescriptor, x: &Potential, gss: &Potential) -> Potential {
    x.ds() * desc.l.on(gss) + x.du() * desc.p.on(gss)
}

/// Quadric version: `X_{u1}·𝓛₁Y + X_{u2}·𝓛₂Y + X_u·𝓟Y`.
fn quadric_bracket(desc: &TargetDescriptor, x: &Potential, y: &Potential) -> Potential {
    x.du1() * desc.l1().on(y) + x.du2() * desc.l2().on(y) + x.du() * desc.p.on(y)
}

fn integrate_twice(p: Potential) -> Result<Potential> {
    p.integrate_exp(ExpDir::S, 2)
}

/// Plane cusp potentials from G.
pub fn cusp_plane(g: &Potential) -> Result<CuspSet> {
    require_g(g, Target::Plane)?;
    let desc = TargetDescriptor::plane();
    let gs = g.ds();
    let gss = gs.ds();
    let (gu, gv, gw) = (g.du(), g.dv(), g.dw());
    let gus = gu.ds();

    let kp_ss = gw.du() - &gus * &gus + plane_bracket(&desc, &gw, &gss);
    let kl_ss = gv.du() + gw.ds().ds().scale(&rat(2))
        - kp_ss.mul_monomial(V, &rat(1))
        - gw.ds().scale(&rat(2))
        - &gus * &gss
        - &gus * &desc.l.on(&gs)
        + plane_bracket(&desc, &gv, &gss);
    let kp = integrate_twice(kp_ss)?;
    let kl = integrate_twice(kl_ss)?;
    let k = gv.scale(&rat(3))
        - kl.mul_monomial(V, &rat(1))
        - kp.mul_monomial(V2, &ratio(1, 2))
        - kp.mul_monomial(W, &rat(1))
        - (&gs * &desc.l.on(g) + &gu * &desc.p.on(g));
    CuspSet::publish(kp, kl, k)
}

/// Quadric cusp potentials from G (reducible rule-cover configurations
/// included in `KL` and `KP`).
pub fn cusp_quadric(g: &Potential) -> Result<CuspSet> {
    require_g(g, Target::Quadric)?;
    let desc = TargetDescriptor::quadric();
    let gs = g.ds();
    let gss = gs.ds();
    let (gu, gv, gw) = (g.du(), g.dv(), g.dw());
    let gus = gu.ds();

    let kp_ss = gw.du().scale(&rat(2)) - &gus * &gus + quadric_bracket(&desc, &gw, &gss);
    let kl_ss = gv.du().scale(&rat(2)) - gw.ds().scale(&rat(4)) - kp_ss.mul_monomial(V, &rat(2))
        + gw.ds().ds().scale(&rat(2))
        - &gus * &gss
        - &gus * &desc.l.on(&gs)
        + quadric_bracket(&desc, &gv, &gss);
    let kp = integrate_twice(kp_ss)?;
    let kl = integrate_twice(kl_ss)?;
    let k = gv.scale(&rat(2))
        - kl.mul_monomial(V, &rat(1))
        - kp.mul_monomial(V2, &rat(1))
        - kp.mul_monomial(W, &rat(1))
        - quadric_bracket(&desc, g, g);
    CuspSet::publish(kp, kl, k)
}

pub fn cusp(g: &Potential) -> Result<CuspSet> {
    match g.target() {
        Target::Plane => cusp_plane(g),
        Target::Quadric => cusp_quadric(g),
    }
}

/// Second route to the cusp potentials, through the enriched series:
/// `KP = Q^pt − P^pt`, `KL_ss = −κv·KP_ss + λ·G_wss + Q^div_ss − P^div_ss`,
/// `K = κ'G_v − v·KL − (…)·KP + Q⁰ − P⁰`.
pub fn cusp_from_enriched(g: &Potential, enriched: &EnrichedSet) -> Result<CuspSet> {
    let quadric = g.target() == Target::Quadric;
    let (v_kp, wss, gv, v2_kp) = if quadric {
        (rat(2), rat(4), rat(2), rat(1))
    } else {
        (rat(1), rat(3), rat(3), ratio(1, 2))
    };
    let kp_ss = &enriched.q_point_ss - &enriched.p_point_ss;
    let kl_ss = kp_ss.mul_monomial(V, &-v_kp)
        + g.dw().ds().ds().scale(&wss)
        + (&enriched.q_divisor_ss - &enriched.p_divisor_ss);
    let kp = integrate_twice(kp_ss)?;
    let kl = integrate_twice(kl_ss)?;
    let k = g.dv().scale(&gv)
        - kl.mul_monomial(V, &rat(1))
        - kp.mul_monomial(V2, &v2_kp)
        - kp.mul_monomial(W, &rat(1))
        + (&enriched.q0 - &enriched.p0);
    CuspSet::publish(kp, kl, k)
}

/// Cusp potentials of irreducible curves on the quadric.
#[derive(Clone, Debug)]
pub struct IrreducibleCusp {
    pub kp_irr: Potential,
    pub kl_irr: Potential,
    pub k_irr: Potential,
}

/// Removes the configurations containing a multiple cover of a rule.
pub fn irreducible_corrections(
    cusp: &CuspSet,
    i: &Potential,
    j: &Potential,
    g: &Potential,
) -> Result<IrreducibleCusp> {
    require_g(g, Target::Quadric)?;
    let desc = TargetDescriptor::quadric();
    let l1_g = desc.l1().on(g);
    let l2_g = desc.l2().on(g);
    let p_g = desc.p.on(g);
    let (iv, jv) = (i.dv(), j.dv());
    let (iw, jw) = (i.dw(), j.dw());

    let kl_fix = iv.du1().checked_mul(&l1_g)?
        + jv.du2().checked_mul(&l2_g)?
        + (iv.du() + jv.du()).checked_mul(&p_g)?;
    let kp_fix = iw.du1().checked_mul(&l1_g)? + jw.du2().checked_mul(&l2_g)?;

    let out = IrreducibleCusp {
        kp_irr: (&cusp.kp - &kp_fix).with_kind(PotentialKind::KPirr),
        kl_irr: (&cusp.kl - &kl_fix).with_kind(PotentialKind::KLirr),
        k_irr: cusp.k.clone(),
    };
    check_admissible(&out.kp_irr)?;
    check_admissible(&out.kl_irr)?;
    Ok(out)
}

/// Number of cuspidal curves of bi-degree `(m,n)` through `2m+2n-2` points,
/// from the incidence numbers alone.
pub fn kinc_closed_form(
    incidence: &BTreeMap<CurveClass, BigInt>,
    class: CurveClass,
) -> Result<Rational> {
    let CurveClass::Quadric(m, n) = class else {
        return Err(Error::TargetMismatch {
            left: Target::Quadric,
            right: class.target(),
        });
    };
    let lookup = |c: CurveClass| {
        incidence.get(&c).cloned().ok_or(Error::ClassBeyondCap {
            class: c,
            cap: m + n - 1,
        })
    };
    let d = i64::from(m + n);
    let mut total = ratio(4 * (d - 1), d) * Rational::from_integer(lookup(class)?);
    for m1 in 0..=m {
        for n1 in 0..=n {
            let (m2, n2) = (m - m1, n - n1);
            if m1 + n1 == 0 || m2 + n2 == 0 {
                continue;
            }
            let n_1 = lookup(CurveClass::Quadric(m1, n1))?;
            let n_2 = lookup(CurveClass::Quadric(m2, n2))?;
            if n_1.is_zero() || n_2.is_zero() {
                continue;
            }
            let (d1, d2) = (i64::from(m1 + n1), i64::from(m2 + n2));
            let cross = i64::from(m1 * n2 + n1 * m2);
            let choose = binomial(BigInt::from(2 * d - 2), BigInt::from(2 * d1 - 1));
            total += ratio(cross * (d1 * d2 - d), d) * Rational::from_integer(choose * n_1 * n_2);
        }
    }
    Ok(total)
}
