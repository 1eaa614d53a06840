//! Triple-contact potentials: `Fᶻ` on the plane (order-3 contact with a
//! fixed general curve of degree `z`) and `F` on the quadric (order-3 contact
//! with a fixed (1,1)-curve).

use crate::enriched::EnrichedSet;
use crate::error::{Error, Result};
use crate::series::{rat, CurveClass, ExpDir, Potential, PotentialKind, Target};
use crate::targets::{check_admissible, TargetDescriptor};

fn require_g(g: &Potential, target: Target) -> Result<()> {
    if g.kind() != PotentialKind::G || g.target() != target {
        return Err(Error::KindTargetMismatch {
            kind: g.kind(),
            target: g.target(),
        });
    }
    Ok(())
}

fn check_z(z: u32) -> Result<i64> {
    if z == 0 {
        return Err(Error::InvalidFlexDegree);
    }
    Ok(i64::from(z))
}

/// Drops the line slice, where contact of order 3 with a general curve only
/// happens for lines contained in it.
fn publish_plane(f: Potential) -> Result<Potential> {
    let f = f
        .restrict(|class| class != CurveClass::Plane(1))
        .with_kind(PotentialKind::F);
    check_admissible(&f)?;
    Ok(f)
}

/// The `z`-independent part `A_ss` and the coefficient `B_ss` of `z` in
/// `Fᶻ_ss = z·(A_ss + z·B_ss)`.
fn plane_parts_ss(g: &Potential) -> (Potential, Potential) {
    let desc = TargetDescriptor::plane();
    let gs = g.ds();
    let gss = gs.ds();
    let (gu, gv, gw) = (g.du(), g.dv(), g.dw());
    let (gus, gwss) = (gu.ds(), gw.ds().ds());
    let l_gss = desc.l.on(&gss);
    let bracket = gv.ds() * l_gss.clone() + gv.du() * desc.p.on(&gss);
    let a = gwss.scale(&rat(-2)) + gv.du().scale(&rat(2)) - gw.ds().scale(&rat(4))
        + &gs * &gus.ds()
        + &gu * &l_gss
        - &gus * &gss
        - &gus * &desc.l.on(&gs)
        + bracket.scale(&rat(2));
    (a, gwss.scale(&rat(3)))
}

/// `Fᶻ_ss` before integration, every slice included.
pub fn flex_plane_ss(g: &Potential, z: u32) -> Result<Potential> {
    require_g(g, Target::Plane)?;
    let z = rat(check_z(z)?);
    let (a, b) = plane_parts_ss(g);
    Ok((a + b.scale(&z)).scale(&z))
}

/// `Fᶻ` from its double derivative.
pub fn flex_plane(g: &Potential, z: u32) -> Result<Potential> {
    publish_plane(flex_plane_ss(g, z)?.integrate_exp(ExpDir::S, 2)?)
}

/// `Fᶻ = 3z²·G_w + 2z·Q¹ − z·P¹`, with `Q¹`, `P¹` recovered from their double
/// derivatives.
pub fn flex_plane_assembly(g: &Potential, enriched: &EnrichedSet, z: u32) -> Result<Potential> {
    require_g(g, Target::Plane)?;
    let z = check_z(z)?;
    let q1 = enriched.q_divisor_ss.integrate_exp(ExpDir::S, 2)?;
    let p1 = enriched.p_divisor_ss.integrate_exp(ExpDir::S, 2)?;
    let f = g.dw().scale(&rat(3 * z * z)) + q1.scale(&rat(2 * z)) - p1.scale(&rat(z));
    publish_plane(f)
}

/// Quadric `F_ss` before integration.
pub fn flex_quadric_ss(g: &Potential) -> Result<Potential> {
    require_g(g, Target::Quadric)?;
    let desc = TargetDescriptor::quadric();
    let gs = g.ds();
    let gss = gs.ds();
    let (gu, gv, gw) = (g.du(), g.dv(), g.dw());
    let gus = gu.ds();
    let bracket =
        gv.du1() * desc.l1().on(&gss) + gv.du2() * desc.l2().on(&gss) + gv.du() * desc.p.on(&gss);
    Ok(
        gw.ds().ds().scale(&rat(2)) + gv.du().scale(&rat(4)) - gw.ds().scale(&rat(8))
            + &gs * &gus.ds()
            + &gu * &desc.l.on(&gss)
            - &gus * &gss
            - &gus * &desc.l.on(&gs)
            + bracket.scale(&rat(2)),
    )
}

pub fn flex_quadric(g: &Potential) -> Result<Potential> {
    let f = flex_quadric_ss(g)?
        .integrate_exp(ExpDir::S, 2)?
        .with_kind(PotentialKind::F);
    check_admissible(&f)?;
    Ok(f)
}

/// `F = 6G_w + 2Q¹² − P¹²`.
pub fn flex_quadric_assembly(g: &Potential, enriched: &EnrichedSet) -> Result<Potential> {
    require_g(g, Target::Quadric)?;
    let q = enriched.q_divisor_ss.integrate_exp(ExpDir::S, 2)?;
    let p = enriched.p_divisor_ss.integrate_exp(ExpDir::S, 2)?;
    let f = (g.dw().scale(&rat(6)) + q.scale(&rat(2)) - p).with_kind(PotentialKind::F);
    check_admissible(&f)?;
    Ok(f)
}

/// Plane `F` for a given `z`, or the quadric `F` (where `z` is ignored).
pub fn flex(g: &Potential, z: u32) -> Result<Potential> {
    match g.target() {
        Target::Plane => flex_plane(g, z),
        Target::Quadric => flex_quadric(g),
    }
}

/// Checks that `F¹, F², F³` fit `z·(A + z·B)` exactly: the second finite
/// difference is constant and the polynomial vanishes at `z = 0`.
pub fn quadratic_in_z(f1: &Potential, f2: &Potential, f3: &Potential) -> bool {
    // F(z) = αz + βz² ⇒ F3 − 3F2 + 3F1 − F0 = 0 with F0 = 0
    let combo = f3 - &f2.scale(&rat(3)) + f1.scale(&rat(3));
    combo.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::ExponentTuple;
    use crate::tangency::build_g;

    #[test]
    fn plane_routes_agree() {
        let g = build_g(Target::Plane, 4).unwrap();
        let enriched = EnrichedSet::build(&g).unwrap();
        for z in 1..=3 {
            let direct = flex_plane(&g, z).unwrap();
            let assembled = flex_plane_assembly(&g, &enriched, z).unwrap();
            assert!(direct.same_cells(&assembled), "z = {z}");
        }
    }

    #[test]
    fn plane_conics_have_no_flex_lines() {
        let g = build_g(Target::Plane, 3).unwrap();
        let f = flex_plane(&g, 1).unwrap();
        assert!(f.slice(CurveClass::Plane(2)).is_none());
        assert!(f.slice(CurveClass::Plane(1)).is_none());
        assert!(f.slice(CurveClass::Plane(3)).is_some());
    }

    #[test]
    fn plane_z_interpolation() {
        let g = build_g(Target::Plane, 4).unwrap();
        let fs: Vec<_> = (1..=3).map(|z| flex_plane(&g, z).unwrap()).collect();
        assert!(quadratic_in_z(&fs[0], &fs[1], &fs[2]));
        let mut broken = fs[2].clone();
        broken
            .add_to_cell(CurveClass::Plane(3), ExponentTuple::new(6, 0, 0), &rat(1))
            .unwrap();
        assert!(!quadratic_in_z(&fs[0], &fs[1], &broken));
    }

    #[test]
    fn quadric_flex() {
        let g = build_g(Target::Quadric, 4).unwrap();
        let f = flex_quadric(&g).unwrap();
        assert!(f.slice(CurveClass::Quadric(1, 1)).is_none());
        assert!(f.swap().same_cells(&f));
        let assembled = flex_quadric_assembly(&g, &EnrichedSet::build(&g).unwrap()).unwrap();
        assert!(f.same_cells(&assembled));
    }

    #[test]
    fn zero_degree_rejected() {
        let g = build_g(Target::Plane, 2).unwrap();
        assert!(flex_plane(&g, 0).is_err());
    }
}
