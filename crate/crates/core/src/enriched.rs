//! Enriched first descendants: P-series (one Π-class insertion) and
//! Q-series (one squared modified psi class), as differential polynomials
//! in G.
//!
//! Insertions are indexed by [`Insertion`]: the fundamental class, the
//! tangency divisor (line on the plane, (1,1)-class on the quadric) or the
//! point class. For the last two, the stored objects are double
//! `s`-derivatives.

use crate::error::{Error, Result};
use crate::series::{rat, ratio, Potential, PotentialKind, Target};
use crate::targets::{check_admissible, MetricTable, TargetDescriptor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Insertion {
    Fundamental,
    Divisor,
    Point,
}

impl Insertion {
    pub fn p_kind(self, target: Target) -> PotentialKind {
        match (self, target) {
            (Insertion::Fundamental, _) => PotentialKind::P0,
            (Insertion::Divisor, Target::Plane) => PotentialKind::P1,
            (Insertion::Point, Target::Plane) => PotentialKind::P2,
            (Insertion::Divisor, Target::Quadric) => PotentialKind::P12,
            (Insertion::Point, Target::Quadric) => PotentialKind::P3,
        }
    }

    pub fn q_kind(self, target: Target) -> PotentialKind {
        match (self, target) {
            (Insertion::Fundamental, _) => PotentialKind::Q0,
            (Insertion::Divisor, Target::Plane) => PotentialKind::Q1,
            (Insertion::Point, Target::Plane) => PotentialKind::Q2,
            (Insertion::Divisor, Target::Quadric) => PotentialKind::Q12,
            (Insertion::Point, Target::Quadric) => PotentialKind::Q3,
        }
    }
}

/// Every enriched series built from one G.
#[derive(Clone, Debug)]
pub struct EnrichedSet {
    pub p0: Potential,
    pub p_divisor_ss: Potential,
    pub p_point_ss: Potential,
    pub q0: Potential,
    pub q_divisor_ss: Potential,
    pub q_point_ss: Potential,
}

impl EnrichedSet {
    pub fn build(g: &Potential) -> Result<Self> {
        Ok(EnrichedSet {
            p0: p_series(g, Insertion::Fundamental)?,
            p_divisor_ss: p_series(g, Insertion::Divisor)?,
            p_point_ss: p_series(g, Insertion::Point)?,
            q0: q_series(g, Insertion::Fundamental)?,
            q_divisor_ss: q_series(g, Insertion::Divisor)?,
            q_point_ss: q_series(g, Insertion::Point)?,
        })
    }

    pub fn members(&self) -> [&Potential; 6] {
        [
            &self.p0,
            &self.p_divisor_ss,
            &self.p_point_ss,
            &self.q0,
            &self.q_divisor_ss,
            &self.q_point_ss,
        ]
    }
}

fn require_g(g: &Potential) -> Result<()> {
    if g.kind() != PotentialKind::G {
        return Err(Error::KindTargetMismatch {
            kind: g.kind(),
            target: g.target(),
        });
    }
    Ok(())
}

/// `½ Σ_{e,f} Γ_{x_e} · table^{ef} · Γ_{x_f}`, with `Γ_{x_e}` read off G
/// through the descriptor's gradient map.
pub fn metric_form(g: &Potential, table: &MetricTable) -> Potential {
    let desc = TargetDescriptor::for_target(g.target());
    let gradient: Vec<Option<Potential>> = desc
        .gradient
        .iter()
        .map(|d| d.map(|d| d.apply(g).expect("gradient matches target")))
        .collect();
    let mut out = Potential::zero(g.target(), PotentialKind::Scratch, g.cap());
    for (e, row) in table.iter().enumerate() {
        for (f, entry) in row.iter().enumerate() {
            let (Some(left), Some(right)) = (&gradient[e], &gradient[f]) else {
                continue;
            };
            if entry.is_empty() {
                continue;
            }
            let product = left * right;
            for (weight, shift) in entry {
                out = &out + &product.mul_monomial(*shift, &ratio(*weight, 2));
            }
        }
    }
    out
}

/// The un-differentiated `P^k = ½ Σ Γ_{x_e} γ_k^{ef} Γ_{x_f}` from the
/// metric tables.
pub fn p_series_from_metric(g: &Potential, which: Insertion) -> Result<Potential> {
    require_g(g)?;
    let desc = TargetDescriptor::for_target(g.target());
    let table = match which {
        Insertion::Fundamental => &desc.metric,
        Insertion::Divisor => &desc.metric_divisor,
        Insertion::Point => &desc.metric_point,
    };
    let out = metric_form(g, table).with_kind(which.p_kind(g.target()));
    check_admissible(&out)?;
    Ok(out)
}

/// P-series in operator form: `P⁰` itself, or `P^k_ss` for the divisor and
/// point insertions.
pub fn p_series(g: &Potential, which: Insertion) -> Result<Potential> {
    require_g(g)?;
    let desc = TargetDescriptor::for_target(g.target());
    let out = match which {
        Insertion::Fundamental => return p_series_from_metric(g, which),
        Insertion::Divisor => {
            let (gs, gu) = (g.ds(), g.du());
            let (gss, gus) = (gs.ds(), gu.ds());
            let guss = gus.ds();
            &(&(&gus * &gss) + &(&guss * &gs))
                + &(&(&gu * &desc.l.on(&gss)) + &(&gus * &desc.l.on(&gs)))
        }
        Insertion::Point => {
            let gu = g.du();
            let gus = gu.ds();
            &(&gus * &gus) + &(&gus.ds() * &gu)
        }
    };
    let out = out.with_kind(which.p_kind(g.target()));
    check_admissible(&out)?;
    Ok(out)
}

/// Q-series: `Q⁰`, or `Q^k_ss` for the divisor and point insertions.
pub fn q_series(g: &Potential, which: Insertion) -> Result<Potential> {
    require_g(g)?;
    let desc = TargetDescriptor::for_target(g.target());
    let quadric = g.target() == Target::Quadric;
    // linear terms carry an extra factor 2 on the quadric
    let k = rat(if quadric { 2 } else { 1 });
    let gs = g.ds();
    let gss = gs.ds();
    let gu = g.du();
    let (gv, gw) = (g.dv(), g.dw());
    let l_gss = desc.l.on(&gss);
    let p_gss = desc.p.on(&gss);

    // X_{x_e} γ^{ef} (G_ss)_{x_f} with X = G_v or G_w
    let bracket = |x: &Potential| -> Potential {
        if quadric {
            &(&(&x.du1() * &desc.l1().on(&gss)) + &(&x.du2() * &desc.l2().on(&gss)))
                + &(&x.du() * &p_gss)
        } else {
            &(&x.ds() * &l_gss) + &(&x.du() * &p_gss)
        }
    };

    let out = match which {
        Insertion::Fundamental => {
            let form = if quadric {
                &(&(&g.du1() * &desc.l1().on(g)) + &(&g.du2() * &desc.l2().on(g)))
                    + &(&gu * &desc.p.on(g))
            } else {
                &(&gs * &desc.l.on(g)) + &(&gu * &desc.p.on(g))
            };
            form.scale(&ratio(-1, 2))
        }
        Insertion::Divisor => {
            let linear = &(&gv.du().scale(&k) - &gw.ds().scale(&(k.clone() * rat(2))))
                - &gw.ds().ds().scale(&k);
            let quad = &(&gs * &gu.ds().ds()) + &(&gu * &l_gss);
            &(&linear + &quad) + &bracket(&gv)
        }
        Insertion::Point => {
            let linear = gw.du().scale(&k);
            &(&linear + &(&gu * &gu.ds().ds())) + &bracket(&gw)
        }
    };
    let out = out.with_kind(which.q_kind(g.target()));
    check_admissible(&out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{CurveClass, ExponentTuple};
    use crate::tangency::build_g;

    #[test]
    fn p0_plus_q0_vanishes() {
        for target in [Target::Plane, Target::Quadric] {
            let g = build_g(target, 4).unwrap();
            let sum = &p_series(&g, Insertion::Fundamental).unwrap()
                + &q_series(&g, Insertion::Fundamental).unwrap();
            assert!(sum.is_zero(), "{target}");
        }
    }

    #[test]
    fn operator_forms_match_metric_forms() {
        for target in [Target::Plane, Target::Quadric] {
            let g = build_g(target, 4).unwrap();
            for which in [Insertion::Divisor, Insertion::Point] {
                let from_metric = p_series_from_metric(&g, which).unwrap().ds().ds();
                let displayed = p_series(&g, which).unwrap();
                assert!(from_metric.same_cells(&displayed), "{target} {which:?}");
            }
        }
    }

    #[test]
    fn plane_point_series_vanish_on_lines() {
        let g = build_g(Target::Plane, 3).unwrap();
        let p2 = p_series(&g, Insertion::Point).unwrap();
        assert!(p2.slice(CurveClass::Plane(1)).is_none());
        let q2 = q_series(&g, Insertion::Point).unwrap();
        assert!(q2.slice(CurveClass::Plane(1)).is_none());
        assert_eq!(
            q2.coefficient(CurveClass::Plane(1), ExponentTuple::ZERO)
                .unwrap(),
            rat(0)
        );
    }

    #[test]
    fn quadric_point_series_swap_symmetric() {
        let g = build_g(Target::Quadric, 4).unwrap();
        let p3 = p_series(&g, Insertion::Point).unwrap();
        assert!(p3.swap().same_cells(&p3));
        let q12 = q_series(&g, Insertion::Divisor).unwrap();
        assert!(q12.swap().same_cells(&q12));
    }

    #[test]
    fn rejects_non_g_input() {
        let g = build_g(Target::Plane, 2)
            .unwrap()
            .with_kind(PotentialKind::K);
        assert!(p_series(&g, Insertion::Point).is_err());
    }
}
