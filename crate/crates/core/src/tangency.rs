//! The characteristic-number potential G.
//!
//! Incidence numbers come from the associativity equations; the tangency
//! (`v`) and flag (`w`) directions are then filled in from the two
//! topological recursion relations, one total degree at a time.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::series::{
    factorial, rat, ratio, CurveClass, ExponentTuple, Potential, PotentialKind, Rational, Target,
};
use crate::targets::{check_admissible, expected_conditions, TargetDescriptor};

fn binom(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        BigInt::zero()
    } else {
        binomial(BigInt::from(n), BigInt::from(k))
    }
}

/// Rational plane curves of degree `d` through `3d-1` points, `d = 1..=cap`.
pub fn incidence_plane(cap: u32) -> Vec<(u32, BigInt)> {
    let mut n: Vec<BigInt> = vec![BigInt::zero(), BigInt::one()];
    for d in 2..=cap as i64 {
        let mut total = BigInt::zero();
        for d1 in 1..d {
            let d2 = d - d1;
            let weight = BigInt::from(d1 * d1 * d2)
                * (BigInt::from(d2) * binom(3 * d - 4, 3 * d1 - 2)
                    - BigInt::from(d1) * binom(3 * d - 4, 3 * d1 - 1));
            total += &n[d1 as usize] * &n[d2 as usize] * weight;
        }
        n.push(total);
    }
    (1..=cap).map(|d| (d, n[d as usize].clone())).collect()
}

/// Rational curves of bi-degree `(m,n)` through `2m+2n-1` points on the
/// quadric, for all `1 <= m+n <= cap`.
///
/// Solved from the associativity relation
/// `Γ₃₃₃ = Γ₁₁₃Γ₂₂₃ + Γ₁₂₃² − Γ₁₁₂Γ₂₃₃ − Γ₁₂₂Γ₁₃₃` and cross-checked against
/// `2Γ₁₂₃ = Γ₁₁₁Γ₂₂₂ − Γ₁₁₂Γ₁₂₂` on every class with `m·n ≠ 0`.
pub fn incidence_quadric(cap: u32) -> Result<Vec<((u32, u32), BigInt)>> {
    let mut table: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
    for class in CurveClass::all_up_to(Target::Quadric, cap) {
        let CurveClass::Quadric(m, n) = class else {
            unreachable!()
        };
        let value = if m + n == 1 {
            BigInt::one()
        } else {
            let value = wdvv_point_relation(&table, m, n);
            if m > 0 && n > 0 {
                let lhs = BigInt::from(2 * m * n) * &value;
                if lhs != wdvv_divisor_relation(&table, m, n) {
                    return Err(Error::WdvvInconsistent(class));
                }
            }
            value
        };
        table.insert((m, n), value);
    }
    Ok(table.into_iter().collect())
}

/// Ordered splittings `(m1,n1) + (m2,n2) = (m,n)` into nonzero classes.
fn quadric_splittings(m: u32, n: u32) -> impl Iterator<Item = ((i64, i64), (i64, i64))> {
    (0..=m).flat_map(move |m1| {
        (0..=n).filter_map(move |n1| {
            let (m2, n2) = (m - m1, n - n1);
            (m1 + n1 > 0 && m2 + n2 > 0).then_some((
                (i64::from(m1), i64::from(n1)),
                (i64::from(m2), i64::from(n2)),
            ))
        })
    })
}

fn wdvv_point_relation(table: &BTreeMap<(u32, u32), BigInt>, m: u32, n: u32) -> BigInt {
    let k = 2 * i64::from(m + n) - 1;
    let mut total = BigInt::zero();
    for ((m1, n1), (m2, n2)) in quadric_splittings(m, n) {
        let k1 = 2 * (m1 + n1) - 1;
        let n_1 = &table[&(m1 as u32, n1 as u32)];
        let n_2 = &table[&(m2 as u32, n2 as u32)];
        if n_1.is_zero() || n_2.is_zero() {
            continue;
        }
        let plus = BigInt::from(m1 * m1 * n2 * n2 + m1 * n1 * m2 * n2) * binom(k - 3, k1 - 1);
        let minus = BigInt::from(m1 * m1 * n1 * n2 + m1 * n1 * n1 * m2) * binom(k - 3, k1);
        total += n_1 * n_2 * (plus - minus);
    }
    total
}

fn wdvv_divisor_relation(table: &BTreeMap<(u32, u32), BigInt>, m: u32, n: u32) -> BigInt {
    let k = 2 * i64::from(m + n) - 1;
    let mut total = BigInt::zero();
    for ((m1, n1), (m2, n2)) in quadric_splittings(m, n) {
        let k1 = 2 * (m1 + n1) - 1;
        let n_1 = &table[&(m1 as u32, n1 as u32)];
        let n_2 = &table[&(m2 as u32, n2 as u32)];
        let weight = BigInt::from(m1.pow(3) * n2.pow(3) - m1 * m1 * n1 * m2 * n2 * n2);
        total += n_1 * n_2 * weight * binom(k - 1, k1);
    }
    total
}

/// Incidence numbers for every class of the target up to `cap`.
pub fn incidence(target: Target, cap: u32) -> Result<BTreeMap<CurveClass, BigInt>> {
    Ok(match target {
        Target::Plane => incidence_plane(cap)
            .into_iter()
            .map(|(d, n)| (CurveClass::Plane(d), n))
            .collect(),
        Target::Quadric => incidence_quadric(cap)?
            .into_iter()
            .map(|((m, n), v)| (CurveClass::Quadric(m, n), v))
            .collect(),
    })
}

/// Quadratic parts of the two recursion relations. The `v`-relation reads
/// `G_vs = κ_v·(G_us − G_u) + ½·quad_v` and the `w`-relation
/// `G_wss = κ_w·G_uu + quad_w`, with `κ = 1` on the plane and `κ = 2` on the
/// quadric.
struct QuadraticTerms {
    v_relation: Potential,
    w_relation: Potential,
}

fn quadratic_terms<F>(g: &Potential, keep: F) -> QuadraticTerms
where
    F: Fn(CurveClass) -> bool + Copy,
{
    let desc = TargetDescriptor::for_target(g.target());
    let gs = g.ds();
    let gss = gs.ds();
    let gu = g.du();
    let gus = gu.ds();
    let guu = gu.du();
    let p_gs = desc.p.on(&gs);
    let p_gss = desc.p.on(&gss);
    let mul = |x: &Potential, y: &Potential| x.mul_filtered(y, keep).expect("same target and cap");
    match g.target() {
        Target::Plane => QuadraticTerms {
            v_relation: &mul(&gss, &desc.l.on(&gs)) + &mul(&gus, &p_gs),
            w_relation: &mul(&gus, &desc.l.on(&gss)) + &mul(&guu, &p_gss),
        },
        Target::Quadric => {
            let (l1, l2) = (desc.l1(), desc.l2());
            QuadraticTerms {
                v_relation: &(&mul(&gs.du1(), &l1.on(&gs)) + &mul(&gs.du2(), &l2.on(&gs)))
                    + &mul(&gus, &p_gs),
                w_relation: &(&mul(&gu.du1(), &l1.on(&gss)) + &mul(&gu.du2(), &l2.on(&gss)))
                    + &mul(&guu, &p_gss),
            }
        }
    }
}

fn kappa(target: Target) -> i64 {
    match target {
        Target::Plane => 1,
        Target::Quadric => 2,
    }
}

/// Cell-by-cell filler for one class, tracking which cells are known.
struct ClassFill<'a> {
    g: &'a mut Potential,
    class: CurveClass,
    filled: BTreeSet<ExponentTuple>,
}

impl ClassFill<'_> {
    fn read(&self, exp: ExponentTuple) -> Result<Rational> {
        if !self.filled.contains(&exp) {
            return Err(Error::Dependency {
                class: self.class,
                exp,
            });
        }
        Ok(self.g.ordinary(self.class, exp))
    }

    fn write(&mut self, exp: ExponentTuple, value: Rational) -> Result<()> {
        self.g.set_cell(self.class, exp, value)?;
        self.filled.insert(exp);
        Ok(())
    }
}

/// Builds G for `target` up to `cap`.
///
/// Per class: seed the incidence number, extend in `c` at `b = 0` with the
/// `w`-relation, then extend in `b` at each `c` with the `v`-relation.
pub fn build_g(target: Target, cap: u32) -> Result<Potential> {
    let incidence = incidence(target, cap)?;
    let mut g = Potential::zero(target, PotentialKind::G, cap);
    let kappa = kappa(target);
    for total in 1..=cap {
        let quad = quadratic_terms(&g, |c| c.total_degree() == total);
        let classes = CurveClass::all_up_to(target, cap)
            .into_iter()
            .filter(|c| c.total_degree() == total);
        for class in classes {
            let stratum = expected_conditions(PotentialKind::G, class)? as u32;
            let dd = i64::from(total);
            let mut fill = ClassFill {
                g: &mut g,
                class,
                filled: BTreeSet::new(),
            };
            let seed = Rational::new(incidence[&class].clone(), factorial(stratum));
            fill.write(ExponentTuple::new(stratum, 0, 0), seed)?;

            // w-relation at (a, 0, c-1):
            // D²·c·g(a,0,c) = κ_w·(a+2)(a+1)·g(a+2,0,c-1) + quad_w(a,0,c-1)
            for c in 1..=stratum / 2 {
                let a = stratum - 2 * c;
                let below = ExponentTuple::new(a, 0, c - 1);
                let linear = fill.read(ExponentTuple::new(a + 2, 0, c - 1))?
                    * rat(kappa * i64::from(a + 2) * i64::from(a + 1));
                let rhs = linear + quad.w_relation.ordinary(class, below);
                fill.write(
                    ExponentTuple::new(a, 0, c),
                    rhs / rat(dd * dd * i64::from(c)),
                )?;
            }

            // v-relation at (a, b-1, c):
            // D·b·g(a,b,c) = κ_v·(D-1)·(a+1)·g(a+1,b-1,c) + ½·quad_v(a,b-1,c)
            for c in 0..=stratum / 2 {
                for b in 1..=stratum - 2 * c {
                    let a = stratum - 2 * c - b;
                    let below = ExponentTuple::new(a, b - 1, c);
                    let linear = fill.read(ExponentTuple::new(a + 1, b - 1, c))?
                        * rat(kappa * (dd - 1) * i64::from(a + 1));
                    let rhs = linear + quad.v_relation.ordinary(class, below) * ratio(1, 2);
                    fill.write(ExponentTuple::new(a, b, c), rhs / rat(dd * i64::from(b)))?;
                }
            }
        }
        check_admissible(&g)?;
    }
    Ok(g)
}

/// Left minus right side of both recursion relations, over all of G.
#[derive(Clone, Debug)]
pub struct TrrResidual {
    pub v_relation: Potential,
    pub w_relation: Potential,
}

impl TrrResidual {
    pub fn is_zero(&self) -> bool {
        self.v_relation.is_zero() && self.w_relation.is_zero()
    }
}

/// Evaluates both recursion relations with the generic operator machinery.
pub fn trr_residual(g: &Potential) -> TrrResidual {
    let kappa = rat(kappa(g.target()));
    let quad = quadratic_terms(g, |_| true);
    let gs = g.ds();
    let gu = g.du();
    let v_rhs = &(&gu.ds() - &gu).scale(&kappa) + &quad.v_relation.scale(&ratio(1, 2));
    let w_rhs = &gu.du().scale(&kappa) + &quad.w_relation;
    TrrResidual {
        v_relation: (&gs.dv() - &v_rhs).with_kind(PotentialKind::Scratch),
        w_relation: (&gs.ds().dw() - &w_rhs).with_kind(PotentialKind::Scratch),
    }
}
