//! Genus-zero simple Hurwitz numbers and the potentials of multiple covers
//! of a rule on the quadric.
//!
//! `H(t,v)` is embedded in quadric potentials on the classes `(d,0)`, with
//! the exponential variable `t` played by `u1` and only the `v` exponent
//! used.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::series::{rat, CurveClass, ExponentTuple, Potential, PotentialKind, Target};

/// Solves `H_vt = v·H_tt·H_tt` from `N₁(0) = 1`.
pub fn build_h(cap: u32) -> Result<Potential> {
    let mut h = Potential::zero(Target::Quadric, PotentialKind::H, cap);
    if cap == 0 {
        return Ok(h);
    }
    h.set_cell(CurveClass::Quadric(1, 0), ExponentTuple::ZERO, rat(1))?;
    for d in 2..=cap {
        let class = CurveClass::Quadric(d, 0);
        let htt = h.du1().du1();
        let rhs = htt
            .mul_filtered(&htt, |c| c == class)?
            .mul_monomial(ExponentTuple::new(0, 1, 0), &rat(1));
        // d·b·h(d, b) = [v·H_tt²] at (d, v^{b-1})
        for (exp, value) in rhs.slice(class).into_iter().flatten() {
            let b = exp.b + 1;
            let target_exp = ExponentTuple::new(exp.a, b, exp.c);
            h.set_cell(class, target_exp, value / rat(i64::from(d) * i64::from(b)))?;
        }
    }
    check_hurwitz_support(&h)?;
    Ok(h)
}

/// `H` lives on classes `(d,0)` at exponents `(0, 2d-2, 0)` with positive
/// values.
pub fn check_hurwitz_support(h: &Potential) -> Result<()> {
    for (class, exp, value) in h.cells() {
        let CurveClass::Quadric(d, 0) = class else {
            return Err(Error::OffStratum {
                kind: PotentialKind::H,
                class,
                exp,
                expected: -1,
            });
        };
        let expected = 2 * i64::from(d) - 2;
        if exp.a != 0 || exp.c != 0 || i64::from(exp.b) != expected || *value <= Zero::zero() {
            return Err(Error::OffStratum {
                kind: PotentialKind::H,
                class,
                exp,
                expected,
            });
        }
    }
    Ok(())
}

/// Covers of a horizontal rule, `I = u·H_{u1} + (v² + w)·H_v`, and of a
/// vertical rule, `J`, its image under the ruling swap.
pub fn build_rule_covers(h: &Potential) -> Result<(Potential, Potential)> {
    if h.kind() != PotentialKind::H {
        return Err(Error::KindTargetMismatch {
            kind: h.kind(),
            target: h.target(),
        });
    }
    let u = ExponentTuple::new(1, 0, 0);
    let v2 = ExponentTuple::new(0, 2, 0);
    let w = ExponentTuple::new(0, 0, 1);
    let hv = h.dv();
    let i = h.du1().mul_monomial(u, &rat(1))
        + hv.mul_monomial(v2, &rat(1))
        + hv.mul_monomial(w, &rat(1));
    let i = i.with_kind(PotentialKind::I);
    let j = i.swap().with_kind(PotentialKind::J);
    crate::targets::check_admissible(&i)?;
    crate::targets::check_admissible(&j)?;
    Ok((i, j))
}
