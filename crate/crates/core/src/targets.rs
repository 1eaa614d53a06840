//! Target descriptors: the differential operators built from the deformed
//! metric, the metric tables themselves, and the admissibility strata.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::series::{
    rat, CurveClass, ExpDir, ExponentTuple, PolyVar, Potential, PotentialKind, Rational, Target,
};

/// Basic derivative appearing in a [`DiffOperator`] term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Deriv {
    S,
    U,
    V,
    W,
    U1,
    U2,
}

impl Deriv {
    pub fn apply(self, p: &Potential) -> Result<Potential> {
        match self {
            Deriv::S => p.deriv_exp(ExpDir::S),
            Deriv::U1 => p.deriv_exp(ExpDir::U1),
            Deriv::U2 => p.deriv_exp(ExpDir::U2),
            Deriv::U => Ok(p.deriv_poly(PolyVar::U)),
            Deriv::V => Ok(p.deriv_poly(PolyVar::V)),
            Deriv::W => Ok(p.deriv_poly(PolyVar::W)),
        }
    }
}

/// One term `weight · u^a v^b w^c · ∂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorTerm {
    pub shift: ExponentTuple,
    pub weight: Rational,
    pub deriv: Deriv,
}

/// Finite sum of monomial multipliers times basic derivatives. The
/// derivative acts first.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DiffOperator {
    pub terms: Vec<OperatorTerm>,
}

impl DiffOperator {
    pub fn new() -> Self {
        DiffOperator::default()
    }

    pub fn term(mut self, weight: i64, shift: ExponentTuple, deriv: Deriv) -> Self {
        self.terms.push(OperatorTerm {
            shift,
            weight: rat(weight),
            deriv,
        });
        self
    }

    pub fn plus(&self, other: &DiffOperator) -> DiffOperator {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        DiffOperator { terms }
    }

    pub fn apply(&self, p: &Potential) -> Result<Potential> {
        let mut out = Potential::zero(p.target(), PotentialKind::Scratch, p.cap());
        for term in &self.terms {
            let derived = term.deriv.apply(p)?;
            out = out.checked_add(&derived.mul_monomial(term.shift, &term.weight), &rat(1))?;
        }
        Ok(out)
    }

    /// Infallible application for operators known to match the target.
    pub fn on(&self, p: &Potential) -> Potential {
        self.apply(p)
            .expect("operator matches the potential's target")
    }
}

const ONE: ExponentTuple = ExponentTuple::new(0, 0, 0);
const V: ExponentTuple = ExponentTuple::new(0, 1, 0);
const V2: ExponentTuple = ExponentTuple::new(0, 2, 0);
const W: ExponentTuple = ExponentTuple::new(0, 0, 1);

/// Polynomial entry `Σ weight · v^b w^c` of a metric table.
pub type MetricEntry = Vec<(i64, ExponentTuple)>;

/// Square table of polynomial entries indexed by the cohomology basis.
pub type MetricTable = Vec<Vec<MetricEntry>>;

/// Operators, metric tables and basis data for one target.
#[derive(Clone, Debug)]
pub struct TargetDescriptor {
    pub target: Target,
    pub basis: &'static [&'static str],
    /// Poincaré pairing `g_ij`.
    pub pairing: Vec<Vec<i64>>,
    /// Deformed metric `γ^{ef}` in the condition variables.
    pub metric: MetricTable,
    /// Derivative of the metric along the tangency-divisor class.
    pub metric_divisor: MetricTable,
    /// Derivative of the metric along the point class.
    pub metric_point: MetricTable,
    /// Which derivative of G realizes `Γ_{x_e}` for each basis element; the
    /// fundamental class contributes nothing on positive classes.
    pub gradient: Vec<Option<Deriv>>,
    pub l: DiffOperator,
    pub p: DiffOperator,
    pub l1: Option<DiffOperator>,
    pub l2: Option<DiffOperator>,
}

fn entry(terms: &[(i64, ExponentTuple)]) -> MetricEntry {
    terms.to_vec()
}

fn table(rows: Vec<Vec<MetricEntry>>) -> MetricTable {
    rows
}

impl TargetDescriptor {
    pub fn for_target(target: Target) -> Self {
        match target {
            Target::Plane => Self::plane(),
            Target::Quadric => Self::quadric(),
        }
    }

    pub fn plane() -> Self {
        let z = MetricEntry::new;
        let one = || entry(&[(1, ONE)]);
        TargetDescriptor {
            target: Target::Plane,
            basis: &["T0 (fundamental)", "T1 (line)", "T2 (point)"],
            pairing: vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]],
            metric: table(vec![
                vec![z(), z(), one()],
                vec![z(), one(), entry(&[(2, V)])],
                vec![one(), entry(&[(2, V)]), entry(&[(2, V2), (2, W)])],
            ]),
            metric_divisor: table(vec![
                vec![z(), z(), z()],
                vec![z(), z(), one()],
                vec![z(), one(), entry(&[(2, V)])],
            ]),
            metric_point: table(vec![
                vec![z(), z(), z()],
                vec![z(), z(), z()],
                vec![z(), z(), one()],
            ]),
            gradient: vec![None, Some(Deriv::S), Some(Deriv::U)],
            l: DiffOperator::new()
                .term(1, ONE, Deriv::S)
                .term(2, V, Deriv::U),
            p: DiffOperator::new()
                .term(2, V, Deriv::S)
                .term(2, V2, Deriv::U)
                .term(2, W, Deriv::U),
            l1: None,
            l2: None,
        }
    }

    pub fn quadric() -> Self {
        let z = MetricEntry::new;
        let one = || entry(&[(1, ONE)]);
        let two_v = || entry(&[(2, V)]);
        let l1 = DiffOperator::new()
            .term(1, ONE, Deriv::U2)
            .term(2, V, Deriv::U);
        let l2 = DiffOperator::new()
            .term(1, ONE, Deriv::U1)
            .term(2, V, Deriv::U);
        TargetDescriptor {
            target: Target::Quadric,
            basis: &[
                "T0 (fundamental)",
                "T1 (first ruling class)",
                "T2 (second ruling class)",
                "T3 (point)",
            ],
            pairing: vec![
                vec![0, 0, 0, 1],
                vec![0, 0, 1, 0],
                vec![0, 1, 0, 0],
                vec![1, 0, 0, 0],
            ],
            metric: table(vec![
                vec![z(), z(), z(), one()],
                vec![z(), z(), one(), two_v()],
                vec![z(), one(), z(), two_v()],
                vec![one(), two_v(), two_v(), entry(&[(4, V2), (2, W)])],
            ]),
            metric_divisor: table(vec![
                vec![z(), z(), z(), z()],
                vec![z(), z(), z(), one()],
                vec![z(), z(), z(), one()],
                vec![z(), one(), one(), entry(&[(4, V)])],
            ]),
            metric_point: table(vec![
                vec![z(), z(), z(), z()],
                vec![z(), z(), z(), z()],
                vec![z(), z(), z(), z()],
                vec![z(), z(), z(), one()],
            ]),
            gradient: vec![None, Some(Deriv::U1), Some(Deriv::U2), Some(Deriv::U)],
            p: DiffOperator::new()
                .term(2, V, Deriv::U1)
                .term(2, V, Deriv::U2)
                .term(4, V2, Deriv::U)
                .term(2, W, Deriv::U),
            l: l1.plus(&l2),
            l1: Some(l1),
            l2: Some(l2),
        }
    }

    pub fn l1(&self) -> &DiffOperator {
        self.l1.as_ref().expect("𝓛₁ exists only on the quadric")
    }

    pub fn l2(&self) -> &DiffOperator {
        self.l2.as_ref().expect("𝓛₂ exists only on the quadric")
    }
}

fn kind_available(kind: PotentialKind, target: Target) -> bool {
    use PotentialKind::*;
    match kind {
        G | P0 | Q0 | K | KL | KP | F => true,
        P1 | P2 | Q1 | Q2 => target == Target::Plane,
        P12 | P3 | Q12 | Q3 | H | I | J | KLirr | KPirr => target == Target::Quadric,
        Scratch => false,
    }
}

/// The admissible condition total `a + b + 2c` for `kind` at `class`.
/// A negative value means the class carries no admissible cells.
pub fn expected_conditions(kind: PotentialKind, class: CurveClass) -> Result<i64> {
    use PotentialKind::*;
    let target = class.target();
    if kind == Scratch {
        return Err(Error::NoStratum(kind));
    }
    if !kind_available(kind, target) {
        return Err(Error::KindTargetMismatch { kind, target });
    }
    let per_degree = match target {
        Target::Plane => 3,
        Target::Quadric => 2,
    };
    let offset = match kind {
        G | I | J => -1,
        P0 | Q0 | K | H => -2,
        P1 | Q1 | P12 | Q12 | KL | KLirr | F => -3,
        P2 | Q2 | P3 | Q3 | KP | KPirr => -4,
        Scratch => unreachable!(),
    };
    Ok(per_degree * i64::from(class.total_degree()) + offset)
}

/// Checks that every stored coefficient lies on the kind's stratum.
pub fn check_admissible(p: &Potential) -> Result<()> {
    if !kind_available(p.kind(), p.target()) {
        return Err(if p.kind() == PotentialKind::Scratch {
            Error::NoStratum(p.kind())
        } else {
            Error::KindTargetMismatch {
                kind: p.kind(),
                target: p.target(),
            }
        });
    }
    for class in p.classes() {
        let expected = expected_conditions(p.kind(), class)?;
        for (exp, value) in p.slice(class).into_iter().flatten() {
            if !value.is_zero() && exp.weight() as i64 != expected {
                return Err(Error::OffStratum {
                    kind: p.kind(),
                    class,
                    exp: *exp,
                    expected,
                });
            }
        }
    }
    Ok(())
}

/// All exponent tuples with `a + b + 2c = total`.
pub fn stratum_cells(total: i64) -> Vec<ExponentTuple> {
    if total < 0 {
        return Vec::new();
    }
    let total = total as u32;
    let mut out = Vec::new();
    for c in 0..=total / 2 {
        for b in 0..=(total - 2 * c) {
            out.push(ExponentTuple::new(total - 2 * c - b, b, c));
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::ratio;

    fn cell(target: Target, class: CurveClass, exp: ExponentTuple) -> Potential {
        Potential::from_cells(target, PotentialKind::Scratch, 5, [(class, exp, rat(1))]).unwrap()
    }

    #[test]
    fn plane_l_by_hand() {
        let d = TargetDescriptor::plane();
        let p = cell(
            Target::Plane,
            CurveClass::Plane(3),
            ExponentTuple::new(2, 1, 0),
        );
        let got = d.l.on(&p);
        let want = Potential::from_cells(
            Target::Plane,
            PotentialKind::Scratch,
            5,
            [
                (CurveClass::Plane(3), ExponentTuple::new(2, 1, 0), rat(3)),
                (CurveClass::Plane(3), ExponentTuple::new(1, 2, 0), rat(4)),
            ],
        )
        .unwrap();
        assert!(got.same_cells(&want));
    }

    #[test]
    fn quadric_l_is_sum() {
        let d = TargetDescriptor::quadric();
        let p = Potential::from_cells(
            Target::Quadric,
            PotentialKind::Scratch,
            5,
            [
                (
                    CurveClass::Quadric(2, 1),
                    ExponentTuple::new(3, 1, 0),
                    ratio(1, 3),
                ),
                (
                    CurveClass::Quadric(0, 2),
                    ExponentTuple::new(1, 0, 1),
                    rat(-2),
                ),
            ],
        )
        .unwrap();
        let sum = &d.l1().on(&p) + &d.l2().on(&p);
        assert!(d.l.on(&p).same_cells(&sum));
        // 𝓛 = ∂_s + 4v∂_u
        let direct = &p.ds() + &p.du().mul_monomial(V, &rat(4));
        assert!(d.l.on(&p).same_cells(&direct));
    }

    #[test]
    fn operator_on_zero() {
        let d = TargetDescriptor::plane();
        assert!(d
            .p
            .on(&Potential::zero(Target::Plane, PotentialKind::G, 3))
            .is_zero());
    }

    #[test]
    fn operator_rejects_wrong_target() {
        let d = TargetDescriptor::quadric();
        let p = cell(Target::Plane, CurveClass::Plane(1), ExponentTuple::ZERO);
        assert!(d.l1().apply(&p).is_err());
    }

    #[test]
    fn swap_exchanges_l1_l2() {
        let d = TargetDescriptor::quadric();
        let p = Potential::from_cells(
            Target::Quadric,
            PotentialKind::Scratch,
            5,
            [
                (
                    CurveClass::Quadric(3, 1),
                    ExponentTuple::new(2, 1, 1),
                    rat(5),
                ),
                (
                    CurveClass::Quadric(1, 1),
                    ExponentTuple::new(0, 2, 0),
                    ratio(-1, 2),
                ),
            ],
        )
        .unwrap();
        assert!(d.l1().on(&p).swap().same_cells(&d.l2().on(&p.swap())));
        assert!(d.p.on(&p).swap().same_cells(&d.p.on(&p.swap())));
        assert!(d.l.on(&p).swap().same_cells(&d.l.on(&p.swap())));
    }

    #[test]
    fn metric_reduces_to_inverse_pairing() {
        for d in [TargetDescriptor::plane(), TargetDescriptor::quadric()] {
            let n = d.basis.len();
            for i in 0..n {
                for j in 0..n {
                    let constant: i64 = d.metric[i][j]
                        .iter()
                        .filter(|(_, e)| *e == ONE)
                        .map(|(w, _)| w)
                        .sum();
                    // the pairing matrices are their own inverses
                    assert_eq!(constant, d.pairing[i][j]);
                    assert_eq!(d.metric[i][j], d.metric[j][i]);
                }
            }
        }
    }

    #[test]
    fn strata() {
        assert_eq!(
            expected_conditions(PotentialKind::G, CurveClass::Plane(3)).unwrap(),
            8
        );
        assert_eq!(
            expected_conditions(PotentialKind::F, CurveClass::Quadric(2, 1)).unwrap(),
            3
        );
        assert_eq!(
            expected_conditions(PotentialKind::K, CurveClass::Plane(3)).unwrap(),
            7
        );
        assert_eq!(
            expected_conditions(PotentialKind::KP, CurveClass::Plane(1)).unwrap(),
            -1
        );
        assert_eq!(
            expected_conditions(PotentialKind::H, CurveClass::Quadric(3, 0)).unwrap(),
            4
        );
        assert!(matches!(
            expected_conditions(PotentialKind::H, CurveClass::Plane(2)),
            Err(Error::KindTargetMismatch { .. })
        ));
        assert!(matches!(
            expected_conditions(PotentialKind::Scratch, CurveClass::Plane(2)),
            Err(Error::NoStratum(_))
        ));
        assert_eq!(stratum_cells(5).len(), 12);
        assert!(stratum_cells(-1).is_empty());
    }

    #[test]
    fn admissibility_detects_off_stratum() {
        let mut p = Potential::zero(Target::Plane, PotentialKind::G, 3);
        p.set_cell(CurveClass::Plane(1), ExponentTuple::new(2, 0, 0), rat(1))
            .unwrap();
        assert!(check_admissible(&p).is_ok());
        p.set_cell(CurveClass::Plane(2), ExponentTuple::new(4, 2, 0), rat(1))
            .unwrap();
        assert!(matches!(
            check_admissible(&p),
            Err(Error::OffStratum { .. })
        ));
    }
}
