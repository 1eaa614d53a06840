//! Sparse truncated power series graded by curve class, in three polynomial
//! variables `u`, `v`, `w`.
//!
//! A [`Potential`] stores, for every curve class `β` up to its cap, the slice
//! `Σ g_β(a,b,c) u^a v^b w^c` of the series `Σ_β exp(β·t) · slice_β`. The
//! stored `g_β(a,b,c)` are *ordinary* coefficients: the enumerative number
//! is `a!·b!·c!·g_β(a,b,c)` and is recovered by [`Potential::coefficient`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Target surface of a potential.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    /// The projective plane.
    Plane,
    /// The quadric surface P¹×P¹.
    Quadric,
}

impl Target {
    pub fn id(self) -> &'static str {
        match self {
            Target::Plane => "p2",
            Target::Quadric => "p1xp1",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p2" => Ok(Target::Plane),
            "p1xp1" => Ok(Target::Quadric),
            other => Err(Error::Parse(format!("unknown target `{other}`"))),
        }
    }
}

/// Effective curve class: a degree on the plane, a bi-degree on the quadric.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurveClass {
    Plane(u32),
    Quadric(u32, u32),
}

impl CurveClass {
    pub fn target(self) -> Target {
        match self {
            CurveClass::Plane(_) => Target::Plane,
            CurveClass::Quadric(..) => Target::Quadric,
        }
    }

    pub fn total_degree(self) -> u32 {
        match self {
            CurveClass::Plane(d) => d,
            CurveClass::Quadric(m, n) => m + n,
        }
    }

    /// Pairing of the class with an exponential direction.
    pub fn pairing(self, dir: ExpDir) -> Result<u32> {
        match (self, dir) {
            (_, ExpDir::S) => Ok(self.total_degree()),
            (CurveClass::Quadric(m, _), ExpDir::U1) => Ok(m),
            (CurveClass::Quadric(_, n), ExpDir::U2) => Ok(n),
            (CurveClass::Plane(_), dir) => Err(Error::DirectionUnavailable {
                dir: dir.name(),
                target: Target::Plane,
            }),
        }
    }

    /// Sum of two classes of the same target.
    pub fn checked_add(self, other: CurveClass) -> Option<CurveClass> {
        match (self, other) {
            (CurveClass::Plane(d1), CurveClass::Plane(d2)) => Some(CurveClass::Plane(d1 + d2)),
            (CurveClass::Quadric(m1, n1), CurveClass::Quadric(m2, n2)) => {
                Some(CurveClass::Quadric(m1 + m2, n1 + n2))
            }
            _ => None,
        }
    }

    /// The involution exchanging the two rulings; the identity on the plane.
    pub fn swap(self) -> CurveClass {
        match self {
            CurveClass::Quadric(m, n) => CurveClass::Quadric(n, m),
            plane => plane,
        }
    }

    pub fn degrees(self) -> Vec<u32> {
        match self {
            CurveClass::Plane(d) => vec![d],
            CurveClass::Quadric(m, n) => vec![m, n],
        }
    }

    pub fn from_degrees(target: Target, degrees: &[u32]) -> Result<CurveClass> {
        match (target, degrees) {
            (Target::Plane, [d]) => Ok(CurveClass::Plane(*d)),
            (Target::Quadric, [m, n]) => Ok(CurveClass::Quadric(*m, *n)),
            _ => Err(Error::Parse(format!(
                "class {degrees:?} does not fit target {target}"
            ))),
        }
    }

    /// Parses `"d"` for the plane and `"m,n"` for the quadric.
    pub fn parse(target: Target, text: &str) -> Result<CurveClass> {
        let degrees = text
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::Parse(format!("bad class `{text}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let class = CurveClass::from_degrees(target, &degrees)?;
        if class.total_degree() == 0 {
            return Err(Error::Parse(format!("class `{text}` has degree zero")));
        }
        Ok(class)
    }

    /// Every class of the target with total degree in `1..=cap`, ordered by
    /// total degree and then lexicographically.
    pub fn all_up_to(target: Target, cap: u32) -> Vec<CurveClass> {
        let mut out = Vec::new();
        for total in 1..=cap {
            match target {
                Target::Plane => out.push(CurveClass::Plane(total)),
                Target::Quadric => {
                    out.extend((0..=total).map(|m| CurveClass::Quadric(m, total - m)));
                }
            }
        }
        out
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveClass::Plane(d) => write!(f, "{d}"),
            CurveClass::Quadric(m, n) => write!(f, "({m},{n})"),
        }
    }
}

/// Exponents of `u`, `v`, `w`: numbers of incidence, tangency and flag
/// conditions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentTuple {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl ExponentTuple {
    pub const ZERO: ExponentTuple = ExponentTuple { a: 0, b: 0, c: 0 };

    pub const fn new(a: u32, b: u32, c: u32) -> Self {
        ExponentTuple { a, b, c }
    }

    pub fn get(self, var: PolyVar) -> u32 {
        match var {
            PolyVar::U => self.a,
            PolyVar::V => self.b,
            PolyVar::W => self.c,
        }
    }

    /// Condition total `a + b + 2c`.
    pub fn weight(self) -> u64 {
        u64::from(self.a) + u64::from(self.b) + 2 * u64::from(self.c)
    }

    pub fn plus(self, other: ExponentTuple) -> ExponentTuple {
        ExponentTuple::new(self.a + other.a, self.b + other.b, self.c + other.c)
    }

    fn lowered(self, var: PolyVar) -> Option<ExponentTuple> {
        let mut out = self;
        let slot = match var {
            PolyVar::U => &mut out.a,
            PolyVar::V => &mut out.b,
            PolyVar::W => &mut out.c,
        };
        *slot = slot.checked_sub(1)?;
        Some(out)
    }

    /// `a!·b!·c!`, the divided-power normalization.
    pub fn factorial_weight(self) -> BigInt {
        factorial(self.a) * factorial(self.b) * factorial(self.c)
    }
}

impl fmt::Display for ExponentTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Polynomial variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PolyVar {
    U,
    V,
    W,
}

/// Exponential direction. `S` pairs with the total degree; `U1`, `U2` with
/// the two partial degrees of a quadric class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExpDir {
    S,
    U1,
    U2,
}

impl ExpDir {
    pub fn name(self) -> &'static str {
        match self {
            ExpDir::S => "s",
            ExpDir::U1 => "u1",
            ExpDir::U2 => "u2",
        }
    }
}

/// Tag naming what a potential counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PotentialKind {
    G,
    P0,
    P1,
    P2,
    P12,
    P3,
    Q0,
    Q1,
    Q2,
    Q12,
    Q3,
    K,
    KL,
    KP,
    KLirr,
    KPirr,
    H,
    I,
    J,
    F,
    Scratch,
}

impl PotentialKind {
    pub const ALL: [PotentialKind; 21] = [
        PotentialKind::G,
        PotentialKind::P0,
        PotentialKind::P1,
        PotentialKind::P2,
        PotentialKind::P12,
        PotentialKind::P3,
        PotentialKind::Q0,
        PotentialKind::Q1,
        PotentialKind::Q2,
        PotentialKind::Q12,
        PotentialKind::Q3,
        PotentialKind::K,
        PotentialKind::KL,
        PotentialKind::KP,
        PotentialKind::KLirr,
        PotentialKind::KPirr,
        PotentialKind::H,
        PotentialKind::I,
        PotentialKind::J,
        PotentialKind::F,
        PotentialKind::Scratch,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PotentialKind::G => "G",
            PotentialKind::P0 => "P0",
            PotentialKind::P1 => "P1",
            PotentialKind::P2 => "P2",
            PotentialKind::P12 => "P12",
            PotentialKind::P3 => "P3",
            PotentialKind::Q0 => "Q0",
            PotentialKind::Q1 => "Q1",
            PotentialKind::Q2 => "Q2",
            PotentialKind::Q12 => "Q12",
            PotentialKind::Q3 => "Q3",
            PotentialKind::K => "K",
            PotentialKind::KL => "KL",
            PotentialKind::KP => "KP",
            PotentialKind::KLirr => "KLirr",
            PotentialKind::KPirr => "KPirr",
            PotentialKind::H => "H",
            PotentialKind::I => "I",
            PotentialKind::J => "J",
            PotentialKind::F => "F",
            PotentialKind::Scratch => "Scratch",
        }
    }
}

impl fmt::Display for PotentialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PotentialKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PotentialKind::ALL
            .iter()
            .copied()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown potential kind `{s}`")))
    }
}

pub type Slice = BTreeMap<ExponentTuple, Rational>;

/// Sparse truncated series `Σ_β exp(β·t) Σ_e g_β(e) u^a v^b w^c`.
///
/// Invariants: every stored class belongs to `target` and has total degree
/// in `1..=cap`; no stored coefficient is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Potential {
    target: Target,
    kind: PotentialKind,
    cap: u32,
    slices: BTreeMap<CurveClass, Slice>,
}

impl Potential {
    pub fn zero(target: Target, kind: PotentialKind, cap: u32) -> Self {
        Potential {
            target,
            kind,
            cap,
            slices: BTreeMap::new(),
        }
    }

    /// Builds a potential from ordinary coefficients; repeated cells add up.
    pub fn from_cells<I>(target: Target, kind: PotentialKind, cap: u32, cells: I) -> Result<Self>
    where
        I: IntoIterator<Item = (CurveClass, ExponentTuple, Rational)>,
    {
        let mut p = Potential::zero(target, kind, cap);
        for (class, exp, value) in cells {
            p.add_to_cell(class, exp, &value)?;
        }
        Ok(p)
    }

    pub fn target(&self) -> Target {
        self.target
    }

    pub fn kind(&self) -> PotentialKind {
        self.kind
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn with_kind(mut self, kind: PotentialKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.slices.is_empty()
    }

    pub fn num_cells(&self) -> usize {
        self.slices.values().map(BTreeMap::len).sum()
    }

    pub fn classes(&self) -> impl Iterator<Item = CurveClass> + '_ {
        self.slices.keys().copied()
    }

    pub fn slice(&self, class: CurveClass) -> Option<&Slice> {
        self.slices.get(&class)
    }

    /// All stored cells in canonical `(class, exp)` order.
    pub fn cells(&self) -> impl Iterator<Item = (CurveClass, ExponentTuple, &Rational)> + '_ {
        self.slices
            .iter()
            .flat_map(|(class, slice)| slice.iter().map(move |(exp, v)| (*class, *exp, v)))
    }

    fn check_class(&self, class: CurveClass) -> Result<()> {
        let total = class.total_degree();
        if class.target() != self.target || total == 0 || total > self.cap {
            return Err(Error::InvalidClass {
                class,
                target: self.target,
                cap: self.cap,
            });
        }
        Ok(())
    }

    /// Adds `value` to the ordinary coefficient at `(class, exp)`.
    pub fn add_to_cell(
        &mut self,
        class: CurveClass,
        exp: ExponentTuple,
        value: &Rational,
    ) -> Result<()> {
        self.check_class(class)?;
        if value.is_zero() {
            return Ok(());
        }
        let slice = self.slices.entry(class).or_default();
        accumulate(slice, exp, value.clone());
        if slice.is_empty() {
            self.slices.remove(&class);
        }
        Ok(())
    }

    /// Overwrites the ordinary coefficient at `(class, exp)`.
    pub fn set_cell(
        &mut self,
        class: CurveClass,
        exp: ExponentTuple,
        value: Rational,
    ) -> Result<()> {
        self.check_class(class)?;
        let slice = self.slices.entry(class).or_default();
        if value.is_zero() {
            slice.remove(&exp);
        } else {
            slice.insert(exp, value);
        }
        if slice.is_empty() {
            self.slices.remove(&class);
        }
        Ok(())
    }

    /// Stored ordinary coefficient; zero when absent.
    pub fn ordinary(&self, class: CurveClass, exp: ExponentTuple) -> Rational {
        self.slices
            .get(&class)
            .and_then(|s| s.get(&exp))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Enumerative number at `(class, exp)`: the ordinary coefficient times
    /// `a!·b!·c!`. Classes beyond the cap are an error, never zero.
    pub fn coefficient(&self, class: CurveClass, exp: ExponentTuple) -> Result<Rational> {
        if class.target() != self.target {
            return Err(Error::TargetMismatch {
                left: self.target,
                right: class.target(),
            });
        }
        if class.total_degree() > self.cap {
            return Err(Error::ClassBeyondCap {
                class,
                cap: self.cap,
            });
        }
        Ok(self.ordinary(class, exp) * Rational::from_integer(exp.factorial_weight()))
    }

    fn check_compatible(&self, other: &Potential) -> Result<()> {
        if self.target != other.target {
            return Err(Error::TargetMismatch {
                left: self.target,
                right: other.target,
            });
        }
        if self.cap != other.cap {
            return Err(Error::CapMismatch {
                left: self.cap,
                right: other.cap,
            });
        }
        Ok(())
    }

    /// `self + weight·other`.
    pub fn checked_add(&self, other: &Potential, weight: &Rational) -> Result<Potential> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        if weight.is_zero() {
            return Ok(out);
        }
        for (class, slice) in &other.slices {
            let target = out.slices.entry(*class).or_default();
            for (exp, value) in slice {
                accumulate(target, *exp, value * weight);
            }
            if target.is_empty() {
                out.slices.remove(class);
            }
        }
        Ok(out)
    }

    /// Class-and-exponent convolution, truncated to the cap. The result is
    /// tagged `Scratch`.
    pub fn checked_mul(&self, other: &Potential) -> Result<Potential> {
        self.mul_filtered(other, |_| true)
    }

    /// Product restricted to the product classes accepted by `keep`.
    pub fn mul_filtered<F>(&self, other: &Potential, keep: F) -> Result<Potential>
    where
        F: Fn(CurveClass) -> bool,
    {
        self.check_compatible(other)?;
        let mut out = Potential::zero(self.target, PotentialKind::Scratch, self.cap);
        for (c1, s1) in &self.slices {
            for (c2, s2) in &other.slices {
                let class = c1.checked_add(*c2).expect("targets checked");
                if class.total_degree() > self.cap || !keep(class) {
                    continue;
                }
                let slice = out.slices.entry(class).or_default();
                for (e1, v1) in s1 {
                    for (e2, v2) in s2 {
                        accumulate(slice, e1.plus(*e2), v1 * v2);
                    }
                }
            }
        }
        out.slices.retain(|_, s| !s.is_empty());
        Ok(out)
    }

    /// Multiplies by `weight · u^a v^b w^c` with `(a,b,c) = shift`.
    pub fn mul_monomial(&self, shift: ExponentTuple, weight: &Rational) -> Potential {
        let mut out = Potential::zero(self.target, self.kind, self.cap);
        if weight.is_zero() {
            return out;
        }
        for (class, slice) in &self.slices {
            let shifted: Slice = slice
                .iter()
                .map(|(exp, v)| (exp.plus(shift), v * weight))
                .collect();
            out.slices.insert(*class, shifted);
        }
        out
    }

    pub fn scale(&self, weight: &Rational) -> Potential {
        self.mul_monomial(ExponentTuple::ZERO, weight)
    }

    pub fn deriv_poly(&self, var: PolyVar) -> Potential {
        let mut out = Potential::zero(self.target, self.kind, self.cap);
        for (class, slice) in &self.slices {
            let lowered: Slice = slice
                .iter()
                .filter_map(|(exp, v)| {
                    let e = exp.get(var);
                    exp.lowered(var)
                        .map(|low| (low, v * Rational::from_integer(BigInt::from(e))))
                })
                .collect();
            if !lowered.is_empty() {
                out.slices.insert(*class, lowered);
            }
        }
        out
    }

    pub fn deriv_exp(&self, dir: ExpDir) -> Result<Potential> {
        if self.target == Target::Plane && dir != ExpDir::S {
            return Err(Error::DirectionUnavailable {
                dir: dir.name(),
                target: self.target,
            });
        }
        let mut out = Potential::zero(self.target, self.kind, self.cap);
        for (class, slice) in &self.slices {
            let factor = class.pairing(dir)?;
            if factor == 0 {
                continue;
            }
            let factor = Rational::from_integer(BigInt::from(factor));
            out.slices.insert(
                *class,
                slice.iter().map(|(e, v)| (*e, v * &factor)).collect(),
            );
        }
        Ok(out)
    }

    /// Inverse of [`Potential::deriv_exp`] applied `times` times. Every
    /// stored class must pair positively with `dir`.
    pub fn integrate_exp(&self, dir: ExpDir, times: u32) -> Result<Potential> {
        if self.target == Target::Plane && dir != ExpDir::S {
            return Err(Error::DirectionUnavailable {
                dir: dir.name(),
                target: self.target,
            });
        }
        let mut out = Potential::zero(self.target, self.kind, self.cap);
        for (class, slice) in &self.slices {
            let pairing = class.pairing(dir)?;
            if pairing == 0 {
                return Err(Error::ZeroPairing {
                    dir: dir.name(),
                    class: *class,
                });
            }
            let divisor = Rational::from_integer(BigInt::from(pairing).pow(times));
            out.slices.insert(
                *class,
                slice.iter().map(|(e, v)| (*e, v / &divisor)).collect(),
            );
        }
        Ok(out)
    }

    /// Keeps only the classes accepted by `keep`.
    pub fn restrict<F>(&self, keep: F) -> Potential
    where
        F: Fn(CurveClass) -> bool,
    {
        let mut out = self.clone();
        out.slices.retain(|class, _| keep(*class));
        out
    }

    /// Keeps only the cells whose exponent tuple is accepted by `keep`.
    pub fn restrict_cells<F>(&self, keep: F) -> Potential
    where
        F: Fn(ExponentTuple) -> bool,
    {
        let mut out = self.clone();
        for slice in out.slices.values_mut() {
            slice.retain(|exp, _| keep(*exp));
        }
        out.slices.retain(|_, slice| !slice.is_empty());
        out
    }

    /// Image under the ruling swap `(m,n) ↔ (n,m)`, `u1 ↔ u2`.
    pub fn swap(&self) -> Potential {
        let mut out = Potential::zero(self.target, self.kind, self.cap);
        for (class, slice) in &self.slices {
            out.slices.insert(class.swap(), slice.clone());
        }
        out
    }

    /// Same cells, ignoring the kind tag.
    pub fn same_cells(&self, other: &Potential) -> bool {
        self.target == other.target && self.cap == other.cap && self.slices == other.slices
    }

    // Shorthand derivatives used to transcribe the generating-function
    // equations. Directions u1/u2 panic on plane potentials.

    pub fn ds(&self) -> Potential {
        self.deriv_exp(ExpDir::S)
            .expect("s is defined on every target")
    }

    pub fn du1(&self) -> Potential {
        self.deriv_exp(ExpDir::U1)
            .expect("u1 requires a quadric potential")
    }

    pub fn du2(&self) -> Potential {
        self.deriv_exp(ExpDir::U2)
            .expect("u2 requires a quadric potential")
    }

    pub fn du(&self) -> Potential {
        self.deriv_poly(PolyVar::U)
    }

    pub fn dv(&self) -> Potential {
        self.deriv_poly(PolyVar::V)
    }

    pub fn dw(&self) -> Potential {
        self.deriv_poly(PolyVar::W)
    }
}

fn accumulate(slice: &mut Slice, exp: ExponentTuple, value: Rational) {
    use std::collections::btree_map::Entry;
    match slice.entry(exp) {
        Entry::Vacant(v) => {
            if !value.is_zero() {
                v.insert(value);
            }
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += value;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Integer as a rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num/den` as a rational.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

// Operator sugar for transcribing formulas. Mismatched targets or caps are
// programming errors here; the fallible methods above report them instead.

impl Add for &Potential {
    type Output = Potential;

    fn add(self, rhs: &Potential) -> Potential {
        Potential::checked_add(self, rhs, &Rational::one()).expect("operands share target and cap")
    }
}

impl Sub for &Potential {
    type Output = Potential;

    fn sub(self, rhs: &Potential) -> Potential {
        Potential::checked_add(self, rhs, &-Rational::one()).expect("operands share target and cap")
    }
}

impl Mul for &Potential {
    type Output = Potential;

    fn mul(self, rhs: &Potential) -> Potential {
        Potential::checked_mul(self, rhs).expect("operands share target and cap")
    }
}

impl Neg for &Potential {
    type Output = Potential;

    fn neg(self) -> Potential {
        self.scale(&-Rational::one())
    }
}

macro_rules! forward_owned_binop {
    ($($tr:ident :: $method:ident),*) => {$(
        impl $tr<Potential> for Potential {
            type Output = Potential;
            fn $method(self, rhs: Potential) -> Potential {
                <&Potential as $tr<&Potential>>::$method(&self, &rhs)
            }
        }
        impl $tr<&Potential> for Potential {
            type Output = Potential;
            fn $method(self, rhs: &Potential) -> Potential {
                <&Potential as $tr<&Potential>>::$method(&self, rhs)
            }
        }
        impl $tr<Potential> for &Potential {
            type Output = Potential;
            fn $method(self, rhs: Potential) -> Potential {
                <&Potential as $tr<&Potential>>::$method(self, &rhs)
            }
        }
    )*};
}

forward_owned_binop!(Add::add, Sub::sub, Mul::mul);

impl Neg for Potential {
    type Output = Potential;

    fn neg(self) -> Potential {
        -&self
    }
}
