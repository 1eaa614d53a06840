use thiserror::Error;

use crate::series::{CurveClass, ExponentTuple, PotentialKind, Target};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("target mismatch: {left} vs {right}")]
    TargetMismatch { left: Target, right: Target },

    #[error("cap mismatch: {left} vs {right}")]
    CapMismatch { left: u32, right: u32 },

    #[error("derivative {dir} is not defined on {target} potentials")]
    DirectionUnavailable { dir: &'static str, target: Target },

    #[error("class {class} lies beyond the computed cap {cap}; increase cap")]
    ClassBeyondCap { class: CurveClass, cap: u32 },

    #[error("class {class} cannot be stored in a {target} potential of cap {cap}")]
    InvalidClass {
        class: CurveClass,
        target: Target,
        cap: u32,
    },

    #[error("cannot integrate along {dir}: class {class} has zero pairing")]
    ZeroPairing {
        dir: &'static str,
        class: CurveClass,
    },

    #[error("potential kind {kind} is not defined for {target}")]
    KindTargetMismatch { kind: PotentialKind, target: Target },

    #[error("potential kind {0} has no admissibility stratum")]
    NoStratum(PotentialKind),

    #[error(
        "{kind} coefficient off its stratum at class {class}, exponents {exp} (expected a+b+2c = {expected})"
    )]
    OffStratum {
        kind: PotentialKind,
        class: CurveClass,
        exp: ExponentTuple,
        expected: i64,
    },

    #[error("cell {exp} of class {class} read before it was filled")]
    Dependency {
        class: CurveClass,
        exp: ExponentTuple,
    },

    #[error("associativity equations inconsistent at class {0}")]
    WdvvInconsistent(CurveClass),

    #[error("flex degree must be positive")]
    InvalidFlexDegree,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
