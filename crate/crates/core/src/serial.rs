//! Canonical JSON form of a [`Potential`].
//!
//! ```json
//! { "target": "p2", "kind": "G", "cap": 2,
//!   "cells": [ { "class": [1], "exp": [2,0,0], "value": "1/2" }, ... ] }
//! ```
//!
//! Cells are sorted by `(class, exp)` and values are reduced fractions, so
//! serialize → parse → serialize is the identity on bytes.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{CurveClass, ExponentTuple, Potential, Rational, Target};

#[derive(Serialize, Deserialize)]
struct PotentialFile {
    target: String,
    kind: String,
    cap: u32,
    cells: Vec<CellRecord>,
}

#[derive(Serialize, Deserialize)]
struct CellRecord {
    class: Vec<u32>,
    exp: [u32; 3],
    value: String,
}

/// Formats as `num/den`, always with an explicit denominator.
pub fn format_fraction(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Parses `num/den` or a bare integer.
pub fn parse_fraction(text: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("bad rational `{text}`"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den == BigInt::from(0) {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Exact value as an integer when the denominator is 1, else `num/den`.
pub fn display_exact(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format_fraction(value)
    }
}

pub fn to_json(p: &Potential) -> String {
    let file = PotentialFile {
        target: p.target().id().to_string(),
        kind: p.kind().as_str().to_string(),
        cap: p.cap(),
        cells: p
            .cells()
            .map(|(class, exp, value)| CellRecord {
                class: class.degrees(),
                exp: [exp.a, exp.b, exp.c],
                value: format_fraction(value),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("plain data serializes");
    text.push('\n');
    text
}

pub fn from_json(text: &str) -> Result<Potential> {
    let file: PotentialFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let target: Target = file.target.parse()?;
    let kind = file.kind.parse()?;
    let mut p = Potential::zero(target, kind, file.cap);
    for cell in file.cells {
        let class = CurveClass::from_degrees(target, &cell.class)?;
        let exp = ExponentTuple::new(cell.exp[0], cell.exp[1], cell.exp[2]);
        let value = parse_fraction(&cell.value)?;
        p.add_to_cell(class, exp, &value)?;
    }
    Ok(p)
}
