use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use charnum::serial::display_exact;
use charnum::targets::expected_conditions;
use charnum::verify::{all_passed, run_all, CheckOutcome, Status};
use charnum::workbench::{kinds_for, Key, Workbench};
use charnum::{CurveClass, ExponentTuple, Potential, PotentialKind, Rational, Target};
use serde_json::json;

use crate::cache::{Cache, Lookup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

/// Workbench for `(target, cap)` holding every intact cached potential.
/// Damaged entries are reported on stderr and rebuilt on demand.
fn preloaded(cache: &Cache, target: Target, cap: u32) -> Result<(Workbench, BTreeSet<Key>)> {
    let mut wb = Workbench::new(target, cap);
    let mut loaded = BTreeSet::new();
    for entry in cache.entries() {
        if entry.target != target.id() || entry.cap != cap {
            continue;
        }
        match cache.load_entry(entry) {
            Lookup::Hit(p) => {
                let key = Key::new(target, p.kind(), entry.z);
                wb.preload(entry.z, p)?;
                loaded.insert(key);
            }
            Lookup::Corrupt(why) => eprintln!("warning: ignoring cached {why}"),
            Lookup::Miss => {}
        }
    }
    Ok((wb, loaded))
}

/// Stores everything the workbench built beyond what was loaded.
fn persist(
    cache: &mut Cache,
    wb: &Workbench,
    loaded: &BTreeSet<Key>,
) -> Result<Vec<(Key, usize, bool)>> {
    let mut summary = Vec::new();
    for (key, p) in wb.built() {
        let fresh = !loaded.contains(key);
        if fresh {
            cache.store(p, key.z)?;
        }
        summary.push((*key, p.num_cells(), fresh));
    }
    Ok(summary)
}

fn key_label(key: &Key) -> String {
    match key.z {
        Some(z) => format!("{} (z={z})", key.kind),
        None => key.kind.to_string(),
    }
}

pub fn compute(
    cache_dir: &Path,
    target: Target,
    cap: u32,
    kinds: Option<Vec<PotentialKind>>,
    z: Option<u32>,
) -> Result<String> {
    if cap == 0 {
        bail!("cap must be at least 1");
    }
    let start = Instant::now();
    let mut cache = Cache::open(cache_dir)?;
    let (mut wb, loaded) = preloaded(&cache, target, cap)?;
    let kinds = kinds.unwrap_or_else(|| kinds_for(target).to_vec());
    for kind in &kinds {
        wb.get(*kind, z)?;
    }
    let summary = persist(&mut cache, &wb, &loaded)?;
    let mut out = String::new();
    for (key, cells, fresh) in summary {
        let how = if fresh { "built" } else { "cached" };
        writeln!(out, "{:<12} {cells:>8} cells  {how}", key_label(&key))?;
    }
    writeln!(out, "{} cap {cap} done in {:.2?}", target, start.elapsed())?;
    Ok(out)
}

/// Cap to use for a class: explicit, else the largest cached one, else the
/// class's own degree.
fn choose_cap(
    cache: &Cache,
    target: Target,
    key: Key,
    class: CurveClass,
    cap: Option<u32>,
) -> Result<u32> {
    let cap = cap
        .or_else(|| cache.largest_cap(target, key.kind, key.z))
        .unwrap_or(class.total_degree());
    if class.total_degree() > cap {
        bail!(charnum::Error::ClassBeyondCap { class, cap });
    }
    Ok(cap)
}

fn obtain(
    cache_dir: &Path,
    target: Target,
    kind: PotentialKind,
    class: CurveClass,
    z: Option<u32>,
    cap: Option<u32>,
) -> Result<(Potential, Key)> {
    let mut cache = Cache::open(cache_dir)?;
    let key = Key::new(target, kind, z);
    let cap = choose_cap(&cache, target, key, class, cap)?;
    if let Lookup::Hit(p) = cache.lookup(target, kind, cap, key.z) {
        return Ok((p, key));
    }
    let (mut wb, loaded) = preloaded(&cache, target, cap)?;
    let p = wb.fetch(kind, key.z)?;
    persist(&mut cache, &wb, &loaded)?;
    Ok((p, key))
}

fn class_label(class: CurveClass) -> String {
    class
        .degrees()
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Remarks attached to a (kind, class) answer.
fn notes(target: Target, key: Key, class: CurveClass, expected: i64) -> Vec<String> {
    use PotentialKind::*;
    let d = class.total_degree();
    let mut out = Vec::new();
    if target == Target::Plane && matches!(key.kind, K | KL | KP) && d == 2 {
        out.push("conic slice counts marked double covers of lines, not cuspidal conics".into());
    }
    if target == Target::Plane && key.kind == F {
        out.push(format!(
            "F stratum is a+b+2c = 3d-3 = {expected} (the reading 2d-3 would give {})",
            2 * i64::from(d) - 3
        ));
        if d == 1 {
            out.push(
                "line slice suppressed: a line tangent to a general curve is not a flex line"
                    .into(),
            );
        }
    }
    if target == Target::Quadric && matches!(key.kind, K | KL | KP | KLirr | KPirr) {
        if let CurveClass::Quadric(m, n) = class {
            if m == 0 || n == 0 {
                out.push("rule class: values are multiple-cover contributions".into());
            }
        }
    }
    out
}

fn exp_json(exp: ExponentTuple) -> serde_json::Value {
    json!([exp.a, exp.b, exp.c])
}

pub struct QuerySpec {
    pub target: Target,
    pub kind: PotentialKind,
    pub class: String,
    pub exp: ExponentTuple,
    pub z: Option<u32>,
    pub cap: Option<u32>,
}

pub fn query(cache_dir: &Path, spec: &QuerySpec, format: Format) -> Result<String> {
    let class = CurveClass::parse(spec.target, &spec.class)?;
    let expected = expected_conditions(spec.kind, class)?;
    let (p, key) = obtain(cache_dir, spec.target, spec.kind, class, spec.z, spec.cap)?;
    let value = p.coefficient(class, spec.exp)?;
    let total = spec.exp.weight() as i64;
    let mut notes = notes(spec.target, key, class, expected);
    if total != expected {
        notes.insert(
            0,
            format!(
                "off stratum: a+b+2c = {total}, but {} at class {} needs {expected}; the number is 0 by convention",
                spec.kind,
                class_label(class)
            ),
        );
    }
    let shown = display_exact(&value);
    let mut out = String::new();
    match format {
        Format::Table => {
            writeln!(out, "{shown}")?;
            writeln!(
                out,
                "# {} {} class {} exp ({},{},{}) stratum {expected}",
                spec.target,
                key_label(&key),
                class_label(class),
                spec.exp.a,
                spec.exp.b,
                spec.exp.c
            )?;
            for note in &notes {
                writeln!(out, "# {note}")?;
            }
        }
        Format::Csv => {
            writeln!(out, "a,b,c,value")?;
            writeln!(out, "{},{},{},{shown}", spec.exp.a, spec.exp.b, spec.exp.c)?;
            for note in &notes {
                eprintln!("note: {note}");
            }
        }
        Format::Json => {
            let doc = json!({
                "target": spec.target.id(),
                "kind": spec.kind.as_str(),
                "z": key.z,
                "class": class.degrees(),
                "exp": exp_json(spec.exp),
                "value": shown,
                "stratum": expected,
                "on_stratum": total == expected,
                "notes": notes,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
    }
    Ok(out)
}

pub struct TableSpec {
    pub target: Target,
    pub kind: PotentialKind,
    pub class: String,
    pub z: Option<u32>,
    pub cap: Option<u32>,
    pub a: Option<u32>,
    pub b: Option<u32>,
    pub c: Option<u32>,
}

/// Nonzero numbers of one (kind, class), ordered by `c` and then by
/// decreasing `a`.
pub fn table(cache_dir: &Path, spec: &TableSpec, format: Format) -> Result<String> {
    let class = CurveClass::parse(spec.target, &spec.class)?;
    let expected = expected_conditions(spec.kind, class)?;
    let (p, key) = obtain(cache_dir, spec.target, spec.kind, class, spec.z, spec.cap)?;
    let keep = |want: Option<u32>, got: u32| want.is_none_or(|w| w == got);
    let mut rows: Vec<(ExponentTuple, Rational)> = p
        .slice(class)
        .into_iter()
        .flatten()
        .map(|(exp, _)| *exp)
        .filter(|exp| keep(spec.a, exp.a) && keep(spec.b, exp.b) && keep(spec.c, exp.c))
        .map(|exp| Ok((exp, p.coefficient(class, exp)?)))
        .collect::<Result<_>>()?;
    rows.sort_by_key(|(exp, _)| (exp.c, std::cmp::Reverse(exp.a)));
    let notes = notes(spec.target, key, class, expected);

    let mut out = String::new();
    match format {
        Format::Csv => {
            writeln!(out, "a,b,c,value")?;
            for (exp, value) in &rows {
                writeln!(
                    out,
                    "{},{},{},{}",
                    exp.a,
                    exp.b,
                    exp.c,
                    display_exact(value)
                )?;
            }
            for note in &notes {
                eprintln!("note: {note}");
            }
        }
        Format::Table => {
            writeln!(out, "{:>4} {:>4} {:>4}  value", "a", "b", "c")?;
            for (exp, value) in &rows {
                writeln!(
                    out,
                    "{:>4} {:>4} {:>4}  {}",
                    exp.a,
                    exp.b,
                    exp.c,
                    display_exact(value)
                )?;
            }
            for note in &notes {
                writeln!(out, "# {note}")?;
            }
        }
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|(exp, value)| json!({"a": exp.a, "b": exp.b, "c": exp.c, "value": display_exact(value)}))
                .collect();
            let doc = json!({
                "target": spec.target.id(),
                "kind": spec.kind.as_str(),
                "z": key.z,
                "class": class.degrees(),
                "stratum": expected,
                "rows": rows,
                "notes": notes,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
    }
    Ok(out)
}

/// Checks every cached file for this target and cap, then runs the identity
/// suite on the intact ones (building whatever is missing).
pub fn verify(cache_dir: &Path, target: Target, cap: u32) -> Result<(String, bool)> {
    if cap == 0 {
        bail!("cap must be at least 1");
    }
    let mut outcomes = Vec::new();
    let mut wb = Workbench::new(target, cap);
    let mut damaged = Vec::new();
    match Cache::open(cache_dir) {
        Err(e) => damaged.push(format!("{e:#}")),
        Ok(cache) => {
            for entry in cache.entries() {
                if entry.target != target.id() || entry.cap != cap {
                    continue;
                }
                match cache.load_entry(entry) {
                    Lookup::Hit(p) => wb.preload(entry.z, p).context("preloading cache")?,
                    Lookup::Corrupt(why) => damaged.push(why),
                    Lookup::Miss => {}
                }
            }
        }
    }
    outcomes.push(CheckOutcome {
        name: "cache integrity",
        status: if damaged.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        },
        detail: damaged.join("; "),
    });
    outcomes.extend(run_all(&mut wb));

    let mut out = String::new();
    for outcome in &outcomes {
        writeln!(out, "{outcome}")?;
    }
    let failed: Vec<_> = outcomes
        .iter()
        .filter(|o| o.status == Status::Fail)
        .map(|o| o.name)
        .collect();
    let warned = outcomes.iter().filter(|o| o.status == Status::Warn).count();
    writeln!(
        out,
        "{} cap {cap}: {} checks, {} failed, {warned} warnings",
        target,
        outcomes.len(),
        failed.len()
    )?;
    if !failed.is_empty() {
        writeln!(out, "failing checks: {}", failed.join(", "))?;
    }
    Ok((out, all_passed(&outcomes)))
}
