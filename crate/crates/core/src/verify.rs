//! Internal identities of the potentials, run as named checks.
//!
//! Every check reads the potentials held by a [`Workbench`], so data loaded
//! from a cache is checked as-is against relations recomputed from it.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::cusp::{cusp, cusp_from_enriched, irreducible_corrections, kinc_closed_form, CuspSet};
use crate::enriched::{p_series, p_series_from_metric, q_series, EnrichedSet, Insertion};
use crate::error::Result;
use crate::flex::{flex_plane_assembly, flex_quadric_assembly, quadratic_in_z};
use crate::hurwitz::{build_h, build_rule_covers, check_hurwitz_support};
use crate::series::{rat, ratio, CurveClass, ExponentTuple, Potential, PotentialKind, Target};
use crate::tangency::{incidence, trr_residual};
use crate::targets::check_admissible;
use crate::workbench::{kinds_for, Workbench};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Warn,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Warn => "WARN",
            Status::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.detail.is_empty() {
            write!(f, "{} {}", self.status, self.name)
        } else {
            write!(f, "{} {}: {}", self.status, self.name, self.detail)
        }
    }
}

/// Flex degrees exercised on the plane.
pub const FLEX_DEGREES: [u32; 3] = [1, 2, 3];

type Probe = Result<Option<String>>;

struct Report {
    outcomes: Vec<CheckOutcome>,
}

impl Report {
    /// `Ok(None)` passes; `Ok(Some(why))` and errors fail with `failure`,
    /// or only warn when `failure` is `Warn`.
    fn record(&mut self, name: &'static str, failure: Status, probe: Probe) {
        let (status, detail) = match probe {
            Ok(None) => (Status::Pass, String::new()),
            Ok(Some(why)) => (failure, why),
            Err(e) => (Status::Fail, e.to_string()),
        };
        self.outcomes.push(CheckOutcome {
            name,
            status,
            detail,
        });
    }
}

fn differs(left: &Potential, right: &Potential, what: &str) -> Option<String> {
    (!left.same_cells(right)).then(|| format!("{what} differ"))
}

fn first_some(items: impl IntoIterator<Item = Option<String>>) -> Option<String> {
    items.into_iter().flatten().next()
}

/// First cell whose enumerative value fails `ok`.
fn scan<F>(p: &Potential, classes: impl Fn(CurveClass) -> bool, ok: F, what: &str) -> Option<String>
where
    F: Fn(&crate::series::Rational) -> bool,
{
    for (class, exp, _) in p.cells() {
        if !classes(class) {
            continue;
        }
        let value = p.coefficient(class, exp).expect("class within cap");
        if !ok(&value) {
            return Some(format!(
                "{} at class {} exp ({},{},{}) is {} ({what})",
                p.kind().as_str(),
                fmt_class(class),
                exp.a,
                exp.b,
                exp.c,
                value
            ));
        }
    }
    None
}

fn fmt_class(class: CurveClass) -> String {
    class
        .degrees()
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn integral(value: &crate::series::Rational) -> bool {
    value.is_integer()
}

fn nonnegative(value: &crate::series::Rational) -> bool {
    !value.is_negative()
}

/// Builds every potential of the workbench's target (and `F` for each flex
/// degree on the plane) and runs all checks.
pub fn run_all(wb: &mut Workbench) -> Vec<CheckOutcome> {
    let mut report = Report {
        outcomes: Vec::new(),
    };
    let target = wb.target();

    let built = build_everything(wb);
    report.record("build", Status::Fail, built.map(|()| None));
    if report.outcomes[0].status == Status::Fail {
        return report.outcomes;
    }
    let fetch = |wb: &mut Workbench, kind| wb.fetch(kind, None).expect("built above");
    let g = fetch(wb, PotentialKind::G);

    report.record("strata", Status::Fail, strata(wb));
    report.record("incidence numbers", Status::Fail, incidence_agreement(&g));
    report.record(
        "trr residual",
        Status::Fail,
        Ok((!trr_residual(&g).is_zero()).then(|| "nonzero residual".into())),
    );
    report.record(
        "P0 + Q0 = 0",
        Status::Fail,
        Ok({
            let sum = fetch(wb, PotentialKind::P0) + fetch(wb, PotentialKind::Q0);
            (!sum.is_zero()).then(|| "sum has nonzero cells".into())
        }),
    );
    report.record(
        "enriched recomputation",
        Status::Fail,
        enriched_recomputation(wb, &g),
    );
    report.record("enriched metric route", Status::Fail, metric_route(wb, &g));

    let enriched = EnrichedSet::build(&g);
    report.record(
        "cusp routes",
        Status::Fail,
        cusp_routes(wb, &g, enriched.as_ref().ok()),
    );

    match target {
        Target::Plane => plane_checks(wb, &g, enriched.ok(), &mut report),
        Target::Quadric => quadric_checks(wb, &g, enriched.ok(), &mut report),
    }
    report.outcomes
}

fn build_everything(wb: &mut Workbench) -> Result<()> {
    let target = wb.target();
    for kind in kinds_for(target) {
        if *kind == PotentialKind::F && target == Target::Plane {
            for z in FLEX_DEGREES {
                wb.get(*kind, Some(z))?;
            }
        } else {
            wb.get(*kind, None)?;
        }
    }
    Ok(())
}

fn strata(wb: &Workbench) -> Probe {
    for (key, p) in wb.built() {
        let admissible = if p.kind() == PotentialKind::H {
            check_hurwitz_support(p)
        } else {
            check_admissible(p)
        };
        if let Err(e) = admissible {
            return Ok(Some(format!("{:?}: {e}", key.kind)));
        }
    }
    Ok(None)
}

fn incidence_agreement(g: &Potential) -> Probe {
    let table = incidence(g.target(), g.cap())?;
    let per_degree = match g.target() {
        Target::Plane => 3,
        Target::Quadric => 2,
    };
    for (class, n) in table {
        let exp = ExponentTuple::new(per_degree * class.total_degree() - 1, 0, 0);
        let got = g.coefficient(class, exp)?;
        if got != crate::series::Rational::from_integer(n.clone()) {
            return Ok(Some(format!(
                "G at class {} is {got}, expected {n}",
                fmt_class(class)
            )));
        }
    }
    Ok(None)
}

fn enriched_recomputation(wb: &mut Workbench, g: &Potential) -> Probe {
    let mut problems = Vec::new();
    for which in [Insertion::Fundamental, Insertion::Divisor, Insertion::Point] {
        let p_kind = which.p_kind(g.target());
        let q_kind = which.q_kind(g.target());
        problems.push(differs(
            &wb.fetch(p_kind, None)?,
            &p_series(g, which)?,
            p_kind.as_str(),
        ));
        problems.push(differs(
            &wb.fetch(q_kind, None)?,
            &q_series(g, which)?,
            q_kind.as_str(),
        ));
    }
    Ok(first_some(problems))
}

fn metric_route(wb: &mut Workbench, g: &Potential) -> Probe {
    let mut problems = Vec::new();
    for which in [Insertion::Divisor, Insertion::Point] {
        let kind = which.p_kind(g.target());
        let from_metric = p_series_from_metric(g, which)?.ds().ds();
        problems.push(differs(&from_metric, &wb.fetch(kind, None)?, kind.as_str()));
    }
    Ok(first_some(problems))
}

fn cusp_routes(wb: &mut Workbench, g: &Potential, enriched: Option<&EnrichedSet>) -> Probe {
    let Some(enriched) = enriched else {
        return Ok(Some("enriched series unavailable".into()));
    };
    let direct = cusp(g)?;
    let via = cusp_from_enriched(g, enriched)?;
    let stored = [
        wb.fetch(PotentialKind::K, None)?,
        wb.fetch(PotentialKind::KL, None)?,
        wb.fetch(PotentialKind::KP, None)?,
    ];
    Ok(first_some([
        differs(&direct.k, &via.k, "K routes"),
        differs(&direct.kl, &via.kl, "KL routes"),
        differs(&direct.kp, &via.kp, "KP routes"),
        differs(&stored[0], &direct.k, "stored and recomputed K"),
        differs(&stored[1], &direct.kl, "stored and recomputed KL"),
        differs(&stored[2], &direct.kp, "stored and recomputed KP"),
    ]))
}

fn plane_checks(
    wb: &mut Workbench,
    g: &Potential,
    enriched: Option<EnrichedSet>,
    report: &mut Report,
) {
    let fetch = |wb: &mut Workbench, kind| wb.fetch(kind, None).expect("built");
    let k = fetch(wb, PotentialKind::K);
    let kl = fetch(wb, PotentialKind::KL);
    let kp = fetch(wb, PotentialKind::KP);

    // K_s ≡ 3(G_us − G_u + ½G_ss²) − ∂s(G_s²) modulo (v, w)
    let incidence_only = |p: Potential| p.restrict_cells(|exp| exp.b == 0 && exp.c == 0);
    let (gs, gu) = (g.ds(), g.du());
    let rhs = (gu.ds() - gu.clone() + (&gs.ds() * &gs.ds()).scale(&ratio(1, 2))).scale(&rat(3))
        - (&gs * &gs).ds();
    report.record(
        "incidence-only cusp relation",
        Status::Fail,
        Ok(differs(
            &incidence_only(k.ds()),
            &incidence_only(rhs),
            "K_s and incidence-only side",
        )),
    );

    // the conic slices count marked double covers with automorphisms
    let from_cubics = |c: CurveClass| c.total_degree() >= 3;
    report.record(
        "cusp integrality",
        Status::Fail,
        Ok(first_some([
            scan(&k, from_cubics, integral, "not an integer"),
            scan(&kl, from_cubics, integral, "not an integer"),
            scan(&kp, from_cubics, integral, "not an integer"),
        ])),
    );
    report.record(
        "cusp nonnegativity",
        Status::Fail,
        Ok(first_some([
            scan(&k, from_cubics, nonnegative, "negative"),
            scan(&kl, from_cubics, nonnegative, "negative"),
        ])),
    );

    let flexes: Vec<Potential> = FLEX_DEGREES
        .iter()
        .map(|z| wb.fetch(PotentialKind::F, Some(*z)).expect("built"))
        .collect();
    report.record(
        "flex z-interpolation",
        Status::Fail,
        Ok((!quadratic_in_z(&flexes[0], &flexes[1], &flexes[2]))
            .then(|| "not quadratic in z".into())),
    );
    report.record(
        "flex assembly route",
        Status::Fail,
        match &enriched {
            None => Ok(Some("enriched series unavailable".into())),
            Some(enriched) => (|| {
                let mut problems = Vec::new();
                for (z, f) in FLEX_DEGREES.iter().zip(&flexes) {
                    problems.push(differs(
                        f,
                        &flex_plane_assembly(g, enriched, *z)?,
                        "F routes",
                    ));
                }
                Ok(first_some(problems))
            })(),
        },
    );
    report.record(
        "flex vanishing",
        Status::Fail,
        Ok(flexes[0]
            .slice(CurveClass::Plane(2))
            .map(|_| "F1 has nonzero conic cells".into())),
    );
    let from_conics = |c: CurveClass| c.total_degree() >= 2;
    report.record(
        "flex integrality",
        Status::Fail,
        Ok(first_some(
            flexes
                .iter()
                .map(|f| scan(f, from_conics, integral, "not an integer")),
        )),
    );
    report.record(
        "flex nonnegativity",
        Status::Warn,
        Ok(first_some(
            flexes
                .iter()
                .map(|f| scan(f, from_conics, nonnegative, "negative")),
        )),
    );
}

fn quadric_checks(
    wb: &mut Workbench,
    g: &Potential,
    enriched: Option<EnrichedSet>,
    report: &mut Report,
) {
    let fetch = |wb: &mut Workbench, kind| wb.fetch(kind, None).expect("built");
    let k = fetch(wb, PotentialKind::K);
    let kl_irr = fetch(wb, PotentialKind::KLirr);
    let kp_irr = fetch(wb, PotentialKind::KPirr);
    let f = fetch(wb, PotentialKind::F);
    let h = fetch(wb, PotentialKind::H);
    let i = fetch(wb, PotentialKind::I);
    let j = fetch(wb, PotentialKind::J);

    report.record(
        "kinc agreement",
        Status::Fail,
        (|| {
            let table = incidence(Target::Quadric, g.cap())?;
            for class in CurveClass::all_up_to(Target::Quadric, g.cap()) {
                let exp = ExponentTuple::new(2 * class.total_degree() - 2, 0, 0);
                let closed = kinc_closed_form(&table, class)?;
                let got = k.coefficient(class, exp)?;
                if closed != got {
                    return Ok(Some(format!(
                        "class {}: K gives {got}, closed form {closed}",
                        fmt_class(class)
                    )));
                }
            }
            Ok(None)
        })(),
    );

    report.record(
        "swap symmetry",
        Status::Fail,
        Ok(first_some(
            [g, &k, &kp_irr, &kl_irr, &f]
                .into_iter()
                .map(|p| differs(&p.swap(), p, p.kind().as_str())),
        )),
    );
    report.record(
        "hurwitz support",
        Status::Fail,
        check_hurwitz_support(&h).map(|()| None),
    );
    report.record(
        "I_wu = 0",
        Status::Fail,
        Ok((!i.dw().du().is_zero()).then(|| "I_wu has nonzero cells".into())),
    );
    report.record(
        "rule cover recomputation",
        Status::Fail,
        (|| {
            let fresh_h = build_h(g.cap())?;
            let (fresh_i, fresh_j) = build_rule_covers(&h)?;
            let set = CuspSet {
                kp: fetch(wb, PotentialKind::KP),
                kl: fetch(wb, PotentialKind::KL),
                k: k.clone(),
            };
            let irr = irreducible_corrections(&set, &i, &j, g)?;
            Ok(first_some([
                differs(&h, &fresh_h, "stored and recomputed H"),
                differs(&i, &fresh_i, "stored and recomputed I"),
                differs(&j, &fresh_j, "stored and recomputed J"),
                differs(&kl_irr, &irr.kl_irr, "stored and recomputed KLirr"),
                differs(&kp_irr, &irr.kp_irr, "stored and recomputed KPirr"),
            ]))
        })(),
    );
    report.record(
        "J = swap(I)",
        Status::Fail,
        Ok(differs(&j.swap(), &i, "J and I")),
    );
    report.record(
        "flex assembly route",
        Status::Fail,
        match &enriched {
            None => Ok(Some("enriched series unavailable".into())),
            Some(enriched) => {
                flex_quadric_assembly(g, enriched).map(|a| differs(&f, &a, "F routes"))
            }
        },
    );
    report.record(
        "flex vanishing",
        Status::Fail,
        Ok(f.slice(CurveClass::Quadric(1, 1))
            .map(|_| "F has nonzero (1,1) cells".into())),
    );
    let from_conics = |c: CurveClass| c.total_degree() >= 2;
    report.record(
        "flex integrality",
        Status::Fail,
        Ok(scan(&f, from_conics, integral, "not an integer")),
    );
    report.record(
        "flex nonnegativity",
        Status::Warn,
        Ok(scan(&f, from_conics, nonnegative, "negative")),
    );
    // classes (m,0) and (0,n) carry only multiple covers of a rule
    let mixed = |c: CurveClass| matches!(c, CurveClass::Quadric(m, n) if m > 0 && n > 0);
    // bi-degrees (m,1) and (1,n) have arithmetic genus 0, so no cusps
    let genus_zero = |c: CurveClass| matches!(c, CurveClass::Quadric(m, n) if m.min(n) == 1);
    let vanishes = |value: &crate::series::Rational| value.is_zero();
    report.record(
        "genus-zero classes cusp free",
        Status::Warn,
        Ok(first_some([
            scan(&k, genus_zero, vanishes, "nonzero"),
            scan(&kl_irr, genus_zero, vanishes, "nonzero"),
            scan(&kp_irr, genus_zero, vanishes, "nonzero"),
        ])),
    );
    report.record(
        "irreducible cusp integrality",
        Status::Warn,
        Ok(first_some([
            scan(&kl_irr, mixed, integral, "not an integer"),
            scan(&kp_irr, mixed, integral, "not an integer"),
        ])),
    );
    report.record(
        "irreducible cusp nonnegativity",
        Status::Warn,
        Ok(first_some([
            scan(&k, mixed, nonnegative, "negative"),
            scan(&kl_irr, mixed, nonnegative, "negative"),
            scan(&kp_irr, mixed, nonnegative, "negative"),
        ])),
    );
}

pub fn all_passed(outcomes: &[CheckOutcome]) -> bool {
    outcomes.iter().all(|o| o.status != Status::Fail)
}
