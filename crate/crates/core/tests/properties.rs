use charnum::serial::{from_json, to_json};
use charnum::series::ratio;
use charnum::{CurveClass, ExpDir, ExponentTuple, PolyVar, Potential, PotentialKind, Target};
use proptest::prelude::*;

const CAP: u32 = 3;

fn class_strategy(target: Target) -> BoxedStrategy<CurveClass> {
    match target {
        Target::Plane => (1..=CAP).prop_map(CurveClass::Plane).boxed(),
        Target::Quadric => (0..=CAP, 0..=CAP)
            .prop_filter("degree within cap", |(m, n)| (1..=CAP).contains(&(m + n)))
            .prop_map(|(m, n)| CurveClass::Quadric(m, n))
            .boxed(),
    }
}

fn potential_strategy(target: Target) -> impl Strategy<Value = Potential> {
    let cell = (
        class_strategy(target),
        0..4u32,
        0..3u32,
        0..2u32,
        -6..=6i64,
        1..=4i64,
    );
    prop::collection::vec(cell, 0..8).prop_map(move |cells| {
        Potential::from_cells(
            target,
            PotentialKind::Scratch,
            CAP,
            cells.into_iter().map(|(class, a, b, c, num, den)| {
                (class, ExponentTuple::new(a, b, c), ratio(num, den))
            }),
        )
        .expect("classes within cap")
    })
}

fn triple(target: Target) -> impl Strategy<Value = (Potential, Potential, Potential)> {
    (
        potential_strategy(target),
        potential_strategy(target),
        potential_strategy(target),
    )
}

fn any_target() -> impl Strategy<Value = Target> {
    prop_oneof![Just(Target::Plane), Just(Target::Quadric)]
}

fn normal_form(p: &Potential) -> bool {
    p.cells().all(|(_, _, v)| *v != ratio(0, 1))
        && p.classes()
            .all(|c| p.slice(c).is_some_and(|s| !s.is_empty()))
}

proptest! {
    #[test]
    fn addition_laws((f, g, h) in any_target().prop_flat_map(triple)) {
        prop_assert!((&f + &g).same_cells(&(&g + &f)));
        prop_assert!((&(&f + &g) + &h).same_cells(&(&f + &(&g + &h))));
        prop_assert!((&f - &f).is_zero());
        let zero = Potential::zero(f.target(), PotentialKind::Scratch, CAP);
        prop_assert!((&f + &zero).same_cells(&f));
    }

    #[test]
    fn multiplication_laws((f, g, h) in any_target().prop_flat_map(triple)) {
        prop_assert!((&f * &g).same_cells(&(&g * &f)));
        prop_assert!((&(&f * &g) * &h).same_cells(&(&f * &(&g * &h))));
        prop_assert!((&f * &(&g + &h)).same_cells(&(&(&f * &g) + &(&f * &h))));
    }

    #[test]
    fn polynomial_leibniz((f, g, _) in any_target().prop_flat_map(triple)) {
        for var in [PolyVar::U, PolyVar::V, PolyVar::W] {
            let lhs = (&f * &g).deriv_poly(var);
            let rhs = &(&f.deriv_poly(var) * &g) + &(&f * &g.deriv_poly(var));
            prop_assert!(lhs.same_cells(&rhs), "{:?}", var);
        }
    }

    #[test]
    fn exponential_leibniz((f, g, _) in any_target().prop_flat_map(triple)) {
        let dirs: &[ExpDir] = match f.target() {
            Target::Plane => &[ExpDir::S],
            Target::Quadric => &[ExpDir::S, ExpDir::U1, ExpDir::U2],
        };
        for dir in dirs {
            let lhs = (&f * &g).deriv_exp(*dir).unwrap();
            let rhs = &(&f.deriv_exp(*dir).unwrap() * &g) + &(&f * &g.deriv_exp(*dir).unwrap());
            prop_assert!(lhs.same_cells(&rhs), "{:?}", dir);
        }
    }

    #[test]
    fn integration_inverts_s_derivative(f in any_target().prop_flat_map(potential_strategy)) {
        prop_assert!(f.ds().integrate_exp(ExpDir::S, 1).unwrap().same_cells(&f));
        prop_assert!(f.integrate_exp(ExpDir::S, 2).unwrap().ds().ds().same_cells(&f));
    }

    #[test]
    fn sparse_normal_form((f, g, _) in any_target().prop_flat_map(triple)) {
        for p in [&f + &g, &f - &g, &f * &g, (&f - &f), f.ds(), f.du(), f.dv(), f.dw()] {
            prop_assert!(normal_form(&p));
        }
    }

    #[test]
    fn serialization_round_trip(f in any_target().prop_flat_map(potential_strategy)) {
        let text = to_json(&f);
        let back = from_json(&text).unwrap();
        prop_assert!(back.same_cells(&f));
        prop_assert_eq!(back.kind(), f.kind());
        prop_assert_eq!(to_json(&back), text);
    }

    #[test]
    fn swap_is_a_ring_involution((f, g, _) in triple(Target::Quadric)) {
        prop_assert!(f.swap().swap().same_cells(&f));
        prop_assert!((&f * &g).swap().same_cells(&(&f.swap() * &g.swap())));
        prop_assert!(f.du1().swap().same_cells(&f.swap().du2()));
    }
}
