//! Memoized construction of every potential for one target and cap, in
//! dependency order.

use std::collections::BTreeMap;

use crate::cusp::{cusp, irreducible_corrections, CuspSet};
use crate::enriched::{p_series, q_series, Insertion};
use crate::error::{Error, Result};
use crate::flex::flex;
use crate::hurwitz::{build_h, build_rule_covers};
use crate::series::{Potential, PotentialKind, Target};
use crate::tangency::build_g;

/// Identifies one stored potential. `z` is only used by the plane `F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Key {
    pub kind: PotentialKind,
    pub z: Option<u32>,
}

impl Key {
    pub fn new(target: Target, kind: PotentialKind, z: Option<u32>) -> Key {
        let z = match (target, kind) {
            (Target::Plane, PotentialKind::F) => Some(z.unwrap_or(1)),
            _ => None,
        };
        Key { kind, z }
    }
}

/// Kinds available on a target, in build order.
pub fn kinds_for(target: Target) -> &'static [PotentialKind] {
    use PotentialKind::*;
    match target {
        Target::Plane => &[G, P0, P1, P2, Q0, Q1, Q2, K, KL, KP, F],
        Target::Quadric => &[
            G, P0, P12, P3, Q0, Q12, Q3, K, KL, KP, H, I, J, KLirr, KPirr, F,
        ],
    }
}

/// Direct inputs of a kind.
pub fn dependencies(kind: PotentialKind) -> &'static [PotentialKind] {
    use PotentialKind::*;
    match kind {
        G | H => &[],
        I | J => &[H],
        KLirr | KPirr => &[G, K, KL, KP, I, J],
        _ => &[G],
    }
}

pub struct Workbench {
    target: Target,
    cap: u32,
    store: BTreeMap<Key, Potential>,
}

impl Workbench {
    pub fn new(target: Target, cap: u32) -> Self {
        Workbench {
            target,
            cap,
            store: BTreeMap::new(),
        }
    }

    pub fn target(&self) -> Target {
        self.target
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    fn check_kind(&self, kind: PotentialKind) -> Result<()> {
        if kinds_for(self.target).contains(&kind) {
            Ok(())
        } else {
            Err(Error::KindTargetMismatch {
                kind,
                target: self.target,
            })
        }
    }

    /// Inserts an already computed potential (e.g. read from a cache).
    pub fn preload(&mut self, z: Option<u32>, p: Potential) -> Result<()> {
        if p.target() != self.target {
            return Err(Error::TargetMismatch {
                left: self.target,
                right: p.target(),
            });
        }
        if p.cap() != self.cap {
            return Err(Error::CapMismatch {
                left: self.cap,
                right: p.cap(),
            });
        }
        self.check_kind(p.kind())?;
        self.store.insert(Key::new(self.target, p.kind(), z), p);
        Ok(())
    }

    pub fn is_built(&self, kind: PotentialKind, z: Option<u32>) -> bool {
        self.store.contains_key(&Key::new(self.target, kind, z))
    }

    pub fn get(&mut self, kind: PotentialKind, z: Option<u32>) -> Result<&Potential> {
        let key = Key::new(self.target, kind, z);
        self.ensure(key)?;
        Ok(&self.store[&key])
    }

    /// Builds (if needed) and returns a clone, for callers holding other
    /// borrows.
    pub fn fetch(&mut self, kind: PotentialKind, z: Option<u32>) -> Result<Potential> {
        self.get(kind, z).cloned()
    }

    pub fn built(&self) -> impl Iterator<Item = (&Key, &Potential)> {
        self.store.iter()
    }

    fn ensure(&mut self, key: Key) -> Result<()> {
        if self.store.contains_key(&key) {
            return Ok(());
        }
        self.check_kind(key.kind)?;
        for dep in dependencies(key.kind) {
            self.ensure(Key::new(self.target, *dep, None))?;
        }
        use PotentialKind::*;
        let g_key = Key::new(self.target, G, None);
        match key.kind {
            G => {
                let g = build_g(self.target, self.cap)?;
                self.store.insert(key, g);
            }
            H => {
                let h = build_h(self.cap)?;
                self.store.insert(key, h);
            }
            P0 | P1 | P2 | P12 | P3 => {
                let which = insertion_of(key.kind);
                let p = p_series(&self.store[&g_key], which)?;
                self.store.insert(key, p);
            }
            Q0 | Q1 | Q2 | Q12 | Q3 => {
                let which = insertion_of(key.kind);
                let q = q_series(&self.store[&g_key], which)?;
                self.store.insert(key, q);
            }
            K | KL | KP => {
                let set = cusp(&self.store[&g_key])?;
                for p in [set.k, set.kl, set.kp] {
                    self.store
                        .entry(Key::new(self.target, p.kind(), None))
                        .or_insert(p);
                }
            }
            I | J => {
                let (i, j) = build_rule_covers(&self.store[&Key::new(self.target, H, None)])?;
                for p in [i, j] {
                    self.store
                        .entry(Key::new(self.target, p.kind(), None))
                        .or_insert(p);
                }
            }
            KLirr | KPirr => {
                let get = |k| &self.store[&Key::new(self.target, k, None)];
                let set = CuspSet {
                    kp: get(KP).clone(),
                    kl: get(KL).clone(),
                    k: get(K).clone(),
                };
                let irr = irreducible_corrections(&set, get(I), get(J), get(G))?;
                for p in [irr.kl_irr, irr.kp_irr] {
                    self.store
                        .entry(Key::new(self.target, p.kind(), None))
                        .or_insert(p);
                }
            }
            F => {
                let f = flex(&self.store[&g_key], key.z.unwrap_or(1))?;
                self.store.insert(key, f);
            }
            Scratch => return Err(Error::NoStratum(Scratch)),
        }
        Ok(())
    }
}

fn insertion_of(kind: PotentialKind) -> Insertion {
    use PotentialKind::*;
    match kind {
        P0 | Q0 => Insertion::Fundamental,
        P1 | Q1 | P12 | Q12 => Insertion::Divisor,
        _ => Insertion::Point,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dependency_closure() {
        let mut wb = Workbench::new(Target::Quadric, 3);
        wb.get(PotentialKind::KPirr, None).unwrap();
        for kind in [
            PotentialKind::G,
            PotentialKind::H,
            PotentialKind::I,
            PotentialKind::KL,
        ] {
            assert!(wb.is_built(kind, None), "{kind:?}");
        }
        assert!(!wb.is_built(PotentialKind::F, None));
    }

    #[test]
    fn kinds_checked_against_target() {
        let mut wb = Workbench::new(Target::Plane, 2);
        assert!(wb.get(PotentialKind::H, None).is_err());
        assert!(wb.get(PotentialKind::P12, None).is_err());
    }

    #[test]
    fn flex_keys_carry_z_on_plane_only() {
        assert_eq!(Key::new(Target::Plane, PotentialKind::F, None).z, Some(1));
        assert_eq!(Key::new(Target::Quadric, PotentialKind::F, Some(3)).z, None);
        assert_eq!(Key::new(Target::Plane, PotentialKind::G, Some(3)).z, None);
    }

    #[test]
    fn preload_is_used() {
        let g = build_g(Target::Plane, 2).unwrap();
        let mut wb = Workbench::new(Target::Plane, 2);
        wb.preload(None, g.clone()).unwrap();
        assert!(wb.get(PotentialKind::G, None).unwrap().same_cells(&g));
        assert!(wb
            .preload(None, build_g(Target::Plane, 3).unwrap())
            .is_err());
    }
}
