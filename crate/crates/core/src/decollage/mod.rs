//! Presheaves on `sd(P)^op` valued in simplicial sets: the nerve `N_P`, its
//! left adjoint `L_P`, Segal maps and the rigidity checks.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::poset::{all_strings, ElemId, PString, Poset, PosetError};
use crate::simplicial::{standard_simplex, Budget, CellId, SimplicialError, SimplicialMap, SimplicialSet};
use crate::stratified::{rel_mapping, RelMapping, StratError, StratSSet};

mod lkan;
mod rigidity;
mod segal;

pub use lkan::{adjunction_check, counit, lkan, unit_component, AdjunctionReport, Lkan, LkanStrategy, TriangleCount, UnitComponent};
pub use rigidity::{base_change_iso, crown_counterexample, mono_pushforward_check, BaseChange, MonoReport, SetDiagram};
pub use segal::{fiber_product, is_decollage, segal_map, FiberProduct};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecollageError {
    #[error("expected {expected} values, got {got}")]
    ValueCount { expected: usize, got: usize },
    #[error("missing restriction {outer} -> {inner}")]
    MissingRestriction { outer: String, inner: String },
    #[error("restriction {outer} -> {inner}: {why}")]
    BadRestriction { outer: String, inner: String, why: String },
    #[error("not functorial along {0}")]
    NotFunctorial(String),
    #[error("`{0}` is not a string of the base")]
    UnknownString(String),
    #[error("base change is not an isomorphism: {0}")]
    NotIso(String),
    #[error("set diagram: {0}")]
    SetDiagram(String),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
    #[error(transparent)]
    Strat(#[from] StratError),
}

/// A functor `sd(P)^op → sSet`, stored on all strings with every
/// restriction along a containment.
#[derive(Clone, Debug)]
pub struct Presheaf {
    base: Arc<Poset>,
    strings: Vec<PString>,
    index: HashMap<PString, usize>,
    values: Vec<Arc<SimplicialSet>>,
    restrictions: HashMap<(usize, usize), SimplicialMap>,
}

/// `Δ^n` maps given on vertices.
pub(crate) fn simplex_map(src: &Arc<SimplicialSet>, tgt: &Arc<SimplicialSet>, f: impl Fn(usize) -> usize) -> SimplicialMap {
    let top = CellId::new(tgt.max_dim(), 0);
    let images = (0..=src.trunc_dim())
        .map(|d| {
            src.cells_of_dim(d)
                .map(|c| {
                    let v: Vec<u8> = src.vertices_of(&crate::simplicial::Simplex::nondeg(c)).into_iter().map(|v| f(v) as u8).collect();
                    tgt.restrict(top, &v)
                })
                .collect()
        })
        .collect();
    SimplicialMap::new_unchecked(src.clone(), tgt.clone(), images)
}

/// The inclusion `Σ' ↪ Σ` of standard simplices.
pub(crate) fn string_inclusion(inner: &PString, outer: &PString, src: &Arc<SimplicialSet>, tgt: &Arc<SimplicialSet>) -> SimplicialMap {
    simplex_map(src, tgt, |j| outer.position(inner.elems()[j]).expect("inner string is contained in outer"))
}

impl Presheaf {
    /// Values in `all_strings` order. `given` must contain every
    /// restriction dropping one element; longer restrictions are composed
    /// and any extra ones supplied are checked against the composite.
    pub fn new(
        base: Arc<Poset>,
        values: Vec<Arc<SimplicialSet>>,
        given: HashMap<(usize, usize), SimplicialMap>,
    ) -> Result<Self, DecollageError> {
        let strings = all_strings(&base);
        if values.len() != strings.len() {
            return Err(DecollageError::ValueCount { expected: strings.len(), got: values.len() });
        }
        let index = strings.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let mut f = Presheaf { base, strings, index, values, restrictions: HashMap::new() };
        for (&(o, i), m) in &given {
            let (so, si) = (f.display(o), f.display(i));
            let bad = |why: String| DecollageError::BadRestriction { outer: so.clone(), inner: si.clone(), why };
            if o >= f.strings.len() || i >= f.strings.len() || o == i || !f.strings[i].is_subset(&f.strings[o]) {
                return Err(bad("not a strict containment".into()));
            }
            if m.source().as_ref() != f.values[o].as_ref() || m.target().as_ref() != f.values[i].as_ref() {
                return Err(bad("source or target is not the value".into()));
            }
            m.validate().map_err(|e| bad(e.to_string()))?;
        }
        let mut pairs: Vec<(usize, usize)> = (0..f.strings.len())
            .flat_map(|o| (0..f.strings.len()).map(move |i| (o, i)))
            .filter(|&(o, i)| o != i && f.strings[i].is_subset(&f.strings[o]))
            .collect();
        pairs.sort_by_key(|&(o, i)| f.strings[o].len() - f.strings[i].len());
        for (o, i) in pairs {
            let gap = f.strings[o].len() - f.strings[i].len();
            if gap == 1 {
                let m = given.get(&(o, i)).ok_or_else(|| DecollageError::MissingRestriction {
                    outer: f.display(o),
                    inner: f.display(i),
                })?;
                f.restrictions.insert((o, i), m.clone().with_source(f.values[o].clone()).with_target(f.values[i].clone()));
                continue;
            }
            let drop = *f.strings[o].elems().iter().find(|e| !f.strings[i].contains(**e)).expect("strict containment");
            let mid_elems: Vec<ElemId> = f.strings[o].elems().iter().copied().filter(|&e| e != drop).collect();
            let mid = f.index[&PString::new(&f.base, &mid_elems)?];
            let m = f.restrictions[&(o, mid)].then(&f.restrictions[&(mid, i)])?;
            f.restrictions.insert((o, i), m);
        }
        for (&(o, i), m) in &given {
            if !f.restrictions[&(o, i)].agrees_with(m) {
                return Err(DecollageError::NotFunctorial(format!("{} -> {}", f.display(o), f.display(i))));
            }
        }
        f.check_functorial()?;
        Ok(f)
    }

    fn check_functorial(&self) -> Result<(), DecollageError> {
        for (&(o, i), r) in &self.restrictions {
            for (&(o2, m), r1) in &self.restrictions {
                if o2 != o || m == i || !self.strings[i].is_subset(&self.strings[m]) {
                    continue;
                }
                if !r1.then(&self.restrictions[&(m, i)])?.agrees_with(r) {
                    return Err(DecollageError::NotFunctorial(format!(
                        "{} -> {} -> {}",
                        self.display(o),
                        self.display(m),
                        self.display(i)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Values `Δ^0` on strings accepted by `nonempty` and `∅` elsewhere.
    /// The accepted strings must be closed under substrings.
    pub fn pointlike(base: Arc<Poset>, nonempty: impl Fn(&PString) -> bool) -> Result<Self, DecollageError> {
        let pt = Arc::new(standard_simplex(0));
        let empty = Arc::new(SimplicialSet::empty());
        let strings = all_strings(&base);
        let values: Vec<Arc<SimplicialSet>> =
            strings.iter().map(|s| if nonempty(s) { pt.clone() } else { empty.clone() }).collect();
        let mut given = HashMap::new();
        for (o, so) in strings.iter().enumerate() {
            for (i, si) in strings.iter().enumerate() {
                if si.len() + 1 != so.len() || !si.is_subset(so) {
                    continue;
                }
                let m = match (values[o].is_empty(), values[i].is_empty()) {
                    (true, _) => SimplicialMap::new(empty.clone(), values[i].clone(), vec![Vec::new()])?,
                    (false, false) => SimplicialMap::identity(pt.clone()),
                    (false, true) => {
                        return Err(DecollageError::BadRestriction {
                            outer: so.display(&base),
                            inner: si.display(&base),
                            why: "a nonempty value restricts to the empty set".into(),
                        })
                    }
                };
                given.insert((o, i), m);
            }
        }
        Presheaf::new(base, values, given)
    }

    /// The representable presheaf at `t`: a point on substrings of `t`.
    pub fn representable(base: Arc<Poset>, t: &PString) -> Result<Self, DecollageError> {
        Presheaf::pointlike(base, |s| s.is_subset(t))
    }

    /// Constant at `k` with identity restrictions.
    pub fn constant(base: Arc<Poset>, k: Arc<SimplicialSet>) -> Result<Self, DecollageError> {
        let strings = all_strings(&base);
        let values = vec![k.clone(); strings.len()];
        let mut given = HashMap::new();
        for (o, so) in strings.iter().enumerate() {
            for (i, si) in strings.iter().enumerate() {
                if si.len() + 1 == so.len() && si.is_subset(so) {
                    given.insert((o, i), SimplicialMap::identity(k.clone()));
                }
            }
        }
        Presheaf::new(base, values, given)
    }

    pub fn base(&self) -> &Arc<Poset> {
        &self.base
    }

    /// All strings, in `all_strings` order.
    pub fn strings(&self) -> &[PString] {
        &self.strings
    }

    pub fn index_of(&self, s: &PString) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn parse_string(&self, text: &str) -> Result<usize, DecollageError> {
        let s = PString::parse(&self.base, text)?;
        self.index_of(&s).ok_or_else(|| DecollageError::UnknownString(text.to_string()))
    }

    pub fn value(&self, i: usize) -> &Arc<SimplicialSet> {
        &self.values[i]
    }

    pub fn values(&self) -> &[Arc<SimplicialSet>] {
        &self.values
    }

    pub fn display(&self, i: usize) -> String {
        self.strings[i].display(&self.base)
    }

    /// Restriction from `outer` to `inner`, `None` unless `inner ⊆ outer`.
    pub fn restriction(&self, outer: usize, inner: usize) -> Option<SimplicialMap> {
        if outer == inner {
            return Some(SimplicialMap::identity(self.values[outer].clone()));
        }
        self.restrictions.get(&(outer, inner)).cloned()
    }

    /// Pairs `(outer, inner)` with `inner ⊊ outer`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = self.restrictions.keys().copied().collect();
        v.sort();
        v
    }

    /// The restriction to `sd(Σ)^op`, over the full subposet on `Σ`.
    pub fn restrict_to(&self, sigma: &PString) -> Result<Presheaf, DecollageError> {
        let sub = Arc::new(self.base.full_subposet(sigma.elems()));
        let lift = |s: &PString| -> Result<usize, DecollageError> {
            let ids = s.elems().iter().map(|&e| self.base.id(sub.name(e))).collect::<Result<Vec<_>, _>>()?;
            Ok(self.index[&PString::new(&self.base, &ids)?])
        };
        let strings = all_strings(&sub);
        let up = strings.iter().map(lift).collect::<Result<Vec<_>, _>>()?;
        let values = up.iter().map(|&j| self.values[j].clone()).collect();
        let mut given = HashMap::new();
        for (o, so) in strings.iter().enumerate() {
            for (i, si) in strings.iter().enumerate() {
                if si.len() + 1 == so.len() && si.is_subset(so) {
                    given.insert((o, i), self.restrictions[&(up[o], up[i])].clone());
                }
            }
        }
        Presheaf::new(sub, values, given)
    }

    /// Whether every restriction is injective.
    pub fn non_monos(&self) -> Vec<(usize, usize)> {
        self.strict_pairs().into_iter().filter(|p| !self.restrictions[p].is_injective()).collect()
    }
}

/// `N_P(X)` together with the mapping spaces behind each value.
pub struct NervePresheaf {
    pub presheaf: Presheaf,
    pub mappings: Vec<RelMapping>,
}

/// `Σ ↦ Map_{/P}(Σ, X)` up to `max_dim`, restrictions by precomposition.
pub fn nerve_presheaf(x: &StratSSet, max_dim: usize, budget: Budget) -> Result<NervePresheaf, DecollageError> {
    let base = x.base().clone();
    let strings = all_strings(&base);
    let mappings = strings
        .iter()
        .map(|s| rel_mapping(&StratSSet::string(base.clone(), s), x, max_dim, budget))
        .collect::<Result<Vec<_>, _>>()?;
    let mut given = HashMap::new();
    for (o, so) in strings.iter().enumerate() {
        for (i, si) in strings.iter().enumerate() {
            if si.len() + 1 == so.len() && si.is_subset(so) {
                let g = string_inclusion(si, so, &mappings[i].k.a, &mappings[o].k.a);
                given.insert((o, i), mappings[o].precompose(&mappings[i], &g)?);
            }
        }
    }
    let values = mappings.iter().map(|m| m.hom.sset.clone()).collect();
    let presheaf = Presheaf::new(base, values, given)?;
    Ok(NervePresheaf { presheaf, mappings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::iso_check;

    fn chain(n: usize) -> Arc<Poset> {
        Arc::new(Poset::chain(n))
    }

    #[test]
    fn representable_values() {
        let p = chain(2);
        let t = PString::new(&p, &[0, 2]).unwrap();
        let f = Presheaf::representable(p.clone(), &t).unwrap();
        let nonempty: Vec<String> =
            (0..f.strings().len()).filter(|&i| !f.value(i).is_empty()).map(|i| f.display(i)).collect();
        assert_eq!(nonempty, vec!["{0}", "{2}", "{0<2}"]);
    }

    #[test]
    fn missing_or_inconsistent_restrictions() {
        let p = chain(1);
        let pt = Arc::new(standard_simplex(0));
        let err = Presheaf::new(p.clone(), vec![pt.clone(); 3], HashMap::new()).unwrap_err();
        assert!(matches!(err, DecollageError::MissingRestriction { .. }));
        let d1 = Arc::new(standard_simplex(1));
        let mut given = HashMap::new();
        let top = 2;
        given.insert((top, 0), SimplicialMap::to_point(d1.clone(), pt.clone()));
        given.insert((top, 1), SimplicialMap::to_point(d1.clone(), pt.clone()));
        let f = Presheaf::new(p, vec![pt.clone(), pt, d1], given).unwrap();
        assert_eq!(f.strict_pairs().len(), 2);
        assert!(!f.non_monos().is_empty());
    }

    #[test]
    fn pointlike_rejects_non_sieves() {
        let p = chain(1);
        let top = PString::new(&p, &[0, 1]).unwrap();
        assert!(Presheaf::pointlike(p, |s| *s == top).is_err());
    }

    #[test]
    fn nerve_presheaf_values() {
        let p = chain(1);
        let x = StratSSet::new(Arc::new(standard_simplex(2)), p.clone(), vec![0, 0, 1]).unwrap();
        let n = nerve_presheaf(&x, 1, Budget::default()).unwrap();
        let f = &n.presheaf;
        let s0 = f.parse_string("{0}").unwrap();
        let (x0, _) = x.stratum(0).unwrap();
        assert!(iso_check(&f.value(s0).truncate(1).into(), &Arc::new(x0.truncate(1)), Budget::default()).is_iso());
        let s01 = f.parse_string("{0<1}").unwrap();
        let l = crate::stratified::link(&x, 0, 1, 1, Budget::default()).unwrap();
        assert!(iso_check(f.value(s01), &l, Budget::default()).is_iso());
    }

    #[test]
    fn nerve_of_the_terminal_object_is_constant() {
        let p = chain(2);
        let n = nerve_presheaf(&StratSSet::terminal(p), 2, Budget::default()).unwrap();
        for v in n.presheaf.values() {
            assert_eq!(v.cell_counts()[0], 1);
            assert!(v.cell_counts()[1..].iter().all(|&c| c == 0));
        }
    }
}
