//! Fibrant objects and fibrations over a poset.

use crate::homotopy::{horn_generators, is_kan, rlp_check, Verdict, Witness};
use crate::simplicial::Budget;

use super::horns::{generating_set, GeneratorKind};
use super::{StratMap, StratSSet};

/// Fibrancy of `X → P`: inner horns in `X` fill and every stratum is Kan.
///
/// Category-presented objects get an exact answer (the structure functor
/// must be conservative); everything else gets the bounded check.
pub fn is_fibrant(x: &StratSSet, max_dim: usize, budget: Budget) -> Verdict {
    let Some(pres) = x.presentation() else { return is_fibrant_bounded(x, max_dim, budget) };
    let category = pres.nerve.category.clone();
    if category.is_conservative_over(x.labels()) {
        return Verdict::Equivalent(Witness::Conservative { category, labels: x.labels().to_vec() });
    }
    // A non-invertible morphism inside a stratum already breaks an outer
    // 2-horn of that stratum; exhibit it.
    let base = x.base();
    for p in base.elements() {
        let Ok((s, _)) = x.stratum(p) else { continue };
        let v = is_kan(&s, 2, budget).in_context(&format!("stratum {}", base.name(p)));
        if v.is_not_equivalent() {
            return v;
        }
    }
    Verdict::unknown(
        "exact tier",
        "structure functor is not conservative but no failing 2-horn was found within the truncation",
    )
}

/// The horn-filling check up to `max_dim`, ignoring any presentation.
pub fn is_fibrant_bounded(x: &StratSSet, max_dim: usize, budget: Budget) -> Verdict {
    let (_, structure) = x.structure_map();
    let base = x.base();
    let mut parts = vec![(
        "inner horns".to_string(),
        rlp_check(
            &structure,
            &horn_generators(max_dim, |n, k| 0 < k && k < n),
            None,
            &format!("inner horns over P up to dimension {max_dim}"),
            budget,
        ),
    )];
    for p in base.elements() {
        let label = format!("stratum {}", base.name(p));
        let v = match x.stratum(p) {
            Ok((s, _)) => is_kan(&s, max_dim, budget),
            Err(e) => Verdict::unknown("stratum", e.to_string()),
        };
        parts.push((label, v));
    }
    Verdict::all(parts)
}

/// The three equivalent descriptions of a Joyal–Kan fibration between
/// fibrant objects, evaluated separately.
#[derive(Clone, Debug)]
pub struct JkReport {
    /// Source or target was not confirmed fibrant, so the conditions need
    /// not agree.
    pub advisory: bool,
    /// Lifting against every trivial horn.
    pub trivial_horns: Verdict,
    /// Inner fibration and Kan fibration on every stratum.
    pub inner_and_strata: Verdict,
    /// Inner fibration and lifting against the endpoint inclusions.
    pub inner_and_endpoints: Verdict,
}

impl JkReport {
    pub fn conditions(&self) -> [(&'static str, &Verdict); 3] {
        [
            ("trivial-horns", &self.trivial_horns),
            ("inner+strata-kan", &self.inner_and_strata),
            ("inner+endpoints", &self.inner_and_endpoints),
        ]
    }

    /// `Some(true)` if all three are definitive and agree, `Some(false)` if
    /// two definitive answers differ, `None` otherwise.
    pub fn agreement(&self) -> Option<bool> {
        let definite: Vec<bool> =
            self.conditions().iter().filter(|(_, v)| !v.is_unknown()).map(|(_, v)| v.is_equivalent()).collect();
        if definite.windows(2).any(|w| w[0] != w[1]) {
            Some(false)
        } else if definite.len() == 3 {
            Some(true)
        } else {
            None
        }
    }
}

/// Evaluates the three fibration conditions for `f` up to `max_dim`.
pub fn is_jk_fibration(f: &StratMap, max_dim: usize, budget: Budget) -> JkReport {
    let base = f.source().base().clone();
    let fibrant = |x: &StratSSet| is_fibrant(x, max_dim, budget).is_equivalent();
    let advisory = !(fibrant(f.source()) && fibrant(f.target()));
    let labels = f.target().labels();
    let trivial_horns = rlp_check(
        f.map(),
        &generating_set(&base, GeneratorKind::J, max_dim).lifting_generators(),
        Some(labels),
        &format!("trivial horns up to dimension {max_dim}"),
        budget,
    );
    let inner = || {
        rlp_check(
            f.map(),
            &horn_generators(max_dim, |n, k| 0 < k && k < n),
            None,
            &format!("inner horns up to dimension {max_dim}"),
            budget,
        )
    };
    let mut strata = vec![("inner".to_string(), inner())];
    for p in base.elements() {
        let v = match f.stratum_map(p) {
            Ok(m) => rlp_check(&m, &horn_generators(max_dim, |_, _| true), None, "Kan fibration", budget),
            Err(e) => Verdict::unknown("stratum", e.to_string()),
        };
        strata.push((format!("stratum {}", base.name(p)), v));
    }
    let endpoints = rlp_check(
        f.map(),
        &generating_set(&base, GeneratorKind::E, 1).lifting_generators(),
        Some(labels),
        "endpoint inclusions",
        budget,
    );
    JkReport {
        advisory,
        trivial_horns,
        inner_and_strata: Verdict::all(strata),
        inner_and_endpoints: Verdict::all(vec![("inner".into(), inner()), ("endpoints".into(), endpoints)]),
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::poset::Poset;
    use crate::simplicial::{make_generator, FiniteCategory, Generator, SimplicialMap};

    #[test]
    fn left_horn_fibrancy_depends_on_labels() {
        let h = make_generator(Generator::Horn(2, 0)).unwrap().sset;
        let good = StratSSet::new(h.clone(), Arc::new(Poset::chain(2)), vec![0, 1, 2]).unwrap();
        let v = is_fibrant(&good, 3, Budget::default());
        assert!(v.is_equivalent(), "{:?}", v.fields());
        let bad = StratSSet::new(h, Arc::new(Poset::chain(1)), vec![0, 0, 1]).unwrap();
        let v = is_fibrant(&bad, 3, Budget::default());
        let o = v.obstruction().expect("stratum Δ^1 is not Kan");
        assert_eq!(o.context, vec!["stratum 0".to_string()]);
        v.recheck().unwrap();
    }

    #[test]
    fn exact_tier_matches_bounded_tier() {
        let pt = Arc::new(Poset::point());
        let g = FiniteCategory::walking_iso();
        let x = StratSSet::from_category(g.nerve(3), pt.clone(), vec![0, 0]).unwrap();
        assert!(is_fibrant(&x, 3, Budget::default()).is_equivalent());
        assert!(is_fibrant_bounded(&x, 3, Budget::default()).is_equivalent());
        let c = FiniteCategory::from_poset(&Poset::chain(1));
        let y = StratSSet::from_category(c.nerve(3), pt, vec![0, 0]).unwrap();
        let v = is_fibrant(&y, 3, Budget::default());
        assert!(v.is_not_equivalent());
        v.recheck().unwrap();
        assert!(is_fibrant_bounded(&y, 3, Budget::default()).is_not_equivalent());
    }

    #[test]
    fn identity_and_terminal_map() {
        let p = Arc::new(Poset::chain(1));
        let x = StratSSet::simplex(p.clone(), &[0, 1]).unwrap();
        let r = is_jk_fibration(&StratMap::identity(x.clone()), 3, Budget::default());
        assert!(!r.advisory);
        assert_eq!(r.agreement(), Some(true));
        assert!(r.trivial_horns.is_equivalent());
        let t = StratSSet::terminal(p);
        let m = SimplicialMap::identity(x.total().clone()).with_target(t.total().clone());
        let r = is_jk_fibration(&StratMap::new(x, t, m).unwrap(), 3, Budget::default());
        assert_eq!(r.agreement(), Some(true));
        assert!(r.inner_and_strata.is_equivalent());
    }
}
