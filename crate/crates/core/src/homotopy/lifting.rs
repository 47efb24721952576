//! Exhaustive right-lifting-property checks against finite generator lists.

use std::sync::Arc;

use crate::simplicial::{
    make_generator, standard_simplex, Budget, Generator, MapSearch, SearchError, SimplicialMap, SimplicialSet,
    Simplex, TargetIndex,
};

use super::{Evidence, Invariant, LiftingRecord, Obstruction, Verdict, Witness};

/// An inclusion `A → B` to lift against, optionally with vertex labels on
/// `B` that the bottom map must respect.
#[derive(Clone, Debug)]
pub struct LiftingGenerator {
    pub name: String,
    pub inclusion: SimplicialMap,
    pub labels: Option<Vec<usize>>,
}

/// Horn inclusions `Λ^n_k → Δ^n` for `1 ≤ n ≤ max_dim` with `which(n, k)`.
pub fn horn_generators(max_dim: usize, which: impl Fn(usize, usize) -> bool) -> Vec<LiftingGenerator> {
    let mut out = Vec::new();
    for n in 1..=max_dim {
        for k in 0..=n {
            if which(n, k) {
                let g = make_generator(Generator::Horn(n, k)).expect("valid horn");
                out.push(LiftingGenerator { name: format!("horn({n},{k})"), inclusion: g.inclusion, labels: None });
            }
        }
    }
    out
}

/// Boundary inclusions `∂Δ^n → Δ^n` for `0 ≤ n ≤ max_dim`.
pub fn boundary_generators(max_dim: usize) -> Vec<LiftingGenerator> {
    (0..=max_dim)
        .map(|n| {
            let g = make_generator(Generator::Boundary(n)).expect("valid boundary");
            LiftingGenerator { name: format!("boundary({n})"), inclusion: g.inclusion, labels: None }
        })
        .collect()
}

fn describe_map(m: &[Vec<Simplex>], x: &SimplicialSet) -> String {
    let vs: Vec<&str> = m.first().map_or(Vec::new(), |l| l.iter().map(|s| x.name(s.cell)).collect());
    format!("({})", vs.join(","))
}

struct Counter {
    used: u64,
    budget: Budget,
}

impl Counter {
    fn remaining(&self) -> Budget {
        Budget::new(self.budget.max_candidates.saturating_sub(self.used))
    }

    fn collect(
        &mut self,
        search: MapSearch<'_>,
        what: &str,
    ) -> Result<Vec<Vec<Vec<Simplex>>>, Verdict> {
        let mut out = Vec::new();
        let res = search.budget(self.remaining()).run(|m| {
            out.push(m.to_vec());
            true
        });
        self.finish(res, what)?;
        Ok(out)
    }

    fn first(&mut self, search: MapSearch<'_>, what: &str) -> Result<Option<Vec<Vec<Simplex>>>, Verdict> {
        let mut found = None;
        let res = search.budget(self.remaining()).run(|m| {
            found = Some(m.to_vec());
            false
        });
        self.finish(res, what)?;
        Ok(found)
    }

    fn finish(&mut self, res: Result<crate::simplicial::SearchStats, SearchError>, what: &str) -> Result<(), Verdict> {
        match res {
            Ok(stats) => {
                self.used += stats.candidates;
                Ok(())
            }
            Err(SearchError::Budget { limit }) => Err(Verdict::unknown(
                "search candidates",
                format!("budget of {} exhausted while enumerating {what} (last search cap {limit})", self.budget.max_candidates),
            )),
            Err(SearchError::Simplicial(e)) => Err(Verdict::unknown("truncation", e.to_string())),
        }
    }
}

/// Checks that `p : X → Y` has the right lifting property against every
/// generator. With `target_labels`, generator labels must match the labels
/// of the bottom map's vertices in `Y`.
pub fn rlp_check(
    p: &SimplicialMap,
    generators: &[LiftingGenerator],
    target_labels: Option<&[usize]>,
    property: &str,
    budget: Budget,
) -> Verdict {
    let x = p.source();
    let y = p.target();
    let need = generators.iter().map(|g| g.inclusion.target().max_dim()).max().unwrap_or(0);
    for (set, side) in [(x, "source"), (y, "target")] {
        if !set.known_to(need) {
            return Verdict::unknown(
                "truncation",
                format!("{property}: {side} known to dimension {}, needed {need}", set.trunc_dim()),
            );
        }
    }
    let (idx_x, idx_y) = match (TargetIndex::new(x, need, false), TargetIndex::new(y, need, false)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return Verdict::unknown("truncation", e.to_string()),
    };
    let mut counter = Counter { used: 0, budget };
    let mut problems = 0u64;
    for generator in generators {
        let i = &generator.inclusion;
        let a = i.source();
        let b = i.target();
        let gl = generator.labels.as_deref();
        let bottoms = match counter.collect(
            MapSearch::new(b, &idx_y).filter(|c, cand| match (gl, target_labels) {
                (Some(gl), Some(tl)) if c.dim() == 0 => tl[cand.cell.idx()] == gl[c.idx()],
                _ => true,
            }),
            &format!("bottom maps for {}", generator.name),
        ) {
            Ok(v) => v,
            Err(v) => return v,
        };
        for bottom in bottoms {
            let bottom_map = SimplicialMap::new_unchecked(b.clone(), y.clone(), bottom);
            let bi: Vec<Vec<Simplex>> = i.images().iter().map(|l| l.iter().map(|s| bottom_map.apply(s)).collect()).collect();
            let tops = match counter.collect(
                MapSearch::new(a, &idx_x).filter(|c, cand| p.apply(cand) == bi[c.dim()][c.idx()]),
                &format!("top maps for {}", generator.name),
            ) {
                Ok(v) => v,
                Err(v) => return v,
            };
            for top in tops {
                problems += 1;
                let mut search = MapSearch::new(b, &idx_x);
                for c in a.all_cells() {
                    search = search.fix(i.image(c).cell, top[c.dim()][c.idx()].clone());
                }
                let search = search.filter(|c, cand| p.apply(cand) == *bottom_map.image(c));
                match counter.first(search, &format!("fillers for {}", generator.name)) {
                    Ok(Some(_)) => {}
                    Ok(None) => {
                        let top_map = SimplicialMap::new_unchecked(a.clone(), x.clone(), top.clone());
                        return Verdict::NotEquivalent(Obstruction {
                            context: Vec::new(),
                            invariant: Invariant::Lifting(generator.name.clone()),
                            left: format!("{} at {}", generator.name, describe_map(&top, x)),
                            right: "no filler".into(),
                            evidence: Evidence::Square {
                                generator: generator.clone(),
                                p: p.clone(),
                                top: top_map,
                                bottom: bottom_map.clone(),
                            },
                        });
                    }
                    Err(v) => return v,
                }
            }
        }
    }
    Verdict::Equivalent(Witness::Lifting(LiftingRecord {
        property: property.to_string(),
        map: p.clone(),
        generators: generators.to_vec(),
        target_labels: target_labels.map(<[usize]>::to_vec),
        problems,
        budget,
    }))
}

fn to_point(x: &Arc<SimplicialSet>) -> SimplicialMap {
    SimplicialMap::to_point(x.clone(), Arc::new(standard_simplex(0)))
}

/// Fillers for all horns of dimension `≤ max_dim`.
pub fn is_kan(x: &Arc<SimplicialSet>, max_dim: usize, budget: Budget) -> Verdict {
    rlp_check(&to_point(x), &horn_generators(max_dim, |_, _| true), None, &format!("Kan up to dimension {max_dim}"), budget)
}

/// Fillers for all inner horns of dimension `≤ max_dim`.
pub fn is_inner_fibrant(x: &Arc<SimplicialSet>, max_dim: usize, budget: Budget) -> Verdict {
    rlp_check(
        &to_point(x),
        &horn_generators(max_dim, |n, k| 0 < k && k < n),
        None,
        &format!("inner horns up to dimension {max_dim}"),
        budget,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::FiniteCategory;

    #[test]
    fn point_and_edge() {
        let pt = Arc::new(standard_simplex(0));
        assert!(is_kan(&pt, 3, Budget::default()).is_equivalent());
        let d1 = Arc::new(standard_simplex(1));
        let v = is_kan(&d1, 2, Budget::default());
        assert!(v.is_not_equivalent());
        v.recheck().unwrap();
        assert!(is_inner_fibrant(&d1, 3, Budget::default()).is_equivalent());
    }

    #[test]
    fn group_nerve_is_kan() {
        let c = FiniteCategory::cyclic_group(2);
        let nerve = c.nerve(3);
        let v = is_kan(&nerve.sset, 3, Budget::default());
        assert!(v.is_equivalent(), "{:?}", v.fields());
        v.recheck().unwrap();
    }

    #[test]
    fn truncation_gives_unknown() {
        let c = FiniteCategory::walking_iso();
        let nerve = c.nerve(2);
        assert!(is_kan(&nerve.sset, 3, Budget::default()).is_unknown());
    }
}
