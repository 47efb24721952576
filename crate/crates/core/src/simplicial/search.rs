//! Backtracking search for simplicial maps out of a finite simplicial set.
//!
//! Cells of the source are assigned one at a time, each right after its last
//! face. Candidates for an `n`-cell are looked up in an index of the target's
//! `n`-simplices keyed by face tuple, so every partial assignment is already
//! compatible with faces.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use thiserror::Error;

use super::{CellId, SimplicialError, SimplicialMap, SimplicialSet, Simplex};

/// Cap on the number of candidate assignments explored by one search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_candidates: u64,
}

impl Budget {
    pub const DEFAULT_CANDIDATES: u64 = 1_000_000;

    pub fn new(max_candidates: u64) -> Self {
        Budget { max_candidates }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_candidates: Self::DEFAULT_CANDIDATES }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search budget of {limit} candidates exhausted")]
    Budget { limit: u64 },
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub candidates: u64,
    pub solutions: u64,
}

/// Simplices of a target indexed by their face tuples.
#[derive(Debug, Clone)]
pub struct TargetIndex {
    target: Arc<SimplicialSet>,
    max_dim: usize,
    vertices: Vec<Simplex>,
    by_faces: Vec<HashMap<Vec<Simplex>, Vec<Simplex>>>,
}

impl TargetIndex {
    /// Indexes all simplices of dimension `≤ max_dim` (degenerate ones too,
    /// unless `nondeg_only`).
    pub fn new(
        target: &Arc<SimplicialSet>,
        max_dim: usize,
        nondeg_only: bool,
    ) -> Result<Self, SimplicialError> {
        target.require(max_dim, "map target")?;
        let vertices = target.cells_of_dim(0).map(Simplex::nondeg).collect();
        let mut by_faces = vec![HashMap::new()];
        for n in 1..=max_dim {
            let mut map: HashMap<Vec<Simplex>, Vec<Simplex>> = HashMap::new();
            let xs: Vec<Simplex> = if nondeg_only {
                target.cells_of_dim(n).map(Simplex::nondeg).collect()
            } else {
                target.simplices(n)
            };
            for x in xs {
                map.entry(target.faces_of(&x)).or_default().push(x);
            }
            by_faces.push(map);
        }
        Ok(TargetIndex { target: target.clone(), max_dim, vertices, by_faces })
    }

    pub fn target(&self) -> &Arc<SimplicialSet> {
        &self.target
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn vertices(&self) -> &[Simplex] {
        &self.vertices
    }

    pub fn candidates(&self, faces: &[Simplex]) -> &[Simplex] {
        let n = faces.len() - 1;
        self.by_faces
            .get(n)
            .and_then(|m| m.get(faces))
            .map_or(&[], Vec::as_slice)
    }
}

type Filter<'a> = Box<dyn Fn(CellId, &Simplex) -> bool + 'a>;

/// A configured search for maps `source → index.target()`.
pub struct MapSearch<'a> {
    source: &'a SimplicialSet,
    index: &'a TargetIndex,
    fixed: HashMap<CellId, Simplex>,
    filter: Option<Filter<'a>>,
    injective: bool,
    budget: Budget,
}

struct State {
    assign: Vec<Vec<Option<Simplex>>>,
    used: HashSet<Simplex>,
    stats: SearchStats,
}

impl<'a> MapSearch<'a> {
    pub fn new(source: &'a SimplicialSet, index: &'a TargetIndex) -> Self {
        MapSearch { source, index, fixed: HashMap::new(), filter: None, injective: false, budget: Budget::default() }
    }

    pub fn fix(mut self, cell: CellId, image: Simplex) -> Self {
        self.fixed.insert(cell, image);
        self
    }

    pub fn fix_all(mut self, fixed: HashMap<CellId, Simplex>) -> Self {
        self.fixed.extend(fixed);
        self
    }

    pub fn filter(mut self, f: impl Fn(CellId, &Simplex) -> bool + 'a) -> Self {
        self.filter = Some(Box::new(f));
        self
    }

    /// Only maps injective on simplices (all images distinct).
    pub fn injective(mut self) -> Self {
        self.injective = true;
        self
    }

    pub fn budget(mut self, b: Budget) -> Self {
        self.budget = b;
        self
    }

    fn order(&self) -> Vec<CellId> {
        let mut keyed: Vec<(usize, CellId)> = self
            .source
            .all_cells()
            .map(|c| {
                let top = self.source.vertices_of(&Simplex::nondeg(c)).into_iter().max().unwrap_or(0);
                (top, c)
            })
            .collect();
        keyed.sort();
        keyed.into_iter().map(|(_, c)| c).collect()
    }

    /// Calls `visit` on every map found; stop early by returning `false`.
    pub fn run(
        &self,
        mut visit: impl FnMut(&[Vec<Simplex>]) -> bool,
    ) -> Result<SearchStats, SearchError> {
        let top = self.source.max_dim();
        if !self.source.is_empty() && top > self.index.max_dim {
            return Err(SimplicialError::Truncated {
                what: "map target index".into(),
                needed: top,
                trunc: self.index.max_dim,
            }
            .into());
        }
        let order = self.order();
        let mut st = State {
            assign: (0..self.source.cell_counts().len())
                .map(|d| vec![None; self.source.num_cells(d)])
                .collect(),
            used: HashSet::new(),
            stats: SearchStats::default(),
        };
        self.rec(&order, 0, &mut st, &mut visit)?;
        Ok(st.stats)
    }

    fn rec(
        &self,
        order: &[CellId],
        pos: usize,
        st: &mut State,
        visit: &mut impl FnMut(&[Vec<Simplex>]) -> bool,
    ) -> Result<bool, SearchError> {
        if pos == order.len() {
            st.stats.solutions += 1;
            let images: Vec<Vec<Simplex>> = st
                .assign
                .iter()
                .map(|l| l.iter().map(|x| x.clone().expect("complete assignment")).collect())
                .collect();
            return Ok(!visit(&images));
        }
        let c = order[pos];
        let target = &self.index.target;
        let faces: Vec<Simplex> = self
            .source
            .cell(c)
            .faces
            .iter()
            .map(|f| {
                let img = st.assign[f.cell.dim()][f.cell.idx()].as_ref().expect("faces assigned first");
                target.apply(img, &f.sur)
            })
            .collect();
        let fixed_cand;
        let cands: &[Simplex] = if let Some(x) = self.fixed.get(&c) {
            if x.dim() != c.dim() || (c.dim() > 0 && target.faces_of(x) != faces) {
                st.stats.candidates += 1;
                return Ok(false);
            }
            fixed_cand = [x.clone()];
            &fixed_cand
        } else if c.dim() == 0 {
            self.index.vertices()
        } else {
            self.index.candidates(&faces)
        };
        for cand in cands {
            st.stats.candidates += 1;
            if st.stats.candidates > self.budget.max_candidates {
                return Err(SearchError::Budget { limit: self.budget.max_candidates });
            }
            if let Some(f) = &self.filter {
                if !f(c, cand) {
                    continue;
                }
            }
            if self.injective && st.used.contains(cand) {
                continue;
            }
            if self.injective {
                st.used.insert(cand.clone());
            }
            st.assign[c.dim()][c.idx()] = Some(cand.clone());
            let stop = self.rec(order, pos + 1, st, visit)?;
            st.assign[c.dim()][c.idx()] = None;
            if self.injective {
                st.used.remove(cand);
            }
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// First map found, if any.
    pub fn first(&self) -> Result<(Option<Vec<Vec<Simplex>>>, SearchStats), SearchError> {
        let mut found = None;
        let stats = self.run(|m| {
            found = Some(m.to_vec());
            false
        })?;
        Ok((found, stats))
    }

    /// All maps, in search order.
    pub fn all(&self) -> Result<Vec<Vec<Vec<Simplex>>>, SearchError> {
        let mut out = Vec::new();
        self.run(|m| {
            out.push(m.to_vec());
            true
        })?;
        Ok(out)
    }
}

/// Enumerates all maps `source → index.target()` satisfying `filter`.
pub fn enumerate_maps(
    source: &Arc<SimplicialSet>,
    index: &TargetIndex,
    filter: impl Fn(CellId, &Simplex) -> bool,
    budget: Budget,
) -> Result<Vec<SimplicialMap>, SearchError> {
    let maps = MapSearch::new(source, index).filter(filter).budget(budget).all()?;
    Ok(maps
        .into_iter()
        .map(|m| SimplicialMap::new_unchecked(source.clone(), index.target.clone(), m))
        .collect())
}

/// A commutative square `A → X`, `B → Y` with `i : A → B` and `p : X → Y`.
#[derive(Clone, Copy, Debug)]
pub struct LiftProblem<'a> {
    pub i: &'a SimplicialMap,
    pub p: &'a SimplicialMap,
    pub top: &'a SimplicialMap,
    pub bottom: &'a SimplicialMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftOutcome {
    /// A diagonal `B → X` making both triangles commute.
    Lift(SimplicialMap),
    /// Exhaustive search found none.
    NoLift { explored: u64 },
    /// Search was cut short.
    Unknown { reason: String, explored: u64 },
}

impl LiftOutcome {
    pub fn is_lift(&self) -> bool {
        matches!(self, LiftOutcome::Lift(_))
    }

    pub fn is_no_lift(&self) -> bool {
        matches!(self, LiftOutcome::NoLift { .. })
    }
}

impl LiftProblem<'_> {
    /// Checks that the square is well-typed and commutes.
    pub fn check(&self) -> Result<(), SimplicialError> {
        let ok = self.i.target() == self.bottom.source()
            && self.i.source() == self.top.source()
            && self.top.target() == self.p.source()
            && self.p.target() == self.bottom.target();
        if !ok {
            return Err(SimplicialError::NotAMap("lifting square is not well-typed".into()));
        }
        let a = self.i.source();
        for c in a.all_cells() {
            let x = Simplex::nondeg(c);
            if self.p.apply(&self.top.apply(&x)) != self.bottom.apply(&self.i.apply(&x)) {
                return Err(SimplicialError::NotAMap(format!(
                    "lifting square does not commute at `{}`",
                    a.name(c)
                )));
            }
        }
        Ok(())
    }
}

/// Searches for a lift; builds a fresh index of `X`.
pub fn has_lift(problem: LiftProblem<'_>, budget: Budget) -> Result<LiftOutcome, SimplicialError> {
    let b = problem.i.target();
    let x = problem.p.source();
    let needed = b.max_dim();
    if !x.known_to(needed) {
        return Ok(LiftOutcome::Unknown {
            reason: format!("lift needs dimension {needed}, target known to {}", x.trunc_dim()),
            explored: 0,
        });
    }
    let index = TargetIndex::new(x, needed, false)?;
    has_lift_with(problem, &index, budget)
}

/// Searches for a lift using a prebuilt index of `X`.
pub fn has_lift_with(
    problem: LiftProblem<'_>,
    index: &TargetIndex,
    budget: Budget,
) -> Result<LiftOutcome, SimplicialError> {
    problem.check()?;
    let a = problem.i.source();
    let b = problem.i.target();
    if b.max_dim() > index.max_dim() {
        return Ok(LiftOutcome::Unknown {
            reason: format!("lift needs dimension {}, index covers {}", b.max_dim(), index.max_dim()),
            explored: 0,
        });
    }
    let mut fixed: HashMap<CellId, Simplex> = HashMap::new();
    for c in a.all_cells() {
        let ic = problem.i.image(c);
        if !ic.is_degenerate() {
            let t = problem.top.image(c).clone();
            if let Some(prev) = fixed.get(&ic.cell) {
                if *prev != t {
                    return Ok(LiftOutcome::NoLift { explored: 0 });
                }
            }
            fixed.insert(ic.cell, t);
        }
    }
    let p = problem.p;
    let bottom = problem.bottom;
    let search = MapSearch::new(b, index)
        .fix_all(fixed)
        .filter(|c, cand| p.apply(cand) == *bottom.image(c))
        .budget(budget);
    let mut lift = None;
    let res = search.run(|images| {
        let l = SimplicialMap::new_unchecked(b.clone(), p.source().clone(), images.to_vec());
        let ok = a.all_cells().all(|c| l.apply(problem.i.image(c)) == *problem.top.image(c));
        if ok {
            lift = Some(l);
        }
        !ok
    });
    match res {
        Ok(stats) => Ok(match lift {
            Some(l) => LiftOutcome::Lift(l),
            None => LiftOutcome::NoLift { explored: stats.candidates },
        }),
        Err(SearchError::Budget { limit }) => Ok(LiftOutcome::Unknown {
            reason: format!("candidate budget {limit} exhausted"),
            explored: limit,
        }),
        Err(SearchError::Simplicial(e)) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{make_generator, standard_simplex, Generator};

    fn point() -> Arc<SimplicialSet> {
        Arc::new(standard_simplex(0))
    }

    #[test]
    fn counts_maps_between_simplices() {
        // maps Δ^1 → Δ^2 are monotone maps [1] → [2]: 6 of them
        let d1 = Arc::new(standard_simplex(1));
        let d2 = Arc::new(standard_simplex(2));
        let idx = TargetIndex::new(&d2, 1, false).unwrap();
        let maps = enumerate_maps(&d1, &idx, |_, _| true, Budget::default()).unwrap();
        assert_eq!(maps.len(), 6);
        for m in &maps {
            m.validate().unwrap();
        }
    }

    #[test]
    fn horn_retraction_absent() {
        let h = make_generator(Generator::Horn(2, 0)).unwrap();
        let id = SimplicialMap::identity(h.sset.clone());
        let pt = point();
        let p = SimplicialMap::to_point(h.sset.clone(), pt.clone());
        let bottom = SimplicialMap::to_point(h.ambient.clone(), pt);
        let prob = LiftProblem { i: &h.inclusion, p: &p, top: &id, bottom: &bottom };
        let out = has_lift(prob, Budget::default()).unwrap();
        assert!(out.is_no_lift(), "{out:?}");
    }

    #[test]
    fn inner_horn_fills_in_simplex() {
        let h = make_generator(Generator::Horn(2, 1)).unwrap();
        let pt = point();
        let p = SimplicialMap::to_point(h.ambient.clone(), pt.clone());
        let bottom = SimplicialMap::to_point(h.ambient.clone(), pt);
        let prob = LiftProblem { i: &h.inclusion, p: &p, top: &h.inclusion, bottom: &bottom };
        assert!(has_lift(prob, Budget::default()).unwrap().is_lift());
    }

    #[test]
    fn budget_is_reported() {
        let d3 = Arc::new(standard_simplex(3));
        let idx = TargetIndex::new(&d3, 3, false).unwrap();
        let r = MapSearch::new(&d3, &idx).budget(Budget::new(3)).all();
        assert_eq!(r, Err(SearchError::Budget { limit: 3 }));
    }
}
