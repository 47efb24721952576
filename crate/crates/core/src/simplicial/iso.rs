use std::sync::Arc;

use super::search::{Budget, MapSearch, SearchError, TargetIndex};
use super::{SimplicialMap, SimplicialSet, Simplex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoOutcome {
    Iso(SimplicialMap),
    NoIso(String),
    Unknown(String),
}

impl IsoOutcome {
    pub fn is_iso(&self) -> bool {
        matches!(self, IsoOutcome::Iso(_))
    }

    pub fn map(&self) -> Option<&SimplicialMap> {
        match self {
            IsoOutcome::Iso(m) => Some(m),
            _ => None,
        }
    }
}

/// Incidence counts of a vertex: how often it is vertex `i` of an `n`-cell.
fn signatures(x: &SimplicialSet) -> Vec<Vec<usize>> {
    let top = x.max_dim();
    let width: usize = (1..=top).map(|n| n + 1).sum();
    let mut sig = vec![vec![0usize; width]; x.num_cells(0)];
    let mut offset = 0;
    for n in 1..=top {
        for c in x.cells_of_dim(n) {
            for (i, v) in x.vertices_of(&Simplex::nondeg(c)).into_iter().enumerate() {
                sig[v][offset + i] += 1;
            }
        }
        offset += n + 1;
    }
    sig
}

/// Looks for an isomorphism `x → y`.
pub fn iso_check(x: &Arc<SimplicialSet>, y: &Arc<SimplicialSet>, budget: Budget) -> IsoOutcome {
    iso_check_with(x, y, |_, _| true, budget)
}

/// Looks for an isomorphism `x → y` sending each vertex `v` to some `w` with
/// `compatible(v, w)` (used for isomorphisms over a base).
pub fn iso_check_with(
    x: &Arc<SimplicialSet>,
    y: &Arc<SimplicialSet>,
    compatible: impl Fn(usize, usize) -> bool,
    budget: Budget,
) -> IsoOutcome {
    if x.is_complete() != y.is_complete() || (!x.is_complete() && x.trunc_dim() != y.trunc_dim()) {
        return IsoOutcome::NoIso(format!(
            "truncations differ ({:?} vs {:?})",
            (x.trunc_dim(), x.is_complete()),
            (y.trunc_dim(), y.is_complete())
        ));
    }
    let (cx, cy) = (trimmed(x.cell_counts()), trimmed(y.cell_counts()));
    if cx != cy {
        return IsoOutcome::NoIso(format!("cell counts differ: {cx:?} vs {cy:?}"));
    }
    let (sx, sy) = (signatures(x), signatures(y));
    let index = match TargetIndex::new(y, x.max_dim(), true) {
        Ok(i) => i,
        Err(e) => return IsoOutcome::Unknown(e.to_string()),
    };
    let search = MapSearch::new(x, &index)
        .injective()
        .filter(|c, cand| {
            c.dim() > 0 || (sx[c.idx()] == sy[cand.cell.idx()] && compatible(c.idx(), cand.cell.idx()))
        })
        .budget(budget);
    match search.first() {
        Ok((Some(images), _)) => IsoOutcome::Iso(SimplicialMap::new_unchecked(x.clone(), y.clone(), images)),
        Ok((None, stats)) => {
            IsoOutcome::NoIso(format!("exhaustive search over {} candidates", stats.candidates))
        }
        Err(SearchError::Budget { limit }) => {
            IsoOutcome::Unknown(format!("candidate budget {limit} exhausted"))
        }
        Err(SearchError::Simplicial(e)) => IsoOutcome::Unknown(e.to_string()),
    }
}

fn trimmed(mut v: Vec<usize>) -> Vec<usize> {
    while v.len() > 1 && v.last() == Some(&0) {
        v.pop();
    }
    v
}
