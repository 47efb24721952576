//! Certificates for spines, prisms and cones.

use std::collections::HashSet;
use std::sync::Arc;

use crate::poset::{ElemId, Poset};
use crate::simplicial::{standard_simplex, Budget, SimplicialSet, Simplex};
use crate::stratified::{GeneratorKind, StratError, StratSSet};

use super::{fill_certificate, CellCertificate, FillStage};

fn all_cells(x: &SimplicialSet) -> Vec<Vec<bool>> {
    (0..=x.trunc_dim()).map(|d| vec![true; x.num_cells(d)]).collect()
}

fn cells_where(x: &SimplicialSet, keep: impl Fn(crate::simplicial::CellId) -> bool) -> Vec<Vec<bool>> {
    (0..=x.trunc_dim()).map(|d| x.cells_of_dim(d).map(&keep).collect()).collect()
}

fn distinct(mut v: Vec<usize>) -> Vec<usize> {
    v.dedup();
    v
}

/// `Spn^n ↪ Δ^n` over the point by inner horns.
pub fn spine_certificate(n: usize, budget: Budget) -> Result<CellCertificate, StratError> {
    if n == 0 {
        return Err(StratError::HornIndex { n, k: 0 });
    }
    let d = Arc::new(standard_simplex(n));
    let ambient = StratSSet::new(d.clone(), Arc::new(Poset::point()), vec![0; n + 1])?;
    let start = cells_where(&d, |c| {
        let v = d.vertices_of(&Simplex::nondeg(c));
        v.len() == 1 || (v.len() == 2 && v[1] == v[0] + 1)
    });
    let stage = FillStage { target: all_cells(&d), allowed: GeneratorKind::IH };
    fill_certificate(GeneratorKind::IH, &ambient, &start, &[stage], budget)
}

/// `(∂Δ^m ⋊ Δ^1) ∪ (Δ^m ⋊ Δ^{0}) ↪ Δ^m ⋊ Δ^1` by left and inner horns.
pub fn prism_certificate(base: &Arc<Poset>, labels: &[ElemId], budget: Budget) -> Result<CellCertificate, StratError> {
    let m = labels.len().checked_sub(1).ok_or(StratError::LabelCount { expected: 1, got: 0 })?;
    let x = StratSSet::simplex(base.clone(), labels)?;
    let (ambient, prod) = x.tensor(&Arc::new(standard_simplex(1)));
    let b = ambient.total();
    let start = cells_where(b, |c| {
        let (l, r) = prod.components(c);
        l.cell.dim() < m || prod.right.vertices_of(r).iter().all(|&v| v == 0)
    });
    let stage = FillStage { target: all_cells(b), allowed: GeneratorKind::LH };
    fill_certificate(GeneratorKind::LH, &ambient, &start, &[stage], budget)
}

/// `X ⋊ Δ^{0} ↪ X ⋊ Δ^n`: prisms cell by cell along each spine edge, then
/// inner horns for `X ⋊ Spn^n ↪ X ⋊ Δ^n`.
pub fn cone_certificate(x: &StratSSet, n: usize, budget: Budget) -> Result<CellCertificate, StratError> {
    if n == 0 {
        return Err(StratError::HornIndex { n, k: 0 });
    }
    let (ambient, prod) = x.tensor(&Arc::new(standard_simplex(n)));
    let b = ambient.total();
    let right_verts = |c| distinct(prod.right.vertices_of(&prod.components(c).1));
    let start = cells_where(b, |c| right_verts(c) == vec![0]);
    // cells lying over the spine up to edge `i` (inclusive)
    let on_spine = |v: &[usize], i: usize| match v {
        [a] => *a <= i + 1,
        [a, c] => *c == *a + 1 && *a <= i,
        _ => false,
    };
    let mut stages = Vec::new();
    for i in 0..n {
        let mut done: HashSet<crate::simplicial::CellId> = HashSet::new();
        for c in x.total().all_cells() {
            done.insert(c);
            let target = cells_where(b, |bc| {
                let v = right_verts(bc);
                (i > 0 && on_spine(&v, i - 1)) || v == vec![0] || (on_spine(&v, i) && done.contains(&prod.components(bc).0.cell))
            });
            stages.push(FillStage { target, allowed: GeneratorKind::LH });
        }
    }
    stages.push(FillStage { target: all_cells(b), allowed: GeneratorKind::IH });
    fill_certificate(GeneratorKind::LH, &ambient, &start, &stages, budget)
}
