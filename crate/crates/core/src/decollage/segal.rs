//! Segal maps `F(Σ) → F(p₀<p₁) ×_{F(p₁)} ⋯ ×_{F(p_{m-1})} F(p_{m-1}<p_m)`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::homotopy::{weak_equiv_verdict, Verdict, VerdictBudget};
use crate::poset::PString;
use crate::simplicial::{product, CellId, ProductSet, SimplicialMap, SimplicialSet, Simplex};

use super::{DecollageError, Presheaf};

/// `A ×_C B` as a simplicial subset of `A × B`.
#[derive(Clone, Debug)]
pub struct FiberProduct {
    pub sset: Arc<SimplicialSet>,
    pub product: ProductSet,
    pub proj_left: SimplicialMap,
    pub proj_right: SimplicialMap,
    to_sub: HashMap<CellId, CellId>,
}

impl FiberProduct {
    /// The map into the fiber product with components `f` and `g`.
    pub fn pairing(&self, f: &SimplicialMap, g: &SimplicialMap) -> Result<SimplicialMap, DecollageError> {
        let src = f.source();
        let images = (0..=src.trunc_dim())
            .map(|d| {
                src.cells_of_dim(d)
                    .map(|c| {
                        let z = self.product.try_pair(f.image(c), g.image(c)).and_then(|z| {
                            self.to_sub.get(&z.cell).map(|&cell| Simplex { cell, sur: z.sur })
                        });
                        z.ok_or_else(|| {
                            DecollageError::Simplicial(crate::simplicial::SimplicialError::NotAMap(format!(
                                "`{}` does not land in the fiber product",
                                src.name(c)
                            )))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SimplicialMap::new(src.clone(), self.sset.clone(), images)?)
    }
}

/// Levelwise fiber product of `f : A → C` and `g : B → C`.
pub fn fiber_product(f: &SimplicialMap, g: &SimplicialMap) -> Result<FiberProduct, DecollageError> {
    let prod = product(f.source(), g.source());
    let (sset, inc) = prod.sset.subcomplex(|c| {
        let (a, b) = prod.components(c);
        f.apply(a) == g.apply(b)
    })?;
    let to_sub = sset.all_cells().map(|c| (inc.image(c).cell, c)).collect();
    let proj_left = inc.then(&prod.proj_left())?;
    let proj_right = inc.then(&prod.proj_right())?;
    Ok(FiberProduct { sset, product: prod, proj_left, proj_right, to_sub })
}

/// The Segal map at `sigma`, associating left to right, and its verdict.
pub fn segal_map(
    f: &Presheaf,
    sigma: usize,
    budget: &VerdictBudget,
) -> Result<(SimplicialMap, Verdict), DecollageError> {
    let s = &f.strings()[sigma];
    let base = f.base();
    let idx = |elems: &[usize]| -> Result<usize, DecollageError> {
        let p = PString::new(base, elems)?;
        Ok(f.index_of(&p).expect("substring"))
    };
    let e = s.elems();
    let map = if e.len() <= 2 {
        SimplicialMap::identity(f.value(sigma).clone())
    } else {
        let edge = |i: usize| idx(&[e[i], e[i + 1]]);
        let vertex = |i: usize| idx(&[e[i]]);
        let e0 = edge(0)?;
        let mut seg = f.restriction(sigma, e0).expect("edge");
        let mut to_last = f.restriction(e0, vertex(1)?).expect("vertex");
        for i in 1..e.len() - 1 {
            let ei = edge(i)?;
            let fp = fiber_product(&to_last, &f.restriction(ei, vertex(i)?).expect("vertex"))?;
            seg = fp.pairing(&seg, &f.restriction(sigma, ei).expect("edge"))?;
            to_last = fp.proj_right.then(&f.restriction(ei, vertex(i + 1)?).expect("vertex"))?;
        }
        seg
    };
    let known = |x: &SimplicialSet| if x.is_complete() { usize::MAX } else { x.trunc_dim() };
    let cap = known(map.source()).min(known(map.target()));
    let vb = VerdictBudget { max_dim: budget.max_dim.min(cap), ..*budget };
    let verdict = weak_equiv_verdict(&map, &vb);
    Ok((map, verdict))
}

/// Conjunction of Segal verdicts over strings of length at least 3.
pub fn is_decollage(f: &Presheaf, budget: &VerdictBudget) -> Result<Verdict, DecollageError> {
    let mut parts = Vec::new();
    for (i, s) in f.strings().iter().enumerate() {
        if s.len() >= 3 {
            parts.push((format!("Segal map at {}", f.display(i)), segal_map(f, i, budget)?.1));
        }
    }
    Ok(Verdict::all(parts))
}
