//! Vertical `Ex^m` and the bounded fibrant replacement by non-vertical
//! inner horns.

use std::collections::HashMap;

use crate::anodyne::{attach_horn, CellCertificate, CertStep};
use crate::simplicial::{
    colimit, ex, make_generator, Budget, CellId, Diagram, Generator, MapSearch, SearchError, SimplicialError,
    SimplicialMap, TargetIndex,
};

use super::horns::{generating_set, GeneratorItem, GeneratorKind};
use super::{StratError, StratMap, StratSSet};

fn search_error(e: SearchError, what: &str) -> StratError {
    match e {
        SearchError::Budget { limit } => SimplicialError::Budget { resource: what.into(), limit }.into(),
        SearchError::Simplicial(e) => e.into(),
    }
}

/// `X ⊔_{⨿ X_p} ⨿ Ex^m X_p` up to dimension `max_dim`, with the inclusion of
/// `X` (truncated at `max_dim`).
pub fn vex(x: &StratSSet, m: usize, max_dim: usize, budget: Budget) -> Result<(StratSSet, StratMap), StratError> {
    let xt = x.truncate(max_dim);
    let base = x.base();
    let mut d = Diagram::new();
    let root = d.add_object(xt.total().clone());
    let mut owner: HashMap<usize, usize> = HashMap::new();
    for p in base.elements() {
        let (xp, inc) = xt.stratum(p)?;
        if xp.num_cells(0) == 0 {
            continue;
        }
        let (e, ip) = ex(&xp, m, max_dim, budget)?;
        let ip = ip.with_source(xp.clone());
        let a = d.add_object(xp);
        let b = d.add_object(e);
        d.add_arrow(a, root, inc);
        d.add_arrow(a, b, ip);
        owner.insert(a, p);
        owner.insert(b, p);
    }
    let c = colimit(&d)?;
    let labels = (0..c.sset.num_cells(0))
        .map(|v| {
            let (obj, cell) = c.representative(CellId::new(0, v));
            if obj == root {
                xt.label(cell.idx())
            } else {
                owner[&obj]
            }
        })
        .collect();
    let result = StratSSet::new(c.sset.clone(), base.clone(), labels)?;
    let inclusion = StratMap::new(xt, result.clone(), c.cocone[root].clone())?;
    Ok((result, inclusion))
}

/// Maps `Λ^n_k → X` over the item's labels with no filler, for every item
/// of `kind` up to `max_dim`, in item order and then search order.
pub fn unfilled_horns(
    x: &StratSSet,
    kind: GeneratorKind,
    max_dim: usize,
    budget: Budget,
) -> Result<Vec<(GeneratorItem, SimplicialMap)>, StratError> {
    let total = x.total();
    let top = max_dim.min(if total.is_complete() { max_dim } else { total.trunc_dim() });
    let index = TargetIndex::new(total, top, false)?;
    let mut out = Vec::new();
    for item in generating_set(x.base(), kind, top).items {
        let g = make_generator(Generator::Horn(item.n, item.k))?;
        let horn = &g.sset;
        let labels = &item.labels;
        let maps = MapSearch::new(horn, &index)
            .filter(|c, cand| c.dim() > 0 || x.label(cand.cell.idx()) == labels[g.inclusion.vertex_image(c.idx())])
            .budget(budget)
            .all()
            .map_err(|e| search_error(e, "horn search"))?;
        for images in maps {
            let h = SimplicialMap::new_unchecked(horn.clone(), total.clone(), images);
            if !has_filler(&g.inclusion, &h, &index, budget)? {
                out.push((item.clone(), h));
            }
        }
    }
    Ok(out)
}

fn has_filler(inclusion: &SimplicialMap, h: &SimplicialMap, index: &TargetIndex, budget: Budget) -> Result<bool, StratError> {
    let fixed = h
        .source()
        .all_cells()
        .filter(|&c| !inclusion.image(c).is_degenerate())
        .map(|c| (inclusion.image(c).cell, h.image(c).clone()))
        .collect();
    let (found, _) = MapSearch::new(inclusion.target(), index)
        .fix_all(fixed)
        .budget(budget)
        .first()
        .map_err(|e| search_error(e, "filler search"))?;
    Ok(found.is_some())
}

/// Result of [`fibrant_replace_nv`].
#[derive(Clone, Debug)]
pub struct Replacement {
    pub result: StratSSet,
    pub certificate: CellCertificate,
    /// A stage attached nothing, so no non-vertical inner horn up to
    /// `max_dim` is unfilled.
    pub saturated: bool,
    pub stages: usize,
}

/// Attaches fillers for unfilled non-vertical inner horns, stage by stage,
/// lowest dimension first.
pub fn fibrant_replace_nv(
    x: &StratSSet,
    max_dim: usize,
    max_stages: usize,
    budget: Budget,
) -> Result<Replacement, StratError> {
    let mut current = x.clone().forget_presentation();
    let mut steps = Vec::new();
    let mut saturated = false;
    let mut stages = 0;
    while stages < max_stages {
        let pending = unfilled_horns(&current, GeneratorKind::IHnv, max_dim, budget)?;
        stages += 1;
        if pending.is_empty() {
            saturated = true;
            break;
        }
        for (item, h) in pending {
            let h = h.with_target(current.total().clone());
            let g = make_generator(Generator::Horn(item.n, item.k))?;
            let index = TargetIndex::new(current.total(), item.n, false)?;
            if has_filler(&g.inclusion, &h, &index, budget)? {
                continue;
            }
            steps.push(CertStep::from_map(item.clone(), &h));
            let (next, _, _) = attach_horn(&current, &item, &h, steps.len() - 1)?;
            current = next;
        }
    }
    let certificate = CellCertificate { kind: GeneratorKind::IHnv, start: x.clone(), steps, claimed_end: current.clone() };
    Ok(Replacement { result: current, certificate, saturated, stages })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::anodyne::verify_certificate;
    use crate::poset::Poset;
    use crate::simplicial::{ex as ex_m, iso_check, standard_simplex};

    #[test]
    fn replacing_an_inner_horn() {
        let p = Arc::new(Poset::chain(2));
        let h = make_generator(Generator::Horn(2, 1)).unwrap().sset;
        let x = StratSSet::new(h, p.clone(), vec![0, 1, 2]).unwrap();
        let r = fibrant_replace_nv(&x, 2, 4, Budget::default()).unwrap();
        assert!(r.saturated);
        assert_eq!(r.certificate.steps.len(), 1);
        let d2 = StratSSet::simplex(p, &[0, 1, 2]).unwrap();
        assert!(r.result.iso_over(&d2, Budget::default()).is_iso());
        assert!(verify_certificate(&r.certificate, Budget::default()).ok);
    }

    #[test]
    fn nothing_to_do_over_a_point() {
        let pt = Arc::new(Poset::point());
        let h = make_generator(Generator::Horn(2, 1)).unwrap().sset;
        let x = StratSSet::new(h, pt, vec![0; 3]).unwrap();
        let r = fibrant_replace_nv(&x, 3, 4, Budget::default()).unwrap();
        assert!(r.saturated && r.certificate.steps.is_empty());
        assert_eq!(r.result, x);
    }

    #[test]
    fn vex_over_a_point_is_ex() {
        let pt = Arc::new(Poset::point());
        let b = make_generator(Generator::Boundary(2)).unwrap().sset;
        let x = StratSSet::new(b.clone(), pt, vec![0; 3]).unwrap();
        let (v, inc) = vex(&x, 1, 1, Budget::default()).unwrap();
        let (e, _) = ex_m(&b, 1, 1, Budget::default()).unwrap();
        assert!(iso_check(v.total(), &e, Budget::default()).is_iso());
        assert!(inc.map().is_injective());
    }

    #[test]
    fn vex_replaces_strata() {
        let p = Arc::new(Poset::chain(1));
        let x = StratSSet::new(Arc::new(standard_simplex(2)), p, vec![0, 0, 1]).unwrap();
        let (v, _) = vex(&x, 1, 2, Budget::default()).unwrap();
        let (s0, _) = v.stratum(0).unwrap();
        let (x0, _) = x.stratum(0).unwrap();
        let (e0, _) = ex_m(&x0, 1, 2, Budget::default()).unwrap();
        assert!(iso_check(&s0, &e0, Budget::default()).is_iso());
    }
}
