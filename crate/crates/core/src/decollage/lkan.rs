//! `L_P` as a colimit over `Pair(P)` or as a coend, and the unit and counit
//! of `L_P ⊣ N_P`.

use std::sync::Arc;

use crate::poset::pair_poset;
use crate::simplicial::{
    colimit, product, standard_simplex, Budget, CellId, Colimit, Diagram, ProductCosimplicial, ProductSet,
    SimplicialMap, SimplicialSet, Simplex,
};
use crate::stratified::{rel_mapping, StratMap, StratSSet};

use super::{nerve_presheaf, string_inclusion, DecollageError, NervePresheaf, Presheaf};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LkanStrategy {
    /// `colim_{(Σ,Σ') ∈ Pair(P)} Σ' ⋊ F(Σ)`.
    PairColimit,
    /// The coequalizer of `⨿_{Σ' ⊊ Σ} Σ' × F(Σ) ⇉ ⨿_Σ Σ × F(Σ)`.
    Coend,
}

/// `L_P(F)` with the diagram it was computed from.
#[derive(Clone, Debug)]
pub struct Lkan {
    pub object: StratSSet,
    pub colimit: Colimit,
    /// `(outer, inner)` string indices of each diagram object `inner ⋊ F(outer)`.
    pub pieces: Vec<(usize, usize)>,
    pub products: Vec<ProductSet>,
    /// `Δ^n` for each `n`, the left factors of the products.
    pub simplices: Vec<Arc<SimplicialSet>>,
}

impl Lkan {
    pub fn piece(&self, outer: usize, inner: usize) -> Option<usize> {
        self.pieces.iter().position(|&p| p == (outer, inner))
    }
}

/// Computes `L_P(F)` with the chosen strategy.
pub fn lkan(f: &Presheaf, strategy: LkanStrategy) -> Result<Lkan, DecollageError> {
    let strings = f.strings();
    let top = strings.iter().map(|s| s.len()).max().unwrap_or(1);
    let simplices: Vec<Arc<SimplicialSet>> = (0..top).map(|n| Arc::new(standard_simplex(n))).collect();
    let simplex = |i: usize| simplices[strings[i].len() - 1].clone();
    let incl = |i: usize, o: usize| string_inclusion(&strings[i], &strings[o], &simplex(i), &simplex(o));
    let mut pieces = Vec::new();
    let mut arrows = Vec::new();
    match strategy {
        LkanStrategy::PairColimit => {
            let pp = pair_poset(f.base());
            for p in pp.pairs() {
                pieces.push((f.index_of(&p.outer).expect("string"), f.index_of(&p.inner).expect("string")));
            }
            arrows = pp.poset.covers();
        }
        LkanStrategy::Coend => {
            pieces.extend((0..strings.len()).map(|s| (s, s)));
            for (o, i) in f.strict_pairs() {
                let b = pieces.len();
                pieces.push((o, i));
                arrows.push((b, i));
                arrows.push((b, o));
            }
        }
    }
    let products: Vec<ProductSet> = pieces.iter().map(|&(o, i)| product(&simplex(i), f.value(o))).collect();
    let mut d = Diagram::new();
    for p in &products {
        d.add_object(p.sset.clone());
    }
    for &(a, b) in &arrows {
        let ((ao, ai), (bo, bi)) = (pieces[a], pieces[b]);
        let r = f.restriction(ao, bo).expect("outer strings shrink along arrows");
        let left = if ai == bi { SimplicialMap::identity(simplex(ai)) } else { incl(ai, bi) };
        d.add_arrow(a, b, products[a].map_product(&left, &r, &products[b])?);
    }
    let c = colimit(&d)?;
    let labels = (0..c.sset.num_cells(0))
        .map(|v| {
            let (j, oc) = c.representative(CellId::new(0, v));
            let s = &products[j].components(oc).0;
            strings[pieces[j].1].elems()[s.cell.idx()]
        })
        .collect();
    let object = StratSSet::new(c.sset.clone(), f.base().clone(), labels)?;
    Ok(Lkan { object, colimit: c, pieces, products, simplices })
}

/// Images of `η_Σ(x) : Σ ⋊ Δ^e → L_P(F)` on the cells of `k.products[e]`,
/// where `k` is built on `Σ`. `None` when a cell falls outside the known
/// part of `L_P(F)`.
fn unit_images(f: &Presheaf, lf: &Lkan, sigma: usize, k: &ProductCosimplicial, x: CellId) -> Option<Vec<Vec<Simplex>>> {
    let e = x.dim();
    let j = lf.piece(sigma, sigma)?;
    let fx = f.value(sigma);
    let prod = k.products.get(e)?;
    let mut out = Vec::new();
    for d in 0..=prod.sset.trunc_dim() {
        let mut level = Vec::new();
        for c in prod.sset.cells_of_dim(d) {
            let (a, t) = prod.components(c);
            let theta: Vec<u8> = prod.right.vertices_of(t).into_iter().map(|v| v as u8).collect();
            let y = fx.apply(&Simplex::nondeg(x), &theta);
            let z = lf.products[j].try_pair(a, &y)?;
            level.push(lf.colimit.cocone[j].apply(&z));
        }
        out.push(level);
    }
    Some(out)
}

/// Highest `e` with `Σ ⋊ Δ^e` inside the known part of `L_P(F)`.
fn unit_dim(lf: &Lkan, len: usize, max_dim: usize) -> Option<usize> {
    let t = lf.object.total();
    if t.is_complete() {
        return Some(max_dim);
    }
    t.trunc_dim().checked_sub(len - 1).map(|d| d.min(max_dim))
}

/// `η_F(Σ) : F(Σ) → Map_{/P}(Σ, L_P(F))` up to dimension `max_dim` (or
/// less if `L_P(F)` is truncated). `None` if nothing is known.
pub fn unit_component(
    f: &Presheaf,
    lf: &Lkan,
    sigma: usize,
    max_dim: usize,
    budget: Budget,
) -> Result<Option<SimplicialMap>, DecollageError> {
    let s = &f.strings()[sigma];
    let Some(d) = unit_dim(lf, s.len(), max_dim) else {
        return Ok(None);
    };
    let rm = rel_mapping(&StratSSet::string(f.base().clone(), s), &lf.object, d, budget)?;
    let src = Arc::new(f.value(sigma).truncate(d));
    let mut images = Vec::new();
    for e in 0..=d {
        let mut level = Vec::new();
        for x in src.cells_of_dim(e) {
            let s = unit_images(f, lf, sigma, &rm.k, x)
                .and_then(|im| rm.hom.try_simplex_of(&rm.k, e, &im))
                .ok_or_else(|| DecollageError::NotFunctorial(format!("unit at {} is not stratified", f.display(sigma))))?;
            level.push(s);
        }
        images.push(level);
    }
    Ok(Some(SimplicialMap::new(src, rm.hom.sset.clone(), images)?))
}

/// Evaluation `(s, m) ↦ m(s, ι)` on the piece `Σ' ⋊ N(X)(Σ)`.
fn evaluate(n: &NervePresheaf, lx: &Lkan, j: usize, x: &StratSSet) -> Result<SimplicialMap, DecollageError> {
    let (o, i) = lx.pieces[j];
    let f = &n.presheaf;
    let strings = f.strings();
    let prod = &lx.products[j];
    let rm = &n.mappings[o];
    let incl = string_inclusion(&strings[i], &strings[o], &prod.left, &rm.k.a);
    let images = (0..=prod.sset.trunc_dim())
        .map(|d| {
            prod.sset
                .cells_of_dim(d)
                .map(|c| {
                    let (s, m) = prod.components(c);
                    let e = m.cell.dim();
                    let elem = rm.hom.element(m.cell);
                    let top = Simplex { cell: CellId::new(e, 0), sur: m.sur.clone() };
                    let z = rm.k.products[e].pair(&incl.apply(s), &top);
                    x.total().apply(&elem.images()[z.cell.dim()][z.cell.idx()], &z.sur)
                })
                .collect()
        })
        .collect();
    Ok(SimplicialMap::new(prod.sset.clone(), x.total().clone(), images)?)
}

/// `ε_X : L_P(N_P(X)) → X`.
pub fn counit(n: &NervePresheaf, lx: &Lkan, x: &StratSSet) -> Result<StratMap, DecollageError> {
    let comps = (0..lx.pieces.len()).map(|j| evaluate(n, lx, j, x)).collect::<Result<Vec<_>, _>>()?;
    let m = lx.colimit.induce(x.total().clone(), &comps)?;
    Ok(StratMap::new(lx.object.clone(), x.clone(), m)?)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TriangleCount {
    pub checked: usize,
    pub failed: usize,
    /// Simplices beyond the known part of a truncated object.
    pub skipped: usize,
}

#[derive(Clone, Debug)]
pub struct UnitComponent {
    pub string: String,
    /// Dimension the component was computed to, if any.
    pub dim: Option<usize>,
    pub valid: bool,
    pub injective: bool,
    pub iso: bool,
}

#[derive(Clone, Debug)]
pub struct AdjunctionReport {
    pub units: Vec<UnitComponent>,
    pub counit: Result<(), String>,
    /// `ε_{L F} ∘ L(η_F) = id` on nondegenerate simplices of `L_P(F)`.
    pub triangle_left: TriangleCount,
    /// `N(ε_X) ∘ η_{N X} = id` on nondegenerate simplices of `N_P(X)`.
    pub triangle_right: TriangleCount,
}

impl AdjunctionReport {
    pub fn ok(&self) -> bool {
        self.units.iter().all(|u| u.valid)
            && self.counit.is_ok()
            && self.triangle_left.failed == 0
            && self.triangle_right.failed == 0
    }
}

/// Builds `η_F` and `ε_X` and checks both triangle identities up to
/// `max_dim`.
pub fn adjunction_check(
    f: &Presheaf,
    x: &StratSSet,
    max_dim: usize,
    budget: Budget,
) -> Result<AdjunctionReport, DecollageError> {
    let lf = lkan(f, LkanStrategy::PairColimit)?;
    let strings = f.strings();
    let mut units = Vec::new();
    for s in 0..strings.len() {
        let (dim, valid, injective, iso) = match unit_component(f, &lf, s, max_dim, budget) {
            Ok(Some(m)) => (unit_dim(&lf, strings[s].len(), max_dim), true, m.is_injective(), m.is_iso()),
            Ok(None) => (None, true, false, false),
            Err(DecollageError::NotFunctorial(_)) => (unit_dim(&lf, strings[s].len(), max_dim), false, false, false),
            Err(e) => return Err(e),
        };
        units.push(UnitComponent { string: f.display(s), dim, valid, injective, iso });
    }

    let mut left = TriangleCount::default();
    let ks: Vec<Option<ProductCosimplicial>> = strings
        .iter()
        .map(|s| unit_dim(&lf, s.len(), max_dim).map(|d| ProductCosimplicial::new(&lf.simplices[s.len() - 1], d)).transpose())
        .collect::<Result<_, _>>()?;
    let total = lf.object.total();
    for d in 0..=max_dim.min(total.trunc_dim()) {
        for c in total.cells_of_dim(d) {
            for &(j, oc) in lf.colimit.representatives(c) {
                let (o, i) = lf.pieces[j];
                let (s, xs) = lf.products[j].components(oc);
                let Some(k) = ks[o].as_ref().filter(|k| k.products.len() > xs.cell.dim()) else {
                    left.skipped += 1;
                    continue;
                };
                let Some(im) = unit_images(f, &lf, o, k, xs.cell) else {
                    left.skipped += 1;
                    continue;
                };
                let e = xs.cell.dim();
                let inc = string_inclusion(&strings[i], &strings[o], &lf.products[j].left, &k.a);
                let top = Simplex { cell: CellId::new(e, 0), sur: xs.sur.clone() };
                let z = k.products[e].pair(&inc.apply(s), &top);
                let got = total.apply(&im[z.cell.dim()][z.cell.idx()], &z.sur);
                left.checked += 1;
                if got != Simplex::nondeg(c) {
                    left.failed += 1;
                }
            }
        }
    }

    let nx = nerve_presheaf(x, max_dim, budget)?;
    let lx = lkan(&nx.presheaf, LkanStrategy::PairColimit)?;
    let (eps, counit_res) = match counit(&nx, &lx, x) {
        Ok(e) => (Some(e), Ok(())),
        Err(e) => (None, Err(e.to_string())),
    };
    let mut right = TriangleCount::default();
    if let Some(eps) = eps {
        for (s, rm) in nx.mappings.iter().enumerate() {
            let known = unit_dim(&lx, strings_len(&nx.presheaf, s), max_dim);
            for c in rm.hom.sset.all_cells() {
                let Some(im) = known.filter(|&d| c.dim() <= d).and_then(|_| unit_images(&nx.presheaf, &lx, s, &rm.k, c))
                else {
                    right.skipped += 1;
                    continue;
                };
                let back: Vec<Vec<Simplex>> =
                    im.iter().map(|l| l.iter().map(|y| eps.map().apply(y)).collect()).collect();
                right.checked += 1;
                if back != rm.hom.element(c).images() {
                    right.failed += 1;
                }
            }
        }
    }
    Ok(AdjunctionReport { units, counit: counit_res, triangle_left: left, triangle_right: right })
}

fn strings_len(f: &Presheaf, s: usize) -> usize {
    f.strings()[s].len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{PString, Poset};
    use crate::simplicial::Budget;

    fn chain(n: usize) -> Arc<Poset> {
        Arc::new(Poset::chain(n))
    }

    fn agree(f: &Presheaf) -> Lkan {
        let a = lkan(f, LkanStrategy::PairColimit).unwrap();
        let b = lkan(f, LkanStrategy::Coend).unwrap();
        assert!(a.object.iso_over(&b.object, Budget::default()).is_iso());
        a
    }

    #[test]
    fn representables_go_to_their_string() {
        let p = chain(2);
        for t in crate::poset::all_strings(&p) {
            let f = Presheaf::representable(p.clone(), &t).unwrap();
            let l = agree(&f);
            let s = StratSSet::string(p.clone(), &t);
            assert!(l.object.iso_over(&s, Budget::default()).is_iso(), "{}", t.display(&p));
        }
    }

    #[test]
    fn constant_point_gives_the_nerve() {
        for n in 0..3 {
            let p = chain(n);
            let f = Presheaf::pointlike(p.clone(), |_| true).unwrap();
            let l = agree(&f);
            assert!(l.object.iso_over(&StratSSet::terminal(p), Budget::default()).is_iso());
        }
        let v = Arc::new(Poset::new(["a", "b", "c"], &[("a".into(), "b".into()), ("a".into(), "c".into())]).unwrap());
        let l = agree(&Presheaf::pointlike(v.clone(), |_| true).unwrap());
        assert!(l.object.iso_over(&StratSSet::terminal(v), Budget::default()).is_iso());
    }

    #[test]
    fn single_vertex_value_collapses() {
        let p = chain(1);
        let only = PString::singleton(1);
        let l = agree(&Presheaf::pointlike(p.clone(), |s| *s == only).unwrap());
        assert!(l.object.iso_over(&StratSSet::point(p, 1), Budget::default()).is_iso());
    }

    #[test]
    fn representable_units_are_isos() {
        let p = chain(1);
        let t = PString::new(&p, &[0, 1]).unwrap();
        let f = Presheaf::representable(p.clone(), &t).unwrap();
        let r = adjunction_check(&f, &StratSSet::terminal(p), 2, Budget::default()).unwrap();
        assert!(r.ok(), "{r:?}");
        assert!(r.units.iter().all(|u| u.iso), "{:?}", r.units);
        assert!(r.triangle_left.checked > 0 && r.triangle_right.checked > 0);
    }

    #[test]
    fn triangles_for_a_simplex() {
        let p = chain(1);
        let x = StratSSet::simplex(p.clone(), &[0, 0, 1]).unwrap();
        let f = Presheaf::constant(p, Arc::new(standard_simplex(1))).unwrap();
        let r = adjunction_check(&f, &x, 1, Budget::default()).unwrap();
        assert!(r.ok(), "{r:?}");
        assert_eq!(r.triangle_left.skipped, 0);
    }
}
