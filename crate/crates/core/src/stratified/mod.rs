//! Simplicial sets over the nerve of a finite poset.
//!
//! A map to the nerve of a poset is determined by where it sends vertices,
//! so a [`StratSSet`] stores one label per vertex and checks that labels
//! weakly increase along every edge.

mod fibrancy;
mod horns;
mod replace;

pub use fibrancy::{is_fibrant, is_fibrant_bounded, is_jk_fibration, JkReport};
pub use horns::{classify_horn, generating_set, monotone_tuples, GeneratorItem, GeneratorKind, GeneratorSet, HornClass};
pub use replace::{fibrant_replace_nv, unfilled_horns, vex, Replacement};

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::poset::{ElemId, PString, Poset, PosetError};
use crate::simplicial::{
    product, standard_simplex, Budget, CategoryNerve, CellId, HomComplex, PosetNerve, ProductCosimplicial,
    ProductSet, SimplicialError, SimplicialMap, SimplicialSet, Simplex,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StratError {
    #[error("edge `{edge}` goes from stratum `{from}` down to `{to}`")]
    NonMonotone { edge: String, from: String, to: String },
    #[error("expected {expected} vertex labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("objects live over different posets")]
    BaseMismatch,
    #[error("`{0}` and `{1}` are not strictly comparable")]
    NotComparable(String, String),
    #[error("not a stratified map: {0}")]
    NotStratified(String),
    #[error("horn index {k} out of range for dimension {n}")]
    HornIndex { n: usize, k: usize },
    #[error("labels `{0}` are not weakly increasing")]
    LabelsNotMonotone(String),
    #[error("stage budget of {0} exhausted")]
    Stages(usize),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
}

/// A category presentation of the total space: the total space is the nerve
/// and vertex labels are the object labels.
#[derive(Clone, Debug)]
pub struct CategoryPresented {
    pub nerve: CategoryNerve,
}

/// A simplicial set `X → P`.
#[derive(Clone, Debug)]
pub struct StratSSet {
    total: Arc<SimplicialSet>,
    base: Arc<Poset>,
    labels: Vec<ElemId>,
    presentation: Option<Arc<CategoryPresented>>,
}

impl PartialEq for StratSSet {
    fn eq(&self, other: &Self) -> bool {
        self.total == other.total && self.base == other.base && self.labels == other.labels
    }
}

impl StratSSet {
    /// Validates that labels weakly increase along every edge.
    pub fn new(total: Arc<SimplicialSet>, base: Arc<Poset>, labels: Vec<ElemId>) -> Result<Self, StratError> {
        if labels.len() != total.num_cells(0) {
            return Err(StratError::LabelCount { expected: total.num_cells(0), got: labels.len() });
        }
        if labels.iter().any(|&l| l >= base.len()) {
            return Err(StratError::Poset(PosetError::UnknownElement("label index out of range".into())));
        }
        if total.cell_counts().len() > 1 {
            for e in total.cells_of_dim(1) {
                let vs = total.vertices_of(&Simplex::nondeg(e));
                if !base.leq(labels[vs[0]], labels[vs[1]]) {
                    return Err(StratError::NonMonotone {
                        edge: total.name(e).to_string(),
                        from: base.name(labels[vs[0]]).to_string(),
                        to: base.name(labels[vs[1]]).to_string(),
                    });
                }
            }
        }
        Ok(StratSSet { total, base, labels, presentation: None })
    }

    /// The nerve of a finite category with monotone object labels.
    pub fn from_category(nerve: CategoryNerve, base: Arc<Poset>, labels: Vec<ElemId>) -> Result<Self, StratError> {
        let mut x = StratSSet::new(nerve.sset.clone(), base, labels)?;
        x.presentation = Some(Arc::new(CategoryPresented { nerve }));
        Ok(x)
    }

    /// `Δ^0` sitting over `p`.
    pub fn point(base: Arc<Poset>, p: ElemId) -> Self {
        StratSSet::new(Arc::new(standard_simplex(0)), base, vec![p]).expect("a point is monotone")
    }

    /// The string `Σ` as a simplex over `P`.
    pub fn string(base: Arc<Poset>, sigma: &PString) -> Self {
        let d = Arc::new(standard_simplex(sigma.len() - 1));
        StratSSet::new(d, base, sigma.elems().to_vec()).expect("strings are chains")
    }

    /// `Δ^n` with the given monotone labels.
    pub fn simplex(base: Arc<Poset>, labels: &[ElemId]) -> Result<Self, StratError> {
        StratSSet::new(Arc::new(standard_simplex(labels.len() - 1)), base, labels.to_vec())
    }

    /// The nerve of `P` over itself.
    pub fn terminal(base: Arc<Poset>) -> Self {
        let n = PosetNerve::new(&base);
        let labels = (0..n.sset.num_cells(0)).map(|v| n.chain(CellId::new(0, v))[0]).collect();
        StratSSet::new(n.sset.clone(), base, labels).expect("identity is monotone")
    }

    pub fn total(&self) -> &Arc<SimplicialSet> {
        &self.total
    }

    pub fn base(&self) -> &Arc<Poset> {
        &self.base
    }

    pub fn labels(&self) -> &[ElemId] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> ElemId {
        self.labels[v]
    }

    pub fn presentation(&self) -> Option<&Arc<CategoryPresented>> {
        self.presentation.as_ref()
    }

    /// Drops the category presentation (forces the bounded fibrancy tier).
    pub fn forget_presentation(mut self) -> Self {
        self.presentation = None;
        self
    }

    /// Labels of the vertices of a simplex.
    pub fn labels_of(&self, x: &Simplex) -> Vec<ElemId> {
        self.total.vertices_of(x).into_iter().map(|v| self.labels[v]).collect()
    }

    /// The structure map `X → N(P)`.
    pub fn structure_map(&self) -> (PosetNerve, SimplicialMap) {
        let nerve = PosetNerve::new(&self.base);
        let images = (0..=self.total.trunc_dim())
            .map(|d| {
                self.total
                    .cells_of_dim(d)
                    .map(|c| nerve.simplex_of(&self.labels_of(&Simplex::nondeg(c))).expect("labels are monotone"))
                    .collect()
            })
            .collect();
        let m = SimplicialMap::new_unchecked(self.total.clone(), nerve.sset.clone(), images);
        (nerve, m)
    }

    /// The stratum over `p` with its inclusion.
    pub fn stratum(&self, p: ElemId) -> Result<(Arc<SimplicialSet>, SimplicialMap), StratError> {
        if p >= self.base.len() {
            return Err(StratError::Poset(PosetError::UnknownElement(p.to_string())));
        }
        let x = &self.total;
        Ok(x.subcomplex(|c| x.vertices_of(&Simplex::nondeg(c)).iter().all(|&v| self.labels[v] == p))?)
    }

    /// The stratum over `p` as a stratified object.
    pub fn stratum_strat(&self, p: ElemId) -> Result<(StratSSet, SimplicialMap), StratError> {
        let (s, inc) = self.stratum(p)?;
        let n = s.num_cells(0);
        Ok((StratSSet::new(s, self.base.clone(), vec![p; n])?, inc))
    }

    /// `X ⋊ K`: the product with labels pulled back from `X`.
    pub fn tensor(&self, k: &Arc<SimplicialSet>) -> (StratSSet, ProductSet) {
        let prod = product(&self.total, k);
        let labels = prod.sset.cells_of_dim(0).map(|v| self.labels[prod.components(v).0.cell.idx()]).collect();
        let x = StratSSet::new(prod.sset.clone(), self.base.clone(), labels).expect("projection is monotone");
        (x, prod)
    }

    /// The same object restricted to dimensions `≤ d`.
    pub fn truncate(&self, d: usize) -> StratSSet {
        StratSSet { total: Arc::new(self.total.truncate(d)), base: self.base.clone(), labels: self.labels.clone(), presentation: None }
    }

    /// Whether two objects agree up to an isomorphism over `P`.
    pub fn iso_over(&self, other: &StratSSet, budget: Budget) -> crate::simplicial::IsoOutcome {
        crate::simplicial::iso_check_with(&self.total, &other.total, |v, w| self.labels[v] == other.labels[w], budget)
    }
}

/// A map of simplicial sets commuting with the structure maps.
#[derive(Clone, Debug)]
pub struct StratMap {
    source: StratSSet,
    target: StratSSet,
    map: SimplicialMap,
}

impl StratMap {
    pub fn new(source: StratSSet, target: StratSSet, map: SimplicialMap) -> Result<Self, StratError> {
        if source.base != target.base {
            return Err(StratError::BaseMismatch);
        }
        if map.source() != source.total() || map.target() != target.total() {
            return Err(StratError::NotStratified("map endpoints differ from the stratified objects".into()));
        }
        map.validate()?;
        for v in 0..source.total.num_cells(0) {
            let w = map.vertex_image(v);
            if source.labels[v] != target.labels[w] {
                return Err(StratError::NotStratified(format!(
                    "vertex `{}` over `{}` goes to `{}` over `{}`",
                    source.total.name(CellId::new(0, v)),
                    source.base.name(source.labels[v]),
                    target.total.name(CellId::new(0, w)),
                    target.base.name(target.labels[w]),
                )));
            }
        }
        Ok(StratMap { source, target, map })
    }

    pub fn identity(x: StratSSet) -> Self {
        let map = SimplicialMap::identity(x.total.clone());
        StratMap { source: x.clone(), target: x, map }
    }

    pub fn source(&self) -> &StratSSet {
        &self.source
    }

    pub fn target(&self) -> &StratSSet {
        &self.target
    }

    pub fn map(&self) -> &SimplicialMap {
        &self.map
    }

    /// The induced map of strata over `p`.
    pub fn stratum_map(&self, p: ElemId) -> Result<SimplicialMap, StratError> {
        let (xs, ix) = self.source.stratum(p)?;
        let (ys, iy) = self.target.stratum(p)?;
        let back: HashMap<CellId, CellId> = iy.source().all_cells().map(|c| (iy.image(c).cell, c)).collect();
        let images = (0..=xs.trunc_dim())
            .map(|d| {
                xs.cells_of_dim(d)
                    .map(|c| {
                        let s = self.map.apply(ix.image(c));
                        Simplex { cell: back[&s.cell], sur: s.sur }
                    })
                    .collect()
            })
            .collect();
        Ok(SimplicialMap::new(xs, ys, images)?)
    }

    /// The induced map of links `p < q` by postcomposition.
    pub fn link_map(&self, p: ElemId, q: ElemId, max_dim: usize, budget: Budget) -> Result<SimplicialMap, StratError> {
        let sigma = comparable_pair(&self.source.base, p, q)?;
        let lx = rel_mapping(&StratSSet::string(self.source.base.clone(), &sigma), &self.source, max_dim, budget)?;
        let ly = rel_mapping(&StratSSet::string(self.source.base.clone(), &sigma), &self.target, max_dim, budget)?;
        lx.postcompose(&ly, &self.map)
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &StratMap) -> Result<StratMap, StratError> {
        StratMap::new(self.source.clone(), g.target.clone(), self.map.then(&g.map)?)
    }
}

fn comparable_pair(base: &Poset, p: ElemId, q: ElemId) -> Result<PString, StratError> {
    if !base.lt(p, q) {
        return Err(StratError::NotComparable(base.name(p).to_string(), base.name(q).to_string()));
    }
    Ok(PString::new(base, &[p, q])?)
}

/// `Map_{/P}(X, Y)` with the cosimplicial object `X ⋊ Δ^•` it was built
/// from.
pub struct RelMapping {
    pub hom: HomComplex,
    pub k: ProductCosimplicial,
}

/// Stratified maps `X ⋊ Δ^n → Y` for `n ≤ max_dim`.
pub fn rel_mapping(x: &StratSSet, y: &StratSSet, max_dim: usize, budget: Budget) -> Result<RelMapping, StratError> {
    if x.base != y.base {
        return Err(StratError::BaseMismatch);
    }
    let k = ProductCosimplicial::new(&x.total, max_dim)?;
    let hom = {
        let filter = |n: usize, c: CellId, image: &Simplex| {
            c.dim() > 0 || {
                let v = k.products[n].components(c).0.cell.idx();
                x.labels[v] == y.labels[image.cell.idx()]
            }
        };
        HomComplex::build(&k, &y.total, max_dim, &filter, budget, &|n, i, _| format!("m{n}.{i}"))?
    };
    Ok(RelMapping { hom, k })
}

/// The simplicial set `Map_{/P}(X, Y)` up to dimension `max_dim`.
pub fn rel_mapping_space(x: &StratSSet, y: &StratSSet, max_dim: usize, budget: Budget) -> Result<Arc<SimplicialSet>, StratError> {
    Ok(rel_mapping(x, y, max_dim, budget)?.hom.sset)
}

/// `Map_{/P}({p<q}, X)`.
pub fn link(x: &StratSSet, p: ElemId, q: ElemId, max_dim: usize, budget: Budget) -> Result<Arc<SimplicialSet>, StratError> {
    let sigma = comparable_pair(&x.base, p, q)?;
    rel_mapping_space(&StratSSet::string(x.base.clone(), &sigma), x, max_dim, budget)
}

impl RelMapping {
    /// Postcomposition with `f : Y → Z` into another mapping space out of
    /// the same source.
    pub fn postcompose(&self, other: &RelMapping, f: &SimplicialMap) -> Result<SimplicialMap, StratError> {
        let src = &self.hom.sset;
        let images = (0..=src.trunc_dim())
            .map(|d| {
                src.cells_of_dim(d)
                    .map(|c| {
                        let g = self.hom.element(c).then(f)?;
                        Ok(other.hom.simplex_of(&other.k, d, g.images()))
                    })
                    .collect::<Result<Vec<_>, SimplicialError>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SimplicialMap::new(src.clone(), other.hom.sset.clone(), images)?)
    }

    /// Precomposition with `g : W → X` (same target).
    pub fn precompose(&self, other: &RelMapping, g: &SimplicialMap) -> Result<SimplicialMap, StratError> {
        let src = &self.hom.sset;
        let images = (0..=src.trunc_dim())
            .map(|d| {
                let g_d = other.k.products[d].map_product(g, &SimplicialMap::identity(self.k.products[d].right.clone()), &self.k.products[d])?;
                src.cells_of_dim(d)
                    .map(|c| {
                        let h = g_d.then(&self.hom.element(c))?;
                        Ok(other.hom.simplex_of(&other.k, d, h.images()))
                    })
                    .collect::<Result<Vec<_>, SimplicialError>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SimplicialMap::new(src.clone(), other.hom.sset.clone(), images)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{iso_check, make_generator, Generator};

    fn chain(n: usize) -> Arc<Poset> {
        Arc::new(Poset::chain(n))
    }

    #[test]
    fn monotonicity_is_checked() {
        let d1 = Arc::new(standard_simplex(1));
        assert!(StratSSet::new(d1.clone(), chain(1), vec![0, 1]).is_ok());
        let err = StratSSet::new(d1, chain(1), vec![1, 0]).unwrap_err();
        assert!(matches!(err, StratError::NonMonotone { ref edge, .. } if edge == "01"), "{err}");
    }

    #[test]
    fn strata_of_a_simplex() {
        let x = StratSSet::simplex(chain(1), &[0, 0, 1]).unwrap();
        let (s0, _) = x.stratum(0).unwrap();
        assert!(iso_check(&s0, &Arc::new(standard_simplex(1)), Budget::default()).is_iso());
        let y = StratSSet::simplex(chain(2), &[0, 0, 2]).unwrap();
        assert!(y.stratum(1).unwrap().0.is_empty());
        let t = StratSSet::terminal(chain(2));
        for p in 0..3 {
            assert_eq!(t.stratum(p).unwrap().0.cell_counts(), vec![1]);
        }
    }

    #[test]
    fn tensor_with_interval() {
        let x = StratSSet::point(chain(1), 1);
        let (t, _) = x.tensor(&Arc::new(standard_simplex(1)));
        assert_eq!(t.total().cell_counts(), vec![2, 1]);
        assert_eq!(t.labels(), &[1, 1]);
    }

    #[test]
    fn mapping_space_examples() {
        let p = chain(1);
        let t = StratSSet::terminal(p.clone());
        let x = StratSSet::simplex(p.clone(), &[0, 0, 1]).unwrap();
        let m = rel_mapping_space(&x, &t, 2, Budget::default()).unwrap();
        assert_eq!(m.cell_counts(), vec![1, 0, 0]);
        let id = StratSSet::simplex(p.clone(), &[0, 1]).unwrap();
        assert_eq!(rel_mapping_space(&id, &id, 0, Budget::default()).unwrap().cell_counts(), vec![1]);
        let pt = StratSSet::point(p.clone(), 0);
        let s = rel_mapping_space(&pt, &x, 1, Budget::default()).unwrap();
        assert_eq!(s.cell_counts(), vec![2, 1]);
    }

    #[test]
    fn link_of_left_horn() {
        let h = make_generator(Generator::Horn(2, 0)).unwrap().sset;
        let x = StratSSet::new(h, chain(1), vec![0, 0, 1]).unwrap();
        let l = link(&x, 0, 1, 0, Budget::default()).unwrap();
        assert_eq!(l.cell_counts(), vec![1]);
        assert!(link(&x, 1, 0, 0, Budget::default()).is_err());
    }
}
