//! Simplicial sets of maps `K_• → X` out of a cosimplicial object `K_•`:
//! mapping spaces (`K_n = A × Δ^n`) and Kan's `Ex` (`K_n = sd Δ^n`).

use std::collections::HashMap;
use std::sync::Arc;

use super::generators::{face_name, nerve_of_order, PosetNerve};
use super::product::{product, ProductSet};
use super::search::{Budget, MapSearch, SearchError, TargetIndex};
use super::{codegeneracy, CellId, SSetBuilder, SimplicialError, SimplicialMap, SimplicialSet, Simplex, Surj};

/// A cosimplicial simplicial set, materialized up to some level.
pub trait CosimplicialObject {
    fn level(&self, n: usize) -> &Arc<SimplicialSet>;
    /// `δ_i : K_{n-1} → K_n`
    fn coface(&self, n: usize, i: usize) -> &SimplicialMap;
    /// `σ_i : K_{n+1} → K_n`
    fn codegeneracy(&self, n: usize, i: usize) -> &SimplicialMap;
}

/// `Δ^n` as the nerve of `[n]`.
pub fn simplex_nerve(n: usize) -> PosetNerve {
    nerve_of_order(n + 1, |a, b| a < b, |c| face_name(n, c))
}

/// `n ↦ A × Δ^n`.
pub struct ProductCosimplicial {
    pub a: Arc<SimplicialSet>,
    pub products: Vec<ProductSet>,
    cofaces: Vec<Vec<SimplicialMap>>,
    codegeneracies: Vec<Vec<SimplicialMap>>,
}

impl ProductCosimplicial {
    /// Levels `0..=max_level`.
    pub fn new(a: &Arc<SimplicialSet>, max_level: usize) -> Result<Self, SimplicialError> {
        let simplices: Vec<PosetNerve> = (0..=max_level).map(simplex_nerve).collect();
        let products: Vec<ProductSet> = simplices.iter().map(|d| product(a, &d.sset)).collect();
        let id_a = SimplicialMap::identity(a.clone());
        let mut cofaces = vec![Vec::new()];
        for n in 1..=max_level {
            let mut row = Vec::new();
            for i in 0..=n {
                let d = simplices[n - 1].map_to(&simplices[n], |j| if j < i { j } else { j + 1 })?;
                row.push(products[n - 1].map_product(&id_a, &d, &products[n])?);
            }
            cofaces.push(row);
        }
        let mut codegeneracies = Vec::new();
        for n in 0..max_level {
            let mut row = Vec::new();
            for i in 0..=n {
                let s = simplices[n + 1].map_to(&simplices[n], |j| if j <= i { j } else { j - 1 })?;
                row.push(products[n + 1].map_product(&id_a, &s, &products[n])?);
            }
            codegeneracies.push(row);
        }
        Ok(ProductCosimplicial { a: a.clone(), products, cofaces, codegeneracies })
    }
}

impl CosimplicialObject for ProductCosimplicial {
    fn level(&self, n: usize) -> &Arc<SimplicialSet> {
        &self.products[n].sset
    }
    fn coface(&self, n: usize, i: usize) -> &SimplicialMap {
        &self.cofaces[n][i]
    }
    fn codegeneracy(&self, n: usize, i: usize) -> &SimplicialMap {
        &self.codegeneracies[n][i]
    }
}

/// `n ↦ sd Δ^n`, the nerve of the poset of nonempty faces of `Δ^n`.
pub struct Subdivided {
    nerves: Vec<PosetNerve>,
    /// face (as sorted vertex list) of each poset element, per level
    faces: Vec<Vec<Vec<usize>>>,
    cofaces: Vec<Vec<SimplicialMap>>,
    codegeneracies: Vec<Vec<SimplicialMap>>,
}

fn nonempty_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (1u32..(1 << (n + 1)))
        .map(|mask| (0..=n).filter(|&j| mask & (1 << j) != 0).collect())
        .collect();
    out.sort_by(|a: &Vec<usize>, b: &Vec<usize>| (a.len(), a).cmp(&(b.len(), b)));
    out
}

impl Subdivided {
    pub fn new(max_level: usize) -> Result<Self, SimplicialError> {
        let faces: Vec<Vec<Vec<usize>>> = (0..=max_level).map(nonempty_subsets).collect();
        let nerves: Vec<PosetNerve> = faces
            .iter()
            .map(|fs| {
                let subset = |a: &Vec<usize>, b: &Vec<usize>| a.len() < b.len() && a.iter().all(|x| b.contains(x));
                nerve_of_order(fs.len(), |a, b| subset(&fs[a], &fs[b]), |c| {
                    let parts: Vec<String> = c.iter().map(|&e| fs[e].iter().map(|v| v.to_string()).collect::<String>()).collect();
                    format!("<{}>", parts.join("<"))
                })
            })
            .collect();
        let elem = |level: usize, f: &[usize]| -> usize {
            let mut f = f.to_vec();
            f.sort();
            f.dedup();
            faces[level].iter().position(|g| *g == f).expect("face exists")
        };
        let mut cofaces = vec![Vec::new()];
        for n in 1..=max_level {
            let mut row = Vec::new();
            for i in 0..=n {
                let m = nerves[n - 1].map_to(&nerves[n], |e| {
                    let img: Vec<usize> = faces[n - 1][e].iter().map(|&j| if j < i { j } else { j + 1 }).collect();
                    elem(n, &img)
                })?;
                row.push(m);
            }
            cofaces.push(row);
        }
        let mut codegeneracies = Vec::new();
        for n in 0..max_level {
            let mut row = Vec::new();
            for i in 0..=n {
                let m = nerves[n + 1].map_to(&nerves[n], |e| {
                    let img: Vec<usize> = faces[n + 1][e].iter().map(|&j| if j <= i { j } else { j - 1 }).collect();
                    elem(n, &img)
                })?;
                row.push(m);
            }
            codegeneracies.push(row);
        }
        Ok(Subdivided { nerves, faces, cofaces, codegeneracies })
    }

    /// For each cell of `sd Δ^n` (a chain of faces), its last-vertex map
    /// `[k] → [n]`.
    fn last_vertex(&self, n: usize, c: CellId) -> Surj {
        self.nerves[n]
            .chain(c)
            .iter()
            .map(|&e| *self.faces[n][e].last().expect("nonempty face") as u8)
            .collect()
    }
}

impl CosimplicialObject for Subdivided {
    fn level(&self, n: usize) -> &Arc<SimplicialSet> {
        &self.nerves[n].sset
    }
    fn coface(&self, n: usize, i: usize) -> &SimplicialMap {
        &self.cofaces[n][i]
    }
    fn codegeneracy(&self, n: usize, i: usize) -> &SimplicialMap {
        &self.codegeneracies[n][i]
    }
}

type Element = Vec<Vec<Simplex>>;

/// `Hom(K_•, X)` truncated at `max_dim`.
#[derive(Clone, Debug)]
pub struct HomComplex {
    pub sset: Arc<SimplicialSet>,
    pub target: Arc<SimplicialSet>,
    levels: Vec<Arc<SimplicialSet>>,
    elements: Vec<Vec<Element>>,
    lookup: Vec<HashMap<Element, usize>>,
}

fn precompose(x: &SimplicialSet, elem: &[Vec<Simplex>], phi: &SimplicialMap) -> Element {
    phi.images()
        .iter()
        .map(|l| l.iter().map(|s| x.apply(&elem[s.cell.dim()][s.cell.idx()], &s.sur)).collect())
        .collect()
}

impl HomComplex {
    /// Enumerates `Hom(K_n, X)` for `n ≤ max_dim`, keeping maps accepted by
    /// `filter(n, cell of K_n, image)`.
    pub fn build(
        k: &dyn CosimplicialObject,
        x: &Arc<SimplicialSet>,
        max_dim: usize,
        filter: &dyn Fn(usize, CellId, &Simplex) -> bool,
        budget: Budget,
        name: &dyn Fn(usize, usize, &[Vec<Simplex>]) -> String,
    ) -> Result<Self, SimplicialError> {
        let top_needed = k.level(max_dim).max_dim();
        x.require(top_needed, "mapping target")?;
        let index = TargetIndex::new(x, top_needed, false)?;
        let mut b = SSetBuilder::new(max_dim, false);
        let mut hom = HomComplex {
            sset: Arc::new(SimplicialSet::empty()),
            target: x.clone(),
            levels: (0..=max_dim).map(|n| k.level(n).clone()).collect(),
            elements: vec![Vec::new(); max_dim + 1],
            lookup: vec![HashMap::new(); max_dim + 1],
        };
        for n in 0..=max_dim {
            let kn = k.level(n);
            let maps = MapSearch::new(kn, &index)
                .filter(|c, s| filter(n, c, s))
                .budget(budget)
                .all()
                .map_err(|e| match e {
                    SearchError::Budget { limit } => {
                        SimplicialError::Budget { resource: format!("maps at level {n}"), limit }
                    }
                    SearchError::Simplicial(e) => e,
                })?;
            for m in maps {
                let degenerate = (0..n).any(|i| {
                    let z = precompose(x, &m, k.coface(n, i));
                    precompose(x, &z, k.codegeneracy(n - 1, i)) == m
                });
                if degenerate {
                    continue;
                }
                let faces: Vec<Simplex> = if n == 0 {
                    Vec::new()
                } else {
                    (0..=n).map(|i| hom.normalize_in(k, n - 1, &precompose(x, &m, k.coface(n, i)))).collect()
                };
                let idx = hom.elements[n].len();
                b.add_cell(name(n, idx, &m), faces)?;
                hom.lookup[n].insert(m.clone(), idx);
                hom.elements[n].push(m);
            }
        }
        hom.sset = Arc::new(b.build_unchecked());
        Ok(hom)
    }

    fn normalize_in(&self, k: &dyn CosimplicialObject, n: usize, y: &[Vec<Simplex>]) -> Simplex {
        self.try_normalize_in(k, n, y).unwrap_or_else(|| panic!("map at level {n} is neither a stored element nor degenerate"))
    }

    fn try_normalize_in(&self, k: &dyn CosimplicialObject, n: usize, y: &[Vec<Simplex>]) -> Option<Simplex> {
        if let Some(&i) = self.lookup[n].get(y) {
            return Some(Simplex::nondeg(CellId::new(n, i)));
        }
        let x = &self.target;
        for i in 0..n {
            let z = precompose(x, y, k.coface(n, i));
            if precompose(x, &z, k.codegeneracy(n - 1, i)) == y {
                let root = self.try_normalize_in(k, n - 1, &z)?;
                let sigma = codegeneracy(n - 1, i);
                let sur: Surj = sigma.iter().map(|&j| root.sur[j as usize]).collect();
                return Some(Simplex { cell: root.cell, sur });
            }
        }
        None
    }

    /// The element `K_n → X` behind a cell.
    pub fn element(&self, c: CellId) -> SimplicialMap {
        SimplicialMap::new_unchecked(
            self.levels[c.dim()].clone(),
            self.target.clone(),
            self.elements[c.dim()][c.idx()].clone(),
        )
    }

    /// Normal form of an arbitrary map `K_n → X` (given by its images).
    pub fn simplex_of(&self, k: &dyn CosimplicialObject, n: usize, images: &[Vec<Simplex>]) -> Simplex {
        self.normalize_in(k, n, images)
    }

    /// Like [`Self::simplex_of`], but `None` if the map is not in the complex
    /// (for instance, rejected by the build filter).
    pub fn try_simplex_of(&self, k: &dyn CosimplicialObject, n: usize, images: &[Vec<Simplex>]) -> Option<Simplex> {
        if n >= self.levels.len() {
            return None;
        }
        self.try_normalize_in(k, n, images)
    }

    pub fn level(&self, n: usize) -> &Arc<SimplicialSet> {
        &self.levels[n]
    }
}

/// `Map(A, X)` up to dimension `max_dim`.
pub fn mapping_space(
    a: &Arc<SimplicialSet>,
    x: &Arc<SimplicialSet>,
    max_dim: usize,
    budget: Budget,
) -> Result<HomComplex, SimplicialError> {
    mapping_space_with(a, x, max_dim, budget).map(|(h, _)| h)
}

/// [`mapping_space`] together with the products `A × Δ^n` it was built from.
pub fn mapping_space_with(
    a: &Arc<SimplicialSet>,
    x: &Arc<SimplicialSet>,
    max_dim: usize,
    budget: Budget,
) -> Result<(HomComplex, ProductCosimplicial), SimplicialError> {
    let k = ProductCosimplicial::new(a, max_dim)?;
    let h = HomComplex::build(&k, x, max_dim, &|_, _, _| true, budget, &|n, i, _| format!("m{n}.{i}"))?;
    Ok((h, k))
}

impl HomComplex {
    /// The vertex of `Map(A, X)` corresponding to a map `A → X`.
    pub fn vertex_of_map(&self, k: &ProductCosimplicial, f: &SimplicialMap) -> Option<usize> {
        let p = &k.products[0];
        let images: Element = (0..=p.sset.trunc_dim())
            .map(|d| p.sset.cells_of_dim(d).map(|c| f.apply(&p.components(c).0)).collect())
            .collect();
        self.lookup[0].get(&images).copied()
    }

    /// The map `A → X` behind a vertex of `Map(A, X)`.
    pub fn map_of_vertex(&self, k: &ProductCosimplicial, v: usize) -> SimplicialMap {
        let p = &k.products[0];
        let elem = &self.elements[0][v];
        let images: Vec<Vec<Simplex>> = (0..=k.a.trunc_dim())
            .map(|d| {
                k.a.cells_of_dim(d)
                    .map(|c| {
                        let pc = p.pair(&Simplex::nondeg(c), &Simplex { cell: CellId::new(0, 0), sur: smallvec::smallvec![0; d + 1] });
                        self.target.apply(&elem[pc.cell.dim()][pc.cell.idx()], &pc.sur)
                    })
                    .collect()
            })
            .collect();
        SimplicialMap::new_unchecked(k.a.clone(), self.target.clone(), images)
    }
}

/// One application of `Ex`, with the last-vertex inclusion.
#[derive(Clone, Debug)]
pub struct Ex {
    pub hom: HomComplex,
    pub sset: Arc<SimplicialSet>,
    pub inclusion: SimplicialMap,
}

/// `Ex X` up to dimension `max_dim` with the canonical map `X → Ex X`
/// (defined on the cells of `X` of dimension `≤ max_dim`).
pub fn ex_once(x: &Arc<SimplicialSet>, max_dim: usize, budget: Budget) -> Result<Ex, SimplicialError> {
    let k = Subdivided::new(max_dim)?;
    let hom = HomComplex::build(&k, x, max_dim, &|_, _, _| true, budget, &|n, i, m| {
        if n == 0 {
            x.name(m[0][0].cell).to_string()
        } else {
            format!("x{n}.{i}")
        }
    })?;
    let source = if x.max_dim() <= max_dim && x.is_complete() { x.clone() } else { Arc::new(x.truncate(max_dim)) };
    let mut images = Vec::new();
    for d in 0..=source.trunc_dim() {
        let mut level = Vec::new();
        for c in source.cells_of_dim(d) {
            let sigma = Simplex::nondeg(c);
            let kd = k.level(d);
            let elem: Element = (0..=kd.trunc_dim())
                .map(|e| kd.cells_of_dim(e).map(|kc| x.apply(&sigma, &k.last_vertex(d, kc))).collect())
                .collect();
            level.push(hom.simplex_of(&k, d, &elem));
        }
        images.push(level);
    }
    let sset = hom.sset.clone();
    let inclusion = SimplicialMap::new_unchecked(source, sset.clone(), images);
    Ok(Ex { hom, sset, inclusion })
}

/// `Ex^m X` up to dimension `max_dim` with the composite inclusion.
pub fn ex(
    x: &Arc<SimplicialSet>,
    iterations: usize,
    max_dim: usize,
    budget: Budget,
) -> Result<(Arc<SimplicialSet>, SimplicialMap), SimplicialError> {
    let start = if x.max_dim() <= max_dim && x.is_complete() { x.clone() } else { Arc::new(x.truncate(max_dim)) };
    let mut cur = start.clone();
    let mut inc = SimplicialMap::identity(start);
    for _ in 0..iterations {
        let step = ex_once(&cur, max_dim, budget)?;
        inc = inc.then(&step.inclusion)?;
        cur = step.sset;
    }
    Ok((cur, inc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{iso_check, make_generator, standard_simplex, Generator};

    #[test]
    fn mapping_space_from_point_recovers_target() {
        let h = make_generator(Generator::Horn(2, 0)).unwrap().sset;
        let pt = Arc::new(standard_simplex(0));
        let m = mapping_space(&pt, &h, 2, Budget::default()).unwrap();
        let t = Arc::new(h.truncate(2));
        assert!(iso_check(&m.sset, &t, Budget::default()).is_iso());
    }

    #[test]
    fn maps_from_boundary_of_edge() {
        let b1 = make_generator(Generator::Boundary(1)).unwrap().sset;
        let d1 = Arc::new(standard_simplex(1));
        let m = mapping_space(&b1, &d1, 0, Budget::default()).unwrap();
        assert_eq!(m.sset.num_cells(0), 4);
    }

    #[test]
    fn ex_of_circle_counts() {
        let b2 = make_generator(Generator::Boundary(2)).unwrap().sset;
        let e = ex_once(&b2, 1, Budget::default()).unwrap();
        assert_eq!(e.sset.cell_counts(), vec![3, 11]);
        e.inclusion.validate().unwrap();
        assert!(e.inclusion.is_injective());
    }

    #[test]
    fn ex_of_point() {
        let pt = Arc::new(standard_simplex(0));
        let (e, inc) = ex(&pt, 2, 2, Budget::default()).unwrap();
        assert_eq!(e.cell_counts(), vec![1, 0, 0]);
        inc.validate().unwrap();
    }
}
