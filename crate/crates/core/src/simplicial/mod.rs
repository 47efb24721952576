//! Finite, dimension-truncated simplicial sets in Eilenberg–Zilber normal form.
//!
//! Only nondegenerate simplices ("cells") are stored. An arbitrary simplex is
//! a [`Simplex`]: a cell `σ` of dimension `m` together with a monotone
//! surjection `η : [n] → [m]`, read as the degenerate simplex `η^*σ`. The
//! degeneracy word `s_{i_1} … s_{i_k}` (strictly decreasing indices) is the set
//! of positions `i` with `η(i) = η(i+1)`.
//!
//! Every set carries a truncation: data is exact in dimensions `≤ trunc_dim`.
//! A *complete* set has no cells above `trunc_dim` at all, so it is exact in
//! every dimension; nerves of categories with nontrivial isomorphisms are not
//! complete and are only known up to their truncation.

mod category;
mod colimit;
mod generators;
mod hom;
mod iso;
mod map;
mod product;
mod search;

pub use category::{CategoryError, CategoryNerve, FiniteCategory, MorId, Morphism, Presentation, Word};
pub use colimit::{colimit, Colimit, Diagram};
pub use generators::{face_name, make_generator, nerve_of_order, standard_simplex, Generator, PosetNerve, StandardInclusion};
pub use hom::{
    ex, ex_once, mapping_space, mapping_space_with, simplex_nerve, CosimplicialObject, Ex, HomComplex, ProductCosimplicial,
    Subdivided,
};
pub use iso::{iso_check, iso_check_with, IsoOutcome};
pub use map::SimplicialMap;
pub use product::{product, product_with_names, ProductSet};
pub use search::{
    enumerate_maps, has_lift, has_lift_with, Budget, LiftOutcome, LiftProblem, MapSearch, SearchError,
    SearchStats, TargetIndex,
};

use std::collections::HashMap;
use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

/// A monotone map `[n] → [m]`, stored as its list of values.
pub type Surj = SmallVec<[u8; 8]>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplicialError {
    #[error("duplicate simplex name `{0}`")]
    DuplicateName(String),
    #[error("unknown simplex `{0}`")]
    UnknownSimplex(String),
    #[error("simplex `{name}` of dimension {dim} needs {expected} faces, got {got}")]
    FaceCount { name: String, dim: usize, expected: usize, got: usize },
    #[error("face {index} of `{name}` has dimension {got}, expected {expected}")]
    FaceDimension { name: String, index: usize, expected: usize, got: usize },
    #[error("simplex `{name}` of dimension {dim} exceeds truncation {trunc}")]
    AboveTruncation { name: String, dim: usize, trunc: usize },
    #[error("simplicial identity d_{i} d_{j} = d_{jm1} d_{i} fails on `{name}`", jm1 = j - 1)]
    SimplicialIdentity { name: String, i: usize, j: usize },
    #[error("malformed degeneracy word in `{0}`")]
    BadDegeneracy(String),
    #[error("map is not simplicial: {0}")]
    NotAMap(String),
    #[error("truncation mismatch: {0}")]
    TruncMismatch(String),
    #[error("data needed in dimension {needed} but `{what}` is only known up to {trunc}")]
    Truncated { what: String, needed: usize, trunc: usize },
    #[error("budget exceeded: {resource} (limit {limit})")]
    Budget { resource: String, limit: u64 },
    #[error("{0}")]
    Invalid(String),
}

/// Identifies a nondegenerate simplex of a [`SimplicialSet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellId {
    pub dim: u32,
    pub idx: u32,
}

impl CellId {
    pub fn new(dim: usize, idx: usize) -> Self {
        CellId { dim: dim as u32, idx: idx as u32 }
    }

    pub fn dim(self) -> usize {
        self.dim as usize
    }

    pub fn idx(self) -> usize {
        self.idx as usize
    }
}

/// A simplex in normal form: `sur^* cell`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    pub cell: CellId,
    pub sur: Surj,
}

impl Simplex {
    pub fn nondeg(cell: CellId) -> Self {
        Simplex { cell, sur: identity_surj(cell.dim()) }
    }

    pub fn vertex(idx: usize) -> Self {
        Simplex::nondeg(CellId::new(0, idx))
    }

    pub fn dim(&self) -> usize {
        self.sur.len() - 1
    }

    pub fn is_degenerate(&self) -> bool {
        self.sur.len() != self.cell.dim() + 1
    }

    /// Indices of the degeneracy word, strictly decreasing.
    pub fn degeneracy_word(&self) -> Vec<usize> {
        let mut w: Vec<usize> =
            (0..self.dim()).filter(|&i| self.sur[i] == self.sur[i + 1]).collect();
        w.reverse();
        w
    }

    /// Rebuilds a simplex from a cell and a strictly decreasing degeneracy word.
    pub fn from_word(cell: CellId, word: &[usize]) -> Option<Self> {
        if word.windows(2).any(|w| w[0] <= w[1]) {
            return None;
        }
        let n = cell.dim() + word.len();
        if word.iter().any(|&i| i >= n) {
            return None;
        }
        let mut sur = Surj::new();
        let mut v: u8 = 0;
        for pos in 0..=n {
            sur.push(v);
            if pos < n && !word.contains(&pos) {
                v += 1;
            }
        }
        (v as usize == cell.dim()).then_some(Simplex { cell, sur })
    }
}

pub fn identity_surj(n: usize) -> Surj {
    (0..=n as u8).collect()
}

/// The coface map `δ_i : [n-1] → [n]`.
pub fn coface(n: usize, i: usize) -> Surj {
    (0..n).map(|j| if j < i { j as u8 } else { j as u8 + 1 }).collect()
}

/// The codegeneracy map `σ_i : [n+1] → [n]`.
pub fn codegeneracy(n: usize, i: usize) -> Surj {
    (0..=n + 1).map(|j| if j <= i { j as u8 } else { j as u8 - 1 }).collect()
}

/// All monotone surjections `[n] → [m]`, in lexicographic order.
pub fn surjections(n: usize, m: usize) -> Vec<Surj> {
    let mut out = Vec::new();
    if m > n {
        return out;
    }
    // Choose which of the n gaps are increments.
    fn rec(pos: usize, n: usize, m: usize, cur: &mut Surj, out: &mut Vec<Surj>) {
        let v = *cur.last().expect("nonempty") as usize;
        if pos == n {
            if v == m {
                out.push(cur.clone());
            }
            return;
        }
        let remaining = n - pos;
        // stay
        if m - v < remaining {
            cur.push(v as u8);
            rec(pos + 1, n, m, cur, out);
            cur.pop();
        }
        if v < m {
            cur.push(v as u8 + 1);
            rec(pos + 1, n, m, cur, out);
            cur.pop();
        }
    }
    let mut cur: Surj = SmallVec::new();
    cur.push(0);
    rec(0, n, m, &mut cur, &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub name: String,
    pub faces: Vec<Simplex>,
}

/// A finite simplicial set presented by its nondegenerate simplices.
#[derive(Clone, PartialEq, Eq)]
pub struct SimplicialSet {
    trunc_dim: usize,
    complete: bool,
    cells: Vec<Vec<Cell>>,
    names: HashMap<String, CellId>,
}

impl fmt::Debug for SimplicialSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let counts: Vec<usize> = self.cells.iter().map(Vec::len).collect();
        f.debug_struct("SimplicialSet")
            .field("trunc_dim", &self.trunc_dim)
            .field("complete", &self.complete)
            .field("cells", &counts)
            .finish()
    }
}

/// Incremental construction of a [`SimplicialSet`].
#[derive(Debug, Clone)]
pub struct SSetBuilder {
    trunc_dim: usize,
    complete: bool,
    cells: Vec<Vec<Cell>>,
    names: HashMap<String, CellId>,
}

impl SSetBuilder {
    pub fn new(trunc_dim: usize, complete: bool) -> Self {
        SSetBuilder {
            trunc_dim,
            complete,
            cells: vec![Vec::new(); trunc_dim + 1],
            names: HashMap::new(),
        }
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> Result<CellId, SimplicialError> {
        self.add_cell(name, Vec::new())
    }

    /// Adds a cell of dimension `faces.len() - 1` (or 0 if `faces` is empty).
    pub fn add_cell(
        &mut self,
        name: impl Into<String>,
        faces: Vec<Simplex>,
    ) -> Result<CellId, SimplicialError> {
        let name = name.into();
        let dim = if faces.is_empty() { 0 } else { faces.len() - 1 };
        if dim == 0 && faces.len() == 1 {
            return Err(SimplicialError::FaceCount { name, dim: 0, expected: 0, got: 1 });
        }
        if dim > self.trunc_dim {
            return Err(SimplicialError::AboveTruncation { name, dim, trunc: self.trunc_dim });
        }
        if self.names.contains_key(&name) {
            return Err(SimplicialError::DuplicateName(name));
        }
        for (i, f) in faces.iter().enumerate() {
            if f.dim() + 1 != dim {
                return Err(SimplicialError::FaceDimension {
                    name,
                    index: i,
                    expected: dim - 1,
                    got: f.dim(),
                });
            }
            let known = self.cells.get(f.cell.dim()).map_or(0, Vec::len);
            if f.cell.idx() >= known || f.cell.dim() >= dim {
                return Err(SimplicialError::UnknownSimplex(format!("face {i} of `{name}`")));
            }
        }
        let id = CellId::new(dim, self.cells[dim].len());
        self.names.insert(name.clone(), id);
        self.cells[dim].push(Cell { name, faces });
        Ok(id)
    }

    pub fn lookup(&self, name: &str) -> Option<CellId> {
        self.names.get(name).copied()
    }

    pub fn num_cells(&self, dim: usize) -> usize {
        self.cells.get(dim).map_or(0, Vec::len)
    }

    /// Face tuple of a cell already added.
    pub fn faces(&self, id: CellId) -> &[Simplex] {
        &self.cells[id.dim()][id.idx()].faces
    }

    /// Validates the simplicial identities and returns the set.
    pub fn build(self) -> Result<SimplicialSet, SimplicialError> {
        let set = self.build_unchecked();
        set.check_identities()?;
        Ok(set)
    }

    /// Returns the set without checking simplicial identities (for
    /// constructions that satisfy them by construction).
    pub fn build_unchecked(self) -> SimplicialSet {
        let mut cells = self.cells;
        let mut trunc = self.trunc_dim;
        if self.complete {
            while trunc > 0 && cells[trunc].is_empty() {
                cells.pop();
                trunc -= 1;
            }
        }
        SimplicialSet { trunc_dim: trunc, complete: self.complete, cells, names: self.names }
    }
}

impl SimplicialSet {
    pub fn empty() -> Self {
        SSetBuilder::new(0, true).build_unchecked()
    }

    pub fn trunc_dim(&self) -> usize {
        self.trunc_dim
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Whether all `n`-simplices are known.
    pub fn known_to(&self, n: usize) -> bool {
        self.complete || n <= self.trunc_dim
    }

    pub fn require(&self, n: usize, what: &str) -> Result<(), SimplicialError> {
        if self.known_to(n) {
            Ok(())
        } else {
            Err(SimplicialError::Truncated { what: what.to_string(), needed: n, trunc: self.trunc_dim })
        }
    }

    /// Highest dimension holding a cell (0 for the empty set).
    pub fn max_dim(&self) -> usize {
        (0..self.cells.len()).rev().find(|&d| !self.cells[d].is_empty()).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(Vec::is_empty)
    }

    pub fn num_cells(&self, dim: usize) -> usize {
        self.cells.get(dim).map_or(0, Vec::len)
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn total_cells(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    pub fn cell(&self, id: CellId) -> &Cell {
        &self.cells[id.dim()][id.idx()]
    }

    pub fn cells_of_dim(&self, dim: usize) -> impl Iterator<Item = CellId> + '_ {
        (0..self.num_cells(dim)).map(move |i| CellId::new(dim, i))
    }

    /// All cells, ordered by dimension and index.
    pub fn all_cells(&self) -> impl Iterator<Item = CellId> + '_ {
        (0..self.cells.len()).flat_map(move |d| self.cells_of_dim(d))
    }

    pub fn name(&self, id: CellId) -> &str {
        &self.cells[id.dim()][id.idx()].name
    }

    pub fn lookup(&self, name: &str) -> Option<CellId> {
        self.names.get(name).copied()
    }

    /// Renders a simplex as `name` or `name!s2s0`.
    pub fn format_simplex(&self, x: &Simplex) -> String {
        let mut s = self.name(x.cell).to_string();
        let word = x.degeneracy_word();
        if !word.is_empty() {
            s.push('!');
            for i in word {
                s.push_str(&format!("s{i}"));
            }
        }
        s
    }

    /// Parses `name` or `name!s<i1>s<i2>…` (strictly decreasing indices).
    pub fn parse_simplex(&self, text: &str) -> Result<Simplex, SimplicialError> {
        // names may themselves contain `!` (product cells), so try the
        // whole text first and otherwise split at the last `!`
        let (name, word) = match (self.lookup(text), text.rsplit_once('!')) {
            (None, Some((n, w))) => (n, Some(w)),
            _ => (text, None),
        };
        let cell = self
            .lookup(name)
            .ok_or_else(|| SimplicialError::UnknownSimplex(name.to_string()))?;
        let mut idx = Vec::new();
        if let Some(w) = word {
            for part in w.split('s').skip(1) {
                idx.push(part.parse::<usize>().map_err(|_| SimplicialError::BadDegeneracy(text.to_string()))?);
            }
            if !w.starts_with('s') || idx.is_empty() {
                return Err(SimplicialError::BadDegeneracy(text.to_string()));
            }
        }
        Simplex::from_word(cell, &idx).ok_or_else(|| SimplicialError::BadDegeneracy(text.to_string()))
    }

    /// `θ^* x` for a monotone `θ : [k] → [n]`, returned in normal form.
    pub fn apply(&self, x: &Simplex, theta: &[u8]) -> Simplex {
        let phi: Surj = theta.iter().map(|&t| x.sur[t as usize]).collect();
        let mut image: Surj = phi.clone();
        image.dedup();
        let psi: Surj = {
            let mut pos = 0u8;
            let mut out = Surj::new();
            for (i, &v) in phi.iter().enumerate() {
                if i > 0 && v != phi[i - 1] {
                    pos += 1;
                }
                out.push(pos);
            }
            out
        };
        let y = self.restrict(x.cell, &image);
        Simplex { cell: y.cell, sur: psi.iter().map(|&p| y.sur[p as usize]).collect() }
    }

    /// The face of a cell spanned by the sorted vertex positions `image`.
    pub fn restrict(&self, cell: CellId, image: &[u8]) -> Simplex {
        let m = cell.dim();
        if image.len() == m + 1 {
            return Simplex::nondeg(cell);
        }
        let j = (0..=m as u8)
            .find(|v| !image.contains(v))
            .expect("proper subset misses a vertex");
        let face = &self.cell(cell).faces[j as usize];
        let theta: Surj = image.iter().map(|&i| if i < j { i } else { i - 1 }).collect();
        self.apply(face, &theta)
    }

    /// `d_i x`.
    pub fn face(&self, x: &Simplex, i: usize) -> Simplex {
        self.apply(x, &coface(x.dim(), i))
    }

    /// `s_i x`.
    pub fn degeneracy(&self, x: &Simplex, i: usize) -> Simplex {
        let sigma = codegeneracy(x.dim(), i);
        Simplex { cell: x.cell, sur: sigma.iter().map(|&j| x.sur[j as usize]).collect() }
    }

    /// Faces `d_0 x, …, d_n x`.
    pub fn faces_of(&self, x: &Simplex) -> Vec<Simplex> {
        if x.dim() == 0 {
            return Vec::new();
        }
        (0..=x.dim()).map(|i| self.face(x, i)).collect()
    }

    /// Vertex `k` of `x`, as a vertex index.
    pub fn vertex_of(&self, x: &Simplex, k: usize) -> usize {
        self.apply(x, &[k as u8]).cell.idx()
    }

    pub fn vertices_of(&self, x: &Simplex) -> Vec<usize> {
        (0..=x.dim()).map(|k| self.vertex_of(x, k)).collect()
    }

    /// All `n`-simplices, degenerate ones included.
    pub fn simplices(&self, n: usize) -> Vec<Simplex> {
        let mut out = Vec::new();
        for m in 0..=n.min(self.cells.len().saturating_sub(1)) {
            let surs = surjections(n, m);
            for c in self.cells_of_dim(m) {
                for s in &surs {
                    out.push(Simplex { cell: c, sur: s.clone() });
                }
            }
        }
        out
    }

    fn check_identities(&self) -> Result<(), SimplicialError> {
        for d in 2..self.cells.len() {
            for c in self.cells_of_dim(d) {
                let x = Simplex::nondeg(c);
                for j in 0..=d {
                    let dj = self.face(&x, j);
                    for i in 0..j {
                        let lhs = self.face(&dj, i);
                        let rhs = self.face(&self.face(&x, i), j - 1);
                        if lhs != rhs {
                            return Err(SimplicialError::SimplicialIdentity {
                                name: self.name(c).to_string(),
                                i,
                                j,
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The set as known up to dimension `d` only (always incomplete).
    pub fn truncate(&self, d: usize) -> SimplicialSet {
        let mut cells = self.cells.clone();
        cells.truncate(d + 1);
        cells.resize(d + 1, Vec::new());
        let names = cells
            .iter()
            .enumerate()
            .flat_map(|(dim, cs)| {
                cs.iter().enumerate().map(move |(i, c)| (c.name.clone(), CellId::new(dim, i)))
            })
            .collect();
        SimplicialSet { trunc_dim: d, complete: false, cells, names }
    }

    /// Marks a set as known only up to `trunc_dim` (used for sets whose
    /// higher data is not represented).
    pub fn with_completeness(mut self, complete: bool) -> Self {
        self.complete = complete;
        self
    }

    /// The simplicial subset spanned by `keep`, which must be closed under
    /// faces. Returns the subset and its inclusion.
    pub fn subcomplex(
        self: &std::sync::Arc<Self>,
        keep: impl Fn(CellId) -> bool,
    ) -> Result<(std::sync::Arc<SimplicialSet>, SimplicialMap), SimplicialError> {
        let mut b = SSetBuilder::new(self.trunc_dim, self.complete);
        let mut remap: HashMap<CellId, CellId> = HashMap::new();
        let mut images: Vec<Vec<Simplex>> = vec![Vec::new(); self.trunc_dim + 1];
        for c in self.all_cells() {
            if !keep(c) {
                continue;
            }
            let faces = self
                .cell(c)
                .faces
                .iter()
                .map(|f| {
                    remap
                        .get(&f.cell)
                        .map(|&nc| Simplex { cell: nc, sur: f.sur.clone() })
                        .ok_or_else(|| {
                            SimplicialError::Invalid(format!(
                                "subcomplex not closed under faces at `{}`",
                                self.name(c)
                            ))
                        })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let nc = b.add_cell(self.name(c), faces)?;
            remap.insert(c, nc);
            images[c.dim()].push(Simplex::nondeg(c));
        }
        let sub = std::sync::Arc::new(b.build_unchecked());
        images.truncate(sub.cells.len());
        while images.len() < sub.cells.len() {
            images.push(Vec::new());
        }
        let inc = SimplicialMap::new_unchecked(sub.clone(), self.clone(), images);
        Ok((sub, inc))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degeneracy_words_roundtrip() {
        let c = CellId::new(1, 0);
        let x = Simplex::from_word(c, &[2, 0]).unwrap();
        assert_eq!(x.dim(), 3);
        assert_eq!(x.sur.as_slice(), &[0, 0, 1, 1]);
        assert_eq!(x.degeneracy_word(), vec![2, 0]);
        assert!(Simplex::from_word(c, &[0, 2]).is_none());
        assert!(Simplex::from_word(c, &[1, 1]).is_none());
    }

    #[test]
    fn surjection_counts() {
        // C(n, m) monotone surjections [n] -> [m]
        assert_eq!(surjections(3, 1).len(), 3);
        assert_eq!(surjections(4, 2).len(), 6);
        assert_eq!(surjections(2, 2).len(), 1);
        assert!(surjections(1, 2).is_empty());
    }

    #[test]
    fn face_of_degenerate_follows_identities() {
        let d2 = standard_simplex(2);
        let x = Simplex::nondeg(CellId::new(2, 0));
        // d_i s_i = id = d_{i+1} s_i
        for i in 0..=2 {
            let s = d2.degeneracy(&x, i);
            assert_eq!(d2.face(&s, i), x);
            assert_eq!(d2.face(&s, i + 1), x);
        }
        // d_0 s_1 = s_0 d_0
        let s1 = d2.degeneracy(&x, 1);
        assert_eq!(d2.face(&s1, 0), d2.degeneracy(&d2.face(&x, 0), 0));
    }
}
