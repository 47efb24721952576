use std::collections::HashMap;
use std::sync::Arc;

use super::{CellId, SSetBuilder, SimplicialError, SimplicialMap, SimplicialSet, Simplex, Surj};
use crate::poset::{ElemId, Poset};

/// The standard generating inclusions into `Δ^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    Simplex(usize),
    Boundary(usize),
    Horn(usize, usize),
    Spine(usize),
}

/// A generator together with its inclusion into the ambient simplex.
#[derive(Clone, Debug)]
pub struct StandardInclusion {
    pub kind: Generator,
    pub sset: Arc<SimplicialSet>,
    pub ambient: Arc<SimplicialSet>,
    pub inclusion: SimplicialMap,
}

/// Name of the face of `Δ^n` spanned by `verts`.
pub fn face_name(n: usize, verts: &[usize]) -> String {
    if n < 10 {
        verts.iter().map(|v| v.to_string()).collect()
    } else {
        let parts: Vec<String> = verts.iter().map(|v| v.to_string()).collect();
        parts.join(".")
    }
}

/// `Δ^n`, with cells named by their vertex sets (`"0"`, `"01"`, `"012"`, …).
pub fn standard_simplex(n: usize) -> SimplicialSet {
    let lt = |a: usize, b: usize| a < b;
    let nerve = nerve_of_order(n + 1, lt, |c| face_name(n, c));
    Arc::try_unwrap(nerve.sset).unwrap_or_else(|a| (*a).clone())
}

pub fn make_generator(kind: Generator) -> Result<StandardInclusion, SimplicialError> {
    let (n, keep): (usize, Box<dyn Fn(&[usize]) -> bool>) = match kind {
        Generator::Simplex(n) => (n, Box::new(|_| true)),
        Generator::Boundary(n) => (n, Box::new(move |v: &[usize]| v.len() <= n)),
        Generator::Horn(n, k) => {
            if k > n || n == 0 {
                return Err(SimplicialError::Invalid(format!("horn index {k} out of range for n = {n}")));
            }
            (
                n,
                Box::new(move |v: &[usize]| v.len() <= n && !(v.len() == n && !v.contains(&k))),
            )
        }
        Generator::Spine(n) => {
            if n == 0 {
                return Err(SimplicialError::Invalid("spine needs n ≥ 1".into()));
            }
            (n, Box::new(|v: &[usize]| v.len() == 1 || (v.len() == 2 && v[1] == v[0] + 1)))
        }
    };
    let ambient = Arc::new(standard_simplex(n));
    let verts: Vec<Vec<usize>> = ambient
        .all_cells()
        .map(|c| ambient.vertices_of(&Simplex::nondeg(c)))
        .collect();
    let cells: Vec<CellId> = ambient.all_cells().collect();
    let lookup: HashMap<CellId, usize> = cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let (sub, inclusion) = ambient.subcomplex(|c| keep(&verts[lookup[&c]]))?;
    Ok(StandardInclusion { kind, sset: sub, ambient, inclusion })
}

/// The nerve of a finite poset, with chain lookup.
#[derive(Clone, Debug)]
pub struct PosetNerve {
    pub sset: Arc<SimplicialSet>,
    chains: Vec<Vec<Vec<ElemId>>>,
    index: HashMap<Vec<ElemId>, CellId>,
}

impl PosetNerve {
    /// Cells named by their strings: `a` for vertices, `{a<b}` above.
    pub fn new(poset: &Poset) -> Self {
        nerve_of_order(poset.len(), |a, b| poset.lt(a, b), |c| {
            if c.len() == 1 {
                poset.name(c[0]).to_string()
            } else {
                let parts: Vec<&str> = c.iter().map(|&e| poset.name(e)).collect();
                format!("{{{}}}", parts.join("<"))
            }
        })
    }

    pub fn chain(&self, c: CellId) -> &[ElemId] {
        &self.chains[c.dim()][c.idx()]
    }

    pub fn cell_of(&self, chain: &[ElemId]) -> Option<CellId> {
        self.index.get(chain).copied()
    }

    /// Normal form of a weakly increasing sequence of elements.
    pub fn simplex_of(&self, seq: &[ElemId]) -> Option<Simplex> {
        let mut chain: Vec<ElemId> = seq.to_vec();
        chain.dedup();
        let cell = self.cell_of(&chain)?;
        let mut sur = Surj::new();
        let mut pos = 0u8;
        for (i, e) in seq.iter().enumerate() {
            if i > 0 && *e != seq[i - 1] {
                pos += 1;
            }
            sur.push(pos);
        }
        Some(Simplex { cell, sur })
    }

    /// Vertex sequence of any simplex.
    pub fn sequence(&self, x: &Simplex) -> Vec<ElemId> {
        let chain = self.chain(x.cell);
        x.sur.iter().map(|&i| chain[i as usize]).collect()
    }

    /// The nerve of a monotone map into `target`, given on element ids.
    pub fn map_to(
        &self,
        target: &PosetNerve,
        f: impl Fn(ElemId) -> ElemId,
    ) -> Result<SimplicialMap, SimplicialError> {
        let mut images = Vec::new();
        for d in 0..=self.sset.trunc_dim() {
            let mut level = Vec::new();
            for c in self.sset.cells_of_dim(d) {
                let seq: Vec<ElemId> = self.chain(c).iter().map(|&e| f(e)).collect();
                level.push(target.simplex_of(&seq).ok_or_else(|| {
                    SimplicialError::NotAMap(format!("`{}` is not sent to a chain", self.sset.name(c)))
                })?);
            }
            images.push(level);
        }
        SimplicialMap::new(self.sset.clone(), target.sset.clone(), images)
    }
}

/// Nerve of a strict order on `0..n` given by `lt`.
pub fn nerve_of_order(
    n: usize,
    lt: impl Fn(usize, usize) -> bool,
    name: impl Fn(&[usize]) -> String,
) -> PosetNerve {
    let mut chains: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut layer: Vec<Vec<usize>> = (0..n).map(|e| vec![e]).collect();
    while !layer.is_empty() {
        layer.sort();
        let mut next = Vec::new();
        for c in &layer {
            let last = *c.last().expect("nonempty");
            for e in 0..n {
                if lt(last, e) {
                    let mut d = c.clone();
                    d.push(e);
                    next.push(d);
                }
            }
        }
        chains.push(std::mem::take(&mut layer));
        layer = next;
    }
    let top = chains.len().saturating_sub(1);
    let mut b = SSetBuilder::new(top, true);
    let mut index = HashMap::new();
    for level in &chains {
        for c in level {
            let faces: Vec<Simplex> = if c.len() == 1 {
                Vec::new()
            } else {
                (0..c.len())
                    .map(|i| {
                        let mut f = c.clone();
                        f.remove(i);
                        Simplex::nondeg(index[&f])
                    })
                    .collect()
            };
            let id = b.add_cell(name(c), faces).expect("chains have distinct names");
            index.insert(c.clone(), id);
        }
    }
    PosetNerve { sset: Arc::new(b.build_unchecked()), chains, index }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_shapes() {
        let b1 = make_generator(Generator::Boundary(1)).unwrap();
        assert_eq!(b1.sset.cell_counts(), vec![2]);
        let h20 = make_generator(Generator::Horn(2, 0)).unwrap();
        assert_eq!(h20.sset.cell_counts(), vec![3, 2]);
        let names: Vec<&str> = h20.sset.cells_of_dim(1).map(|c| h20.sset.name(c)).collect();
        assert_eq!(names, vec!["01", "02"]);
        let sp = make_generator(Generator::Spine(2)).unwrap();
        let h21 = make_generator(Generator::Horn(2, 1)).unwrap();
        assert_eq!(sp.inclusion.images(), h21.inclusion.images());
        assert!(make_generator(Generator::Horn(2, 3)).is_err());
        assert_eq!(standard_simplex(3).cell_counts(), vec![4, 6, 4, 1]);
    }

    #[test]
    fn nerve_of_chain_is_simplex() {
        let p = Poset::chain(2);
        let n = PosetNerve::new(&p);
        assert_eq!(n.sset.cell_counts(), vec![3, 3, 1]);
        let x = n.simplex_of(&[0, 0, 2]).unwrap();
        assert_eq!(x.degeneracy_word(), vec![0]);
        assert_eq!(n.sequence(&x), vec![0, 0, 2]);
    }
}
