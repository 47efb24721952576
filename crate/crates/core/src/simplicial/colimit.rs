//! Colimits of finite diagrams of simplicial sets.
//!
//! The colimit is built one dimension at a time. Nondegenerate cells of all
//! objects are merged along the arrows with a union-find; a class containing
//! a cell sent to a degenerate simplex becomes that degenerate simplex,
//! every other class becomes a new cell.

use std::collections::HashMap;
use std::sync::Arc;

use super::{CellId, SSetBuilder, SimplicialError, SimplicialMap, SimplicialSet, Simplex};

/// A finite diagram: objects and arrows `(from, to, map)`.
#[derive(Clone, Debug, Default)]
pub struct Diagram {
    pub objects: Vec<Arc<SimplicialSet>>,
    pub arrows: Vec<(usize, usize, SimplicialMap)>,
}

impl Diagram {
    pub fn new() -> Self {
        Diagram::default()
    }

    pub fn add_object(&mut self, x: Arc<SimplicialSet>) -> usize {
        self.objects.push(x);
        self.objects.len() - 1
    }

    pub fn add_arrow(&mut self, from: usize, to: usize, f: SimplicialMap) {
        self.arrows.push((from, to, f));
    }

    /// The pushout diagram `B ← A → C`; objects are `A, B, C` in order.
    pub fn span(f: SimplicialMap, g: SimplicialMap) -> Self {
        let mut d = Diagram::new();
        let a = d.add_object(f.source().clone());
        let b = d.add_object(f.target().clone());
        let c = d.add_object(g.target().clone());
        d.add_arrow(a, b, f);
        d.add_arrow(a, c, g);
        d
    }
}

/// A colimit with its canonical cocone.
#[derive(Clone, Debug)]
pub struct Colimit {
    pub sset: Arc<SimplicialSet>,
    pub cocone: Vec<SimplicialMap>,
    /// For each colimit cell, the object cell it was created from.
    representatives: Vec<Vec<Vec<(usize, CellId)>>>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // keep the smaller index as root for determinism
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Computes the colimit. Incomplete objects must share their truncation.
pub fn colimit(diagram: &Diagram) -> Result<Colimit, SimplicialError> {
    let mut trunc: Option<usize> = None;
    for x in &diagram.objects {
        if !x.is_complete() {
            match trunc {
                Some(t) if t != x.trunc_dim() => {
                    return Err(SimplicialError::TruncMismatch(format!(
                        "incomplete objects truncated at {t} and {}",
                        x.trunc_dim()
                    )))
                }
                _ => trunc = Some(x.trunc_dim()),
            }
        }
    }
    for (a, b, f) in &diagram.arrows {
        if f.source() != &diagram.objects[*a] || f.target() != &diagram.objects[*b] {
            return Err(SimplicialError::NotAMap(format!("arrow {a} → {b} has wrong endpoints")));
        }
    }
    let complete = trunc.is_none();
    let top = trunc.unwrap_or_else(|| diagram.objects.iter().map(|x| x.max_dim()).max().unwrap_or(0));

    let mut forced: Vec<Vec<(usize, usize)>> = vec![Vec::new(); top + 1];
    'restart: loop {
        let mut b = SSetBuilder::new(top, complete);
        // images[j][d][idx] = image of cell (d, idx) of object j
        let mut images: Vec<Vec<Vec<Simplex>>> =
            diagram.objects.iter().map(|_| vec![Vec::new(); top + 1]).collect();
        let mut reps: Vec<Vec<Vec<(usize, CellId)>>> = vec![Vec::new(); top + 1];
        for d in 0..=top {
            let offsets: Vec<usize> = diagram
                .objects
                .iter()
                .scan(0, |acc, x| {
                    let o = *acc;
                    *acc += x.num_cells(d);
                    Some(o)
                })
                .collect();
            let total: usize = diagram.objects.iter().map(|x| x.num_cells(d)).sum();
            let mut uf = UnionFind::new(total);
            let mut labels: Vec<Vec<Simplex>> = vec![Vec::new(); total];
            for &(u, v) in &forced[d] {
                uf.union(u, v);
            }
            for (a, bb, f) in &diagram.arrows {
                for c in diagram.objects[*a].cells_of_dim(d) {
                    let img = f.image(c);
                    let ga = offsets[*a] + c.idx();
                    if img.is_degenerate() {
                        let lower = &images[*bb][img.cell.dim()][img.cell.idx()];
                        let lbl = b_apply(&b, lower, &img.sur);
                        labels[ga].push(lbl);
                    } else {
                        uf.union(ga, offsets[*bb] + img.cell.idx());
                    }
                }
            }
            // gather labels per class
            let mut class_label: HashMap<usize, Simplex> = HashMap::new();
            for g in 0..total {
                let r = uf.find(g);
                for l in std::mem::take(&mut labels[g]) {
                    match class_label.get(&r) {
                        None => {
                            class_label.insert(r, l);
                        }
                        Some(prev) if *prev == l => {}
                        Some(prev) => {
                            if prev.sur == l.sur && prev.cell.dim() == l.cell.dim() {
                                // identify the underlying lower cells and redo
                                let ld = l.cell.dim();
                                let (u, w) = (prev.cell.idx(), l.cell.idx());
                                let pu = reps[ld][u][0];
                                let pw = reps[ld][w][0];
                                let offs: Vec<usize> = diagram
                                    .objects
                                    .iter()
                                    .scan(0, |acc, x| {
                                        let o = *acc;
                                        *acc += x.num_cells(ld);
                                        Some(o)
                                    })
                                    .collect();
                                forced[ld].push((offs[pu.0] + pu.1.idx(), offs[pw.0] + pw.1.idx()));
                                continue 'restart;
                            }
                            return Err(SimplicialError::Invalid(
                                "colimit identifies a cell with two differently degenerate simplices".into(),
                            ));
                        }
                    }
                }
            }
            // assign images class by class, in order of first member
            let mut class_image: HashMap<usize, Simplex> = HashMap::new();
            for (j, x) in diagram.objects.iter().enumerate() {
                for c in x.cells_of_dim(d) {
                    let g = offsets[j] + c.idx();
                    let r = uf.find(g);
                    let img = if let Some(s) = class_image.get(&r) {
                        if !s.is_degenerate() {
                            reps[d][s.cell.idx()].push((j, c));
                        }
                        s.clone()
                    } else if let Some(l) = class_label.get(&r) {
                        class_image.insert(r, l.clone());
                        l.clone()
                    } else {
                        let faces: Vec<Simplex> = x
                            .cell(c)
                            .faces
                            .iter()
                            .map(|f| b_apply(&b, &images[j][f.cell.dim()][f.cell.idx()], &f.sur))
                            .collect();
                        let name = unique_name(&b, x.name(c), j);
                        let id = b.add_cell(name, faces)?;
                        reps[d].push(vec![(j, c)]);
                        let s = Simplex::nondeg(id);
                        class_image.insert(r, s.clone());
                        s
                    };
                    images[j][d].push(img);
                }
            }
        }
        let sset = Arc::new(b.build_unchecked());
        let cocone = diagram
            .objects
            .iter()
            .zip(images)
            .map(|(x, imgs)| SimplicialMap::new_unchecked(x.clone(), sset.clone(), imgs))
            .collect();
        reps.truncate(sset.trunc_dim() + 1);
        return Ok(Colimit { sset, cocone, representatives: reps });
    }
}

fn unique_name(b: &SSetBuilder, name: &str, obj: usize) -> String {
    if b.lookup(name).is_none() {
        return name.to_string();
    }
    let mut k = obj;
    loop {
        let cand = format!("{name}@{k}");
        if b.lookup(&cand).is_none() {
            return cand;
        }
        k += 1;
    }
}

/// `θ^* x` inside a set under construction.
fn b_apply(b: &SSetBuilder, x: &Simplex, theta: &[u8]) -> Simplex {
    // Only degeneracies and faces of already-added cells are needed; build a
    // temporary view through the builder's face data.
    let phi: super::Surj = theta.iter().map(|&t| x.sur[t as usize]).collect();
    let mut image: super::Surj = phi.clone();
    image.dedup();
    let mut psi = super::Surj::new();
    let mut pos = 0u8;
    for (i, &v) in phi.iter().enumerate() {
        if i > 0 && v != phi[i - 1] {
            pos += 1;
        }
        psi.push(pos);
    }
    let y = b_restrict(b, x.cell, &image);
    Simplex { cell: y.cell, sur: psi.iter().map(|&p| y.sur[p as usize]).collect() }
}

fn b_restrict(b: &SSetBuilder, cell: CellId, image: &[u8]) -> Simplex {
    let m = cell.dim();
    if image.len() == m + 1 {
        return Simplex::nondeg(cell);
    }
    let j = (0..=m as u8).find(|v| !image.contains(v)).expect("proper subset");
    let face = &b.faces(cell)[j as usize];
    let theta: super::Surj = image.iter().map(|&i| if i < j { i } else { i - 1 }).collect();
    b_apply(b, face, &theta)
}

impl Colimit {
    /// The first object cell mapping onto a colimit cell.
    pub fn representative(&self, c: CellId) -> (usize, CellId) {
        self.representatives[c.dim()][c.idx()][0]
    }

    /// All object cells mapping onto a colimit cell as nondegenerate cells.
    pub fn representatives(&self, c: CellId) -> &[(usize, CellId)] {
        &self.representatives[c.dim()][c.idx()]
    }

    /// The map out of the colimit induced by a compatible cocone.
    pub fn induce(
        &self,
        target: Arc<SimplicialSet>,
        components: &[SimplicialMap],
    ) -> Result<SimplicialMap, SimplicialError> {
        if components.len() != self.cocone.len() {
            return Err(SimplicialError::NotAMap("cocone has the wrong number of components".into()));
        }
        let images: Vec<Vec<Simplex>> = (0..=self.sset.trunc_dim())
            .map(|d| {
                self.sset
                    .cells_of_dim(d)
                    .map(|c| {
                        let (j, oc) = self.representative(c);
                        components[j].image(oc).clone()
                    })
                    .collect()
            })
            .collect();
        let m = SimplicialMap::new_unchecked(self.sset.clone(), target, images);
        for (j, leg) in self.cocone.iter().enumerate() {
            for c in leg.source().all_cells() {
                if m.apply(leg.image(c)) != *components[j].image(c) {
                    return Err(SimplicialError::NotAMap(format!(
                        "cocone component {j} is not compatible at `{}`",
                        leg.source().name(c)
                    )));
                }
            }
        }
        m.validate()?;
        Ok(m)
    }

    /// Every colimit cell is hit by some cocone leg.
    pub fn jointly_surjective(&self) -> bool {
        self.representatives.iter().all(|l| l.iter().all(|r| !r.is_empty()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{iso_check, make_generator, standard_simplex, Budget, Generator};

    fn vertex_into(target: &Arc<SimplicialSet>, v: usize) -> SimplicialMap {
        let pt = Arc::new(standard_simplex(0));
        SimplicialMap::new(pt, target.clone(), vec![vec![Simplex::vertex(v)]]).unwrap()
    }

    #[test]
    fn pushout_of_points() {
        let pt = Arc::new(standard_simplex(0));
        let id = SimplicialMap::identity(pt.clone());
        let c = colimit(&Diagram::span(id.clone(), id)).unwrap();
        assert_eq!(c.sset.cell_counts(), vec![1]);
    }

    #[test]
    fn two_edges_glued_at_origin_give_horn() {
        let d1 = Arc::new(standard_simplex(1));
        let c = colimit(&Diagram::span(vertex_into(&d1, 0), vertex_into(&d1, 0))).unwrap();
        let h = make_generator(Generator::Horn(2, 0)).unwrap().sset;
        assert!(iso_check(&c.sset, &h, Budget::default()).is_iso());
        assert!(c.jointly_surjective());
        for leg in &c.cocone {
            leg.validate().unwrap();
        }
    }

    #[test]
    fn collapsing_an_edge() {
        // Δ^0 ← Δ^1 → Δ^1 collapses the edge: result is Δ^1 glued... the
        // pushout of Δ^1 → Δ^0 along the identity is Δ^0.
        let d1 = Arc::new(standard_simplex(1));
        let pt = Arc::new(standard_simplex(0));
        let to_pt = SimplicialMap::to_point(d1.clone(), pt);
        let c = colimit(&Diagram::span(to_pt, SimplicialMap::identity(d1))).unwrap();
        assert_eq!(c.sset.cell_counts(), vec![1]);
        for leg in &c.cocone {
            leg.validate().unwrap();
        }
    }
}
