use std::collections::HashMap;
use std::sync::Arc;

use super::{surjections, CellId, SSetBuilder, SimplicialError, SimplicialMap, SimplicialSet, Simplex, Surj};

/// `X × Y` with the components of each cell.
#[derive(Clone, Debug)]
pub struct ProductSet {
    pub sset: Arc<SimplicialSet>,
    pub left: Arc<SimplicialSet>,
    pub right: Arc<SimplicialSet>,
    components: Vec<Vec<(Simplex, Simplex)>>,
    lookup: HashMap<(Simplex, Simplex), CellId>,
}

/// Splits off the common degeneracies of a pair of `n`-simplices: returns the
/// nondegenerate pair and the surjection `[n] → [m]` collapsing them.
fn split_pair(x: &Simplex, y: &Simplex) -> (Simplex, Simplex, Surj) {
    let n = x.dim();
    let mut zeta = Surj::new();
    let mut xs = Surj::new();
    let mut ys = Surj::new();
    let mut pos = 0u8;
    for j in 0..=n {
        if j > 0 {
            let flat = x.sur[j] == x.sur[j - 1] && y.sur[j] == y.sur[j - 1];
            if !flat {
                pos += 1;
            }
        }
        if zeta.last() != Some(&pos) || j == 0 {
            xs.push(x.sur[j]);
            ys.push(y.sur[j]);
        }
        zeta.push(pos);
    }
    (Simplex { cell: x.cell, sur: xs }, Simplex { cell: y.cell, sur: ys }, zeta)
}

impl ProductSet {
    pub fn components(&self, c: CellId) -> &(Simplex, Simplex) {
        &self.components[c.dim()][c.idx()]
    }

    /// Normal form of the pair `(x, y)` of equal-dimensional simplices.
    pub fn pair(&self, x: &Simplex, y: &Simplex) -> Simplex {
        debug_assert_eq!(x.dim(), y.dim());
        let (a, b, zeta) = split_pair(x, y);
        let cell = self.lookup[&(a, b)];
        Simplex { cell, sur: zeta }
    }

    pub fn try_pair(&self, x: &Simplex, y: &Simplex) -> Option<Simplex> {
        if x.dim() != y.dim() {
            return None;
        }
        let (a, b, zeta) = split_pair(x, y);
        self.lookup.get(&(a, b)).map(|&cell| Simplex { cell, sur: zeta })
    }

    pub fn proj_left(&self) -> SimplicialMap {
        SimplicialMap::new_unchecked(
            self.sset.clone(),
            self.left.clone(),
            self.components.iter().map(|l| l.iter().map(|(x, _)| x.clone()).collect()).collect(),
        )
    }

    pub fn proj_right(&self) -> SimplicialMap {
        SimplicialMap::new_unchecked(
            self.sset.clone(),
            self.right.clone(),
            self.components.iter().map(|l| l.iter().map(|(_, y)| y.clone()).collect()).collect(),
        )
    }

    /// The map into `self` with components `f` and `g`.
    pub fn pairing(&self, f: &SimplicialMap, g: &SimplicialMap) -> Result<SimplicialMap, SimplicialError> {
        let src = f.source().clone();
        let images = (0..=src.trunc_dim())
            .map(|d| {
                src.cells_of_dim(d)
                    .map(|c| {
                        self.try_pair(f.image(c), g.image(c)).ok_or_else(|| {
                            SimplicialError::Truncated {
                                what: "product".into(),
                                needed: d,
                                trunc: self.sset.trunc_dim(),
                            }
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SimplicialMap::new_unchecked(src, self.sset.clone(), images))
    }

    /// `f × g : self → other`.
    pub fn map_product(
        &self,
        f: &SimplicialMap,
        g: &SimplicialMap,
        other: &ProductSet,
    ) -> Result<SimplicialMap, SimplicialError> {
        let mut images = Vec::new();
        for d in 0..=self.sset.trunc_dim() {
            let mut level = Vec::new();
            for c in self.sset.cells_of_dim(d) {
                let (x, y) = self.components(c);
                let img = other.try_pair(&f.apply(x), &g.apply(y)).ok_or_else(|| {
                    SimplicialError::Truncated { what: "product".into(), needed: d, trunc: other.sset.trunc_dim() }
                })?;
                level.push(img);
            }
            images.push(level);
        }
        Ok(SimplicialMap::new_unchecked(self.sset.clone(), other.sset.clone(), images))
    }
}

/// Levelwise product. If both factors are complete so is the result;
/// otherwise it is known up to the smaller truncation.
pub fn product(x: &Arc<SimplicialSet>, y: &Arc<SimplicialSet>) -> ProductSet {
    product_with_names(x, y, |x_name, y_name| format!("({x_name},{y_name})"))
}

pub fn product_with_names(
    x: &Arc<SimplicialSet>,
    y: &Arc<SimplicialSet>,
    name: impl Fn(&str, &str) -> String,
) -> ProductSet {
    let complete = x.is_complete() && y.is_complete();
    let top = if complete {
        x.max_dim() + y.max_dim()
    } else {
        let tx = if x.is_complete() { usize::MAX } else { x.trunc_dim() };
        let ty = if y.is_complete() { usize::MAX } else { y.trunc_dim() };
        tx.min(ty)
    };
    let mut b = SSetBuilder::new(top, complete);
    let mut components: Vec<Vec<(Simplex, Simplex)>> = vec![Vec::new(); top + 1];
    let mut lookup: HashMap<(Simplex, Simplex), CellId> = HashMap::new();
    for n in 0..=top {
        let mut level: Vec<(Simplex, Simplex)> = Vec::new();
        for p in 0..=n.min(x.cell_counts().len() - 1) {
            for q in 0..=n.min(y.cell_counts().len() - 1) {
                if p + q < n || x.num_cells(p) == 0 || y.num_cells(q) == 0 {
                    continue;
                }
                let sx = surjections(n, p);
                let sy = surjections(n, q);
                for a in &sx {
                    for bb in &sy {
                        let joint = (0..n).all(|i| a[i] != a[i + 1] || bb[i] != bb[i + 1]);
                        if !joint {
                            continue;
                        }
                        for cx in x.cells_of_dim(p) {
                            for cy in y.cells_of_dim(q) {
                                level.push((
                                    Simplex { cell: cx, sur: a.clone() },
                                    Simplex { cell: cy, sur: bb.clone() },
                                ));
                            }
                        }
                    }
                }
            }
        }
        level.sort();
        for (sx, sy) in level {
            let faces: Vec<Simplex> = if n == 0 {
                Vec::new()
            } else {
                (0..=n)
                    .map(|i| {
                        let (fa, fb, zeta) = split_pair(&x.face(&sx, i), &y.face(&sy, i));
                        Simplex { cell: lookup[&(fa, fb)], sur: zeta }
                    })
                    .collect()
            };
            let nm = name(&x.format_simplex(&sx), &y.format_simplex(&sy));
            let id = b.add_cell(nm, faces).expect("product cells have distinct names");
            lookup.insert((sx.clone(), sy.clone()), id);
            components[n].push((sx, sy));
        }
    }
    let sset = Arc::new(b.build_unchecked());
    components.truncate(sset.trunc_dim() + 1);
    ProductSet { sset, left: x.clone(), right: y.clone(), components, lookup }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{iso_check, make_generator, standard_simplex, Budget, Generator};

    #[test]
    fn square_has_two_triangles() {
        let d1 = Arc::new(standard_simplex(1));
        let p = product(&d1, &d1);
        assert_eq!(p.sset.cell_counts(), vec![4, 5, 2]);
        assert!(p.proj_left().validate().is_ok());
        assert!(p.proj_right().validate().is_ok());
    }

    #[test]
    fn prism_counts() {
        // Δ^2 × Δ^1: three shuffle tetrahedra; nondegenerate pairs of
        // simplices counted directly, Euler characteristic 1.
        let p = product(&Arc::new(standard_simplex(2)), &Arc::new(standard_simplex(1)));
        assert_eq!(p.sset.cell_counts(), vec![6, 12, 10, 3]);
    }

    #[test]
    fn unit_and_coproduct() {
        let pt = Arc::new(standard_simplex(0));
        let h = make_generator(Generator::Horn(2, 0)).unwrap().sset;
        let p = product(&h, &pt);
        assert!(iso_check(&p.sset, &h, Budget::default()).is_iso());
        let b1 = make_generator(Generator::Boundary(1)).unwrap().sset;
        let d1 = Arc::new(standard_simplex(1));
        let q = product(&b1, &d1);
        assert_eq!(q.sset.cell_counts(), vec![4, 2]);
    }
}
