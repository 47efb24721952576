//! Points of the realization `|X|` of a finite simplicial set, in the
//! normal form "interior point of a nondegenerate simplex".

use num_traits::{One, Zero};
use strat_core::poset::PString;
use strat_core::simplicial::{CellId, ProductSet, SimplicialMap, SimplicialSet, Simplex};
use strat_core::stratified::StratSSet;

use crate::{RationalPoint, RealizationError, Q};

/// A point of `|X|`: a nondegenerate cell and strictly positive barycentric
/// coordinates on its vertices. Two points are equal iff they are the same
/// point of `|X|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeomPoint {
    cell: CellId,
    coords: Vec<Q>,
}

impl GeomPoint {
    /// The point with coordinates `coords` on the simplex `x` of `space`.
    pub fn new(space: &SimplicialSet, x: &Simplex, coords: Vec<Q>) -> Result<Self, RealizationError> {
        if coords.len() != x.dim() + 1 {
            return Err(RealizationError::CoordCount { expected: x.dim() + 1, got: coords.len() });
        }
        if let Some(i) = coords.iter().position(|t| *t < Q::zero()) {
            return Err(RealizationError::Negative(i));
        }
        let sum: Q = coords.iter().sum();
        if !sum.is_one() {
            return Err(RealizationError::Sum(sum.to_string()));
        }
        let mut x = x.clone();
        let mut coords = coords;
        loop {
            // push through the degeneracy
            let mut w = vec![Q::zero(); x.cell.dim() + 1];
            for (i, t) in coords.iter().enumerate() {
                w[x.sur[i] as usize] += t;
            }
            let keep: Vec<u8> = (0..w.len()).filter(|&i| !w[i].is_zero()).map(|i| i as u8).collect();
            if keep.len() == w.len() {
                return Ok(GeomPoint { cell: x.cell, coords: w });
            }
            coords = keep.iter().map(|&i| w[i as usize].clone()).collect();
            x = space.restrict(x.cell, &keep);
        }
    }

    /// A vertex of `|X|`.
    pub fn vertex(v: usize) -> Self {
        GeomPoint { cell: CellId::new(0, v), coords: vec![Q::one()] }
    }

    pub fn cell(&self) -> CellId {
        self.cell
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    /// `|f|` at this point.
    pub fn apply(&self, f: &SimplicialMap) -> GeomPoint {
        GeomPoint::new(f.target(), f.image(self.cell), self.coords.clone()).expect("maps preserve barycentric sums")
    }

    /// The image in `|P|` under the structure map of `x`.
    pub fn structure(&self, x: &StratSSet) -> RationalPoint {
        let labels = x.labels_of(&Simplex::nondeg(self.cell));
        let mut elems: Vec<usize> = labels.clone();
        elems.dedup();
        let mut coords = vec![Q::zero(); elems.len()];
        for (l, t) in labels.iter().zip(&self.coords) {
            coords[elems.iter().position(|e| e == l).expect("label")] += t;
        }
        let carrier = PString::new(x.base(), &elems).expect("labels of a simplex form a chain");
        RationalPoint::new(carrier, coords).expect("coordinates of a point")
    }

    /// `(1-u) self + u other` when both lie in the closure of one cell,
    /// which is tried in both directions.
    pub fn lerp(&self, other: &GeomPoint, u: &Q, space: &SimplicialSet) -> Result<GeomPoint, RealizationError> {
        let lift = |a: &GeomPoint, b: &GeomPoint| -> Option<Vec<Q>> {
            // coordinates of `a` on the vertices of `b`'s cell, if `a` lies on a face of it
            if a.cell.dim() > b.cell.dim() {
                return None;
            }
            let n = b.cell.dim();
            let mut found = None;
            subsets(n + 1, a.cell.dim() + 1, &mut |pos| {
                if found.is_none() && space.restrict(b.cell, pos) == Simplex::nondeg(a.cell) {
                    let mut w = vec![Q::zero(); n + 1];
                    for (k, &p) in pos.iter().enumerate() {
                        w[p as usize] = a.coords[k].clone();
                    }
                    found = Some(w);
                }
            });
            found
        };
        let (big, x, y) = if let Some(w) = lift(self, other) {
            (other.cell, w, other.coords.clone())
        } else if let Some(w) = lift(other, self) {
            (self.cell, self.coords.clone(), w)
        } else {
            return Err(RealizationError::Precondition("points do not share a closed cell".into()));
        };
        let coords = x.iter().zip(&y).map(|(a, b)| (Q::one() - u) * a + u * b).collect();
        GeomPoint::new(space, &Simplex::nondeg(big), coords)
    }

    pub fn display(&self, space: &SimplicialSet) -> String {
        let c: Vec<String> = self.coords.iter().map(|t| t.to_string()).collect();
        format!("{}({})", space.name(self.cell), c.join(","))
    }
}

fn subsets(n: usize, k: usize, f: &mut dyn FnMut(&[u8])) {
    fn go(start: usize, n: usize, k: usize, acc: &mut Vec<u8>, f: &mut dyn FnMut(&[u8])) {
        if acc.len() == k {
            f(acc);
            return;
        }
        for i in start..n {
            acc.push(i as u8);
            go(i + 1, n, k, acc, f);
            acc.pop();
        }
    }
    go(0, n, k, &mut Vec::new(), f);
}

/// The point of `|X × Y|` corresponding to `(p, q)` under `|X × Y| ≅ |X| × |Y|`,
/// through the staircase triangulation of a product of simplices.
pub fn product_point(prod: &ProductSet, p: &GeomPoint, q: &GeomPoint) -> GeomPoint {
    let (m, n) = (p.cell.dim(), q.cell.dim());
    let cum = |c: &[Q]| -> Vec<Q> {
        c.iter()
            .scan(Q::zero(), |acc, t| {
                *acc += t;
                Some(acc.clone())
            })
            .collect()
    };
    let (a, b) = (cum(&p.coords), cum(&q.coords));
    let (mut i, mut j) = (0usize, 0usize);
    let mut prev = Q::zero();
    let (mut si, mut sj, mut w) = (Vec::new(), Vec::new(), Vec::new());
    loop {
        let next = if a[i] < b[j] { a[i].clone() } else { b[j].clone() };
        si.push(i as u8);
        sj.push(j as u8);
        w.push(&next - &prev);
        if i == m && j == n {
            break;
        }
        let step_i = i < m && a[i] == next;
        let step_j = j < n && b[j] == next;
        if step_i {
            i += 1;
        }
        if step_j {
            j += 1;
        }
        prev = next;
    }
    let x = prod.left.apply(&Simplex::nondeg(p.cell), &si);
    let y = prod.right.apply(&Simplex::nondeg(q.cell), &sj);
    GeomPoint::new(&prod.sset, &prod.pair(&x, &y), w).expect("staircase weights sum to one")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::q;
    use std::sync::Arc;
    use strat_core::poset::Poset;
    use strat_core::simplicial::{product, standard_simplex};

    #[test]
    fn normal_form_drops_zero_coordinates() {
        let d2 = standard_simplex(2);
        let top = Simplex::nondeg(CellId::new(2, 0));
        let a = GeomPoint::new(&d2, &top, vec![q(1, 2), q(0, 1), q(1, 2)]).unwrap();
        assert_eq!(a.cell().dim(), 1);
        let v = GeomPoint::new(&d2, &top, vec![q(0, 1), q(1, 1), q(0, 1)]).unwrap();
        assert_eq!(v, GeomPoint::vertex(1));
    }

    #[test]
    fn product_points_project_back() {
        let d1 = Arc::new(standard_simplex(1));
        let d2 = Arc::new(standard_simplex(2));
        let prod = product(&d1, &d2);
        let edge = Simplex::nondeg(CellId::new(1, 0));
        let tri = Simplex::nondeg(CellId::new(2, 0));
        for a in crate::barycentric_grid(1, 3) {
            for b in crate::barycentric_grid(2, 3) {
                let p = GeomPoint::new(&d1, &edge, a.clone()).unwrap();
                let r = GeomPoint::new(&d2, &tri, b.clone()).unwrap();
                let z = product_point(&prod, &p, &r);
                assert_eq!(z.apply(&prod.proj_left()), p);
                assert_eq!(z.apply(&prod.proj_right()), r);
            }
        }
    }

    #[test]
    fn structure_map_sums_labels() {
        let p = Arc::new(Poset::chain(1));
        let x = StratSSet::simplex(p, &[0, 0, 1]).unwrap();
        let top = Simplex::nondeg(CellId::new(2, 0));
        let a = GeomPoint::new(x.total(), &top, vec![q(1, 4), q(1, 4), q(1, 2)]).unwrap();
        assert_eq!(a.structure(&x).coords(), &[q(1, 2), q(1, 2)]);
    }

    #[test]
    fn interpolation_inside_a_cell() {
        let d2 = standard_simplex(2);
        let a = GeomPoint::vertex(0);
        let tri = Simplex::nondeg(CellId::new(2, 0));
        let b = GeomPoint::new(&d2, &tri, vec![q(1, 3), q(1, 3), q(1, 3)]).unwrap();
        let m = a.lerp(&b, &q(1, 2), &d2).unwrap();
        assert_eq!(m.coords(), &[q(2, 3), q(1, 6), q(1, 6)]);
        let c = GeomPoint::new(&d2, &tri, vec![q(0, 1), q(1, 2), q(1, 2)]).unwrap();
        assert!(a.lerp(&c, &q(1, 2), &d2).is_err());
    }
}
