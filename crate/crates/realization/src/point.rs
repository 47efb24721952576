//! Rational points of `|P|` and the projection `π_P : |P| → P`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use strat_core::poset::{ElemId, PString, Poset};

use crate::{RealizationError, Q};

/// `n / d` as a rational.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// A point of `|S| ⊆ |P|` for a string `S = {p₀ < ⋯ < p_m}`, given by
/// barycentric coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint {
    carrier: PString,
    coords: Vec<Q>,
}

impl RationalPoint {
    pub fn new(carrier: PString, coords: Vec<Q>) -> Result<Self, RealizationError> {
        if coords.len() != carrier.len() {
            return Err(RealizationError::CoordCount { expected: carrier.len(), got: coords.len() });
        }
        if let Some(i) = coords.iter().position(|t| *t < Q::zero()) {
            return Err(RealizationError::Negative(i));
        }
        let sum: Q = coords.iter().sum();
        if !sum.is_one() {
            return Err(RealizationError::Sum(sum.to_string()));
        }
        Ok(RationalPoint { carrier, coords })
    }

    /// The vertex `p` of `|P|`.
    pub fn vertex(p: ElemId) -> Self {
        RationalPoint { carrier: PString::singleton(p), coords: vec![Q::one()] }
    }

    pub fn carrier(&self) -> &PString {
        &self.carrier
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    /// Indices with a nonzero coordinate.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coords.len()).filter(|&i| !self.coords[i].is_zero()).collect()
    }

    /// The same point expressed on a larger string, zero elsewhere.
    pub fn include(&self, poset: &Poset, outer: &PString) -> Result<Self, RealizationError> {
        if !self.carrier.is_subset(outer) {
            return Err(RealizationError::Precondition(format!(
                "{} is not contained in {}",
                self.carrier.display(poset),
                outer.display(poset)
            )));
        }
        let mut coords = vec![Q::zero(); outer.len()];
        for (i, &e) in self.carrier.elems().iter().enumerate() {
            coords[outer.position(e).expect("subset")] = self.coords[i].clone();
        }
        RationalPoint::new(outer.clone(), coords)
    }

    /// The face map onto the support of the point.
    pub fn to_support(&self, poset: &Poset) -> Self {
        let keep = self.support();
        let elems: Vec<ElemId> = keep.iter().map(|&i| self.carrier.elems()[i]).collect();
        let carrier = PString::new(poset, &elems).expect("substring of a chain");
        RationalPoint { carrier, coords: keep.iter().map(|&i| self.coords[i].clone()).collect() }
    }

    /// `(1-u) self + u other` on a common carrier.
    pub fn lerp(&self, other: &RationalPoint, u: &Q) -> Result<Self, RealizationError> {
        if self.carrier != other.carrier {
            return Err(RealizationError::Precondition("interpolated points have different carriers".into()));
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (Q::one() - u) * a + u * b)
            .collect();
        RationalPoint::new(self.carrier.clone(), coords)
    }

    pub fn display(&self, poset: &Poset) -> String {
        let c: Vec<String> = self.coords.iter().map(|t| t.to_string()).collect();
        format!("{}({})", self.carrier.display(poset), c.join(","))
    }
}

/// `π_P(t₀, …, t_m) = p_{i*}` with `i*` the largest index where `t_i ≠ 0`.
pub fn pi_realization(x: &RationalPoint) -> ElemId {
    let i = *x.support().last().expect("coordinates sum to one");
    x.carrier.elems()[i]
}

/// Barycentric coordinates on `Δ^dim` with denominators at most `density`.
pub fn barycentric_grid(dim: usize, density: usize) -> Vec<Vec<Q>> {
    let mut out: BTreeSet<Vec<Q>> = BTreeSet::new();
    for d in 1..=density.max(1) {
        let mut parts = vec![0usize; dim + 1];
        compositions(d, 0, &mut parts, &mut |p| {
            out.insert(p.iter().map(|&a| q(a as i64, d as i64)).collect());
        });
    }
    out.into_iter().collect()
}

fn compositions(rest: usize, i: usize, parts: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if i + 1 == parts.len() {
        parts[i] = rest;
        f(parts);
        return;
    }
    for a in 0..=rest {
        parts[i] = a;
        compositions(rest - a, i + 1, parts, f);
    }
}

/// `{a/d : 0 ≤ a ≤ d ≤ density}` in increasing order.
pub fn unit_grid(density: usize) -> Vec<Q> {
    let mut out: BTreeSet<Q> = BTreeSet::new();
    for d in 1..=density.max(1) {
        for a in 0..=d {
            out.insert(q(a as i64, d as i64));
        }
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge() -> (Poset, PString) {
        let p = Poset::chain(1);
        let s = PString::new(&p, &[0, 1]).unwrap();
        (p, s)
    }

    #[test]
    fn projection_on_an_edge() {
        let (_, s) = edge();
        let at = |a, b| pi_realization(&RationalPoint::new(s.clone(), vec![a, b]).unwrap());
        assert_eq!(at(q(1, 1), q(0, 1)), 0);
        assert_eq!(at(q(0, 1), q(1, 1)), 1);
        assert_eq!(at(q(1, 2), q(1, 2)), 1);
    }

    #[test]
    fn invalid_points() {
        let (_, s) = edge();
        assert!(matches!(RationalPoint::new(s.clone(), vec![q(1, 2)]), Err(RealizationError::CoordCount { .. })));
        assert!(matches!(RationalPoint::new(s.clone(), vec![q(3, 2), q(-1, 2)]), Err(RealizationError::Negative(1))));
        assert!(matches!(RationalPoint::new(s, vec![q(1, 2), q(1, 3)]), Err(RealizationError::Sum(_))));
    }

    #[test]
    fn grids() {
        assert_eq!(barycentric_grid(1, 2).len(), 3);
        assert_eq!(barycentric_grid(2, 1).len(), 3);
        assert_eq!(barycentric_grid(2, 2).len(), 6);
        assert_eq!(unit_grid(3), vec![q(0, 1), q(1, 3), q(1, 2), q(2, 3), q(1, 1)]);
    }

    #[test]
    fn faces_and_inclusions() {
        let p = Poset::chain(2);
        let s = PString::new(&p, &[0, 2]).unwrap();
        let all = PString::new(&p, &[0, 1, 2]).unwrap();
        let x = RationalPoint::new(s.clone(), vec![q(1, 3), q(2, 3)]).unwrap();
        let y = x.include(&p, &all).unwrap();
        assert_eq!(y.coords(), &[q(1, 3), q(0, 1), q(2, 3)]);
        assert_eq!(y.to_support(&p), x);
        assert_eq!(pi_realization(&y), pi_realization(&x));
    }
}
