//! Piecewise-linear paths in a simplex and the contracting homotopy of exit
//! paths.

use num_traits::{One, Zero};
use strat_core::poset::Poset;

use crate::point::pi_realization;
use crate::{check_unit, RationalPoint, RealizationError, Q};

/// Linear interpolation between breakpoints on one carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLPath {
    breakpoints: Vec<(Q, RationalPoint)>,
}

impl PLPath {
    /// Times must increase strictly from 0 to 1.
    pub fn new(breakpoints: Vec<(Q, RationalPoint)>) -> Result<Self, RealizationError> {
        let bad = |s: &str| Err(RealizationError::Path(s.to_string()));
        if breakpoints.len() < 2 {
            return bad("needs at least two breakpoints");
        }
        if !breakpoints[0].0.is_zero() || !breakpoints.last().expect("nonempty").0.is_one() {
            return bad("times must run from 0 to 1");
        }
        if breakpoints.windows(2).any(|w| w[0].0 >= w[1].0) {
            return bad("times must increase strictly");
        }
        let carrier = breakpoints[0].1.carrier();
        if breakpoints.iter().any(|(_, p)| p.carrier() != carrier) {
            return bad("breakpoints lie on different carriers");
        }
        Ok(PLPath { breakpoints })
    }

    /// The straight segment from `x` to `y`.
    pub fn segment(x: &RationalPoint, y: &RationalPoint) -> Result<Self, RealizationError> {
        PLPath::new(vec![(Q::zero(), x.clone()), (Q::one(), y.clone())])
    }

    pub fn breakpoints(&self) -> &[(Q, RationalPoint)] {
        &self.breakpoints
    }

    pub fn start(&self) -> &RationalPoint {
        &self.breakpoints[0].1
    }

    pub fn end(&self) -> &RationalPoint {
        &self.breakpoints.last().expect("nonempty").1
    }

    pub fn eval(&self, t: &Q) -> Result<RationalPoint, RealizationError> {
        check_unit("t", t)?;
        let w = self
            .breakpoints
            .windows(2)
            .find(|w| *t <= w[1].0)
            .expect("t ≤ 1 is covered");
        let u = (t - &w[0].0) / (&w[1].0 - &w[0].0);
        w[0].1.lerp(&w[1].1, &u)
    }

    /// Checks that the path starts in the stratum of its start point and
    /// stays in the stratum of its end point for `t > 0`. Returns the two
    /// strata.
    pub fn exit_strata(&self, poset: &Poset) -> Result<(usize, usize), RealizationError> {
        let i = pi_realization(self.start());
        let j = pi_realization(self.end());
        if !poset.leq(i, j) {
            return Err(RealizationError::Precondition(format!(
                "path goes from `{}` down to `{}`",
                poset.name(i),
                poset.name(j)
            )));
        }
        // Inside a segment the support is the union of the endpoint
        // supports, so the breakpoints with t > 0 decide everything.
        for (t, p) in &self.breakpoints[1..] {
            if pi_realization(p) != j {
                return Err(RealizationError::Precondition(format!(
                    "γ({t}) lies over `{}`, not `{}`",
                    poset.name(pi_realization(p)),
                    poset.name(j)
                )));
            }
        }
        Ok((i, j))
    }
}

/// `h(γ, s)(t) = (1-s)γ(t) + s(1-t)x + sty` for an exit path `γ` from `x`
/// to `y`.
pub fn path_contraction(
    poset: &Poset,
    x: &RationalPoint,
    y: &RationalPoint,
    gamma: &PLPath,
    s: &Q,
    t: &Q,
) -> Result<RationalPoint, RealizationError> {
    check_unit("s", s)?;
    if gamma.start() != x || gamma.end() != y {
        return Err(RealizationError::Precondition("γ does not run from x to y".into()));
    }
    gamma.exit_strata(poset)?;
    let g = gamma.eval(t)?;
    let one = Q::one();
    let coords = g
        .coords()
        .iter()
        .zip(x.coords())
        .zip(y.coords())
        .map(|((gi, xi), yi)| (&one - s) * gi + s * (&one - t) * xi + s * t * yi)
        .collect();
    RationalPoint::new(x.carrier().clone(), coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::q;
    use strat_core::poset::PString;

    fn setup() -> (Poset, RationalPoint, RationalPoint, PLPath) {
        let p = Poset::chain(2);
        let s = PString::new(&p, &[0, 1, 2]).unwrap();
        let x = RationalPoint::new(s.clone(), vec![q(1, 2), q(1, 2), q(0, 1)]).unwrap();
        let mid = RationalPoint::new(s.clone(), vec![q(0, 1), q(1, 2), q(1, 2)]).unwrap();
        let y = RationalPoint::new(s, vec![q(1, 4), q(1, 4), q(1, 2)]).unwrap();
        let g = PLPath::new(vec![(q(0, 1), x.clone()), (q(1, 3), mid), (q(1, 1), y.clone())]).unwrap();
        (p, x, y, g)
    }

    #[test]
    fn contraction_values() {
        let (p, x, y, g) = setup();
        let t = q(1, 2);
        assert_eq!(path_contraction(&p, &x, &y, &g, &q(0, 1), &t).unwrap(), g.eval(&t).unwrap());
        assert_eq!(path_contraction(&p, &x, &y, &g, &q(1, 1), &t).unwrap(), x.lerp(&y, &t).unwrap());
        for s in [q(0, 1), q(1, 3), q(1, 1)] {
            assert_eq!(path_contraction(&p, &x, &y, &g, &s, &q(0, 1)).unwrap(), x);
            assert_eq!(path_contraction(&p, &x, &y, &g, &s, &q(1, 1)).unwrap(), y);
            assert_eq!(pi_realization(&path_contraction(&p, &x, &y, &g, &s, &q(1, 5)).unwrap()), 2);
        }
    }

    #[test]
    fn rejects_non_exit_paths() {
        let (p, x, y, _) = setup();
        let s = x.carrier().clone();
        let back = RationalPoint::new(s, vec![q(1, 1), q(0, 1), q(0, 1)]).unwrap();
        let g = PLPath::new(vec![(q(0, 1), x.clone()), (q(1, 2), back), (q(1, 1), y.clone())]).unwrap();
        assert!(path_contraction(&p, &x, &y, &g, &q(1, 2), &q(1, 2)).is_err());
        let down = PLPath::segment(&y, &x).unwrap();
        assert!(down.exit_strata(&p).is_err());
    }

    #[test]
    fn bad_paths() {
        let (_, x, y, _) = setup();
        assert!(PLPath::new(vec![(q(0, 1), x.clone())]).is_err());
        assert!(PLPath::new(vec![(q(0, 1), x.clone()), (q(1, 2), y.clone())]).is_err());
        assert!(PLPath::new(vec![(q(0, 1), x.clone()), (q(0, 1), y.clone()), (q(1, 1), y)]).is_err());
    }
}
