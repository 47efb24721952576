//! The deformation retraction of `π_P^{-1}(Σ)` onto `|Σ|`, one string at a
//! time.

use num_traits::{One, Zero};
use strat_core::poset::{PString, Poset};

use crate::point::pi_realization;
use crate::{check_unit, RationalPoint, RealizationError, Q};

/// Which indices the homotopy shrinks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// Coordinates outside `Σ` shrink by `1-s`; the rest absorb their mass.
    Corrected,
    /// Coordinates inside `Σ` shrink by `1-s`. Kept for comparison only:
    /// it moves points away from `|Σ|` and divides by zero on `|Σ|` itself.
    Printed,
}

/// `H^S(x, s)` on the carrier `S` of `x`. Requires `π_P(x) ∈ Σ`.
pub fn retraction_homotopy(
    poset: &Poset,
    sigma: &PString,
    x: &RationalPoint,
    s: &Q,
    orientation: Orientation,
) -> Result<RationalPoint, RealizationError> {
    check_unit("s", s)?;
    let p = pi_realization(x);
    if !sigma.contains(p) {
        return Err(RealizationError::OutsidePreimage { stratum: poset.name(p).to_string(), sigma: sigma.display(poset) });
    }
    let carrier = x.carrier();
    let inside: Vec<bool> = carrier.elems().iter().map(|&e| sigma.contains(e)).collect();
    let t = x.coords();
    let mass = |want: bool| -> Q { t.iter().zip(&inside).filter(|(_, &b)| b == want).map(|(a, _)| a.clone()).sum() };
    let (inn, out) = (mass(true), mass(false));
    let (shrink, grow_num, grow_den) = match orientation {
        Orientation::Corrected => (false, out, inn),
        Orientation::Printed => (true, inn, out),
    };
    if grow_den.is_zero() {
        return Err(RealizationError::ZeroDenominator(format!(
            "{:?} orientation at {}",
            orientation,
            x.display(poset)
        )));
    }
    let grow = Q::one() + s * &grow_num / &grow_den;
    let coords = t
        .iter()
        .zip(&inside)
        .map(|(ti, &b)| if b == shrink { (Q::one() - s) * ti } else { &grow * ti })
        .collect();
    RationalPoint::new(carrier.clone(), coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::q;

    fn setup() -> (Poset, PString, PString) {
        let p = Poset::chain(2);
        let all = PString::new(&p, &[0, 1, 2]).unwrap();
        let sigma = PString::new(&p, &[0, 2]).unwrap();
        (p, all, sigma)
    }

    #[test]
    fn endpoints_of_the_corrected_homotopy() {
        let (p, all, sigma) = setup();
        let x = RationalPoint::new(all, vec![q(1, 4), q(1, 4), q(1, 2)]).unwrap();
        let h0 = retraction_homotopy(&p, &sigma, &x, &q(0, 1), Orientation::Corrected).unwrap();
        assert_eq!(h0, x);
        let h1 = retraction_homotopy(&p, &sigma, &x, &q(1, 1), Orientation::Corrected).unwrap();
        assert_eq!(h1.coords(), &[q(1, 3), q(0, 1), q(2, 3)]);
        let h = retraction_homotopy(&p, &sigma, &x, &q(1, 2), Orientation::Corrected).unwrap();
        assert_eq!(pi_realization(&h), 2);
    }

    #[test]
    fn points_on_sigma_are_fixed() {
        let (p, all, sigma) = setup();
        let x = RationalPoint::new(all, vec![q(1, 3), q(0, 1), q(2, 3)]).unwrap();
        for s in [q(0, 1), q(1, 3), q(1, 1)] {
            assert_eq!(retraction_homotopy(&p, &sigma, &x, &s, Orientation::Corrected).unwrap(), x);
        }
    }

    #[test]
    fn printed_orientation_fails_on_sigma() {
        let (p, all, sigma) = setup();
        let on = RationalPoint::new(all.clone(), vec![q(1, 3), q(0, 1), q(2, 3)]).unwrap();
        assert!(matches!(
            retraction_homotopy(&p, &sigma, &on, &q(1, 2), Orientation::Printed),
            Err(RealizationError::ZeroDenominator(_))
        ));
        let off = RationalPoint::new(all, vec![q(1, 4), q(1, 4), q(1, 2)]).unwrap();
        let h1 = retraction_homotopy(&p, &sigma, &off, &q(1, 1), Orientation::Printed).unwrap();
        assert_eq!(h1.coords(), &[q(0, 1), q(1, 1), q(0, 1)]);
    }

    #[test]
    fn outside_the_preimage() {
        let (p, all, sigma) = setup();
        let x = RationalPoint::new(all, vec![q(1, 2), q(1, 2), q(0, 1)]).unwrap();
        assert!(matches!(
            retraction_homotopy(&p, &sigma, &x, &q(1, 2), Orientation::Corrected),
            Err(RealizationError::OutsidePreimage { .. })
        ));
    }
}
