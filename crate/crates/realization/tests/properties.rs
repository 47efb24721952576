use std::sync::Arc;

use proptest::prelude::*;
use strat_core::poset::{all_strings, PString, Poset};
use strat_core::simplicial::{make_generator, Generator};
use strat_core::stratified::{StratMap, StratSSet};
use strat_realization::{
    mapping_path_factor, path_contraction, pi_realization, q, retraction_homotopy, unit_grid, Orientation, PLPath,
    RationalPoint, Q,
};

/// Posets on at most three elements used as carriers.
fn posets() -> Vec<Poset> {
    let s = |a: &str, b: &str| (a.to_string(), b.to_string());
    vec![
        Poset::chain(0),
        Poset::chain(1),
        Poset::chain(2),
        Poset::new(["a", "b", "c"], &[s("a", "c"), s("b", "c")]).unwrap(),
        Poset::new(["a", "b", "c"], &[s("a", "b"), s("a", "c")]).unwrap(),
    ]
}

fn point(carrier: &PString, weights: &[u8]) -> Option<RationalPoint> {
    let w: Vec<i64> = weights.iter().take(carrier.len()).map(|&a| a as i64).collect();
    let total: i64 = w.iter().sum();
    if w.len() < carrier.len() || total == 0 {
        return None;
    }
    RationalPoint::new(carrier.clone(), w.iter().map(|&a| q(a, total)).collect()).ok()
}

fn unit() -> impl Strategy<Value = Q> {
    (0i64..=12, 1i64..=12).prop_map(|(a, d)| q(a.min(d), d))
}

proptest! {
    #[test]
    fn retraction_stays_over_its_stratum(
        pi in 0usize..5,
        si in 0usize..16,
        ci in 0usize..16,
        weights in prop::collection::vec(0u8..5, 3),
        s in unit(),
    ) {
        let p = &posets()[pi];
        let strings = all_strings(p);
        let sigma = &strings[si % strings.len()];
        let carrier = &strings[ci % strings.len()];
        let Some(x) = point(carrier, &weights) else { return Ok(()) };
        prop_assume!(sigma.contains(pi_realization(&x)));
        let h = retraction_homotopy(p, sigma, &x, &s, Orientation::Corrected).unwrap();
        prop_assert_eq!(pi_realization(&h), pi_realization(&x));
        let end = retraction_homotopy(p, sigma, &x, &q(1, 1), Orientation::Corrected).unwrap();
        for i in end.support() {
            prop_assert!(sigma.contains(carrier.elems()[i]));
        }
        prop_assert_eq!(retraction_homotopy(p, sigma, &x, &q(0, 1), Orientation::Corrected).unwrap(), x.clone());
    }

    #[test]
    fn retraction_commutes_with_face_inclusions(
        pi in 0usize..5,
        si in 0usize..16,
        ci in 0usize..16,
        fi in 0usize..16,
        weights in prop::collection::vec(0u8..5, 3),
        s in unit(),
    ) {
        let p = &posets()[pi];
        let strings = all_strings(p);
        let sigma = &strings[si % strings.len()];
        let outer = &strings[ci % strings.len()];
        let inner = &strings[fi % strings.len()];
        prop_assume!(inner.is_subset(outer));
        let Some(x) = point(inner, &weights) else { return Ok(()) };
        prop_assume!(sigma.contains(pi_realization(&x)));
        let small = retraction_homotopy(p, sigma, &x, &s, Orientation::Corrected).unwrap();
        let big = retraction_homotopy(p, sigma, &x.include(p, outer).unwrap(), &s, Orientation::Corrected).unwrap();
        prop_assert_eq!(small.include(p, outer).unwrap(), big);
    }

    #[test]
    fn contraction_is_affine_in_s(
        wx in prop::collection::vec(0u8..5, 3),
        wy in prop::collection::vec(0u8..5, 3),
        s in unit(),
        t in unit(),
    ) {
        let p = Poset::chain(2);
        let all = PString::new(&p, &[0, 1, 2]).unwrap();
        let (Some(x), Some(y)) = (point(&all, &wx), point(&all, &wy)) else { return Ok(()) };
        let g = PLPath::segment(&x, &y).unwrap();
        prop_assume!(g.exit_strata(&p).is_ok());
        let at = |s: &Q| path_contraction(&p, &x, &y, &g, s, &t).unwrap();
        let (h0, h1, hs) = (at(&q(0, 1)), at(&q(1, 1)), at(&s));
        prop_assert_eq!(hs, h0.lerp(&h1, &s).unwrap());
        prop_assert_eq!(path_contraction(&p, &x, &y, &g, &s, &q(0, 1)).unwrap(), x.clone());
        prop_assert_eq!(path_contraction(&p, &x, &y, &g, &s, &q(1, 1)).unwrap(), y);
    }
}

#[test]
fn factorization_of_a_face_inclusion() {
    let p = Arc::new(Poset::chain(1));
    let x = StratSSet::simplex(p, &[0, 0, 1]).unwrap();
    let g = make_generator(Generator::Horn(2, 0)).unwrap();
    let labels: Vec<_> = (0..g.sset.num_cells(0)).map(|v| x.label(g.inclusion.vertex_image(v))).collect();
    let horn = StratSSet::new(g.sset.clone(), x.base().clone(), labels).unwrap();
    let inc = StratMap::new(horn, x.clone(), g.inclusion.clone()).unwrap();
    let r = mapping_path_factor(&inc, 2);
    assert!(r.ok(), "{:?}", r.tallies);
    let id = mapping_path_factor(&StratMap::identity(x), 2);
    assert!(id.ok());
    assert!(id.tallies.iter().any(|t| t.name.contains("stays") && t.checked > 0));
    assert_eq!(unit_grid(2).len(), 3);
}
