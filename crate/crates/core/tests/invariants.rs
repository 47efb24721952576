use std::sync::Arc;

use proptest::prelude::*;
use strat_core::anodyne::{spine_certificate, verify_certificate};
use strat_core::corpus::{fibrant_targets, small_posets};
use strat_core::decollage::{lkan, mono_pushforward_check, LkanStrategy, Presheaf};
use strat_core::poset::{all_strings, PString, Poset};
use strat_core::simplicial::{iso_check, make_generator, Budget, Generator};
use strat_core::stratified::{
    classify_horn, fibrant_replace_nv, is_fibrant, is_fibrant_bounded, monotone_tuples, StratSSet,
};

fn posets() -> Vec<Arc<Poset>> {
    small_posets(3)
}

fn generator(max_n: usize) -> impl Strategy<Value = Generator> {
    (1usize..=max_n).prop_flat_map(|n| {
        prop_oneof![
            Just(Generator::Simplex(n)),
            Just(Generator::Boundary(n)),
            Just(Generator::Spine(n)),
            (0..=n).prop_map(move |k| Generator::Horn(n, k)),
        ]
    })
}

/// A poset, a generator and a monotone labelling of its ambient simplex.
fn labelled(max_n: usize) -> impl Strategy<Value = (Arc<Poset>, Generator, Vec<usize>)> {
    (0..posets().len(), generator(max_n)).prop_flat_map(|(pi, g)| {
        let base = posets()[pi].clone();
        let n = match g {
            Generator::Simplex(n) | Generator::Boundary(n) | Generator::Spine(n) | Generator::Horn(n, _) => n,
        };
        let tuples = monotone_tuples(&base, n + 1);
        (0..tuples.len()).prop_map(move |t| (base.clone(), g, tuples[t].clone()))
    })
}

fn build(base: &Arc<Poset>, g: Generator, ambient: &[usize]) -> StratSSet {
    let inc = make_generator(g).unwrap();
    match g {
        Generator::Simplex(_) => StratSSet::new(inc.ambient.clone(), base.clone(), ambient.to_vec()).unwrap(),
        _ => {
            let labels = (0..inc.sset.num_cells(0)).map(|v| ambient[inc.inclusion.vertex_image(v)]).collect();
            StratSSet::new(inc.sset.clone(), base.clone(), labels).unwrap()
        }
    }
}

/// A substring-closed family of strings, given by a mask of generators.
fn closed_family(base: &Poset, mask: u64) -> impl Fn(&PString) -> bool {
    let gens: Vec<PString> = all_strings(base).into_iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| s).collect();
    move |s: &PString| gens.iter().any(|g| s.is_subset(g))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn simplicial_identities((_, g, _) in labelled(3)) {
        let x = make_generator(g).unwrap().sset;
        for n in 1..=3 {
            for s in x.simplices(n) {
                for j in 0..=n {
                    for i in (0..j).filter(|_| n >= 2) {
                        prop_assert_eq!(x.face(&x.face(&s, j), i), x.face(&x.face(&s, i), j - 1));
                    }
                    for i in 0..=j {
                        prop_assert_eq!(x.degeneracy(&x.degeneracy(&s, j), i), x.degeneracy(&x.degeneracy(&s, i), j + 1));
                    }
                    prop_assert_eq!(&x.face(&x.degeneracy(&s, j), j), &s);
                    prop_assert_eq!(&x.face(&x.degeneracy(&s, j), j + 1), &s);
                }
            }
        }
    }

    #[test]
    fn replacement_keeps_strata((base, g, ambient) in labelled(2)) {
        let x = build(&base, g, &ambient);
        let rep = fibrant_replace_nv(&x, 3, 4, Budget::default()).unwrap();
        prop_assert!(verify_certificate(&rep.certificate, Budget::default()).ok);
        for p in base.elements() {
            let (a, _) = x.stratum(p).unwrap();
            let (b, _) = rep.result.stratum(p).unwrap();
            prop_assert!(iso_check(&a, &b, Budget::default()).is_iso(), "stratum {}", base.name(p));
        }
    }

    #[test]
    fn fibrancy_tiers_agree((base, g, ambient) in labelled(3)) {
        let x = build(&base, g, &ambient);
        let exact = is_fibrant(&x, 3, Budget::default());
        let bounded = is_fibrant_bounded(&x, 3, Budget::default());
        if !exact.is_unknown() && !bounded.is_unknown() {
            prop_assert_eq!(exact.is_equivalent(), bounded.is_equivalent());
        }
        if let Some(o) = exact.obstruction() {
            prop_assert!(exact.recheck().is_ok(), "{:?}", o);
        }
    }

    #[test]
    fn classification_depends_on_the_full_subposet((base, g, ambient) in labelled(3)) {
        // only the labels matter: pulling back to the full subposet on them
        // leaves the class unchanged
        if let Generator::Horn(n, k) = g {
            let mut used = ambient.clone();
            used.sort_unstable();
            used.dedup();
            let sub = base.full_subposet(&used);
            let relabel: Vec<usize> = ambient.iter().map(|a| used.binary_search(a).unwrap()).collect();
            prop_assert_eq!(classify_horn(&base, &ambient, n, k).unwrap(), classify_horn(&sub, &relabel, n, k).unwrap());
        }
    }

    #[test]
    fn kan_extension_strategies_agree(pi in 0..8usize, mask in 1u64..(1 << 7)) {
        let base = posets()[pi].clone();
        let f = Presheaf::pointlike(base.clone(), closed_family(&base, mask)).unwrap();
        let a = lkan(&f, LkanStrategy::PairColimit).unwrap();
        let b = lkan(&f, LkanStrategy::Coend).unwrap();
        prop_assert!(a.object.iso_over(&b.object, Budget::default()).is_iso());
    }

    #[test]
    fn pointlike_diagrams_have_injective_legs(pi in 0..8usize, mask in 1u64..(1 << 7)) {
        let base = posets()[pi].clone();
        let f = Presheaf::pointlike(base.clone(), closed_family(&base, mask)).unwrap();
        let r = mono_pushforward_check(&f).unwrap();
        prop_assert!(r.is_mono_diagram());
        prop_assert_eq!(r.legs_injective(), Some(true));
    }
}

#[test]
fn fibrant_targets_are_fibrant_over_three_elements() {
    for base in posets().into_iter().filter(|b| b.len() == 3) {
        for (name, x) in fibrant_targets(&base, 3) {
            assert!(is_fibrant(&x, 3, Budget::default()).is_equivalent(), "{name}");
        }
    }
}

#[test]
fn spine_certificates_replay() {
    for n in 1..=4 {
        let c = spine_certificate(n, Budget::default()).unwrap();
        // each inner horn adds two cells; Δ^n has 2^(n+1) - 1, the spine 2n + 1
        assert_eq!(c.steps.len(), (1 << n) - 1 - n, "spine {n}");
        assert!(verify_certificate(&c, Budget::default()).ok);
    }
}
