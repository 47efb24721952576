//! Small named fixtures over posets with at most three elements: stratified
//! objects, fibrant category-presented targets, presheaves and the two
//! maps that separate strata from links.

use std::collections::HashMap;
use std::sync::Arc;

use crate::decollage::Presheaf;
use crate::poset::{all_strings, ElemId, PString, Poset};
use crate::simplicial::{
    make_generator, standard_simplex, FiniteCategory, Generator, SSetBuilder, SimplicialMap, Simplex,
};
use crate::stratified::{monotone_tuples, StratMap, StratSSet};

/// One poset per isomorphism class with `1..=max` elements.
pub fn small_posets(max: usize) -> Vec<Arc<Poset>> {
    (1..=max).flat_map(crate::poset::posets_up_to_iso).map(Arc::new).collect()
}

fn preorder_object(base: &Arc<Poset>, labels: Vec<ElemId>, trunc: usize) -> StratSSet {
    let names: Vec<String> = (0..labels.len()).map(|i| format!("o{i}")).collect();
    let leq: Vec<Vec<bool>> = labels.iter().map(|&a| labels.iter().map(|&b| base.leq(a, b)).collect()).collect();
    let cat = FiniteCategory::preorder(names, &leq).expect("pulled back from a poset");
    StratSSet::from_category(cat.nerve(trunc), base.clone(), labels).expect("monotone labels")
}

/// Fibrant category-presented objects over `base` with at most
/// `|base| + 1` objects: the nerve of every nonempty full subposet, and the
/// nerve of `base` with one element doubled into an isomorphic pair.
pub fn fibrant_targets(base: &Arc<Poset>, trunc: usize) -> Vec<(String, StratSSet)> {
    let n = base.len();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let elems: Vec<ElemId> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let names: Vec<&str> = elems.iter().map(|&e| base.name(e)).collect();
        out.push((format!("N{{{}}}", names.join(",")), preorder_object(base, elems, trunc)));
    }
    for e in base.elements() {
        let mut labels: Vec<ElemId> = base.elements().collect();
        labels.insert(e, e);
        out.push((format!("N+{}", base.name(e)), preorder_object(base, labels, trunc)));
    }
    out
}

/// Category-presented objects whose structure functor is not conservative.
pub fn nonfibrant_categories(trunc: usize) -> Vec<(String, StratSSet)> {
    let c1 = Arc::new(Poset::chain(1));
    let point = Arc::new(Poset::point());
    let arrow = FiniteCategory::from_poset(&Poset::chain(1));
    let two = FiniteCategory::from_poset(&Poset::chain(2));
    vec![
        ("[1] in one stratum".into(), StratSSet::from_category(arrow.nerve(trunc), point, vec![0, 0]).expect("constant")),
        ("[2] over 0,0,1".into(), StratSSet::from_category(two.nerve(trunc), c1, vec![0, 0, 1]).expect("monotone")),
    ]
}

fn labelled(g: Generator, base: &Arc<Poset>, ambient: &[ElemId]) -> StratSSet {
    let inc = make_generator(g).expect("valid generator");
    let (x, labels) = match g {
        Generator::Simplex(_) => (inc.ambient.clone(), ambient.to_vec()),
        _ => {
            let l = (0..inc.sset.num_cells(0)).map(|v| ambient[inc.inclusion.vertex_image(v)]).collect();
            (inc.sset.clone(), l)
        }
    };
    StratSSet::new(x, base.clone(), labels).expect("restricted monotone labels")
}

/// Finite stratified objects over posets with at most three elements:
/// labelled `Δ^1`, `∂Δ^2`, spines and the outer horns of `Δ^2` for every
/// non-constant monotone triple, and `Δ^2` itself for strictly increasing
/// triples. All are complete.
pub fn stratified_objects() -> Vec<(String, StratSSet)> {
    let mut out = Vec::new();
    for base in small_posets(3) {
        let tag = poset_tag(&base);
        for pair in monotone_tuples(&base, 2) {
            if pair[0] != pair[1] {
                out.push((format!("{tag} D1{pair:?}"), labelled(Generator::Simplex(1), &base, &pair)));
            }
        }
        for t in monotone_tuples(&base, 3) {
            if t[0] == t[2] {
                continue;
            }
            for (name, g) in [
                ("spine", Generator::Spine(2)),
                ("horn0", Generator::Horn(2, 0)),
                ("horn2", Generator::Horn(2, 2)),
                ("boundary", Generator::Boundary(2)),
            ] {
                out.push((format!("{tag} {name}{t:?}"), labelled(g, &base, &t)));
            }
            if t[0] != t[1] && t[1] != t[2] {
                out.push((format!("{tag} D2{t:?}"), labelled(Generator::Simplex(2), &base, &t)));
            }
        }
    }
    out
}

/// Compact description of a poset by its covering relations.
pub fn poset_tag(p: &Poset) -> String {
    let covers: Vec<String> = p.covers().iter().map(|&(a, b)| format!("{}<{}", p.name(a), p.name(b))).collect();
    format!("P{}[{}]", p.len(), covers.join(","))
}

/// Presheaves over posets with at most three elements: every representable,
/// constant `Δ^0` and `Δ^1`, and a presheaf with two-point values whose
/// restrictions swap the points.
pub fn presheaves() -> Vec<(String, Presheaf)> {
    let mut out = Vec::new();
    let d1 = Arc::new(standard_simplex(1));
    for base in small_posets(3) {
        let tag = poset_tag(&base);
        for t in all_strings(&base) {
            out.push((format!("{tag} rep{}", t.display(&base)), Presheaf::representable(base.clone(), &t).expect("sieve")));
        }
        out.push((format!("{tag} const-point"), Presheaf::pointlike(base.clone(), |_| true).expect("constant")));
        out.push((format!("{tag} const-D1"), Presheaf::constant(base.clone(), d1.clone()).expect("constant")));
    }
    let c1 = Arc::new(Poset::chain(1));
    out.push(("P2[0<1] swap".into(), swap_presheaf(&c1)));
    out
}

/// Over `[1]`: two points everywhere, the restriction to `{0}` swaps them.
fn swap_presheaf(c1: &Arc<Poset>) -> Presheaf {
    let mut b = SSetBuilder::new(0, true);
    b.add_cell("a", Vec::new()).expect("fresh");
    b.add_cell("b", Vec::new()).expect("fresh");
    let two = Arc::new(b.build().expect("two points"));
    let strings = all_strings(c1);
    let top = strings.iter().position(|s| s.len() == 2).expect("edge");
    let bottom = strings.iter().position(|s| s.elems() == [0]).expect("vertex");
    let upper = strings.iter().position(|s| s.elems() == [1]).expect("vertex");
    let swap = SimplicialMap::new(two.clone(), two.clone(), vec![vec![Simplex::vertex(1), Simplex::vertex(0)]]).expect("swap");
    let given = HashMap::from([((top, bottom), swap), ((top, upper), SimplicialMap::identity(two.clone()))]);
    Presheaf::new(c1.clone(), vec![two; strings.len()], given).expect("functorial")
}

/// Constant `Δ^0` over `[2]` with the value at `{0<1<2}` replaced by `∅`.
pub fn punctured_constant() -> Presheaf {
    let p = Arc::new(Poset::chain(2));
    let top = PString::new(&p, &[0, 1, 2]).expect("chain");
    Presheaf::pointlike(p, |s| *s != top).expect("substring closed")
}

/// Two points in one stratum sent to one point: the strata differ.
pub fn stratum_collapse() -> StratMap {
    let point = Arc::new(Poset::point());
    let mut b = SSetBuilder::new(0, true);
    b.add_cell("a", Vec::new()).expect("fresh");
    b.add_cell("b", Vec::new()).expect("fresh");
    let two = StratSSet::new(Arc::new(b.build().expect("two points")), point.clone(), vec![0, 0]).expect("constant");
    let one = StratSSet::point(point, 0);
    let m = SimplicialMap::to_point(two.total().clone(), one.total().clone());
    StratMap::new(two, one, m).expect("over the point")
}

/// Two parallel edges from stratum 0 to stratum 1 folded onto one: both
/// strata are points, but the link goes from two components to one.
pub fn link_killing() -> StratMap {
    let c1 = Arc::new(Poset::chain(1));
    let mut b = SSetBuilder::new(1, true);
    b.add_cell("x", Vec::new()).expect("fresh");
    b.add_cell("y", Vec::new()).expect("fresh");
    for e in ["e", "f"] {
        b.add_cell(e, vec![Simplex::vertex(1), Simplex::vertex(0)]).expect("edge x -> y");
    }
    let two = StratSSet::new(Arc::new(b.build().expect("two edges")), c1.clone(), vec![0, 1]).expect("monotone");
    let edge = StratSSet::simplex(c1, &[0, 1]).expect("monotone");
    let d1 = edge.total().clone();
    let e01 = Simplex::nondeg(d1.lookup("01").expect("edge of Δ^1"));
    let m = SimplicialMap::new(two.total().clone(), d1, vec![vec![Simplex::vertex(0), Simplex::vertex(1)], vec![e01.clone(), e01]])
        .expect("fold");
    StratMap::new(two, edge, m).expect("over [1]")
}
