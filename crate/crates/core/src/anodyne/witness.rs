//! Structured witnesses for the outer horns: the base-case cube for
//! trivial left horns and non-lifting witnesses for non-trivial horns.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::homotopy::Verdict;
use crate::poset::{ElemId, Poset};
use crate::simplicial::{
    colimit, iso_check, iso_check_with, make_generator, standard_simplex, Budget, CategoryError, CategoryNerve, CellId, Diagram,
    FiniteCategory, Generator, LiftOutcome, LiftProblem, MapSearch, MorId, Presentation, SearchError,
    SimplicialError, SimplicialMap, SimplicialSet, Simplex, TargetIndex,
};
use crate::stratified::{classify_horn, is_fibrant, GeneratorItem, HornClass, StratError, StratMap, StratSSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("horn({n},{k}) is {class}, so no non-lifting witness exists")]
    Trivial { n: usize, k: usize, class: HornClass },
    #[error("truncation {0} is too low (need at least 2)")]
    Truncation(usize),
    #[error("non-lifting witnesses are only searched for n ≤ 3, got n = {0}")]
    Dimension(usize),
    #[error("unknown: {0}")]
    Unknown(String),
    #[error(transparent)]
    Strat(#[from] StratError),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
}

/// The objects of the base-case cube and the checks made on them.
#[derive(Clone, Debug)]
pub struct BaseCaseReport {
    pub labels: Vec<ElemId>,
    pub trunc: usize,
    pub walking_iso: StratSSet,
    pub horn: StratSSet,
    pub l20: StratSSet,
    pub d20: StratSSet,
    /// `Δ^{01} ⊔_{Δ^0} Δ^{02}` is isomorphic to `Λ²₀`.
    pub back_face_iso: bool,
    /// The colimit legs out of `E` and `Δ^{02}` are injective and jointly
    /// surjective.
    pub front_face_pushout: bool,
    pub l20_vertices: usize,
    /// `(name, valid simplicial map, injective, commutes with labels)`.
    pub maps: Vec<(String, bool, bool, bool)>,
    pub simplex_in_d20: bool,
}

impl BaseCaseReport {
    pub fn ok(&self) -> bool {
        self.back_face_iso
            && self.front_face_pushout
            && self.l20_vertices == 3
            && self.simplex_in_d20
            && self.maps.iter().all(|(_, v, i, c)| *v && *i && *c)
    }
}

fn vertex_into(target: &Arc<SimplicialSet>, v: usize) -> SimplicialMap {
    let pt = Arc::new(standard_simplex(0));
    SimplicialMap::new_unchecked(pt, target.clone(), vec![vec![Simplex::vertex(v)]])
}

/// Nerve map of a functor into a preorder, given on objects.
fn into_preorder(from: &Arc<SimplicialSet>, vertex_seq: impl Fn(CellId) -> Vec<usize>, to: &CategoryNerve) -> Option<SimplicialMap> {
    let cat = &to.category;
    let hom: HashMap<(usize, usize), MorId> =
        cat.morphisms().iter().enumerate().map(|(i, m)| ((m.src, m.tgt), i)).collect();
    let mut images = Vec::new();
    for d in 0..=from.trunc_dim() {
        let mut level = Vec::new();
        for c in from.cells_of_dim(d) {
            let vs = vertex_seq(c);
            let s = if vs.len() == 1 {
                Simplex::vertex(vs[0])
            } else {
                let chain: Option<Vec<MorId>> = vs.windows(2).map(|w| hom.get(&(w[0], w[1])).copied()).collect();
                to.simplex_of(&chain?)?
            };
            level.push(s);
        }
        images.push(level);
    }
    Some(SimplicialMap::new_unchecked(from.clone(), to.sset.clone(), images))
}

fn check_map(name: &str, f: &SimplicialMap, src: &StratSSet, tgt: &StratSSet) -> (String, bool, bool, bool) {
    let valid = f.validate().is_ok();
    let injective = valid && f.is_injective();
    let labels = valid && StratMap::new(src.clone(), tgt.clone(), f.clone()).is_ok();
    (name.to_string(), valid, injective, labels)
}

/// Builds `E`, `Λ²₀`, `L²₀` and `D²₀` over labels `(p, p, q)`, truncated at
/// `trunc`, and checks the two pushout faces and the chain of inclusions.
pub fn base_case_witness(base: &Arc<Poset>, labels: &[ElemId], trunc: usize) -> Result<BaseCaseReport, WitnessError> {
    if trunc < 2 {
        return Err(WitnessError::Truncation(trunc));
    }
    if labels.len() != 3 {
        return Err(StratError::LabelCount { expected: 3, got: labels.len() }.into());
    }
    if labels[0] != labels[1] || !base.leq(labels[1], labels[2]) {
        let names: Vec<&str> = labels.iter().map(|&l| base.name(l)).collect();
        return Err(StratError::LabelsNotMonotone(format!("{} (need p,p,q with p ≤ q)", names.join(","))).into());
    }
    let (p, q) = (labels[0], labels[2]);
    let e_nerve = FiniteCategory::walking_iso().nerve(trunc);
    let e = e_nerve.sset.clone();
    let d1 = Arc::new(standard_simplex(1));

    // back face: Δ^{01} ⊔_{Δ^0} Δ^{02}
    let back = colimit(&Diagram::span(vertex_into(&d1, 0), vertex_into(&d1, 0)))?;
    let horn_gen = make_generator(Generator::Horn(2, 0))?;
    let back_face_iso = iso_check(&back.sset, &horn_gen.sset, Budget::default()).is_iso();
    let horn = StratSSet::new(horn_gen.sset.clone(), base.clone(), vec![p, p, q])?;

    // front face: E ⊔_{Δ^0} Δ^{02}
    let front = colimit(&Diagram::span(vertex_into(&e, 0), vertex_into(&d1, 0)))?;
    let l = front.sset.clone();
    let legs_injective = front.cocone[1].is_injective() && front.cocone[2].is_injective();
    let front_face_pushout = legs_injective && front.jointly_surjective();
    let far = front.cocone[2].vertex_image(1);
    let l_labels: Vec<ElemId> = (0..l.num_cells(0)).map(|v| if v == far { q } else { p }).collect();
    let l20 = StratSSet::new(l.clone(), base.clone(), l_labels)?;
    let walking_iso = StratSSet::from_category(e_nerve.clone(), base.clone(), vec![p, p])?;

    // D²₀: 0 ≅ 1, both below 2
    let leq = vec![vec![true, true, true], vec![true, true, true], vec![false, false, true]];
    let d_cat = FiniteCategory::preorder(vec!["0".into(), "1".into(), "2".into()], &leq)?;
    let d_nerve = d_cat.nerve(trunc);
    let d20 = StratSSet::from_category(d_nerve.clone(), base.clone(), vec![p, p, q])?;
    let d = d_nerve.sset.clone();

    // Λ²₀ → L²₀: Δ^{01} onto the forward edge of E, Δ^{02} onto itself
    let e_edge = {
        let f = e_nerve.category.morphisms().iter().position(|m| m.src == 0 && m.tgt == 1).expect("E has 0 → 1");
        e_nerve.simplex_of(&[f]).expect("edge of E")
    };
    let d01_to_e = SimplicialMap::new(d1.clone(), e.clone(), vec![vec![Simplex::vertex(0), Simplex::vertex(1)], vec![e_edge]])?;
    let d01_to_l = d01_to_e.then(&front.cocone[1])?;
    let horn_to_l = back.induce(l.clone(), &[front.cocone[0].clone(), d01_to_l, front.cocone[2].clone()])?;
    let corner = [back.cocone[1].vertex_image(0), back.cocone[1].vertex_image(1), back.cocone[2].vertex_image(1)];
    let horn_iso = match iso_check_with(&horn_gen.sset, &back.sset, |v, w| corner[v] == w, Budget::default()) {
        crate::simplicial::IsoOutcome::Iso(m) => m,
        _ => return Err(WitnessError::Unknown("back face is not isomorphic to the horn".into())),
    };
    let horn_to_l = horn_iso.then(&horn_to_l)?;

    // L²₀ → D²₀: E by the functor 0 ↦ 0, 1 ↦ 1 and Δ^{02} onto the edge 0 → 2
    let e_to_d = into_preorder(&e, |c| e.vertices_of(&Simplex::nondeg(c)), &d_nerve)
        .ok_or_else(|| WitnessError::Unknown("E does not map into D".into()))?;
    let d02_to_d = into_preorder(&d1, |c| d1.vertices_of(&Simplex::nondeg(c)).into_iter().map(|v| 2 * v).collect(), &d_nerve)
        .ok_or_else(|| WitnessError::Unknown("Δ^{02} does not map into D".into()))?;
    let pt_to_d = vertex_into(&d, 0);
    let l_to_d = front.induce(d.clone(), &[pt_to_d, e_to_d, d02_to_d])?;

    let d2 = Arc::new(standard_simplex(2));
    let simplex_to_d = into_preorder(&d2, |c| d2.vertices_of(&Simplex::nondeg(c)), &d_nerve)
        .ok_or_else(|| WitnessError::Unknown("Δ² does not map into D".into()))?;
    let delta = StratSSet::new(d2, base.clone(), vec![p, p, q])?;
    let simplex_in_d20 = simplex_to_d.validate().is_ok() && simplex_to_d.is_injective();

    let horn_to_d = horn_to_l.then(&l_to_d)?;
    let maps = vec![
        check_map("horn -> L", &horn_to_l, &horn, &l20),
        check_map("L -> D", &l_to_d, &l20, &d20),
        check_map("horn -> D", &horn_to_d, &horn, &d20),
        check_map("simplex -> D", &simplex_to_d, &delta, &d20),
    ];
    Ok(BaseCaseReport {
        labels: labels.to_vec(),
        trunc,
        walking_iso,
        horn,
        l20_vertices: l20.total().num_cells(0),
        l20,
        d20,
        back_face_iso,
        front_face_pushout,
        maps,
        simplex_in_d20,
    })
}

/// A lifting square against a non-trivial horn with no diagonal, found by
/// exhaustive search, together with the fibrancy verdict of its target.
#[derive(Clone, Debug)]
pub struct NonLiftWitness {
    pub item: GeneratorItem,
    pub target: StratSSet,
    pub target_fibrant: Verdict,
    /// `Λ^n_k ↪ Δ^n`
    pub inclusion: SimplicialMap,
    /// `X → N(P)`
    pub structure: SimplicialMap,
    pub top: SimplicialMap,
    pub bottom: SimplicialMap,
    /// Maps `Δ^n → X` extending `top`, ignoring the strata.
    pub candidate_maps: usize,
    /// Of those, the ones over `P`.
    pub lifts: usize,
    /// Search nodes visited by the lifting search.
    pub explored: u64,
    pub description: String,
}

impl NonLiftWitness {
    /// Re-runs the square check, the lifting search and the fibrancy replay.
    pub fn recheck(&self, budget: Budget) -> Result<(), String> {
        let problem = self.problem();
        problem.check().map_err(|e| e.to_string())?;
        match crate::simplicial::has_lift(problem, budget).map_err(|e| e.to_string())? {
            LiftOutcome::NoLift { .. } => {}
            LiftOutcome::Lift(_) => return Err("a lift exists".into()),
            LiftOutcome::Unknown { reason, .. } => return Err(format!("search inconclusive: {reason}")),
        }
        self.target_fibrant.recheck()
    }

    pub fn problem(&self) -> LiftProblem<'_> {
        LiftProblem { i: &self.inclusion, p: &self.structure, top: &self.top, bottom: &self.bottom }
    }
}

fn fixed_by(i: &SimplicialMap, top: &SimplicialMap) -> HashMap<CellId, Simplex> {
    i.source()
        .all_cells()
        .filter(|&c| !i.image(c).is_degenerate())
        .map(|c| (i.image(c).cell, top.image(c).clone()))
        .collect()
}

fn count_extensions(i: &SimplicialMap, top: &SimplicialMap, budget: Budget) -> Result<usize, WitnessError> {
    let b = i.target();
    let x = top.target();
    let index = TargetIndex::new(x, b.max_dim(), false)?;
    let all = MapSearch::new(b, &index).fix_all(fixed_by(i, top)).budget(budget).all().map_err(|e| match e {
        SearchError::Budget { limit } => WitnessError::Unknown(format!("candidate budget {limit} exhausted")),
        SearchError::Simplicial(e) => e.into(),
    })?;
    Ok(all.len())
}

fn solve(
    item: &GeneratorItem,
    target: StratSSet,
    top: SimplicialMap,
    description: String,
    budget: Budget,
) -> Result<Option<NonLiftWitness>, WitnessError> {
    let base = target.base().clone();
    let g = make_generator(Generator::Horn(item.n, item.k))?;
    let (_, structure) = target.structure_map();
    let (_, bottom) = StratSSet::simplex(base, &item.labels)?.structure_map();
    let bottom = bottom.with_source(g.ambient.clone()).with_target(structure.target().clone());
    let inclusion = g.inclusion.clone();
    let problem = LiftProblem { i: &inclusion, p: &structure, top: &top, bottom: &bottom };
    problem.check()?;
    let explored = match crate::simplicial::has_lift(problem, budget)? {
        LiftOutcome::Lift(_) => return Ok(None),
        LiftOutcome::NoLift { explored } => explored,
        LiftOutcome::Unknown { reason, .. } => return Err(WitnessError::Unknown(reason)),
    };
    let target_fibrant = is_fibrant(&target, item.n.max(3), budget);
    if !target_fibrant.is_equivalent() {
        return Ok(None);
    }
    let candidate_maps = count_extensions(&inclusion, &top, budget)?;
    Ok(Some(NonLiftWitness {
        item: item.clone(),
        target,
        target_fibrant,
        inclusion,
        structure,
        top,
        bottom,
        candidate_maps,
        lifts: 0,
        explored,
        description,
    }))
}

/// The category with objects `0..=n`, the chain generators, an extra arrow
/// `a` standing in for the edge opposite the horn vertex, strata inverted,
/// and optionally `(a⁻¹ · e)^m = id` to keep it finite.
fn counterexample_category(n: usize, k: usize, labels: &[ElemId], order: Option<usize>) -> Result<Presentation, CategoryError> {
    let names: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
    let mut p = Presentation::new(names.clone());
    let e = |i: usize| format!("e{i}{}", i + 1);
    for i in 0..n {
        p.add_generator(&e(i), &names[i], &names[i + 1])?;
    }
    let (from, to) = if k == 0 { (1, n) } else { (0, n - 1) };
    p.add_generator("a", &names[from], &names[to])?;
    let gens: Vec<String> = (0..n).map(e).collect();
    let path = |a: usize, b: usize| -> Vec<&str> { gens[a..b].iter().map(String::as_str).collect() };
    if k == 0 {
        p.add_relation(&["e01", "a"], &path(0, n))?;
    } else {
        let last = gens[n - 1].as_str();
        p.add_relation(&["a", last], &path(0, n))?;
    }
    for i in 0..n {
        if labels[i] == labels[i + 1] {
            p.add_inverse(&e(i), &format!("{}'", e(i)))?;
        }
    }
    if labels[from] == labels[to] {
        p.add_inverse("a", "a'")?;
        if let Some(m) = order {
            let mut word = Vec::new();
            for _ in 0..m {
                word.push("a'");
                word.extend(path(from, to));
            }
            p.add_relation(&word, &[&format!("id_{}", names[to])])?;
        }
    }
    Ok(p)
}

fn category_witness(
    base: &Arc<Poset>,
    item: &GeneratorItem,
    order: Option<usize>,
    budget: Budget,
) -> Result<Option<NonLiftWitness>, WitnessError> {
    let (n, k) = (item.n, item.k);
    let pres = counterexample_category(n, k, &item.labels, order)?;
    let cat = match FiniteCategory::from_presentation(&pres, FiniteCategory::DEFAULT_BOUND) {
        Ok(c) => c,
        Err(CategoryError::BoundExceeded { .. }) => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    if !cat.is_monotone(&item.labels, base) {
        return Ok(None);
    }
    let by_name = |s: &str| cat.morphisms().iter().position(|m| m.name == s);
    let gens: Option<Vec<MorId>> = (0..n).map(|i| by_name(&format!("e{i}{}", i + 1))).collect();
    let (Some(gens), Some(a)) = (gens, by_name("a")) else { return Ok(None) };
    let special = if k == 0 { (1, n) } else { (0, n - 1) };
    let mor = |i: usize, j: usize| -> MorId {
        if (i, j) == special {
            return a;
        }
        gens[i..j].iter().fold(cat.identity(i), |f, &g| cat.compose(f, g).expect("chain"))
    };
    let nerve = cat.nerve(n);
    let target = StratSSet::from_category(nerve.clone(), base.clone(), item.labels.clone())?;
    let g = make_generator(Generator::Horn(n, k))?;
    let horn = &g.sset;
    let mut images = Vec::new();
    for d in 0..=horn.trunc_dim() {
        let mut level = Vec::new();
        for c in horn.cells_of_dim(d) {
            let vs = g.ambient.vertices_of(g.inclusion.image(c));
            let s = if vs.len() == 1 {
                Simplex::vertex(vs[0])
            } else {
                let chain: Vec<MorId> = vs.windows(2).map(|w| mor(w[0], w[1])).collect();
                match nerve.simplex_of(&chain) {
                    Some(s) => s,
                    None => return Ok(None),
                }
            };
            level.push(s);
        }
        images.push(level);
    }
    let top = match SimplicialMap::new(horn.clone(), nerve.sset.clone(), images) {
        Ok(t) => t,
        Err(_) => return Ok(None),
    };
    let relation = match order {
        Some(m) => format!(", loop of order {m}"),
        None => String::new(),
    };
    let desc = format!("category on {} objects with the opposite edge replaced{relation}", n + 1);
    solve(item, target, top, desc, budget)
}

/// A commutative square against the non-trivial horn `(n, k, labels)` with
/// no diagonal, into a fibrant target.
///
/// For `n ≤ 2` the target is the horn itself and the top map the identity;
/// for `n = 3` a small category with one edge replaced is searched.
pub fn non_lifting_witness(
    base: &Arc<Poset>,
    labels: &[ElemId],
    n: usize,
    k: usize,
    budget: Budget,
) -> Result<NonLiftWitness, WitnessError> {
    let class = classify_horn(base, labels, n, k)?;
    if class.is_trivial() {
        return Err(WitnessError::Trivial { n, k, class });
    }
    let item = GeneratorItem { n, k, labels: labels.to_vec() };
    match n {
        1 | 2 => {
            let g = make_generator(Generator::Horn(n, k))?;
            let horn_labels: Vec<ElemId> =
                (0..g.sset.num_cells(0)).map(|v| labels[g.inclusion.vertex_image(v)]).collect();
            let target = StratSSet::new(g.sset.clone(), base.clone(), horn_labels)?;
            let top = SimplicialMap::identity(g.sset.clone());
            let desc = "the horn itself with the identity; a lift would be a retraction over P".to_string();
            solve(&item, target, top, desc, budget)?
                .ok_or_else(|| WitnessError::Unknown("horn target admits a lift or is not fibrant".into()))
        }
        3 => {
            for order in [None, Some(2), Some(3)] {
                if let Some(w) = category_witness(base, &item, order, budget)? {
                    return Ok(w);
                }
            }
            Err(WitnessError::Unknown(format!(
                "no witness among the searched categories for {}",
                item.display(base)
            )))
        }
        _ => Err(WitnessError::Dimension(n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_case_over_a_chain() {
        let p = Arc::new(Poset::chain(1));
        let r = base_case_witness(&p, &[0, 0, 1], 2).unwrap();
        assert!(r.back_face_iso);
        assert_eq!(r.l20_vertices, 3);
        assert!(r.ok(), "{:?}", r.maps);
        assert!(base_case_witness(&p, &[0, 0, 1], 1).is_err());
        assert!(base_case_witness(&p, &[0, 1, 1], 2).is_err());
    }

    #[test]
    fn edge_with_distinct_labels() {
        let p = Arc::new(Poset::chain(1));
        let w = non_lifting_witness(&p, &[0, 1], 1, 0, Budget::default()).unwrap();
        assert_eq!((w.candidate_maps, w.lifts), (1, 0));
        w.recheck(Budget::default()).unwrap();
    }

    #[test]
    fn outer_two_horns() {
        let p = Arc::new(Poset::chain(2));
        for k in [0, 2] {
            let w = non_lifting_witness(&p, &[0, 1, 2], 2, k, Budget::default()).unwrap();
            assert_eq!(w.lifts, 0);
            assert!(w.target_fibrant.is_equivalent());
            w.recheck(Budget::default()).unwrap();
        }
        assert!(matches!(
            non_lifting_witness(&p, &[0, 1, 2], 2, 1, Budget::default()),
            Err(WitnessError::Trivial { .. })
        ));
    }

    #[test]
    fn three_dimensional_horns() {
        let p = Arc::new(Poset::chain(1));
        for (labels, k) in [([0, 1, 1, 1], 0), ([0, 0, 0, 1], 3), ([0, 1, 1, 1], 3)] {
            let item = GeneratorItem { n: 3, k, labels: labels.to_vec() };
            if classify_horn(&p, &labels, 3, k).unwrap().is_trivial() {
                continue;
            }
            let w = non_lifting_witness(&p, &labels, 3, k, Budget::default())
                .unwrap_or_else(|e| panic!("{}: {e}", item.display(&p)));
            w.recheck(Budget::default()).unwrap();
        }
    }
}
