//! Base change of `L_P` along a string, and monomorphism checks for
//! presheaves and for poset-indexed diagrams of finite sets.

use std::collections::HashMap;
use std::sync::Arc;

use crate::poset::{pair_sigma, ElemId, PString, Poset};
use crate::simplicial::{CellId, SimplicialMap, Simplex};
use crate::stratified::{StratMap, StratSSet};

use super::{lkan, DecollageError, LkanStrategy, Presheaf};

/// `Σ ×_P L_P(F) ≅ L_Σ(F|Σ)` with both directions of the isomorphism.
#[derive(Clone, Debug)]
pub struct BaseChange {
    pub sigma: String,
    /// `Σ ×_P L_P(F)`, over the full subposet on `Σ`.
    pub lhs: StratSSet,
    pub rhs: StratSSet,
    /// Induced by the legs of `L_Σ(F|Σ)`.
    pub forward: StratMap,
    /// Induced through `(S,S') ↦ (S∩Σ, S')`.
    pub backward: StratMap,
    /// Result of checking that `(S,S') ↦ (S∩Σ, S')` is left adjoint to
    /// the inclusion `Pair(Σ) ⊆ Pair_Σ(P)`.
    pub adjunction: Result<(), String>,
}

/// Computes both sides and checks that the comparison maps are mutually
/// inverse. Anything short of an exact isomorphism is an error.
pub fn base_change_iso(f: &Presheaf, sigma: &PString) -> Result<BaseChange, DecollageError> {
    let base = f.base();
    let name = sigma.display(base);
    let adjunction = pair_sigma(base, sigma).verify_adjunction();
    let sub = Arc::new(base.full_subposet(sigma.elems()));
    let to_sub = |e: ElemId| sub.id(base.name(e)).expect("element of sigma");
    let to_base = |e: ElemId| base.id(sub.name(e)).expect("element of sigma");

    let l = lkan(f, LkanStrategy::PairColimit)?;
    let total = l.object.total();
    let (lhs_sset, inc) = total.subcomplex(|c| l.object.labels_of(&Simplex::nondeg(c)).iter().all(|&p| sigma.contains(p)))?;
    let into_lhs: HashMap<CellId, CellId> = lhs_sset.all_cells().map(|c| (inc.image(c).cell, c)).collect();
    let lhs_labels = (0..lhs_sset.num_cells(0)).map(|v| to_sub(l.object.label(inc.vertex_image(v)))).collect();
    let lhs = StratSSet::new(lhs_sset.clone(), sub.clone(), lhs_labels)?;

    let fs = f.restrict_to(sigma)?;
    let r = lkan(&fs, LkanStrategy::PairColimit)?;
    let up = |s: &PString| -> usize {
        let ids: Vec<ElemId> = s.elems().iter().map(|&e| to_base(e)).collect();
        f.index_of(&PString::new(base, &ids).expect("chain")).expect("string")
    };
    let relocate = |x: &Simplex| -> Option<Simplex> { into_lhs.get(&x.cell).map(|&cell| Simplex { cell, sur: x.sur.clone() }) };

    let mut comps = Vec::new();
    for (j, &(o, i)) in r.pieces.iter().enumerate() {
        let jj = l.piece(up(&fs.strings()[o]), up(&fs.strings()[i])).expect("pair of P");
        let leg = &l.colimit.cocone[jj];
        let images = leg
            .images()
            .iter()
            .map(|lv| lv.iter().map(|x| relocate(x).ok_or_else(|| DecollageError::NotIso(format!("leg {j} leaves Σ")))).collect())
            .collect::<Result<Vec<Vec<Simplex>>, _>>()?;
        comps.push(SimplicialMap::new(r.products[j].sset.clone(), lhs_sset.clone(), images)?);
    }
    let fwd = r.colimit.induce(lhs_sset.clone(), &comps)?;

    // Backward: a cell of the pullback comes from some `(s, x)` on a piece
    // `(S, S')` with `s` spanned by vertices over `Σ`.
    let rt = r.object.total();
    let mut images: Vec<Vec<Simplex>> = vec![Vec::new(); lhs_sset.trunc_dim() + 1];
    for c in lhs_sset.all_cells() {
        let (jj, oc) = l.colimit.representative(inc.image(c).cell);
        let (o, i) = l.pieces[jj];
        let (s, x) = l.products[jj].components(oc);
        let so = &f.strings()[o];
        let si = &f.strings()[i];
        let left = &l.products[jj].left;
        let verts: Vec<ElemId> = left.vertices_of(s).into_iter().map(|v| si.elems()[v]).collect();
        let cut_inner = si.intersect(sigma).ok_or_else(|| DecollageError::NotIso("empty intersection".into()))?;
        let cut_outer = so.intersect(sigma).expect("contains the inner cut");
        let sub_inner = PString::new(&sub, &cut_inner.elems().iter().map(|&e| to_sub(e)).collect::<Vec<_>>())?;
        let sub_outer = PString::new(&sub, &cut_outer.elems().iter().map(|&e| to_sub(e)).collect::<Vec<_>>())?;
        let (ro, ri) = (fs.index_of(&sub_outer).expect("string"), fs.index_of(&sub_inner).expect("string"));
        let j = r.piece(ro, ri).expect("pair of sigma");
        let target_left = &r.products[j].left;
        let top = CellId::new(target_left.max_dim(), 0);
        let theta: Vec<u8> = verts.iter().map(|&e| cut_inner.position(e).expect("vertex over sigma") as u8).collect();
        let s2 = target_left.apply(&Simplex::nondeg(top), &theta);
        let x2 = f.restriction(o, up(&fs.strings()[ro])).expect("restriction").apply(x);
        let z = r.products[j].pair(&s2, &x2);
        images[c.dim()].push(r.colimit.cocone[j].apply(&z));
    }
    let bwd = SimplicialMap::new(lhs_sset.clone(), rt.clone(), images)?;
    let id_l = SimplicialMap::identity(lhs_sset.clone());
    let id_r = SimplicialMap::identity(rt.clone());
    if !fwd.then(&bwd)?.agrees_with(&id_r) || !bwd.then(&fwd)?.agrees_with(&id_l) {
        return Err(DecollageError::NotIso(format!("comparison maps at {name} are not mutually inverse")));
    }
    let forward = StratMap::new(r.object.clone(), lhs.clone(), fwd)?;
    let backward = StratMap::new(lhs.clone(), r.object.clone(), bwd)?;
    Ok(BaseChange { sigma: name, lhs, rhs: r.object, forward, backward, adjunction })
}

/// Result of [`mono_pushforward_check`].
#[derive(Clone, Debug)]
pub struct MonoReport {
    /// Restrictions `outer -> inner` that are not injective.
    pub non_monos: Vec<(String, String)>,
    /// Injectivity of `Σ' ⋊ F(Σ) → L_P(F)` per pair, when all restrictions
    /// are monomorphisms.
    pub legs: Option<Vec<(String, bool)>>,
}

impl MonoReport {
    pub fn is_mono_diagram(&self) -> bool {
        self.non_monos.is_empty()
    }

    pub fn legs_injective(&self) -> Option<bool> {
        self.legs.as_ref().map(|l| l.iter().all(|(_, b)| *b))
    }
}

pub fn mono_pushforward_check(f: &Presheaf) -> Result<MonoReport, DecollageError> {
    let non_monos: Vec<(String, String)> = f.non_monos().into_iter().map(|(o, i)| (f.display(o), f.display(i))).collect();
    if !non_monos.is_empty() {
        return Ok(MonoReport { non_monos, legs: None });
    }
    let l = lkan(f, LkanStrategy::PairColimit)?;
    let legs = l
        .pieces
        .iter()
        .zip(&l.colimit.cocone)
        .map(|(&(o, i), leg)| (format!("({},{})", f.display(o), f.display(i)), leg.is_injective()))
        .collect();
    Ok(MonoReport { non_monos, legs: Some(legs) })
}

/// A functor from a finite poset to finite sets, given on covering
/// relations. Elements of `G(i)` are `0..sizes[i]`.
#[derive(Clone, Debug)]
pub struct SetDiagram {
    pub poset: Poset,
    pub sizes: Vec<usize>,
    pub maps: HashMap<(ElemId, ElemId), Vec<usize>>,
}

impl SetDiagram {
    /// Checks that every cover has a map with values in range and that all
    /// paths between two elements compose to the same map.
    pub fn new(poset: Poset, sizes: Vec<usize>, maps: HashMap<(ElemId, ElemId), Vec<usize>>) -> Result<Self, DecollageError> {
        let err = |s: String| DecollageError::SetDiagram(s);
        if sizes.len() != poset.len() {
            return Err(err(format!("{} sizes for {} elements", sizes.len(), poset.len())));
        }
        for (a, b) in poset.covers() {
            let m = maps.get(&(a, b)).ok_or_else(|| err(format!("no map {} -> {}", poset.name(a), poset.name(b))))?;
            if m.len() != sizes[a] || m.iter().any(|&y| y >= sizes[b]) {
                return Err(err(format!("map {} -> {} is out of range", poset.name(a), poset.name(b))));
            }
        }
        let g = SetDiagram { poset, sizes, maps };
        for a in g.poset.elements() {
            let mut seen: HashMap<ElemId, Vec<usize>> = HashMap::new();
            let mut stack = vec![(a, (0..g.sizes[a]).collect::<Vec<_>>())];
            while let Some((b, m)) = stack.pop() {
                if let Some(prev) = seen.get(&b) {
                    if *prev != m {
                        return Err(err(format!("paths {} -> {} disagree", g.poset.name(a), g.poset.name(b))));
                    }
                    continue;
                }
                seen.insert(b, m.clone());
                for (c, d) in g.poset.covers() {
                    if c == b {
                        stack.push((d, m.iter().map(|&x| g.maps[&(c, d)][x]).collect()));
                    }
                }
            }
        }
        Ok(g)
    }

    pub fn is_mono(&self) -> bool {
        self.maps.values().all(|m| {
            let mut v = m.clone();
            v.sort();
            v.dedup();
            v.len() == m.len()
        })
    }

    /// The colimit: its size and the class of each element of each `G(i)`.
    pub fn colimit(&self) -> (usize, Vec<Vec<usize>>) {
        let offsets: Vec<usize> = self.sizes.iter().scan(0, |acc, &s| {
            let o = *acc;
            *acc += s;
            Some(o)
        }).collect();
        let total: usize = self.sizes.iter().sum();
        let mut parent: Vec<usize> = (0..total).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (&(a, b), m) in &self.maps {
            for (x, &y) in m.iter().enumerate() {
                let (rx, ry) = (find(&mut parent, offsets[a] + x), find(&mut parent, offsets[b] + y));
                parent[rx.max(ry)] = rx.min(ry);
            }
        }
        let mut ids: HashMap<usize, usize> = HashMap::new();
        let classes = (0..self.sizes.len())
            .map(|i| {
                (0..self.sizes[i])
                    .map(|x| {
                        let r = find(&mut parent, offsets[i] + x);
                        let n = ids.len();
                        *ids.entry(r).or_insert(n)
                    })
                    .collect()
            })
            .collect();
        (ids.len(), classes)
    }

    /// Whether each `G(i) → colim G` is injective.
    pub fn legs_injective(&self) -> Vec<bool> {
        let (_, classes) = self.colimit();
        classes
            .into_iter()
            .map(|mut c| {
                let n = c.len();
                c.sort();
                c.dedup();
                c.len() == n
            })
            .collect()
    }
}

/// A diagram of monomorphisms over the four-element crown `a, b < c, d`
/// whose leg at `d` is not injective.
pub fn crown_counterexample() -> SetDiagram {
    let rels: Vec<(String, String)> =
        [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")].iter().map(|(x, y)| (x.to_string(), y.to_string())).collect();
    let poset = Poset::new(["a", "b", "c", "d"], &rels).expect("crown");
    let id = |n: &str| poset.id(n).expect("element");
    let maps = HashMap::from([
        ((id("a"), id("c")), vec![0]),
        ((id("b"), id("c")), vec![0]),
        ((id("a"), id("d")), vec![0]),
        ((id("b"), id("d")), vec![1]),
    ]);
    let sizes = vec![1, 1, 1, 2];
    SetDiagram::new(poset, sizes, maps).expect("functorial")
}
