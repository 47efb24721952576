//! Finite categories given by generators and relations, and their nerves.
//!
//! A presentation is completed into a confluent rewriting system on paths
//! (shortlex order, bounded Knuth–Bendix completion). Morphisms are the
//! irreducible paths; if completion or enumeration exceeds the configured
//! bound, construction fails instead of guessing.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use thiserror::Error;

use super::{CellId, SSetBuilder, SimplicialSet, Simplex, Surj};
use crate::poset::Poset;

pub type MorId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("word `{0}` is not composable")]
    NotComposable(String),
    #[error("relation `{0}` relates non-parallel words")]
    NotParallel(String),
    #[error("word normalization exceeded bound {bound} ({what})")]
    BoundExceeded { bound: usize, what: &'static str },
    #[error("{0}")]
    Invalid(String),
}

/// A path in a presentation: start object plus generators, first arrow first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub start: usize,
    pub gens: Vec<usize>,
}

/// Generators and relations for a category.
#[derive(Clone, Debug, Default)]
pub struct Presentation {
    pub objects: Vec<String>,
    /// `(name, source, target)`
    pub generators: Vec<(String, usize, usize)>,
    pub relations: Vec<(Word, Word)>,
}

impl Presentation {
    pub fn new<S: Into<String>>(objects: impl IntoIterator<Item = S>) -> Self {
        Presentation { objects: objects.into_iter().map(Into::into).collect(), ..Default::default() }
    }

    pub fn object(&self, name: &str) -> Result<usize, CategoryError> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| CategoryError::UnknownObject(name.to_string()))
    }

    pub fn add_generator(&mut self, name: &str, src: &str, tgt: &str) -> Result<usize, CategoryError> {
        let s = self.object(src)?;
        let t = self.object(tgt)?;
        self.generators.push((name.to_string(), s, t));
        Ok(self.generators.len() - 1)
    }

    fn generator(&self, name: &str) -> Result<usize, CategoryError> {
        self.generators
            .iter()
            .position(|g| g.0 == name)
            .ok_or_else(|| CategoryError::UnknownGenerator(name.to_string()))
    }

    /// A word from generator names in path order; `id_<obj>` denotes an
    /// empty path at `obj`.
    pub fn word(&self, names: &[&str]) -> Result<Word, CategoryError> {
        if let [single] = names {
            if let Some(obj) = single.strip_prefix("id_") {
                return Ok(Word { start: self.object(obj)?, gens: Vec::new() });
            }
        }
        let gens = names.iter().map(|n| self.generator(n)).collect::<Result<Vec<_>, _>>()?;
        let start = gens
            .first()
            .map(|&g| self.generators[g].1)
            .ok_or_else(|| CategoryError::Invalid("empty word without object".into()))?;
        let w = Word { start, gens };
        self.end(&w).ok_or_else(|| CategoryError::NotComposable(names.join(" ")))?;
        Ok(w)
    }

    fn end(&self, w: &Word) -> Option<usize> {
        let mut cur = w.start;
        for &g in &w.gens {
            let (_, s, t) = &self.generators[g];
            if *s != cur {
                return None;
            }
            cur = *t;
        }
        Some(cur)
    }

    pub fn add_relation(&mut self, lhs: &[&str], rhs: &[&str]) -> Result<(), CategoryError> {
        let l = self.word(lhs)?;
        let r = self.word(rhs)?;
        self.relate(l, r)
    }

    pub fn relate(&mut self, l: Word, r: Word) -> Result<(), CategoryError> {
        if l.start != r.start || self.end(&l) != self.end(&r) || self.end(&l).is_none() {
            return Err(CategoryError::NotParallel(format!("{:?} = {:?}", l.gens, r.gens)));
        }
        self.relations.push((l, r));
        Ok(())
    }

    /// Adds `inv` as a two-sided inverse of generator `g`.
    pub fn add_inverse(&mut self, g: &str, inv: &str) -> Result<(), CategoryError> {
        let gi = self.generator(g)?;
        let (_, s, t) = self.generators[gi].clone();
        let (sn, tn) = (self.objects[s].clone(), self.objects[t].clone());
        self.add_generator(inv, &tn, &sn)?;
        self.add_relation(&[g, inv], &[&format!("id_{sn}")])?;
        self.add_relation(&[inv, g], &[&format!("id_{tn}")])
    }
}

fn shortlex_less(a: &[usize], b: &[usize]) -> bool {
    (a.len(), a) < (b.len(), b)
}

#[derive(Clone, Debug)]
struct Rule {
    lhs: Vec<usize>,
    rhs: Vec<usize>,
}

fn find(hay: &[usize], needle: &[usize]) -> Option<usize> {
    if needle.len() > hay.len() {
        return None;
    }
    (0..=hay.len() - needle.len()).find(|&i| &hay[i..i + needle.len()] == needle)
}

fn reduce(rules: &[Rule], w: &[usize]) -> Vec<usize> {
    let mut cur = w.to_vec();
    'outer: loop {
        for r in rules {
            if let Some(i) = find(&cur, &r.lhs) {
                let mut next = cur[..i].to_vec();
                next.extend_from_slice(&r.rhs);
                next.extend_from_slice(&cur[i + r.lhs.len()..]);
                cur = next;
                continue 'outer;
            }
        }
        return cur;
    }
}

fn orient(a: Vec<usize>, b: Vec<usize>) -> Option<Rule> {
    if a == b {
        None
    } else if shortlex_less(&a, &b) {
        Some(Rule { lhs: b, rhs: a })
    } else {
        Some(Rule { lhs: a, rhs: b })
    }
}

/// Knuth–Bendix completion with a bound on rule count and length.
fn complete(relations: &[(Vec<usize>, Vec<usize>)], bound: usize) -> Result<Vec<Rule>, CategoryError> {
    let mut rules: Vec<Rule> = Vec::new();
    let mut pending: VecDeque<(Vec<usize>, Vec<usize>)> = relations.iter().cloned().collect();
    loop {
        while let Some((a, b)) = pending.pop_front() {
            let (a, b) = (reduce(&rules, &a), reduce(&rules, &b));
            if let Some(r) = orient(a, b) {
                if r.lhs.len() > bound {
                    return Err(CategoryError::BoundExceeded { bound, what: "rule length" });
                }
                // interreduce: rules whose lhs contains the new lhs are retired
                let mut kept = Vec::new();
                for old in rules.drain(..) {
                    if find(&old.lhs, &r.lhs).is_some() {
                        pending.push_back((old.lhs, old.rhs));
                    } else {
                        kept.push(old);
                    }
                }
                rules = kept;
                rules.push(r);
                let snapshot = rules.clone();
                for old in rules.iter_mut() {
                    old.rhs = reduce(&snapshot, &old.rhs);
                }
                if rules.len() > bound * bound {
                    return Err(CategoryError::BoundExceeded { bound, what: "rule count" });
                }
            }
        }
        // critical pairs
        let mut found = false;
        let snapshot = rules.clone();
        for r1 in &snapshot {
            for r2 in &snapshot {
                let (l1, l2) = (&r1.lhs, &r2.lhs);
                for k in 1..l1.len().min(l2.len()) {
                    if l1[l1.len() - k..] == l2[..k] {
                        let mut a = r1.rhs.clone();
                        a.extend_from_slice(&l2[k..]);
                        let mut b = l1[..l1.len() - k].to_vec();
                        b.extend_from_slice(&r2.rhs);
                        let (a, b) = (reduce(&snapshot, &a), reduce(&snapshot, &b));
                        if a != b {
                            pending.push_back((a, b));
                            found = true;
                        }
                    }
                }
            }
        }
        if !found {
            return Ok(rules);
        }
    }
}

/// A morphism of a [`FiniteCategory`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

/// A finite category with an explicit composition table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<MorId>,
    /// `comp[f][g] = g ∘ f` (f first), when composable.
    comp: Vec<Vec<Option<MorId>>>,
}

impl FiniteCategory {
    /// Default bound on rewriting rule length and on normal-form length.
    pub const DEFAULT_BOUND: usize = 12;

    /// Builds the category from a presentation via bounded completion.
    pub fn from_presentation(p: &Presentation, bound: usize) -> Result<Self, CategoryError> {
        // Empty words at different objects are distinct; rules never rewrite
        // across objects since relations are parallel.
        let rels: Vec<(Vec<usize>, Vec<usize>)> =
            p.relations.iter().map(|(l, r)| (l.gens.clone(), r.gens.clone())).collect();
        let rules = complete(&rels, bound)?;
        let irreducible = |w: &[usize]| rules.iter().all(|r| !w.ends_with(&r.lhs));
        // BFS over irreducible paths
        let mut words: Vec<Word> = (0..p.objects.len()).map(|o| Word { start: o, gens: Vec::new() }).collect();
        let mut frontier: Vec<(Word, usize)> =
            (0..p.objects.len()).map(|o| (Word { start: o, gens: Vec::new() }, o)).collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (w, end) in &frontier {
                for (g, (_, s, t)) in p.generators.iter().enumerate() {
                    if s != end {
                        continue;
                    }
                    let mut gens = w.gens.clone();
                    gens.push(g);
                    if irreducible(&gens) {
                        if gens.len() > bound {
                            return Err(CategoryError::BoundExceeded { bound, what: "normal form length" });
                        }
                        next.push((Word { start: w.start, gens }, *t));
                    }
                }
            }
            words.extend(next.iter().map(|(w, _)| w.clone()));
            frontier = next;
        }
        let index: HashMap<Word, MorId> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let morphisms: Vec<Morphism> = words
            .iter()
            .map(|w| {
                let name = if w.gens.is_empty() {
                    format!("id_{}", p.objects[w.start])
                } else {
                    let parts: Vec<&str> = w.gens.iter().map(|&g| p.generators[g].0.as_str()).collect();
                    parts.join(".")
                };
                Morphism { name, src: w.start, tgt: p.end(w).expect("composable") }
            })
            .collect();
        let n = words.len();
        let mut comp = vec![vec![None; n]; n];
        for (i, f) in words.iter().enumerate() {
            for (j, g) in words.iter().enumerate() {
                if morphisms[i].tgt == morphisms[j].src {
                    let mut gens = f.gens.clone();
                    gens.extend_from_slice(&g.gens);
                    let red = reduce(&rules, &gens);
                    let key = Word { start: f.start, gens: red };
                    comp[i][j] = Some(*index.get(&key).ok_or_else(|| {
                        CategoryError::Invalid("composite not among normal forms".into())
                    })?);
                }
            }
        }
        Ok(FiniteCategory { objects: p.objects.clone(), identities: (0..p.objects.len()).collect(), morphisms, comp })
    }

    /// A preorder: at most one morphism `a → b`, present iff `leq[a][b]`.
    pub fn preorder(objects: Vec<String>, leq: &[Vec<bool>]) -> Result<Self, CategoryError> {
        let n = objects.len();
        for a in 0..n {
            if !leq[a][a] {
                return Err(CategoryError::Invalid("preorder must be reflexive".into()));
            }
            for b in 0..n {
                for c in 0..n {
                    if leq[a][b] && leq[b][c] && !leq[a][c] {
                        return Err(CategoryError::Invalid("preorder must be transitive".into()));
                    }
                }
            }
        }
        let mut morphisms: Vec<Morphism> = (0..n)
            .map(|o| Morphism { name: format!("id_{}", objects[o]), src: o, tgt: o })
            .collect();
        let mut idx = HashMap::new();
        for o in 0..n {
            idx.insert((o, o), o);
        }
        for a in 0..n {
            for b in 0..n {
                if a != b && leq[a][b] {
                    idx.insert((a, b), morphisms.len());
                    morphisms.push(Morphism { name: format!("{}->{}", objects[a], objects[b]), src: a, tgt: b });
                }
            }
        }
        let m = morphisms.len();
        let mut comp = vec![vec![None; m]; m];
        for (i, f) in morphisms.iter().enumerate() {
            for (j, g) in morphisms.iter().enumerate() {
                if f.tgt == g.src {
                    comp[i][j] = Some(idx[&(f.src, g.tgt)]);
                }
            }
        }
        Ok(FiniteCategory { objects, morphisms, identities: (0..n).collect(), comp })
    }

    pub fn from_poset(p: &Poset) -> Self {
        let leq: Vec<Vec<bool>> = p.elements().map(|a| p.elements().map(|b| p.leq(a, b)).collect()).collect();
        FiniteCategory::preorder(p.names().to_vec(), &leq).expect("posets are preorders")
    }

    pub fn discrete(n: usize) -> Self {
        let leq: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| a == b).collect()).collect();
        FiniteCategory::preorder((0..n).map(|i| i.to_string()).collect(), &leq).expect("discrete")
    }

    /// The walking isomorphism `0 ≅ 1`.
    pub fn walking_iso() -> Self {
        let mut p = Presentation::new(["0", "1"]);
        p.add_generator("f", "0", "1").expect("objects exist");
        p.add_inverse("f", "g").expect("generator exists");
        FiniteCategory::from_presentation(&p, Self::DEFAULT_BOUND).expect("E is finite")
    }

    /// The cyclic group of order `n` as a one-object category.
    pub fn cyclic_group(n: usize) -> Self {
        let mut p = Presentation::new(["*"]);
        p.add_generator("a", "*", "*").expect("object exists");
        let lhs: Vec<&str> = vec!["a"; n.max(1)];
        p.add_relation(&lhs, &["id_*"]).expect("loop");
        FiniteCategory::from_presentation(&p, n.max(2) + 2).expect("cyclic groups are finite")
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn identity(&self, o: usize) -> MorId {
        self.identities[o]
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        self.identities[self.morphisms[f].src] == f
    }

    /// `g ∘ f`.
    pub fn compose(&self, f: MorId, g: MorId) -> Option<MorId> {
        self.comp[f][g]
    }

    pub fn inverse(&self, f: MorId) -> Option<MorId> {
        let m = &self.morphisms[f];
        (0..self.morphisms.len()).find(|&g| {
            self.comp[f][g] == Some(self.identities[m.src]) && self.comp[g][f] == Some(self.identities[m.tgt])
        })
    }

    pub fn is_iso(&self, f: MorId) -> bool {
        self.inverse(f).is_some()
    }

    /// Every morphism between objects with the same label is invertible.
    /// `labels` must be a functor to a poset (checked by [`Self::is_monotone`]).
    pub fn is_conservative_over(&self, labels: &[usize]) -> bool {
        self.morphisms
            .iter()
            .enumerate()
            .all(|(f, m)| labels[m.src] != labels[m.tgt] || self.is_iso(f))
    }

    /// Labels are monotone along all morphisms.
    pub fn is_monotone(&self, labels: &[usize], p: &Poset) -> bool {
        self.morphisms.iter().all(|m| p.leq(labels[m.src], labels[m.tgt]))
    }

    /// The nerve, with nondegenerate simplices up to `trunc_dim`.
    pub fn nerve(&self, trunc_dim: usize) -> CategoryNerve {
        let non_id: Vec<MorId> = (0..self.morphisms.len()).filter(|&f| !self.is_identity(f)).collect();
        let mut chains: Vec<Vec<Vec<MorId>>> = vec![Vec::new(); trunc_dim + 1];
        let mut layer: Vec<Vec<MorId>> = non_id.iter().map(|&f| vec![f]).collect();
        let mut complete = true;
        for (d, slot) in chains.iter_mut().enumerate().skip(1) {
            *slot = layer.clone();
            let mut next = Vec::new();
            for c in &layer {
                let end = self.morphisms[*c.last().expect("nonempty")].tgt;
                for &f in &non_id {
                    if self.morphisms[f].src == end {
                        let mut e = c.clone();
                        e.push(f);
                        next.push(e);
                    }
                }
            }
            layer = next;
            if d == trunc_dim && !layer.is_empty() {
                complete = false;
            }
        }
        if trunc_dim == 0 && !layer.is_empty() {
            complete = false;
        }
        let mut b = SSetBuilder::new(trunc_dim, complete);
        let mut index: HashMap<Vec<MorId>, CellId> = HashMap::new();
        let mut vertex_chain: Vec<usize> = Vec::new();
        for (o, name) in self.objects.iter().enumerate() {
            b.add_vertex(name.clone()).expect("object names distinct");
            vertex_chain.push(o);
        }
        let mut nerve = CategoryNerve {
            category: Arc::new(self.clone()),
            sset: Arc::new(SimplicialSet::empty()),
            chains: vec![Vec::new(); trunc_dim + 1],
            index: HashMap::new(),
        };
        for (d, level) in chains.iter().enumerate().skip(1) {
            for c in level {
                let faces: Vec<Simplex> = (0..=d)
                    .map(|i| {
                        let face = self.face_chain(c, i);
                        nerve.normalize_with(&index, &face)
                    })
                    .collect();
                let name = {
                    let parts: Vec<&str> = c.iter().map(|&f| self.morphisms[f].name.as_str()).collect();
                    format!("[{}]", parts.join(","))
                };
                let id = b.add_cell(name, faces).expect("chain names are distinct");
                index.insert(c.clone(), id);
            }
        }
        nerve.chains = chains;
        nerve.index = index;
        nerve.sset = Arc::new(b.build_unchecked());
        if nerve.sset.is_complete() {
            nerve.chains.truncate(nerve.sset.trunc_dim() + 1);
        }
        nerve
    }

    /// `d_i` of a chain of `k ≥ 1` composable morphisms, as a sequence of
    /// morphisms that may contain identities (and may start at an object).
    fn face_chain(&self, c: &[MorId], i: usize) -> ChainFace {
        let k = c.len();
        if k == 1 {
            let m = &self.morphisms[c[0]];
            return ChainFace::Object(if i == 0 { m.tgt } else { m.src });
        }
        let mut v: Vec<MorId> = Vec::with_capacity(k - 1);
        if i == 0 {
            v.extend_from_slice(&c[1..]);
        } else if i == k {
            v.extend_from_slice(&c[..k - 1]);
        } else {
            v.extend_from_slice(&c[..i - 1]);
            v.push(self.compose(c[i - 1], c[i]).expect("composable chain"));
            v.extend_from_slice(&c[i + 1..]);
        }
        ChainFace::Chain(v)
    }
}

enum ChainFace {
    Object(usize),
    Chain(Vec<MorId>),
}

/// The nerve of a [`FiniteCategory`] with chain bookkeeping.
#[derive(Clone, Debug)]
pub struct CategoryNerve {
    pub category: Arc<FiniteCategory>,
    pub sset: Arc<SimplicialSet>,
    chains: Vec<Vec<Vec<MorId>>>,
    index: HashMap<Vec<MorId>, CellId>,
}

impl CategoryNerve {
    fn normalize_with(&self, index: &HashMap<Vec<MorId>, CellId>, face: &ChainFace) -> Simplex {
        match face {
            ChainFace::Object(o) => Simplex::vertex(*o),
            ChainFace::Chain(v) => {
                let cat = &self.category;
                let kept: Vec<MorId> = v.iter().copied().filter(|&f| !cat.is_identity(f)).collect();
                let mut sur = Surj::new();
                let mut pos = 0u8;
                sur.push(0);
                for &f in v {
                    if !cat.is_identity(f) {
                        pos += 1;
                    }
                    sur.push(pos);
                }
                if kept.is_empty() {
                    return Simplex { cell: CellId::new(0, cat.morphisms[v[0]].src), sur };
                }
                Simplex { cell: index[&kept], sur }
            }
        }
    }

    /// Normal form of a chain of composable morphisms (identities allowed).
    pub fn simplex_of(&self, chain: &[MorId]) -> Option<Simplex> {
        if chain.is_empty() {
            return None;
        }
        let kept: Vec<MorId> = chain.iter().copied().filter(|&f| !self.category.is_identity(f)).collect();
        if !kept.is_empty() && !self.index.contains_key(&kept) {
            return None;
        }
        Some(self.normalize_with(&self.index, &ChainFace::Chain(chain.to_vec())))
    }

    /// The chain of non-identity morphisms of a nondegenerate simplex.
    pub fn chain(&self, c: CellId) -> &[MorId] {
        &self.chains[c.dim()][c.idx()]
    }

    /// The morphism from vertex `a` to vertex `b` of a simplex (`a ≤ b`).
    pub fn edge(&self, x: &Simplex, a: usize, b: usize) -> MorId {
        let cat = &self.category;
        let (ia, ib) = (x.sur[a] as usize, x.sur[b] as usize);
        if x.cell.dim() == 0 {
            return cat.identity(x.cell.idx());
        }
        let chain = self.chain(x.cell);
        let start = if ia == 0 { cat.morphisms[chain[0]].src } else { cat.morphisms[chain[ia - 1]].tgt };
        let mut f = cat.identity(start);
        for &g in &chain[ia..ib] {
            f = cat.compose(f, g).expect("composable");
        }
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn walking_iso_has_four_morphisms() {
        let e = FiniteCategory::walking_iso();
        assert_eq!(e.morphisms().len(), 4);
        assert!(e.morphisms().iter().enumerate().all(|(f, _)| e.is_iso(f)));
    }

    #[test]
    fn walking_iso_nerve_has_two_cells_per_dimension() {
        let e = FiniteCategory::walking_iso();
        let n = e.nerve(3);
        assert_eq!(n.sset.cell_counts(), vec![2, 2, 2, 2]);
        assert!(!n.sset.is_complete());
    }

    #[test]
    fn poset_nerve_matches_simplex() {
        let c = FiniteCategory::from_poset(&Poset::chain(2));
        let n = c.nerve(3);
        assert_eq!(n.sset.cell_counts(), vec![3, 3, 1]);
        assert!(n.sset.is_complete());
    }

    #[test]
    fn discrete_nerve() {
        let n = FiniteCategory::discrete(2).nerve(2);
        assert_eq!(n.sset.cell_counts(), vec![2]);
    }

    #[test]
    fn cyclic_group_order() {
        let g = FiniteCategory::cyclic_group(3);
        assert_eq!(g.morphisms().len(), 3);
        let n = g.nerve(2);
        assert_eq!(n.sset.cell_counts(), vec![1, 2, 4]);
    }

    #[test]
    fn infinite_presentation_is_rejected() {
        let mut p = Presentation::new(["*"]);
        p.add_generator("a", "*", "*").unwrap();
        let r = FiniteCategory::from_presentation(&p, 5);
        assert!(matches!(r, Err(CategoryError::BoundExceeded { .. })));
    }

    #[test]
    fn completion_handles_overlaps() {
        // a^2 = b, b^2 = a^2 ... a monoid with a^3 = 1, b = a^2
        let mut p = Presentation::new(["*"]);
        p.add_generator("a", "*", "*").unwrap();
        p.add_generator("b", "*", "*").unwrap();
        p.add_relation(&["a", "a"], &["b"]).unwrap();
        p.add_relation(&["a", "b"], &["id_*"]).unwrap();
        let c = FiniteCategory::from_presentation(&p, 8).unwrap();
        assert_eq!(c.morphisms().len(), 3);
    }
}
