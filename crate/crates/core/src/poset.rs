//! Finite posets, strings, subdivisions and pair posets.
//!
//! Element identifiers are opaque strings. A [`Poset`] stores its elements
//! sorted lexicographically, so element ids (`usize` indices) follow the
//! canonical order and every enumeration below is deterministic.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Index of an element inside its [`Poset`].
pub type ElemId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("relation generators contain a cycle through `{0}` and `{1}`")]
    Cycle(String, String),
    #[error("elements {0:?} are not totally ordered")]
    NotAChain(Vec<String>),
    #[error("a string must be nonempty")]
    EmptyString,
    #[error("order relation is not {0}")]
    InvalidOrder(&'static str),
}

/// A finite partial order with a transitively closed `leq` table.
#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
    index: HashMap<String, ElemId>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self
            .covers()
            .into_iter()
            .map(|(a, b)| format!("{}<{}", self.names[a], self.names[b]))
            .collect();
        f.debug_struct("Poset")
            .field("elements", &self.names)
            .field("covers", &rels)
            .finish()
    }
}

impl Poset {
    /// Builds a poset from element names and generating relations `a < b`.
    /// The reflexive-transitive closure is computed; cycles are rejected.
    pub fn new<I, S>(elements: I, relations: &[(String, String)]) -> Result<Self, PosetError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = elements.into_iter().map(Into::into).collect();
        names.sort();
        for w in names.windows(2) {
            if w[0] == w[1] {
                return Err(PosetError::DuplicateElement(w[0].clone()));
            }
        }
        let index: HashMap<String, ElemId> =
            names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let n = names.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in relations {
            let ia = *index.get(a).ok_or_else(|| PosetError::UnknownElement(a.clone()))?;
            let ib = *index.get(b).ok_or_else(|| PosetError::UnknownElement(b.clone()))?;
            leq[ia][ib] = true;
        }
        // Warshall closure.
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i][j] && leq[j][i] {
                    return Err(PosetError::Cycle(names[i].clone(), names[j].clone()));
                }
            }
        }
        Ok(Poset { names, leq, index })
    }

    /// Builds a poset from an explicit order table, checking all three axioms.
    pub fn from_leq(names: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self, PosetError> {
        let n = names.len();
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(PosetError::InvalidOrder("square"));
        }
        for i in 0..n {
            if !leq[i][i] {
                return Err(PosetError::InvalidOrder("reflexive"));
            }
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(PosetError::InvalidOrder("antisymmetric"));
                }
                for k in 0..n {
                    if leq[i][j] && leq[j][k] && !leq[i][k] {
                        return Err(PosetError::InvalidOrder("transitive"));
                    }
                }
            }
        }
        let rels: Vec<(String, String)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && leq[i][j])
            .map(|(i, j)| (names[i].clone(), names[j].clone()))
            .collect();
        Poset::new(names.clone(), &rels)
    }

    /// The chain `[n] = {0 < 1 < ... < n}`.
    pub fn chain(n: usize) -> Self {
        let names: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
        let rels: Vec<(String, String)> =
            (0..n).map(|i| (i.to_string(), (i + 1).to_string())).collect();
        Poset::new(names, &rels).expect("chain is a poset")
    }

    pub fn point() -> Self {
        Poset::chain(0)
    }

    pub fn antichain<I, S>(elements: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Poset::new(elements, &[]).expect("antichain of distinct names")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, e: ElemId) -> &str {
        &self.names[e]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn id(&self, name: &str) -> Result<ElemId, PosetError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| PosetError::UnknownElement(name.to_string()))
    }

    pub fn leq(&self, a: ElemId, b: ElemId) -> bool {
        self.leq[a][b]
    }

    pub fn lt(&self, a: ElemId, b: ElemId) -> bool {
        a != b && self.leq[a][b]
    }

    pub fn comparable(&self, a: ElemId, b: ElemId) -> bool {
        self.leq[a][b] || self.leq[b][a]
    }

    pub fn elements(&self) -> impl Iterator<Item = ElemId> {
        0..self.names.len()
    }

    /// Covering relations `a ⋖ b`, in lexicographic order of ids.
    pub fn covers(&self) -> Vec<(ElemId, ElemId)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) && !(0..n).any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// The full subposet on the given elements (names preserved).
    pub fn full_subposet(&self, elems: &[ElemId]) -> Poset {
        let names: Vec<String> = elems.iter().map(|&e| self.names[e].clone()).collect();
        let rels: Vec<(String, String)> = elems
            .iter()
            .flat_map(|&a| elems.iter().map(move |&b| (a, b)))
            .filter(|&(a, b)| self.lt(a, b))
            .map(|(a, b)| (self.names[a].clone(), self.names[b].clone()))
            .collect();
        Poset::new(names, &rels).expect("subposet of a poset")
    }
}

/// A string: a nonempty chain of elements, stored in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PString(Vec<ElemId>);

impl PString {
    /// Sorts `elems` along the order of `poset`; rejects incomparable pairs.
    pub fn new(poset: &Poset, elems: &[ElemId]) -> Result<Self, PosetError> {
        if elems.is_empty() {
            return Err(PosetError::EmptyString);
        }
        let mut v = elems.to_vec();
        v.sort();
        v.dedup();
        for &a in &v {
            for &b in &v {
                if !poset.comparable(a, b) {
                    return Err(PosetError::NotAChain(
                        v.iter().map(|&e| poset.name(e).to_string()).collect(),
                    ));
                }
            }
        }
        // In a chain, the number of elements below is a rank.
        let ranks: Vec<(usize, ElemId)> =
            v.iter().map(|&a| (v.iter().filter(|&&b| poset.leq(b, a)).count(), a)).collect();
        let mut ranks = ranks;
        ranks.sort();
        let v: Vec<ElemId> = ranks.into_iter().map(|(_, a)| a).collect();
        Ok(PString(v))
    }

    pub fn from_names(poset: &Poset, names: &[&str]) -> Result<Self, PosetError> {
        let ids = names.iter().map(|n| poset.id(n)).collect::<Result<Vec<_>, _>>()?;
        PString::new(poset, &ids)
    }

    pub fn singleton(e: ElemId) -> Self {
        PString(vec![e])
    }

    pub fn elems(&self) -> &[ElemId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Dimension of the corresponding nondegenerate simplex of the nerve.
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, e: ElemId) -> bool {
        self.0.contains(&e)
    }

    pub fn is_subset(&self, other: &PString) -> bool {
        self.0.iter().all(|e| other.contains(*e))
    }

    /// The intersection, or `None` when empty.
    pub fn intersect(&self, other: &PString) -> Option<PString> {
        let v: Vec<ElemId> = self.0.iter().copied().filter(|e| other.contains(*e)).collect();
        (!v.is_empty()).then_some(PString(v))
    }

    /// Position of `e` inside the string.
    pub fn position(&self, e: ElemId) -> Option<usize> {
        self.0.iter().position(|&x| x == e)
    }

    pub fn display(&self, poset: &Poset) -> String {
        let parts: Vec<&str> = self.0.iter().map(|&e| poset.name(e)).collect();
        format!("{{{}}}", parts.join("<"))
    }

    /// Parses `{a<b<c}` (braces optional).
    pub fn parse(poset: &Poset, text: &str) -> Result<Self, PosetError> {
        let inner = text.trim().trim_start_matches('{').trim_end_matches('}');
        let names: Vec<&str> = inner.split('<').map(str::trim).filter(|s| !s.is_empty()).collect();
        PString::from_names(poset, &names)
    }
}

/// All strings of length at most `max_len`, ordered by length and then
/// lexicographically on element ids.
pub fn strings(poset: &Poset, max_len: usize) -> Vec<PString> {
    let mut out: Vec<PString> = Vec::new();
    let mut layer: Vec<Vec<ElemId>> = poset.elements().map(|e| vec![e]).collect();
    let mut len = 1;
    while !layer.is_empty() && len <= max_len {
        let mut strs: Vec<PString> = layer
            .iter()
            .map(|v| PString::new(poset, v).expect("chain"))
            .collect();
        strs.sort_by(|a, b| {
            let mut x = a.0.clone();
            let mut y = b.0.clone();
            x.sort();
            y.sort();
            x.cmp(&y)
        });
        out.extend(strs);
        // Extend each sorted-id chain by a larger id comparable to all members.
        let mut next = Vec::new();
        for v in &layer {
            let last = *v.iter().max().expect("nonempty");
            for e in (last + 1)..poset.len() {
                if v.iter().all(|&a| poset.comparable(a, e)) {
                    let mut w = v.clone();
                    w.push(e);
                    next.push(w);
                }
            }
        }
        layer = next;
        len += 1;
    }
    out
}

/// All strings of the poset.
pub fn all_strings(poset: &Poset) -> Vec<PString> {
    strings(poset, poset.len().max(1))
}

/// The subdivision sd(P): strings ordered by containment.
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub poset: Poset,
    strings: Vec<PString>,
}

impl Subdivision {
    /// The string represented by an element of sd(P).
    pub fn string_of(&self, e: ElemId) -> &PString {
        &self.strings[e]
    }

    pub fn elem_of(&self, s: &PString) -> Option<ElemId> {
        self.strings.iter().position(|t| t == s)
    }
}

pub fn subdivision(poset: &Poset) -> Subdivision {
    let strs = all_strings(poset);
    let names: Vec<String> = strs.iter().map(|s| s.display(poset)).collect();
    let mut rels = Vec::new();
    for (i, a) in strs.iter().enumerate() {
        for (j, b) in strs.iter().enumerate() {
            if i != j && a.is_subset(b) {
                rels.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    let sd = Poset::new(names.clone(), &rels).expect("containment is a partial order");
    let mut ordered = vec![PString(vec![0]); strs.len()];
    for (s, n) in strs.into_iter().zip(names.iter()) {
        ordered[sd.id(n).expect("own name")] = s;
    }
    Subdivision { poset: sd, strings: ordered }
}

/// A nested pair `(Σ, Σ')` with `Σ' ⊆ Σ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NestedPair {
    pub outer: PString,
    pub inner: PString,
}

impl NestedPair {
    /// `(Σ,Σ') ≤ (T,T')` iff `Σ ⊇ T` and `Σ' ⊆ T'`.
    pub fn leq(&self, other: &NestedPair) -> bool {
        other.outer.is_subset(&self.outer) && self.inner.is_subset(&other.inner)
    }

    pub fn display(&self, poset: &Poset) -> String {
        format!("({},{})", self.outer.display(poset), self.inner.display(poset))
    }
}

/// Pair(P) or one of its full subposets, with the pair behind each element.
#[derive(Debug, Clone)]
pub struct PairPoset {
    pub poset: Poset,
    pairs: Vec<NestedPair>,
}

impl PairPoset {
    fn from_pairs(base: &Poset, pairs: Vec<NestedPair>) -> Self {
        let names: Vec<String> = pairs.iter().map(|p| p.display(base)).collect();
        let mut rels = Vec::new();
        for (i, a) in pairs.iter().enumerate() {
            for (j, b) in pairs.iter().enumerate() {
                if i != j && a.leq(b) {
                    rels.push((names[i].clone(), names[j].clone()));
                }
            }
        }
        let poset = Poset::new(names.clone(), &rels).expect("pair order is a partial order");
        let mut ordered = pairs.clone();
        for (p, n) in pairs.into_iter().zip(names.iter()) {
            ordered[poset.id(n).expect("own name")] = p;
        }
        PairPoset { poset, pairs: ordered }
    }

    pub fn pair(&self, e: ElemId) -> &NestedPair {
        &self.pairs[e]
    }

    pub fn pairs(&self) -> &[NestedPair] {
        &self.pairs
    }

    pub fn elem_of(&self, p: &NestedPair) -> Option<ElemId> {
        self.pairs.iter().position(|q| q == p)
    }
}

/// Pair(P): nested pairs of strings.
pub fn pair_poset(poset: &Poset) -> PairPoset {
    let strs = all_strings(poset);
    let pairs: Vec<NestedPair> = strs
        .iter()
        .flat_map(|outer| {
            strs.iter().filter(move |inner| inner.is_subset(outer)).map(move |inner| NestedPair {
                outer: outer.clone(),
                inner: inner.clone(),
            })
        })
        .collect();
    PairPoset::from_pairs(poset, pairs)
}

/// Pair_Σ(P) together with the left adjoint `(S,S') ↦ (S∩Σ, S')` of the
/// inclusion `Pair(Σ) ⊆ Pair_Σ(P)`.
#[derive(Debug, Clone)]
pub struct PairSigma {
    pub sigma: PString,
    pub pairs: PairPoset,
    /// For each element of `pairs`, the element `(S∩Σ, S')` it is sent to.
    pub left_adjoint: Vec<ElemId>,
    /// Elements of `pairs` lying in `Pair(Σ)`.
    pub restricted: Vec<ElemId>,
}

impl PairSigma {
    /// Checks the adjunction elementwise: monotonicity, `L ∘ incl = id`, the
    /// unit `x ≤ L(x)` and the hom-set bijection `L(x) ≤ y ⟺ x ≤ y` for `y`
    /// in `Pair(Σ)`. Returns the first violated law.
    pub fn verify_adjunction(&self) -> Result<(), String> {
        let p = &self.pairs.poset;
        let in_sigma = |e: ElemId| self.restricted.contains(&e);
        for x in p.elements() {
            let lx = self.left_adjoint[x];
            if !in_sigma(lx) {
                return Err(format!("L({}) not in Pair(Σ)", p.name(x)));
            }
            if !p.leq(x, lx) {
                return Err(format!("unit fails at {}", p.name(x)));
            }
            for y in p.elements() {
                if p.leq(x, y) && !p.leq(lx, self.left_adjoint[y]) {
                    return Err(format!("L not monotone on {} ≤ {}", p.name(x), p.name(y)));
                }
                if in_sigma(y) && (p.leq(lx, y) != p.leq(x, y)) {
                    return Err(format!("hom bijection fails at ({}, {})", p.name(x), p.name(y)));
                }
            }
        }
        for &y in &self.restricted {
            if self.left_adjoint[y] != y {
                return Err(format!("counit not identity at {}", p.name(y)));
            }
        }
        Ok(())
    }
}

pub fn pair_sigma(poset: &Poset, sigma: &PString) -> PairSigma {
    let strs = all_strings(poset);
    let pairs: Vec<NestedPair> = strs
        .iter()
        .flat_map(|outer| {
            strs.iter()
                .filter(move |inner| inner.is_subset(outer) && inner.is_subset(sigma))
                .map(move |inner| NestedPair { outer: outer.clone(), inner: inner.clone() })
        })
        .collect();
    let pp = PairPoset::from_pairs(poset, pairs);
    let mut left_adjoint = Vec::with_capacity(pp.pairs.len());
    let mut restricted = Vec::new();
    for (e, p) in pp.pairs.iter().enumerate() {
        // S' ⊆ S ∩ Σ and S' is nonempty, so the intersection is a string.
        let cut = p.outer.intersect(sigma).expect("S' ⊆ S∩Σ is nonempty");
        let image = NestedPair { outer: cut, inner: p.inner.clone() };
        left_adjoint.push(pp.elem_of(&image).expect("image lies in Pair_Σ(P)"));
        if p.outer.is_subset(sigma) {
            restricted.push(e);
        }
    }
    PairSigma { sigma: sigma.clone(), pairs: pp, left_adjoint, restricted }
}

/// Upward-closed test for the Alexandroff topology.
pub fn is_alexandroff_open(poset: &Poset, subset: &[&str]) -> Result<bool, PosetError> {
    let ids = subset.iter().map(|n| poset.id(n)).collect::<Result<Vec<_>, _>>()?;
    Ok(is_upward_closed(poset, &ids))
}

pub fn is_upward_closed(poset: &Poset, subset: &[ElemId]) -> bool {
    subset
        .iter()
        .all(|&x| poset.elements().all(|y| !poset.leq(x, y) || subset.contains(&y)))
}

/// One representative of each isomorphism class of posets on `n` elements,
/// named `0..n` with `i < j` whenever `i` is below `j`. Deterministic order.
pub fn posets_up_to_iso(n: usize) -> Vec<Poset> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let perms = permutations(n);
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1 << pairs.len()) {
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (b, &(i, j)) in pairs.iter().enumerate() {
            leq[i][j] = mask >> b & 1 == 1;
        }
        let transitive = (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(leq[i][j] && leq[j][k]) || leq[i][k])));
        if !transitive {
            continue;
        }
        let code = |p: &[usize]| -> Vec<bool> { (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| leq[p[i]][p[j]]).collect() };
        let canon = perms.iter().map(|p| code(p)).min().unwrap_or_default();
        if seen.insert(canon) {
            let names = (0..n).map(|i| i.to_string()).collect();
            out.push(Poset::from_leq(names, leq).expect("transitive closure of a natural order"));
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: &str, b: &str) -> (String, String) {
        (a.to_string(), b.to_string())
    }

    #[test]
    fn rejects_cycles_and_unknowns() {
        let err = Poset::new(["a", "b"], &[rel("a", "b"), rel("b", "a")]).unwrap_err();
        assert!(matches!(err, PosetError::Cycle(..)));
        let err = Poset::new(["a"], &[rel("a", "z")]).unwrap_err();
        assert_eq!(err, PosetError::UnknownElement("z".into()));
        assert!(matches!(Poset::new(["a", "a"], &[]), Err(PosetError::DuplicateElement(_))));
    }

    #[test]
    fn closure_is_transitive() {
        let p = Poset::new(["a", "b", "c"], &[rel("a", "b"), rel("b", "c")]).unwrap();
        assert!(p.leq(p.id("a").unwrap(), p.id("c").unwrap()));
        assert_eq!(p.covers().len(), 2);
    }

    #[test]
    fn subdivision_examples() {
        assert_eq!(subdivision(&Poset::point()).poset.len(), 1);
        let sd1 = subdivision(&Poset::chain(1));
        assert_eq!(sd1.poset.len(), 3);
        let nonid = sd1
            .poset
            .elements()
            .flat_map(|a| sd1.poset.elements().map(move |b| (a, b)))
            .filter(|&(a, b)| sd1.poset.lt(a, b))
            .count();
        assert_eq!(nonid, 2);
        assert_eq!(subdivision(&Poset::chain(2)).poset.len(), 7);
        assert!(subdivision(&Poset::antichain(Vec::<String>::new())).poset.is_empty());
    }

    #[test]
    fn subdivision_of_chain_has_expected_size() {
        for n in 0..=5 {
            assert_eq!(subdivision(&Poset::chain(n)).poset.len(), (1 << (n + 1)) - 1);
        }
        // sd(sd(P)) is again a valid poset.
        let sd = subdivision(&Poset::chain(2));
        let sdsd = subdivision(&sd.poset);
        assert!(sdsd.poset.len() > sd.poset.len());
    }

    #[test]
    fn string_enumeration() {
        let ab = Poset::antichain(["a", "b"]);
        let s = strings(&ab, 2);
        assert_eq!(s.len(), 2);
        assert_eq!(strings(&Poset::chain(1), 1).len(), 2);
        let s = strings(&Poset::chain(2), 3);
        assert_eq!(s.len(), 7);
        // length-major order
        assert!(s.windows(2).all(|w| w[0].len() <= w[1].len()));
    }

    #[test]
    fn pair_poset_examples() {
        assert_eq!(pair_poset(&Poset::point()).poset.len(), 1);
        let p1 = Poset::chain(1);
        let pp = pair_poset(&p1);
        assert_eq!(pp.poset.len(), 5);
        let names: Vec<String> = pp.pairs().iter().map(|p| p.display(&p1)).collect();
        for want in ["({0},{0})", "({1},{1})", "({0<1},{0})", "({0<1},{1})", "({0<1},{0<1})"] {
            assert!(names.iter().any(|n| n == want), "{want} missing");
        }
        assert_eq!(pair_poset(&Poset::antichain(["a", "b"])).poset.len(), 2);
    }

    #[test]
    fn pair_sigma_examples() {
        let p2 = Poset::chain(2);
        let full = PString::from_names(&p2, &["0", "1", "2"]).unwrap();
        let ps = pair_sigma(&p2, &full);
        assert_eq!(ps.pairs.poset.len(), pair_poset(&p2).poset.len());
        assert!(ps.left_adjoint.iter().enumerate().all(|(i, &j)| i == j));

        let s02 = PString::from_names(&p2, &["0", "2"]).unwrap();
        let ps = pair_sigma(&p2, &s02);
        let src = NestedPair { outer: full.clone(), inner: PString::from_names(&p2, &["0"]).unwrap() };
        let e = ps.pairs.elem_of(&src).unwrap();
        let img = ps.pairs.pair(ps.left_adjoint[e]);
        assert_eq!(img.outer, s02);
        assert_eq!(img.inner, PString::from_names(&p2, &["0"]).unwrap());
        ps.verify_adjunction().unwrap();

        let p1 = Poset::chain(1);
        let s0 = PString::from_names(&p1, &["0"]).unwrap();
        let ps = pair_sigma(&p1, &s0);
        let names: Vec<String> = ps.pairs.pairs().iter().map(|p| p.display(&p1)).collect();
        assert_eq!(names.len(), 2);
        assert!(names.contains(&"({0},{0})".to_string()));
        assert!(names.contains(&"({0<1},{0})".to_string()));
    }

    #[test]
    fn alexandroff_examples() {
        let p1 = Poset::chain(1);
        assert!(is_alexandroff_open(&p1, &[]).unwrap());
        assert!(is_alexandroff_open(&p1, &["1"]).unwrap());
        assert!(!is_alexandroff_open(&p1, &["0"]).unwrap());
        assert!(is_alexandroff_open(&p1, &["0", "1"]).unwrap());
        assert!(is_alexandroff_open(&p1, &["x"]).is_err());
    }

    #[test]
    fn isomorphism_classes() {
        let counts: Vec<usize> = (0..=4).map(|n| posets_up_to_iso(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16]);
    }

    #[test]
    fn string_parse_roundtrip() {
        let p = Poset::chain(2);
        let s = PString::parse(&p, "{0<2}").unwrap();
        assert_eq!(s.display(&p), "{0<2}");
        assert!(PString::parse(&Poset::antichain(["a", "b"]), "{a<b}").is_err());
    }
}
