//! Classification of stratified horns and the generating sets built from it.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::homotopy::LiftingGenerator;
use crate::poset::{ElemId, Poset};
use crate::simplicial::{make_generator, Generator};

use super::{StratError, StratSSet};

/// Where a stratified horn `Λ^n_k ↪ Δ^n` falls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HornClass {
    TrivialInner,
    TrivialLeft,
    TrivialRight,
    NotTrivial,
}

impl HornClass {
    pub fn is_trivial(self) -> bool {
        self != HornClass::NotTrivial
    }
}

impl fmt::Display for HornClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            HornClass::TrivialInner => "TrivialInner",
            HornClass::TrivialLeft => "TrivialLeft",
            HornClass::TrivialRight => "TrivialRight",
            HornClass::NotTrivial => "NotTrivial",
        };
        f.write_str(s)
    }
}

fn check_monotone(p: &Poset, labels: &[ElemId]) -> Result<(), StratError> {
    if labels.windows(2).all(|w| p.leq(w[0], w[1])) {
        Ok(())
    } else {
        let names: Vec<&str> = labels.iter().map(|&l| p.name(l)).collect();
        Err(StratError::LabelsNotMonotone(names.join(",")))
    }
}

/// Classifies `Λ^n_k ↪ Δ^n` stratified by `labels` (length `n + 1`).
pub fn classify_horn(p: &Poset, labels: &[ElemId], n: usize, k: usize) -> Result<HornClass, StratError> {
    if n == 0 || k > n {
        return Err(StratError::HornIndex { n, k });
    }
    if labels.len() != n + 1 {
        return Err(StratError::LabelCount { expected: n + 1, got: labels.len() });
    }
    check_monotone(p, labels)?;
    Ok(if 0 < k && k < n {
        HornClass::TrivialInner
    } else if k == 0 && labels[0] == labels[1] {
        HornClass::TrivialLeft
    } else if k == n && labels[n - 1] == labels[n] {
        HornClass::TrivialRight
    } else {
        HornClass::NotTrivial
    })
}

/// The named generating sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    /// Endpoint inclusions into constantly stratified `Δ^1`.
    E,
    /// All trivial horns.
    J,
    /// Inner horns.
    IH,
    /// Inner and trivial left horns.
    LH,
    /// Inner horns whose stratification is not constant.
    IHnv,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 5] =
        [GeneratorKind::E, GeneratorKind::J, GeneratorKind::IH, GeneratorKind::LH, GeneratorKind::IHnv];

    /// Membership predicate for a horn `(n, k, labels)`.
    pub fn contains(self, p: &Poset, item: &GeneratorItem) -> bool {
        let Ok(class) = classify_horn(p, &item.labels, item.n, item.k) else { return false };
        let constant = item.labels.iter().all(|&l| l == item.labels[0]);
        match self {
            GeneratorKind::E => item.n == 1 && constant,
            GeneratorKind::J => class.is_trivial(),
            GeneratorKind::IH => class == HornClass::TrivialInner,
            GeneratorKind::LH => matches!(class, HornClass::TrivialInner | HornClass::TrivialLeft),
            GeneratorKind::IHnv => class == HornClass::TrivialInner && !constant,
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GeneratorKind::E => "E_P",
            GeneratorKind::J => "J_P",
            GeneratorKind::IH => "IH_P",
            GeneratorKind::LH => "LH_P",
            GeneratorKind::IHnv => "IH_P_nv",
        };
        f.write_str(s)
    }
}

impl FromStr for GeneratorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GeneratorKind::ALL
            .into_iter()
            .find(|k| k.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown generating set `{s}` (expected E_P, J_P, IH_P, LH_P or IH_P_nv)"))
    }
}

/// A stratified horn `Λ^n_k ↪ Δ^n`; endpoint inclusions are `Λ^1_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorItem {
    pub n: usize,
    pub k: usize,
    pub labels: Vec<ElemId>,
}

impl GeneratorItem {
    pub fn display(&self, p: &Poset) -> String {
        let names: Vec<&str> = self.labels.iter().map(|&l| p.name(l)).collect();
        format!("horn({},{})[{}]", self.n, self.k, names.join(","))
    }

    /// The inclusion with its labels, ready for lifting checks.
    pub fn lifting_generator(&self, p: &Poset) -> LiftingGenerator {
        let g = make_generator(Generator::Horn(self.n, self.k)).expect("valid horn");
        LiftingGenerator { name: self.display(p), inclusion: g.inclusion, labels: Some(self.labels.clone()) }
    }

    /// `Δ^n` with this stratification.
    pub fn simplex(&self, p: &Arc<Poset>) -> StratSSet {
        StratSSet::simplex(p.clone(), &self.labels).expect("monotone labels")
    }
}

/// A generating set truncated at some dimension.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub kind: GeneratorKind,
    pub base: Arc<Poset>,
    pub items: Vec<GeneratorItem>,
}

impl GeneratorSet {
    /// Re-checks every item against the membership predicate.
    pub fn validate(&self) -> Result<(), String> {
        match self.items.iter().find(|i| !self.kind.contains(&self.base, i)) {
            Some(i) => Err(format!("{} is not in {}", i.display(&self.base), self.kind)),
            None => Ok(()),
        }
    }

    pub fn lifting_generators(&self) -> Vec<LiftingGenerator> {
        self.items.iter().map(|i| i.lifting_generator(&self.base)).collect()
    }
}

/// Weakly increasing sequences of length `len`, lexicographically.
pub fn monotone_tuples(p: &Poset, len: usize) -> Vec<Vec<ElemId>> {
    let mut out: Vec<Vec<ElemId>> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for t in &out {
            for e in p.elements() {
                if t.last().map_or(true, |&l| p.leq(l, e)) {
                    let mut u = t.clone();
                    u.push(e);
                    next.push(u);
                }
            }
        }
        out = next;
    }
    out
}

/// All members of `kind` of dimension `≤ max_n`, ordered by `(n, k, labels)`.
pub fn generating_set(p: &Arc<Poset>, kind: GeneratorKind, max_n: usize) -> GeneratorSet {
    let mut items = Vec::new();
    let top = if kind == GeneratorKind::E { max_n.min(1) } else { max_n };
    for n in 1..=top {
        let tuples = monotone_tuples(p, n + 1);
        for k in 0..=n {
            for labels in &tuples {
                let item = GeneratorItem { n, k, labels: labels.clone() };
                if kind.contains(p, &item) {
                    items.push(item);
                }
            }
        }
    }
    GeneratorSet { kind, base: p.clone(), items }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification_examples() {
        let p = Poset::chain(2);
        assert_eq!(classify_horn(&p, &[0, 2, 2], 2, 1).unwrap(), HornClass::TrivialInner);
        assert_eq!(classify_horn(&p, &[1, 1], 1, 0).unwrap(), HornClass::TrivialLeft);
        assert_eq!(classify_horn(&p, &[0, 1], 1, 0).unwrap(), HornClass::NotTrivial);
        assert_eq!(classify_horn(&p, &[0, 1, 1], 2, 2).unwrap(), HornClass::TrivialRight);
        assert!(classify_horn(&p, &[1, 0], 1, 0).is_err());
        assert!(classify_horn(&p, &[0, 1], 1, 2).is_err());
    }

    #[test]
    fn generating_set_sizes() {
        let pt = Arc::new(Poset::point());
        assert_eq!(generating_set(&pt, GeneratorKind::E, 3).items.len(), 2);
        for n in 1..=4 {
            assert!(generating_set(&pt, GeneratorKind::IHnv, n).items.is_empty());
        }
        let c1 = Arc::new(Poset::chain(1));
        let j = generating_set(&c1, GeneratorKind::J, 1);
        assert_eq!(j.items.len(), 4);
        j.validate().unwrap();
        // n = 2 over [1]: 4 monotone triples, all three k inner/left/right checks
        let lh = generating_set(&c1, GeneratorKind::LH, 2);
        lh.validate().unwrap();
        assert!(lh.items.iter().all(|i| i.k < i.n));
    }

    #[test]
    fn kinds_parse() {
        for k in GeneratorKind::ALL {
            assert_eq!(k.to_string().parse::<GeneratorKind>().unwrap(), k);
        }
    }
}
