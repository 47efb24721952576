//! Sound but incomplete equivalence checking.
//!
//! Every question answered here is undecidable in general, so answers are
//! three-valued [`Verdict`]s. A positive answer carries a [`Witness`] that can
//! be replayed; a negative one carries an [`Obstruction`] that can be
//! recomputed from scratch; everything else is `Unknown` with the resource
//! that ran out.

mod equiv;
mod homology;
mod lifting;

pub use equiv::{strata_links_equiv, trivial_fibration_check, weak_equiv_verdict, Homotopy, HomotopyInverse, VerdictBudget};
pub use homology::{components, homology, homology_limit, invariant_factors, pi0, AbelianGroup};
pub use lifting::{boundary_generators, horn_generators, is_inner_fibrant, is_kan, rlp_check, LiftingGenerator};

use std::fmt;
use std::sync::Arc;

use crate::simplicial::{Budget, FiniteCategory, LiftOutcome, LiftProblem, SimplicialMap, SimplicialSet};

/// Outcome of an equivalence (or lifting-property) question.
#[derive(Clone, Debug)]
pub enum Verdict {
    Equivalent(Witness),
    NotEquivalent(Obstruction),
    Unknown(UnknownRecord),
}

/// Evidence for a positive verdict.
#[derive(Clone, Debug)]
pub enum Witness {
    /// The map itself is an isomorphism.
    Isomorphism(SimplicialMap),
    /// Every lifting problem against the generators was solved.
    Lifting(LiftingRecord),
    /// A homotopy inverse with homotopies to the identities.
    HomotopyInverse(Box<HomotopyInverse>),
    /// Exact test for category-presented objects: the structure functor is
    /// conservative.
    Conservative { category: Arc<FiniteCategory>, labels: Vec<usize> },
    /// Nothing to check.
    Vacuous(String),
    /// Conjunction of labelled witnesses.
    All(Vec<(String, Witness)>),
}

/// Parameters of an exhaustive lifting check, enough to rerun it.
#[derive(Clone, Debug)]
pub struct LiftingRecord {
    pub property: String,
    pub map: SimplicialMap,
    pub generators: Vec<LiftingGenerator>,
    pub target_labels: Option<Vec<usize>>,
    pub problems: u64,
    pub budget: Budget,
}

/// Which invariant separates the two sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Invariant {
    Pi0,
    Homology(usize),
    /// A lifting problem against the named generator has no solution.
    Lifting(String),
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Invariant::Pi0 => write!(f, "pi0"),
            Invariant::Homology(k) => write!(f, "H{k}"),
            Invariant::Lifting(g) => write!(f, "lift:{g}"),
        }
    }
}

/// Evidence for a negative verdict: an invariant with differing values on the
/// two sides, reproducible with [`Obstruction::recheck`].
#[derive(Clone, Debug)]
pub struct Obstruction {
    /// Where the obstruction lives (e.g. `["stratum 0"]`), outermost first.
    pub context: Vec<String>,
    pub invariant: Invariant,
    pub left: String,
    pub right: String,
    pub evidence: Evidence,
}

#[derive(Clone, Debug)]
pub enum Evidence {
    /// The invariant computed on both sets.
    Spaces(Arc<SimplicialSet>, Arc<SimplicialSet>),
    /// A commutative square with no diagonal.
    Square { generator: LiftingGenerator, p: SimplicialMap, top: SimplicialMap, bottom: SimplicialMap },
}

/// Resource record for an undecided question.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownRecord {
    pub resource: String,
    pub detail: String,
}

impl Verdict {
    pub fn unknown(resource: impl Into<String>, detail: impl Into<String>) -> Self {
        Verdict::Unknown(UnknownRecord { resource: resource.into(), detail: detail.into() })
    }

    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::Equivalent(_))
    }

    pub fn is_not_equivalent(&self) -> bool {
        matches!(self, Verdict::NotEquivalent(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown(_))
    }

    /// `equivalent`, `not-equivalent` or `unknown`.
    pub fn outcome(&self) -> &'static str {
        match self {
            Verdict::Equivalent(_) => "equivalent",
            Verdict::NotEquivalent(_) => "not-equivalent",
            Verdict::Unknown(_) => "unknown",
        }
    }

    pub fn obstruction(&self) -> Option<&Obstruction> {
        match self {
            Verdict::NotEquivalent(o) => Some(o),
            _ => None,
        }
    }

    /// Prefixes the context of an obstruction.
    pub fn in_context(self, label: &str) -> Self {
        match self {
            Verdict::NotEquivalent(mut o) => {
                o.context.insert(0, label.to_string());
                Verdict::NotEquivalent(o)
            }
            Verdict::Unknown(mut u) => {
                u.detail = format!("{label}: {}", u.detail);
                Verdict::Unknown(u)
            }
            v => v,
        }
    }

    /// Conjunction: the first refutation wins, then the first unknown;
    /// otherwise all witnesses are collected.
    pub fn all(parts: Vec<(String, Verdict)>) -> Verdict {
        let mut witnesses = Vec::new();
        let mut unknown = None;
        for (label, v) in parts {
            match v {
                Verdict::NotEquivalent(_) => return v.in_context(&label),
                Verdict::Unknown(_) => {
                    if unknown.is_none() {
                        unknown = Some(v.in_context(&label));
                    }
                }
                Verdict::Equivalent(w) => witnesses.push((label, w)),
            }
        }
        match unknown {
            Some(u) => u,
            None if witnesses.is_empty() => Verdict::Equivalent(Witness::Vacuous("no conditions".into())),
            None => Verdict::Equivalent(Witness::All(witnesses)),
        }
    }

    /// Machine-readable fields `(key, value)` describing the verdict.
    pub fn fields(&self) -> Vec<(String, String)> {
        let mut out = vec![("outcome".to_string(), self.outcome().to_string())];
        match self {
            Verdict::Equivalent(w) => out.push(("witness".into(), w.describe())),
            Verdict::NotEquivalent(o) => {
                if !o.context.is_empty() {
                    out.push(("context".into(), o.context.join("/")));
                }
                out.push(("invariant".into(), o.invariant.to_string()));
                out.push(("left".into(), o.left.clone()));
                out.push(("right".into(), o.right.clone()));
            }
            Verdict::Unknown(u) => {
                out.push(("resource".into(), u.resource.clone()));
                out.push(("detail".into(), u.detail.clone()));
            }
        }
        out
    }

    /// Replays a witness or rechecks an obstruction. Unknown verdicts have
    /// nothing to check.
    pub fn recheck(&self) -> Result<(), String> {
        match self {
            Verdict::Equivalent(w) => w.replay(),
            Verdict::NotEquivalent(o) => o.recheck(),
            Verdict::Unknown(_) => Ok(()),
        }
    }
}

impl Witness {
    /// One-line description.
    pub fn describe(&self) -> String {
        match self {
            Witness::Isomorphism(_) => "isomorphism".into(),
            Witness::Lifting(r) => format!("lifting({}; {} problems)", r.property, r.problems),
            Witness::HomotopyInverse(h) => {
                format!("homotopy-inverse({}+{} homotopies)", h.source_zigzag.len(), h.target_zigzag.len())
            }
            Witness::Conservative { .. } => "conservative-functor".into(),
            Witness::Vacuous(why) => format!("vacuous({why})"),
            Witness::All(ws) => {
                let parts: Vec<String> = ws.iter().map(|(l, w)| format!("{l}:{}", w.describe())).collect();
                format!("all[{}]", parts.join(","))
            }
        }
    }

    /// Re-verifies the witness from its stored data.
    pub fn replay(&self) -> Result<(), String> {
        match self {
            Witness::Isomorphism(f) => {
                f.validate().map_err(|e| e.to_string())?;
                if f.is_iso() {
                    Ok(())
                } else {
                    Err("map is not bijective on cells".into())
                }
            }
            Witness::Lifting(r) => {
                match rlp_check(&r.map, &r.generators, r.target_labels.as_deref(), &r.property, r.budget) {
                    Verdict::Equivalent(_) => Ok(()),
                    v => Err(format!("lifting check reran as {}", v.outcome())),
                }
            }
            Witness::HomotopyInverse(h) => h.replay(),
            Witness::Conservative { category, labels } => {
                if category.is_conservative_over(labels) {
                    Ok(())
                } else {
                    Err("structure functor is not conservative".into())
                }
            }
            Witness::Vacuous(_) => Ok(()),
            Witness::All(ws) => {
                for (label, w) in ws {
                    w.replay().map_err(|e| format!("{label}: {e}"))?;
                }
                Ok(())
            }
        }
    }
}

/// Invariant value of one set, as printed in obstructions.
pub(crate) fn invariant_value(inv: &Invariant, x: &SimplicialSet) -> Option<String> {
    match inv {
        Invariant::Pi0 => x.known_to(1).then(|| pi0(x).to_string()),
        Invariant::Homology(k) => homology(x, *k).get(*k).map(|g| g.to_string()),
        Invariant::Lifting(_) => None,
    }
}

impl Obstruction {
    /// Recomputes the invariant and checks that the recorded values come out
    /// again and still differ.
    pub fn recheck(&self) -> Result<(), String> {
        match &self.evidence {
            Evidence::Spaces(x, y) => {
                let l = invariant_value(&self.invariant, x).ok_or("invariant not computable on left side")?;
                let r = invariant_value(&self.invariant, y).ok_or("invariant not computable on right side")?;
                if l != self.left || r != self.right {
                    return Err(format!(
                        "{} recomputed as {l} vs {r}, recorded {} vs {}",
                        self.invariant, self.left, self.right
                    ));
                }
                if l == r {
                    return Err(format!("{} agrees on both sides", self.invariant));
                }
                Ok(())
            }
            Evidence::Square { generator, p, top, bottom } => {
                let problem = LiftProblem { i: &generator.inclusion, p, top, bottom };
                match crate::simplicial::has_lift(problem, Budget::new(u64::MAX)) {
                    Ok(LiftOutcome::NoLift { .. }) => Ok(()),
                    Ok(LiftOutcome::Lift(_)) => Err("a lift exists".into()),
                    Ok(LiftOutcome::Unknown { reason, .. }) => Err(reason),
                    Err(e) => Err(e.to_string()),
                }
            }
        }
    }

    pub(crate) fn between(inv: Invariant, x: &Arc<SimplicialSet>, y: &Arc<SimplicialSet>) -> Option<Self> {
        let l = invariant_value(&inv, x)?;
        let r = invariant_value(&inv, y)?;
        (l != r).then(|| Obstruction {
            context: Vec::new(),
            invariant: inv,
            left: l,
            right: r,
            evidence: Evidence::Spaces(x.clone(), y.clone()),
        })
    }
}
