//! Cell certificates: replayable sequences of pushouts along stratified
//! horns, plus witnesses for horns that are not trivial cofibrations.

mod certs;
mod fill;
mod witness;

pub use certs::{cone_certificate, prism_certificate, spine_certificate};
pub use fill::{fill_certificate, FillStage};
pub use witness::{base_case_witness, non_lifting_witness, BaseCaseReport, NonLiftWitness, WitnessError};

use std::collections::HashMap;
use std::sync::Arc;

use crate::simplicial::{face_name, make_generator, Budget, CellId, Generator, SSetBuilder, SimplicialMap, Simplex};
use crate::stratified::{GeneratorItem, GeneratorKind, StratError, StratSSet};

/// One pushout step: the horn and where its cells go in the object built so
/// far (cell name in the horn, simplex in the current object).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertStep {
    pub item: GeneratorItem,
    pub attach: Vec<(String, String)>,
}

impl CertStep {
    /// Records an attaching map `Λ^n_k → X`.
    pub fn from_map(item: GeneratorItem, attach: &SimplicialMap) -> Self {
        let horn = attach.source();
        let target = attach.target();
        let attach = horn.all_cells().map(|c| (horn.name(c).to_string(), target.format_simplex(attach.image(c)))).collect();
        CertStep { item, attach }
    }
}

/// A claimed decomposition of `start ↪ claimed_end` into pushouts of
/// generators of one kind.
#[derive(Clone, Debug)]
pub struct CellCertificate {
    pub kind: GeneratorKind,
    pub start: StratSSet,
    pub steps: Vec<CertStep>,
    pub claimed_end: StratSSet,
}

/// Names of the two cells added by step `i`.
pub fn step_names(i: usize) -> (String, String) {
    (format!("s{i}.face"), format!("s{i}.cell"))
}

/// Pushout of `current ← Λ^n_k ↪ Δ^n` along `attach`, which must be a map
/// into `current.total()` respecting the item's labels. Returns the new
/// object, the inclusion and the filler `Δ^n → new`.
pub fn attach_horn(
    current: &StratSSet,
    item: &GeneratorItem,
    attach: &SimplicialMap,
    step: usize,
) -> Result<(StratSSet, SimplicialMap, SimplicialMap), StratError> {
    let (n, k) = (item.n, item.k);
    let g = make_generator(Generator::Horn(n, k)).map_err(StratError::from)?;
    let horn = &g.sset;
    let x = current.total();
    if attach.source().as_ref() != horn.as_ref() || attach.target() != x {
        return Err(StratError::NotStratified("attaching map has the wrong source or target".into()));
    }
    attach.validate()?;
    for v in 0..horn.num_cells(0) {
        let dv = g.inclusion.vertex_image(v);
        let w = attach.vertex_image(v);
        if current.label(w) != item.labels[dv] {
            return Err(StratError::NotStratified(format!(
                "horn vertex {dv} goes to `{}`, which is not over `{}`",
                x.name(CellId::new(0, w)),
                current.base().name(item.labels[dv])
            )));
        }
    }
    let complete = x.is_complete();
    if !complete && x.trunc_dim() < n {
        return Err(crate::simplicial::SimplicialError::Truncated {
            what: "attachment target".into(),
            needed: n,
            trunc: x.trunc_dim(),
        }
        .into());
    }
    let top = x.trunc_dim().max(n);
    let mut b = SSetBuilder::new(top, complete);
    for c in x.all_cells() {
        b.add_cell(x.name(c), x.cell(c).faces.clone())?;
    }
    let img = |verts: &[usize]| -> Simplex {
        let c = horn.lookup(&face_name(n, verts)).expect("face lies in the horn");
        attach.image(c).clone()
    };
    let missing: Vec<usize> = (0..=n).filter(|&v| v != k).collect();
    let (face_name_s, cell_name_s) = step_names(step);
    let face_faces: Vec<Simplex> = if n == 1 {
        Vec::new()
    } else {
        (0..n)
            .map(|j| {
                let mut v = missing.clone();
                v.remove(j);
                img(&v)
            })
            .collect()
    };
    let face = b.add_cell(face_name_s, face_faces)?;
    let top_faces: Vec<Simplex> = (0..=n)
        .map(|i| {
            if i == k {
                Simplex::nondeg(face)
            } else {
                let v: Vec<usize> = (0..=n).filter(|&u| u != i).collect();
                img(&v)
            }
        })
        .collect();
    let cell = b.add_cell(cell_name_s, top_faces)?;
    let total = Arc::new(b.build()?);
    let mut labels = current.labels().to_vec();
    if n == 1 {
        labels.push(item.labels[1 - k]);
    }
    let next = StratSSet::new(total.clone(), current.base().clone(), labels)?;
    let inc_images = (0..=x.trunc_dim()).map(|d| x.cells_of_dim(d).map(Simplex::nondeg).collect()).collect();
    let inclusion = SimplicialMap::new_unchecked(x.clone(), total.clone(), inc_images);
    let delta = g.ambient.clone();
    let filler_images = (0..=n)
        .map(|d| {
            delta
                .cells_of_dim(d)
                .map(|c| {
                    let verts = delta.vertices_of(&Simplex::nondeg(c));
                    if d == n {
                        Simplex::nondeg(cell)
                    } else if verts == missing {
                        Simplex::nondeg(face)
                    } else {
                        let h = horn.lookup(delta.name(c)).expect("face lies in the horn");
                        attach.image(h).clone()
                    }
                })
                .collect()
        })
        .collect();
    let filler = SimplicialMap::new(delta, total, filler_images)?;
    Ok((next, inclusion, filler))
}

/// Outcome of [`verify_certificate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertReport {
    pub ok: bool,
    /// Index of the first failing step, if a step failed.
    pub failed_step: Option<usize>,
    pub message: String,
}

fn replay_step(current: &StratSSet, kind: GeneratorKind, i: usize, step: &CertStep) -> Result<StratSSet, String> {
    let base = current.base();
    if !kind.contains(base, &step.item) {
        return Err(format!("{} is not in {kind}", step.item.display(base)));
    }
    let g = make_generator(Generator::Horn(step.item.n, step.item.k)).map_err(|e| e.to_string())?;
    let horn = g.sset.clone();
    let x = current.total();
    let named: HashMap<&str, &str> = step.attach.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let mut images: Vec<Vec<Simplex>> = Vec::new();
    for d in 0..=horn.trunc_dim() {
        let mut level = Vec::new();
        for c in horn.cells_of_dim(d) {
            let text = named.get(horn.name(c)).ok_or_else(|| format!("no image for horn cell `{}`", horn.name(c)))?;
            let s = x.parse_simplex(text).map_err(|e| e.to_string())?;
            if s.dim() != d {
                return Err(format!("image of `{}` has dimension {}", horn.name(c), s.dim()));
            }
            level.push(s);
        }
        images.push(level);
    }
    if named.len() != horn.total_cells() {
        return Err("attaching data names cells outside the horn".into());
    }
    let attach = SimplicialMap::new(horn, x.clone(), images).map_err(|e| e.to_string())?;
    attach_horn(current, &step.item, &attach, i).map(|(next, _, _)| next).map_err(|e| e.to_string())
}

/// Replays every step; `Err((step, message))` on the first failure.
pub fn replay(c: &CellCertificate) -> Result<StratSSet, (usize, String)> {
    let mut current = c.start.clone();
    for (i, step) in c.steps.iter().enumerate() {
        current = replay_step(&current, c.kind, i, step).map_err(|m| (i, m))?;
    }
    Ok(current)
}

/// Replays the certificate and compares the result with the claimed end
/// over the base.
pub fn verify_certificate(c: &CellCertificate, budget: Budget) -> CertReport {
    let end = match replay(c) {
        Ok(e) => e,
        Err((i, m)) => return CertReport { ok: false, failed_step: Some(i), message: format!("step {i}: {m}") },
    };
    if end.base() != c.claimed_end.base() {
        return CertReport { ok: false, failed_step: None, message: "claimed end lives over another poset".into() };
    }
    match end.iso_over(&c.claimed_end, budget) {
        crate::simplicial::IsoOutcome::Iso(_) => {
            CertReport { ok: true, failed_step: None, message: format!("{} steps replayed", c.steps.len()) }
        }
        crate::simplicial::IsoOutcome::NoIso(why) => {
            CertReport { ok: false, failed_step: None, message: format!("replayed end differs from claimed end: {why}") }
        }
        crate::simplicial::IsoOutcome::Unknown(why) => {
            CertReport { ok: false, failed_step: None, message: format!("could not compare ends: {why}") }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::Poset;
    use crate::simplicial::standard_simplex;

    #[test]
    fn empty_certificate_verifies() {
        let p = Arc::new(Poset::point());
        let x = StratSSet::simplex(p, &[0, 0]).unwrap();
        let c = CellCertificate { kind: GeneratorKind::IH, start: x.clone(), steps: Vec::new(), claimed_end: x };
        assert!(verify_certificate(&c, Budget::default()).ok);
    }

    #[test]
    fn single_inner_horn_attachment() {
        let p = Arc::new(Poset::point());
        let h = make_generator(Generator::Horn(2, 1)).unwrap().sset;
        let x = StratSSet::new(h.clone(), p.clone(), vec![0; 3]).unwrap();
        let item = GeneratorItem { n: 2, k: 1, labels: vec![0; 3] };
        let (y, _, filler) = attach_horn(&x, &item, &SimplicialMap::identity(h), 0).unwrap();
        assert_eq!(y.total().cell_counts(), vec![3, 3, 1]);
        assert!(filler.is_iso());
        let d2 = StratSSet::new(Arc::new(standard_simplex(2)), p, vec![0; 3]).unwrap();
        assert!(y.iso_over(&d2, Budget::default()).is_iso());
    }
}
