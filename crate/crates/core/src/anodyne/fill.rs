//! Search for filling orders: which horns, attached in which order, grow a
//! subcomplex of an ambient object into a larger one.

use std::collections::{HashMap, HashSet};

use crate::simplicial::{make_generator, Budget, CellId, Generator, SimplicialError, SimplicialMap, Simplex};
use crate::stratified::{GeneratorItem, GeneratorKind, StratError, StratSSet};

use super::{attach_horn, CellCertificate, CertStep};

/// Grow the current subcomplex until it contains `target`, using horns of
/// `allowed`.
#[derive(Clone, Debug)]
pub struct FillStage {
    pub target: Vec<Vec<bool>>,
    pub allowed: GeneratorKind,
}

type Present = Vec<Vec<bool>>;

struct Search<'a> {
    ambient: &'a StratSSet,
    nodes: u64,
    budget: Budget,
    seen: HashSet<Present>,
}

impl Search<'_> {
    fn candidates(&self, present: &Present, stage: &FillStage) -> Vec<(CellId, usize, GeneratorItem)> {
        let b = self.ambient.total();
        let base = self.ambient.base();
        let mut out = Vec::new();
        for c in b.all_cells() {
            if c.dim() == 0 || present[c.dim()][c.idx()] || !stage.target[c.dim()][c.idx()] {
                continue;
            }
            let faces = &b.cell(c).faces;
            let labels = self.ambient.labels_of(&Simplex::nondeg(c));
            for k in 0..faces.len() {
                let f = &faces[k];
                if f.is_degenerate() || present[f.cell.dim()][f.cell.idx()] || !stage.target[f.cell.dim()][f.cell.idx()] {
                    continue;
                }
                let rest_present =
                    faces.iter().enumerate().all(|(i, g)| i == k || present[g.cell.dim()][g.cell.idx()]);
                if !rest_present {
                    continue;
                }
                let item = GeneratorItem { n: c.dim(), k, labels: labels.clone() };
                if stage.allowed.contains(base, &item) {
                    out.push((c, k, item));
                }
            }
        }
        out
    }

    fn done(present: &Present, stage: &FillStage) -> bool {
        present.iter().zip(&stage.target).all(|(p, t)| p.iter().zip(t).all(|(p, t)| *p || !*t))
    }

    fn dfs(
        &mut self,
        present: &mut Present,
        stage: &FillStage,
        path: &mut Vec<(CellId, usize, GeneratorItem)>,
    ) -> Result<bool, StratError> {
        if Self::done(present, stage) {
            return Ok(true);
        }
        if !self.seen.insert(present.clone()) {
            return Ok(false);
        }
        self.nodes += 1;
        if self.nodes > self.budget.max_candidates {
            return Err(SimplicialError::Budget { resource: "filling-order search".into(), limit: self.budget.max_candidates }
                .into());
        }
        for (c, k, item) in self.candidates(present, stage) {
            let f = self.ambient.total().cell(c).faces[k].cell;
            present[c.dim()][c.idx()] = true;
            present[f.dim()][f.idx()] = true;
            path.push((c, k, item));
            if self.dfs(present, stage, path)? {
                return Ok(true);
            }
            path.pop();
            present[c.dim()][c.idx()] = false;
            present[f.dim()][f.idx()] = false;
        }
        Ok(false)
    }
}

/// Finds a certificate growing the subcomplex `start` of `ambient` through
/// the stages in order, and builds it by replaying the attachments.
pub fn fill_certificate(
    kind: GeneratorKind,
    ambient: &StratSSet,
    start: &[Vec<bool>],
    stages: &[FillStage],
    budget: Budget,
) -> Result<CellCertificate, StratError> {
    let b = ambient.total();
    let mut search = Search { ambient, nodes: 0, budget, seen: HashSet::new() };
    let mut present: Present = start.to_vec();
    let mut path = Vec::new();
    for (i, stage) in stages.iter().enumerate() {
        search.seen.clear();
        if !search.dfs(&mut present, stage, &mut path)? {
            return Err(StratError::NotStratified(format!("no filling order found for stage {i}")));
        }
    }
    let (sub, inc) = b.subcomplex(|c| start[c.dim()][c.idx()])?;
    let labels = (0..sub.num_cells(0)).map(|v| ambient.label(inc.vertex_image(v))).collect();
    let start_obj = StratSSet::new(sub, ambient.base().clone(), labels)?;
    let mut corr: HashMap<CellId, CellId> = inc.source().all_cells().map(|c| (inc.image(c).cell, c)).collect();
    let mut current = start_obj.clone();
    let mut steps = Vec::new();
    for (i, (sigma, k, item)) in path.into_iter().enumerate() {
        let g = make_generator(Generator::Horn(item.n, k))?;
        let images = (0..=g.sset.trunc_dim())
            .map(|d| {
                g.sset
                    .cells_of_dim(d)
                    .map(|c| {
                        let verts: Vec<u8> =
                            g.ambient.vertices_of(g.inclusion.image(c)).into_iter().map(|v| v as u8).collect();
                        let s = b.restrict(sigma, &verts);
                        Simplex { cell: corr[&s.cell], sur: s.sur }
                    })
                    .collect()
            })
            .collect();
        let attach = SimplicialMap::new(g.sset.clone(), current.total().clone(), images)?;
        let n = item.n;
        let face_id = CellId::new(n - 1, current.total().num_cells(n - 1));
        let cell_id = CellId::new(n, current.total().num_cells(n));
        steps.push(CertStep::from_map(item.clone(), &attach));
        let (next, _, _) = attach_horn(&current, &item, &attach, i)?;
        corr.insert(b.cell(sigma).faces[k].cell, face_id);
        corr.insert(sigma, cell_id);
        current = next;
    }
    Ok(CellCertificate { kind, start: start_obj, steps, claimed_end: ambient.clone() })
}
