use std::sync::Arc;

use super::{CellId, SimplicialError, SimplicialSet, Simplex};

/// A simplicial map, given by the image of every nondegenerate simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    source: Arc<SimplicialSet>,
    target: Arc<SimplicialSet>,
    images: Vec<Vec<Simplex>>,
}

fn same(a: &Arc<SimplicialSet>, b: &Arc<SimplicialSet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl SimplicialMap {
    /// Builds a map and checks that it commutes with faces.
    pub fn new(
        source: Arc<SimplicialSet>,
        target: Arc<SimplicialSet>,
        images: Vec<Vec<Simplex>>,
    ) -> Result<Self, SimplicialError> {
        let m = SimplicialMap::new_unchecked(source, target, images);
        m.validate()?;
        Ok(m)
    }

    pub fn new_unchecked(
        source: Arc<SimplicialSet>,
        target: Arc<SimplicialSet>,
        mut images: Vec<Vec<Simplex>>,
    ) -> Self {
        let levels = source.trunc_dim() + 1;
        images.resize(levels.max(images.len()), Vec::new());
        images.truncate(levels);
        SimplicialMap { source, target, images }
    }

    /// Builds a map from a function on cells.
    pub fn from_fn(
        source: Arc<SimplicialSet>,
        target: Arc<SimplicialSet>,
        mut f: impl FnMut(CellId) -> Simplex,
    ) -> Result<Self, SimplicialError> {
        let images = (0..=source.trunc_dim())
            .map(|d| source.cells_of_dim(d).map(&mut f).collect())
            .collect();
        SimplicialMap::new(source, target, images)
    }

    pub fn identity(x: Arc<SimplicialSet>) -> Self {
        let images =
            (0..=x.trunc_dim()).map(|d| x.cells_of_dim(d).map(Simplex::nondeg).collect()).collect();
        SimplicialMap { source: x.clone(), target: x, images }
    }

    /// The unique map to a point.
    pub fn to_point(x: Arc<SimplicialSet>, point: Arc<SimplicialSet>) -> Self {
        let images = (0..=x.trunc_dim())
            .map(|d| x.cells_of_dim(d).map(|_| Simplex { cell: CellId::new(0, 0), sur: smallvec::smallvec![0; d + 1] }).collect())
            .collect();
        SimplicialMap { source: x, target: point, images }
    }

    pub fn source(&self) -> &Arc<SimplicialSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SimplicialSet> {
        &self.target
    }

    pub fn image(&self, c: CellId) -> &Simplex {
        &self.images[c.dim()][c.idx()]
    }

    pub fn images(&self) -> &[Vec<Simplex>] {
        &self.images
    }

    /// Image of an arbitrary simplex.
    pub fn apply(&self, x: &Simplex) -> Simplex {
        self.target.apply(self.image(x.cell), &x.sur)
    }

    pub fn vertex_image(&self, v: usize) -> usize {
        self.images[0][v].cell.idx()
    }

    /// Checks dimensions and compatibility with faces.
    pub fn validate(&self) -> Result<(), SimplicialError> {
        for c in self.source.all_cells() {
            let img = self
                .images
                .get(c.dim())
                .and_then(|l| l.get(c.idx()))
                .ok_or_else(|| SimplicialError::NotAMap(format!("no image for `{}`", self.source.name(c))))?;
            if img.dim() != c.dim() {
                return Err(SimplicialError::NotAMap(format!(
                    "image of `{}` has dimension {}",
                    self.source.name(c),
                    img.dim()
                )));
            }
            if img.cell.dim() >= self.target.trunc_dim() + 1
                || img.cell.idx() >= self.target.num_cells(img.cell.dim())
            {
                return Err(SimplicialError::NotAMap(format!(
                    "image of `{}` is not a simplex of the target",
                    self.source.name(c)
                )));
            }
            let x = Simplex::nondeg(c);
            let faces = if c.dim() == 0 { 0 } else { c.dim() + 1 };
            for i in 0..faces {
                let lhs = self.apply(&self.source.face(&x, i));
                let rhs = self.target.face(img, i);
                if lhs != rhs {
                    return Err(SimplicialError::NotAMap(format!(
                        "d_{i} of `{}` maps to {} but d_{i} of its image is {}",
                        self.source.name(c),
                        self.target.format_simplex(&lhs),
                        self.target.format_simplex(&rhs)
                    )));
                }
            }
        }
        Ok(())
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &SimplicialMap) -> Result<SimplicialMap, SimplicialError> {
        if !same(&self.target, &g.source) {
            return Err(SimplicialError::NotAMap("composite of non-composable maps".into()));
        }
        let images = self.images.iter().map(|l| l.iter().map(|x| g.apply(x)).collect()).collect();
        Ok(SimplicialMap { source: self.source.clone(), target: g.target.clone(), images })
    }

    /// Equal as maps (same images, compatible endpoints).
    pub fn agrees_with(&self, other: &SimplicialMap) -> bool {
        same(&self.source, &other.source)
            && same(&self.target, &other.target)
            && self.images == other.images
    }

    /// Injective on nondegenerate simplices, which for a simplicial map is
    /// equivalent to being a monomorphism.
    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.source.all_cells().all(|c| {
            let img = self.image(c);
            !img.is_degenerate() && seen.insert(img.cell)
        })
    }

    /// Bijective on nondegenerate simplices in every dimension.
    pub fn is_iso(&self) -> bool {
        self.is_injective()
            && self.source.cell_counts().iter().sum::<usize>() == self.target.total_cells()
            && self.source.is_complete() == self.target.is_complete()
    }

    /// Replaces the target by an equal set (used after rebuilding).
    pub fn with_target(mut self, target: Arc<SimplicialSet>) -> Self {
        self.target = target;
        self
    }

    pub fn with_source(mut self, source: Arc<SimplicialSet>) -> Self {
        self.source = source;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{make_generator, Generator};

    #[test]
    fn horn_inclusion_is_a_mono() {
        let g = make_generator(Generator::Horn(2, 0)).unwrap();
        assert!(g.inclusion.validate().is_ok());
        assert!(g.inclusion.is_injective());
        assert!(!g.inclusion.is_iso());
    }

    #[test]
    fn bad_map_is_rejected() {
        let d1 = Arc::new(crate::simplicial::standard_simplex(1));
        // send the edge to itself but swap the vertices
        let images = vec![vec![Simplex::vertex(1), Simplex::vertex(0)], vec![Simplex::nondeg(CellId::new(1, 0))]];
        assert!(SimplicialMap::new(d1.clone(), d1, images).is_err());
    }
}
