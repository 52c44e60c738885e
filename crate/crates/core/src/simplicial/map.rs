use std::collections::HashSet;
use std::sync::Arc;

use super::sset::SSet;
use super::term::{GenRef, SimplexTerm};
use crate::error::{Error, Result};

/// A simplicial map, given by the images of the source generators.
#[derive(Clone, Debug)]
pub struct SMap {
    pub source: Arc<SSet>,
    pub target: Arc<SSet>,
    images: Vec<Vec<SimplexTerm>>,
}

impl PartialEq for SMap {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images
            && (Arc::ptr_eq(&self.source, &other.source) || self.source == other.source)
            && (Arc::ptr_eq(&self.target, &other.target) || self.target == other.target)
    }
}

impl SMap {
    /// Checks degrees and compatibility with every face.
    pub fn new(source: Arc<SSet>, target: Arc<SSet>, images: Vec<Vec<SimplexTerm>>) -> Result<Self> {
        let m = SMap::from_images_unchecked(source, target, images);
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn from_images_unchecked(
        source: Arc<SSet>,
        target: Arc<SSet>,
        mut images: Vec<Vec<SimplexTerm>>,
    ) -> Self {
        let dims = source.counts().len();
        images.resize(dims, Vec::new());
        SMap { source, target, images }
    }

    pub fn from_fn(source: Arc<SSet>, target: Arc<SSet>, mut f: impl FnMut(GenRef) -> SimplexTerm) -> Result<Self> {
        let images = (0..source.counts().len())
            .map(|d| (0..source.count(d)).map(|i| f(GenRef::new(d, i))).collect())
            .collect();
        SMap::new(source, target, images)
    }

    pub fn identity(s: Arc<SSet>) -> Self {
        let images = (0..s.counts().len())
            .map(|d| {
                (0..s.count(d))
                    .map(|i| SimplexTerm::generator(GenRef::new(d, i)))
                    .collect()
            })
            .collect();
        SMap {
            source: s.clone(),
            target: s,
            images,
        }
    }

    /// The unique map out of the empty simplicial set.
    pub fn from_empty(target: Arc<SSet>) -> Self {
        SMap {
            source: Arc::new(SSet::empty()),
            target,
            images: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for g in self.source.gen_refs() {
            let img = self
                .images
                .get(g.dim())
                .and_then(|v| v.get(g.idx()))
                .ok_or_else(|| Error::NotASimplicialMap(format!("no image for `{}`", self.source.id(g))))?;
            if img.degree() != g.dim() || !self.target.contains(img.gen) {
                return Err(Error::NotASimplicialMap(format!(
                    "image of `{}` has wrong degree or is undeclared",
                    self.source.id(g)
                )));
            }
            if g.dim() == 0 {
                continue;
            }
            for (i, f) in self.source.generator(g).faces.iter().enumerate() {
                if self.apply(f) != self.target.face_unchecked(img, i) {
                    return Err(Error::NotASimplicialMap(format!(
                        "d{i} does not commute on `{}`",
                        self.source.id(g)
                    )));
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn image(&self, g: GenRef) -> &SimplexTerm {
        &self.images[g.dim()][g.idx()]
    }

    pub fn images(&self) -> &[Vec<SimplexTerm>] {
        &self.images
    }

    /// Image of an arbitrary simplex of the source.
    pub fn apply(&self, t: &SimplexTerm) -> SimplexTerm {
        self.image(t.gen).degenerate_by(t.surjection())
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SMap) -> SMap {
        let images = self
            .images
            .iter()
            .map(|row| row.iter().map(|t| other.apply(t)).collect())
            .collect();
        SMap {
            source: self.source.clone(),
            target: other.target.clone(),
            images,
        }
    }

    /// Degree-wise injective.
    pub fn is_mono(&self) -> bool {
        let mut seen = HashSet::new();
        self.images
            .iter()
            .flatten()
            .all(|t| !t.is_degenerate() && seen.insert(t.gen))
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_mono() && self.images.iter().map(Vec::len).sum::<usize>() == self.target.total_generators()
    }

    /// Image of each vertex generator as a target vertex index.
    pub fn vertex_map(&self) -> Vec<u32> {
        self.images
            .first()
            .map(|v| v.iter().map(|t| t.gen.idx).collect())
            .unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_composition() {
        let d = Arc::new(SSet::standard(2));
        let id = SMap::identity(d.clone());
        assert!(id.validate().is_ok());
        assert!(id.is_isomorphism());
        assert_eq!(id.then(&id), id);
    }

    #[test]
    fn collapse_is_not_mono() {
        let d1 = Arc::new(SSet::standard(1));
        let pt = Arc::new(SSet::standard(0));
        let v = SimplexTerm::generator(GenRef::new(0, 0));
        let m = SMap::from_fn(d1, pt, |g| {
            if g.dim() == 0 {
                v.clone()
            } else {
                v.degeneracy(0).unwrap()
            }
        })
        .unwrap();
        assert!(!m.is_mono());
    }

    #[test]
    fn rejects_non_simplicial() {
        let d1 = Arc::new(SSet::standard(1));
        // send both vertices to 0 but keep the edge: faces disagree
        let r = SMap::from_fn(d1.clone(), d1, |g| {
            if g.dim() == 0 {
                SimplexTerm::generator(GenRef::new(0, 0))
            } else {
                SimplexTerm::generator(g)
            }
        });
        assert!(r.is_err());
    }
}
