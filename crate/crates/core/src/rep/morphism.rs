use super::object::RepObject;
use crate::error::{Error, Result};
use crate::linalg::Mat;

/// A map of representations, stored as a `dim target x dim source` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Morphism {
    pub source: RepObject,
    pub target: RepObject,
    pub matrix: Mat,
}

impl Morphism {
    pub fn new(source: RepObject, target: RepObject, matrix: Mat) -> Result<Morphism> {
        let f = Morphism::new_unchecked(source, target, matrix);
        f.validate()?;
        Ok(f)
    }

    pub fn new_unchecked(source: RepObject, target: RepObject, matrix: Mat) -> Morphism {
        Morphism { source, target, matrix }
    }

    pub fn identity(m: &RepObject) -> Morphism {
        Morphism::new_unchecked(m.clone(), m.clone(), Mat::identity(m.dim()))
    }

    pub fn validate(&self) -> Result<()> {
        let (s, t, f) = (&self.source, &self.target, &self.matrix);
        if !s.same_group(t) {
            return Err(Error::Morphism("source and target over different presentations".into()));
        }
        if f.rows() != t.dim() || f.cols() != s.dim() {
            return Err(Error::Morphism(format!(
                "matrix is {}x{} for a map from dim {} to dim {}",
                f.rows(),
                f.cols(),
                s.dim(),
                t.dim()
            )));
        }
        for (a, b, _) in f.nonzeros() {
            if t.character(a) != s.character(b) {
                return Err(Error::Morphism("matrix does not preserve characters".into()));
            }
        }
        let keys: std::collections::BTreeSet<usize> =
            s.actions().keys().chain(t.actions().keys()).copied().collect();
        for i in keys {
            if f.mul(&s.action_or_zero(i)) != t.action_or_zero(i).mul(f) {
                return Err(Error::Morphism(format!(
                    "matrix does not intertwine the action of {}",
                    s.presentation().name(i)
                )));
            }
        }
        Ok(())
    }

    pub fn compose(&self, after: &Morphism) -> Result<Morphism> {
        if self.target.dim() != after.source.dim() {
            return Err(Error::Morphism("composition of incompatible maps".into()));
        }
        Ok(Morphism::new_unchecked(self.source.clone(), after.target.clone(), after.matrix.mul(&self.matrix)))
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.dim()
    }
}
