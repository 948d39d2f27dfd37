use super::QMatrix;

/// A subspace of a concrete ambient coordinate space, with a committed basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSpace {
    pub dimension: usize,
    /// Columns are the basis vectors in ambient coordinates.
    pub basis_witness: QMatrix,
    pub ambient_tag: String,
}

impl QSpace {
    pub fn new(basis: QMatrix, tag: impl Into<String>) -> Self {
        debug_assert_eq!(basis.rank(), basis.cols(), "basis witness is not independent");
        QSpace {
            dimension: basis.cols(),
            basis_witness: basis,
            ambient_tag: tag.into(),
        }
    }

    /// The whole ambient space of dimension `n`, with the standard basis.
    pub fn full(n: usize, tag: impl Into<String>) -> Self {
        Self::new(QMatrix::identity(n), tag)
    }

    pub fn zero(ambient: usize, tag: impl Into<String>) -> Self {
        Self::new(QMatrix::zeros(ambient, 0), tag)
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis_witness.rows()
    }

    /// Same ambient and the same span.
    pub fn same_subspace(&self, other: &QSpace) -> bool {
        self.ambient_tag == other.ambient_tag
            && self.dimension == other.dimension
            && self.basis_witness.same_span(&other.basis_witness)
    }
}
