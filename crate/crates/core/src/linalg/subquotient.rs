use super::{QMatrix, Quotient};
use crate::rational::Q;

/// `Z / B` for subspaces `B ⊆ Z ⊆ ℚⁿ`, with committed coordinates.
#[derive(Clone, Debug)]
pub struct Subquotient {
    /// `n × dim Z`
    pub z: QMatrix,
    zl: QMatrix,
    q: Quotient,
}

impl Subquotient {
    /// `z` spans Z (any spanning set), `b` spans B and must lie in Z.
    pub fn new(z: &QMatrix, b: &QMatrix) -> Subquotient {
        let z = z.image();
        let zl = z.left_inverse().expect("independent basis");
        let bz = z.solve_many(b).expect("B is not contained in Z");
        let q = Quotient::new(&bz);
        Subquotient { z, zl, q }
    }

    /// The whole ambient space modulo `b`.
    pub fn cokernel(n: usize, b: &QMatrix) -> Subquotient {
        Self::new(&QMatrix::identity(n), b)
    }

    /// A subspace with nothing divided out.
    pub fn subspace(z: &QMatrix) -> Subquotient {
        Self::new(z, &QMatrix::zeros(z.rows(), 0))
    }

    /// Homology of `… → ℚⁿ → …` at the middle: `Ker out / Im inc`.
    pub fn homology(inc: &QMatrix, out: &QMatrix) -> Subquotient {
        Self::new(&out.kernel(), inc)
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    pub fn ambient(&self) -> usize {
        self.z.rows()
    }

    /// Representatives of the basis, as columns in the ambient space.
    pub fn lifts(&self) -> QMatrix {
        self.z.mul(&self.q.section)
    }

    pub fn lift(&self, c: &[Q]) -> Vec<Q> {
        self.lifts().mul_vec(c)
    }

    /// Coordinates of the classes of the columns of `v`, which must lie in Z.
    pub fn coords(&self, v: &QMatrix) -> QMatrix {
        debug_assert!(self.contains(v), "vector outside Z");
        self.q.proj.mul(&self.zl.mul(v))
    }

    /// Whether every column of `v` lies in Z.
    pub fn contains(&self, v: &QMatrix) -> bool {
        self.z.spans(v)
    }

    /// Matrix of the map induced by the ambient linear map `t` into `target`.
    pub fn induced(&self, t: &QMatrix, target: &Subquotient) -> QMatrix {
        target.coords(&t.mul(&self.lifts()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homology_of_short_complex() {
        // ℚ → ℚ² → ℚ with inc = (1,0), out = (0,0)
        let inc = QMatrix::from_i64(&[&[1], &[0]]);
        let out = QMatrix::zeros(1, 2);
        let h = Subquotient::homology(&inc, &out);
        assert_eq!(h.dim(), 1);
        assert!(h.coords(&inc).is_zero());
        let id = QMatrix::identity(2);
        assert_eq!(h.induced(&id, &h), QMatrix::identity(1));
    }
}
