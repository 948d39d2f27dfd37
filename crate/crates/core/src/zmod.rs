//! Finitely generated abelian groups given by integer presentations.
//!
//! A presentation `R` (m × n) describes `ℤⁿ / rowspace(R)`: columns are generators,
//! rows are relations.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::linalg::{snf_with, ZMatrix};
use crate::rational::Q;

#[derive(Clone, Debug)]
pub struct ZFGModule {
    pub presentation: ZMatrix,
    /// free rank
    pub rank: usize,
    /// invariant factors `d₁ | d₂ | …`, all at least 2
    pub factors: Vec<BigInt>,
}

impl PartialEq for ZFGModule {
    /// Isomorphism of groups.
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.factors == other.factors
    }
}

impl Eq for ZFGModule {}

pub fn normal_form(presentation: &ZMatrix) -> ZFGModule {
    let s = snf_with(presentation, true);
    ZFGModule {
        presentation: presentation.clone(),
        rank: presentation.cols() - s.rank(),
        factors: s.invariant_factors,
    }
}

impl ZFGModule {
    pub fn from_normal_form(rank: usize, factors: &[BigInt]) -> ZFGModule {
        let s = factors.len();
        let mut p = ZMatrix::zeros(s, s + rank);
        for (i, d) in factors.iter().enumerate() {
            p[(i, i)] = d.clone();
        }
        normal_form(&p)
    }

    pub fn cyclic(n: i64) -> ZFGModule {
        normal_form(&ZMatrix::from_i64(&[&[n]]))
    }

    pub fn free(r: usize) -> ZFGModule {
        normal_form(&ZMatrix::zeros(0, r))
    }

    pub fn generators(&self) -> usize {
        self.presentation.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.factors.is_empty()
    }

    pub fn direct_sum(&self, other: &ZFGModule) -> ZFGModule {
        let (a, b) = (&self.presentation, &other.presentation);
        let mut p = ZMatrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                p[(i, j)] = a[(i, j)].clone();
            }
        }
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                p[(a.rows() + i, a.cols() + j)] = b[(i, j)].clone();
            }
        }
        normal_form(&p)
    }

    /// The presentation `diag(d₁, …, d_s)` padded with `rank` zero columns.
    pub fn minimal_presentation(&self) -> ZMatrix {
        Self::from_normal_form(self.rank, &self.factors).presentation
    }

    /// Number of cyclic summands with a nonzero invariant factor.
    pub fn torsion_summands(&self) -> usize {
        self.factors.len()
    }
}

impl fmt::Display for ZFGModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

fn select_cols(m: &ZMatrix, cols: std::ops::Range<usize>) -> ZMatrix {
    let mut out = ZMatrix::zeros(m.rows(), cols.len());
    for i in 0..m.rows() {
        for (k, j) in cols.clone().enumerate() {
            out[(i, k)] = m[(i, j)].clone();
        }
    }
    out
}

/// Basis of `{x ∈ ℤⁿ : a·x = 0}` as columns.
fn integer_kernel(a: &ZMatrix) -> ZMatrix {
    let s = snf_with(a, false);
    select_cols(&s.v, s.rank()..a.cols())
}

/// `Ext¹(M, N)` from the presentation of M.
pub fn ext1_z(m: &ZFGModule, n: &ZFGModule) -> ZFGModule {
    // ℤ^r →(a) ℤ^g → M → 0 with a injective
    let a_full = m.presentation.transpose();
    let s = snf_with(&a_full, false);
    let r = s.rank();
    let a = a_full.mul(&select_cols(&s.v, 0..r));
    let g = a.rows();
    let rn = &n.presentation;
    let k = rn.cols();
    // Ext¹ = Coker(Hom(ℤ^g, N) → Hom(ℤ^r, N)) with Hom(ℤ^r, N) = Nʳ
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for j in 0..r {
        for rho in 0..rn.rows() {
            let mut v = vec![BigInt::zero(); r * k];
            for t in 0..k {
                v[j * k + t] = rn[(rho, t)].clone();
            }
            rows.push(v);
        }
    }
    for i in 0..g {
        for t in 0..k {
            let mut v = vec![BigInt::zero(); r * k];
            for j in 0..r {
                v[j * k + t] = a[(i, j)].clone();
            }
            rows.push(v);
        }
    }
    let mut p = ZMatrix::zeros(rows.len(), r * k);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, x) in row.into_iter().enumerate() {
            p[(i, j)] = x;
        }
    }
    normal_form(&p)
}

/// `Tr M`: the cokernel of the dualized minimal presentation.
pub fn transpose_z(m: &ZFGModule) -> ZFGModule {
    normal_form(&m.minimal_presentation().transpose())
}

/// `A ⊗̄ B` computed as `Ext¹(Tr A, B)`.
pub fn tensor_stab_z(a: &ZFGModule, b: &ZFGModule) -> ZFGModule {
    ext1_z(&transpose_z(a), b)
}

#[derive(Clone, Debug)]
pub struct TorsionZ {
    pub module: ZFGModule,
    /// generators of the submodule as columns in the generators of A
    pub generators: ZMatrix,
}

/// `Ker(e_A: A → A**)` via integer kernels.
pub fn torsion_z(a: &ZFGModule) -> TorsionZ {
    let r = &a.presentation;
    let n = r.cols();
    // functionals killing the relations, then their common kernel
    let k = integer_kernel(r);
    let z = integer_kernel(&k.transpose());
    let zq = z.to_q();
    let mut rel = ZMatrix::zeros(r.rows(), z.cols());
    for i in 0..r.rows() {
        let row: Vec<Q> = (0..n).map(|j| Q::from_bigint(r[(i, j)].clone())).collect();
        let c = zq.solve(&row).expect("relations lie in the kernel of e_A");
        for (j, x) in c.into_iter().enumerate() {
            debug_assert!(x.denom().is_one(), "lattice coordinates are integral");
            rel[(i, j)] = x.numer();
        }
    }
    TorsionZ {
        module: normal_form(&rel),
        generators: z,
    }
}

/// The torsion subgroup read off the Smith normal form.
pub fn classical_torsion(a: &ZFGModule) -> ZFGModule {
    ZFGModule::from_normal_form(0, &a.factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn normal_forms() {
        assert_eq!(normal_form(&ZMatrix::zeros(0, 3)).rank, 3);
        assert_eq!(normal_form(&ZMatrix::from_i64(&[&[2, 0], &[0, 6]])).factors, big(&[2, 6]));
        assert_eq!(normal_form(&ZMatrix::from_i64(&[&[2, 4], &[6, 8]])).factors, big(&[2, 4]));
        assert_eq!(normal_form(&ZMatrix::from_i64(&[&[6, 0], &[0, 0]])).to_string(), "Z/6 + Z");
    }

    #[test]
    fn ext_of_cyclics() {
        for n in 1..8i64 {
            for m in 1..8i64 {
                let e = ext1_z(&ZFGModule::cyclic(n), &ZFGModule::cyclic(m));
                assert_eq!(e, ZFGModule::cyclic(n.gcd(&m)), "Ext(Z/{n}, Z/{m})");
            }
        }
        assert!(ext1_z(&ZFGModule::free(2), &ZFGModule::cyclic(5)).is_zero());
        assert_eq!(ext1_z(&ZFGModule::cyclic(4), &ZFGModule::free(1)), ZFGModule::cyclic(4));
    }

    #[test]
    fn transposes() {
        assert_eq!(transpose_z(&ZFGModule::cyclic(5)), ZFGModule::cyclic(5));
        assert!(transpose_z(&ZFGModule::free(3)).is_zero());
        assert!(transpose_z(&normal_form(&ZMatrix::from_i64(&[&[0]]))).is_zero());
    }

    #[test]
    fn stabilized_tensor_examples() {
        let a = ZFGModule::cyclic(4).direct_sum(&ZFGModule::free(1));
        assert_eq!(tensor_stab_z(&a, &ZFGModule::free(1)), ZFGModule::cyclic(4));
        assert_eq!(tensor_stab_z(&ZFGModule::cyclic(6), &ZFGModule::cyclic(4)), ZFGModule::cyclic(2));
        assert!(tensor_stab_z(&ZFGModule::free(2), &ZFGModule::cyclic(3)).is_zero());
    }

    #[test]
    fn torsion_examples() {
        let a = normal_form(&ZMatrix::from_i64(&[&[6, 0], &[0, 0]]));
        assert_eq!(torsion_z(&a).module, ZFGModule::cyclic(6));
        assert!(torsion_z(&ZFGModule::free(2)).module.is_zero());
        let b = normal_form(&ZMatrix::from_i64(&[&[4, 0, 0], &[0, 6, 0]]));
        assert_eq!(torsion_z(&b).module.factors, big(&[2, 12]));
        // a skewed presentation of Z/2 ⊕ Z
        let c = normal_form(&ZMatrix::from_i64(&[&[2, 4]]));
        assert_eq!(torsion_z(&c).module, ZFGModule::cyclic(2));
    }
}
