//! Finite-dimensional associative unital ℚ-algebras given by structure constants.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{QMatrix, Quotient};
use crate::rational::Q;

/// Which side the algebra acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

/// Raw input: `c[i][j][k]` is the coefficient of `e_k` in `e_i·e_j`.
#[derive(Clone, Debug)]
pub struct AlgebraData {
    pub name: String,
    pub c: Vec<Vec<Vec<Q>>>,
    pub unit: Vec<Q>,
}

/// A validated algebra. Cheap to clone.
#[derive(Clone)]
pub struct Algebra(Arc<Inner>);

struct Inner {
    name: String,
    dim: usize,
    unit: Vec<Q>,
    /// lmul[i]: x ↦ e_i·x
    lmul: Vec<QMatrix>,
    /// rmul[i]: x ↦ x·e_i
    rmul: Vec<QMatrix>,
    structure: OnceLock<Structure>,
}

#[derive(Clone, Debug)]
struct Structure {
    radical: QMatrix,
    idempotents: Vec<Vec<Q>>,
    split: bool,
}

/// Validates structure constants and returns the algebra, or the first violated identity.
pub fn validate_algebra(data: AlgebraData) -> Result<Algebra> {
    let d = data.c.len();
    if d == 0 {
        return Err(Error::InvalidAlgebra("dimension must be positive".into()));
    }
    if data.unit.len() != d {
        return Err(Error::InvalidAlgebra(format!(
            "unit has length {}, expected {d}",
            data.unit.len()
        )));
    }
    for (i, slab) in data.c.iter().enumerate() {
        if slab.len() != d || slab.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidAlgebra(format!(
                "structure constants are not a {d}x{d}x{d} cube (slice {i})"
            )));
        }
    }
    let mut lmul = vec![QMatrix::zeros(d, d); d];
    let mut rmul = vec![QMatrix::zeros(d, d); d];
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let v = &data.c[i][j][k];
                lmul[i][(k, j)] = v.clone();
                rmul[j][(k, i)] = v.clone();
            }
        }
    }
    for i in 0..d {
        for j in 0..d {
            let eij = lmul[i].col(j);
            for l in 0..d {
                let lhs = rmul[l].mul_vec(&eij);
                let rhs = lmul[i].mul_vec(&lmul[j].col(l));
                if lhs != rhs {
                    return Err(Error::InvalidAlgebra(format!(
                        "associativity fails for basis triple ({i}, {j}, {l})"
                    )));
                }
            }
        }
    }
    let lu = combine(&lmul, &data.unit);
    let ru = combine(&rmul, &data.unit);
    for j in 0..d {
        let mut ej = vec![Q::zero(); d];
        ej[j] = Q::one();
        if lu.mul_vec(&ej) != ej || ru.mul_vec(&ej) != ej {
            return Err(Error::InvalidAlgebra(format!(
                "unit does not act as identity on basis element {j}"
            )));
        }
    }
    Ok(Algebra(Arc::new(Inner {
        name: data.name,
        dim: d,
        unit: data.unit,
        lmul,
        rmul,
        structure: OnceLock::new(),
    })))
}

fn combine(mats: &[QMatrix], a: &[Q]) -> QMatrix {
    let n = mats.first().map_or(0, |m| m.rows());
    let mut out = QMatrix::zeros(n, mats.first().map_or(0, |m| m.cols()));
    for (m, x) in mats.iter().zip(a) {
        out.add_scaled(x, m);
    }
    out
}

fn unit_vec(d: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); d];
    v[i] = Q::one();
    v
}

impl Algebra {
    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn unit(&self) -> &[Q] {
        &self.0.unit
    }

    pub fn basis_vec(&self, i: usize) -> Vec<Q> {
        unit_vec(self.dim(), i)
    }

    pub fn ptr_eq(&self, other: &Algebra) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Structure constant `c[i][j][k]`.
    pub fn coeff(&self, i: usize, j: usize, k: usize) -> &Q {
        &self.0.lmul[i][(k, j)]
    }

    pub fn lmul(&self) -> &[QMatrix] {
        &self.0.lmul
    }

    pub fn rmul(&self) -> &[QMatrix] {
        &self.0.rmul
    }

    pub fn lmul_of(&self, a: &[Q]) -> QMatrix {
        combine(&self.0.lmul, a)
    }

    pub fn rmul_of(&self, a: &[Q]) -> QMatrix {
        combine(&self.0.rmul, a)
    }

    pub fn mul(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        self.lmul_of(a).mul_vec(b)
    }

    /// Product in the algebra a module of this side is a left module over:
    /// `ab` for left modules, `ba` for right modules.
    pub fn eff_mul(&self, side: Side, a: &[Q], b: &[Q]) -> Vec<Q> {
        match side {
            Side::Left => self.mul(a, b),
            Side::Right => self.mul(b, a),
        }
    }

    /// Matrices of the regular action on the given side, one per basis element.
    pub fn regular_action(&self, side: Side) -> &[QMatrix] {
        match side {
            Side::Left => &self.0.lmul,
            Side::Right => &self.0.rmul,
        }
    }

    /// Matrix of `x ↦ x ∗ e` for the effective product of `side`.
    pub fn eff_right_mul(&self, side: Side, e: &[Q]) -> QMatrix {
        match side {
            Side::Left => self.rmul_of(e),
            Side::Right => self.lmul_of(e),
        }
    }

    pub fn is_commutative(&self) -> bool {
        self.0.lmul == self.0.rmul
    }

    pub fn is_idempotent(&self, e: &[Q]) -> bool {
        self.mul(e, e) == e
    }

    fn structure(&self) -> &Structure {
        self.0.structure.get_or_init(|| compute_structure(self))
    }

    /// Columns span the Jacobson radical.
    pub fn radical(&self) -> &QMatrix {
        &self.structure().radical
    }

    /// A complete set of orthogonal idempotents summing to 1, primitive when
    /// the semisimple quotient splits into rational pieces.
    pub fn primitive_idempotents(&self) -> &[Vec<Q>] {
        &self.structure().idempotents
    }

    /// True when every `e·(Λ/rad)·e` is one-dimensional, so the idempotents are primitive
    /// and covers built from them are projective covers.
    pub fn is_split_basic(&self) -> bool {
        self.structure().split
    }

    /// Columns span `rad^j`.
    pub fn radical_power(&self, j: usize) -> QMatrix {
        let d = self.dim();
        let mut cur = QMatrix::identity(d);
        let rad = self.radical().clone();
        for _ in 0..j {
            let mut cols = Vec::new();
            for r in rad.col_vecs() {
                let lr = self.lmul_of(&r);
                for c in cur.col_vecs() {
                    cols.push(lr.mul_vec(&c));
                }
            }
            cur = QMatrix::from_cols(d, &cols).image();
            if cur.cols() == 0 {
                break;
            }
        }
        cur
    }

    pub fn opposite(&self) -> Algebra {
        let d = self.dim();
        let c = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).map(|k| self.coeff(j, i, k).clone()).collect())
                    .collect()
            })
            .collect();
        validate_algebra(AlgebraData {
            name: format!("{}^op", self.name()),
            c,
            unit: self.unit().to_vec(),
        })
        .expect("opposite of a valid algebra is valid")
    }

    pub fn to_data(&self) -> AlgebraData {
        let d = self.dim();
        AlgebraData {
            name: self.name().to_string(),
            c: (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| (0..d).map(|k| self.coeff(i, j, k).clone()).collect())
                        .collect()
                })
                .collect(),
            unit: self.unit().to_vec(),
        }
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.ptr_eq(other) || (self.0.name == other.0.name && self.0.lmul == other.0.lmul)
    }
}

impl Eq for Algebra {}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra({}, dim {})", self.name(), self.dim())
    }
}

fn compute_structure(a: &Algebra) -> Structure {
    let d = a.dim();
    let traces: Vec<Q> = a
        .lmul()
        .iter()
        .map(|m| (0..d).map(|i| m[(i, i)].clone()).sum())
        .collect();
    let mut t = QMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            t[(i, j)] = (0..d).map(|k| a.coeff(i, j, k) * &traces[k]).sum();
        }
    }
    let radical = t.kernel();
    for r in radical.col_vecs() {
        let l = a.lmul_of(&r);
        let mut p = l.clone();
        for _ in 1..d {
            p = p.mul(&l);
        }
        assert!(p.is_zero(), "trace-form kernel contains a non-nilpotent element");
    }
    let (idempotents, split) = lift_idempotents(a, &radical);
    Structure {
        radical,
        idempotents,
        split,
    }
}

/// Splits 1 in Λ/rad into orthogonal idempotents, then lifts them to Λ.
fn lift_idempotents(a: &Algebra, radical: &QMatrix) -> (Vec<Vec<Q>>, bool) {
    let quo = Quotient::new(radical);
    let s_dim = quo.dim();
    let lift = |x: &[Q]| quo.section.mul_vec(x);
    let proj = |x: &[Q]| quo.proj.mul_vec(x);
    let smul = |x: &[Q], y: &[Q]| proj(&a.mul(&lift(x), &lift(y)));

    let mut idems = vec![proj(a.unit())];
    let mut split = true;
    let mut p = 0;
    while p < idems.len() {
        let e = idems[p].clone();
        // e·S·e as a subspace of S
        let corner: Vec<Vec<Q>> = (0..s_dim)
            .map(|i| smul(&smul(&e, &unit_vec(s_dim, i)), &e))
            .collect();
        let corner = QMatrix::from_cols(s_dim, &corner).image();
        if corner.cols() <= 1 {
            p += 1;
            continue;
        }
        let basis = corner.col_vecs();
        let mut cands = basis.clone();
        for w in basis.windows(2) {
            cands.push(w[0].iter().zip(&w[1]).map(|(x, y)| x + y).collect());
        }
        let found = cands.iter().find_map(|c| split_by(&e, c, &smul));
        match found {
            Some(f) => {
                let rest: Vec<Q> = e.iter().zip(&f).map(|(x, y)| x - y).collect();
                idems[p] = f;
                idems.insert(p + 1, rest);
            }
            None => {
                split = false;
                p += 1;
            }
        }
    }

    let mut lifted = Vec::with_capacity(idems.len());
    let mut f = a.unit().to_vec();
    for ebar in &idems[..idems.len() - 1] {
        let mut x = a.mul(&a.mul(&f, &lift(ebar)), &f);
        for _ in 0..64 {
            let x2 = a.mul(&x, &x);
            if x2 == x {
                break;
            }
            let x3 = a.mul(&x2, &x);
            x = x2
                .iter()
                .zip(&x3)
                .map(|(p2, p3)| &(p2 * &Q::from_int(3)) - &(p3 * &Q::from_int(2)))
                .collect();
        }
        assert!(a.is_idempotent(&x), "idempotent lifting did not converge");
        f = f.iter().zip(&x).map(|(u, v)| u - v).collect();
        lifted.push(x);
    }
    lifted.push(f);
    (lifted, split)
}

/// Tries to split the idempotent `e` using a spectral projection of `c ∈ eSe`.
fn split_by(e: &[Q], c: &[Q], smul: &impl Fn(&[Q], &[Q]) -> Vec<Q>) -> Option<Vec<Q>> {
    let n = e.len();
    // powers e, c, c², ... until linearly dependent
    let mut powers = vec![e.to_vec(), c.to_vec()];
    let minpoly = loop {
        let k = powers.len() - 1;
        let m = QMatrix::from_cols(n, &powers[..k]);
        if let Some(sol) = m.solve(&powers[k]) {
            // c^k = Σ sol_i c^i
            let mut p: Vec<Q> = sol.iter().map(|x| -x).collect();
            p.push(Q::one());
            break p;
        }
        if k > n + 1 {
            return None;
        }
        let next = smul(&powers[k], c);
        powers.push(next);
    };
    if minpoly.len() <= 2 {
        return None;
    }
    for root in rational_roots(&minpoly) {
        let q = deflate(&minpoly, &root);
        let qval = eval_poly(&q, &root);
        if qval.is_zero() {
            continue;
        }
        // f = q(c)/q(λ)
        let mut f = vec![Q::zero(); n];
        for (i, coef) in q.iter().enumerate() {
            if !coef.is_zero() {
                for (fj, pj) in f.iter_mut().zip(&powers[i]) {
                    *fj += coef * pj;
                }
            }
        }
        let inv = qval.recip();
        let f: Vec<Q> = f.iter().map(|x| x * &inv).collect();
        if smul(&f, &f) == f && f.iter().any(|x| !x.is_zero()) && f != e {
            return Some(f);
        }
    }
    None
}

fn eval_poly(p: &[Q], x: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| &(&acc * x) + c)
}

/// Divides `p` by `(x - r)`; `r` must be a root.
fn deflate(p: &[Q], r: &Q) -> Vec<Q> {
    let n = p.len() - 1;
    let mut q = vec![Q::zero(); n];
    let mut carry = Q::zero();
    for i in (0..n).rev() {
        carry = &p[i + 1] + &(&carry * r);
        q[i] = carry.clone();
    }
    q
}

/// Rational roots of a polynomial (coefficients lowest degree first), ascending.
fn rational_roots(p: &[Q]) -> Vec<Q> {
    let lcm = p
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(&c.denom()));
    let mut ints: Vec<BigInt> = p
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let mut roots = Vec::new();
    while ints.len() > 1 && ints[0].is_zero() {
        ints.remove(0);
        if !roots.contains(&Q::zero()) {
            roots.push(Q::zero());
        }
    }
    if ints.len() > 1 {
        let a0 = ints[0].abs();
        let an = ints[ints.len() - 1].abs();
        let (Some(a0), Some(an)) = (a0.to_u64(), an.to_u64()) else {
            return roots;
        };
        if a0 > 1_000_000_000_000 || an > 1_000_000_000_000 {
            return roots;
        }
        let qs: Vec<Q> = ints.iter().map(|x| Q::from_bigint(x.clone())).collect();
        for num in divisors(a0) {
            for den in divisors(an) {
                for sign in [1i64, -1] {
                    let r = Q::new(sign * num as i64, den as i64);
                    if eval_poly(&qs, &r).is_zero() && !roots.contains(&r) {
                        roots.push(r);
                    }
                }
            }
        }
    }
    roots.sort();
    roots
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            out.push(i);
            if i * i != n {
                out.push(n / i);
            }
        }
        i += 1;
    }
    out.sort();
    out
}

/// Named algebras.
pub mod presets {
    use super::*;

    fn zero_cube(d: usize) -> Vec<Vec<Vec<Q>>> {
        vec![vec![vec![Q::zero(); d]; d]; d]
    }

    /// ℚ[x]/(xⁿ) with basis 1, x, …, xⁿ⁻¹.
    pub fn truncated_polynomial(n: usize) -> Algebra {
        assert!(n >= 1, "truncation degree must be positive");
        let mut c = zero_cube(n);
        for i in 0..n {
            for j in 0..n - i {
                c[i][j][i + j] = Q::one();
            }
        }
        validate_algebra(AlgebraData {
            name: format!("Q[x]/(x^{n})"),
            c,
            unit: unit_vec(n, 0),
        })
        .expect("truncated polynomial algebra is valid")
    }

    /// Upper triangular 2×2 matrices with basis e11, e12, e22.
    pub fn upper_triangular_2() -> Algebra {
        let mut c = zero_cube(3);
        c[0][0][0] = Q::one();
        c[0][1][1] = Q::one();
        c[1][2][1] = Q::one();
        c[2][2][2] = Q::one();
        validate_algebra(AlgebraData {
            name: "UT2".into(),
            c,
            unit: vec![Q::one(), Q::zero(), Q::one()],
        })
        .expect("upper triangular algebra is valid")
    }

    pub fn ground_field() -> Algebra {
        validate_algebra(AlgebraData {
            name: "Q".into(),
            c: vec![vec![vec![Q::one()]]],
            unit: vec![Q::one()],
        })
        .expect("ground field is valid")
    }

    /// Direct product; basis is the concatenation of the factors' bases.
    pub fn product(a: &Algebra, b: &Algebra) -> Algebra {
        let (da, db) = (a.dim(), b.dim());
        let d = da + db;
        let mut c = zero_cube(d);
        for i in 0..da {
            for j in 0..da {
                for k in 0..da {
                    c[i][j][k] = a.coeff(i, j, k).clone();
                }
            }
        }
        for i in 0..db {
            for j in 0..db {
                for k in 0..db {
                    c[da + i][da + j][da + k] = b.coeff(i, j, k).clone();
                }
            }
        }
        let mut unit = a.unit().to_vec();
        unit.extend_from_slice(b.unit());
        validate_algebra(AlgebraData {
            name: format!("{}x{}", a.name(), b.name()),
            c,
            unit,
        })
        .expect("product of valid algebras is valid")
    }
}
