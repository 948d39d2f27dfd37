//! Finite-dimensional modules as action matrices, and module maps.

use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::algebra::{Algebra, Side};
use crate::error::{Error, Result};
use crate::linalg::{QMatrix, Quotient};
use crate::rational::Q;
use crate::resolution::ResolutionCache;

/// A module over an algebra on a fixed side. Cheap to clone; clones share caches.
#[derive(Clone)]
pub struct Module(Arc<Inner>);

struct Inner {
    algebra: Algebra,
    side: Side,
    dim: usize,
    action: Vec<QMatrix>,
    label: String,
    pub(crate) cache: Mutex<ResolutionCache>,
    dual: OnceLock<Module>,
}

impl Module {
    /// Validates the action matrices against the multiplication table.
    pub fn new(
        algebra: &Algebra,
        side: Side,
        dim: usize,
        action: Vec<QMatrix>,
        label: impl Into<String>,
    ) -> Result<Module> {
        let d = algebra.dim();
        if action.len() != d {
            return Err(Error::InvalidModule(format!(
                "expected {d} action matrices, got {}",
                action.len()
            )));
        }
        for (i, m) in action.iter().enumerate() {
            if m.shape() != (dim, dim) {
                return Err(Error::InvalidModule(format!(
                    "action matrix {i} has shape {:?}, expected ({dim}, {dim})",
                    m.shape()
                )));
            }
        }
        let m = Self::new_unchecked(algebra, side, dim, action, label);
        m.check_action()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(
        algebra: &Algebra,
        side: Side,
        dim: usize,
        action: Vec<QMatrix>,
        label: impl Into<String>,
    ) -> Module {
        Module(Arc::new(Inner {
            algebra: algebra.clone(),
            side,
            dim,
            action,
            label: label.into(),
            cache: Mutex::new(ResolutionCache::default()),
            dual: OnceLock::new(),
        }))
    }

    fn check_action(&self) -> Result<()> {
        let a = self.algebra();
        let d = a.dim();
        let id = QMatrix::identity(self.dim());
        if self.act(a.unit()) != id {
            return Err(Error::InvalidModule("unit does not act as identity".into()));
        }
        for i in 0..d {
            for j in 0..d {
                let prod = a.eff_mul(self.side(), &a.basis_vec(i), &a.basis_vec(j));
                let lhs = self.0.action[i].mul(&self.0.action[j]);
                if lhs != self.act(&prod) {
                    return Err(Error::InvalidModule(format!(
                        "action does not respect multiplication for basis pair ({i}, {j})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Algebra {
        &self.0.algebra
    }

    pub fn side(&self) -> Side {
        self.0.side
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    pub fn action(&self) -> &[QMatrix] {
        &self.0.action
    }

    pub fn with_label(&self, label: impl Into<String>) -> Module {
        Self::new_unchecked(
            self.algebra(),
            self.side(),
            self.dim(),
            self.0.action.clone(),
            label,
        )
    }

    pub(crate) fn cache(&self) -> &Mutex<ResolutionCache> {
        &self.0.cache
    }

    pub fn ptr_eq(&self, other: &Module) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Same algebra, side and action matrices.
    pub fn same(&self, other: &Module) -> bool {
        self.ptr_eq(other)
            || (self.algebra() == other.algebra()
                && self.side() == other.side()
                && self.dim() == other.dim()
                && self.0.action == other.0.action)
    }

    /// Matrix of the action of the algebra element `a`.
    pub fn act(&self, a: &[Q]) -> QMatrix {
        let mut out = QMatrix::zeros(self.dim(), self.dim());
        for (m, x) in self.0.action.iter().zip(a) {
            out.add_scaled(x, m);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// The regular module Λ on the given side.
    pub fn regular(algebra: &Algebra, side: Side) -> Module {
        let label = format!("{}_{}", algebra.name(), side.as_str());
        Self::new_unchecked(
            algebra,
            side,
            algebra.dim(),
            algebra.regular_action(side).to_vec(),
            label,
        )
    }

    pub fn zero(algebra: &Algebra, side: Side) -> Module {
        Self::new_unchecked(
            algebra,
            side,
            0,
            vec![QMatrix::zeros(0, 0); algebra.dim()],
            "0",
        )
    }

    /// Linear dual with the opposite side; `m.dual().dual()` has identical data.
    pub fn dual(&self) -> Module {
        self.0
            .dual
            .get_or_init(|| {
                Self::new_unchecked(
                    self.algebra(),
                    self.side().opposite(),
                    self.dim(),
                    self.0.action.iter().map(QMatrix::transpose).collect(),
                    format!("D({})", self.label()),
                )
            })
            .clone()
    }

    /// Restriction to an invariant subspace spanned by the columns of `w` (full column rank).
    pub fn submodule(&self, w: &QMatrix, label: impl Into<String>) -> (Module, ModuleMap) {
        assert_eq!(w.rows(), self.dim());
        let linv = w.left_inverse().expect("subspace basis has full column rank");
        let action: Vec<QMatrix> = self
            .0
            .action
            .iter()
            .map(|a| linv.mul(&a.mul(w)))
            .collect();
        let sub = Self::new_unchecked(self.algebra(), self.side(), w.cols(), action, label);
        let incl = ModuleMap::new_unchecked(&sub, self, w.clone());
        debug_assert!(incl.is_valid(), "subspace is not invariant");
        (sub, incl)
    }

    /// Quotient by an invariant subspace spanned by the columns of `w`.
    pub fn quotient(&self, w: &QMatrix, label: impl Into<String>) -> (Module, ModuleMap) {
        let q = Quotient::new(w);
        let action: Vec<QMatrix> = self
            .0
            .action
            .iter()
            .map(|a| q.proj.mul(&a.mul(&q.section)))
            .collect();
        let quo = Self::new_unchecked(self.algebra(), self.side(), q.dim(), action, label);
        let proj = ModuleMap::new_unchecked(self, &quo, q.proj);
        debug_assert!(proj.is_valid(), "subspace is not invariant");
        (quo, proj)
    }

    /// Columns span rad(Λ)·M.
    pub fn radical_basis(&self) -> QMatrix {
        let rad = self.algebra().radical();
        let blocks: Vec<QMatrix> = rad.col_vecs().iter().map(|r| self.act(r)).collect();
        let refs: Vec<&QMatrix> = blocks.iter().collect();
        QMatrix::hstack(&refs, self.dim()).image()
    }

    /// Columns span the elements killed by rad(Λ).
    pub fn socle_basis(&self) -> QMatrix {
        let rad = self.algebra().radical();
        let blocks: Vec<QMatrix> = rad.col_vecs().iter().map(|r| self.act(r)).collect();
        let refs: Vec<&QMatrix> = blocks.iter().collect();
        QMatrix::vstack(&refs, self.dim()).kernel()
    }

    pub fn radical(&self) -> (Module, ModuleMap) {
        self.submodule(&self.radical_basis(), format!("rad({})", self.label()))
    }

    pub fn socle(&self) -> (Module, ModuleMap) {
        self.submodule(&self.socle_basis(), format!("soc({})", self.label()))
    }

    pub fn top(&self) -> (Module, ModuleMap) {
        self.quotient(&self.radical_basis(), format!("top({})", self.label()))
    }

    /// Columns span `a ∗ M`, i.e. the image of the action of `a`.
    pub fn corner_basis(&self, a: &[Q]) -> QMatrix {
        self.act(a).image()
    }
}

/// Direct sum with its injections and projections.
pub struct DirectSum {
    pub module: Module,
    pub injections: Vec<ModuleMap>,
    pub projections: Vec<ModuleMap>,
}

pub fn direct_sum(parts: &[Module], algebra: &Algebra, side: Side) -> DirectSum {
    for p in parts {
        assert!(p.algebra() == algebra && p.side() == side, "summands disagree");
    }
    let n: usize = parts.iter().map(Module::dim).sum();
    let action = (0..algebra.dim())
        .map(|i| {
            let blocks: Vec<&QMatrix> = parts.iter().map(|p| &p.action()[i]).collect();
            QMatrix::block_diag(&blocks)
        })
        .collect();
    let label = parts
        .iter()
        .map(|p| p.label().to_string())
        .collect::<Vec<_>>()
        .join("+");
    let module = Module::new_unchecked(algebra, side, n, action, label);
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    let mut off = 0;
    for p in parts {
        let mut inj = QMatrix::zeros(n, p.dim());
        inj.set_block(off, 0, &QMatrix::identity(p.dim()));
        projections.push(ModuleMap::new_unchecked(&module, p, inj.transpose()));
        injections.push(ModuleMap::new_unchecked(p, &module, inj));
        off += p.dim();
    }
    DirectSum {
        module,
        injections,
        projections,
    }
}

impl fmt::Debug for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Module({}, {} over {}, dim {})",
            self.label(),
            self.side().as_str(),
            self.algebra().name(),
            self.dim()
        )
    }
}

/// A homomorphism of modules, `matrix` is `cod.dim × dom.dim`.
#[derive(Clone)]
pub struct ModuleMap {
    pub dom: Module,
    pub cod: Module,
    pub matrix: QMatrix,
}

impl ModuleMap {
    pub fn new(dom: &Module, cod: &Module, matrix: QMatrix) -> Result<ModuleMap> {
        if dom.algebra() != cod.algebra() || dom.side() != cod.side() {
            return Err(Error::Mismatch(
                "domain and codomain have different algebra or side".into(),
            ));
        }
        if matrix.shape() != (cod.dim(), dom.dim()) {
            return Err(Error::InvalidMap(format!(
                "matrix shape {:?} does not match {}x{}",
                matrix.shape(),
                cod.dim(),
                dom.dim()
            )));
        }
        let f = Self::new_unchecked(dom, cod, matrix);
        if let Some(i) = f.first_violation() {
            return Err(Error::InvalidMap(format!(
                "matrix does not intertwine the action of basis element {i}"
            )));
        }
        Ok(f)
    }

    pub(crate) fn new_unchecked(dom: &Module, cod: &Module, matrix: QMatrix) -> ModuleMap {
        debug_assert_eq!(matrix.shape(), (cod.dim(), dom.dim()));
        ModuleMap {
            dom: dom.clone(),
            cod: cod.clone(),
            matrix,
        }
    }

    fn first_violation(&self) -> Option<usize> {
        (0..self.dom.algebra().dim()).find(|&i| {
            self.matrix.mul(&self.dom.action()[i]) != self.cod.action()[i].mul(&self.matrix)
        })
    }

    pub fn is_valid(&self) -> bool {
        self.first_violation().is_none()
    }

    pub fn identity(m: &Module) -> ModuleMap {
        Self::new_unchecked(m, m, QMatrix::identity(m.dim()))
    }

    pub fn zero(dom: &Module, cod: &Module) -> ModuleMap {
        Self::new_unchecked(dom, cod, QMatrix::zeros(cod.dim(), dom.dim()))
    }

    /// `self ∘ g`
    pub fn after(&self, g: &ModuleMap) -> ModuleMap {
        debug_assert!(g.cod.same(&self.dom), "maps are not composable");
        Self::new_unchecked(&g.dom, &self.cod, self.matrix.mul(&g.matrix))
    }

    /// `g ∘ self`
    pub fn then(&self, g: &ModuleMap) -> ModuleMap {
        g.after(self)
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_mono(&self) -> bool {
        self.rank() == self.dom.dim()
    }

    pub fn is_epi(&self) -> bool {
        self.rank() == self.cod.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// `D(f): D(cod) → D(dom)`.
    pub fn dual(&self) -> ModuleMap {
        Self::new_unchecked(&self.cod.dual(), &self.dom.dual(), self.matrix.transpose())
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        Self::new_unchecked(&self.dom, &self.cod, self.matrix.add(&other.matrix))
    }

    pub fn scale(&self, c: &Q) -> ModuleMap {
        Self::new_unchecked(&self.dom, &self.cod, self.matrix.scale(c))
    }

    /// Same matrix, with domain and codomain replaced by structurally equal modules.
    pub fn retarget(&self, dom: &Module, cod: &Module) -> ModuleMap {
        debug_assert!(dom.same(&self.dom) && cod.same(&self.cod));
        Self::new_unchecked(dom, cod, self.matrix.clone())
    }

    pub fn factorize(&self) -> Factorization {
        map_factorization(self)
    }
}

impl fmt::Debug for ModuleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ModuleMap({} -> {}, {:?})",
            self.dom.label(),
            self.cod.label(),
            self.matrix
        )
    }
}

/// Kernel, epi-mono factorization through the image, and cokernel of a map.
pub struct Factorization {
    pub kernel: Module,
    pub kernel_incl: ModuleMap,
    pub image: Module,
    /// epimorphism onto the image
    pub p: ModuleMap,
    /// inclusion of the image
    pub i: ModuleMap,
    pub cokernel: Module,
    pub coker_proj: ModuleMap,
}

pub fn map_factorization(f: &ModuleMap) -> Factorization {
    let (kernel, kernel_incl) = f
        .dom
        .submodule(&f.matrix.kernel(), format!("ker({})", f.dom.label()));
    let im_basis = f.matrix.image();
    let (image, i) = f.cod.submodule(&im_basis, "im");
    let linv = im_basis.left_inverse().expect("image basis is independent");
    let p = ModuleMap::new_unchecked(&f.dom, &image, linv.mul(&f.matrix));
    let (cokernel, coker_proj) = f
        .cod
        .quotient(&im_basis, format!("coker({})", f.cod.label()));
    Factorization {
        kernel,
        kernel_incl,
        image,
        p,
        i,
        cokernel,
        coker_proj,
    }
}

/// Basis of Hom(M, N) by solving the intertwining equations directly.
///
/// Quadratic in `dim M · dim N`; used for small modules and as an independent check.
pub fn hom_space_naive(m: &Module, n: &Module) -> Result<Vec<ModuleMap>> {
    if m.algebra() != n.algebra() || m.side() != n.side() {
        return Err(Error::Mismatch("Hom arguments disagree on algebra or side".into()));
    }
    let (p, q) = (m.dim(), n.dim());
    let d = m.algebra().dim();
    // unknown X (q×p) row-major; equation X·A_i − B_i·X = 0
    let mut eqs = QMatrix::zeros(d * q * p, q * p);
    for i in 0..d {
        let a = &m.action()[i];
        let b = &n.action()[i];
        for r in 0..q {
            for c in 0..p {
                let row = (i * q + r) * p + c;
                for k in 0..p {
                    if !a[(k, c)].is_zero() {
                        eqs[(row, r * p + k)] += &a[(k, c)];
                    }
                }
                for k in 0..q {
                    if !b[(r, k)].is_zero() {
                        eqs[(row, k * p + c)] -= &b[(r, k)];
                    }
                }
            }
        }
    }
    let ker = eqs.kernel();
    Ok(ker
        .col_vecs()
        .into_iter()
        .map(|v| ModuleMap::new_unchecked(m, n, QMatrix::from_vec(q, p, v)))
        .collect())
}

/// Module presets by name.
pub mod presets {
    use super::*;

    pub fn regular(a: &Algebra, side: Side) -> Module {
        Module::regular(a, side)
    }

    /// Λ / rad Λ.
    pub fn simple_top(a: &Algebra, side: Side) -> Module {
        Module::regular(a, side)
            .quotient(a.radical(), format!("top({})", a.name()))
            .0
    }

    /// radʲ Λ / radʲ⁺¹ Λ.
    pub fn radical_layer(a: &Algebra, side: Side, j: usize) -> Module {
        let reg = Module::regular(a, side);
        let rj = a.radical_power(j);
        let rj1 = a.radical_power(j + 1);
        let (sub, _) = reg.submodule(&rj, "rad^j");
        let lin = rj.left_inverse().expect("independent basis");
        let w = lin.mul(&rj1);
        sub.quotient(&w, format!("layer{j}({})", a.name())).0
    }

    /// D(Λ) where Λ is regular on the opposite side, so the result lives on `side`.
    pub fn dual_regular(a: &Algebra, side: Side) -> Module {
        Module::regular(a, side.opposite()).dual()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::presets::*;

    #[test]
    fn simple_of_dual_numbers() {
        let a = truncated_polynomial(2);
        let k = presets::simple_top(&a, Side::Left);
        assert_eq!(k.dim(), 1);
        let lam = Module::regular(&a, Side::Left);
        assert_eq!(hom_space_naive(&k, &k).unwrap().len(), 1);
        assert_eq!(hom_space_naive(&k, &lam).unwrap().len(), 1);
        assert_eq!(hom_space_naive(&lam, &lam).unwrap().len(), 2);
    }

    #[test]
    fn multiplication_by_x() {
        let a = truncated_polynomial(2);
        let lam = Module::regular(&a, Side::Left);
        let x = ModuleMap::new(&lam, &lam, a.rmul()[1].clone()).unwrap();
        let f = x.factorize();
        assert_eq!((f.kernel.dim(), f.image.dim(), f.cokernel.dim()), (1, 1, 1));
        assert_eq!(f.i.after(&f.p).matrix, x.matrix);
        assert!(f.coker_proj.after(&x).is_zero());
        assert!(x.after(&f.kernel_incl).is_zero());
    }

    #[test]
    fn radical_and_socle() {
        let a = truncated_polynomial(3);
        let lam = Module::regular(&a, Side::Left);
        assert_eq!(lam.radical_basis().cols(), 2);
        assert_eq!(lam.socle_basis().cols(), 1);
        let b = truncated_polynomial(2);
        let l2 = Module::regular(&b, Side::Right);
        assert!(l2.radical_basis().same_span(&l2.socle_basis()));
    }

    #[test]
    fn dual_round_trip() {
        let a = upper_triangular_2();
        let m = Module::regular(&a, Side::Right);
        let dd = m.dual().dual();
        assert!(dd.same(&m));
        assert_eq!(m.dual().side(), Side::Left);
        assert!(Module::new(&a, Side::Left, 3, m.dual().action().to_vec(), "D").is_ok());
    }

    #[test]
    fn invalid_map_rejected() {
        let a = truncated_polynomial(2);
        let lam = Module::regular(&a, Side::Left);
        let bad = QMatrix::from_i64(&[&[1, 0], &[0, 0]]);
        assert!(ModuleMap::new(&lam, &lam, bad).is_err());
    }

    #[test]
    fn layers() {
        let a = truncated_polynomial(3);
        for j in 0..3 {
            assert_eq!(presets::radical_layer(&a, Side::Left, j).dim(), 1);
        }
        assert_eq!(presets::radical_layer(&a, Side::Left, 3).dim(), 0);
    }
}
