//! Projective modules as sums of `Λ∗e`, projective covers, injective envelopes and liftings.

use std::sync::Arc;

use crate::algebra::{Algebra, Side};
use crate::module::{Module, ModuleMap};
use crate::linalg::QMatrix;
use crate::rational::Q;

/// Minimal covers/envelopes built from primitive idempotents, or free non-minimal ones:
/// one copy of Λ per minimal generator plus a redundant copy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Minimal,
    Free,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Minimal => "minimal",
            Mode::Free => "free",
        }
    }
}

/// One summand `Λ∗e` of a projective, embedded in Λ by `basis`.
#[derive(Clone, Debug)]
pub struct Summand {
    pub idem: Vec<Q>,
    /// `d × m`, columns are elements of Λ
    pub basis: QMatrix,
    /// `m × d`, left inverse of `basis`
    pub linv: QMatrix,
    pub offset: usize,
}

impl Summand {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }
}

/// A direct sum of modules `Λ∗e_k` with a chosen generator `e_k` in each summand.
#[derive(Clone)]
pub struct Projective {
    pub module: Module,
    pub summands: Arc<Vec<Summand>>,
}

impl Projective {
    pub fn new(algebra: &Algebra, side: Side, idems: &[Vec<Q>]) -> Projective {
        let regular = algebra.regular_action(side);
        let d = algebra.dim();
        let mut summands: Vec<Summand> = Vec::with_capacity(idems.len());
        let mut blocks: Vec<Vec<QMatrix>> = Vec::with_capacity(idems.len());
        let mut offset = 0;
        for e in idems {
            debug_assert!(algebra.is_idempotent(e), "generator is not idempotent");
            let cached = summands.iter().position(|s| &s.idem == e);
            let (basis, linv, action) = match cached {
                Some(p) => (
                    summands[p].basis.clone(),
                    summands[p].linv.clone(),
                    blocks[p].clone(),
                ),
                None => {
                    let basis = algebra.eff_right_mul(side, e).image();
                    let linv = basis.left_inverse().expect("independent basis");
                    let action: Vec<QMatrix> = (0..d)
                        .map(|i| linv.mul(&regular[i].mul(&basis)))
                        .collect();
                    (basis, linv, action)
                }
            };
            let m = basis.cols();
            summands.push(Summand {
                idem: e.clone(),
                basis,
                linv,
                offset,
            });
            blocks.push(action);
            offset += m;
        }
        let action = (0..d)
            .map(|i| {
                let bs: Vec<&QMatrix> = blocks.iter().map(|b| &b[i]).collect();
                QMatrix::block_diag(&bs)
            })
            .collect();
        let module = Module::new_unchecked(algebra, side, offset, action, format!("P{}", idems.len()));
        Projective {
            module,
            summands: Arc::new(summands),
        }
    }

    pub fn algebra(&self) -> &Algebra {
        self.module.algebra()
    }

    pub fn side(&self) -> Side {
        self.module.side()
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn idems(&self) -> Vec<Vec<Q>> {
        self.summands.iter().map(|s| s.idem.clone()).collect()
    }

    /// The same summands on the opposite side: `Hom(P, Λ)`.
    pub fn dual_projective(&self) -> Projective {
        Projective::new(self.algebra(), self.side().opposite(), &self.idems())
    }

    /// Coordinates of the generator of summand `k`.
    pub fn generator(&self, k: usize) -> Vec<Q> {
        let s = &self.summands[k];
        let mut v = vec![Q::zero(); self.dim()];
        for (i, x) in s.linv.mul_vec(&s.idem).into_iter().enumerate() {
            v[s.offset + i] = x;
        }
        v
    }

    /// Coordinates of the element of summand `k` given as an algebra element.
    pub fn place(&self, k: usize, a: &[Q]) -> Vec<Q> {
        let s = &self.summands[k];
        let mut v = vec![Q::zero(); self.dim()];
        for (i, x) in s.linv.mul_vec(a).into_iter().enumerate() {
            v[s.offset + i] = x;
        }
        v
    }

    /// Component of `v` in summand `k`, as an element of Λ.
    pub fn component(&self, k: usize, v: &[Q]) -> Vec<Q> {
        let s = &self.summands[k];
        s.basis.mul_vec(&v[s.offset..s.offset + s.dim()])
    }

    /// The map sending the generator of summand `k` to `ys[k]`; each `ys[k]` must lie in `e_k ∗ N`.
    pub fn map_from_generators(&self, n: &Module, ys: &[Vec<Q>]) -> ModuleMap {
        assert_eq!(ys.len(), self.len(), "one image per summand");
        let mut m = QMatrix::zeros(n.dim(), self.dim());
        for (s, y) in self.summands.iter().zip(ys) {
            debug_assert_eq!(&n.act(&s.idem).mul_vec(y), y, "image not in e∗N");
            for l in 0..s.dim() {
                let col = n.act(&s.basis.col(l)).mul_vec(y);
                for (i, x) in col.into_iter().enumerate() {
                    m[(i, s.offset + l)] = x;
                }
            }
        }
        ModuleMap::new_unchecked(&self.module, n, m)
    }

    /// `a[s][t]`: component in summand `t` of `target` of the image of generator `s`.
    pub fn coefficients(&self, target: &Projective, g: &ModuleMap) -> Vec<Vec<Vec<Q>>> {
        (0..self.len())
            .map(|s| {
                let img = g.matrix.mul_vec(&self.generator(s));
                (0..target.len()).map(|t| target.component(t, &img)).collect()
            })
            .collect()
    }

    /// φ: P → N' with `beta ∘ φ = psi`, when `psi` lands in the image of `beta`.
    pub fn lift(&self, psi: &ModuleMap, beta: &ModuleMap) -> Option<ModuleMap> {
        let n1 = &beta.dom;
        let mut ys = Vec::with_capacity(self.len());
        for (k, s) in self.summands.iter().enumerate() {
            let w = psi.matrix.mul_vec(&self.generator(k));
            let e = n1.act(&s.idem);
            let z = beta.matrix.mul(&e).solve(&w)?;
            ys.push(e.mul_vec(&z));
        }
        Some(self.map_from_generators(n1, &ys))
    }
}

/// Projective cover `π: P ↠ M`.
pub fn projective_cover(m: &Module, mode: Mode) -> (Projective, ModuleMap) {
    let a = m.algebra();
    let (idems, ys): (Vec<Vec<Q>>, Vec<Vec<Q>>) = match mode {
        Mode::Free => {
            // a copy of Λ per minimal generator plus one redundant copy
            let (_, mut ys) = minimal_generators(m);
            if let Some(y) = ys.first().cloned() {
                ys.push(y);
            }
            (vec![a.unit().to_vec(); ys.len()], ys)
        }
        Mode::Minimal => minimal_generators(m),
    };
    let p = Projective::new(a, m.side(), &idems);
    let pi = p.map_from_generators(m, &ys);
    debug_assert!(pi.is_epi(), "cover is not surjective");
    (p, pi)
}

/// Greedy choice of generators modulo the radical, one idempotent at a time.
fn minimal_generators(m: &Module) -> (Vec<Vec<Q>>, Vec<Vec<Q>>) {
    let a = m.algebra();
    let n = m.dim();
    let mut span = m.radical_basis();
    let mut idems = Vec::new();
    let mut ys = Vec::new();
    'outer: for e in a.primitive_idempotents() {
        let basis = a.eff_right_mul(m.side(), e).image();
        for y in m.corner_basis(e).col_vecs() {
            if span.cols() == n {
                break 'outer;
            }
            if span.spans(&QMatrix::column(&y)) {
                continue;
            }
            let generated: Vec<Vec<Q>> = basis
                .col_vecs()
                .iter()
                .map(|b| m.act(b).mul_vec(&y))
                .collect();
            let gen = QMatrix::from_cols(n, &generated);
            span = QMatrix::hstack(&[&span, &gen], n).image();
            idems.push(e.clone());
            ys.push(y);
        }
    }
    (idems, ys)
}

/// An injective module `D(P)` for a projective `P` on the opposite side.
#[derive(Clone)]
pub struct Injective {
    pub module: Module,
    pub dual_proj: Projective,
}

impl Injective {
    pub fn from_projective(p: &Projective) -> Injective {
        Injective {
            module: p.module.dual(),
            dual_proj: p.clone(),
        }
    }

    /// φ: M' → I with `φ ∘ alpha = psi`, for a monomorphism `alpha: M → M'`.
    pub fn colift(&self, psi: &ModuleMap, alpha: &ModuleMap) -> Option<ModuleMap> {
        let psi_d = ModuleMap::new_unchecked(
            &self.dual_proj.module,
            &psi.dom.dual(),
            psi.matrix.transpose(),
        );
        let chi = self.dual_proj.lift(&psi_d, &alpha.dual())?;
        Some(ModuleMap::new_unchecked(
            &alpha.cod,
            &self.module,
            chi.matrix.transpose(),
        ))
    }
}

/// Injective envelope `ι: M ↪ I`, the dual of a projective cover of `D(M)`.
pub fn injective_envelope(m: &Module, mode: Mode) -> (Injective, ModuleMap) {
    let (p, pi) = projective_cover(&m.dual(), mode);
    let inj = Injective::from_projective(&p);
    let iota = ModuleMap::new_unchecked(m, &inj.module, pi.matrix.transpose());
    (inj, iota)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::presets::*;
    use crate::module::presets::simple_top;

    #[test]
    fn cover_of_simple_is_regular() {
        let a = truncated_polynomial(2);
        let k = simple_top(&a, Side::Left);
        let (p, pi) = projective_cover(&k, Mode::Minimal);
        assert_eq!(p.dim(), 2);
        assert!(pi.is_epi() && pi.is_valid());
        let (pf, pif) = projective_cover(&k, Mode::Free);
        assert_eq!(pf.dim(), 4);
        assert!(pif.is_epi() && pif.is_valid());
    }

    #[test]
    fn cover_of_regular_is_identity_sized() {
        let a = upper_triangular_2();
        for side in [Side::Left, Side::Right] {
            let m = Module::regular(&a, side);
            let (p, pi) = projective_cover(&m, Mode::Minimal);
            assert_eq!(p.dim(), 3);
            assert!(pi.is_epi() && pi.is_mono() && pi.is_valid());
            assert_eq!(p.len(), 2);
        }
    }

    #[test]
    fn envelope_of_simple_is_socle_embedding() {
        let a = truncated_polynomial(2);
        let k = simple_top(&a, Side::Left);
        let (inj, iota) = injective_envelope(&k, Mode::Minimal);
        assert_eq!(inj.module.dim(), 2);
        assert!(iota.is_mono() && iota.is_valid());
        // image is the socle
        assert!(inj.module.socle_basis().same_span(&iota.matrix));
    }

    #[test]
    fn envelope_of_truncated_quotient() {
        let a = truncated_polynomial(3);
        let lam = Module::regular(&a, Side::Left);
        let (b, _) = lam.quotient(&a.radical_power(2), "Q[x]/(x^2)");
        let (inj, iota) = injective_envelope(&b, Mode::Minimal);
        assert_eq!(inj.module.dim(), 3);
        assert!(iota.is_mono() && iota.is_valid());
    }

    #[test]
    fn lifting_and_colifting() {
        let a = truncated_polynomial(3);
        let lam = Module::regular(&a, Side::Left);
        let k = simple_top(&a, Side::Left);
        let (p, pi) = projective_cover(&k, Mode::Minimal);
        // lift π along itself: identity-like
        let phi = p.lift(&pi, &pi).unwrap();
        assert_eq!(pi.after(&phi).matrix, pi.matrix);
        let (inj, iota) = injective_envelope(&k, Mode::Minimal);
        let (_, soc_incl) = lam.socle();
        let iso = ModuleMap::new(&k, &soc_incl.dom, QMatrix::identity(1)).unwrap();
        let alpha = soc_incl.after(&iso);
        let ext = inj.colift(&iota, &alpha).unwrap();
        assert!(ext.is_valid());
        assert_eq!(ext.after(&alpha).matrix, iota.matrix);
    }
}
