//! Hom, tensor, Ext and Tor computed from projective presentations, and stable Hom.
//!
//! For a projective `P = ⊕ Λ∗e_k`, both `Hom(P, X)` and `P ⊗ X` are `⊕ e_k X`;
//! a map between projectives with coefficients `a_st` acts on these by the blocks
//! `act_X(a_st)`. Everything below is built on that observation.

use crate::error::{Error, Result};
use crate::linalg::{QMatrix, Quotient, Subquotient};
use crate::module::{Module, ModuleMap};
use crate::projective::{Mode, Projective};
use crate::rational::Q;
use crate::resolution::{
    cosyzygy, lift_projective, resolve_projective, syzygy, ProjectiveResolution,
};

/// Bases of the corner spaces `e_k X` for the summands of a projective.
#[derive(Clone, Debug)]
pub struct Corners {
    pub bases: Vec<QMatrix>,
    pub linvs: Vec<QMatrix>,
    pub offsets: Vec<usize>,
    pub total: usize,
}

pub fn corners(x: &Module, p: &Projective) -> Corners {
    let mut bases: Vec<QMatrix> = Vec::with_capacity(p.len());
    let mut linvs: Vec<QMatrix> = Vec::with_capacity(p.len());
    let mut offsets = Vec::with_capacity(p.len());
    let mut total = 0;
    for (k, s) in p.summands.iter().enumerate() {
        let prev = p.summands[..k].iter().position(|t| t.idem == s.idem);
        let (b, l) = match prev {
            Some(j) => (bases[j].clone(), linvs[j].clone()),
            None => {
                let b = x.corner_basis(&s.idem);
                let l = b.left_inverse().expect("independent basis");
                (b, l)
            }
        };
        offsets.push(total);
        total += b.cols();
        bases.push(b);
        linvs.push(l);
    }
    Corners {
        bases,
        linvs,
        offsets,
        total,
    }
}

/// `⊕_s e_s X → ⊕_t e_t X` induced on `P' ⊗ X → P ⊗ X`.
pub fn tensor_matrix(coeffs: &[Vec<Vec<Q>>], src: &Corners, tgt: &Corners, x: &Module) -> QMatrix {
    let mut m = QMatrix::zeros(tgt.total, src.total);
    for (s, row) in coeffs.iter().enumerate() {
        for (t, a) in row.iter().enumerate() {
            if a.iter().all(Q::is_zero) || src.bases[s].cols() == 0 || tgt.bases[t].cols() == 0 {
                continue;
            }
            let blk = tgt.linvs[t].mul(&x.act(a).mul(&src.bases[s]));
            m.set_block(tgt.offsets[t], src.offsets[s], &blk);
        }
    }
    m
}

/// `⊕_t e_t X → ⊕_s e_s X` induced on `Hom(P, X) → Hom(P', X)`.
pub fn hom_matrix(coeffs: &[Vec<Vec<Q>>], src: &Corners, tgt: &Corners, x: &Module) -> QMatrix {
    let mut m = QMatrix::zeros(src.total, tgt.total);
    for (s, row) in coeffs.iter().enumerate() {
        for (t, a) in row.iter().enumerate() {
            if a.iter().all(Q::is_zero) || src.bases[s].cols() == 0 || tgt.bases[t].cols() == 0 {
                continue;
            }
            let blk = src.linvs[s].mul(&x.act(a).mul(&tgt.bases[t]));
            m.set_block(src.offsets[s], tgt.offsets[t], &blk);
        }
    }
    m
}

/// Block diagonal restriction of `g: X → Y` to `⊕ e_k X → ⊕ e_k Y`.
pub fn corner_map(g: &ModuleMap, src: &Corners, tgt: &Corners) -> QMatrix {
    let mut m = QMatrix::zeros(tgt.total, src.total);
    for k in 0..src.bases.len() {
        if src.bases[k].cols() == 0 || tgt.bases[k].cols() == 0 {
            continue;
        }
        let blk = tgt.linvs[k].mul(&g.matrix.mul(&src.bases[k]));
        m.set_block(tgt.offsets[k], src.offsets[k], &blk);
    }
    m
}

fn check_tensor_args(a: &Module, x: &Module) -> Result<()> {
    if a.algebra() != x.algebra() {
        return Err(Error::Mismatch("tensor arguments over different algebras".into()));
    }
    if a.side() == x.side() {
        return Err(Error::Mismatch("tensor arguments must have opposite sides".into()));
    }
    Ok(())
}

fn check_hom_args(m: &Module, n: &Module) -> Result<()> {
    if m.algebra() != n.algebra() || m.side() != n.side() {
        return Err(Error::Mismatch("Hom arguments disagree on algebra or side".into()));
    }
    Ok(())
}

/// `Tor_n(A, X)` as the homology of `P_•(A) ⊗ X`.
#[derive(Clone)]
pub struct Tor {
    pub a: Module,
    pub x: Module,
    pub n: usize,
    pub res: ProjectiveResolution,
    /// corners of `P_i(A)` in X, for `i ≤ n + 1`
    pub corners: Vec<Corners>,
    /// `d[i]: C_i → C_{i-1}` for `1 ≤ i ≤ n + 1`; `d[0]` is the zero map out of `C_0`
    pub d: Vec<QMatrix>,
    pub sq: Subquotient,
}

pub fn tor(a: &Module, x: &Module, n: usize, mode: Mode) -> Result<Tor> {
    check_tensor_args(a, x)?;
    let res = resolve_projective(a, n + 2, mode);
    let corners: Vec<Corners> = (0..=n + 1).map(|i| corners(x, res.p(i))).collect();
    let mut d = vec![QMatrix::zeros(0, corners[0].total)];
    for i in 1..=n + 1 {
        let coeffs = res.p(i).coefficients(res.p(i - 1), &res.d(i));
        d.push(tensor_matrix(&coeffs, &corners[i], &corners[i - 1], x));
    }
    let sq = Subquotient::homology(&d[n + 1], &d[n]);
    Ok(Tor {
        a: a.clone(),
        x: x.clone(),
        n,
        res,
        corners,
        d,
        sq,
    })
}

/// `A ⊗_Λ X`, which is `Tor_0`.
pub fn tensor(a: &Module, x: &Module, mode: Mode) -> Result<Tor> {
    tor(a, x, 0, mode)
}

impl Tor {
    pub fn dim(&self) -> usize {
        self.sq.dim()
    }

    /// Chain-level map `C_n(X) → C_n(Y)` for `g: X → Y`.
    pub fn chain_map_x(&self, g: &ModuleMap, target: &Tor) -> QMatrix {
        corner_map(g, &self.corners[self.n], &target.corners[self.n])
    }

    /// `Tor_n(A, g)` in the committed bases.
    pub fn map_x(&self, g: &ModuleMap, target: &Tor) -> QMatrix {
        self.sq.induced(&self.chain_map_x(g, target), &target.sq)
    }

    /// `Tor_n(f, X)` for `f: A → A'`.
    pub fn map_a(&self, f: &ModuleMap, target: &Tor) -> Result<QMatrix> {
        let n = self.n;
        let chain = lift_projective(f, &self.res, &target.res, n + 1)?;
        let coeffs = self.res.p(n).coefficients(target.res.p(n), &chain.terms[n]);
        let t = tensor_matrix(&coeffs, &self.corners[n], &target.corners[n], &self.x);
        Ok(self.sq.induced(&t, &target.sq))
    }

    /// The class in `A ⊗ X` of `a ⊗ x` (only for `n = 0`).
    pub fn elementary(&self, a: &[Q], x: &[Q]) -> Vec<Q> {
        assert_eq!(self.n, 0);
        let pi = self.res.pi(0);
        let s = pi
            .matrix
            .solve(a)
            .expect("augmentation is surjective");
        let p0 = self.res.p(0);
        let c = &self.corners[0];
        let mut v = vec![Q::zero(); c.total];
        for k in 0..p0.len() {
            let b = p0.component(k, &s);
            let y = self.x.act(&b).mul_vec(x);
            let coords = c.linvs[k].mul_vec(&y);
            for (i, z) in coords.into_iter().enumerate() {
                v[c.offsets[k] + i] = z;
            }
        }
        self.sq.coords(&QMatrix::column(&v)).col(0)
    }
}

/// `Extⁿ(M, X)` as the cohomology of `Hom(P_•(M), X)`.
#[derive(Clone)]
pub struct Ext {
    pub m: Module,
    pub x: Module,
    pub n: usize,
    pub res: ProjectiveResolution,
    /// corners of `P_i(M)` in X, for `i ≤ n + 1`
    pub corners: Vec<Corners>,
    /// `delta[i]: Cⁱ → Cⁱ⁺¹` for `i ≤ n`
    pub delta: Vec<QMatrix>,
    pub sq: Subquotient,
}

pub fn ext(m: &Module, x: &Module, n: usize, mode: Mode) -> Result<Ext> {
    check_hom_args(m, x)?;
    let res = resolve_projective(m, n + 2, mode);
    let corners: Vec<Corners> = (0..=n + 1).map(|i| corners(x, res.p(i))).collect();
    let delta: Vec<QMatrix> = (0..=n)
        .map(|i| {
            let coeffs = res.p(i + 1).coefficients(res.p(i), &res.d(i + 1));
            hom_matrix(&coeffs, &corners[i + 1], &corners[i], x)
        })
        .collect();
    let inc = if n == 0 {
        QMatrix::zeros(corners[0].total, 0)
    } else {
        delta[n - 1].clone()
    };
    let sq = Subquotient::homology(&inc, &delta[n]);
    Ok(Ext {
        m: m.clone(),
        x: x.clone(),
        n,
        res,
        corners,
        delta,
        sq,
    })
}

impl Ext {
    pub fn dim(&self) -> usize {
        self.sq.dim()
    }

    /// `Extⁿ(M, g)` for `g: X → Y`.
    pub fn map_x(&self, g: &ModuleMap, target: &Ext) -> QMatrix {
        let c = corner_map(g, &self.corners[self.n], &target.corners[self.n]);
        self.sq.induced(&c, &target.sq)
    }

    /// `Extⁿ(f, X)` for `f: M' → M`, into `target = Extⁿ(M', X)`.
    pub fn map_m(&self, f: &ModuleMap, target: &Ext) -> Result<QMatrix> {
        let n = self.n;
        let chain = lift_projective(f, &target.res, &self.res, n + 1)?;
        let coeffs = target.res.p(n).coefficients(self.res.p(n), &chain.terms[n]);
        let h = hom_matrix(&coeffs, &target.corners[n], &self.corners[n], &self.x);
        Ok(self.sq.induced(&h, &target.sq))
    }
}

/// `Hom_Λ(M, N)` with a committed basis of module maps.
#[derive(Clone)]
pub struct HomSpace {
    pub ext: Ext,
    section: QMatrix,
}

pub fn hom_space(m: &Module, n: &Module) -> Result<HomSpace> {
    hom_space_mode(m, n, Mode::Minimal)
}

pub fn hom_space_mode(m: &Module, n: &Module, mode: Mode) -> Result<HomSpace> {
    let ext = ext(m, n, 0, mode)?;
    let pi = ext.res.pi(0);
    let section = pi
        .matrix
        .solve_many(&QMatrix::identity(m.dim()))
        .expect("augmentation is surjective");
    Ok(HomSpace { ext, section })
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.ext.dim()
    }

    pub fn dom(&self) -> &Module {
        &self.ext.m
    }

    pub fn cod(&self) -> &Module {
        &self.ext.x
    }

    /// The map with the given coordinates.
    pub fn map(&self, c: &[Q]) -> ModuleMap {
        let z = self.ext.sq.lift(c);
        let p0 = self.ext.res.p(0);
        let cs = &self.ext.corners[0];
        let ys: Vec<Vec<Q>> = (0..p0.len())
            .map(|k| {
                let blk = &z[cs.offsets[k]..cs.offsets[k] + cs.bases[k].cols()];
                cs.bases[k].mul_vec(blk)
            })
            .collect();
        let phi = p0.map_from_generators(self.cod(), &ys);
        ModuleMap::new_unchecked(self.dom(), self.cod(), phi.matrix.mul(&self.section))
    }

    pub fn basis(&self) -> Vec<ModuleMap> {
        (0..self.dim())
            .map(|i| {
                let mut c = vec![Q::zero(); self.dim()];
                c[i] = Q::one();
                self.map(&c)
            })
            .collect()
    }

    /// Coordinates of a module map `M → N`.
    pub fn coords(&self, g: &ModuleMap) -> Vec<Q> {
        let p0 = self.ext.res.p(0);
        let pi = self.ext.res.pi(0);
        let cs = &self.ext.corners[0];
        let mut z = vec![Q::zero(); cs.total];
        for k in 0..p0.len() {
            let y = g.matrix.mul_vec(&pi.matrix.mul_vec(&p0.generator(k)));
            for (i, v) in cs.linvs[k].mul_vec(&y).into_iter().enumerate() {
                z[cs.offsets[k] + i] = v;
            }
        }
        self.ext.sq.coords(&QMatrix::column(&z)).col(0)
    }
}

/// Which ideal of maps is divided out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StableMode {
    ModInjectives,
    ModProjectives,
}

/// `Hom(B, C)` modulo maps factoring through injectives or projectives.
pub struct StableHom {
    pub hom: HomSpace,
    /// Columns: coordinates in `hom` spanning the ideal.
    pub ideal: QMatrix,
    pub quotient: Quotient,
}

impl StableHom {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }
}

pub fn stable_hom(b: &Module, c: &Module, stable: StableMode, mode: Mode) -> Result<StableHom> {
    let hom = hom_space(b, c)?;
    let cols: Vec<Vec<Q>> = match stable {
        StableMode::ModInjectives => {
            // every map into an injective extends along the envelope of B
            let (inj, iota, _, _) = cosyzygy(b, mode);
            let h = hom_space(&inj.module, c)?;
            h.basis()
                .iter()
                .map(|g| hom.coords(&g.after(&iota)))
                .collect()
        }
        StableMode::ModProjectives => {
            // every map out of a projective lifts along the cover of C
            let (p, pi, _, _) = syzygy(c, mode);
            let h = hom_space(b, &p.module)?;
            h.basis()
                .iter()
                .map(|g| hom.coords(&pi.after(g)))
                .collect()
        }
    };
    let ideal = QMatrix::from_cols(hom.dim(), &cols);
    let quotient = Quotient::new(&ideal);
    Ok(StableHom {
        hom,
        ideal,
        quotient,
    })
}

/// `A ⊗_ℚ X` modulo the balancing relations for each algebra basis element.
pub struct TensorDef {
    pub a: Module,
    pub x: Module,
    pub quotient: Quotient,
}

pub fn tensor_definitional(a: &Module, x: &Module) -> Result<TensorDef> {
    check_tensor_args(a, x)?;
    let ia = QMatrix::identity(a.dim());
    let ix = QMatrix::identity(x.dim());
    let rels: Vec<QMatrix> = (0..a.algebra().dim())
        .map(|i| a.action()[i].kron(&ix).sub(&ia.kron(&x.action()[i])))
        .collect();
    let refs: Vec<&QMatrix> = rels.iter().collect();
    let span = QMatrix::hstack(&refs, a.dim() * x.dim());
    Ok(TensorDef {
        a: a.clone(),
        x: x.clone(),
        quotient: Quotient::new(&span),
    })
}

impl TensorDef {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn elementary(&self, a: &[Q], x: &[Q]) -> Vec<Q> {
        let v = QMatrix::column(a).kron(&QMatrix::column(x));
        self.quotient.proj.mul_vec(&v.col(0))
    }

    /// The canonical isomorphism from the presentation coordinates of `t` (a `Tor_0`).
    pub fn from_presentation(&self, t: &Tor) -> QMatrix {
        assert_eq!(t.n, 0);
        let p0 = t.res.p(0);
        let pi = t.res.pi(0);
        let c = &t.corners[0];
        let mut g = QMatrix::zeros(self.dim(), c.total);
        for k in 0..p0.len() {
            let ak = pi.matrix.mul_vec(&p0.generator(k));
            for l in 0..c.bases[k].cols() {
                let col = self.elementary(&ak, &c.bases[k].col(l));
                for (i, v) in col.into_iter().enumerate() {
                    g[(i, c.offsets[k] + l)] = v;
                }
            }
        }
        g.mul(&t.sq.lifts())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::presets::*;
    use crate::algebra::Side;
    use crate::module::hom_space_naive;
    use crate::module::presets::simple_top;

    #[test]
    fn tensor_dimensions() {
        let a = truncated_polynomial(2);
        let kr = simple_top(&a, Side::Right);
        let kl = simple_top(&a, Side::Left);
        let lam = Module::regular(&a, Side::Left);
        assert_eq!(tensor(&kr, &kl, Mode::Minimal).unwrap().dim(), 1);
        assert_eq!(tensor(&kr, &lam, Mode::Minimal).unwrap().dim(), 1);
        let lr = Module::regular(&a, Side::Right);
        assert_eq!(tensor(&lr, &lam, Mode::Free).unwrap().dim(), 2);
        assert_eq!(tensor_definitional(&kr, &kl).unwrap().dim(), 1);
    }

    #[test]
    fn one_tensor_iota_is_zero() {
        let a = truncated_polynomial(2);
        let kr = simple_top(&a, Side::Right);
        let kl = simple_top(&a, Side::Left);
        let (inj, iota, _, _) = cosyzygy(&kl, Mode::Minimal);
        let t1 = tensor(&kr, &kl, Mode::Minimal).unwrap();
        let t2 = tensor(&kr, &inj.module, Mode::Minimal).unwrap();
        assert_eq!(t2.dim(), 1);
        assert!(t1.map_x(&iota, &t2).is_zero());
    }

    #[test]
    fn ext_and_tor_of_simples() {
        let a = truncated_polynomial(2);
        let kr = simple_top(&a, Side::Right);
        let kl = simple_top(&a, Side::Left);
        for n in 0..4 {
            assert_eq!(ext(&kl, &kl, n, Mode::Minimal).unwrap().dim(), 1);
            assert_eq!(tor(&kr, &kl, n, Mode::Minimal).unwrap().dim(), 1);
        }
        let lam = Module::regular(&a, Side::Left);
        assert_eq!(ext(&lam, &kl, 1, Mode::Minimal).unwrap().dim(), 0);
        assert_eq!(tor(&kr, &lam, 1, Mode::Minimal).unwrap().dim(), 0);
    }

    #[test]
    fn ext_cubic() {
        let a = truncated_polynomial(3);
        let lam = Module::regular(&a, Side::Left);
        let k = simple_top(&a, Side::Left);
        let (b, _) = lam.quotient(&a.radical_power(2), "B");
        assert_eq!(ext(&k, &b, 1, Mode::Minimal).unwrap().dim(), 1);
        assert_eq!(ext(&k, &b, 1, Mode::Free).unwrap().dim(), 1);
    }

    #[test]
    fn hom_space_matches_naive() {
        let a = upper_triangular_2();
        let mods = [
            Module::regular(&a, Side::Left),
            simple_top(&a, Side::Left),
            crate::module::presets::dual_regular(&a, Side::Left),
        ];
        for m in &mods {
            for n in &mods {
                let h = hom_space(m, n).unwrap();
                let naive = hom_space_naive(m, n).unwrap();
                assert_eq!(h.dim(), naive.len());
                for g in h.basis() {
                    assert!(g.is_valid());
                }
                for g in &naive {
                    let c = h.coords(g);
                    assert_eq!(h.map(&c).matrix, g.matrix);
                }
            }
        }
    }

    #[test]
    fn stable_hom_simple() {
        let a = truncated_polynomial(2);
        let k = simple_top(&a, Side::Left);
        let s = stable_hom(&k, &k, StableMode::ModInjectives, Mode::Minimal).unwrap();
        assert_eq!(s.dim(), 1);
        let s = stable_hom(&k, &k, StableMode::ModProjectives, Mode::Minimal).unwrap();
        assert_eq!(s.dim(), 1);
        let lam = Module::regular(&a, Side::Left);
        let s = stable_hom(&lam, &k, StableMode::ModInjectives, Mode::Minimal).unwrap();
        assert_eq!(s.dim(), 0);
    }

    #[test]
    fn definitional_matches_presentation() {
        let a = upper_triangular_2();
        let r = Module::regular(&a, Side::Right);
        let l = crate::module::presets::dual_regular(&a, Side::Left);
        let t = tensor(&r, &l, Mode::Minimal).unwrap();
        let d = tensor_definitional(&r, &l).unwrap();
        let g = d.from_presentation(&t);
        assert_eq!(g.rank(), d.dim());
        assert_eq!(t.dim(), d.dim());
    }
}
