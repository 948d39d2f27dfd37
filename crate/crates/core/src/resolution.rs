//! Projective and injective resolutions, cached on the module, plus comparison lifts
//! and the transpose.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::module::{map_factorization, Module, ModuleMap};
use crate::projective::{injective_envelope, projective_cover, Injective, Mode, Projective};

#[derive(Default)]
pub(crate) struct ResolutionCache {
    proj: HashMap<Mode, Vec<Arc<ProjStage>>>,
    inj: HashMap<Mode, Vec<Arc<InjStage>>>,
}

/// `P_i ↠ Ωⁱ` and `Ωⁱ⁺¹ ↪ P_i`.
pub struct ProjStage {
    pub p: Projective,
    pi: QMatrix,
    pub syz: Module,
    incl: QMatrix,
}

/// `Σʲ ↪ Iʲ` and `Iʲ ↠ Σʲ⁺¹`.
pub struct InjStage {
    pub inj: Injective,
    iota: QMatrix,
    pub cosyz: Module,
    proj: QMatrix,
}

/// A projective resolution window of `module`.
#[derive(Clone)]
pub struct ProjectiveResolution {
    pub module: Module,
    pub mode: Mode,
    stages: Vec<Arc<ProjStage>>,
}

impl ProjectiveResolution {
    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn p(&self, i: usize) -> &Projective {
        &self.stages[i].p
    }

    /// Ωⁱ M, with Ω⁰ M = M.
    pub fn omega(&self, i: usize) -> &Module {
        if i == 0 {
            &self.module
        } else {
            &self.stages[i - 1].syz
        }
    }

    /// `P_i ↠ Ωⁱ M`
    pub fn pi(&self, i: usize) -> ModuleMap {
        ModuleMap::new_unchecked(&self.stages[i].p.module, self.omega(i), self.stages[i].pi.clone())
    }

    /// `Ωⁱ⁺¹ M ↪ P_i`
    pub fn incl(&self, i: usize) -> ModuleMap {
        let s = &self.stages[i];
        ModuleMap::new_unchecked(&s.syz, &s.p.module, s.incl.clone())
    }

    /// `d_i: P_i → P_{i-1}` for `i ≥ 1`.
    pub fn d(&self, i: usize) -> ModuleMap {
        assert!(i >= 1);
        self.incl(i - 1).after(&self.pi(i))
    }
}

/// An injective resolution window of `module`.
#[derive(Clone)]
pub struct InjectiveResolution {
    pub module: Module,
    pub mode: Mode,
    stages: Vec<Arc<InjStage>>,
}

impl InjectiveResolution {
    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn inj(&self, j: usize) -> &Injective {
        &self.stages[j].inj
    }

    /// Σʲ B, with Σ⁰ B = B.
    pub fn sigma(&self, j: usize) -> &Module {
        if j == 0 {
            &self.module
        } else {
            &self.stages[j - 1].cosyz
        }
    }

    /// `Σʲ B ↪ Iʲ`
    pub fn iota(&self, j: usize) -> ModuleMap {
        ModuleMap::new_unchecked(self.sigma(j), &self.stages[j].inj.module, self.stages[j].iota.clone())
    }

    /// `Iʲ ↠ Σʲ⁺¹ B`
    pub fn proj(&self, j: usize) -> ModuleMap {
        let s = &self.stages[j];
        ModuleMap::new_unchecked(&s.inj.module, &s.cosyz, s.proj.clone())
    }

    /// `∂ʲ: Iʲ → Iʲ⁺¹`
    pub fn d(&self, j: usize) -> ModuleMap {
        self.iota(j + 1).after(&self.proj(j))
    }
}

/// Projective resolution with at least `n` stages (P_0 … P_{n-1}).
pub fn resolve_projective(m: &Module, n: usize, mode: Mode) -> ProjectiveResolution {
    let existing = m
        .cache()
        .lock()
        .expect("resolution cache poisoned")
        .proj
        .get(&mode)
        .cloned()
        .unwrap_or_default();
    let mut stages = existing.clone();
    while stages.len() < n {
        let omega = stages.last().map_or_else(|| m.clone(), |s| s.syz.clone());
        let (p, pi) = projective_cover(&omega, mode);
        let f = map_factorization(&pi);
        let syz = f.kernel.with_label(format!("Omega^{}({})", stages.len() + 1, m.label()));
        stages.push(Arc::new(ProjStage {
            p,
            pi: pi.matrix,
            syz,
            incl: f.kernel_incl.matrix,
        }));
    }
    if stages.len() > existing.len() {
        let mut cache = m.cache().lock().expect("resolution cache poisoned");
        let slot = cache.proj.entry(mode).or_default();
        // another writer may have filled further; keep the longer, first-written prefix
        if slot.len() < stages.len() {
            let keep = slot.len();
            slot.extend(stages[keep..].iter().cloned());
            stages = slot.clone();
        } else {
            stages = slot.clone();
        }
    }
    ProjectiveResolution {
        module: m.clone(),
        mode,
        stages,
    }
}

/// Injective resolution with at least `n` stages (I⁰ … I^{n-1}), dual to a projective
/// resolution of `D(B)`. Cosyzygies are cached, so repeated calls return the same modules.
pub fn resolve_injective(b: &Module, n: usize, mode: Mode) -> InjectiveResolution {
    let existing = b
        .cache()
        .lock()
        .expect("resolution cache poisoned")
        .inj
        .get(&mode)
        .cloned()
        .unwrap_or_default();
    let mut stages = existing.clone();
    if stages.len() < n {
        let db = b.dual();
        let pr = resolve_projective(&db, n, mode);
        for j in stages.len()..n {
            let inj = Injective::from_projective(pr.p(j));
            let cosyz = pr.omega(j + 1).dual();
            stages.push(Arc::new(InjStage {
                inj,
                iota: pr.pi(j).matrix.transpose(),
                cosyz,
                proj: pr.incl(j).matrix.transpose(),
            }));
        }
        let mut cache = b.cache().lock().expect("resolution cache poisoned");
        let slot = cache.inj.entry(mode).or_default();
        if slot.len() < stages.len() {
            let keep = slot.len();
            slot.extend(stages[keep..].iter().cloned());
        }
        stages = slot.clone();
    }
    InjectiveResolution {
        module: b.clone(),
        mode,
        stages,
    }
}

/// The cosyzygy sequence `0 → B → I → ΣB → 0` from the cached resolution.
pub fn cosyzygy(b: &Module, mode: Mode) -> (Injective, ModuleMap, Module, ModuleMap) {
    let r = resolve_injective(b, 1, mode);
    (r.inj(0).clone(), r.iota(0), r.sigma(1).clone(), r.proj(0))
}

/// The syzygy sequence `0 → ΩM → P → M → 0` from the cached resolution.
pub fn syzygy(m: &Module, mode: Mode) -> (Projective, ModuleMap, Module, ModuleMap) {
    let r = resolve_projective(m, 1, mode);
    (r.p(0).clone(), r.pi(0), r.omega(1).clone(), r.incl(0))
}

/// Which way a comparison map is built.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftDirection {
    AlongProjectives,
    AlongInjectives,
}

/// A chain map between resolution windows over a module map.
pub struct ChainMap {
    /// `P_i → P'_i` or `Iʲ → I'ʲ`
    pub terms: Vec<ModuleMap>,
    /// Induced maps on syzygies `Ωⁱ → Ω'ⁱ` (or cosyzygies), starting at index 0 with the base map.
    pub induced: Vec<ModuleMap>,
}

/// Lifts `f: M → M'` along projective resolutions of `M` and `M'`.
pub fn lift_projective(
    f: &ModuleMap,
    src: &ProjectiveResolution,
    tgt: &ProjectiveResolution,
    n: usize,
) -> Result<ChainMap> {
    if src.len() < n || tgt.len() < n {
        return Err(Error::Dimension("resolution window shorter than requested lift".into()));
    }
    let mut terms = Vec::with_capacity(n);
    let mut induced = vec![f.clone()];
    for i in 0..n {
        let w = &induced[i];
        let h = src
            .p(i)
            .lift(&w.after(&src.pi(i)), &tgt.pi(i))
            .ok_or_else(|| Error::Consistency("projective lift failed".into()))?;
        // induced map on the next syzygy: tgt.incl ∘ ω = h ∘ src.incl
        let rhs = h.matrix.mul(&src.incl(i).matrix);
        let omega = tgt
            .incl(i)
            .matrix
            .solve_many(&rhs)
            .ok_or_else(|| Error::Consistency("syzygy restriction failed".into()))?;
        induced.push(ModuleMap::new_unchecked(src.omega(i + 1), tgt.omega(i + 1), omega));
        terms.push(h);
    }
    Ok(ChainMap { terms, induced })
}

/// Extends `g: B → B'` along injective resolutions of `B` and `B'`.
pub fn lift_injective(
    g: &ModuleMap,
    src: &InjectiveResolution,
    tgt: &InjectiveResolution,
    n: usize,
) -> Result<ChainMap> {
    if src.len() < n || tgt.len() < n {
        return Err(Error::Dimension("resolution window shorter than requested lift".into()));
    }
    let mut terms = Vec::with_capacity(n);
    let mut induced = vec![g.clone()];
    for j in 0..n {
        let s = &induced[j];
        let e = tgt
            .inj(j)
            .colift(&tgt.iota(j).after(s), &src.iota(j))
            .ok_or_else(|| Error::Consistency("injective extension failed".into()))?;
        // σ ∘ src.proj = tgt.proj ∘ e
        let rhs = tgt.proj(j).matrix.mul(&e.matrix);
        let sigma = solve_right(&src.proj(j).matrix, &rhs)
            .ok_or_else(|| Error::Consistency("cosyzygy factorization failed".into()))?;
        induced.push(ModuleMap::new_unchecked(src.sigma(j + 1), tgt.sigma(j + 1), sigma));
        terms.push(e);
    }
    Ok(ChainMap { terms, induced })
}

/// `X` with `X·a = b`.
pub fn solve_right(a: &QMatrix, b: &QMatrix) -> Option<QMatrix> {
    a.transpose()
        .solve_many(&b.transpose())
        .map(|x| x.transpose())
}

/// Generic comparison lift in either direction, for resolutions computed to length `n`.
pub fn lift_map(f: &ModuleMap, n: usize, src_mode: Mode, tgt_mode: Mode, dir: LiftDirection) -> Result<ChainMap> {
    match dir {
        LiftDirection::AlongProjectives => {
            let s = resolve_projective(&f.dom, n, src_mode);
            let t = resolve_projective(&f.cod, n, tgt_mode);
            lift_projective(f, &s, &t, n)
        }
        LiftDirection::AlongInjectives => {
            let s = resolve_injective(&f.dom, n, src_mode);
            let t = resolve_injective(&f.cod, n, tgt_mode);
            lift_injective(f, &s, &t, n)
        }
    }
}

/// The dualized presentation `0 → A* → P₀* → P₁* → Tr A → 0`.
pub struct TransposeResult {
    pub input: Module,
    pub p0_star: Projective,
    pub p1_star: Projective,
    /// `∂*: P₀* → P₁*`
    pub d_star: ModuleMap,
    pub a_star: Module,
    pub a_star_incl: ModuleMap,
    pub tr: Module,
    pub tr_proj: ModuleMap,
}

/// Auslander transpose from the presentation `P₁ → P₀ → A` of the given mode.
pub fn transpose(a: &Module, mode: Mode) -> TransposeResult {
    let r = resolve_projective(a, 2, mode);
    let (p0, p1) = (r.p(0), r.p(1));
    let coeffs = p1.coefficients(p0, &r.d(1));
    let p0s = p0.dual_projective();
    let p1s = p1.dual_projective();
    // ∂*(ε*_t) = Σ_s a_st placed in summand s
    let ys: Vec<Vec<crate::rational::Q>> = (0..p0.len())
        .map(|t| {
            let mut v = vec![crate::rational::Q::zero(); p1s.dim()];
            for (s, row) in coeffs.iter().enumerate() {
                for (x, y) in v.iter_mut().zip(p1s.place(s, &row[t])) {
                    *x += y;
                }
            }
            v
        })
        .collect();
    let d_star = p0s.map_from_generators(&p1s.module, &ys);
    debug_assert!(d_star.is_valid(), "dualized differential is not a module map");
    let f = map_factorization(&d_star);
    TransposeResult {
        input: a.clone(),
        tr: f.cokernel.with_label(format!("Tr({})", a.label())),
        tr_proj: f.coker_proj,
        a_star: f.kernel.with_label(format!("{}*", a.label())),
        a_star_incl: f.kernel_incl,
        p0_star: p0s,
        p1_star: p1s,
        d_star,
    }
}

/// Checks exactness of `A → B → C` at B by ranks.
pub fn exact_at(f: &QMatrix, g: &QMatrix) -> bool {
    g.mul(f).is_zero() && f.rank() + g.rank() == f.rows()
}

/// Envelope of `b` not using the cache, for choice-independence checks.
pub fn fresh_envelope(b: &Module, mode: Mode) -> (Injective, ModuleMap) {
    injective_envelope(b, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::presets::*;
    use crate::algebra::Side;
    use crate::module::presets::simple_top;

    #[test]
    fn periodic_resolution_of_simple() {
        let a = truncated_polynomial(2);
        let k = simple_top(&a, Side::Left);
        let r = resolve_projective(&k, 4, Mode::Minimal);
        for i in 0..4 {
            assert_eq!(r.p(i).dim(), 2);
            assert_eq!(r.omega(i + 1).dim(), 1);
        }
        for i in 1..3 {
            assert!(exact_at(&r.d(i + 1).matrix, &r.d(i).matrix));
        }
        assert!(exact_at(&r.d(1).matrix, &r.pi(0).matrix));
    }

    #[test]
    fn syzygy_of_simple_over_cubic() {
        let a = truncated_polynomial(3);
        let k = simple_top(&a, Side::Left);
        let (_, _, om, _) = syzygy(&k, Mode::Minimal);
        assert_eq!(om.dim(), 2);
    }

    #[test]
    fn cosyzygy_is_cached() {
        let a = truncated_polynomial(3);
        let k = simple_top(&a, Side::Left);
        let (inj, iota, s1, pr) = cosyzygy(&k, Mode::Minimal);
        assert_eq!(inj.module.dim(), 3);
        assert_eq!(s1.dim(), 2);
        assert!(iota.is_valid() && pr.is_valid());
        assert!(pr.after(&iota).is_zero());
        let (_, _, s2, _) = cosyzygy(&k, Mode::Minimal);
        assert!(s1.ptr_eq(&s2));
    }

    #[test]
    fn injective_has_zero_cosyzygy() {
        let a = truncated_polynomial(2);
        let lam = Module::regular(&a, Side::Left);
        let (_, _, s, _) = cosyzygy(&lam, Mode::Minimal);
        assert_eq!(s.dim(), 0);
    }

    #[test]
    fn transpose_of_simple() {
        let a = truncated_polynomial(2);
        let k = simple_top(&a, Side::Right);
        let t = transpose(&k, Mode::Minimal);
        assert_eq!(t.tr.dim(), 1);
        assert_eq!(t.tr.side(), Side::Left);
        let lam = Module::regular(&a, Side::Right);
        assert_eq!(transpose(&lam, Mode::Minimal).tr.dim(), 0);
    }

    #[test]
    fn lifts_between_modes() {
        let a = truncated_polynomial(2);
        let k = simple_top(&a, Side::Left);
        let id = ModuleMap::identity(&k);
        let c = lift_map(&id, 3, Mode::Minimal, Mode::Free, LiftDirection::AlongInjectives).unwrap();
        for (j, t) in c.terms.iter().enumerate() {
            assert!(t.is_valid(), "term {j}");
        }
        // induced map on Σk is injective
        assert!(c.induced[1].is_mono());
        let p = lift_map(&id, 3, Mode::Free, Mode::Minimal, LiftDirection::AlongProjectives).unwrap();
        assert!(p.terms.iter().all(ModuleMap::is_valid));
        let z = ModuleMap::zero(&k, &k);
        let zc = lift_map(&z, 2, Mode::Minimal, Mode::Minimal, LiftDirection::AlongProjectives).unwrap();
        assert!(zc.terms.iter().all(ModuleMap::is_zero));
    }
}
