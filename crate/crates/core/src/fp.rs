//! Finitely presented functors `Coker(Hom(B, −) → Hom(A, −))` for `f: A → B`.

use crate::algebra::{Algebra, Side};
use crate::bifunctor::{tensor_definitional, HomSpace};
use crate::error::Result;
use crate::functor::{Functor, Value};
use crate::linalg::{QMatrix, QSpace, Quotient};
use crate::module::{map_factorization, presets::simple_top, Module, ModuleMap};
use crate::projective::{Mode, Projective};
use crate::random::{random_module, SampleRng};
use crate::rational::Q;
use crate::resolution::resolve_injective;

#[derive(Clone)]
pub struct FpPresentation {
    pub f: ModuleMap,
    /// `w(F) = Ker f` with `l: w(F) ↪ A`
    pub defect: Module,
    pub l: ModuleMap,
    pub image: Module,
    /// `f = i ∘ p`
    pub p: ModuleMap,
    pub i: ModuleMap,
    pub cokernel: Module,
}

impl FpPresentation {
    pub fn new(f: &ModuleMap) -> FpPresentation {
        let fac = map_factorization(f);
        FpPresentation {
            f: f.clone(),
            defect: fac.kernel.with_label("w(F)"),
            l: fac.kernel_incl,
            image: fac.image,
            p: fac.p,
            i: fac.i,
            cokernel: fac.cokernel,
        }
    }

    pub fn functor(&self) -> Functor {
        Functor::fp(&self.f)
    }

    pub fn side(&self) -> Side {
        self.f.dom.side()
    }

    pub fn algebra(&self) -> &Algebra {
        self.f.dom.algebra()
    }

    pub fn eval(&self, x: &Module) -> Result<QSpace> {
        self.functor().eval_obj(x)
    }

    pub fn eval_map(&self, g: &ModuleMap) -> Result<QMatrix> {
        self.functor().eval_map(g)
    }

    pub fn is_stable(&self) -> bool {
        self.defect.dim() == 0
    }

    /// `F₀ = Coker((B,−) → (Im f,−))`, which is the injective stabilization of F.
    pub fn f0(&self) -> FpPresentation {
        FpPresentation::new(&self.i)
    }

    /// `F₁ = Coker((A,−) → (w(F),−))`
    pub fn f1(&self) -> FpPresentation {
        FpPresentation::new(&self.l)
    }
}

fn fp_parts(v: &Value) -> (&HomSpace, &Quotient) {
    match v {
        Value::Fp { hom, quotient } => (hom, quotient),
        _ => unreachable!("expected a finitely presented value"),
    }
}

/// Precomposition `Hom(Y, X) → Hom(Y', X)` with `h: Y' → Y`.
fn precompose(h: &ModuleMap, src: &HomSpace, tgt: &HomSpace) -> QMatrix {
    let cols: Vec<Vec<Q>> = src.basis().iter().map(|g| tgt.coords(&g.after(h))).collect();
    QMatrix::from_cols(tgt.dim(), &cols)
}

#[derive(Clone, Debug)]
pub struct FourTerm {
    /// `F₀(X), F(X), Hom(w, X), F₁(X)`
    pub dims: [usize; 4],
    pub exact: bool,
}

/// `0 → F₀(X) → F(X) → Hom(w(F), X) → F₁(X) → 0`
pub fn four_term_check(fp: &FpPresentation, x: &Module) -> Result<FourTerm> {
    let v0 = fp.f0().functor().value(x)?;
    let v = fp.functor().value(x)?;
    let v1 = fp.f1().functor().value(x)?;
    let (h0, q0) = fp_parts(&v0);
    let (h, q) = fp_parts(&v);
    let (hw, q1) = fp_parts(&v1);
    let m1 = q.proj.mul(&precompose(&fp.p, h0, h)).mul(&q0.section);
    let m2 = precompose(&fp.l, h, hw).mul(&q.section);
    let m3 = q1.proj.clone();
    let dims = [v0.dim(), v.dim(), hw.dim(), v1.dim()];
    let exact = m2.mul(&m1).is_zero()
        && m3.mul(&m2).is_zero()
        && m1.rank() == dims[0]
        && m1.rank() + m2.rank() == dims[1]
        && m2.rank() + m3.rank() == dims[2]
        && m3.rank() == dims[3];
    Ok(FourTerm { dims, exact })
}

/// `R⁰F(X) = Ker(F(I⁰) → F(I¹))` for an injective copresentation of X.
pub fn r0_dim(fp: &FpPresentation, x: &Module, mode: Mode) -> Result<usize> {
    let f = fp.functor();
    let res = resolve_injective(x, 2, mode);
    let v0 = f.value(&res.inj(0).module)?;
    let v1 = f.value(&res.inj(1).module)?;
    let d = f.map_between(&res.d(0), &v0, &v1)?;
    Ok(v0.dim() - d.rank())
}

pub fn indecomposable_projectives(alg: &Algebra, side: Side) -> Vec<Module> {
    alg.primitive_idempotents()
        .iter()
        .enumerate()
        .map(|(k, e)| {
            Projective::new(alg, side, std::slice::from_ref(e))
                .module
                .with_label(format!("P{k}"))
        })
        .collect()
}

pub fn indecomposable_injectives(alg: &Algebra, side: Side) -> Vec<Module> {
    indecomposable_projectives(alg, side.opposite())
        .iter()
        .enumerate()
        .map(|(k, p)| p.dual().with_label(format!("I{k}")))
        .collect()
}

pub fn simples(alg: &Algebra, side: Side) -> Vec<Module> {
    indecomposable_projectives(alg, side)
        .iter()
        .enumerate()
        .map(|(k, p)| p.top().0.with_label(format!("S{k}")))
        .collect()
}

/// Indecomposable projectives, injectives, simples and three random modules.
pub fn battery(alg: &Algebra, side: Side, rng: &mut SampleRng, max_dim: usize) -> Vec<Module> {
    let mut out = indecomposable_projectives(alg, side);
    out.extend(indecomposable_injectives(alg, side));
    out.extend(simples(alg, side));
    if out.is_empty() {
        out.push(simple_top(alg, side));
    }
    for _ in 0..3 {
        out.push(random_module(rng, alg, side, max_dim));
    }
    out
}

#[derive(Clone, Debug)]
pub struct DefectReport {
    pub defect_dim: usize,
    pub stable: bool,
    /// F vanishes on every indecomposable injective
    pub vanishes_on_injectives: bool,
}

pub fn defect_and_stability(fp: &FpPresentation) -> Result<DefectReport> {
    let f = fp.functor();
    let mut vanishes = true;
    for i in indecomposable_injectives(fp.algebra(), fp.side()) {
        vanishes &= f.eval_obj(&i)?.dimension == 0;
    }
    Ok(DefectReport {
        defect_dim: fp.defect.dim(),
        stable: fp.is_stable(),
        vanishes_on_injectives: vanishes,
    })
}

/// `Nat(F, G) = Ker(G(f): G(A) → G(B))`
pub fn nat_hom(fp: &FpPresentation, g: &Functor) -> Result<QSpace> {
    let va = g.value(&fp.f.dom)?;
    let vb = g.value(&fp.f.cod)?;
    let m = g.map_between(&fp.f, &va, &vb)?;
    Ok(QSpace::new(m.kernel(), "Nat(F,G)"))
}

/// `F(Λ)` with the module structure induced by the endomorphisms of Λ; it lives on the other side.
pub fn f_of_lambda(fp: &FpPresentation) -> Result<Module> {
    let f = fp.functor();
    let alg = fp.algebra();
    let side = fp.side();
    let lam = Module::regular(alg, side);
    let v = f.value(&lam)?;
    let action = (0..alg.dim())
        .map(|i| {
            let rho = ModuleMap::new_unchecked(&lam, &lam, alg.eff_right_mul(side, &alg.basis_vec(i)));
            f.map_between(&rho, &v, &v)
        })
        .collect::<Result<Vec<_>>>()?;
    Module::new(alg, side.opposite(), v.dim(), action, "F(Λ)")
}

#[derive(Clone, Debug)]
pub struct CounitRow {
    pub label: String,
    pub f_dim: usize,
    pub source_dim: usize,
    pub f0_dim: usize,
    pub f1_dim: usize,
    pub proj_stab_dim: usize,
    pub iso: bool,
}

#[derive(Clone, Debug)]
pub struct EilenbergWatts {
    pub f_lambda: Module,
    pub rows: Vec<CounitRow>,
}

/// The counit `X ⊗ F(Λ) → F(X)`: `x ⊗ m ↦ F(λ ↦ λx)(m)`.
pub fn counit(fp: &FpPresentation, fl: &Module, x: &Module) -> Result<(QMatrix, usize)> {
    let f = fp.functor();
    let alg = fp.algebra();
    let lam = Module::regular(alg, fp.side());
    let vl = f.value(&lam)?;
    let vx = f.value(x)?;
    let def = tensor_definitional(x, fl)?;
    let n = fl.dim();
    let mut c = QMatrix::zeros(vx.dim(), x.dim() * n);
    for p in 0..x.dim() {
        let xp = QMatrix::identity(x.dim()).col(p).to_vec();
        let cols: Vec<Vec<Q>> = (0..alg.dim()).map(|j| x.action()[j].mul_vec(&xp)).collect();
        let rho = ModuleMap::new_unchecked(&lam, x, QMatrix::from_cols(x.dim(), &cols));
        let fr = f.map_between(&rho, &vl, &vx)?;
        for q in 0..n {
            for r in 0..vx.dim() {
                c[(r, p * n + q)] = fr[(r, q)].clone();
            }
        }
    }
    let kills_relations = c
        .mul(&QMatrix::identity(c.cols()).sub(&def.quotient.section.mul(&def.quotient.proj)))
        .is_zero();
    if !kills_relations {
        return Err(crate::Error::Consistency("counit is not balanced".into()));
    }
    Ok((c.mul(&def.quotient.section), def.dim()))
}

pub fn eilenberg_watts(fp: &FpPresentation, modules: &[Module], mode: Mode) -> Result<EilenbergWatts> {
    let fl = f_of_lambda(fp)?;
    let ps = fp.functor().proj_stab(mode)?;
    let mut rows = Vec::new();
    for x in modules {
        let (c, source_dim) = counit(fp, &fl, x)?;
        let r = c.rank();
        let f_dim = c.rows();
        rows.push(CounitRow {
            label: x.label().to_string(),
            f_dim,
            source_dim,
            f0_dim: f_dim - r,
            f1_dim: source_dim - r,
            proj_stab_dim: ps.eval_obj(x)?.dimension,
            iso: r == f_dim && r == source_dim,
        });
    }
    Ok(EilenbergWatts { f_lambda: fl, rows })
}

/// `Hom(A, −)`, presented by `A → 0`.
pub fn representable(a: &Module) -> FpPresentation {
    let zero = Module::zero(a.algebra(), a.side());
    FpPresentation::new(&ModuleMap::zero(a, &zero))
}
