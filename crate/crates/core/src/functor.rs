//! Evaluable covariant functors and the stabilization/satellite combinators.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{Algebra, Side};
use crate::bifunctor::{hom_space, tor, HomSpace, Tor};
use crate::error::{Error, Result};
use crate::linalg::{QMatrix, QSpace, Quotient};
use crate::module::{Module, ModuleMap};
use crate::projective::Mode;
use crate::rational::Q;
use crate::resolution::{
    cosyzygy, lift_injective, lift_projective, resolve_injective, resolve_projective, syzygy,
};

/// Maximum nesting of combinators.
pub const MAX_DEPTH: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Right,
    Left,
}

#[derive(Clone)]
pub enum Kind {
    /// `A ⊗ −`
    Tensor { a: Module, mode: Mode },
    /// `Hom(A, −)`
    Hom { a: Module },
    /// `Coker(Hom(B, −) → Hom(A, −))` for `f: A → B`
    Fp { f: ModuleMap },
    /// `Tor_n(A, −)`
    Tor { a: Module, n: usize, mode: Mode },
    /// right: `Coker F(I → ΣX)`; left: `Ker F(ΩX → P)`
    Satellite { inner: Functor, dir: Direction, mode: Mode },
    /// right: `Ker F(I → ΣX)`; left: `Coker F(ΩX → P)`
    Cosatellite { inner: Functor, dir: Direction, mode: Mode },
    /// `Ker F(X → I)`
    InjStab { inner: Functor, mode: Mode },
    /// `Coker F(P → X)`
    ProjStab { inner: Functor, mode: Mode },
}

/// A covariant additive functor from modules on one side to ℚ-vector spaces.
#[derive(Clone)]
pub struct Functor(Arc<Kind>);

/// The value of a functor at a module, with committed coordinates.
#[derive(Clone)]
pub enum Value {
    Tor(Box<Tor>),
    Hom(Box<HomSpace>),
    Fp { hom: Box<HomSpace>, quotient: Quotient },
    /// a subspace of the inner value; columns of `basis` are inner coordinates
    Sub { inner: Box<Value>, basis: QMatrix, linv: QMatrix },
    /// a quotient of the inner value
    Quo { inner: Box<Value>, quotient: Quotient },
}

impl Value {
    pub fn dim(&self) -> usize {
        match self {
            Value::Tor(t) => t.dim(),
            Value::Hom(h) => h.dim(),
            Value::Fp { quotient, .. } => quotient.dim(),
            Value::Sub { basis, .. } => basis.cols(),
            Value::Quo { quotient, .. } => quotient.dim(),
        }
    }

    /// For subspace values, the basis in the coordinates of the inner value.
    pub fn witness(&self) -> QMatrix {
        match self {
            Value::Sub { basis, .. } => basis.clone(),
            Value::Quo { quotient, .. } => quotient.section.clone(),
            _ => QMatrix::identity(self.dim()),
        }
    }

    pub fn inner(&self) -> Option<&Value> {
        match self {
            Value::Sub { inner, .. } | Value::Quo { inner, .. } => Some(inner),
            _ => None,
        }
    }
}

fn sub_value(inner: Value, m: &QMatrix) -> Value {
    let basis = m.kernel();
    let linv = basis.left_inverse().expect("independent basis");
    Value::Sub {
        inner: Box::new(inner),
        basis,
        linv,
    }
}

fn quo_value(inner: Value, m: &QMatrix) -> Value {
    Value::Quo {
        inner: Box::new(inner),
        quotient: Quotient::new(m),
    }
}

fn restrict(t: &QMatrix, vx: &Value, vy: &Value) -> QMatrix {
    match (vx, vy) {
        (
            Value::Sub { basis: kx, .. },
            Value::Sub {
                basis: ky, linv: ly, ..
            },
        ) => {
            let img = t.mul(kx);
            debug_assert!(ky.spans(&img), "map does not preserve the subfunctor");
            ly.mul(&img)
        }
        (Value::Quo { quotient: qx, .. }, Value::Quo { quotient: qy, .. }) => {
            qy.proj.mul(&t.mul(&qx.section))
        }
        _ => unreachable!("value shapes disagree"),
    }
}

fn inner_of(v: &Value) -> &Value {
    v.inner().expect("combinator value has an inner value")
}

impl Functor {
    fn wrap(kind: Kind) -> Result<Functor> {
        let f = Functor(Arc::new(kind));
        if f.depth() > MAX_DEPTH {
            return Err(Error::Mismatch(format!(
                "functor nesting exceeds {MAX_DEPTH} combinators"
            )));
        }
        Ok(f)
    }

    pub fn tensor(a: &Module, mode: Mode) -> Functor {
        Functor(Arc::new(Kind::Tensor {
            a: a.clone(),
            mode,
        }))
    }

    pub fn hom(a: &Module) -> Functor {
        Functor(Arc::new(Kind::Hom { a: a.clone() }))
    }

    pub fn fp(f: &ModuleMap) -> Functor {
        Functor(Arc::new(Kind::Fp { f: f.clone() }))
    }

    pub fn tor(a: &Module, n: usize, mode: Mode) -> Functor {
        Functor(Arc::new(Kind::Tor {
            a: a.clone(),
            n,
            mode,
        }))
    }

    pub fn satellite(&self, dir: Direction, mode: Mode) -> Result<Functor> {
        Self::wrap(Kind::Satellite {
            inner: self.clone(),
            dir,
            mode,
        })
    }

    pub fn cosatellite(&self, dir: Direction, mode: Mode) -> Result<Functor> {
        Self::wrap(Kind::Cosatellite {
            inner: self.clone(),
            dir,
            mode,
        })
    }

    pub fn inj_stab(&self, mode: Mode) -> Result<Functor> {
        Self::wrap(Kind::InjStab {
            inner: self.clone(),
            mode,
        })
    }

    pub fn proj_stab(&self, mode: Mode) -> Result<Functor> {
        Self::wrap(Kind::ProjStab {
            inner: self.clone(),
            mode,
        })
    }

    pub fn kind(&self) -> &Kind {
        &self.0
    }

    pub fn depth(&self) -> usize {
        match self.kind() {
            Kind::Satellite { inner, .. }
            | Kind::Cosatellite { inner, .. }
            | Kind::InjStab { inner, .. }
            | Kind::ProjStab { inner, .. } => 1 + inner.depth(),
            _ => 0,
        }
    }

    /// Side of the modules the functor is evaluated on.
    pub fn side(&self) -> Side {
        match self.kind() {
            Kind::Tensor { a, .. } | Kind::Tor { a, .. } => a.side().opposite(),
            Kind::Hom { a } => a.side(),
            Kind::Fp { f } => f.dom.side(),
            Kind::Satellite { inner, .. }
            | Kind::Cosatellite { inner, .. }
            | Kind::InjStab { inner, .. }
            | Kind::ProjStab { inner, .. } => inner.side(),
        }
    }

    pub fn algebra(&self) -> &Algebra {
        match self.kind() {
            Kind::Tensor { a, .. } | Kind::Tor { a, .. } | Kind::Hom { a } => a.algebra(),
            Kind::Fp { f } => f.dom.algebra(),
            Kind::Satellite { inner, .. }
            | Kind::Cosatellite { inner, .. }
            | Kind::InjStab { inner, .. }
            | Kind::ProjStab { inner, .. } => inner.algebra(),
        }
    }

    fn check_arg(&self, x: &Module) -> Result<()> {
        if x.algebra() != self.algebra() || x.side() != self.side() {
            return Err(Error::Mismatch(format!(
                "functor {self:?} cannot be evaluated on {x:?}"
            )));
        }
        Ok(())
    }

    pub fn value(&self, x: &Module) -> Result<Value> {
        self.check_arg(x)?;
        Ok(match self.kind() {
            Kind::Tensor { a, mode } => Value::Tor(Box::new(tor(a, x, 0, *mode)?)),
            Kind::Tor { a, n, mode } => Value::Tor(Box::new(tor(a, x, *n, *mode)?)),
            Kind::Hom { a } => Value::Hom(Box::new(hom_space(a, x)?)),
            Kind::Fp { f } => {
                let ha = hom_space(&f.dom, x)?;
                let hb = hom_space(&f.cod, x)?;
                let cols: Vec<Vec<Q>> = hb.basis().iter().map(|g| ha.coords(&g.after(f))).collect();
                let quotient = Quotient::new(&QMatrix::from_cols(ha.dim(), &cols));
                Value::Fp {
                    hom: Box::new(ha),
                    quotient,
                }
            }
            Kind::InjStab { inner, mode } => {
                let (inj, iota, _, _) = cosyzygy(x, *mode);
                let vx = inner.value(x)?;
                let vi = inner.value(&inj.module)?;
                let m = inner.map_between(&iota, &vx, &vi)?;
                sub_value(vx, &m)
            }
            Kind::ProjStab { inner, mode } => {
                let (p, pi, _, _) = syzygy(x, *mode);
                let vp = inner.value(&p.module)?;
                let vx = inner.value(x)?;
                let m = inner.map_between(&pi, &vp, &vx)?;
                quo_value(vx, &m)
            }
            Kind::Satellite {
                inner,
                dir: Direction::Right,
                mode,
            } => {
                let (inj, _, sigma, pi) = cosyzygy(x, *mode);
                let vi = inner.value(&inj.module)?;
                let vs = inner.value(&sigma)?;
                let m = inner.map_between(&pi, &vi, &vs)?;
                quo_value(vs, &m)
            }
            Kind::Satellite {
                inner,
                dir: Direction::Left,
                mode,
            } => {
                let (p, _, omega, incl) = syzygy(x, *mode);
                let vo = inner.value(&omega)?;
                let vp = inner.value(&p.module)?;
                let m = inner.map_between(&incl, &vo, &vp)?;
                sub_value(vo, &m)
            }
            Kind::Cosatellite {
                inner,
                dir: Direction::Right,
                mode,
            } => {
                let (inj, _, sigma, pi) = cosyzygy(x, *mode);
                let vi = inner.value(&inj.module)?;
                let vs = inner.value(&sigma)?;
                let m = inner.map_between(&pi, &vi, &vs)?;
                sub_value(vi, &m)
            }
            Kind::Cosatellite {
                inner,
                dir: Direction::Left,
                mode,
            } => {
                let (p, _, omega, incl) = syzygy(x, *mode);
                let vo = inner.value(&omega)?;
                let vp = inner.value(&p.module)?;
                let m = inner.map_between(&incl, &vo, &vp)?;
                quo_value(vp, &m)
            }
        })
    }

    /// `F(g)` between values already computed at `g.dom` and `g.cod`.
    pub fn map_between(&self, g: &ModuleMap, vx: &Value, vy: &Value) -> Result<QMatrix> {
        Ok(match (self.kind(), vx, vy) {
            (Kind::Tensor { .. } | Kind::Tor { .. }, Value::Tor(tx), Value::Tor(ty)) => {
                tx.map_x(g, ty)
            }
            (Kind::Hom { .. }, Value::Hom(hx), Value::Hom(hy)) => hom_post(g, hx, hy),
            (
                Kind::Fp { .. },
                Value::Fp {
                    hom: hx,
                    quotient: qx,
                },
                Value::Fp {
                    hom: hy,
                    quotient: qy,
                },
            ) => qy.proj.mul(&hom_post(g, hx, hy).mul(&qx.section)),
            (Kind::InjStab { inner, .. }, _, _) | (Kind::ProjStab { inner, .. }, _, _) => {
                let t = inner.map_between(g, inner_of(vx), inner_of(vy))?;
                restrict(&t, vx, vy)
            }
            (Kind::Satellite { inner, dir, mode }, _, _)
            | (Kind::Cosatellite { inner, dir, mode }, _, _) => {
                let is_sat = matches!(self.kind(), Kind::Satellite { .. });
                let shifted = match (is_sat, dir) {
                    // evaluated on ΣX
                    (true, Direction::Right) => {
                        let rx = resolve_injective(&g.dom, 1, *mode);
                        let ry = resolve_injective(&g.cod, 1, *mode);
                        lift_injective(g, &rx, &ry, 1)?.induced[1].clone()
                    }
                    // evaluated on ΩX
                    (true, Direction::Left) => {
                        let rx = resolve_projective(&g.dom, 1, *mode);
                        let ry = resolve_projective(&g.cod, 1, *mode);
                        lift_projective(g, &rx, &ry, 1)?.induced[1].clone()
                    }
                    // evaluated on I(X)
                    (false, Direction::Right) => {
                        let rx = resolve_injective(&g.dom, 1, *mode);
                        let ry = resolve_injective(&g.cod, 1, *mode);
                        lift_injective(g, &rx, &ry, 1)?.terms[0].clone()
                    }
                    // evaluated on P(X)
                    (false, Direction::Left) => {
                        let rx = resolve_projective(&g.dom, 1, *mode);
                        let ry = resolve_projective(&g.cod, 1, *mode);
                        lift_projective(g, &rx, &ry, 1)?.terms[0].clone()
                    }
                };
                let t = inner.map_between(&shifted, inner_of(vx), inner_of(vy))?;
                restrict(&t, vx, vy)
            }
            _ => {
                return Err(Error::Consistency(
                    "functor values do not match the functor".into(),
                ))
            }
        })
    }

    pub fn eval_obj(&self, x: &Module) -> Result<QSpace> {
        let v = self.value(x)?;
        Ok(QSpace::new(v.witness(), format!("{self:?}({})", x.label())))
    }

    pub fn eval_map(&self, g: &ModuleMap) -> Result<QMatrix> {
        let vx = self.value(&g.dom)?;
        let vy = self.value(&g.cod)?;
        self.map_between(g, &vx, &vy)
    }

    /// Whether `F(ι: C → I(C))` is injective.
    pub fn property_a(&self, c: &Module, mode: Mode) -> Result<bool> {
        let (inj, iota, _, _) = cosyzygy(c, mode);
        let vc = self.value(c)?;
        let vi = self.value(&inj.module)?;
        let m = self.map_between(&iota, &vc, &vi)?;
        Ok(m.rank() == vc.dim())
    }
}

/// `Hom(A, g)`: post-composition in the committed bases.
fn hom_post(g: &ModuleMap, hx: &HomSpace, hy: &HomSpace) -> QMatrix {
    let cols: Vec<Vec<Q>> = hx.basis().iter().map(|phi| hy.coords(&g.after(phi))).collect();
    QMatrix::from_cols(hy.dim(), &cols)
}

impl fmt::Debug for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dir = |d: &Direction| match d {
            Direction::Right => "^1",
            Direction::Left => "_1",
        };
        match self.kind() {
            Kind::Tensor { a, .. } => write!(f, "{}⊗-", a.label()),
            Kind::Hom { a } => write!(f, "Hom({},-)", a.label()),
            Kind::Fp { f: m } => write!(f, "FP({}->{})", m.dom.label(), m.cod.label()),
            Kind::Tor { a, n, .. } => write!(f, "Tor_{n}({},-)", a.label()),
            Kind::Satellite { inner, dir: d, .. } => write!(f, "S{}[{inner:?}]", dir(d)),
            Kind::Cosatellite { inner, dir: d, .. } => write!(f, "C{}[{inner:?}]", dir(d)),
            Kind::InjStab { inner, .. } => write!(f, "Inj[{inner:?}]"),
            Kind::ProjStab { inner, .. } => write!(f, "Proj[{inner:?}]"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::presets::*;
    use crate::module::presets::simple_top;

    #[test]
    fn stabilized_tensor_on_dual_numbers() {
        let a = truncated_polynomial(2);
        let kr = simple_top(&a, Side::Right);
        let kl = simple_top(&a, Side::Left);
        let lam = Module::regular(&a, Side::Left);
        let f = Functor::tensor(&kr, Mode::Minimal);
        let fb = f.inj_stab(Mode::Minimal).unwrap();
        assert_eq!(fb.eval_obj(&kl).unwrap().dimension, 1);
        assert_eq!(fb.eval_obj(&lam).unwrap().dimension, 0);
    }

    #[test]
    fn hom_stabilization_vanishes() {
        let a = truncated_polynomial(3);
        let k = simple_top(&a, Side::Left);
        let h = Functor::hom(&k).inj_stab(Mode::Minimal).unwrap();
        assert_eq!(h.eval_obj(&k).unwrap().dimension, 0);
    }

    #[test]
    fn satellites_and_cosatellites() {
        let a = truncated_polynomial(2);
        let kr = simple_top(&a, Side::Right);
        let kl = simple_top(&a, Side::Left);
        let t1 = Functor::tor(&kr, 1, Mode::Minimal);
        let s = t1.satellite(Direction::Right, Mode::Minimal).unwrap();
        assert_eq!(s.eval_obj(&kl).unwrap().dimension, 1);
        let c = Functor::tensor(&kr, Mode::Minimal)
            .cosatellite(Direction::Right, Mode::Minimal)
            .unwrap();
        assert_eq!(c.eval_obj(&kl).unwrap().dimension, 0);
        let lam = Module::regular(&a, Side::Left);
        assert_eq!(s.eval_obj(&lam).unwrap().dimension, 0);
    }

    #[test]
    fn functoriality_identity() {
        let a = truncated_polynomial(3);
        let kr = simple_top(&a, Side::Right);
        let lam = Module::regular(&a, Side::Left);
        let f = Functor::tensor(&kr, Mode::Minimal)
            .inj_stab(Mode::Minimal)
            .unwrap()
            .satellite(Direction::Left, Mode::Minimal)
            .unwrap();
        let (b, _) = lam.quotient(&a.radical_power(2), "B");
        let id = ModuleMap::identity(&b);
        let m = f.eval_map(&id).unwrap();
        assert_eq!(m, QMatrix::identity(m.rows()));
    }

    #[test]
    fn depth_is_bounded() {
        let a = truncated_polynomial(2);
        let k = simple_top(&a, Side::Right);
        let mut f = Functor::tensor(&k, Mode::Minimal);
        for _ in 0..MAX_DEPTH {
            f = f.inj_stab(Mode::Minimal).unwrap();
        }
        assert!(f.inj_stab(Mode::Minimal).is_err());
    }

    #[test]
    fn property_a_examples() {
        let a = truncated_polynomial(2);
        let kr = simple_top(&a, Side::Right);
        let kl = simple_top(&a, Side::Left);
        let lam = Module::regular(&a, Side::Left);
        let f = Functor::tensor(&kr, Mode::Minimal);
        assert!(!f.property_a(&kl, Mode::Minimal).unwrap());
        assert!(f.property_a(&lam, Mode::Minimal).unwrap());
        assert!(Functor::hom(&kl).property_a(&kl, Mode::Minimal).unwrap());
    }
}
