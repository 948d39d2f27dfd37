//! Seeded generators for modules, maps, sequences, functors and integer presentations.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Algebra, Side};
use crate::bifunctor::hom_space;
use crate::calculus::ShortExact;
use crate::linalg::{QMatrix, ZMatrix};
use crate::module::{Module, ModuleMap};
use crate::projective::{projective_cover, Mode, Projective};
use crate::rational::Q;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small(rng: &mut SampleRng) -> Q {
    Q::from_int(rng.gen_range(-2..=2))
}

pub fn random_vector(rng: &mut SampleRng, n: usize) -> Vec<Q> {
    (0..n).map(|_| small(rng)).collect()
}

/// Mostly zero, so generated submodules vary in depth.
fn sparse_vector(rng: &mut SampleRng, n: usize) -> Vec<Q> {
    (0..n)
        .map(|_| if rng.gen_bool(0.6) { Q::zero() } else { small(rng) })
        .collect()
}

/// Basis of the submodule generated by the columns of `vs`.
pub fn generated_submodule(m: &Module, vs: &QMatrix) -> QMatrix {
    let mut w = vs.image();
    loop {
        let mut parts = vec![w.clone()];
        parts.extend(m.action().iter().map(|a| a.mul(&w)));
        let refs: Vec<&QMatrix> = parts.iter().collect();
        let next = QMatrix::hstack(&refs, m.dim()).image();
        if next.cols() == w.cols() {
            return w;
        }
        w = next;
    }
}

fn random_projective(rng: &mut SampleRng, alg: &Algebra, side: Side, summands: usize) -> Projective {
    let prims = alg.primitive_idempotents();
    let idems: Vec<Vec<Q>> = (0..summands)
        .map(|_| prims[rng.gen_range(0..prims.len())].clone())
        .collect();
    Projective::new(alg, side, &idems)
}

/// Conjugates the action by a random unitriangular change of basis.
fn rebase(rng: &mut SampleRng, m: &Module, label: String) -> Module {
    let n = m.dim();
    let mut t = QMatrix::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            t[(i, j)] = small(rng);
        }
    }
    let ti = t.inverse().expect("unitriangular");
    let action = m.action().iter().map(|a| ti.mul(&a.mul(&t))).collect();
    Module::new(m.algebra(), m.side(), n, action, label).expect("conjugate of a module")
}

/// A random quotient of a projective or submodule of an injective, of dim `1..=max_dim`.
pub fn random_module(rng: &mut SampleRng, alg: &Algebra, side: Side, max_dim: usize) -> Module {
    let label = format!("R{}", rng.gen_range(0..10_000));
    for _ in 0..64 {
        let dual = rng.gen_bool(0.5);
        let s = if dual { side.opposite() } else { side };
        let count = rng.gen_range(1..=2);
        let p = random_projective(rng, alg, s, count);
        // relations drawn from the radical give non-projective quotients
        let rad = p.module.radical_basis();
        let gens = rng.gen_range(0..=2);
        let vs: Vec<Vec<Q>> = (0..gens)
            .map(|_| {
                if rad.cols() > 0 && rng.gen_bool(0.8) {
                    rad.mul_vec(&sparse_vector(rng, rad.cols()))
                } else {
                    random_vector(rng, p.dim())
                }
            })
            .collect();
        let u = generated_submodule(&p.module, &QMatrix::from_cols(p.dim(), &vs));
        let (q, _) = p.module.quotient(&u, "q");
        if q.dim() == 0 || q.dim() > max_dim {
            continue;
        }
        let m = if dual { q.dual() } else { q };
        return rebase(rng, &m, label);
    }
    crate::module::presets::simple_top(alg, side).with_label(label)
}

/// A random element of `Hom(m, n)` with small integer coordinates.
pub fn random_map(rng: &mut SampleRng, m: &Module, n: &Module) -> ModuleMap {
    let h = hom_space(m, n).expect("same algebra and side");
    let c = random_vector(rng, h.dim());
    h.map(&c)
}

/// A random short exact sequence with terms of dim at most `max_dim`.
pub fn random_ses(rng: &mut SampleRng, alg: &Algebra, side: Side, max_dim: usize) -> ShortExact {
    match rng.gen_range(0..5) {
        0 => {
            let l = random_module(rng, alg, side, max_dim.div_ceil(2).max(1));
            let r = random_module(rng, alg, side, (max_dim / 2).max(1));
            ShortExact::split(&l, &r)
        }
        1 => {
            let m = random_module(rng, alg, side, max_dim);
            let (p, pi) = projective_cover(&m, Mode::Minimal);
            let (_, incl) = p.module.submodule(&pi.matrix.kernel(), "Ω");
            ShortExact::new(incl, pi).expect("syzygy sequence")
        }
        _ => {
            let b = random_module(rng, alg, side, max_dim);
            let mut best = None;
            for _ in 0..8 {
                let v = random_vector(rng, b.dim());
                let w = generated_submodule(&b, &QMatrix::from_cols(b.dim(), &[v]));
                let proper = w.cols() > 0 && w.cols() < b.dim();
                best = Some(w);
                if proper {
                    break;
                }
            }
            let w = best.expect("at least one attempt");
            let (_, incl) = b.submodule(&w, "B'");
            let (_, proj) = b.quotient(&w, "B''");
            ShortExact::new(incl, proj).expect("submodule sequence")
        }
    }
}

/// `f: A → B` presenting a random finitely presented functor.
pub fn random_fp(rng: &mut SampleRng, alg: &Algebra, side: Side, max_dim: usize) -> ModuleMap {
    match rng.gen_range(0..4) {
        0 => {
            let b = random_module(rng, alg, side, max_dim);
            let v = random_vector(rng, b.dim());
            let w = generated_submodule(&b, &QMatrix::from_cols(b.dim(), &[v]));
            b.submodule(&w, "A").1
        }
        1 => {
            let a = random_module(rng, alg, side, max_dim);
            let v = random_vector(rng, a.dim());
            let w = generated_submodule(&a, &QMatrix::from_cols(a.dim(), &[v]));
            a.quotient(&w, "B").1
        }
        _ => {
            let a = random_module(rng, alg, side, max_dim);
            let b = random_module(rng, alg, side, max_dim);
            random_map(rng, &a, &b)
        }
    }
}

/// A random map between projectives, which presents a right exact functor.
pub fn random_right_exact_fp(rng: &mut SampleRng, alg: &Algebra, side: Side) -> ModuleMap {
    let n = rng.gen_range(1..=2);
    let a = random_projective(rng, alg, side, n).module;
    let m = rng.gen_range(1..=2);
    let b = random_projective(rng, alg, side, m).module;
    random_map(rng, &a, &b)
}

/// A random integer matrix with at most `max_rows × max_cols` entries bounded by `bound`.
pub fn random_int_matrix(rng: &mut SampleRng, max_rows: usize, max_cols: usize, bound: i64) -> ZMatrix {
    let r = rng.gen_range(1..=max_rows);
    let c = rng.gen_range(1..=max_cols);
    let sparse = rng.gen_bool(0.5);
    let mut m = ZMatrix::zeros(r, c);
    for i in 0..r {
        for j in 0..c {
            if sparse && rng.gen_bool(0.6) {
                continue;
            }
            m[(i, j)] = BigInt::from(rng.gen_range(-bound..=bound));
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::presets::*;

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = upper_triangular_2();
        let m1 = random_module(&mut rng(7), &a, Side::Right, 4);
        let m2 = random_module(&mut rng(7), &a, Side::Right, 4);
        assert!(m1.same(&m2));
        assert!(m1.dim() >= 1 && m1.dim() <= 4);
    }

    #[test]
    fn random_sequences_are_exact() {
        let a = truncated_polynomial(3);
        let mut r = rng(3);
        for _ in 0..10 {
            let s = random_ses(&mut r, &a, Side::Left, 5);
            assert_eq!(s.middle().dim(), s.left().dim() + s.right().dim());
        }
    }
}
