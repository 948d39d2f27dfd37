use proptest::prelude::*;

use injstab::algebra::presets::{ground_field, product, truncated_polynomial, upper_triangular_2};
use injstab::bifunctor::{ext, hom_space, stable_hom, tor, StableMode};
use injstab::calculus::splice_sequence;
use injstab::fp::simples;
use injstab::module::{direct_sum, map_factorization};
use injstab::projective::{injective_envelope, projective_cover};
use injstab::random::{random_map, random_module, random_ses, rng};
use injstab::resolution::{cosyzygy, transpose};
use injstab::{Algebra, Mode, Module, ModuleMap, Side};

fn algebras() -> Vec<Algebra> {
    vec![
        truncated_polynomial(2),
        truncated_polynomial(3),
        upper_triangular_2(),
        ground_field(),
        product(&truncated_polynomial(2), &ground_field()),
    ]
}

fn side_of(b: bool) -> Side {
    if b {
        Side::Left
    } else {
        Side::Right
    }
}

/// Same action matrices on the other side, for commutative algebras.
fn flip(m: &Module) -> Module {
    Module::new(m.algebra(), m.side().opposite(), m.dim(), m.action().to_vec(), m.label()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn hom_from_regular_has_module_dimension(seed in any::<u64>(), k in 0usize..5, left in any::<bool>()) {
        let alg = &algebras()[k];
        let side = side_of(left);
        let m = random_module(&mut rng(seed), alg, side, 5);
        prop_assert_eq!(hom_space(&Module::regular(alg, side), &m).unwrap().dim(), m.dim());
    }

    #[test]
    fn covers_and_envelopes(seed in any::<u64>(), k in 0usize..5, left in any::<bool>(), free in any::<bool>()) {
        let alg = &algebras()[k];
        let mode = if free { Mode::Free } else { Mode::Minimal };
        let m = random_module(&mut rng(seed), alg, side_of(left), 5);
        let (_, pi) = projective_cover(&m, mode);
        prop_assert!(pi.is_valid() && pi.is_epi());
        let (inj, iota) = injective_envelope(&m, mode);
        prop_assert!(iota.is_valid() && iota.is_mono());
        // injectivity: no extensions from simples
        for s in simples(alg, m.side()) {
            prop_assert_eq!(ext(&s, &inj.module, 1, Mode::Minimal).unwrap().dim(), 0);
        }
    }

    #[test]
    fn factorization_identities(seed in any::<u64>(), k in 0usize..5) {
        let alg = &algebras()[k];
        let mut r = rng(seed);
        let m = random_module(&mut r, alg, Side::Right, 4);
        let n = random_module(&mut r, alg, Side::Right, 4);
        let f = random_map(&mut r, &m, &n);
        let fa = map_factorization(&f);
        prop_assert_eq!(fa.kernel.dim() + fa.image.dim(), m.dim());
        prop_assert_eq!(fa.image.dim() + fa.cokernel.dim(), n.dim());
        prop_assert!(f.after(&fa.kernel_incl).is_zero());
        prop_assert!(fa.coker_proj.after(&f).is_zero());
        prop_assert_eq!(&fa.i.after(&fa.p).matrix, &f.matrix);
        prop_assert!(fa.p.is_epi() && fa.i.is_mono());
    }

    #[test]
    fn schanuel_for_envelopes(seed in any::<u64>(), k in 0usize..5) {
        let alg = &algebras()[k];
        let b = random_module(&mut rng(seed), alg, Side::Left, 5);
        let (i1, _, s1, _) = cosyzygy(&b, Mode::Minimal);
        let (i2, _, s2, _) = cosyzygy(&b, Mode::Free);
        prop_assert_eq!(s1.dim() + i2.module.dim(), s2.dim() + i1.module.dim());
    }

    #[test]
    fn double_transpose_is_stably_the_module(seed in any::<u64>(), k in 0usize..5) {
        let alg = &algebras()[k];
        let a = random_module(&mut rng(seed), alg, Side::Right, 4);
        let tt = transpose(&transpose(&a, Mode::Minimal).tr, Mode::Minimal).tr;
        prop_assert_eq!(tt.side(), a.side());
        // minimal presentations strip the projective summands of A
        prop_assert!(tt.dim() <= a.dim());
        for s in simples(alg, Side::Right) {
            let x = stable_hom(&tt, &s, StableMode::ModProjectives, Mode::Minimal).unwrap().dim();
            let y = stable_hom(&a, &s, StableMode::ModProjectives, Mode::Minimal).unwrap().dim();
            prop_assert_eq!(x, y);
        }
    }

    #[test]
    fn tor_is_balanced_over_commutative_algebras(seed in any::<u64>(), k in 0usize..2, n in 0usize..=3) {
        let alg = &algebras()[k];
        let mut r = rng(seed);
        let a = random_module(&mut r, alg, Side::Right, 4);
        let b = random_module(&mut r, alg, Side::Left, 4);
        let lhs = tor(&a, &b, n, Mode::Minimal).unwrap().dim();
        let rhs = tor(&flip(&b), &flip(&a), n, Mode::Minimal).unwrap().dim();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn tor_is_functorial(seed in any::<u64>(), k in 0usize..5, n in 0usize..=2) {
        let alg = &algebras()[k];
        let mut r = rng(seed);
        let a = random_module(&mut r, alg, Side::Right, 3);
        let x = random_module(&mut r, alg, Side::Left, 3);
        let y = random_module(&mut r, alg, Side::Left, 3);
        let z = random_module(&mut r, alg, Side::Left, 3);
        let g = random_map(&mut r, &x, &y);
        let h = random_map(&mut r, &y, &z);
        let (tx, ty, tz) = (
            tor(&a, &x, n, Mode::Minimal).unwrap(),
            tor(&a, &y, n, Mode::Minimal).unwrap(),
            tor(&a, &z, n, Mode::Minimal).unwrap(),
        );
        let hg = h.after(&g);
        prop_assert_eq!(tx.map_x(&hg, &tz), ty.map_x(&h, &tz).mul(&tx.map_x(&g, &ty)));
    }

    #[test]
    fn tor_long_exact_sequence(seed in any::<u64>(), k in 0usize..5) {
        let alg = &algebras()[k];
        let mut r = rng(seed);
        let a = random_module(&mut r, alg, Side::Right, 4);
        let ses = random_ses(&mut r, alg, Side::Left, 5);
        let s = splice_sequence(&a, &ses, 3, 1, Mode::Minimal).unwrap();
        prop_assert!(s.exact.len() >= 6);
        prop_assert!(s.all_exact(), "{:?}", s);
    }

    #[test]
    fn ext_is_additive(seed in any::<u64>(), k in 0usize..5, n in 0usize..=2) {
        let alg = &algebras()[k];
        let mut r = rng(seed);
        let m1 = random_module(&mut r, alg, Side::Left, 3);
        let m2 = random_module(&mut r, alg, Side::Left, 3);
        let x = random_module(&mut r, alg, Side::Left, 3);
        let sum = direct_sum(&[m1.clone(), m2.clone()], alg, Side::Left).module;
        let d = |m: &Module| ext(m, &x, n, Mode::Minimal).unwrap().dim();
        prop_assert_eq!(d(&sum), d(&m1) + d(&m2));
    }
}

#[test]
fn worked_modules_over_dual_numbers() {
    let alg = truncated_polynomial(2);
    let lam = Module::regular(&alg, Side::Right);
    let k = injstab::module::presets::simple_top(&alg, Side::Right);
    assert_eq!(hom_space(&k, &k).unwrap().dim(), 1);
    assert_eq!(hom_space(&k, &lam).unwrap().dim(), 1);
    // multiplication by x on Λ
    let x = ModuleMap::new(&lam, &lam, alg.lmul()[1].clone()).unwrap();
    let fa = map_factorization(&x);
    assert_eq!((fa.kernel.dim(), fa.image.dim(), fa.cokernel.dim()), (1, 1, 1));
    let (p, _) = projective_cover(&k, Mode::Minimal);
    assert_eq!(p.dim(), 2);
    let (i, iota) = injective_envelope(&k, Mode::Minimal);
    assert_eq!(i.module.dim(), 2);
    assert!(iota.is_mono());
    let (_, _, sigma, _) = cosyzygy(&k, Mode::Minimal);
    assert_eq!(sigma.dim(), 1);
    let tr = transpose(&k, Mode::Minimal);
    assert_eq!((tr.tr.dim(), tr.tr.side()), (1, Side::Left));
}

#[test]
fn worked_modules_over_cubic() {
    let alg = truncated_polynomial(3);
    let k = injstab::module::presets::simple_top(&alg, Side::Left);
    let (_, _, sigma, _) = cosyzygy(&k, Mode::Minimal);
    assert_eq!(sigma.dim(), 2);
    let r = injstab::resolution::resolve_projective(&k, 2, Mode::Minimal);
    assert_eq!(r.omega(1).dim(), 2);
}
