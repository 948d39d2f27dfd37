use proptest::prelude::*;

use injstab::algebra::presets::{ground_field, product, truncated_polynomial, upper_triangular_2};
use injstab::calculus::{inj_stab_tensor, tensor_stab, Route};
use injstab::fp::{battery, four_term_check, FpPresentation};
use injstab::functor::{Direction, Functor};
use injstab::module::{direct_sum, presets::simple_top};
use injstab::random::{random_fp, random_map, random_module, rng};
use injstab::resolution::{cosyzygy, fresh_envelope};
use injstab::{Algebra, Mode, Module, Side};

fn algebras() -> Vec<Algebra> {
    vec![
        truncated_polynomial(2),
        truncated_polynomial(3),
        truncated_polynomial(4),
        upper_triangular_2(),
        product(&truncated_polynomial(2), &ground_field()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn stabilized_tensor_is_additive(seed in any::<u64>(), k in 0usize..5) {
        let alg = &algebras()[k];
        let mut r = rng(seed);
        let a = random_module(&mut r, alg, Side::Right, 4);
        let x = random_module(&mut r, alg, Side::Left, 3);
        let y = random_module(&mut r, alg, Side::Left, 3);
        let g = Functor::tensor(&a, Mode::Minimal).inj_stab(Mode::Minimal).unwrap();
        let sum = direct_sum(&[x.clone(), y.clone()], alg, Side::Left).module;
        let d = |m: &Module| g.eval_obj(m).unwrap().dimension;
        prop_assert_eq!(d(&sum), d(&x) + d(&y));
    }

    #[test]
    fn stabilized_tensor_is_functorial(seed in any::<u64>(), k in 0usize..5) {
        let alg = &algebras()[k];
        let mut r = rng(seed);
        let a = random_module(&mut r, alg, Side::Right, 3);
        let x = random_module(&mut r, alg, Side::Left, 3);
        let y = random_module(&mut r, alg, Side::Left, 3);
        let z = random_module(&mut r, alg, Side::Left, 3);
        let g = random_map(&mut r, &x, &y);
        let h = random_map(&mut r, &y, &z);
        for f in [
            Functor::tensor(&a, Mode::Minimal).inj_stab(Mode::Minimal).unwrap(),
            Functor::tensor(&a, Mode::Minimal).satellite(Direction::Right, Mode::Minimal).unwrap(),
        ] {
            let lhs = f.eval_map(&h.after(&g)).unwrap();
            let rhs = f.eval_map(&h).unwrap().mul(&f.eval_map(&g).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn stabilization_is_the_kernel_for_any_envelope(seed in any::<u64>(), k in 0usize..5) {
        let alg = &algebras()[k];
        let mut r = rng(seed);
        let a = random_module(&mut r, alg, Side::Right, 4);
        let b = random_module(&mut r, alg, Side::Left, 4);
        let f = Functor::tensor(&a, Mode::Minimal);
        let fb = f.value(&b).unwrap();
        let stab = f.inj_stab(Mode::Minimal).unwrap().value(&b).unwrap();
        // an independently built non-minimal envelope gives the same kernel
        let (inj, iota) = fresh_envelope(&b, Mode::Free);
        let fi = f.value(&inj.module).unwrap();
        let ker = f.map_between(&iota, &fb, &fi).unwrap().kernel();
        prop_assert_eq!(ker.cols(), stab.dim());
        prop_assert!(ker.same_span(&stab.witness()));
        prop_assert_eq!(inj_stab_tensor(&a, &b, Mode::Minimal).unwrap().dimension, stab.dim());
    }

    #[test]
    fn routes_agree_in_both_modes(seed in any::<u64>(), k in 0usize..5) {
        let alg = &algebras()[k];
        let mut r = rng(seed);
        let a = random_module(&mut r, alg, Side::Right, 4);
        let b = random_module(&mut r, alg, Side::Left, 4);
        let min = tensor_stab(&a, &b, Route::All, Mode::Minimal).unwrap();
        let free = tensor_stab(&a, &b, Route::All, Mode::Free).unwrap();
        prop_assert_eq!(min.routes.len(), 3);
        prop_assert_eq!(&min.routes, &free.routes);
        prop_assert!(min.subspace.unwrap().same_subspace(&free.subspace.unwrap()));
    }

    #[test]
    fn four_term_sequence_is_exact(seed in any::<u64>(), k in 0usize..5) {
        let alg = &algebras()[k];
        let mut r = rng(seed);
        let f = random_fp(&mut r, alg, Side::Right, 4);
        let fp = FpPresentation::new(&f);
        for x in battery(alg, Side::Right, &mut r, 4) {
            let t = four_term_check(&fp, &x).unwrap();
            prop_assert!(t.exact);
            prop_assert_eq!(t.dims[0] + t.dims[2], t.dims[1] + t.dims[3]);
        }
    }
}

#[test]
fn worked_stabilized_tensor_over_dual_numbers() {
    let alg = truncated_polynomial(2);
    let kr = simple_top(&alg, Side::Right);
    let kl = simple_top(&alg, Side::Left);
    let lam = Module::regular(&alg, Side::Left);
    let f = Functor::tensor(&kr, Mode::Minimal);
    let g = f.inj_stab(Mode::Minimal).unwrap();
    assert_eq!(g.eval_obj(&kl).unwrap().dimension, 1);
    assert_eq!(g.eval_obj(&lam).unwrap().dimension, 0);
    // k ⊗ ι vanishes on the socle embedding
    let (inj, iota, _, _) = cosyzygy(&kl, Mode::Minimal);
    let vk = f.value(&kl).unwrap();
    let vi = f.value(&inj.module).unwrap();
    assert!(f.map_between(&iota, &vk, &vi).unwrap().is_zero());
    // S¹ Tor₁(k, −) at k and C¹(k ⊗ −) at k
    let s = Functor::tor(&kr, 1, Mode::Minimal).satellite(Direction::Right, Mode::Minimal).unwrap();
    assert_eq!(s.eval_obj(&kl).unwrap().dimension, 1);
    let c = f.cosatellite(Direction::Right, Mode::Minimal).unwrap();
    assert_eq!(c.eval_obj(&kl).unwrap().dimension, 0);
    assert!(!f.property_a(&kl, Mode::Minimal).unwrap());
    assert!(f.property_a(&lam, Mode::Minimal).unwrap());
}

#[test]
fn worked_stabilized_tensor_over_cubic() {
    let alg = truncated_polynomial(3);
    let lam = Module::regular(&alg, Side::Right);
    let (a, _) = lam.quotient(&alg.radical().clone(), "Λ/(x)");
    let reg = Module::regular(&alg, Side::Left);
    let (b, _) = reg.quotient(&alg.radical_power(2), "Λ/(x²)");
    let r = tensor_stab(&a, &b, Route::All, Mode::Minimal).unwrap();
    assert_eq!(r.dim, 1);
}
