use num_bigint::BigInt;
use proptest::prelude::*;

use injstab::zmod::{
    classical_torsion, ext1_z, normal_form, tensor_stab_z, torsion_z, transpose_z, ZFGModule,
};
use injstab::ZMatrix;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn presentation() -> impl Strategy<Value = ZMatrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-12i64..=12, c), r)
            .prop_map(move |rows| ZMatrix::from_i64_shaped(c, &rows))
    })
}

/// Row `i += k·row j` followed by column `j += k·col i`: unimodular on both sides.
fn shear(m: &ZMatrix, i: usize, j: usize, k: i64) -> ZMatrix {
    let mut out = m.clone();
    if m.rows() > 1 {
        let (a, b) = (i % m.rows(), j % m.rows());
        if a != b {
            for c in 0..m.cols() {
                let v = &out[(a, c)] + &out[(b, c)] * BigInt::from(k);
                out[(a, c)] = v;
            }
        }
    }
    if m.cols() > 1 {
        let (a, b) = (i % m.cols(), j % m.cols());
        if a != b {
            for r in 0..m.rows() {
                let v = &out[(r, b)] + &out[(r, a)] * BigInt::from(k);
                out[(r, b)] = v;
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ext_of_cyclics_is_gcd(n in 1i64..40, m in 1i64..40) {
        prop_assert_eq!(ext1_z(&ZFGModule::cyclic(n), &ZFGModule::cyclic(m)), ZFGModule::cyclic(gcd(n, m)));
    }

    #[test]
    fn ext_is_additive_in_each_slot(a in presentation(), b in presentation(), c in presentation()) {
        let (a, b, c) = (normal_form(&a), normal_form(&b), normal_form(&c));
        prop_assert_eq!(ext1_z(&a.direct_sum(&b), &c), ext1_z(&a, &c).direct_sum(&ext1_z(&b, &c)));
        prop_assert_eq!(ext1_z(&c, &a.direct_sum(&b)), ext1_z(&c, &a).direct_sum(&ext1_z(&c, &b)));
    }

    #[test]
    fn torsion_three_ways(m in presentation()) {
        let a = normal_form(&m);
        let ts = tensor_stab_z(&a, &ZFGModule::free(1));
        let tz = torsion_z(&a).module;
        prop_assert_eq!(&ts, &tz);
        prop_assert_eq!(&tz, &classical_torsion(&a));
        prop_assert_eq!(ts.torsion_summands(), a.factors.len());
        prop_assert_eq!(ts.rank, 0);
    }

    #[test]
    fn normal_form_is_invariant(m in presentation(), i in 0usize..4, j in 0usize..4, k in -3i64..=3) {
        prop_assert_eq!(normal_form(&shear(&m, i, j, k)), normal_form(&m));
    }

    #[test]
    fn transpose_kills_free_part(m in presentation()) {
        let a = normal_form(&m);
        let t = transpose_z(&a);
        prop_assert_eq!(t, classical_torsion(&a));
    }
}

#[test]
fn worked_groups() {
    assert_eq!(normal_form(&ZMatrix::zeros(0, 3)), ZFGModule::free(3));
    let a = ZFGModule::cyclic(4).direct_sum(&ZFGModule::free(1));
    assert_eq!(tensor_stab_z(&a, &ZFGModule::free(1)), ZFGModule::cyclic(4));
    assert!(tensor_stab_z(&ZFGModule::free(3), &ZFGModule::cyclic(7)).is_zero());
    assert_eq!(tensor_stab_z(&ZFGModule::cyclic(6), &ZFGModule::cyclic(4)), ZFGModule::cyclic(2));
    let b = normal_form(&ZMatrix::from_i64(&[&[6, 0], &[0, 0]]));
    assert_eq!(torsion_z(&b).module.to_string(), "Z/6");
    let c = normal_form(&ZMatrix::from_i64(&[&[4, 0, 0], &[0, 6, 0]]));
    assert_eq!(torsion_z(&c).module.factors, vec![BigInt::from(2), BigInt::from(12)]);
    assert_eq!(transpose_z(&ZFGModule::cyclic(9)), ZFGModule::cyclic(9));
}
