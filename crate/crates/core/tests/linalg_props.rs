use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use injstab::linalg::{rref_solve, snf};
use injstab::{QMatrix, ZMatrix, Q};

/// Plain Gaussian elimination over BigRational; independent of the library.
fn oracle_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && !row[c].is_zero() {
                let f = &row[c] / &pivot[c];
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn big_det(m: &ZMatrix) -> BigRational {
    m.to_q().det().to_big()
}

fn int_matrix(max_r: usize, max_c: usize, bound: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_r, 1..=max_c).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-bound..=bound, c), r)
    })
}

fn q_matrix(rows: &[Vec<i64>]) -> QMatrix {
    QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Q::from_int(x)).collect()).collect())
}

fn z_matrix(rows: &[Vec<i64>]) -> ZMatrix {
    ZMatrix::from_i64_shaped(rows[0].len(), rows)
}

fn big(q: &Q) -> BigRational {
    q.to_big()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rational_ops_match_bigrational(a in any::<i64>(), b in 1..i64::MAX, c in any::<i64>(), d in 1..i64::MAX) {
        let x = Q::new(a, b);
        let y = Q::new(c, d);
        let bx = BigRational::new(a.into(), b.into());
        let by = BigRational::new(c.into(), d.into());
        prop_assert_eq!(big(&(&x + &y)), &bx + &by);
        prop_assert_eq!(big(&(&x - &y)), &bx - &by);
        prop_assert_eq!(big(&(&x * &y)), &bx * &by);
        if !by.is_zero() {
            prop_assert_eq!(big(&(&x / &y)), &bx / &by);
        }
        prop_assert_eq!(x.cmp(&y), bx.cmp(&by));
        prop_assert_eq!(Q::parse(&x.to_string()), Some(x.clone()));
    }

    #[test]
    fn rref_is_idempotent(rows in int_matrix(5, 6, 9)) {
        let a = q_matrix(&rows);
        let r1 = a.rref();
        let r2 = r1.matrix.rref();
        prop_assert_eq!(&r1.matrix, &r2.matrix);
        prop_assert_eq!(r1.pivots, r2.pivots);
    }

    #[test]
    fn rank_kernel_and_solve(rows in int_matrix(5, 6, 9), y in prop::collection::vec(-5i64..=5, 6)) {
        let a = q_matrix(&rows);
        let n = a.cols();
        let r = rref_solve(&a, None).unwrap();
        prop_assert_eq!(r.rank, oracle_rank(&rows));
        prop_assert_eq!(r.rank, a.transpose().rank());
        prop_assert_eq!(r.kernel_basis.cols(), n - r.rank);
        prop_assert!(a.mul(&r.kernel_basis).is_zero());
        prop_assert_eq!(r.kernel_basis.rank(), r.kernel_basis.cols());
        let yq: Vec<Q> = y[..n].iter().map(|&v| Q::from_int(v)).collect();
        let b = a.mul_vec(&yq);
        let s = rref_solve(&a, Some(&b)).unwrap().solution.expect("b lies in the image");
        prop_assert_eq!(a.mul_vec(&s), b);
    }

    #[test]
    fn snf_certificate(rows in int_matrix(5, 5, 20)) {
        let a = z_matrix(&rows);
        let s = snf(&a);
        prop_assert_eq!(s.u.mul(&a).mul(&s.v), s.s.clone());
        prop_assert_eq!(big_det(&s.u).abs(), BigRational::one());
        prop_assert_eq!(big_det(&s.v).abs(), BigRational::one());
        // diagonal, nonnegative, divisibility chain
        for i in 0..s.s.rows() {
            for j in 0..s.s.cols() {
                if i != j {
                    prop_assert!(s.s[(i, j)].is_zero());
                }
            }
        }
        let d: Vec<BigInt> = (0..s.s.rows().min(s.s.cols())).map(|i| s.s[(i, i)].clone()).collect();
        for w in d.windows(2) {
            prop_assert!(!w[0].is_negative());
            if !w[0].is_zero() {
                prop_assert!((&w[1] % &w[0]).is_zero());
            } else {
                prop_assert!(w[1].is_zero());
            }
        }
        prop_assert_eq!(s.rank(), oracle_rank(&rows));
        prop_assert_eq!(s.rank(), q_matrix(&rows).rank());
    }
}

#[test]
fn worked_linear_systems() {
    let id = QMatrix::identity(2);
    let r = rref_solve(&id, Some(&[Q::from_int(1), Q::from_int(2)])).unwrap();
    assert_eq!((r.rank, r.kernel_basis.cols()), (2, 0));
    assert_eq!(r.solution.unwrap(), vec![Q::from_int(1), Q::from_int(2)]);

    let a = QMatrix::from_i64(&[&[1, 2], &[2, 4]]);
    let r = rref_solve(&a, None).unwrap();
    assert_eq!(r.rank, 1);
    let k = r.kernel_basis.col(0);
    // proportional to (-2, 1)
    assert_eq!(&k[0] * &Q::from_int(1), &k[1] * &Q::from_int(-2));

    let a = QMatrix::from_i64(&[&[1], &[0]]);
    assert!(rref_solve(&a, Some(&[Q::zero(), Q::one()])).unwrap().solution.is_none());
}

#[test]
fn worked_smith_forms() {
    let f = |rows: &[&[i64]]| snf(&ZMatrix::from_i64(rows)).invariant_factors;
    assert_eq!(f(&[&[2, 0], &[0, 6]]), vec![BigInt::from(2), BigInt::from(6)]);
    assert_eq!(f(&[&[2, 4], &[6, 8]]), vec![BigInt::from(2), BigInt::from(4)]);
    let z = snf(&ZMatrix::zeros(2, 3));
    assert!(z.s.is_zero());
    assert_eq!(z.rank(), 0);
}
