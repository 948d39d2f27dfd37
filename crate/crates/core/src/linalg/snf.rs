use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::ZMatrix;

/// Smith normal form `U·A·V = S` with unimodular `U`, `V`.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub s: ZMatrix,
    pub u: ZMatrix,
    pub v: ZMatrix,
    pub invariant_factors: Vec<BigInt>,
}

impl SnfResult {
    /// Nonzero diagonal entries of `S`.
    pub fn rank(&self) -> usize {
        let n = self.s.rows().min(self.s.cols());
        (0..n).filter(|&i| !self.s[(i, i)].is_zero()).count()
    }
}

/// Smith normal form including unit invariant factors.
pub fn snf(a: &ZMatrix) -> SnfResult {
    snf_with(a, false)
}

/// Smith normal form; with `drop_units` the factors equal to 1 are omitted.
pub fn snf_with(a: &ZMatrix, drop_units: bool) -> SnfResult {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = ZMatrix::identity(m);
    let mut v = ZMatrix::identity(n);

    for t in 0..m.min(n) {
        let Some((pi, pj)) = smallest_entry(&s, t, t) else {
            break;
        };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = -s[(i, t)].div_floor(&s[(t, t)]);
                s.add_row(i, t, &q);
                u.add_row(i, t, &q);
                dirty |= !s[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = -s[(t, j)].div_floor(&s[(t, t)]);
                s.add_col(j, t, &q);
                v.add_col(j, t, &q);
                dirty |= !s[(t, j)].is_zero();
            }
            if dirty {
                // a smaller remainder appeared in row or column t: move it to the pivot
                let (pi, pj) = smallest_in_cross(&s, t);
                s.swap_rows(t, pi);
                u.swap_rows(t, pi);
                s.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            // row and column clear: enforce divisibility on the trailing block
            let p = s[(t, t)].clone();
            let bad = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !s[(i, j)].is_multiple_of(&p));
            match bad {
                Some((i, _)) => {
                    let one = BigInt::one();
                    s.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }

    let invariant_factors = (0..m.min(n))
        .map(|i| s[(i, i)].clone())
        .filter(|d| !d.is_zero() && !(drop_units && d.is_one()))
        .collect();
    SnfResult {
        s,
        u,
        v,
        invariant_factors,
    }
}

fn smallest_entry(s: &ZMatrix, r0: usize, c0: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in r0..s.rows() {
        for j in c0..s.cols() {
            let x = &s[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < s[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn smallest_in_cross(s: &ZMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let cands = (t..s.rows())
        .map(|i| (i, t))
        .chain((t + 1..s.cols()).map(|j| (t, j)));
    for (i, j) in cands {
        let x = &s[(i, j)];
        if !x.is_zero() && (s[best].is_zero() || x.abs() < s[best].abs()) {
            best = (i, j);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors(r: &SnfResult) -> Vec<i64> {
        r.invariant_factors.iter().map(|x| x.try_into().unwrap()).collect()
    }

    fn check(a: &ZMatrix, r: &SnfResult) {
        assert_eq!(r.u.mul(a).mul(&r.v), r.s);
        assert_eq!(r.u.to_q().det().abs(), crate::rational::Q::one());
        assert_eq!(r.v.to_q().det().abs(), crate::rational::Q::one());
    }

    #[test]
    fn diagonal_input() {
        let a = ZMatrix::from_i64(&[&[2, 0], &[0, 6]]);
        let r = snf(&a);
        check(&a, &r);
        assert_eq!(factors(&r), vec![2, 6]);
    }

    #[test]
    fn two_by_two() {
        let a = ZMatrix::from_i64(&[&[2, 4], &[6, 8]]);
        let r = snf(&a);
        check(&a, &r);
        assert_eq!(factors(&r), vec![2, 4]);
    }

    #[test]
    fn zero_matrix() {
        let a = ZMatrix::zeros(2, 3);
        let r = snf(&a);
        check(&a, &r);
        assert!(r.s.is_zero());
        assert!(r.invariant_factors.is_empty());
    }

    #[test]
    fn coprime_diagonal_needs_mixing() {
        let a = ZMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        let r = snf(&a);
        check(&a, &r);
        assert_eq!(factors(&r), vec![1, 6]);
        assert_eq!(factors(&snf_with(&a, true)), vec![6]);
    }
}
