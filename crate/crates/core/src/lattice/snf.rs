//! Smith normal form with unimodular witnesses.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::IntMatrix;

/// `u * a * v == d` with `d` diagonal, nonnegative, and `d[i] | d[i+1]`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub d: IntMatrix,
}

impl Snf {
    /// The `min(rows, cols)` diagonal entries.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> Snf {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut u_inv = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut v_inv = IntMatrix::identity(n);

    // Each primitive operation is mirrored on the witnesses so that
    // u * a * v == d and u * u_inv == 1, v * v_inv == 1 hold throughout.
    let row_swap = |d: &mut IntMatrix, u: &mut IntMatrix, u_inv: &mut IntMatrix, i, j| {
        d.swap_rows(i, j);
        u.swap_rows(i, j);
        u_inv.swap_cols(i, j);
    };
    let col_swap = |d: &mut IntMatrix, v: &mut IntMatrix, v_inv: &mut IntMatrix, i, j| {
        d.swap_cols(i, j);
        v.swap_cols(i, j);
        v_inv.swap_rows(i, j);
    };
    // row_t += k row_s
    let row_add = |d: &mut IntMatrix, u: &mut IntMatrix, u_inv: &mut IntMatrix, t, s, k: &BigInt| {
        d.add_row_multiple(t, s, k);
        u.add_row_multiple(t, s, k);
        u_inv.add_col_multiple(s, t, &-k);
    };
    // col_t += k col_s
    let col_add = |d: &mut IntMatrix, v: &mut IntMatrix, v_inv: &mut IntMatrix, t, s, k: &BigInt| {
        d.add_col_multiple(t, s, k);
        v.add_col_multiple(t, s, k);
        v_inv.add_row_multiple(s, t, &-k);
    };

    for t in 0..m.min(n) {
        loop {
            // smallest nonzero |entry| in the trailing block, first in row-major order
            let mut pivot: Option<(usize, usize)> = None;
            for r in t..m {
                for c in t..n {
                    let x = &d[(r, c)];
                    if x.is_zero() {
                        continue;
                    }
                    if pivot.is_none_or(|(pr, pc)| x.abs() < d[(pr, pc)].abs()) {
                        pivot = Some((r, c));
                    }
                }
            }
            let Some((pr, pc)) = pivot else {
                return finish(d, u, u_inv, v, v_inv);
            };
            row_swap(&mut d, &mut u, &mut u_inv, t, pr);
            col_swap(&mut d, &mut v, &mut v_inv, t, pc);

            let mut clean = true;
            for r in t + 1..m {
                let q = &d[(r, t)] / &d[(t, t)];
                if !q.is_zero() {
                    row_add(&mut d, &mut u, &mut u_inv, r, t, &-q);
                }
                clean &= d[(r, t)].is_zero();
            }
            for c in t + 1..n {
                let q = &d[(t, c)] / &d[(t, t)];
                if !q.is_zero() {
                    col_add(&mut d, &mut v, &mut v_inv, c, t, &-q);
                }
                clean &= d[(t, c)].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility: pull an offending row up so the next pass reduces it
            let offending = (t + 1..m)
                .flat_map(|r| (t + 1..n).map(move |c| (r, c)))
                .find(|&(r, c)| !(&d[(r, c)] % &d[(t, t)]).is_zero());
            match offending {
                Some((r, _)) => row_add(&mut d, &mut u, &mut u_inv, t, r, &BigInt::from(1)),
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
    }
    finish(d, u, u_inv, v, v_inv)
}

fn finish(d: IntMatrix, u: IntMatrix, u_inv: IntMatrix, v: IntMatrix, v_inv: IntMatrix) -> Snf {
    Snf { u, u_inv, v, v_inv, d }
}

/// Integer solution of `a * x = b`, if one exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows(), b.len(), "right-hand side length mismatch");
    let snf = smith_normal_form(a);
    let ub = snf.u.mul_vec(b);
    let diag = snf.diagonal();
    let mut z = vec![BigInt::zero(); a.cols()];
    for (i, ubi) in ub.iter().enumerate() {
        match diag.get(i) {
            Some(di) if !di.is_zero() => {
                if !(ubi % di).is_zero() {
                    return None;
                }
                z[i] = ubi / di;
            }
            _ => {
                if !ubi.is_zero() {
                    return None;
                }
            }
        }
    }
    Some(snf.v.mul_vec(&z))
}

/// A ℤ-basis of `{x : a * x = 0}`, as columns.
pub fn integer_kernel(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    (r..a.cols()).map(|c| snf.v.column(c)).collect()
}
