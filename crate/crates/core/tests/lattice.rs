mod common;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use stackyring::arith::{int_vec, IntMatrix};
use stackyring::lattice::{
    beta_from_vectors, cokernel, gale_dual, gerbe_group, kernel, smith_normal_form, verify_gale_exactness, FgAbGroup,
    GroupHom,
};
use stackyring::Error;

/// Cofactor determinant; the matrices here are at most 4 x 4.
fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for c in 0..n {
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != c).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][c] * det(&minor);
        if c % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Determinantal divisors: gcd of all k x k minors.
fn determinantal_divisors(a: &[Vec<i64>], rows: usize, cols: usize) -> Vec<BigInt> {
    (1..=rows.min(cols))
        .map(|k| {
            let mut g = BigInt::zero();
            for rs in subsets(rows, k) {
                for cs in subsets(cols, k) {
                    let minor: Vec<Vec<BigInt>> = rs.iter().map(|&r| cs.iter().map(|&c| BigInt::from(a[r][c])).collect()).collect();
                    g = g.gcd(&det(&minor));
                }
            }
            g
        })
        .collect()
}

fn matrix() -> impl Strategy<Value = (usize, usize, Vec<Vec<i64>>)> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-6i64..=6, c), r).prop_map(move |m| (r, c, m))
    })
}

fn big(m: &[Vec<i64>]) -> IntMatrix {
    let refs: Vec<&[i64]> = m.iter().map(Vec::as_slice).collect();
    IntMatrix::from_i64(&refs)
}

proptest! {
    #[test]
    fn smith_form_witnesses((r, c, a) in matrix()) {
        let m = big(&a);
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        prop_assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(r));
        prop_assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(c));
        for i in 0..r {
            for j in 0..c {
                if i != j {
                    prop_assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let diag = s.diagonal();
        for w in diag.windows(2) {
            prop_assert!(!w[0].is_negative());
            if !w[0].is_zero() {
                prop_assert!((&w[1] % &w[0]).is_zero());
            } else {
                prop_assert!(w[1].is_zero());
            }
        }
    }

    #[test]
    fn smith_diagonal_matches_minors((r, c, a) in matrix()) {
        let s = smith_normal_form(&big(&a));
        let divisors = determinantal_divisors(&a, r, c);
        let mut prefix = BigInt::one();
        for (k, dk) in divisors.iter().enumerate() {
            prefix *= &s.diagonal()[k];
            prop_assert_eq!(&prefix, dk);
        }
    }

    #[test]
    fn group_arithmetic(t1 in 1i64..8, t2 in 1i64..8, x in prop::collection::vec(-20i64..20, 3), y in prop::collection::vec(-20i64..20, 3)) {
        let g = FgAbGroup::from_orders(1, &[BigInt::from(t1), BigInt::from(t2)]).unwrap().group;
        prop_assert_eq!(g.order(), None);
        let n = g.coords();
        let a = g.reduce(&int_vec(&x[..n]));
        let b = g.reduce(&int_vec(&y[..n]));
        prop_assert_eq!(g.add(&a, &b), g.add(&b, &a));
        prop_assert!(g.is_zero(&g.add(&a, &g.neg(&a))));
        prop_assert_eq!(g.sub(&g.add(&a, &b), &b), a.clone());
        let tors: BigInt = g.torsion().iter().product();
        prop_assert_eq!(tors, BigInt::from(t1 * t2));
    }

    #[test]
    fn cokernel_order_is_determinant(a in prop::collection::vec(prop::collection::vec(-5i64..=5, 3), 3)) {
        let m = big(&a);
        let f = GroupHom::new(FgAbGroup::free(3), FgAbGroup::free(3), m.clone()).unwrap();
        let (c, proj) = cokernel(&f);
        let d = det(&m.to_rows());
        if d.is_zero() {
            prop_assert!(!c.is_finite());
        } else {
            prop_assert_eq!(c.order().unwrap(), d.abs());
        }
        prop_assert!(proj.is_surjective());
        prop_assert!(proj.compose(&f).unwrap().is_zero());
    }
}

#[test]
fn kernel_of_surjection_onto_torsion() {
    let target = FgAbGroup::new(0, vec![BigInt::from(6)]).unwrap();
    let f = beta_from_vectors(&target, &[int_vec(&[2]), int_vec(&[3])]).unwrap();
    let (k, incl) = kernel(&f).unwrap();
    assert_eq!(k, FgAbGroup::free(2));
    assert!(f.compose(&incl).unwrap().is_zero());
    // index of the kernel is |image| = 6
    let m: Vec<Vec<BigInt>> = incl.image_generators();
    assert_eq!(det(&[m[0].clone(), m[1].clone()]).abs(), BigInt::from(6));
}

#[test]
fn gale_dual_rejects_infinite_cokernel() {
    let beta = beta_from_vectors(&FgAbGroup::free(2), &[int_vec(&[1, 0]), int_vec(&[-1, 0])]).unwrap();
    assert_eq!(gale_dual(&beta).unwrap_err(), Error::InfiniteCokernel);
}

#[test]
fn gale_dual_of_projective_line_cover() {
    let n = FgAbGroup::free(1);
    let beta = beta_from_vectors(&n, &[int_vec(&[2]), int_vec(&[-2]), int_vec(&[1])]).unwrap();
    let g = gale_dual(&beta).unwrap();
    assert_eq!(g.dg, FgAbGroup::free(2));
    assert!(verify_gale_exactness(&beta, &g).unwrap().is_exact());
    assert!(gerbe_group(&beta).unwrap().is_trivial());
}

#[test]
fn gale_dual_of_torsion_gerbe() {
    // beta = (1,1): Z -> Z/4 + Z/9 is onto the cyclic group of order 36
    let p = FgAbGroup::from_orders(0, &[BigInt::from(4), BigInt::from(9)]).unwrap();
    let v = p.group.reduce(&p.projection.mul_vec(&int_vec(&[1, 1])));
    let beta = beta_from_vectors(&p.group, &[v]).unwrap();
    let g = gale_dual(&beta).unwrap();
    assert_eq!(g.dg, FgAbGroup::free(1));
    assert_eq!(gerbe_group(&beta).unwrap(), FgAbGroup::new(0, vec![BigInt::from(36)]).unwrap());
}
