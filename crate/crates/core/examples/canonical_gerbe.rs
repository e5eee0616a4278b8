// The canonical and the trivial mu_2-gerbe over P^2 have isomorphic rings.

use stackyring::arith::int_vec;
use stackyring::chowring::{canonical_bijection, isomorphic_presentation_check, orbifold_ring, BaseRing};
use stackyring::lattice::FgAbGroup;
use stackyring::stacky::ExtendedStackyFan;

fn gerbe(last: i64) -> ExtendedStackyFan {
    ExtendedStackyFan::new(
        FgAbGroup::new(2, vec![2.into()]).unwrap(),
        vec![int_vec(&[1, 0, 0]), int_vec(&[0, 1, 0]), int_vec(&[-1, -1, last])],
        vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        vec![],
    )
    .unwrap()
}

pub fn main() {
    let base = BaseRing::point().with_zero_twists(3);
    let canonical = orbifold_ring(&gerbe(1), &base).unwrap();
    let trivial = orbifold_ring(&gerbe(0), &base).unwrap();
    println!("dimensions: {} and {}", canonical.dim(), trivial.dim());
    match canonical_bijection(&canonical, &trivial) {
        Some(bij) => println!(
            "same tables under the canonical bijection: {}",
            isomorphic_presentation_check(&canonical, &trivial, &bij).unwrap()
        ),
        None => println!("bases do not correspond"),
    }
}
