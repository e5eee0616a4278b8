// P(1,1,2) and its resolution by the second Hirzebruch surface.

use stackyring::arith::int_vec;
use stackyring::chowring::BaseRing;
use stackyring::lattice::FgAbGroup;
use stackyring::resolution::{check_support_function, fiber_dimension_check, validate_subdivision, Subdivision};
use stackyring::stacky::ExtendedStackyFan;

pub fn main() {
    let coarse = ExtendedStackyFan::new(
        FgAbGroup::free(2),
        vec![int_vec(&[1, 0]), int_vec(&[0, 1]), int_vec(&[-1, -2])],
        vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        vec![],
    )
    .unwrap();
    let sub = Subdivision::new(coarse, vec![int_vec(&[0, -1])], vec![vec![0, 1], vec![1, 2], vec![0, 3], vec![2, 3]]).unwrap();
    println!("issues: {:?}", validate_subdivision(&sub));
    let h = check_support_function(&sub, None, 16).unwrap();
    println!("support function {:?}, {} interior wall(s) checked", h.h, h.walls_checked);
    for (name, base) in [("point", BaseRing::point()), ("P^1", BaseRing::projective_space(1))] {
        let dims = fiber_dimension_check(&sub, &base.with_zero_twists(3)).unwrap();
        println!("over {name}: orbifold {} vs resolved {}", dims.orbifold, dims.resolved);
    }
}
