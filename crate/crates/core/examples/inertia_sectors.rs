// Double inertia and 3-twisted sectors of P(1,1,2) with their obstruction rays.

use stackyring::arith::{format_rational, int_vec};
use stackyring::inertia::{inertia_components, obstruction_exponents, three_sectors};
use stackyring::lattice::FgAbGroup;
use stackyring::stacky::ExtendedStackyFan;

pub fn main() {
    let fan = ExtendedStackyFan::new(
        FgAbGroup::free(2),
        vec![int_vec(&[1, 0]), int_vec(&[0, 1]), int_vec(&[-1, -2])],
        vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        vec![],
    )
    .unwrap();
    for r in 1..=3 {
        println!("order {r}: {} components", inertia_components(&fan, r).unwrap().len());
    }
    for s in three_sectors(&fan).unwrap() {
        let [g1, g2, g3] = [&s.tuple[0], &s.tuple[1], &s.tuple[2]];
        let obs = obstruction_exponents(&fan, g1, g2, g3).unwrap();
        println!(
            "{:?} {:?} {:?}: cone {}, total age {}, obstruction rays {obs:?}",
            g1.value,
            g2.value,
            g3.value,
            s.joint_cone,
            format_rational(&s.total_age)
        );
    }
}
