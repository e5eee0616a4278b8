// Box elements of P(1,1,2) and a fan with torsion, grouped by cone.

use stackyring::arith::{format_rational, int_vec};
use stackyring::lattice::FgAbGroup;
use stackyring::stacky::ExtendedStackyFan;

fn show(name: &str, fan: &ExtendedStackyFan) {
    println!("{name}");
    for cone in fan.fan().max_cones() {
        let (local, _) = fan.local_group(cone).unwrap();
        let bx = fan.box_of_cone(cone).unwrap();
        println!("  cone {cone}: N(sigma) = {local}, |Box| = {}", bx.len());
    }
    for b in fan.box_elements() {
        println!("  {:?} in {} with age {}", b.value, b.cone, format_rational(&b.age));
    }
}

pub fn main() {
    let p112 = ExtendedStackyFan::new(
        FgAbGroup::free(2),
        vec![int_vec(&[1, 0]), int_vec(&[0, 1]), int_vec(&[-1, -2])],
        vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        vec![],
    )
    .unwrap();
    show("P(1,1,2)", &p112);

    let gerby = ExtendedStackyFan::new(
        FgAbGroup::new(1, vec![2.into()]).unwrap(),
        vec![int_vec(&[1, 0]), int_vec(&[-1, 1])],
        vec![vec![0], vec![1]],
        vec![],
    )
    .unwrap();
    show("P^1 with a Z/2 twist", &gerby);
}
