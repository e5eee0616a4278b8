// The orbifold Chow ring of P(1,1,2) with its multiplication table.

use stackyring::arith::{format_rational, int_vec};
use stackyring::chowring::{orbifold_ring, BaseRing};
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
    let ring = orbifold_ring(&fan, &BaseRing::point().with_zero_twists(3)).unwrap();
    println!("dimension {}", ring.dim());
    for (d, c) in ring.histogram() {
        println!("  degree {}: {c}", format_rational(&d));
    }
    for i in 0..ring.dim() {
        for j in i..ring.dim() {
            let terms: Vec<String> = ring
                .product(i, j)
                .iter()
                .map(|(k, c)| format!("{} {}", format_rational(c), ring.basis_label(*k)))
                .collect();
            if !terms.is_empty() {
                println!("  {} * {} = {}", ring.basis_label(i), ring.basis_label(j), terms.join(" + "));
            }
        }
    }
    println!("ring axioms hold: {}", ring.verify().holds());
}
