// Gale duals of the two extended fans of the degree-two cover of P^1.

use stackyring::arith::int_vec;
use stackyring::lattice::{beta_from_vectors, gale_dual, gerbe_group, verify_gale_exactness, FgAbGroup};

pub fn main() {
    let n = FgAbGroup::free(1);
    for (name, extra) in [("torsion-free extra", 1), ("zero extra", 0)] {
        let beta = beta_from_vectors(&n, &[int_vec(&[2]), int_vec(&[-2]), int_vec(&[extra])]).unwrap();
        let g = gale_dual(&beta).unwrap();
        let exact = verify_gale_exactness(&beta, &g).unwrap().is_exact();
        println!("{name}: DG = {}, gerbe band = {}, exact = {exact}", g.dg, gerbe_group(&beta).unwrap());
    }
}
