// A mu_3-gerbe over P^1 whose twist is -H: the ring is H*(P^1)[t]/(t^3 - 1).

use stackyring::arith::format_rational;
use stackyring::chowring::{orbifold_ring, BaseRing};
use stackyring::document::FanDocument;

pub fn main() {
    let doc = FanDocument::parse(r#"{"group":{"rank":0,"torsion":[3]},"rays":[],"extra":[[1]]}"#).unwrap();
    let fan = doc.load().unwrap().fan;
    let p1 = BaseRing::projective_space(1);
    let h = p1.basis_vector(1).into_iter().map(|c| -c).collect();
    let base = p1.with_twists(vec![h]).unwrap();
    let ring = orbifold_ring(&fan, &base).unwrap();
    println!("dimension {} (sectors: {})", ring.dim(), ring.n_sectors());
    let t = ring.find_basis(1, &[], 0).unwrap();
    let mut power = vec![(t, num_rational::BigRational::from_integer(1.into()))];
    for k in 2..=3 {
        power = ring.mul(&power, &[(t, num_rational::BigRational::from_integer(1.into()))]);
        let shown: Vec<String> = power
            .iter()
            .map(|(i, c)| format!("{} {}", format_rational(c), ring.basis_label(*i)))
            .collect();
        println!("t^{k} = {}", shown.join(" + "));
    }
}
