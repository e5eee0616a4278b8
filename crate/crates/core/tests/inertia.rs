mod common;

use std::collections::BTreeMap;

use num_rational::BigRational;

use common::{load, FAN_FIXTURES};
use stackyring::inertia::{inertia_components, obstruction_consistent, obstruction_exponents, three_sectors};

#[test]
fn first_inertia_is_the_box() {
    for name in FAN_FIXTURES {
        let fan = load(name).fan;
        let comps = inertia_components(&fan, 1).unwrap();
        let bx = fan.box_elements();
        assert_eq!(comps.len(), bx.len(), "{name}");
        for (c, b) in comps.iter().zip(&bx) {
            assert_eq!(&c.tuple[0], b);
            assert_eq!(c.joint_cone, b.cone);
        }
    }
}

#[test]
fn smooth_fans_have_one_component() {
    for name in ["p1", "p2", "hirzebruch2", "blowup_p2"] {
        assert_eq!(inertia_components(&load(name).fan, 1).unwrap().len(), 1);
    }
}

#[test]
fn components_are_closed_under_reordering() {
    for name in FAN_FIXTURES {
        let fan = load(name).fan;
        let comps = inertia_components(&fan, 2).unwrap();
        let pairs: BTreeMap<_, _> = comps
            .iter()
            .map(|c| ((c.tuple[0].value.clone(), c.tuple[1].value.clone()), c.total_age.clone()))
            .collect();
        for ((a, b), age) in &pairs {
            assert_eq!(pairs.get(&(b.clone(), a.clone())), Some(age), "{name}");
        }
    }
}

#[test]
fn degenerate_fans() {
    for (name, r) in [("gerbe_r2", 2), ("gerbe_r3", 3), ("gerbe_z4_z9", 36)] {
        let fan = load(name).fan;
        let comps = inertia_components(&fan, 1).unwrap();
        assert_eq!(comps.len(), r);
        assert!(comps.iter().all(|c| c.quotient.fan().dim() == 0 && c.quotient.n_rays() == 0));
        assert_eq!(three_sectors(&fan).unwrap().len(), r * r, "{name}");
    }
}

#[test]
fn obstruction_data_on_all_triples() {
    for name in FAN_FIXTURES {
        let fan = load(name).fan;
        for s in three_sectors(&fan).unwrap() {
            let [g1, g2, g3] = [&s.tuple[0], &s.tuple[1], &s.tuple[2]];
            let twos = obstruction_exponents(&fan, g1, g2, g3).unwrap();
            let ones = s.joint_cone.len() - twos.len();
            let expected = BigRational::from_integer((ones + 2 * twos.len()).into());
            assert_eq!(s.total_age, expected, "{name}");
            assert!(obstruction_consistent(&fan, g1, g2, g3).unwrap(), "{name}");
        }
    }
}

#[test]
fn inverse_pairs_are_unobstructed() {
    for name in FAN_FIXTURES {
        let fan = load(name).fan;
        let bx = fan.box_elements();
        let zero = &bx[0];
        for g in &bx {
            let inv = fan.box_complement(g, zero).unwrap();
            assert!(obstruction_exponents(&fan, g, zero, &inv).unwrap().is_empty(), "{name}");
            assert!(obstruction_exponents(&fan, zero, g, &inv).unwrap().is_empty(), "{name}");
        }
    }
}

#[test]
fn weighted_plane_pairs_and_triples() {
    let fan = load("p112").fan;
    assert_eq!(inertia_components(&fan, 2).unwrap().len(), 4);
    let triples = three_sectors(&fan).unwrap();
    let zero = &triples[0];
    assert!(zero.tuple.iter().all(|g| g.is_zero()));
}
