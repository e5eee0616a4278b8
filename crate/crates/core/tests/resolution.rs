mod common;

use common::{base, load};
use stackyring::arith::int_vec;
use stackyring::chowring::BaseRing;
use stackyring::fan::ConeRef;
use stackyring::resolution::{
    check_support_function, fiber_dimension_check, refined_base, validate_subdivision, FiberDimensions, Subdivision,
    SubdivisionIssue,
};
use stackyring::Error;

fn weighted_plane_resolution() -> Subdivision {
    Subdivision::from_fans(load("p112").fan, load("hirzebruch2").fan)
}

/// P^2 with the cone {0,1} split by (1,1) and (1,2).
fn double_blowup() -> Subdivision {
    Subdivision::new(
        load("p2").fan,
        vec![int_vec(&[1, 1]), int_vec(&[1, 2])],
        vec![vec![0, 3], vec![3, 4], vec![1, 4], vec![1, 2], vec![0, 2]],
    )
    .unwrap()
}

#[test]
fn hirzebruch_refinement() {
    let sub = weighted_plane_resolution();
    assert!(validate_subdivision(&sub).is_empty());
    let cert = check_support_function(&sub, Some(&int_vec(&[1])), 16).unwrap();
    assert_eq!(cert.walls_checked, 1);
    assert_eq!(cert.functionals.len(), 4);
    let point = fiber_dimension_check(&sub, &BaseRing::point().with_zero_twists(3)).unwrap();
    assert_eq!(point, FiberDimensions { orbifold: 4, resolved: 4 });
    let p1 = fiber_dimension_check(&sub, &base("p1", 3)).unwrap();
    assert_eq!(p1, FiberDimensions { orbifold: 8, resolved: 8 });
}

#[test]
fn searched_values_certify() {
    for sub in [weighted_plane_resolution(), double_blowup()] {
        let found = check_support_function(&sub, None, 16).unwrap();
        let nc = sub.coarse.n_rays();
        let again = check_support_function(&sub, Some(&found.h[nc..]), 16).unwrap();
        assert_eq!(again, found);
    }
}

#[test]
fn search_is_lexicographic_and_bounded() {
    let sub = double_blowup();
    assert!(validate_subdivision(&sub).is_empty());
    assert_eq!(check_support_function(&sub, None, 16).unwrap().h, int_vec(&[0, 0, 0, 2, 3]));
    assert_eq!(check_support_function(&sub, None, 2).unwrap_err(), Error::Unsatisfiable(2));
    assert!(matches!(
        check_support_function(&sub, Some(&int_vec(&[1, 1])), 16),
        Err(Error::Inconsistent(_))
    ));
}

#[test]
fn no_new_rays_is_vacuous() {
    let fan = load("p2").fan;
    let sub = Subdivision::from_fans(fan.clone(), fan);
    assert!(validate_subdivision(&sub).is_empty());
    let cert = check_support_function(&sub, None, 16).unwrap();
    assert_eq!(cert.h, int_vec(&[0, 0, 0]));
    assert!(fiber_dimension_check(&sub, &BaseRing::point().with_zero_twists(3)).unwrap().equal());
}

#[test]
fn singular_refinement_is_not_smooth() {
    let fan = load("p112").fan;
    let issues = validate_subdivision(&Subdivision::from_fans(fan.clone(), fan));
    assert_eq!(issues, vec![SubdivisionIssue::NotSmooth(ConeRef::new(vec![0, 2]))]);
}

#[test]
fn positivity_on_new_rays() {
    let sub = weighted_plane_resolution();
    assert!(matches!(
        check_support_function(&sub, Some(&int_vec(&[0])), 16),
        Err(Error::Inconsistent(_))
    ));
}

#[test]
fn non_crepant_blowup_changes_dimension() {
    let sub = Subdivision::from_fans(load("p2").fan, load("blowup_p2").fan);
    assert!(validate_subdivision(&sub).is_empty());
    assert!(check_support_function(&sub, None, 16).is_ok());
    let dims = fiber_dimension_check(&sub, &BaseRing::point().with_zero_twists(3)).unwrap();
    assert_eq!(dims, FiberDimensions { orbifold: 3, resolved: 4 });
}

#[test]
fn mismatched_fans_are_reported() {
    let sub = Subdivision::from_fans(load("p112").fan, load("p2").fan);
    let issues = validate_subdivision(&sub);
    assert!(issues.contains(&SubdivisionIssue::NotAnExtension));
    let torsion = Subdivision::from_fans(load("canonical_gerbe_d1_r2").fan, load("canonical_gerbe_d1_r2").fan);
    assert!(validate_subdivision(&torsion).contains(&SubdivisionIssue::TorsionInLattice));
}

#[test]
fn refined_twists_are_extended_by_zero() {
    let sub = weighted_plane_resolution();
    let b = base("p1", 3);
    let (h, z) = (b.basis_vector(1), b.zero());
    let b = b.with_twists(vec![h.clone(), z.clone(), h.clone()]).unwrap();
    let r = refined_base(&sub, &b).unwrap();
    assert_eq!(r.twists(), &[h.clone(), z.clone(), h, z]);
}
