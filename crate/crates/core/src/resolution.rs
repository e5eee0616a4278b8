//! Smooth subdivisions of a stacky fan and the support-function certificate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error as ThisError;

use crate::arith::{solve_unique, to_rational};
use crate::chowring::{orbifold_ring, BaseRing, BaseVec};
use crate::error::{Error, Result};
use crate::fan::{ConeRef, QVec};
use crate::lattice::cokernel;
use crate::stacky::ExtendedStackyFan;

/// A refinement of `coarse` whose rays are the coarse rays followed by new
/// rays. Both fans share `N` and the extra vectors.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub coarse: ExtendedStackyFan,
    pub refined: ExtendedStackyFan,
}

#[derive(Clone, Debug, PartialEq, Eq, ThisError)]
pub enum SubdivisionIssue {
    #[error("refined fan is over a different lattice")]
    GroupMismatch,
    #[error("refined rays do not start with the coarse rays")]
    NotAnExtension,
    #[error("refined extra vectors differ from the coarse ones")]
    ExtraMismatch,
    #[error("N has torsion, so no cone is smooth")]
    TorsionInLattice,
    #[error("cone {0} lies in no coarse cone")]
    NotContained(ConeRef),
    #[error("cone {0} is not smooth")]
    NotSmooth(ConeRef),
    #[error("the refined rays do not generate N")]
    DoesNotGenerate,
    #[error("refined and coarse fans have different supports")]
    SupportMismatch,
}

impl Subdivision {
    /// Builds the refined stacky fan from the extra rays and its maximal cones.
    pub fn new(coarse: ExtendedStackyFan, new_rays: Vec<Vec<BigInt>>, cones: Vec<Vec<usize>>) -> Result<Self> {
        let mut lifts = coarse.ray_lifts().to_vec();
        lifts.extend(new_rays);
        let refined = ExtendedStackyFan::new(coarse.group().clone(), lifts, cones, coarse.extra().to_vec())?;
        Ok(Subdivision { coarse, refined })
    }

    /// Pairs two independently built fans; see [`validate_subdivision`].
    pub fn from_fans(coarse: ExtendedStackyFan, refined: ExtendedStackyFan) -> Self {
        Subdivision { coarse, refined }
    }

    pub fn n_new_rays(&self) -> usize {
        self.refined.n_rays() - self.coarse.n_rays()
    }
}

/// All structural problems with the subdivision; empty when valid.
pub fn validate_subdivision(sub: &Subdivision) -> Vec<SubdivisionIssue> {
    let (c, r) = (&sub.coarse, &sub.refined);
    let mut issues = Vec::new();
    if c.group() != r.group() {
        return vec![SubdivisionIssue::GroupMismatch];
    }
    if r.n_rays() < c.n_rays() || r.ray_lifts()[..c.n_rays()] != *c.ray_lifts() {
        issues.push(SubdivisionIssue::NotAnExtension);
    }
    if r.extra() != c.extra() {
        issues.push(SubdivisionIssue::ExtraMismatch);
    }
    if !c.group().is_free() {
        issues.push(SubdivisionIssue::TorsionInLattice);
    }
    for cone in r.fan().max_cones() {
        let points: Vec<QVec> = cone.rays().iter().map(|&i| r.fan().ray(i).clone()).collect();
        if c.fan().minimal_cone(&points).is_none() {
            issues.push(SubdivisionIssue::NotContained(cone.clone()));
        }
        if c.group().is_free() {
            let smooth = r.local_group(cone).map(|(g, _)| g.is_free()).unwrap_or(false);
            if !smooth {
                issues.push(SubdivisionIssue::NotSmooth(cone.clone()));
            }
        }
    }
    if !cokernel(&r.beta()).0.is_trivial() {
        issues.push(SubdivisionIssue::DoesNotGenerate);
    }
    if c.fan().is_complete() != r.fan().is_complete() {
        issues.push(SubdivisionIssue::SupportMismatch);
    }
    issues
}

/// A certified support function: `h` on every refined ray and the linear
/// function it restricts to on each maximal cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportFunction {
    pub h: Vec<BigInt>,
    pub functionals: Vec<(ConeRef, QVec)>,
    pub walls_checked: usize,
}

fn eval(l: &[BigRational], x: &[BigRational]) -> BigRational {
    l.iter().zip(x).map(|(a, b)| a * b).sum()
}

/// Checks that `h` (zero on coarse rays, positive on new ones) is linear on
/// each refined cone and strictly concave across every refined wall that
/// lies inside a coarse cone.
pub fn certify_support_function(sub: &Subdivision, h: &[BigInt]) -> Result<SupportFunction> {
    let r = &sub.refined;
    let fan = r.fan();
    let d = fan.dim();
    let nc = sub.coarse.n_rays();
    if h.len() != r.n_rays() {
        return Err(Error::Inconsistent(format!("expected {} values, got {}", r.n_rays(), h.len())));
    }
    if let Some(i) = (0..nc).find(|&i| !h[i].is_zero()) {
        return Err(Error::Inconsistent(format!("h is nonzero on coarse ray {i}")));
    }
    if let Some(i) = (nc..h.len()).find(|&i| !h[i].is_positive()) {
        return Err(Error::Inconsistent(format!("h is not positive on new ray {i}")));
    }
    let hq: Vec<BigRational> = h.iter().map(to_rational).collect();
    let mut functionals = Vec::new();
    for cone in fan.max_cones() {
        if cone.len() != d {
            return Err(Error::Inconsistent(format!("cone {cone} is not full-dimensional")));
        }
        // ℓ · b̄ᵢ = hᵢ for i in the cone; unknowns are the d coordinates of ℓ
        let columns: Vec<QVec> = (0..d).map(|k| cone.rays().iter().map(|&i| fan.ray(i)[k].clone()).collect()).collect();
        let target: Vec<BigRational> = cone.rays().iter().map(|&i| hq[i].clone()).collect();
        let l = solve_unique(&columns, &target).ok_or_else(|| Error::Inconsistent(format!("no linear function on {cone}")))?;
        functionals.push((cone.clone(), l));
    }
    // agreement on shared faces
    for (a, la) in &functionals {
        for (b, lb) in &functionals {
            for &i in a.intersection(b).rays() {
                if eval(la, fan.ray(i)) != eval(lb, fan.ray(i)) {
                    return Err(Error::Inconsistent(format!("h is not well defined on {a} and {b}")));
                }
            }
        }
    }
    let mut walls = 0;
    for (x, (a, la)) in functionals.iter().enumerate() {
        for (b, lb) in &functionals[x + 1..] {
            if a.intersection(b).len() + 1 != d {
                continue;
            }
            let both: Vec<QVec> = a.union(b).rays().iter().map(|&i| fan.ray(i).clone()).collect();
            if sub.coarse.fan().minimal_cone(&both).is_none() {
                continue;
            }
            walls += 1;
            let ua = a.difference(b).rays()[0];
            let ub = b.difference(a).rays()[0];
            if eval(la, fan.ray(ub)) <= hq[ub] || eval(lb, fan.ray(ua)) <= hq[ua] {
                return Err(Error::Inconsistent(format!("h is not strictly concave across the wall between {a} and {b}")));
            }
        }
    }
    Ok(SupportFunction {
        h: h.to_vec(),
        functionals,
        walls_checked: walls,
    })
}

/// Certifies the given values on the new rays, or searches `[1, hmax]^k`
/// lexicographically for the first values that certify.
pub fn check_support_function(sub: &Subdivision, new_values: Option<&[BigInt]>, hmax: u64) -> Result<SupportFunction> {
    let nc = sub.coarse.n_rays();
    let full = |vals: &[BigInt]| -> Vec<BigInt> {
        let mut h = vec![BigInt::zero(); nc];
        h.extend_from_slice(vals);
        h
    };
    if let Some(vals) = new_values {
        return certify_support_function(sub, &full(vals));
    }
    let k = sub.n_new_rays();
    if hmax == 0 {
        return Err(Error::Unsatisfiable(hmax));
    }
    let mut vals = vec![1u64; k];
    loop {
        let h: Vec<BigInt> = vals.iter().map(|&x| BigInt::from(x)).collect();
        if let Ok(cert) = certify_support_function(sub, &full(&h)) {
            return Ok(cert);
        }
        let mut i = k;
        loop {
            if i == 0 {
                return Err(Error::Unsatisfiable(hmax));
            }
            i -= 1;
            if vals[i] < hmax {
                vals[i] += 1;
                break;
            }
            vals[i] = 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberDimensions {
    pub orbifold: usize,
    pub resolved: usize,
}

impl FiberDimensions {
    pub fn equal(&self) -> bool {
        self.orbifold == self.resolved
    }
}

/// Twists for the refined fan: coarse ray twists, zero on new rays, then
/// the extra twists.
pub fn refined_base(sub: &Subdivision, base: &BaseRing) -> Result<BaseRing> {
    let t = base.twists();
    let nc = sub.coarse.n_rays();
    if t.len() != sub.coarse.m() {
        return Err(Error::TwistArityMismatch {
            expected: sub.coarse.m(),
            found: t.len(),
        });
    }
    let mut twists: Vec<BaseVec> = t[..nc].to_vec();
    twists.extend(std::iter::repeat_n(base.zero(), sub.n_new_rays()));
    twists.extend_from_slice(&t[nc..]);
    base.clone().with_twists(twists)
}

/// `dim A*_orb(coarse)` against `dim A*(refined)` over the same base.
pub fn fiber_dimension_check(sub: &Subdivision, base: &BaseRing) -> Result<FiberDimensions> {
    let orb = orbifold_ring(&sub.coarse, base)?;
    let res = orbifold_ring(&sub.refined, &refined_base(sub, base)?)?;
    Ok(FiberDimensions {
        orbifold: orb.dim(),
        resolved: res.dim(),
    })
}
