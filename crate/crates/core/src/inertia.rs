//! Components of the r-th inertia stack, 3-twisted sectors and obstruction data.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::format_rational;
use crate::error::{Error, Result};
use crate::fan::{ConeRef, QVec};
use crate::stacky::{BoxElement, ExtendedStackyFan};

#[derive(Clone, Debug)]
pub struct Sector {
    pub tuple: Vec<BoxElement>,
    /// Minimal cone containing every `v̄ᵢ`.
    pub joint_cone: ConeRef,
    pub quotient: ExtendedStackyFan,
    pub total_age: BigRational,
}

struct QuotientCache<'a> {
    fan: &'a ExtendedStackyFan,
    cache: HashMap<ConeRef, ExtendedStackyFan>,
}

impl QuotientCache<'_> {
    fn get(&mut self, sigma: &ConeRef) -> Result<ExtendedStackyFan> {
        if let Some(q) = self.cache.get(sigma) {
            return Ok(q.clone());
        }
        let q = self.fan.quotient_stacky_fan(sigma)?.fan;
        self.cache.insert(sigma.clone(), q.clone());
        Ok(q)
    }
}

fn joint_cone(fan: &ExtendedStackyFan, tuple: &[&BoxElement]) -> Option<ConeRef> {
    let points: Vec<QVec> = tuple.iter().map(|v| fan.bar(&v.value)).collect();
    fan.fan().minimal_cone(&points)
}

/// One component per r-tuple of Box elements lying in a common cone, in
/// lexicographic order of the Box enumeration.
pub fn inertia_components(fan: &ExtendedStackyFan, r: usize) -> Result<Vec<Sector>> {
    if r == 0 {
        return Err(Error::DimensionMismatch("inertia order must be positive".into()));
    }
    let bx = fan.box_elements();
    let mut cache = QuotientCache {
        fan,
        cache: HashMap::new(),
    };
    let mut out = Vec::new();
    let mut idx = vec![0usize; r];
    loop {
        let tuple: Vec<&BoxElement> = idx.iter().map(|&i| &bx[i]).collect();
        if let Some(cone) = joint_cone(fan, &tuple) {
            out.push(Sector {
                total_age: tuple.iter().map(|v| &v.age).sum(),
                tuple: tuple.into_iter().cloned().collect(),
                quotient: cache.get(&cone)?,
                joint_cone: cone,
            });
        }
        // odometer, last position fastest
        let mut k = r;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < bx.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Triples `(g₁, g₂, g₃)` with `g₃` the Box complement of `g₁, g₂`.
pub fn three_sectors(fan: &ExtendedStackyFan) -> Result<Vec<Sector>> {
    let bx = fan.box_elements();
    let mut cache = QuotientCache {
        fan,
        cache: HashMap::new(),
    };
    let mut out = Vec::new();
    for g1 in &bx {
        for g2 in &bx {
            let Some(cone) = joint_cone(fan, &[g1, g2]) else {
                continue;
            };
            let g3 = fan.box_complement(g1, g2)?;
            if joint_cone(fan, &[g1, g2, &g3]).as_ref() != Some(&cone) {
                return Err(Error::NotASector);
            }
            out.push(Sector {
                total_age: &g1.age + &g2.age + &g3.age,
                tuple: vec![g1.clone(), g2.clone(), g3],
                quotient: cache.get(&cone)?,
                joint_cone: cone,
            });
        }
    }
    Ok(out)
}

/// Coefficients `aᵢ` of `g₁+g₂+g₃ = Σ aᵢ bᵢ` over the joint cone.
fn triple_coefficients(fan: &ExtendedStackyFan, g: [&BoxElement; 3]) -> Result<(ConeRef, Vec<(usize, BigRational)>)> {
    let cone = joint_cone(fan, &g).ok_or(Error::NotASector)?;
    let group = fan.group();
    let mut residue = group.add(&group.add(&g[0].value, &g[1].value), &g[2].value);
    let mut coeffs = Vec::new();
    for &r in cone.rays() {
        let a: BigRational = g.iter().map(|v| v.coeff(r)).sum();
        if !a.is_integer() {
            return Err(Error::NotASector);
        }
        let k = a.to_integer();
        for (x, b) in residue.iter_mut().zip(&fan.ray_lifts()[r]) {
            *x -= &k * b;
        }
        coeffs.push((r, a));
    }
    if !group.is_zero(&residue) {
        return Err(Error::NotASector);
    }
    Ok((cone, coeffs))
}

/// Rays with coefficient 2 in `g₁+g₂+g₃`; every ray of the joint cone must
/// have coefficient 1 or 2.
pub fn obstruction_exponents(fan: &ExtendedStackyFan, g1: &BoxElement, g2: &BoxElement, g3: &BoxElement) -> Result<BTreeSet<usize>> {
    let (_, coeffs) = triple_coefficients(fan, [g1, g2, g3])?;
    let one = BigRational::one();
    let two = &one + &one;
    let mut out = BTreeSet::new();
    for (r, a) in coeffs {
        if a == two {
            out.insert(r);
        } else if a != one {
            return Err(Error::UnexpectedCoefficient {
                ray: r,
                value: format_rational(&a),
            });
        }
    }
    Ok(out)
}

/// The exponent vector of `y^{g₁}·y^{g₂}` rewritten in sector `g₃⁻¹` must be
/// `[aᵢ = 2] + [i ∉ σ(ḡ₃)]` on the joint cone: the obstruction rays show up
/// as the extra ray factors of the product.
pub fn obstruction_consistent(fan: &ExtendedStackyFan, g1: &BoxElement, g2: &BoxElement, g3: &BoxElement) -> Result<bool> {
    let exps = obstruction_exponents(fan, g1, g2, g3)?;
    let (cone, _) = triple_coefficients(fan, [g1, g2, g3])?;
    let sum = fan.group().add(&g1.value, &g2.value);
    let d = fan.box_decompose(&sum)?;
    let mult: HashMap<usize, &BigInt> = d.multipliers.iter().map(|(r, m)| (*r, m)).collect();
    Ok(cone.rays().iter().all(|r| {
        let expected = u32::from(exps.contains(r)) + u32::from(!g3.cone.contains(*r));
        let got = mult.get(r).map_or_else(BigInt::zero, |m| (*m).clone());
        got == BigInt::from(expected)
    }))
}
