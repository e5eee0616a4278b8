//! Rational simplicial fans.

pub mod fm;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{rational_rank, solve_unique};
use crate::error::{Error, Result};
use fm::{feasible, Inequality};

pub type QVec = Vec<BigRational>;

/// A cone given by a sorted set of ray indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ConeRef(Vec<usize>);

impl ConeRef {
    pub fn new(mut rays: Vec<usize>) -> Self {
        rays.sort_unstable();
        rays.dedup();
        ConeRef(rays)
    }

    pub fn zero() -> Self {
        ConeRef(Vec::new())
    }

    pub fn rays(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, ray: usize) -> bool {
        self.0.binary_search(&ray).is_ok()
    }

    pub fn is_face_of(&self, other: &ConeRef) -> bool {
        self.0.iter().all(|r| other.contains(*r))
    }

    pub fn union(&self, other: &ConeRef) -> ConeRef {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        ConeRef::new(v)
    }

    pub fn intersection(&self, other: &ConeRef) -> ConeRef {
        ConeRef(self.0.iter().copied().filter(|r| other.contains(*r)).collect())
    }

    pub fn difference(&self, other: &ConeRef) -> ConeRef {
        ConeRef(self.0.iter().copied().filter(|r| !other.contains(*r)).collect())
    }

    /// All faces, including the zero cone and the cone itself.
    pub fn faces(&self) -> Vec<ConeRef> {
        let k = self.0.len();
        (0u64..(1u64 << k))
            .map(|mask| ConeRef((0..k).filter(|i| mask >> i & 1 == 1).map(|i| self.0[i]).collect()))
            .collect()
    }
}

impl fmt::Display for ConeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|r| r.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl From<Vec<usize>> for ConeRef {
    fn from(v: Vec<usize>) -> Self {
        ConeRef::new(v)
    }
}

/// A point located in the fan: its minimal cone and the positive coefficients
/// over that cone's rays (aligned with `cone.rays()`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Location {
    pub cone: ConeRef,
    pub coeffs: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialFan {
    dim: usize,
    rays: Vec<QVec>,
    max_cones: Vec<ConeRef>,
}

impl SimplicialFan {
    /// Checks indices and ray lengths and normalises the cone list: cones
    /// contained in other cones are dropped, and an empty list becomes the
    /// zero cone. Geometric conditions are left to [`SimplicialFan::validate`].
    pub fn new(dim: usize, rays: Vec<QVec>, cones: Vec<Vec<usize>>) -> Result<Self> {
        for (i, r) in rays.iter().enumerate() {
            if r.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "ray {i} has {} coordinates, expected {dim}",
                    r.len()
                )));
            }
            if r.iter().all(Zero::is_zero) {
                return Err(Error::ZeroRay(i));
            }
        }
        let mut cs: Vec<ConeRef> = Vec::new();
        for c in cones {
            if let Some(&bad) = c.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::RayOutOfRange {
                    index: bad,
                    count: rays.len(),
                });
            }
            cs.push(ConeRef::new(c));
        }
        cs.sort();
        cs.dedup();
        let max_cones: Vec<ConeRef> = cs
            .iter()
            .filter(|c| !cs.iter().any(|o| o != *c && c.is_face_of(o)))
            .cloned()
            .collect();
        let max_cones = if max_cones.is_empty() {
            vec![ConeRef::zero()]
        } else {
            max_cones
        };
        Ok(SimplicialFan {
            dim,
            rays,
            max_cones,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[QVec] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &QVec {
        &self.rays[i]
    }

    pub fn n_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn max_cones(&self) -> &[ConeRef] {
        &self.max_cones
    }

    pub fn is_cone(&self, cone: &ConeRef) -> bool {
        self.max_cones.iter().any(|c| cone.is_face_of(c))
    }

    /// Every cone of the fan, sorted by size and then lexicographically.
    pub fn cones(&self) -> Vec<ConeRef> {
        let set: BTreeSet<(usize, ConeRef)> = self
            .max_cones
            .iter()
            .flat_map(|c| c.faces())
            .map(|c| (c.len(), c))
            .collect();
        set.into_iter().map(|(_, c)| c).collect()
    }

    fn cone_vectors(&self, cone: &ConeRef) -> Vec<QVec> {
        cone.rays().iter().map(|&i| self.rays[i].clone()).collect()
    }

    /// Structural problems with the fan; empty when it is a simplicial fan.
    pub fn validate(&self) -> Vec<Error> {
        let mut issues = Vec::new();
        for c in &self.max_cones {
            if rational_rank(&self.cone_vectors(c), self.dim) != c.len() {
                issues.push(Error::NotSimplicial(c.clone()));
            }
        }
        if !issues.is_empty() {
            return issues;
        }
        for (i, a) in self.max_cones.iter().enumerate() {
            for b in &self.max_cones[i + 1..] {
                if !self.meets_along_face(a, b) {
                    issues.push(Error::BadIntersection(a.clone(), b.clone()));
                }
            }
        }
        issues
    }

    /// Whether `a ∩ b` is the common face spanned by their shared rays.
    ///
    /// For simplicial cones it suffices that no point of the intersection
    /// uses a ray of `a` outside the common face.
    fn meets_along_face(&self, a: &ConeRef, b: &ConeRef) -> bool {
        let common = a.intersection(b);
        let vars = a.len() + b.len();
        for (pos, &ray) in a.rays().iter().enumerate() {
            if common.contains(ray) {
                continue;
            }
            let mut system = Vec::new();
            // Σ x_i a_i − Σ y_j b_j = 0, coordinatewise as two inequalities
            for k in 0..self.dim {
                let mut row: QVec = a.rays().iter().map(|&r| self.rays[r][k].clone()).collect();
                row.extend(b.rays().iter().map(|&r| -self.rays[r][k].clone()));
                let neg: QVec = row.iter().map(|x| -x.clone()).collect();
                system.push(Inequality::new(row, BigRational::zero()));
                system.push(Inequality::new(neg, BigRational::zero()));
            }
            for v in 0..vars {
                let mut row = vec![BigRational::zero(); vars];
                row[v] = -BigRational::one();
                let bound = if v == pos {
                    -BigRational::one()
                } else {
                    BigRational::zero()
                };
                system.push(Inequality::new(row, bound));
            }
            if feasible(system, vars) {
                return false;
            }
        }
        true
    }

    /// Nonnegative coefficients of `point` over the rays of `cone`, if it lies in the cone.
    pub fn cone_coefficients(&self, cone: &ConeRef, point: &[BigRational]) -> Option<Vec<BigRational>> {
        let x = solve_unique(&self.cone_vectors(cone), point)?;
        x.iter().all(|c| !c.is_negative()).then_some(x)
    }

    /// The minimal cone containing `point`, with the coefficients over its rays.
    pub fn locate(&self, point: &[BigRational]) -> Option<Location> {
        for c in &self.max_cones {
            if let Some(x) = self.cone_coefficients(c, point) {
                let (rays, coeffs): (Vec<usize>, Vec<BigRational>) = c
                    .rays()
                    .iter()
                    .zip(x)
                    .filter(|(_, a)| !a.is_zero())
                    .map(|(r, a)| (*r, a))
                    .unzip();
                return Some(Location {
                    cone: ConeRef(rays),
                    coeffs,
                });
            }
        }
        None
    }

    /// The minimal cone containing every point, if one exists.
    pub fn minimal_cone(&self, points: &[QVec]) -> Option<ConeRef> {
        'cones: for c in &self.max_cones {
            let mut support = Vec::new();
            for p in points {
                let Some(x) = self.cone_coefficients(c, p) else {
                    continue 'cones;
                };
                support.extend(c.rays().iter().zip(&x).filter(|(_, a)| !a.is_zero()).map(|(r, _)| *r));
            }
            return Some(ConeRef::new(support));
        }
        None
    }

    /// Cones `τ` with `τ ∩ σ = 0` and `τ ∪ σ ∈ Σ`.
    pub fn link(&self, sigma: &ConeRef) -> Vec<ConeRef> {
        let set: BTreeSet<(usize, ConeRef)> = self
            .max_cones
            .iter()
            .filter(|c| sigma.is_face_of(c))
            .flat_map(|c| c.difference(sigma).faces())
            .map(|c| (c.len(), c))
            .collect();
        set.into_iter().map(|(_, c)| c).collect()
    }

    /// Rays of the link of `σ`, in increasing order.
    pub fn link_rays(&self, sigma: &ConeRef) -> Vec<usize> {
        let set: BTreeSet<usize> = self
            .max_cones
            .iter()
            .filter(|c| sigma.is_face_of(c))
            .flat_map(|c| c.difference(sigma).rays().to_vec())
            .collect();
        set.into_iter().collect()
    }

    /// The quotient fan `Σ/σ` under a linear map `projection` (rows are the
    /// coordinate functionals of the quotient space). Returns the fan and the
    /// original index of each of its rays.
    pub fn quotient_fan(&self, sigma: &ConeRef, projection: &[QVec]) -> Result<(SimplicialFan, Vec<usize>)> {
        if !self.is_cone(sigma) {
            return Err(Error::NotACone(sigma.clone()));
        }
        let link_rays = self.link_rays(sigma);
        let index: HashMap<usize, usize> = link_rays.iter().enumerate().map(|(k, &r)| (r, k)).collect();
        let mut rays = Vec::with_capacity(link_rays.len());
        for &r in &link_rays {
            let img: QVec = projection
                .iter()
                .map(|row| row.iter().zip(&self.rays[r]).map(|(a, b)| a * b).sum())
                .collect();
            if img.iter().all(Zero::is_zero) {
                return Err(Error::DegenerateImage(r));
            }
            rays.push(img);
        }
        let cones = self
            .max_cones
            .iter()
            .filter(|c| sigma.is_face_of(c))
            .map(|c| c.difference(sigma).rays().iter().map(|r| index[r]).collect())
            .collect();
        Ok((SimplicialFan::new(projection.len(), rays, cones)?, link_rays))
    }

    /// Whether the support of the fan is all of `N_ℚ`.
    ///
    /// Requires full-dimensional maximal cones, every wall shared by exactly
    /// two of them, a connected adjacency graph, and coverage of the probe
    /// points `±e_i` and `(±1, …, ±1)`.
    pub fn is_complete(&self) -> bool {
        if self.dim == 0 {
            return true;
        }
        if self.max_cones.iter().any(|c| c.len() != self.dim) {
            return false;
        }
        let mut walls: HashMap<ConeRef, Vec<usize>> = HashMap::new();
        for (k, c) in self.max_cones.iter().enumerate() {
            for &r in c.rays() {
                walls.entry(c.difference(&ConeRef(vec![r]))).or_default().push(k);
            }
        }
        if walls.values().any(|owners| owners.len() != 2) {
            return false;
        }
        let mut parent: Vec<usize> = (0..self.max_cones.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for owners in walls.values() {
            let (a, b) = (find(&mut parent, owners[0]), find(&mut parent, owners[1]));
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        if (0..self.max_cones.len()).any(|k| find(&mut parent, k) != root) {
            return false;
        }
        let covered = |p: &QVec| self.max_cones.iter().any(|c| self.cone_coefficients(c, p).is_some());
        for i in 0..self.dim {
            for sign in [1, -1] {
                let mut p = vec![BigRational::zero(); self.dim];
                p[i] = BigRational::from_integer(sign.into());
                if !covered(&p) {
                    return false;
                }
            }
        }
        if self.dim <= 16 {
            for mask in 0u32..(1u32 << self.dim) {
                let p: QVec = (0..self.dim)
                    .map(|i| BigRational::from_integer(if mask >> i & 1 == 1 { (-1).into() } else { 1.into() }))
                    .collect();
                if !covered(&p) {
                    return false;
                }
            }
        }
        true
    }
}
