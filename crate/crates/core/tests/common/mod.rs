//! Fixture loading and independent oracles shared by the integration tests.
//!
//! The oracles only use the defining data of a fan (ray vectors and maximal
//! cones) and their own exact linear algebra.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use stackyring::chowring::{BaseRing, OrbifoldRing};
use stackyring::document::{BaseDocument, FanDocument, LoadedFan};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn load(name: &str) -> LoadedFan {
    let text = std::fs::read_to_string(fixture_path(&format!("{name}.json"))).unwrap();
    FanDocument::parse(&text).unwrap().load().unwrap()
}

pub fn base(name: &str, m: usize) -> BaseRing {
    let text = std::fs::read_to_string(fixture_path(&format!("bases/{name}.json"))).unwrap();
    BaseDocument::parse(&text).unwrap().to_ring(m).unwrap()
}

pub const FAN_FIXTURES: &[&str] = &[
    "example33",
    "example33_tilde",
    "gerbe_r2",
    "gerbe_r3",
    "gerbe_z4_z9",
    "canonical_gerbe_d1_r2",
    "canonical_gerbe_d1_r3",
    "canonical_gerbe_d2_r2",
    "canonical_gerbe_d2_r3",
    "trivial_gerbe_d1_r2",
    "trivial_gerbe_d1_r3",
    "trivial_gerbe_d2_r2",
    "trivial_gerbe_d2_r3",
    "p112",
    "hirzebruch2",
    "p1",
    "p2",
    "blowup_p2",
];

/// Every fixture over a point, plus the twisted cases over projective bases.
pub fn ring_cases() -> Vec<(String, LoadedFan, BaseRing)> {
    let mut out = Vec::new();
    for name in FAN_FIXTURES {
        let f = load(name);
        let m = f.fan.m();
        out.push((format!("{name} over a point"), f, base("point", m)));
    }
    for name in ["example33", "example33_tilde"] {
        let f = load(name);
        out.push((format!("{name} over P1, twist -H"), f, base("p1_example33", 3)));
    }
    for name in ["gerbe_r2", "gerbe_r3", "gerbe_z4_z9"] {
        let f = load(name);
        let p1 = base("p1", 1);
        let h = vec![BigRational::zero(), -BigRational::one()];
        out.push((format!("{name} over P1, twist -H"), f, p1.with_twists(vec![h]).unwrap()));
    }
    for name in ["p112", "hirzebruch2"] {
        let f = load(name);
        let m = f.fan.m();
        out.push((format!("{name} over P1"), f, base("p1", m)));
    }
    out
}

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Solves `Σ xⱼ colⱼ = target` by Gauss-Jordan elimination; `None` unless
/// the solution exists and is unique.
pub fn solve(columns: &[Vec<BigRational>], target: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = columns.len();
    let rows = target.len();
    let mut a: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<BigRational> = columns.iter().map(|c| c[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..n {
        let p = (pivot_row..rows).find(|&r| !a[r][col].is_zero())?;
        a.swap(pivot_row, p);
        let inv = a[pivot_row][col].recip();
        for x in a[pivot_row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..rows {
            if r != pivot_row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..=n {
                    let t = &f * &a[pivot_row][c];
                    a[r][c] -= t;
                }
            }
        }
        pivot_row += 1;
    }
    if a[pivot_row..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    Some((0..n).map(|i| a[i][n].clone()).collect())
}

/// Incremental row space over ℚ with sparse rows keyed by column.
#[derive(Default)]
pub struct RowSpace {
    rows: Vec<(usize, BTreeMap<usize, BigRational>)>,
}

impl RowSpace {
    fn reduce(&self, mut v: BTreeMap<usize, BigRational>) -> BTreeMap<usize, BigRational> {
        for (p, row) in &self.rows {
            if let Some(c) = v.get(p).cloned() {
                for (k, x) in row {
                    let e = v.entry(*k).or_insert_with(BigRational::zero);
                    *e -= &c * x;
                    if e.is_zero() {
                        v.remove(k);
                    }
                }
            }
        }
        v
    }

    /// Adds `v`; returns whether it was independent.
    pub fn insert(&mut self, v: BTreeMap<usize, BigRational>) -> bool {
        let v = self.reduce(v);
        let Some((&p, c)) = v.iter().next() else {
            return false;
        };
        let inv = c.recip();
        let row: BTreeMap<usize, BigRational> = v.iter().map(|(k, x)| (*k, x * &inv)).collect();
        for (_, other) in self.rows.iter_mut() {
            if let Some(c) = other.get(&p).cloned() {
                for (k, x) in &row {
                    let e = other.entry(*k).or_insert_with(BigRational::zero);
                    *e -= &c * x;
                    if e.is_zero() {
                        other.remove(k);
                    }
                }
            }
        }
        self.rows.push((p, row));
        true
    }

    pub fn contains(&self, v: BTreeMap<usize, BigRational>) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Ray data in plain integers: free parts of the lifts and the maximal cones.
pub struct PlainFan {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub cones: Vec<Vec<usize>>,
    pub torsion: Vec<i64>,
    /// Torsion parts of the ray lifts.
    pub ray_torsion: Vec<Vec<i64>>,
}

impl PlainFan {
    pub fn of(fan: &stackyring::stacky::ExtendedStackyFan) -> Self {
        let d = fan.group().rank();
        let to_i = |x: &BigInt| x.to_i64().unwrap();
        PlainFan {
            dim: d,
            rays: fan.ray_lifts().iter().map(|b| b[..d].iter().map(to_i).collect()).collect(),
            ray_torsion: fan.ray_lifts().iter().map(|b| b[d..].iter().map(to_i).collect()).collect(),
            cones: fan.fan().max_cones().iter().map(|c| c.rays().to_vec()).collect(),
            torsion: fan.group().torsion().iter().map(to_i).collect(),
        }
    }

    pub fn coefficients(&self, cone: &[usize], x: &[i64]) -> Option<Vec<BigRational>> {
        let cols: Vec<Vec<BigRational>> = cone.iter().map(|&i| self.rays[i].iter().map(|&v| q(v)).collect()).collect();
        let t: Vec<BigRational> = x.iter().map(|&v| q(v)).collect();
        solve(&cols, &t)
    }

    /// Nonnegative coordinates of `x` in some maximal cone, as (ray, coeff).
    pub fn locate(&self, x: &[i64]) -> Option<Vec<(usize, BigRational)>> {
        self.cones.iter().find_map(|c| {
            let a = self.coefficients(c, x)?;
            if a.iter().any(Signed::is_negative) {
                return None;
            }
            Some(c.iter().copied().zip(a).filter(|(_, a)| !a.is_zero()).collect())
        })
    }

    pub fn in_a_cone(&self, rays: &BTreeSet<usize>) -> bool {
        self.cones.iter().any(|c| rays.iter().all(|r| c.contains(r)))
    }

    fn torsion_points(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for &t in &self.torsion {
            out = out
                .into_iter()
                .flat_map(|p: Vec<i64>| {
                    (0..t).map(move |k| {
                        let mut p = p.clone();
                        p.push(k);
                        p
                    })
                })
                .collect();
        }
        out
    }

    /// Box(σ) of a full cone by scanning the bounding box of the half-open
    /// parallelepiped, in normal-form coordinates.
    pub fn parallelepiped_points(&self, cone: &[usize]) -> BTreeSet<Vec<i64>> {
        let d = self.dim;
        let mut lo = vec![0i64; d];
        let mut hi = vec![0i64; d];
        for &i in cone {
            for k in 0..d {
                let v = self.rays[i][k];
                if v < 0 {
                    lo[k] += v;
                } else {
                    hi[k] += v;
                }
            }
        }
        let mut out = BTreeSet::new();
        let mut x = lo.clone();
        loop {
            if let Some(a) = self.coefficients(cone, &x) {
                if a.iter().all(|c| !c.is_negative() && c < &q(1)) {
                    for t in self.torsion_points() {
                        let mut v = x.clone();
                        v.extend(t);
                        out.insert(v);
                    }
                }
            }
            let mut k = 0;
            loop {
                if k == d {
                    return out;
                }
                if x[k] < hi[k] {
                    x[k] += 1;
                    break;
                }
                x[k] = lo[k];
                k += 1;
            }
        }
    }
}

/// The deformed group ring `ℚ[N]^Σ` modulo the linear relations, truncated to
/// degree `dim N`, for free `N` over a point. Points of `N` are enumerated in
/// a box large enough for every element of degree at most `dim N`.
pub struct DeformedOracle {
    pub fan: PlainFan,
    pub points: Vec<Vec<i64>>,
    pub support: Vec<BTreeSet<usize>>,
    pub degree: Vec<BigRational>,
    pub index: HashMap<Vec<i64>, usize>,
    pub relations: RowSpace,
}

impl DeformedOracle {
    pub fn new(fan: PlainFan) -> Self {
        assert!(fan.torsion.is_empty());
        let d = fan.dim;
        let top = q(d as i64);
        let reach = d as i64 * fan.rays.iter().flatten().map(|v| v.abs()).max().unwrap_or(1);
        let mut points = Vec::new();
        let mut support = Vec::new();
        let mut degree = Vec::new();
        let mut x = vec![-reach; d];
        'scan: loop {
            if let Some(loc) = fan.locate(&x) {
                let deg: BigRational = loc.iter().map(|(_, a)| a.clone()).sum();
                if deg <= top {
                    points.push(x.clone());
                    support.push(loc.iter().map(|(i, _)| *i).collect());
                    degree.push(deg);
                }
            }
            let mut k = 0;
            loop {
                if k == d {
                    break 'scan;
                }
                if x[k] < reach {
                    x[k] += 1;
                    break;
                }
                x[k] = -reach;
                k += 1;
            }
        }
        let index = points.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let mut oracle = DeformedOracle {
            fan,
            points,
            support,
            degree,
            index,
            relations: RowSpace::default(),
        };
        oracle.build_relations();
        oracle
    }

    fn product(&self, a: usize, b: usize) -> Option<usize> {
        let joint: BTreeSet<usize> = self.support[a].union(&self.support[b]).copied().collect();
        if !self.fan.in_a_cone(&joint) {
            return None;
        }
        let s: Vec<i64> = self.points[a].iter().zip(&self.points[b]).map(|(x, y)| x + y).collect();
        // anything missing from the table has degree above the truncation
        self.index.get(&s).copied()
    }

    fn build_relations(&mut self) {
        let ray_points: Vec<usize> = self.fan.rays.iter().map(|r| self.index[r]).collect();
        let top = q(self.fan.dim as i64);
        for c in 0..self.points.len() {
            if &self.degree[c] + q(1) > top {
                continue;
            }
            for j in 0..self.fan.dim {
                let mut v: BTreeMap<usize, BigRational> = BTreeMap::new();
                for (i, &rp) in ray_points.iter().enumerate() {
                    let coeff = self.fan.rays[i][j];
                    if coeff == 0 {
                        continue;
                    }
                    if let Some(p) = self.product(rp, c) {
                        *v.entry(p).or_insert_with(BigRational::zero) += q(coeff);
                    }
                }
                v.retain(|_, x| !x.is_zero());
                self.relations.insert(v);
            }
        }
    }

    /// Quotient dimension in each degree.
    pub fn histogram(&self) -> BTreeMap<BigRational, usize> {
        let mut by_degree: BTreeMap<BigRational, Vec<usize>> = BTreeMap::new();
        for (i, d) in self.degree.iter().enumerate() {
            by_degree.entry(d.clone()).or_default().push(i);
        }
        let mut out = BTreeMap::new();
        for (d, pts) in by_degree {
            let mut space = RowSpace::default();
            for (_, row) in &self.relations.rows {
                if row.keys().all(|k| self.degree[*k] == d) {
                    space.insert(row.clone());
                }
            }
            let mut count = 0;
            for p in pts {
                if space.insert(BTreeMap::from([(p, q(1))])) {
                    count += 1;
                }
            }
            if count > 0 {
                out.insert(d, count);
            }
        }
        out
    }

    /// Checks that the basis of `ring` is independent modulo the relations
    /// and that every structure constant holds in the quotient.
    pub fn confirms(&self, ring: &OrbifoldRing) -> Result<(), String> {
        let point_of = |i: usize| -> usize {
            let v: Vec<i64> = ring.basis_value(i).iter().map(|x| x.to_i64().unwrap()).collect();
            *self.index.get(&v).unwrap_or_else(|| panic!("basis value {v:?} outside the oracle box"))
        };
        let mut space = RowSpace::default();
        for (_, row) in &self.relations.rows {
            space.insert(row.clone());
        }
        for i in 0..ring.dim() {
            if !space.insert(BTreeMap::from([(point_of(i), q(1))])) {
                return Err(format!("basis element {} is dependent", ring.basis_label(i)));
            }
        }
        for i in 0..ring.dim() {
            for j in 0..ring.dim() {
                let mut v: BTreeMap<usize, BigRational> = BTreeMap::new();
                if let Some(p) = self.product(point_of(i), point_of(j)) {
                    v.insert(p, q(1));
                }
                for (k, c) in ring.product(i, j) {
                    let e = v.entry(point_of(*k)).or_insert_with(BigRational::zero);
                    *e -= c;
                }
                v.retain(|_, x| !x.is_zero());
                if !self.relations.contains(v) {
                    return Err(format!("product {} * {} disagrees", ring.basis_label(i), ring.basis_label(j)));
                }
            }
        }
        Ok(())
    }
}

/// The classical presentation `ℚ[x₁..xₙ]/(SR + linear forms)` of a smooth
/// complete fan, with all monomials up to degree `dim`.
pub struct StanleyReisnerOracle {
    pub fan: PlainFan,
    pub monomials: Vec<Vec<u32>>,
    pub index: HashMap<Vec<u32>, usize>,
    pub relations: RowSpace,
}

impl StanleyReisnerOracle {
    pub fn new(fan: PlainFan) -> Self {
        let n = fan.rays.len();
        let d = fan.dim as u32;
        let mut monomials = vec![vec![0u32; n]];
        let mut frontier = monomials.clone();
        for _ in 0..d {
            let mut next = BTreeSet::new();
            for m in &frontier {
                for i in 0..n {
                    let mut m = m.clone();
                    m[i] += 1;
                    next.insert(m);
                }
            }
            frontier = next.into_iter().collect();
            monomials.extend(frontier.iter().cloned());
        }
        let index: HashMap<Vec<u32>, usize> = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let mut relations = RowSpace::default();
        for (k, m) in monomials.iter().enumerate() {
            let supp: BTreeSet<usize> = (0..n).filter(|&i| m[i] > 0).collect();
            if !fan.in_a_cone(&supp) {
                relations.insert(BTreeMap::from([(k, q(1))]));
            }
        }
        for m in &monomials {
            if m.iter().sum::<u32>() == d {
                continue;
            }
            for j in 0..fan.dim {
                let mut v = BTreeMap::new();
                for i in 0..n {
                    if fan.rays[i][j] != 0 {
                        let mut t = m.clone();
                        t[i] += 1;
                        v.insert(index[&t], q(fan.rays[i][j]));
                    }
                }
                relations.insert(v);
            }
        }
        StanleyReisnerOracle {
            fan,
            monomials,
            index,
            relations,
        }
    }

    pub fn dimension(&self) -> usize {
        self.monomials.len() - self.relations.rank()
    }

    pub fn confirms(&self, ring: &OrbifoldRing) -> Result<(), String> {
        let mono = |i: usize| -> usize {
            let b = &ring.basis()[i];
            assert!(ring.sector(b.sector).is_zero(), "smooth fans have one sector");
            self.index[&b.exponents]
        };
        let mut space = RowSpace::default();
        for (_, row) in &self.relations.rows {
            space.insert(row.clone());
        }
        for i in 0..ring.dim() {
            if !space.insert(BTreeMap::from([(mono(i), q(1))])) {
                return Err(format!("{} is dependent", ring.basis_label(i)));
            }
        }
        let d = self.fan.dim as u32;
        for i in 0..ring.dim() {
            for j in 0..ring.dim() {
                let prod: Vec<u32> = ring.basis()[i]
                    .exponents
                    .iter()
                    .zip(&ring.basis()[j].exponents)
                    .map(|(a, b)| a + b)
                    .collect();
                let mut v = BTreeMap::new();
                if prod.iter().sum::<u32>() <= d {
                    v.insert(self.index[&prod], q(1));
                }
                for (k, c) in ring.product(i, j) {
                    let e = v.entry(mono(*k)).or_insert_with(BigRational::zero);
                    *e -= c;
                }
                v.retain(|_, x: &mut BigRational| !x.is_zero());
                if !self.relations.contains(v) {
                    return Err(format!("{} * {} disagrees", ring.basis_label(i), ring.basis_label(j)));
                }
            }
        }
        Ok(())
    }
}
