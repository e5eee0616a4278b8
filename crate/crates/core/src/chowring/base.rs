//! Finite-dimensional graded base rings given by structure constants.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Dense coefficient vector over a base ring's basis.
pub type BaseVec = Vec<BigRational>;

/// A commutative graded ℚ-algebra with basis `e_0 = 1, e_1, …`, together with
/// twist classes `p_1..p_m` of degree one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseRing {
    labels: Vec<String>,
    degrees: Vec<usize>,
    table: Vec<Vec<BaseVec>>,
    twists: Vec<BaseVec>,
}

/// One declared product `e_i · e_j = Σ coeff·e_k`.
#[derive(Clone, Debug)]
pub struct BaseProduct {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<(usize, BigRational)>,
}

impl BaseRing {
    /// Products with the unit are implied, each unordered pair may be given
    /// once, and pairs left out multiply to zero.
    pub fn new(labels: Vec<String>, degrees: Vec<usize>, products: &[BaseProduct], twists: Vec<BaseVec>) -> Result<Self> {
        let dim = labels.len();
        if dim == 0 {
            return Err(Error::InvalidBaseRing("empty basis".into()));
        }
        if degrees.len() != dim {
            return Err(Error::InvalidBaseRing("one degree per basis element required".into()));
        }
        if degrees[0] != 0 {
            return Err(Error::InvalidBaseRing("basis element 0 must be the unit, of degree 0".into()));
        }
        let zero = vec![BigRational::zero(); dim];
        let mut table = vec![vec![zero.clone(); dim]; dim];
        let mut given = vec![vec![false; dim]; dim];
        for k in 0..dim {
            let e = unit_vector(dim, k);
            table[0][k] = e.clone();
            table[k][0] = e;
        }
        for p in products {
            if p.i >= dim || p.j >= dim {
                return Err(Error::InvalidBaseRing(format!("product ({}, {}) out of range", p.i, p.j)));
            }
            let mut v = zero.clone();
            for (k, c) in &p.terms {
                if *k >= dim {
                    return Err(Error::InvalidBaseRing(format!("term index {k} out of range")));
                }
                v[*k] += c;
            }
            for (a, b) in [(p.i, p.j), (p.j, p.i)] {
                if (a == 0 || b == 0 || given[a][b]) && table[a][b] != v {
                    return Err(Error::InvalidBaseRing(format!("conflicting products for ({a}, {b})")));
                }
                table[a][b] = v.clone();
                given[a][b] = true;
            }
        }
        let ring = BaseRing {
            labels,
            degrees,
            table,
            twists: Vec::new(),
        };
        ring.check_structure()?;
        ring.with_twists(twists)
    }

    fn check_structure(&self) -> Result<()> {
        let dim = self.dim();
        for i in 0..dim {
            for j in 0..dim {
                for (k, c) in self.table[i][j].iter().enumerate() {
                    if !c.is_zero() && self.degrees[k] != self.degrees[i] + self.degrees[j] {
                        return Err(Error::InvalidBaseRing(format!(
                            "product of {} and {} has a term {} of the wrong degree",
                            self.labels[i], self.labels[j], self.labels[k]
                        )));
                    }
                }
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let left = self.mul(&self.table[i][j], &unit_vector(dim, k));
                    let right = self.mul(&unit_vector(dim, i), &self.table[j][k]);
                    if left != right {
                        return Err(Error::InvalidBaseRing(format!(
                            "not associative on ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Replaces the twist classes; each must be homogeneous of degree one.
    pub fn with_twists(mut self, twists: Vec<BaseVec>) -> Result<Self> {
        for (t, p) in twists.iter().enumerate() {
            if p.len() != self.dim() {
                return Err(Error::InvalidBaseRing(format!("twist {t} has the wrong length")));
            }
            if let Some(k) = (0..self.dim()).find(|&k| !p[k].is_zero() && self.degrees[k] != 1) {
                return Err(Error::InvalidBaseRing(format!(
                    "twist {t} has a term {} of degree {}",
                    self.labels[k], self.degrees[k]
                )));
            }
        }
        self.twists = twists;
        Ok(self)
    }

    /// `m` zero twist classes.
    pub fn with_zero_twists(self, m: usize) -> Self {
        let z = self.zero();
        let twists = vec![z; m];
        self.with_twists(twists).expect("zero twists are homogeneous")
    }

    /// The cohomology ring of a point.
    pub fn point() -> Self {
        BaseRing::new(vec!["1".into()], vec![0], &[], Vec::new()).expect("point ring")
    }

    /// `ℚ[H]/(H^{k+1})`.
    pub fn projective_space(k: usize) -> Self {
        Self::truncated_polynomial("H", k)
    }

    fn truncated_polynomial(var: &str, k: usize) -> Self {
        let labels: Vec<String> = (0..=k)
            .map(|a| match a {
                0 => "1".to_string(),
                1 => var.to_string(),
                _ => format!("{var}^{a}"),
            })
            .collect();
        let mut products = Vec::new();
        for a in 1..=k {
            for b in a..=k {
                if a + b <= k {
                    products.push(BaseProduct {
                        i: a,
                        j: b,
                        terms: vec![(a + b, BigRational::one())],
                    });
                }
            }
        }
        BaseRing::new(labels, (0..=k).collect(), &products, Vec::new()).expect("truncated polynomial ring")
    }

    /// `self ⊗ other`, basis ordered lexicographically by the pair of indices.
    /// The result carries no twist classes.
    pub fn tensor(&self, other: &BaseRing) -> BaseRing {
        let (p, q) = (self.dim(), other.dim());
        let idx = |i: usize, j: usize| i * q + j;
        let mut labels = Vec::with_capacity(p * q);
        let mut degrees = Vec::with_capacity(p * q);
        for i in 0..p {
            for j in 0..q {
                labels.push(match (i, j) {
                    (0, _) => other.labels[j].clone(),
                    (_, 0) => self.labels[i].clone(),
                    _ => format!("{}*{}", self.labels[i], other.labels[j]),
                });
                degrees.push(self.degrees[i] + other.degrees[j]);
            }
        }
        let mut products = Vec::new();
        for a in 0..p * q {
            for b in a..p * q {
                let (i1, j1) = (a / q, a % q);
                let (i2, j2) = (b / q, b % q);
                let mut terms = Vec::new();
                for (k1, c1) in self.table[i1][i2].iter().enumerate() {
                    if c1.is_zero() {
                        continue;
                    }
                    for (k2, c2) in other.table[j1][j2].iter().enumerate() {
                        if !c2.is_zero() {
                            terms.push((idx(k1, k2), c1 * c2));
                        }
                    }
                }
                products.push(BaseProduct { i: a, j: b, terms });
            }
        }
        BaseRing::new(labels, degrees, &products, Vec::new()).expect("tensor product of valid rings")
    }

    /// Relabels the basis (for instance to tell factors of a product apart).
    pub fn relabeled(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dim() {
            return Err(Error::InvalidBaseRing("wrong number of labels".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn top_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn twists(&self) -> &[BaseVec] {
        &self.twists
    }

    pub fn zero(&self) -> BaseVec {
        vec![BigRational::zero(); self.dim()]
    }

    pub fn basis_vector(&self, i: usize) -> BaseVec {
        unit_vector(self.dim(), i)
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &BaseVec {
        &self.table[i][j]
    }

    pub fn mul(&self, a: &[BigRational], b: &[BigRational]) -> BaseVec {
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in self.table[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &xy * c;
                    }
                }
            }
        }
        out
    }
}

fn unit_vector(dim: usize, k: usize) -> BaseVec {
    let mut v = vec![BigRational::zero(); dim];
    v[k] = BigRational::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn projective_plane_products() {
        let p2 = BaseRing::projective_space(2);
        assert_eq!(p2.dim(), 3);
        assert_eq!(p2.mul_basis(1, 1), &p2.basis_vector(2));
        assert_eq!(p2.mul_basis(1, 2), &p2.zero());
        assert_eq!(p2.top_degree(), 2);
    }

    #[test]
    fn tensor_of_two_lines() {
        let p1 = BaseRing::projective_space(1);
        let t = p1.tensor(&p1);
        assert_eq!(t.labels(), &["1", "H", "H", "H*H"]);
        assert_eq!(t.mul_basis(1, 2), &t.basis_vector(3));
        assert_eq!(t.mul_basis(1, 1), &t.zero());
    }

    #[test]
    fn rejects_bad_degrees_and_twists() {
        let bad = BaseRing::new(
            vec!["1".into(), "H".into()],
            vec![0, 1],
            &[BaseProduct {
                i: 1,
                j: 1,
                terms: vec![(1, rat(1, 1))],
            }],
            vec![],
        );
        assert!(bad.is_err());
        let p1 = BaseRing::projective_space(1);
        assert!(p1.clone().with_twists(vec![vec![rat(1, 1), rat(0, 1)]]).is_err());
        assert!(p1.with_twists(vec![vec![rat(0, 1), rat(-1, 1)]]).is_ok());
    }
}
