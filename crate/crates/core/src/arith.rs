//! Dense integer matrices and exact rational linear algebra.

use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Row-major dense matrix over ℤ.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed when there are no rows.
    pub fn from_rows(rows: &[Vec<BigInt>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix row {r}");
            for (c, x) in row.iter().enumerate() {
                m.data[r * cols + c] = x.clone();
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged matrix column {c}");
            for (r, x) in col.iter().enumerate() {
                m.data[r * m.cols + c] = x.clone();
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::from_rows(&rows, cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, r: usize, c: usize, value: BigInt) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> Vec<BigInt> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out.data[r * other.cols + c] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = BigInt::zero();
                for (c, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc += &self[(r, c)] * x;
                    }
                }
                acc
            })
            .collect()
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self[(r, c)].clone());
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other[(r, c)].clone());
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> IntMatrix {
        let picked: Vec<Vec<BigInt>> = rows.iter().map(|&r| self.row(r)).collect();
        Self::from_rows(&picked, self.cols)
    }

    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        let picked: Vec<Vec<BigInt>> = cols.iter().map(|&c| self.column(c)).collect();
        Self::from_columns(self.rows, &picked)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a[(r, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// `row[target] += k * row[source]`.
    pub(crate) fn add_row_multiple(&mut self, target: usize, source: usize, k: &BigInt) {
        for c in 0..self.cols {
            let delta = &self.data[source * self.cols + c] * k;
            self.data[target * self.cols + c] += delta;
        }
    }

    /// `col[target] += k * col[source]`.
    pub(crate) fn add_col_multiple(&mut self, target: usize, source: usize, k: &BigInt) {
        for r in 0..self.rows {
            let delta = &self.data[r * self.cols + source] * k;
            self.data[r * self.cols + target] += delta;
        }
    }

    pub(crate) fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -&self.data[r * self.cols + c];
            self.data[r * self.cols + c] = v;
        }
    }

    pub(crate) fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = -&self.data[r * self.cols + c];
            self.data[r * self.cols + c] = v;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        assert!(r < self.rows && c < self.cols, "matrix index out of range");
        &self.data[r * self.cols + c]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}[", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

pub fn int_vec(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_rational(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

pub fn to_rational_vec(xs: &[BigInt]) -> Vec<BigRational> {
    xs.iter().map(to_rational).collect()
}

/// Greatest integer ≤ x.
pub fn floor(x: &BigRational) -> BigInt {
    x.numer().div_floor(x.denom())
}

/// x − ⌊x⌋, always in [0, 1).
pub fn fract(x: &BigRational) -> BigRational {
    x - to_rational(&floor(x))
}

/// Lowest-terms text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Reduced row echelon form over ℚ.
#[derive(Clone, Debug)]
pub struct Rref {
    pub rows: Vec<Vec<BigRational>>,
    /// Pivot column of each row.
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn rref(mut rows: Vec<Vec<BigRational>>, cols: usize) -> Rref {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let factor = rows[i][c].clone();
            for j in c..cols {
                if rows[r][j].is_zero() {
                    continue;
                }
                let delta = &factor * &rows[r][j];
                rows[i][j] -= delta;
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    Rref { rows, pivots, cols }
}

pub fn rational_rank(vectors: &[Vec<BigRational>], len: usize) -> usize {
    rref(vectors.to_vec(), len).rank()
}

/// Solves `Σ x_j columns[j] = target` when the columns are linearly independent.
/// Returns `None` when the system is inconsistent.
pub fn solve_unique(columns: &[Vec<BigRational>], target: &[BigRational]) -> Option<Vec<BigRational>> {
    let k = columns.len();
    let n = target.len();
    // augmented rows: one per coordinate
    let rows: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let red = rref(rows, k + 1);
    if red.pivots.contains(&k) {
        return None;
    }
    let mut x = vec![BigRational::zero(); k];
    for (row, &p) in red.rows.iter().zip(&red.pivots) {
        x[p] = row[k].clone();
    }
    // independence: every variable must be a pivot, otherwise the answer is not unique
    debug_assert_eq!(red.rank(), k, "solve_unique called with dependent columns");
    Some(x)
}

pub fn is_nonnegative(xs: &[BigRational]) -> bool {
    xs.iter().all(|x| !x.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let m = IntMatrix::from_i64(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 1]]);
        // 2(3-2) - 0 + 1(1-3) = 0
        assert_eq!(m.determinant(), BigInt::from(0));
        let m = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.determinant(), BigInt::from(-1));
        let m = IntMatrix::from_i64(&[&[1, 0], &[-1, -2]]);
        assert_eq!(m.determinant(), BigInt::from(-2));
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "3", "-1/2", "7/3"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational("2/4").unwrap(), rat(1, 2));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }

    #[test]
    fn floor_and_fract_of_negative_values() {
        assert_eq!(floor(&rat(-1, 2)), BigInt::from(-1));
        assert_eq!(fract(&rat(-1, 2)), rat(1, 2));
        assert_eq!(floor(&rat(3, 1)), BigInt::from(3));
        assert!(fract(&rat(3, 1)).is_zero());
    }

    #[test]
    fn solve_unique_two_by_two() {
        let cols = vec![vec![rat(1, 1), rat(0, 1)], vec![rat(-1, 1), rat(-2, 1)]];
        let x = solve_unique(&cols, &[rat(0, 1), rat(-1, 1)]).unwrap();
        assert_eq!(x, vec![rat(1, 2), rat(1, 2)]);
        let cols = vec![vec![rat(1, 1), rat(0, 1)]];
        assert!(solve_unique(&cols, &[rat(0, 1), rat(1, 1)]).is_none());
    }
}
