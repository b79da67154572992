//! Exact rational linear algebra.
//!
//! Everything here works over arbitrary-precision rationals; there is no
//! floating point in this module. Matrices are small and dense, so the
//! elimination routines favour clarity over speed.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Shorthand for an integral rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Returns the value as an `i64` if it is an integer that fits.
pub fn as_integer(q: &Rational) -> Option<i64> {
    if q.is_integer() {
        q.to_integer().to_i64()
    } else {
        None
    }
}

fn bit_size(q: &Rational) -> u64 {
    q.numer().bits() + q.denom().bits()
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds a matrix from row-major entries. Panics if the length is wrong.
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Rational>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must equal rows*cols");
        Self { rows, cols, entries }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row.iter().map(|&v| rat(v)));
        }
        Self { rows: r, cols: c, entries }
    }

    /// Builds a matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn trace(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "trace of a non-square matrix");
        (0..self.rows).fold(Rational::zero(), |acc, i| acc + &self[(i, i)])
    }

    /// Columns `start..end` as a new matrix.
    pub fn column_range(&self, start: usize, end: usize) -> Self {
        let mut m = Self::zeros(self.rows, end - start);
        for i in 0..self.rows {
            for j in start..end {
                m[(i, j - start)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Rows `start..end` as a new matrix.
    pub fn row_range(&self, start: usize, end: usize) -> Self {
        Self::from_entries(
            end - start,
            self.cols,
            self.entries[start * self.cols..end * self.cols].to_vec(),
        )
    }

    /// `[self | other]`.
    pub fn hconcat(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "row count mismatch in hconcat");
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        rref(self).rank
    }

    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(p) = choose_pivot(&a, col, col) else {
                return Rational::zero();
            };
            if p != col {
                a.swap_rows(p, col);
                det = -det;
            }
            let pivot = a[(col, col)].clone();
            det *= &pivot;
            for r in col + 1..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let factor = &a[(r, col)] / &pivot;
                for c in col..n {
                    let delta = &factor * &a[(col, c)];
                    a[(r, c)] -= delta;
                }
            }
        }
        det
    }

    /// Inverse of a square matrix, or `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Some(Self::zeros(0, 0));
        }
        let aug = self.hconcat(&Self::identity(n));
        let red = rref(&aug);
        if red.pivot_columns.len() < n || red.pivot_columns[n - 1] != n - 1 {
            return None;
        }
        Some(red.reduced.column_range(n, 2 * n))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &RationalMatrix {
    type Output = RationalMatrix;
    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = RationalMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "] ({}x{})", self.rows, self.cols)
    }
}

/// Result of Gauss–Jordan elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: RationalMatrix,
    pub rank: usize,
    pub pivot_columns: Vec<usize>,
}

// Among rows `from..` with a non-zero entry in `col`, the one whose entry has the
// smallest bit size; keeps intermediate coefficients short.
fn choose_pivot(a: &RationalMatrix, col: usize, from: usize) -> Option<usize> {
    (from..a.rows)
        .filter(|&r| !a[(r, col)].is_zero())
        .min_by_key(|&r| (bit_size(&a[(r, col)]), r))
}

/// Reduced row-echelon form.
pub fn rref(m: &RationalMatrix) -> Rref {
    let mut a = m.clone();
    let mut pivot_columns = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = choose_pivot(&a, col, row) else {
            continue;
        };
        a.swap_rows(p, row);
        let inv = a[(row, col)].recip();
        for c in col..a.cols {
            let v = &a[(row, c)] * &inv;
            a[(row, c)] = v;
        }
        for r in 0..a.rows {
            if r == row || a[(r, col)].is_zero() {
                continue;
            }
            let factor = a[(r, col)].clone();
            for c in col..a.cols {
                if a[(row, c)].is_zero() {
                    continue;
                }
                let delta = &factor * &a[(row, c)];
                a[(r, c)] -= delta;
            }
        }
        pivot_columns.push(col);
        row += 1;
    }
    Rref { reduced: a, rank: pivot_columns.len(), pivot_columns }
}

/// Basis of the right null space, one basis vector per column.
pub fn kernel_basis(m: &RationalMatrix) -> RationalMatrix {
    let Rref { reduced, pivot_columns, .. } = rref(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivot_columns.contains(c)).collect();
    let mut basis = RationalMatrix::zeros(m.cols, free.len());
    for (k, &fc) in free.iter().enumerate() {
        basis[(fc, k)] = Rational::one();
        for (r, &pc) in pivot_columns.iter().enumerate() {
            basis[(pc, k)] = -reduced[(r, fc)].clone();
        }
    }
    basis
}

/// Some `x` with `m·x = b`, or `None` when the system is inconsistent.
/// Free variables are set to zero.
pub fn solve(m: &RationalMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(b.len(), m.rows, "right-hand side length must equal row count");
    let rhs = RationalMatrix::from_columns(m.rows, &[b.to_vec()]);
    let Rref { reduced, pivot_columns, .. } = rref(&m.hconcat(&rhs));
    if pivot_columns.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); m.cols];
    for (r, &pc) in pivot_columns.iter().enumerate() {
        x[pc] = reduced[(r, m.cols)].clone();
    }
    Some(x)
}

/// Returns `true` if every entry is an integer.
pub fn is_integral(m: &RationalMatrix) -> bool {
    m.entries.iter().all(|q| q.is_integer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_i64_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn rref_identity() {
        let r = rref(&RationalMatrix::identity(2));
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivot_columns, vec![0, 1]);
        assert_eq!(r.reduced, RationalMatrix::identity(2));
    }

    #[test]
    fn rref_proportional_rows() {
        let r = rref(&m(&[&[1, 2], &[2, 4]]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivot_columns, vec![0]);
        assert_eq!(r.reduced, m(&[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn rref_zero() {
        let r = rref(&RationalMatrix::zeros(1, 1));
        assert_eq!(r.rank, 0);
        assert!(r.pivot_columns.is_empty());
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&RationalMatrix::identity(2)).cols(), 0);

        let k = kernel_basis(&m(&[&[1, 2], &[2, 4]]));
        assert_eq!(k.cols(), 1);
        // proportional to (-2, 1)
        assert_eq!(&k[(0, 0)] * rat(1), &k[(1, 0)] * rat(-2));
        assert!(!k[(1, 0)].is_zero());

        let k = kernel_basis(&RationalMatrix::zeros(0, 3));
        assert_eq!(k, RationalMatrix::identity(3));
    }

    #[test]
    fn solve_examples() {
        let x = solve(&RationalMatrix::identity(2), &[rat(3), rat(5)]).unwrap();
        assert_eq!(x, vec![rat(3), rat(5)]);

        let x = solve(&m(&[&[1, 1]]), &[rat(2)]).unwrap();
        assert_eq!(&x[0] + &x[1], rat(2));

        assert!(solve(&m(&[&[1], &[0]]), &[rat(0), rat(1)]).is_none());
    }

    #[test]
    fn determinant_and_inverse() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.determinant(), rat(1));
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, RationalMatrix::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
        assert_eq!(m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 3]]).determinant(), rat(-3));
    }

    fn small_matrix() -> impl Strategy<Value = RationalMatrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec((-4i64..5, 1i64..4), r * c).prop_map(move |v| {
                RationalMatrix::from_entries(r, c, v.into_iter().map(|(n, d)| ratio(n, d)).collect())
            })
        })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(a in small_matrix()) {
            let once = rref(&a);
            let twice = rref(&once.reduced);
            prop_assert_eq!(&once.reduced, &twice.reduced);
            prop_assert_eq!(once.rank, twice.rank);
        }

        #[test]
        fn rank_of_transpose(a in small_matrix()) {
            prop_assert_eq!(a.rank(), a.transpose().rank());
        }

        #[test]
        fn kernel_is_annihilated(a in small_matrix()) {
            let k = kernel_basis(&a);
            prop_assert_eq!(k.cols(), a.cols() - a.rank());
            prop_assert!((&a * &k).is_zero());
            prop_assert_eq!(k.rank(), k.cols());
        }

        #[test]
        fn solve_is_exact(a in small_matrix(), seed in proptest::collection::vec(-3i64..4, 4)) {
            let x0: Vec<Rational> = (0..a.cols()).map(|i| rat(seed[i % seed.len()])).collect();
            let b = a.mul_vec(&x0);
            let x = solve(&a, &b).expect("consistent by construction");
            prop_assert_eq!(a.mul_vec(&x), b);
        }
    }
}
