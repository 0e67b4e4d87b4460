//! Small dense real matrices: determinant and adjugate.
//!
//! Sizes in this crate never exceed 16×16, so everything is plain row-major
//! storage with partial-pivot elimination. The adjugate is built from
//! cofactors (one pivoted elimination per minor) rather than from the inverse,
//! which keeps it well defined for singular input.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row slices; all rows must have equal length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}×{} by {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Square submatrix with row `skip_row` and column `skip_col` removed.
    pub fn minor(&self, skip_row: usize, skip_col: usize) -> Self {
        let n = self.rows - 1;
        let m = self.cols - 1;
        Self::from_fn(n, m, |i, j| {
            let si = if i >= skip_row { i + 1 } else { i };
            let sj = if j >= skip_col { j + 1 } else { j };
            self[(si, sj)]
        })
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "shape {}×{} does not match {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}×{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{v:.6e}")).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(m: &Matrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "determinant of non-square {}×{} matrix",
            m.rows, m.cols
        )));
    }
    Ok(det_in_place(m.rows, &mut m.data.clone()))
}

/// Determinant of an `n×n` row-major buffer, destroying the buffer.
pub(crate) fn det_in_place(n: usize, a: &mut [f64]) -> f64 {
    let mut det = 1.0;
    for col in 0..n {
        let mut pivot = col;
        let mut best = a[col * n + col].abs();
        for r in col + 1..n {
            let v = a[r * n + col].abs();
            if v > best {
                best = v;
                pivot = r;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for j in 0..n {
                a.swap(col * n + j, pivot * n + j);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det *= p;
        for r in col + 1..n {
            let factor = a[r * n + col] / p;
            if factor == 0.0 {
                continue;
            }
            for j in col + 1..n {
                a[r * n + j] -= factor * a[col * n + j];
            }
        }
    }
    det
}

/// Inverse by Gauss-Jordan elimination; `None` when a pivot vanishes.
pub fn inverse(m: &Matrix) -> Result<Option<Matrix>> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "inverse of non-square {}×{} matrix",
            m.rows, m.cols
        )));
    }
    let n = m.rows;
    let mut a = m.data.clone();
    let mut inv = Matrix::identity(n).data;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x * n + col].abs().total_cmp(&a[y * n + col].abs()))
            .unwrap_or(col);
        if a[pivot * n + col] == 0.0 {
            return Ok(None);
        }
        if pivot != col {
            for j in 0..n {
                a.swap(col * n + j, pivot * n + j);
                inv.swap(col * n + j, pivot * n + j);
            }
        }
        let p = a[col * n + col];
        for j in 0..n {
            a[col * n + j] /= p;
            inv[col * n + j] /= p;
        }
        for r in (0..n).filter(|&r| r != col) {
            let factor = a[r * n + col];
            if factor == 0.0 {
                continue;
            }
            for j in 0..n {
                a[r * n + j] -= factor * a[col * n + j];
                inv[r * n + j] -= factor * inv[col * n + j];
            }
        }
    }
    Ok(Some(Matrix { rows: n, cols: n, data: inv }))
}

/// Adjugate (transposed cofactor matrix): `adj[(i, j)] = (-1)^(i+j) det(minor(j, i))`.
pub fn adjugate(m: &Matrix) -> Result<Matrix> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "adjugate of non-square {}×{} matrix",
            m.rows, m.cols
        )));
    }
    let n = m.rows;
    if n == 1 {
        return Ok(Matrix::identity(1));
    }
    let mut out = Matrix::zeros(n, n);
    let mut buf = vec![0.0; (n - 1) * (n - 1)];
    for i in 0..n {
        for j in 0..n {
            // minor of m without row j and column i
            let mut idx = 0;
            for r in (0..n).filter(|&r| r != j) {
                for c in (0..n).filter(|&c| c != i) {
                    buf[idx] = m[(r, c)];
                    idx += 1;
                }
            }
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            out[(i, j)] = sign * det_in_place(n - 1, &mut buf);
        }
    }
    Ok(out)
}

/// Exact arithmetic over arbitrary-precision rationals.
pub mod exact {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Signed, ToPrimitive, Zero};

    use crate::error::{Error, Result};

    pub type Rational = BigRational;

    pub fn ratio(num: i64, den: i64) -> Rational {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    pub fn integer(v: i64) -> Rational {
        Rational::from_integer(BigInt::from(v))
    }

    /// Dense square rational matrix in row-major order.
    #[derive(Debug, Clone, PartialEq, Eq)]
    pub struct RationalMatrix {
        n: usize,
        data: Vec<Rational>,
    }

    impl RationalMatrix {
        pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
            let n = rows.len();
            let mut data = Vec::with_capacity(n * n);
            for (i, r) in rows.into_iter().enumerate() {
                if r.len() != n {
                    return Err(Error::Dimension(format!(
                        "row {i} has {} entries in a {n}-row matrix",
                        r.len()
                    )));
                }
                data.extend(r);
            }
            Ok(Self { n, data })
        }

        pub fn size(&self) -> usize {
            self.n
        }

        pub fn get(&self, i: usize, j: usize) -> &Rational {
            &self.data[i * self.n + j]
        }

        pub fn to_f64(&self) -> crate::linalg::Matrix {
            crate::linalg::Matrix::from_fn(self.n, self.n, |i, j| {
                self.get(i, j).to_f64().unwrap_or(f64::NAN)
            })
        }

        fn minor(&self, skip_row: usize, skip_col: usize) -> Self {
            let mut data = Vec::with_capacity((self.n - 1) * (self.n - 1));
            for r in (0..self.n).filter(|&r| r != skip_row) {
                for c in (0..self.n).filter(|&c| c != skip_col) {
                    data.push(self.get(r, c).clone());
                }
            }
            Self {
                n: self.n - 1,
                data,
            }
        }
    }

    pub fn determinant(m: &RationalMatrix) -> Rational {
        let n = m.n;
        let mut a = m.data.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return Rational::zero();
            };
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col].clone();
            det *= &p;
            for r in col + 1..n {
                if a[r * n + col].is_zero() {
                    continue;
                }
                let factor = &a[r * n + col] / &p;
                for j in col + 1..n {
                    let delta = &factor * &a[col * n + j];
                    a[r * n + j] -= delta;
                }
            }
        }
        det
    }

    pub fn adjugate(m: &RationalMatrix) -> RationalMatrix {
        let n = m.n;
        if n == 1 {
            return RationalMatrix {
                n,
                data: vec![Rational::one()],
            };
        }
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let d = determinant(&m.minor(j, i));
                data.push(if (i + j) % 2 == 0 { d } else { -d });
            }
        }
        RationalMatrix { n, data }
    }

    /// Parses `"a/b"` or `"a"`.
    pub fn parse(s: &str) -> Option<Rational> {
        let s = s.trim();
        match s.split_once('/') {
            Some((a, b)) => {
                let den: BigInt = b.trim().parse().ok()?;
                if den.is_zero() {
                    return None;
                }
                Some(Rational::new(a.trim().parse().ok()?, den))
            }
            None => Some(Rational::from_integer(s.parse().ok()?)),
        }
    }

    pub fn abs(r: &Rational) -> Rational {
        r.abs()
    }
}

#[cfg(test)]
mod tests {
    use super::exact::{self, ratio, RationalMatrix};
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn inverse_times_matrix_is_identity() {
        let m = Matrix::from_rows(&[[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 4.0]]).unwrap();
        let inv = inverse(&m).unwrap().unwrap();
        let prod = m.matmul(&inv).unwrap();
        assert!(prod.sub(&Matrix::identity(3)).unwrap().max_abs() < 1e-14);
        let singular = Matrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap();
        assert!(inverse(&singular).unwrap().is_none());
    }

    fn inverse_by_gauss_jordan(m: &Matrix) -> Matrix {
        let n = m.rows();
        let mut a = m.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[(x, col)].abs().partial_cmp(&a[(y, col)].abs()).unwrap())
                .unwrap();
            for j in 0..n {
                let t = a[(col, j)];
                a[(col, j)] = a[(pivot, j)];
                a[(pivot, j)] = t;
                let t = inv[(col, j)];
                inv[(col, j)] = inv[(pivot, j)];
                inv[(pivot, j)] = t;
            }
            let p = a[(col, col)];
            for j in 0..n {
                a[(col, j)] /= p;
                inv[(col, j)] /= p;
            }
            for r in 0..n {
                if r != col {
                    let f = a[(r, col)];
                    for j in 0..n {
                        a[(r, j)] -= f * a[(col, j)];
                        inv[(r, j)] -= f * inv[(col, j)];
                    }
                }
            }
        }
        inv
    }

    fn leibniz(m: &Matrix) -> f64 {
        // brute-force permutation expansion, small sizes only
        fn rec(m: &Matrix, row: usize, used: &mut Vec<bool>, sign: f64) -> f64 {
            let n = m.rows();
            if row == n {
                return sign;
            }
            let mut total = 0.0;
            let mut inversions_before = 0;
            for c in 0..n {
                if used[c] {
                    continue;
                }
                let s = if inversions_before % 2 == 0 { 1.0 } else { -1.0 };
                used[c] = true;
                total += m[(row, c)] * rec(m, row + 1, used, sign * s);
                used[c] = false;
                inversions_before += 1;
            }
            total
        }
        rec(m, 0, &mut vec![false; m.rows()], 1.0)
    }

    #[test]
    fn identity_determinant_is_one() {
        assert_eq!(determinant(&Matrix::identity(5)).unwrap(), 1.0);
    }

    #[test]
    fn repeated_row_gives_zero() {
        let m = Matrix::from_rows(&[
            [1.0, 2.0, 3.0],
            [0.5, -1.0, 4.0],
            [1.0, 2.0, 3.0],
        ])
        .unwrap();
        assert_eq!(determinant(&m).unwrap(), 0.0);
    }

    #[test]
    fn non_square_is_rejected() {
        let m = Matrix::zeros(2, 3);
        assert!(matches!(determinant(&m), Err(Error::Dimension(_))));
        assert!(matches!(adjugate(&m), Err(Error::Dimension(_))));
    }

    #[test]
    fn adjugate_closed_forms() {
        assert_eq!(adjugate(&Matrix::identity(4)).unwrap(), Matrix::identity(4));
        let m = Matrix::from_rows(&[[2.0, 3.0], [5.0, 7.0]]).unwrap();
        let adj = adjugate(&m).unwrap();
        assert_eq!(adj, Matrix::from_rows(&[[7.0, -3.0], [-5.0, 2.0]]).unwrap());
    }

    #[test]
    fn adjugate_of_singular_matrix_is_defined() {
        // rank 2, so the adjugate is rank 1 and nonzero
        let m = Matrix::from_rows(&[[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [0.0, 1.0, 1.0]]).unwrap();
        let adj = adjugate(&m).unwrap();
        assert!(adj.max_abs() > 0.1);
        let prod = m.matmul(&adj).unwrap();
        assert!(prod.max_abs() < 1e-12);
    }

    #[test]
    fn random_5x5_adjugate_matches_inverse_times_det() {
        let m = Matrix::from_fn(5, 5, |i, j| ((i * 7 + j * 3) % 11) as f64 / 5.0 - 0.9 + 0.3 * f64::from(u8::from(i == j)));
        let det = determinant(&m).unwrap();
        assert!(det.abs() > 1e-3);
        let oracle = inverse_by_gauss_jordan(&m).scale(det);
        let adj = adjugate(&m).unwrap();
        assert!(adj.sub(&oracle).unwrap().max_abs() < 1e-9 * oracle.max_abs().max(1.0));
    }

    #[test]
    fn exact_determinant_and_adjugate() {
        let m = RationalMatrix::from_rows(vec![
            vec![ratio(1, 2), ratio(1, 3)],
            vec![ratio(1, 4), ratio(1, 5)],
        ])
        .unwrap();
        assert_eq!(exact::determinant(&m), ratio(1, 10) - ratio(1, 12));
        let adj = exact::adjugate(&m);
        assert_eq!(adj.get(0, 1), &ratio(-1, 3));
        assert_eq!(adj.get(1, 0), &ratio(-1, 4));
        assert_eq!(exact::parse(" -3/12 "), Some(ratio(-1, 4)));
        assert_eq!(exact::parse("1/0"), None);
    }

    fn square(max: usize) -> impl Strategy<Value = Matrix> {
        (2..=max).prop_flat_map(|n| {
            prop::collection::vec(-2.0f64..2.0, n * n)
                .prop_map(move |v| Matrix::from_fn(n, n, |i, j| v[i * n + j]))
        })
    }

    proptest! {
        #[test]
        fn matrix_times_adjugate_is_det_identity(m in square(8)) {
            let n = m.rows();
            let det = determinant(&m).unwrap();
            let adj = adjugate(&m).unwrap();
            let lhs = m.matmul(&adj).unwrap();
            let rhs = Matrix::identity(n).scale(det);
            let scale = 1.0 + m.max_abs().powi(n as i32);
            prop_assert!(lhs.sub(&rhs).unwrap().max_abs() <= 1e-9 * scale);
        }

        #[test]
        fn determinant_matches_permutation_expansion(m in square(5)) {
            let a = determinant(&m).unwrap();
            let b = leibniz(&m);
            prop_assert!((a - b).abs() <= 1e-10 * (1.0 + b.abs()));
        }

        #[test]
        fn determinant_is_linear_in_each_row(m in square(6), c in -3.0f64..3.0, row in 0usize..6) {
            let n = m.rows();
            let row = row % n;
            let mut scaled = m.clone();
            for j in 0..n {
                scaled[(row, j)] *= c;
            }
            let a = determinant(&scaled).unwrap();
            let b = c * determinant(&m).unwrap();
            prop_assert!((a - b).abs() <= 1e-10 * (1.0 + b.abs()) * (1.0 + m.max_abs().powi(n as i32)));
        }
    }
}
