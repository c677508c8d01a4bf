//! Dense matrices over exact rationals.
//!
//! A matrix with `rows × cols` shape represents a linear map from a
//! `cols`-dimensional space to a `rows`-dimensional one, so `a.mul(&b)` is
//! the composite "apply `b`, then `a`".

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{self, Rational, RationalRepr};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("data length {len} does not match shape {rows}x{cols}")]
    BadData { rows: usize, cols: usize, len: usize },
    #[error("ragged rows: row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("shape mismatch: {left_rows}x{left_cols} cannot be multiplied by {right_rows}x{right_cols}")]
    Shape {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::BadData {
                rows,
                cols,
                len: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from row vectors. An empty row list yields a `0 x cols`
    /// matrix, where `cols` must then be supplied separately; use
    /// [`RatMatrix::zeros`] for that case.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, MatrixError> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(MatrixError::Ragged {
                    row: i,
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self { rows: n, cols, data })
    }

    /// Convenience constructor from integer rows. Panics on ragged input.
    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| rational::int(x)).collect())
            .collect();
        Self::from_rows(rows).expect("ragged integer matrix")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn diagonal(values: &[Rational]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m.data[i * n + i] = v.clone();
        }
        m
    }

    /// The permutation matrix sending basis vector `j` to basis vector `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zeros(n, n);
        for (j, &i) in perm.iter().enumerate() {
            m.data[i * n + j] = Rational::one();
        }
        m
    }

    /// The twist `U ⊗ V → V ⊗ U`, `u_i ⊗ v_j ↦ v_j ⊗ u_i`, for `dim U = u`,
    /// `dim V = v`, with row-major (Kronecker) basis ordering.
    pub fn commutation(u: usize, v: usize) -> Self {
        let perm: Vec<usize> = (0..u * v).map(|k| (k % v) * u + k / v).collect();
        Self::permutation(&perm)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.data[i * self.cols + j] = value;
    }

    pub fn data(&self) -> &[Rational] {
        &self.data
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        if self.cols == 0 {
            return vec![Vec::new(); self.rows];
        }
        self.data.chunks(self.cols).map(<[_]>::to_vec).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, rhs: &RatMatrix) -> Result<RatMatrix, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::Shape {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: rhs.rows,
                right_cols: rhs.cols,
            });
        }
        let mut out = RatMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &RatMatrix) -> Result<RatMatrix, MatrixError> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &RatMatrix) -> Result<RatMatrix, MatrixError> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(
        &self,
        rhs: &RatMatrix,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<RatMatrix, MatrixError> {
        if self.shape() != rhs.shape() {
            return Err(MatrixError::Shape {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: rhs.rows,
                right_cols: rhs.cols,
            });
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect();
        Ok(RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, k: &Rational) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut out = RatMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        out
    }

    /// Kronecker product; block `(i, j)` of the result is `self[i][j] * rhs`.
    pub fn kron(&self, rhs: &RatMatrix) -> RatMatrix {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = RatMatrix::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        let b = rhs.get(k, l);
                        if !b.is_zero() {
                            out.data[(i * rhs.rows + k) * cols + j * rhs.cols + l] = a * b;
                        }
                    }
                }
            }
        }
        out
    }

    /// Exact determinant by fraction-based Gaussian elimination.
    pub fn determinant(&self) -> Result<Rational, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r * n + c].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                for j in 0..n {
                    a.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let pivot = a[c * n + c].clone();
            det *= &pivot;
            for r in c + 1..n {
                if a[r * n + c].is_zero() {
                    continue;
                }
                let factor = &a[r * n + c] / &pivot;
                for j in c..n {
                    let t = &factor * &a[c * n + j];
                    a[r * n + j] -= t;
                }
            }
        }
        Ok(det)
    }

    /// Exact inverse by Gauss-Jordan elimination; `None` when singular or
    /// not square.
    pub fn inverse(&self) -> Option<RatMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut inv = RatMatrix::identity(n).data;
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r * n + c].is_zero())?;
            if p != c {
                for j in 0..n {
                    a.swap(p * n + j, c * n + j);
                    inv.swap(p * n + j, c * n + j);
                }
            }
            let pivot_inv = a[c * n + c].recip();
            for j in 0..n {
                a[c * n + j] *= &pivot_inv;
                inv[c * n + j] *= &pivot_inv;
            }
            for r in 0..n {
                if r == c || a[r * n + c].is_zero() {
                    continue;
                }
                let factor = a[r * n + c].clone();
                for j in 0..n {
                    let t = &factor * &a[c * n + j];
                    a[r * n + j] -= t;
                    let t = &factor * &inv[c * n + j];
                    inv[r * n + j] -= t;
                }
            }
        }
        Some(RatMatrix {
            rows: n,
            cols: n,
            data: inv,
        })
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.row_vecs().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", rational::Display(x))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Serialized as `{"rows": r, "cols": c, "data": [[..], ..]}` so that empty
/// shapes survive a round trip.
#[derive(Serialize, Deserialize)]
struct RatMatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<Vec<RationalRepr>>,
}

impl Serialize for RatMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RatMatrixRepr {
            rows: self.rows,
            cols: self.cols,
            data: self
                .row_vecs()
                .iter()
                .map(|r| r.iter().map(RationalRepr::from).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = RatMatrixRepr::deserialize(d)?;
        if repr.data.len() != repr.rows {
            return Err(D::Error::custom(format!(
                "expected {} rows, found {}",
                repr.rows,
                repr.data.len()
            )));
        }
        let mut data = Vec::with_capacity(repr.rows * repr.cols);
        for row in repr.data {
            if row.len() != repr.cols {
                return Err(D::Error::custom(format!(
                    "expected {} columns, found {}",
                    repr.cols,
                    row.len()
                )));
            }
            for x in row {
                data.push(Rational::try_from(x).map_err(D::Error::custom)?);
            }
        }
        Ok(RatMatrix {
            rows: repr.rows,
            cols: repr.cols,
            data,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn product_matches_hand_computation() {
        let a = RatMatrix::from_ints(&[[1, 1], [0, 1]]);
        let b = RatMatrix::from_ints(&[[1, 0], [1, 1]]);
        assert_eq!(a.mul(&b).unwrap(), RatMatrix::from_ints(&[[2, 1], [1, 1]]));
        assert!(a.mul(&RatMatrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn determinant_and_inverse() {
        let a = RatMatrix::from_ints(&[[2, 1, 0], [1, 3, 1], [0, 1, 4]]);
        assert_eq!(a.determinant().unwrap(), int(18));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), RatMatrix::identity(3));
        assert_eq!(*inv.get(0, 0), frac(11, 18));
        let singular = RatMatrix::from_ints(&[[1, 2], [2, 4]]);
        assert_eq!(singular.determinant().unwrap(), int(0));
        assert!(singular.inverse().is_none());
        assert_eq!(RatMatrix::zeros(0, 0).determinant().unwrap(), int(1));
    }

    #[test]
    fn commutation_swaps_kronecker_factors() {
        let u = RatMatrix::from_ints(&[[1, 2], [3, 4]]);
        let v = RatMatrix::from_ints(&[[0, 1, 5], [1, 0, 2], [7, 1, 1]]);
        let t_uv = RatMatrix::commutation(2, 3);
        let t_vu = RatMatrix::commutation(3, 2);
        let lhs = t_uv.mul(&u.kron(&v)).unwrap();
        let rhs = v.kron(&u).mul(&t_uv).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(t_vu.mul(&t_uv).unwrap(), RatMatrix::identity(6));
    }

    #[test]
    fn kron_is_associative() {
        let a = RatMatrix::from_ints(&[[1, -1]]);
        let b = RatMatrix::from_ints(&[[2], [3]]);
        let c = RatMatrix::from_ints(&[[0, 1], [1, 1]]);
        assert_eq!(a.kron(&b).kron(&c), a.kron(&b.kron(&c)));
    }
}
