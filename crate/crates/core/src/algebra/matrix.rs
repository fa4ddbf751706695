//! Dense exact matrices with Gauss–Jordan elimination.

use std::fmt;

use super::{AlgebraError, Field, Scalar};

/// Row-major dense matrix over a single field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Output of [`Matrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowEchelon {
    pub reduced: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries in `field`.
    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Self, AlgebraError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for row in rows {
            if row.len() != cols {
                return Err(AlgebraError::Shape {
                    expected: cols,
                    found: row.len(),
                });
            }
            for x in row {
                if x.field() != field {
                    return Err(AlgebraError::MixedFields {
                        left: field,
                        right: x.field(),
                    });
                }
                data.push(x);
            }
        }
        Ok(Matrix {
            field,
            rows: nrows,
            cols,
            data,
        })
    }

    pub fn from_i64_rows(field: Field, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Self::from_rows(field, cols, rows).expect("rectangular integer rows")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>, AlgebraError> {
        if v.len() != self.cols {
            return Err(AlgebraError::Shape {
                expected: self.cols,
                found: v.len(),
            });
        }
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).try_fold(self.field.zero(), |acc, (a, b)| {
                    acc.try_add(&a.try_mul(b)?)
                })
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, AlgebraError> {
        if self.cols != other.rows {
            return Err(AlgebraError::Shape {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.try_mul(&other[(k, j)])?;
                    out[(i, j)] = out[(i, j)].try_add(&prod)?;
                }
            }
        }
        Ok(out)
    }

    /// Reduced row-echelon form by exact Gauss–Jordan elimination.
    pub fn rref(&self) -> RowEchelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, piv);
            let inv = m[(r, c)].inverse().expect("pivot is nonzero");
            for j in c..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            let pivot_row: Vec<Scalar> = m.row(r)[c..].to_vec();
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for (off, pv) in pivot_row.iter().enumerate() {
                    if pv.is_zero() {
                        continue;
                    }
                    let j = c + off;
                    m[(i, j)] = &m[(i, j)] - &(&factor * pv);
                }
            }
            pivots.push(c);
            r += 1;
        }
        RowEchelon {
            reduced: m,
            rank: r,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of the right null space `{v : M v = 0}`; empty iff the kernel is trivial.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let RowEchelon {
            reduced, pivots, ..
        } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![self.field.zero(); self.cols];
                v[free] = self.field.one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -&reduced[(r, free)];
                }
                v
            })
            .collect()
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Result<Matrix, AlgebraError> {
        if self.rows != self.cols {
            return Err(AlgebraError::Shape {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = self.field.one();
        }
        let ech = aug.rref();
        if ech.pivots.iter().take(n).copied().ne(0..n) || ech.rank < n {
            return Err(AlgebraError::Singular);
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = ech.reduced[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_is_reduced() {
        let id = Matrix::identity(Field::Rational, 3);
        let e = id.rref();
        assert_eq!(e.reduced, id);
        assert_eq!(e.rank, 3);
        assert_eq!(e.pivots, vec![0, 1, 2]);
        assert!(id.kernel_basis().is_empty());
    }

    #[test]
    fn zero_matrix() {
        let z = Matrix::zeros(Field::Rational, 2, 4);
        let e = z.rref();
        assert_eq!(e.reduced, z);
        assert_eq!(e.rank, 0);
        let k = Matrix::zeros(Field::Rational, 1, 3).kernel_basis();
        assert_eq!(k.len(), 3);
    }

    #[test]
    fn proportional_rows() {
        let m = Matrix::from_i64_rows(Field::Rational, &[&[1, 2], &[2, 4]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_over_f7() {
        let f = Field::prime(7).unwrap();
        let m = Matrix::from_i64_rows(f, &[&[1, 1, 0], &[0, 1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        let expected: Vec<Scalar> = [1, 6, 1].iter().map(|&v| f.from_i64(v)).collect();
        // proportional: k[0] = c * expected for c = k[0][0]
        let c = k[0][0].clone();
        let scaled: Vec<Scalar> = expected.iter().map(|x| x * &c).collect();
        assert_eq!(k[0], scaled);
    }

    #[test]
    fn inverse_roundtrip() {
        let q = Field::Rational;
        let m = Matrix::from_i64_rows(q, &[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(q, 2));
        let sing = Matrix::from_i64_rows(q, &[&[1, 2], &[2, 4]]);
        assert_eq!(sing.inverse(), Err(AlgebraError::Singular));
    }

    fn small_prime_matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            (Just(r), Just(c), prop::collection::vec(0i64..5, r * c))
        })
    }

    proptest! {
        #[test]
        fn rank_nullity((r, c, vals) in small_prime_matrix()) {
            let f = Field::prime(5).unwrap();
            let rows: Vec<Vec<Scalar>> = vals.chunks(c).map(|ch| ch.iter().map(|&v| f.from_i64(v)).collect()).collect();
            let m = Matrix::from_rows(f, c, rows).unwrap();
            let kernel = m.kernel_basis();
            prop_assert_eq!(m.rank() + kernel.len(), c);
            for v in &kernel {
                prop_assert!(m.mul_vec(v).unwrap().iter().all(Scalar::is_zero));
            }
            let once = m.rref().reduced;
            prop_assert_eq!(once.rref().reduced, once.clone());
            prop_assert!(r >= m.rank());
        }

        #[test]
        fn rational_kernel_vectors_annihilate((_r, c, vals) in small_prime_matrix()) {
            let q = Field::Rational;
            let rows: Vec<Vec<Scalar>> = vals.chunks(c).map(|ch| ch.iter().map(|&v| q.from_i64(v - 2)).collect()).collect();
            let m = Matrix::from_rows(q, c, rows).unwrap();
            for v in m.kernel_basis() {
                prop_assert!(m.mul_vec(&v).unwrap().iter().all(Scalar::is_zero));
            }
        }
    }
}
