//! Dense exact linear algebra over the supported fields: row reduction,
//! nullspaces, solving and inversion. Straightforward Gaussian elimination;
//! every division is exact field arithmetic.

use crate::error::{Error, Result};
use crate::fields::{FieldDescriptor, Scalar};

/// Row-major matrix with entries in a single base field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub field: FieldDescriptor,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize, field: FieldDescriptor) -> Mat {
        Mat {
            rows,
            cols,
            field,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(n: usize, field: FieldDescriptor) -> Mat {
        let mut m = Mat::zeros(n, n, field);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>, field: FieldDescriptor) -> Result<Mat> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimMismatch);
        }
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            for v in row {
                if v.field() != field {
                    return Err(Error::FieldMismatch);
                }
                data.push(v);
            }
        }
        Ok(Mat {
            rows: r,
            cols: c,
            field,
            data,
        })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[Scalar]) {
        for (i, x) in v.iter().enumerate() {
            self.set(i, j, x.clone());
        }
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::DimMismatch);
        }
        let mut out = Mat::zeros(self.rows, other.cols, self.field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).add(&a.mul(b)?)?;
                    out.set(i, j, cur);
                }
            }
        }
        Ok(out)
    }

    pub fn mat_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimMismatch);
        }
        let mut out = vec![self.field.zero(); self.rows];
        for j in 0..self.cols {
            if v[j].is_zero() {
                continue;
            }
            for i in 0..self.rows {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                out[i] = out[i].add(&a.mul(&v[j])?)?;
            }
        }
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                if i == j && !e.is_one() {
                    return false;
                }
                if i != j && !e.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Result<Vec<usize>> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            if pr != row {
                for j in 0..self.cols {
                    let a = self.get(row, j).clone();
                    let b = self.get(pr, j).clone();
                    self.set(row, j, b);
                    self.set(pr, j, a);
                }
            }
            let inv = self.get(row, col).inv()?;
            for j in 0..self.cols {
                let v = self.get(row, j).mul(&inv)?;
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r == row || self.get(r, col).is_zero() {
                    continue;
                }
                let f = self.get(r, col).clone();
                for j in 0..self.cols {
                    let v = self.get(r, j).sub(&f.mul(self.get(row, j))?)?;
                    self.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Ok(pivots)
    }

    pub fn rank(&self) -> Result<usize> {
        let mut m = self.clone();
        Ok(m.rref()?.len())
    }

    /// Basis of the right nullspace (vectors v with self * v = 0).
    pub fn nullspace(&self) -> Result<Vec<Vec<Scalar>>> {
        let mut m = self.clone();
        let pivots = m.rref()?;
        let mut basis = Vec::new();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec_out = vec![self.field.zero(); self.cols];
            vec_out[free] = self.field.one();
            for col in 0..self.cols {
                if let Some(r) = pivot_set[col] {
                    vec_out[col] = m.get(r, free).neg();
                }
            }
            basis.push(vec_out);
        }
        Ok(basis)
    }

    /// One solution of self * x = b, if consistent.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if b.len() != self.rows {
            return Err(Error::DimMismatch);
        }
        let mut aug = Mat::zeros(self.rows, self.cols + 1, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref()?;
        if pivots.contains(&self.cols) {
            return Ok(None); // inconsistent
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols).clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<Option<Mat>> {
        if self.rows != self.cols {
            return Err(Error::DimMismatch);
        }
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n, self.field);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, self.field.one());
        }
        let pivots = aug.rref()?;
        if pivots.len() < n || pivots.iter().enumerate().any(|(r, &c)| r != c) {
            return Ok(None);
        }
        let mut inv = Mat::zeros(n, n, self.field);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Ok(Some(inv))
    }

    /// Entry-wise Galois conjugation (quadratic extensions only).
    pub fn conj(&self) -> Result<Mat> {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v = v.conj()?;
        }
        Ok(out)
    }

    pub fn trace(&self) -> Result<Scalar> {
        if self.rows != self.cols {
            return Err(Error::DimMismatch);
        }
        let mut t = self.field.zero();
        for i in 0..self.rows {
            t = t.add(self.get(i, i))?;
        }
        Ok(t)
    }
}

/// v + w
pub fn vec_add(v: &[Scalar], w: &[Scalar]) -> Result<Vec<Scalar>> {
    if v.len() != w.len() {
        return Err(Error::DimMismatch);
    }
    v.iter().zip(w).map(|(a, b)| a.add(b)).collect()
}

/// v - w
pub fn vec_sub(v: &[Scalar], w: &[Scalar]) -> Result<Vec<Scalar>> {
    if v.len() != w.len() {
        return Err(Error::DimMismatch);
    }
    v.iter().zip(w).map(|(a, b)| a.sub(b)).collect()
}

/// c * v
pub fn vec_scale(c: &Scalar, v: &[Scalar]) -> Result<Vec<Scalar>> {
    v.iter().map(|a| c.mul(a)).collect()
}

pub fn vec_is_zero(v: &[Scalar]) -> bool {
    v.iter().all(|a| a.is_zero())
}

/// The span dimension of a set of coordinate vectors.
pub fn span_rank(vectors: &[Vec<Scalar>], dim: usize, field: FieldDescriptor) -> Result<usize> {
    if vectors.is_empty() {
        return Ok(0);
    }
    let m = Mat::from_rows(
        vectors.iter().map(|v| v.to_vec()).collect(),
        field,
    )?;
    debug_assert_eq!(m.cols, dim);
    m.rank()
}
