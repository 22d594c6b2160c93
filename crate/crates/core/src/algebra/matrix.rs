use std::fmt;
use std::ops::Mul;

use nalgebra::DMatrix;
use num_traits::{One, ToPrimitive, Zero};

use super::{linear, rat, MultiPoly, Rational};
use crate::error::{Error, Result};

/// Dense matrix over the rationals, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
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
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                expected: c,
                got: bad.len(),
            });
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|row| row.iter().map(|&x| rat(x)).collect()).collect())
            .expect("ragged integer matrix")
    }

    /// Block-diagonal sum of square or rectangular blocks.
    pub fn block_diag(blocks: &[RationalMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        m.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    /// `u^T A v`.
    pub fn bilinear(&self, u: &[Rational], v: &[Rational]) -> Result<Rational> {
        let av = self.mul_vec(v)?;
        if u.len() != av.len() {
            return Err(Error::DimensionMismatch {
                expected: av.len(),
                got: u.len(),
            });
        }
        Ok(u.iter().zip(&av).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Determinant by fraction-free elimination.
    pub fn det(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        Ok(linear::determinant(&self.to_rows()))
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![Rational::zero(); n];
            e[j] = Rational::one();
            cols.push(linear::solve_linear(self, &e).ok()?);
        }
        let mut m = Self::zeros(n, n);
        for (j, col) in cols.into_iter().enumerate() {
            for (i, v) in col.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Some(m)
    }

    /// The quadratic form `x^T A x` as a polynomial.
    pub fn quadratic_form(&self) -> MultiPoly {
        let n = self.rows;
        let mut terms = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let mut e = vec![0; n];
                e[i] += 1;
                e[j] += 1;
                terms.push((e, self.get(i, j).clone()));
            }
        }
        MultiPoly::from_terms(n, terms).expect("exponent lengths are consistent")
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).to_f64().unwrap_or(f64::NAN))
    }
}

impl Mul for &RationalMatrix {
    type Output = RationalMatrix;
    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        self.try_mul(rhs).expect("matrix dimensions differ")
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratio;

    #[test]
    fn det_and_inverse() {
        let a = RationalMatrix::from_i64(&[&[2, -1], &[-1, 2]]);
        assert_eq!(a.det().unwrap(), rat(3));
        let inv = a.inverse().unwrap();
        assert_eq!(
            inv,
            RationalMatrix::from_rows(vec![vec![ratio(2, 3), ratio(1, 3)], vec![ratio(1, 3), ratio(2, 3)]]).unwrap()
        );
        assert_eq!(&a * &inv, RationalMatrix::identity(2));
        let singular = RationalMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert!(singular.inverse().is_none());
        assert_eq!(singular.det().unwrap(), rat(0));
    }

    #[test]
    fn quadratic_form_of_cartan_a2() {
        let a = RationalMatrix::from_i64(&[&[2, -1], &[-1, 2]]);
        let q = a.quadratic_form();
        assert_eq!(q.to_string(), "2*x1^2 - 2*x1*x2 + 2*x2^2");
    }

    #[test]
    fn block_diag_shape() {
        let a = RationalMatrix::from_i64(&[&[1]]);
        let b = RationalMatrix::from_i64(&[&[2, -1], &[-1, 2]]);
        let m = RationalMatrix::block_diag(&[a, b]);
        assert_eq!(m.rows(), 3);
        assert_eq!(m.det().unwrap(), rat(3));
        assert!(m.is_symmetric());
    }
}
