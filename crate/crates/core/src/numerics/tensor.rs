//! Row-major dense tensors over `f32`/`f64` with the handful of matrix
//! kernels the MLP forward/backward passes need.

use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::{Error, Result};

/// Floating-point element type. Implemented for `f32` and `f64`; everything
/// numeric in the crate is generic over this so training can run in 32-bit
/// while gradient checks run in 64-bit.
pub trait Scalar:
    Copy
    + PartialOrd
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    const ZERO: Self;
    const ONE: Self;
    fn from_f64(v: f64) -> Self;
    fn to_f64(self) -> f64;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sqrt(self) -> Self;
    fn abs(self) -> Self;
    fn is_finite(self) -> bool;
    fn maximum(self, other: Self) -> Self;
}

macro_rules! impl_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const ZERO: Self = 0.0;
            const ONE: Self = 1.0;
            #[inline(always)]
            fn from_f64(v: f64) -> Self {
                v as $t
            }
            #[inline(always)]
            fn to_f64(self) -> f64 {
                self as f64
            }
            #[inline(always)]
            fn sin(self) -> Self {
                self.sin()
            }
            #[inline(always)]
            fn cos(self) -> Self {
                self.cos()
            }
            #[inline(always)]
            fn sqrt(self) -> Self {
                self.sqrt()
            }
            #[inline(always)]
            fn abs(self) -> Self {
                self.abs()
            }
            #[inline(always)]
            fn is_finite(self) -> bool {
                self.is_finite()
            }
            #[inline(always)]
            fn maximum(self, other: Self) -> Self {
                self.max(other)
            }
        }
    };
}

impl_scalar!(f32);
impl_scalar!(f64);

/// Dense row-major tensor. `data.len()` always equals the product of `shape`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<S: Scalar> {
    shape: Vec<usize>,
    data: Vec<S>,
}

impl<S: Scalar> Tensor<S> {
    pub fn zeros(shape: &[usize]) -> Self {
        let n: usize = shape.iter().product();
        Tensor {
            shape: shape.to_vec(),
            data: vec![S::ZERO; n],
        }
    }

    pub fn from_vec(shape: &[usize], data: Vec<S>) -> Result<Self> {
        let n: usize = shape.iter().product();
        if data.len() != n {
            return Err(Error::Shape {
                context: "Tensor::from_vec".into(),
                expected: shape.to_vec(),
                got: vec![data.len()],
            });
        }
        Ok(Tensor {
            shape: shape.to_vec(),
            data,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self
    where
        S: Scalar,
    {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows in Tensor::from_rows");
            data.extend(row.iter().map(|&v| S::from_f64(v)));
        }
        Tensor {
            shape: vec![r, c],
            data,
        }
    }

    pub fn scalar(v: S) -> Self {
        Tensor {
            shape: vec![1],
            data: vec![v],
        }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [S] {
        &mut self.data
    }

    /// Number of rows when viewed as 2-D (rank must be 2).
    pub fn rows(&self) -> usize {
        assert_eq!(self.rank(), 2, "rows() on rank-{} tensor", self.rank());
        self.shape[0]
    }

    pub fn cols(&self) -> usize {
        assert_eq!(self.rank(), 2, "cols() on rank-{} tensor", self.rank());
        self.shape[1]
    }

    #[inline(always)]
    pub fn row(&self, i: usize) -> &[S] {
        let c = self.shape[self.rank() - 1];
        &self.data[i * c..(i + 1) * c]
    }

    #[inline(always)]
    pub fn row_mut(&mut self, i: usize) -> &mut [S] {
        let c = self.shape[self.rank() - 1];
        &mut self.data[i * c..(i + 1) * c]
    }

    pub fn map(&self, f: impl Fn(S) -> S) -> Self {
        Tensor {
            shape: self.shape.clone(),
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn add_scaled(&mut self, other: &Tensor<S>, factor: S) {
        assert_eq!(
            self.shape, other.shape,
            "add_scaled shape mismatch: {:?} vs {:?}",
            self.shape, other.shape
        );
        for (a, &b) in self.data.iter_mut().zip(other.data.iter()) {
            *a += b * factor;
        }
    }

    pub fn is_all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        self.data.iter().map(|v| v.to_f64()).collect()
    }

    pub fn to_f32_vec(&self) -> Vec<f32> {
        self.data.iter().map(|v| v.to_f64() as f32).collect()
    }

    /// `self (m,k) · rhs (k,n) -> (m,n)`.
    pub fn matmul(&self, rhs: &Tensor<S>) -> Tensor<S> {
        let (m, k) = (self.rows(), self.cols());
        let (rk, n) = (rhs.rows(), rhs.cols());
        assert_eq!(k, rk, "matmul inner dims: {k} vs {rk}");
        let mut out = Tensor::zeros(&[m, n]);
        for i in 0..m {
            let arow = self.row(i);
            let orow = out.row_mut(i);
            for (kk, &av) in arow.iter().enumerate() {
                let brow = rhs.row(kk);
                for j in 0..n {
                    orow[j] += av * brow[j];
                }
            }
        }
        out
    }

    /// `selfᵀ (k,m) · rhs (k,n) -> (m,n)`; used for weight gradients
    /// (inputᵀ · upstream) without materialising a transpose.
    pub fn matmul_tn(&self, rhs: &Tensor<S>) -> Tensor<S> {
        let (k, m) = (self.rows(), self.cols());
        let (rk, n) = (rhs.rows(), rhs.cols());
        assert_eq!(k, rk, "matmul_tn batch dims: {k} vs {rk}");
        let mut out = Tensor::zeros(&[m, n]);
        for b in 0..k {
            let arow = self.row(b);
            let brow = rhs.row(b);
            for (i, &av) in arow.iter().enumerate() {
                let orow = out.row_mut(i);
                for j in 0..n {
                    orow[j] += av * brow[j];
                }
            }
        }
        out
    }

    /// `self (m,k) · rhsᵀ (n,k) -> (m,n)`; used to push gradients through a
    /// weight matrix stored as (fan_in, fan_out).
    pub fn matmul_nt(&self, rhs: &Tensor<S>) -> Tensor<S> {
        let (m, k) = (self.rows(), self.cols());
        let (n, rk) = (rhs.rows(), rhs.cols());
        assert_eq!(k, rk, "matmul_nt inner dims: {k} vs {rk}");
        let mut out = Tensor::zeros(&[m, n]);
        for i in 0..m {
            let arow = self.row(i);
            let orow = out.row_mut(i);
            for (j, orv) in orow.iter_mut().enumerate() {
                let brow = rhs.row(j);
                let mut acc = S::ZERO;
                for kk in 0..k {
                    acc += arow[kk] * brow[kk];
                }
                *orv = acc;
            }
        }
        out
    }

    /// Sum over rows of a 2-D tensor, giving a length-`cols` tensor; used for
    /// bias gradients.
    pub fn col_sum(&self) -> Tensor<S> {
        let (m, n) = (self.rows(), self.cols());
        let mut out = Tensor::zeros(&[n]);
        for i in 0..m {
            let row = self.row(i);
            for j in 0..n {
                out.data[j] += row[j];
            }
        }
        out
    }

    /// Horizontal concatenation of two 2-D tensors with equal row counts.
    pub fn hcat(&self, rhs: &Tensor<S>) -> Tensor<S> {
        let (m, a) = (self.rows(), self.cols());
        let (rm, b) = (rhs.rows(), rhs.cols());
        assert_eq!(m, rm, "hcat row counts: {m} vs {rm}");
        let mut out = Tensor::zeros(&[m, a + b]);
        for i in 0..m {
            let orow = out.row_mut(i);
            orow[..a].copy_from_slice(self.row(i));
            orow[a..].copy_from_slice(rhs.row(i));
        }
        out
    }
}

impl<S: Scalar> Tensor<S> {
    /// Converts element type, rounding through the target precision.
    pub fn cast<T: Scalar>(&self) -> Tensor<T> {
        Tensor {
            shape: self.shape.clone(),
            data: self.data.iter().map(|v| T::from_f64(v.to_f64())).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matmul_hand_example() {
        // [[1,2],[3,4]] · [[5,6],[7,8]] = [[19,22],[43,50]]
        let a = Tensor::<f64>::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        let b = Tensor::<f64>::from_rows(&[vec![5.0, 6.0], vec![7.0, 8.0]]);
        let c = a.matmul(&b);
        assert_eq!(c.data(), &[19.0, 22.0, 43.0, 50.0]);
    }

    #[test]
    fn transpose_variants_agree_with_explicit_transpose() {
        let a = Tensor::<f64>::from_rows(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]);
        let b = Tensor::<f64>::from_rows(&[vec![1.0, 0.5], vec![-1.0, 2.0], vec![0.0, 1.0]]);
        // aᵀ is 3x2; aᵀ·a is 3x3 via matmul_tn(a, a)
        let ata = a.matmul_tn(&a);
        assert_eq!(ata.shape(), &[3, 3]);
        assert_eq!(ata.data()[0], 1.0 + 16.0); // column 0 · column 0
        // a·bᵀ? b is 3x2 so bᵀ is 2x3; a (2,3) · bᵀ requires matmul_nt(a, bᵀ-source with shape (n,k)=(2,3))
        let bt = Tensor::<f64>::from_rows(&[vec![1.0, -1.0, 0.0], vec![0.5, 2.0, 1.0]]);
        let ab = a.matmul_nt(&bt);
        let ab_ref = a.matmul(&b);
        assert_eq!(ab.data(), ab_ref.data());
    }

    #[test]
    fn from_vec_rejects_wrong_length() {
        assert!(Tensor::<f64>::from_vec(&[2, 2], vec![1.0; 3]).is_err());
    }

    #[test]
    fn hcat_and_col_sum() {
        let a = Tensor::<f64>::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        let b = Tensor::<f64>::from_rows(&[vec![9.0], vec![8.0]]);
        let c = a.hcat(&b);
        assert_eq!(c.shape(), &[2, 3]);
        assert_eq!(c.row(1), &[3.0, 4.0, 8.0]);
        assert_eq!(a.col_sum().data(), &[4.0, 6.0]);
    }

    #[test]
    fn cast_rounds_through_f32() {
        let a = Tensor::<f64>::from_rows(&[vec![0.1, 1.0e-9]]);
        let b: Tensor<f32> = a.cast();
        let c: Tensor<f64> = b.cast();
        assert_eq!(c.data()[0], 0.1f32 as f64);
    }
}
