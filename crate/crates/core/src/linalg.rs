//! Dense Gaussian elimination for the small systems the solvers assemble.

use num_complex::Complex;
use num_traits::{Float, Num};

use crate::scalar::Scalar;

/// Element type usable as a pivot: needs a magnitude to rank rows.
pub trait Pivot: Num + Copy {
    type Real: Float;
    fn magnitude(&self) -> Self::Real;
    fn all_finite(&self) -> bool;
}

impl<T: Scalar> Pivot for Complex<T> {
    type Real = T;
    fn magnitude(&self) -> T {
        self.re.abs().max(self.im.abs())
    }
    fn all_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl Pivot for f64 {
    type Real = f64;
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn all_finite(&self) -> bool {
        self.is_finite()
    }
}

impl Pivot for f32 {
    type Real = f32;
    fn magnitude(&self) -> f32 {
        self.abs()
    }
    fn all_finite(&self) -> bool {
        self.is_finite()
    }
}

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<F> {
    n: usize,
    data: Vec<F>,
}

impl<F: Pivot> Matrix<F> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![F::zero(); n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> F {
        self.data[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.n + c] = v;
    }

    pub fn add(&mut self, r: usize, c: usize, v: F) {
        let x = &mut self.data[r * self.n + c];
        *x = *x + v;
    }

    /// Solves `self · x = b` by LU with partial pivoting.
    /// `None` when a pivot is exactly zero or the result is not finite.
    pub fn solve(mut self, b: &[F]) -> Option<Vec<F>> {
        let n = self.n;
        assert_eq!(b.len(), n, "right-hand side length");
        let mut x = b.to_vec();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| {
                    self.get(i, k)
                        .magnitude()
                        .partial_cmp(&self.get(j, k).magnitude())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .expect("non-empty pivot range");
            let pivot = self.get(p, k);
            if pivot.is_zero() || !pivot.all_finite() {
                return None;
            }
            if p != k {
                for c in 0..n {
                    self.data.swap(p * n + c, k * n + c);
                }
                x.swap(p, k);
            }
            for i in k + 1..n {
                let f = self.get(i, k) / pivot;
                if f.is_zero() {
                    continue;
                }
                for c in k..n {
                    let v = self.get(i, c) - f * self.get(k, c);
                    self.set(i, c, v);
                }
                x[i] = x[i] - f * x[k];
            }
        }
        for k in (0..n).rev() {
            let mut acc = x[k];
            for c in k + 1..n {
                acc = acc - self.get(k, c) * x[c];
            }
            x[k] = acc / self.get(k, k);
        }
        x.iter().all(Pivot::all_finite).then_some(x)
    }
}
