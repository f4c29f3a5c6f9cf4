//! Dense fixed-rank tensors with a common index range `0..dim`.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Clone + Default> Tensor3<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![T::default(); dim * dim * dim],
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(dim * dim * dim);
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    data.push(f(a, b, c));
                }
            }
        }
        Self { dim, data }
    }
}

impl<T> Tensor3<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.data.iter()
    }

    fn offset(&self, (a, b, c): (usize, usize, usize)) -> usize {
        debug_assert!(a < self.dim && b < self.dim && c < self.dim);
        (a * self.dim + b) * self.dim + c
    }
}

impl<T> Index<(usize, usize, usize)> for Tensor3<T> {
    type Output = T;
    fn index(&self, idx: (usize, usize, usize)) -> &T {
        &self.data[self.offset(idx)]
    }
}

impl<T> IndexMut<(usize, usize, usize)> for Tensor3<T> {
    fn index_mut(&mut self, idx: (usize, usize, usize)) -> &mut T {
        let o = self.offset(idx);
        &mut self.data[o]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor4<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Clone + Default> Tensor4<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![T::default(); dim * dim * dim * dim],
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(dim.pow(4));
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    for d in 0..dim {
                        data.push(f(a, b, c, d));
                    }
                }
            }
        }
        Self { dim, data }
    }
}

impl<T> Tensor4<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.data.iter()
    }

    /// Iterates `((a, b, c, d), value)` in row-major order.
    pub fn indexed(&self) -> impl Iterator<Item = ((usize, usize, usize, usize), &T)> {
        let n = self.dim;
        self.data.iter().enumerate().map(move |(k, v)| {
            let d = k % n;
            let c = (k / n) % n;
            let b = (k / (n * n)) % n;
            let a = k / (n * n * n);
            ((a, b, c, d), v)
        })
    }

    fn offset(&self, (a, b, c, d): (usize, usize, usize, usize)) -> usize {
        debug_assert!(a < self.dim && b < self.dim && c < self.dim && d < self.dim);
        ((a * self.dim + b) * self.dim + c) * self.dim + d
    }
}

impl<T> Index<(usize, usize, usize, usize)> for Tensor4<T> {
    type Output = T;
    fn index(&self, idx: (usize, usize, usize, usize)) -> &T {
        &self.data[self.offset(idx)]
    }
}

impl<T> IndexMut<(usize, usize, usize, usize)> for Tensor4<T> {
    fn index_mut(&mut self, idx: (usize, usize, usize, usize)) -> &mut T {
        let o = self.offset(idx);
        &mut self.data[o]
    }
}

impl Tensor4<Complex64> {
    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Tensor4<f64> {
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }
}
