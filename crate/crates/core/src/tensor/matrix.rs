use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;

use crate::error::{BellError, Result};
use crate::scalar::Scalar;

/// Largest supported matrix dimension (12 qubits).
pub const MAX_DIM: usize = 1 << 12;

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> ComplexMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex::new(T::one(), T::zero());
        }
        m
    }

    /// Builds a matrix from row-major entries; `data.len()` must be a nonzero square.
    pub fn from_vec(dim: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(BellError::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        if dim > MAX_DIM {
            return Err(BellError::SizeCap(dim));
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = Complex::new(d, T::zero());
        }
        m
    }

    pub fn pauli_x() -> Self {
        let (o, l) = (T::zero(), T::one());
        Self {
            dim: 2,
            data: vec![c(o, o), c(l, o), c(l, o), c(o, o)],
        }
    }

    pub fn pauli_y() -> Self {
        let (o, l) = (T::zero(), T::one());
        Self {
            dim: 2,
            data: vec![c(o, o), c(o, -l), c(o, l), c(o, o)],
        }
    }

    pub fn pauli_z() -> Self {
        let (o, l) = (T::zero(), T::one());
        Self {
            dim: 2,
            data: vec![c(l, o), c(o, o), c(o, o), c(-l, o)],
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex<T>) {
        self.data[row * self.dim + col] = value;
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, other: &Self, s: T) -> Result<()> {
        self.check_same_dim(other)?;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = *a + b * s;
        }
        Ok(())
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).fold(Complex::new(T::zero(), T::zero()), |acc, i| {
            acc + self.get(i, i)
        })
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    /// Largest absolute entrywise difference; infinite on dimension mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        if self.dim != other.dim {
            return T::infinity();
        }
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm()))
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |s, z| s + z.norm_sqr())
            .sqrt()
    }

    /// `‖M − M†‖_max`.
    pub fn hermitian_residual(&self) -> T {
        let n = self.dim;
        let mut r = T::zero();
        for i in 0..n {
            for j in i..n {
                r = r.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        r
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermitian_residual() <= tol
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d = *d + a * b;
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        if v.len() != self.dim {
            return Err(BellError::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        let n = self.dim;
        Ok((0..n)
            .map(|i| {
                self.data[i * n..(i + 1) * n]
                    .iter()
                    .zip(v)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (&a, &b)| {
                        acc + a * b
                    })
            })
            .collect())
    }

    pub(crate) fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(BellError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }
}

#[inline]
fn c<T>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

/// Kronecker product `a ⊗ b`.
pub fn tensor_product<T: Scalar>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
) -> Result<ComplexMatrix<T>> {
    let dim = a
        .dim
        .checked_mul(b.dim)
        .filter(|&d| d <= MAX_DIM)
        .ok_or(BellError::SizeCap(a.dim.saturating_mul(b.dim)))?;
    let (na, nb) = (a.dim, b.dim);
    let mut data = vec![Complex::new(T::zero(), T::zero()); dim * dim];
    for i in 0..na {
        for j in 0..na {
            let x = a.data[i * na + j];
            if x.re == T::zero() && x.im == T::zero() {
                continue;
            }
            for k in 0..nb {
                let row = (i * nb + k) * dim + j * nb;
                for l in 0..nb {
                    data[row + l] = x * b.data[k * nb + l];
                }
            }
        }
    }
    Ok(ComplexMatrix { dim, data })
}

/// `ab + ba`.
pub fn anticommutator<T: Scalar>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
) -> Result<ComplexMatrix<T>> {
    let mut ab = a.matmul(b)?;
    ab.add_scaled(&b.matmul(a)?, T::one())?;
    Ok(ab)
}

/// `ab − ba`.
pub fn commutator<T: Scalar>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
) -> Result<ComplexMatrix<T>> {
    let mut ab = a.matmul(b)?;
    ab.add_scaled(&b.matmul(a)?, -T::one())?;
    Ok(ab)
}

impl<T: Scalar> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        let mut out = self.clone();
        out.add_scaled(rhs, T::one())
            .expect("dimension mismatch in +");
        out
    }
}

impl<T: Scalar> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        let mut out = self.clone();
        out.add_scaled(rhs, -T::one())
            .expect("dimension mismatch in -");
        out
    }
}

impl<T: Scalar> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        self.matmul(rhs).expect("dimension mismatch in *")
    }
}

impl<T: Scalar> Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn neg(self) -> ComplexMatrix<T> {
        self.scale_real(-T::one())
    }
}
