use crate::error::{BellError, Result};
use crate::scalar::{tol, Scalar};

use super::ComplexMatrix;

/// Real square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Scalar> RealMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![T::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(BellError::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.dim + j] = v;
    }

    /// `‖H − Hᵀ‖_max`.
    pub fn symmetry_residual(&self) -> T {
        let n = self.dim;
        let mut r = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                r = r.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        r
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().fold(T::zero(), |s, &x| s + x * x).sqrt()
    }

    fn off_diagonal_norm(&self) -> T {
        let n = self.dim;
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let x = self.get(i, j);
                    s = s + x * x;
                }
            }
        }
        s.sqrt()
    }

    /// `u^T H u`.
    pub fn quadratic_form(&self, u: &[T]) -> T {
        let n = self.dim;
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                s = s + u[i] * self.get(i, j) * u[j];
            }
        }
        s
    }
}

const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn symmetric_eigenvalues<T: Scalar>(h: &RealMatrix<T>) -> Result<Vec<T>> {
    let residual = h.symmetry_residual();
    if residual > T::tol(tol::EXACT) * T::one().max(h.frobenius_norm()) {
        return Err(BellError::NotSymmetric(residual.as_f64()));
    }
    let n = h.dim;
    let mut a = h.clone();
    // Symmetrize so roundoff in the input does not bias the rotations.
    for i in 0..n {
        for j in (i + 1)..n {
            let m = (a.get(i, j) + a.get(j, i)) / T::lit(2.0);
            a.set(i, j, m);
            a.set(j, i, m);
        }
    }
    let threshold = T::tol(tol::JACOBI) * T::one().max(a.frobenius_norm());
    for _ in 0..MAX_SWEEPS {
        if a.off_diagonal_norm() <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq == T::zero() {
                    continue;
                }
                let theta = (a.get(q, q) - a.get(p, p)) / (T::lit(2.0) * apq);
                let sign = if theta >= T::zero() {
                    T::one()
                } else {
                    -T::one()
                };
                let t = sign / (theta.abs() + theta.hypot(T::one()));
                let c = T::one() / t.hypot(T::one());
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a.get(k, p), a.get(k, q));
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let (apk, aqk) = (a.get(p, k), a.get(q, k));
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
            }
        }
    }
    let mut eig: Vec<T> = (0..n).map(|i| a.get(i, i)).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    Ok(eig)
}

/// True iff the smallest eigenvalue is at least `−tol · max(1, ‖H‖₂)`.
pub fn is_psd<T: Scalar>(h: &RealMatrix<T>, tol: T) -> Result<bool> {
    let eig = symmetric_eigenvalues(h)?;
    let spectral = eig.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    Ok(eig
        .first()
        .is_none_or(|&min| min >= -tol * T::one().max(spectral)))
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// Uses the real symmetric embedding `[[Re, −Im], [Im, Re]]`, whose spectrum is
/// that of the input with every eigenvalue doubled.
pub fn hermitian_eigenvalues<T: Scalar>(h: &ComplexMatrix<T>) -> Result<Vec<T>> {
    let n = h.dim();
    let mut r = RealMatrix::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = h.get(i, j);
            r.set(i, j, z.re);
            r.set(i + n, j + n, z.re);
            r.set(i, j + n, -z.im);
            r.set(i + n, j, z.im);
        }
    }
    let doubled = symmetric_eigenvalues(&r)?;
    Ok(doubled.into_iter().step_by(2).collect())
}
