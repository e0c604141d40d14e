use crate::error::{BellError, Result};
use crate::scalar::{tol, Scalar};

use super::{
    anticommutator, is_psd, symmetric_eigenvalues, ComplexMatrix, QuantumState, RealMatrix,
};

/// Second moments `M`, first moments `V` and covariance `C = M − VVᵀ`
/// of a list of Hermitian operators in a given state.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceWitness<T> {
    /// `M_ij = ½⟨{O_i, O_j}⟩`.
    pub second_moments: RealMatrix<T>,
    /// `V_i = ⟨O_i⟩`.
    pub means: Vec<T>,
    /// `C = M − VVᵀ`.
    pub covariance: RealMatrix<T>,
}

impl<T: Scalar> CovarianceWitness<T> {
    pub fn len(&self) -> usize {
        self.means.len()
    }

    pub fn is_empty(&self) -> bool {
        self.means.is_empty()
    }

    /// Smallest eigenvalue of `C`.
    pub fn min_eigenvalue(&self) -> Result<T> {
        Ok(symmetric_eigenvalues(&self.covariance)?
            .first()
            .copied()
            .unwrap_or(T::zero()))
    }

    pub fn is_psd(&self) -> Result<bool> {
        is_psd(&self.covariance, T::tol(tol::PSD))
    }

    /// Contraction with `u = [1, (−1)^m]` for a two-operator witness of
    /// dichotomic operators: returns `(|⟨O₀⟩ + (−1)^m⟨O₁⟩|, √(2 + (−1)^m⟨{O₀,O₁}⟩))`.
    pub fn scalar_reduction(&self, m_parity: u8) -> Result<(T, T)> {
        if self.len() != 2 {
            return Err(BellError::DimensionMismatch {
                expected: 2,
                found: self.len(),
            });
        }
        let s = if m_parity.is_multiple_of(2) {
            T::one()
        } else {
            -T::one()
        };
        let u = [T::one(), s];
        let lhs = (self.means[0] + s * self.means[1]).abs();
        // uᵀMu = M00 + M11 + 2s·M01 = 2 + s⟨{O₀,O₁}⟩ for dichotomic O.
        let rhs = self.second_moments.quadratic_form(&u).max(T::zero()).sqrt();
        Ok((lhs, rhs))
    }
}

/// Builds the covariance data of `ops` in `state`.
pub fn covariance_witness<T: Scalar>(
    state: &QuantumState<T>,
    ops: &[ComplexMatrix<T>],
) -> Result<CovarianceWitness<T>> {
    for op in ops {
        if op.dim() != state.dim() {
            return Err(BellError::DimensionMismatch {
                expected: state.dim(),
                found: op.dim(),
            });
        }
        if !op.is_hermitian(T::tol(tol::EXACT) * T::one().max(op.max_abs())) {
            return Err(BellError::InvalidObservable(
                "covariance operators must be Hermitian".into(),
            ));
        }
    }
    let k = ops.len();
    let means = ops
        .iter()
        .map(|o| state.expectation(o))
        .collect::<Result<Vec<_>>>()?;
    let mut second = RealMatrix::zeros(k);
    let half = T::lit(0.5);
    for i in 0..k {
        for j in i..k {
            let v = half * state.expectation(&anticommutator(&ops[i], &ops[j])?)?;
            second.set(i, j, v);
            second.set(j, i, v);
        }
    }
    let mut cov = RealMatrix::zeros(k);
    for i in 0..k {
        for j in 0..k {
            cov.set(i, j, second.get(i, j) - means[i] * means[j]);
        }
    }
    Ok(CovarianceWitness {
        second_moments: second,
        means,
        covariance: cov,
    })
}
