use num_complex::Complex;

use crate::error::{BellError, Result};
use crate::scalar::{tol, Scalar};

use super::{hermitian_eigenvalues, ComplexMatrix, MAX_DIM};

#[derive(Debug, Clone, PartialEq)]
pub enum StateKind<T> {
    /// Normalized amplitude column.
    Pure(Vec<Complex<T>>),
    /// Density matrix.
    Mixed(ComplexMatrix<T>),
}

/// Pure or mixed state of `n_parties` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState<T> {
    n_parties: usize,
    kind: StateKind<T>,
}

fn register_dim(n_parties: usize) -> Result<usize> {
    if n_parties == 0 {
        return Err(BellError::InvalidState(
            "a state needs at least one party".into(),
        ));
    }
    if n_parties > 12 {
        return Err(BellError::SizeCap(1usize << n_parties.min(63)));
    }
    Ok(1 << n_parties)
}

impl<T: Scalar> QuantumState<T> {
    /// Pure state from amplitudes; the norm must be 1 within `1e-12`.
    pub fn pure(n_parties: usize, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let dim = register_dim(n_parties)?;
        if amplitudes.len() != dim {
            return Err(BellError::DimensionMismatch {
                expected: dim,
                found: amplitudes.len(),
            });
        }
        let norm_sqr = amplitudes.iter().fold(T::zero(), |s, a| s + a.norm_sqr());
        if (norm_sqr - T::one()).abs() > T::tol(tol::EXACT) || !norm_sqr.is_finite() {
            return Err(BellError::InvalidState(format!(
                "amplitudes have squared norm {norm_sqr}, expected 1"
            )));
        }
        Ok(Self {
            n_parties,
            kind: StateKind::Pure(amplitudes),
        })
    }

    /// Pure state from unnormalized amplitudes.
    pub fn pure_normalized(n_parties: usize, mut amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let norm = amplitudes
            .iter()
            .fold(T::zero(), |s, a| s + a.norm_sqr())
            .sqrt();
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(BellError::InvalidState(
                "zero or non-finite amplitude vector".into(),
            ));
        }
        for a in amplitudes.iter_mut() {
            *a = *a / norm;
        }
        Self::pure(n_parties, amplitudes)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_parties: usize, index: usize) -> Result<Self> {
        let dim = register_dim(n_parties)?;
        if index >= dim {
            return Err(BellError::InvalidState(format!(
                "basis index {index} ≥ {dim}"
            )));
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); dim];
        amps[index] = Complex::new(T::one(), T::zero());
        Self::pure(n_parties, amps)
    }

    /// Density-matrix state; must be Hermitian, unit-trace and PSD.
    pub fn mixed(n_parties: usize, rho: ComplexMatrix<T>) -> Result<Self> {
        let dim = register_dim(n_parties)?;
        if rho.dim() != dim {
            return Err(BellError::DimensionMismatch {
                expected: dim,
                found: rho.dim(),
            });
        }
        let herm = rho.hermitian_residual();
        if herm > T::tol(tol::EXACT) {
            return Err(BellError::InvalidState(format!(
                "density matrix not Hermitian (residual {herm:e})"
            )));
        }
        let tr = rho.trace();
        if (tr.re - T::one()).abs() > T::tol(tol::EXACT) || tr.im.abs() > T::tol(tol::EXACT) {
            return Err(BellError::InvalidState(format!("trace {tr} ≠ 1")));
        }
        let eig = hermitian_eigenvalues(&rho)?;
        if let Some(&min) = eig.first() {
            if min < -T::tol(tol::PSD) {
                return Err(BellError::InvalidState(format!(
                    "density matrix has negative eigenvalue {min:e}"
                )));
            }
        }
        Ok(Self {
            n_parties,
            kind: StateKind::Mixed(rho),
        })
    }

    /// Convex combination `Σ wᵢ ρᵢ`; PSD by construction, so only weights are checked.
    pub fn mixture(components: &[(T, &QuantumState<T>)]) -> Result<Self> {
        let (_, first) = components
            .first()
            .ok_or_else(|| BellError::InvalidState("empty mixture".into()))?;
        let n = first.n_parties;
        let mut rho = ComplexMatrix::zeros(first.dim());
        let mut total = T::zero();
        for &(w, s) in components {
            if s.n_parties != n {
                return Err(BellError::DimensionMismatch {
                    expected: first.dim(),
                    found: s.dim(),
                });
            }
            if !(w >= T::zero()) {
                return Err(BellError::InvalidState(format!("negative weight {w}")));
            }
            rho.add_scaled(&s.density(), w)?;
            total = total + w;
        }
        if (total - T::one()).abs() > T::tol(tol::EXACT) {
            return Err(BellError::InvalidState(format!("weights sum to {total}")));
        }
        Ok(Self {
            n_parties: n,
            kind: StateKind::Mixed(rho),
        })
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn dim(&self) -> usize {
        1 << self.n_parties
    }

    pub fn kind(&self) -> &StateKind<T> {
        &self.kind
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.kind, StateKind::Pure(_))
    }

    pub fn amplitudes(&self) -> Option<&[Complex<T>]> {
        match &self.kind {
            StateKind::Pure(a) => Some(a),
            StateKind::Mixed(_) => None,
        }
    }

    /// `|ψ⟩⟨ψ|` for pure states, the stored matrix for mixed ones.
    pub fn density(&self) -> ComplexMatrix<T> {
        match &self.kind {
            StateKind::Mixed(rho) => rho.clone(),
            StateKind::Pure(a) => {
                let n = a.len();
                let mut rho = ComplexMatrix::zeros(n);
                for i in 0..n {
                    for j in 0..n {
                        rho.set(i, j, a[i] * a[j].conj());
                    }
                }
                rho
            }
        }
    }

    /// `⟨ψ|O|ψ⟩` or `Tr(ρO)`, with the imaginary residue discarded.
    pub fn expectation(&self, op: &ComplexMatrix<T>) -> Result<T> {
        if op.dim() != self.dim() {
            return Err(BellError::DimensionMismatch {
                expected: self.dim(),
                found: op.dim(),
            });
        }
        let z = match &self.kind {
            StateKind::Pure(a) => {
                let oa = op.apply(a)?;
                a.iter()
                    .zip(&oa)
                    .fold(Complex::new(T::zero(), T::zero()), |s, (x, y)| {
                        s + x.conj() * *y
                    })
            }
            StateKind::Mixed(rho) => {
                let n = rho.dim();
                let mut s = Complex::new(T::zero(), T::zero());
                for i in 0..n {
                    for k in 0..n {
                        s = s + rho.get(i, k) * op.get(k, i);
                    }
                }
                s
            }
        };
        if z.im.abs() > T::tol(tol::IMAG) * T::one().max(z.re.abs()) {
            return Err(BellError::NonHermitianExpectation(z.im.as_f64()));
        }
        Ok(z.re)
    }
}

/// `(|0…0⟩ + |1…1⟩)/√2` on `n` qubits, `2 ≤ n ≤ 12`.
pub fn ghz_state<T: Scalar>(n: usize) -> Result<QuantumState<T>> {
    if !(2..=12).contains(&n) {
        return Err(BellError::OutOfRange {
            name: "GHZ party count",
            value: n as f64,
        });
    }
    let dim = 1usize << n;
    debug_assert!(dim <= MAX_DIM);
    let mut amps = vec![Complex::new(T::zero(), T::zero()); dim];
    let h = T::FRAC_1_SQRT_2();
    amps[0] = Complex::new(h, T::zero());
    amps[dim - 1] = Complex::new(h, T::zero());
    QuantumState::pure(n, amps)
}
