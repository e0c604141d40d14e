//! Per-party dichotomic observables and their full-register embedding.

mod scenario_file;

use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex;

use crate::error::{BellError, Result};
use crate::scalar::{tol, Scalar};
use crate::tensor::{tensor_product, ComplexMatrix};

pub use scenario_file::{format_scenario, parse_angle, parse_scenario, read_scenario};

/// Which dichotomic check failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DichotomicCheck {
    /// `‖M − M†‖_max` too large.
    Hermitian,
    /// `‖M² − I‖_max` too large.
    Involution,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DichotomicViolation {
    pub check: DichotomicCheck,
    pub residual: f64,
}

impl fmt::Display for DichotomicViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.check {
            DichotomicCheck::Hermitian => "not Hermitian",
            DichotomicCheck::Involution => "square is not the identity",
        };
        write!(f, "{what} (residual {:e})", self.residual)
    }
}

impl std::error::Error for DichotomicViolation {}

impl From<DichotomicViolation> for BellError {
    fn from(v: DichotomicViolation) -> Self {
        BellError::InvalidObservable(v.to_string())
    }
}

/// Checks that `m` is a Hermitian involution (spectrum in {−1, +1}) within `1e-12`.
pub fn validate_dichotomic<T: Scalar>(m: &ComplexMatrix<T>) -> Result<(), DichotomicViolation> {
    let tol = T::tol(tol::EXACT);
    let herm = m.hermitian_residual();
    if !(herm <= tol) {
        return Err(DichotomicViolation {
            check: DichotomicCheck::Hermitian,
            residual: herm.as_f64(),
        });
    }
    let sq = m.matmul(m).expect("square matrix");
    let inv = sq.max_abs_diff(&ComplexMatrix::identity(m.dim()));
    if !(inv <= tol) {
        return Err(DichotomicViolation {
            check: DichotomicCheck::Involution,
            residual: inv.as_f64(),
        });
    }
    Ok(())
}

/// `cos θ σx + sin θ σy`.
pub fn planar_observable<T: Scalar>(theta: T) -> Result<ComplexMatrix<T>> {
    if !theta.is_finite() {
        return Err(BellError::InvalidObservable(format!(
            "non-finite angle {theta}"
        )));
    }
    let (s, c) = theta.sin_cos();
    let z = T::zero();
    ComplexMatrix::from_vec(
        2,
        vec![
            Complex::new(z, z),
            Complex::new(c, -s),
            Complex::new(c, s),
            Complex::new(z, z),
        ],
    )
}

/// `n̂·σ` for the normalized direction of `(nx, ny, nz)`.
pub fn bloch_observable<T: Scalar>(nx: T, ny: T, nz: T) -> Result<ComplexMatrix<T>> {
    let norm = (nx * nx + ny * ny + nz * nz).sqrt();
    if !(norm > T::zero()) || !norm.is_finite() {
        return Err(BellError::InvalidObservable(
            "Bloch direction must be nonzero and finite".into(),
        ));
    }
    let (x, y, z) = (nx / norm, ny / norm, nz / norm);
    let o = T::zero();
    ComplexMatrix::from_vec(
        2,
        vec![
            Complex::new(z, o),
            Complex::new(x, -y),
            Complex::new(x, y),
            Complex::new(-z, o),
        ],
    )
}

/// A ±1-valued observable of one party for one setting.
#[derive(Debug, Clone, PartialEq)]
pub struct DichotomicObservable<T> {
    local: ComplexMatrix<T>,
    party: usize,
    setting: u8,
}

impl<T: Scalar> DichotomicObservable<T> {
    /// `party` is 1-based, `setting` is 0 or 1.
    pub fn new(local: ComplexMatrix<T>, party: usize, setting: u8) -> Result<Self> {
        if party == 0 {
            return Err(BellError::PartyOutOfRange {
                party,
                n_parties: 0,
            });
        }
        if setting > 1 {
            return Err(BellError::InvalidObservable(format!(
                "setting {setting} is not 0 or 1"
            )));
        }
        validate_dichotomic(&local)?;
        Ok(Self {
            local,
            party,
            setting,
        })
    }

    pub fn local(&self) -> &ComplexMatrix<T> {
        &self.local
    }

    pub fn party(&self) -> usize {
        self.party
    }

    pub fn setting(&self) -> u8 {
        self.setting
    }
}

/// Places `local` at 1-based slot `party` of a register whose slots have dimensions `dims`.
pub fn embed_local<T: Scalar>(
    local: &ComplexMatrix<T>,
    party: usize,
    dims: &[usize],
) -> Result<ComplexMatrix<T>> {
    let n = dims.len();
    if party == 0 || party > n {
        return Err(BellError::PartyOutOfRange {
            party,
            n_parties: n,
        });
    }
    if local.dim() != dims[party - 1] {
        return Err(BellError::DimensionMismatch {
            expected: dims[party - 1],
            found: local.dim(),
        });
    }
    let left: usize = dims[..party - 1].iter().product();
    let right: usize = dims[party..].iter().product();
    let total = left
        .checked_mul(local.dim())
        .and_then(|d| d.checked_mul(right))
        .unwrap_or(usize::MAX);
    if total > crate::tensor::MAX_DIM {
        return Err(BellError::SizeCap(total));
    }
    let mut m = local.clone();
    if left > 1 {
        m = tensor_product(&ComplexMatrix::identity(left), &m)?;
    }
    if right > 1 {
        m = tensor_product(&m, &ComplexMatrix::identity(right))?;
    }
    Ok(m)
}

/// `I ⊗ … ⊗ local ⊗ … ⊗ I` over `n_parties` slots; the other slots are qubits.
pub fn embed<T: Scalar>(
    obs: &DichotomicObservable<T>,
    n_parties: usize,
) -> Result<ComplexMatrix<T>> {
    if obs.party > n_parties {
        return Err(BellError::PartyOutOfRange {
            party: obs.party,
            n_parties,
        });
    }
    let mut dims = vec![2; n_parties];
    dims[obs.party - 1] = obs.local.dim();
    embed_local(&obs.local, obs.party, &dims)
}

/// How the observables of a scenario were produced.
#[derive(Debug, Clone, PartialEq)]
pub enum Family<T> {
    /// `θ[party][setting]` of the planar family.
    Planar(Vec<[T; 2]>),
    /// Unnormalized Bloch directions `[party][setting]`.
    Bloch(Vec<[[T; 3]; 2]>),
    Custom,
}

/// Two dichotomic observables for each of `n_parties` parties.
///
/// Embedded operators are built lazily and cached per (party, setting).
#[derive(Debug, Clone)]
pub struct MeasurementScenario<T> {
    observables: Vec<[DichotomicObservable<T>; 2]>,
    family: Family<T>,
    embedded: Vec<[OnceLock<ComplexMatrix<T>>; 2]>,
}

impl<T: Scalar> PartialEq for MeasurementScenario<T> {
    fn eq(&self, other: &Self) -> bool {
        self.observables == other.observables && self.family == other.family
    }
}

impl<T: Scalar> MeasurementScenario<T> {
    /// `locals[k] = [A₀, A₁]` for party `k + 1`.
    pub fn from_locals(locals: Vec<[ComplexMatrix<T>; 2]>) -> Result<Self> {
        let observables = locals
            .into_iter()
            .enumerate()
            .map(|(k, [a0, a1])| {
                if a0.dim() != a1.dim() {
                    return Err(BellError::DimensionMismatch {
                        expected: a0.dim(),
                        found: a1.dim(),
                    });
                }
                Ok([
                    DichotomicObservable::new(a0, k + 1, 0)?,
                    DichotomicObservable::new(a1, k + 1, 1)?,
                ])
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_observables(observables, Family::Custom)
    }

    fn from_observables(
        observables: Vec<[DichotomicObservable<T>; 2]>,
        family: Family<T>,
    ) -> Result<Self> {
        let n = observables.len();
        if n == 0 || n > 12 {
            return Err(BellError::InvalidConfig(format!(
                "scenario needs 1..=12 parties, got {n}"
            )));
        }
        let embedded = (0..n).map(|_| [OnceLock::new(), OnceLock::new()]).collect();
        Ok(Self {
            observables,
            family,
            embedded,
        })
    }

    /// Planar observables from `angles[party] = [θ₀, θ₁]`.
    pub fn planar(angles: &[[T; 2]]) -> Result<Self> {
        let locals = angles
            .iter()
            .map(|&[t0, t1]| Ok([planar_observable(t0)?, planar_observable(t1)?]))
            .collect::<Result<Vec<_>>>()?;
        let mut sc = Self::from_locals(locals)?;
        sc.family = Family::Planar(angles.to_vec());
        Ok(sc)
    }

    /// Bloch observables from `dirs[party] = [n₀, n₁]`.
    pub fn bloch(dirs: &[[[T; 3]; 2]]) -> Result<Self> {
        let locals = dirs
            .iter()
            .map(|[a, b]| {
                Ok([
                    bloch_observable(a[0], a[1], a[2])?,
                    bloch_observable(b[0], b[1], b[2])?,
                ])
            })
            .collect::<Result<Vec<_>>>()?;
        let mut sc = Self::from_locals(locals)?;
        sc.family = Family::Bloch(dirs.to_vec());
        Ok(sc)
    }

    pub fn n_parties(&self) -> usize {
        self.observables.len()
    }

    pub fn family(&self) -> &Family<T> {
        &self.family
    }

    /// Planar angles, when the scenario came from the planar family.
    pub fn angles(&self) -> Option<&[[T; 2]]> {
        match &self.family {
            Family::Planar(a) => Some(a),
            _ => None,
        }
    }

    pub fn local_dims(&self) -> Vec<usize> {
        self.observables.iter().map(|o| o[0].local.dim()).collect()
    }

    pub fn observable(&self, party: usize, setting: u8) -> Result<&DichotomicObservable<T>> {
        self.check_party(party)?;
        Ok(&self.observables[party - 1][(setting & 1) as usize])
    }

    pub fn local(&self, party: usize, setting: u8) -> Result<&ComplexMatrix<T>> {
        Ok(self.observable(party, setting)?.local())
    }

    /// The observable embedded in the full register; cached.
    pub fn embedded(&self, party: usize, setting: u8) -> Result<&ComplexMatrix<T>> {
        self.check_party(party)?;
        let cell = &self.embedded[party - 1][(setting & 1) as usize];
        if let Some(m) = cell.get() {
            return Ok(m);
        }
        let m = embed_local(self.local(party, setting)?, party, &self.local_dims())?;
        // A concurrent writer may have won; both values are identical.
        let _ = cell.set(m);
        Ok(cell.get().expect("initialized"))
    }

    /// Same scenario with settings 0 and 1 swapped at every party.
    pub fn relabeled(&self) -> Self {
        let observables = self
            .observables
            .iter()
            .map(|[a0, a1]| {
                [
                    DichotomicObservable {
                        setting: 0,
                        ..a1.clone()
                    },
                    DichotomicObservable {
                        setting: 1,
                        ..a0.clone()
                    },
                ]
            })
            .collect();
        let family = match &self.family {
            Family::Planar(a) => Family::Planar(a.iter().map(|&[x, y]| [y, x]).collect()),
            Family::Bloch(d) => Family::Bloch(d.iter().map(|&[x, y]| [y, x]).collect()),
            Family::Custom => Family::Custom,
        };
        Self::from_observables(observables, family).expect("same party count")
    }

    fn check_party(&self, party: usize) -> Result<()> {
        if party == 0 || party > self.n_parties() {
            return Err(BellError::PartyOutOfRange {
                party,
                n_parties: self.n_parties(),
            });
        }
        Ok(())
    }
}
