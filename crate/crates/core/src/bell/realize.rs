use crate::error::{BellError, Result};
use crate::observables::MeasurementScenario;
use crate::scalar::Scalar;
use crate::tensor::{tensor_product, ComplexMatrix, QuantumState, MAX_DIM};

use super::{BellPolynomial, Dyadic};

/// Dense operator `Σ c · ⊗ₖ A^{(k)}_{sₖ}` for the scenario's observables.
///
/// Terms are grouped by the setting of the leading party and the tails are
/// realized recursively, so each Kronecker product is taken once per prefix.
pub fn realize<T: Scalar>(
    p: &BellPolynomial,
    sc: &MeasurementScenario<T>,
) -> Result<ComplexMatrix<T>> {
    let n = p.n_parties();
    if n != sc.n_parties() {
        return Err(BellError::DimensionMismatch {
            expected: sc.n_parties(),
            found: n,
        });
    }
    let dims = sc.local_dims();
    let total = dims
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .unwrap_or(usize::MAX);
    if total > MAX_DIM {
        return Err(BellError::SizeCap(total));
    }
    let terms: Vec<(u32, Dyadic)> = p.raw_terms().iter().map(|(&b, &c)| (b, c)).collect();
    match realize_tail(&terms, 1, n, sc)? {
        Some(m) => Ok(m),
        None => Ok(ComplexMatrix::zeros(total)),
    }
}

fn realize_tail<T: Scalar>(
    terms: &[(u32, Dyadic)],
    party: usize,
    n: usize,
    sc: &MeasurementScenario<T>,
) -> Result<Option<ComplexMatrix<T>>> {
    if terms.is_empty() {
        return Ok(None);
    }
    let shift = n - party;
    let split = terms.partition_point(|&(b, _)| (b >> shift) & 1 == 0);
    let mut acc: Option<ComplexMatrix<T>> = None;
    for (setting, group) in [(0u8, &terms[..split]), (1u8, &terms[split..])] {
        if group.is_empty() {
            continue;
        }
        let local = sc.local(party, setting)?;
        let block = if party == n {
            let c: T = group
                .iter()
                .fold(T::zero(), |s, &(_, c)| s + c.to_scalar::<T>());
            local.scale_real(c)
        } else {
            // Low bits below this party's are the tail key; keep order.
            let mask = (1u32 << shift) - 1;
            let tail: Vec<(u32, Dyadic)> = group.iter().map(|&(b, c)| (b & mask, c)).collect();
            match realize_tail(&tail, party + 1, n, sc)? {
                Some(rest) => tensor_product(local, &rest)?,
                None => continue,
            }
        };
        acc = Some(match acc {
            None => block,
            Some(mut a) => {
                a.add_scaled(&block, T::one())?;
                a
            }
        });
    }
    Ok(acc)
}

/// `⟨realize(p, sc)⟩` in `state`.
pub fn operator_value<T: Scalar>(
    p: &BellPolynomial,
    sc: &MeasurementScenario<T>,
    state: &QuantumState<T>,
) -> Result<T> {
    state.expectation(&realize(p, sc)?)
}
