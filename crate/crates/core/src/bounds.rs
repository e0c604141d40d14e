//! State-dependent bounds on Svetlichny and odd-N MK operators, and the
//! covariance inequalities they are built from.
//!
//! * Svetlichny: `|⟨S_N^±⟩| ≤ 2^{N−1} √(1 + √(1 − η⁽ⁿ⁾))` for every party `n`,
//!   with `η⁽ⁿ⁾ = (½⟨{A₀⁽ⁿ⁾, A₁⁽ⁿ⁾}⟩)²`.
//! * MK, odd `N`: `|⟨M_N⟩| ≤ 2^{N−3} (√(2 + χ₊) + √(2 − χ₋))` for every pair `n ≠ m`,
//!   with `χ₊ = ⟨{A₀⁽ⁿ⁾A₁⁽ᵐ⁾, A₁⁽ⁿ⁾A₀⁽ᵐ⁾}⟩` and `χ₋ = ⟨{A₀⁽ⁿ⁾A₀⁽ᵐ⁾, A₁⁽ⁿ⁾A₁⁽ᵐ⁾}⟩`.
//! * Covariance: `|⟨XᵢY_k⟩ ± ⟨XⱼY_k⟩| ≤ √(2 ± ⟨{Xᵢ, Xⱼ}⟩)` when the `X` and `Y`
//!   blocks commute.

use std::fmt::Write as _;

use crate::bell::{check_equivalence_even, Parity};
use crate::error::{BellError, Result};
use crate::numfmt::dec;
use crate::observables::{validate_dichotomic, MeasurementScenario};
use crate::scalar::{tol, Scalar};
use crate::tensor::{anticommutator, commutator, tensor_product, ComplexMatrix, QuantumState};

/// A split of the parties into two nonempty groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    x_parties: Vec<usize>,
    y_parties: Vec<usize>,
}

impl Bipartition {
    /// `x_parties` are 1-based; `Y` is the complement in `1..=n_parties`.
    pub fn new(mut x_parties: Vec<usize>, n_parties: usize) -> Result<Self> {
        x_parties.sort_unstable();
        x_parties.dedup();
        if let Some(&p) = x_parties.iter().find(|&&p| p == 0 || p > n_parties) {
            return Err(BellError::PartyOutOfRange {
                party: p,
                n_parties,
            });
        }
        let y_parties: Vec<usize> = (1..=n_parties).filter(|p| !x_parties.contains(p)).collect();
        if x_parties.is_empty() || y_parties.is_empty() {
            return Err(BellError::InvalidConfig(
                "both sides of a bipartition must be nonempty".into(),
            ));
        }
        Ok(Self {
            x_parties,
            y_parties,
        })
    }

    pub fn x_parties(&self) -> &[usize] {
        &self.x_parties
    }

    pub fn y_parties(&self) -> &[usize] {
        &self.y_parties
    }
}

/// `⊗ₖ` over all slots of `factors[k]` (identity where absent).
///
/// `factors` lists `(party, local)`; parties must be distinct.
pub fn embed_product<T: Scalar>(
    dims: &[usize],
    factors: &[(usize, &ComplexMatrix<T>)],
) -> Result<ComplexMatrix<T>> {
    let n = dims.len();
    let mut out: Option<ComplexMatrix<T>> = None;
    let mut pending_identity = 1usize;
    for party in 1..=n {
        let local = factors.iter().find(|(p, _)| *p == party).map(|(_, m)| *m);
        match local {
            None => pending_identity *= dims[party - 1],
            Some(m) => {
                if m.dim() != dims[party - 1] {
                    return Err(BellError::DimensionMismatch {
                        expected: dims[party - 1],
                        found: m.dim(),
                    });
                }
                let mut block = m.clone();
                if pending_identity > 1 {
                    block = tensor_product(&ComplexMatrix::identity(pending_identity), &block)?;
                    pending_identity = 1;
                }
                out = Some(match out {
                    None => block,
                    Some(acc) => tensor_product(&acc, &block)?,
                });
            }
        }
    }
    if let Some(&(p, _)) = factors.iter().find(|(p, _)| *p == 0 || *p > n) {
        return Err(BellError::PartyOutOfRange {
            party: p,
            n_parties: n,
        });
    }
    let acc = out.unwrap_or_else(|| ComplexMatrix::identity(1));
    if pending_identity > 1 {
        tensor_product(&acc, &ComplexMatrix::identity(pending_identity))
    } else {
        Ok(acc)
    }
}

/// Product `⊗ A^{(p)}_{s}` over the listed `(party, setting)` pairs.
pub fn correlation_operator<T: Scalar>(
    sc: &MeasurementScenario<T>,
    settings: &[(usize, u8)],
) -> Result<ComplexMatrix<T>> {
    let locals = settings
        .iter()
        .map(|&(p, s)| Ok((p, sc.local(p, s)?)))
        .collect::<Result<Vec<_>>>()?;
    embed_product(&sc.local_dims(), &locals)
}

fn clamp_checked<T: Scalar>(name: &'static str, x: T, limit: T) -> Result<T> {
    if !x.is_finite() || x.abs() > limit + T::tol(tol::CLAMP) {
        return Err(BellError::Overshoot {
            name,
            value: x.as_f64(),
        });
    }
    Ok(x.max(-limit).min(limit))
}

fn check_party<T: Scalar>(sc: &MeasurementScenario<T>, party: usize) -> Result<()> {
    if party == 0 || party > sc.n_parties() {
        return Err(BellError::PartyOutOfRange {
            party,
            n_parties: sc.n_parties(),
        });
    }
    Ok(())
}

/// `η⁽ⁿ⁾ = (½⟨{A₀⁽ⁿ⁾, A₁⁽ⁿ⁾}⟩)²`, in `[0, 1]`.
pub fn eta<T: Scalar>(
    sc: &MeasurementScenario<T>,
    state: &QuantumState<T>,
    party: usize,
) -> Result<T> {
    check_party(sc, party)?;
    let ac = anticommutator(sc.local(party, 0)?, sc.local(party, 1)?)?;
    let op = embed_product(&sc.local_dims(), &[(party, &ac)])?;
    let half = clamp_checked(
        "½⟨{A₀,A₁}⟩",
        state.expectation(&op)? * T::lit(0.5),
        T::one(),
    )?;
    Ok(half * half)
}

/// `2^{N−1} √(1 + √(1 − η))`.
pub fn svetlichny_bound<T: Scalar>(n_parties: usize, eta_value: T) -> Result<T> {
    if !(eta_value >= T::zero() && eta_value <= T::one()) {
        return Err(BellError::OutOfRange {
            name: "eta",
            value: eta_value.as_f64(),
        });
    }
    Ok(pow2::<T>(n_parties as i32 - 1) * (T::one() + (T::one() - eta_value).sqrt()).sqrt())
}

fn pow2<T: Scalar>(k: i32) -> T {
    T::lit(2f64.powi(k))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChiSign {
    /// `⟨{A₀⁽ⁿ⁾A₁⁽ᵐ⁾, A₁⁽ⁿ⁾A₀⁽ᵐ⁾}⟩`
    Plus,
    /// `⟨{A₀⁽ⁿ⁾A₀⁽ᵐ⁾, A₁⁽ⁿ⁾A₁⁽ᵐ⁾}⟩`
    Minus,
}

/// Bipartite correlation `χ±⁽ⁿ'ᵐ⁾`, in `[−2, 2]`.
pub fn chi<T: Scalar>(
    sc: &MeasurementScenario<T>,
    state: &QuantumState<T>,
    n: usize,
    m: usize,
    sign: ChiSign,
) -> Result<T> {
    check_party(sc, n)?;
    check_party(sc, m)?;
    if n == m {
        return Err(BellError::InvalidConfig(
            "χ needs two distinct parties".into(),
        ));
    }
    let (a0, a1) = (sc.local(n, 0)?, sc.local(n, 1)?);
    let (b0, b1) = (sc.local(m, 0)?, sc.local(m, 1)?);
    // Operators on different parties commute, so {PₙQₘ, P′ₙQ′ₘ} = PP′⊗QQ′ + P′P⊗Q′Q.
    let (p, pp, q, qq) = match sign {
        ChiSign::Plus => (a0, a1, b1, b0),
        ChiSign::Minus => (a0, a1, b0, b1),
    };
    let dims = sc.local_dims();
    let mut op = embed_product(&dims, &[(n, &(p * pp)), (m, &(q * qq))])?;
    op.add_scaled(
        &embed_product(&dims, &[(n, &(pp * p)), (m, &(qq * q))])?,
        T::one(),
    )?;
    clamp_checked("χ", state.expectation(&op)?, T::lit(2.0))
}

fn check_odd(n_parties: usize) -> Result<()> {
    if n_parties < 3 || n_parties.is_multiple_of(2) {
        return Err(BellError::OutOfRange {
            name: "odd party count",
            value: n_parties as f64,
        });
    }
    Ok(())
}

/// `2^{N−3} (√(2 + χ₊) + √(2 − χ₋))` for odd `N ≥ 3`.
pub fn mk_bound_odd<T: Scalar>(n_parties: usize, chi_plus: T, chi_minus: T) -> Result<T> {
    check_odd(n_parties)?;
    let two = T::lit(2.0);
    for (name, v) in [("chi_plus", chi_plus), ("chi_minus", chi_minus)] {
        if !(v >= -two && v <= two) {
            return Err(BellError::OutOfRange {
                name,
                value: v.as_f64(),
            });
        }
    }
    Ok(pow2::<T>(n_parties as i32 - 3) * ((two + chi_plus).sqrt() + (two - chi_minus).sqrt()))
}

/// `2^{N−2} √(1 + √(1 − q²))` for odd `N ≥ 3`, where `q = ⟨A₀⁽ⁿ⁾A₁⁽ⁿ⁾A₀⁽ᵐ⁾A₁⁽ᵐ⁾⟩`
/// for a pair sharing only classical correlations.
pub fn mk_bound_classical_pair<T: Scalar>(n_parties: usize, quad_corr: T) -> Result<T> {
    check_odd(n_parties)?;
    if !(quad_corr >= -T::one() && quad_corr <= T::one()) {
        return Err(BellError::OutOfRange {
            name: "quad_corr",
            value: quad_corr.as_f64(),
        });
    }
    let inner = (T::one() - quad_corr * quad_corr).max(T::zero()).sqrt();
    Ok(pow2::<T>(n_parties as i32 - 2) * (T::one() + inner).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Svetlichny,
    MkOdd,
    MkClassicalPair,
}

impl BoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::Svetlichny => "svetlichny",
            BoundKind::MkOdd => "mk-odd",
            BoundKind::MkClassicalPair => "mk-classical-pair",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Witness<T> {
    Party {
        party: usize,
        eta: T,
    },
    Pair {
        n: usize,
        m: usize,
        chi_plus: T,
        chi_minus: T,
    },
    ClassicalPair {
        n: usize,
        m: usize,
        quad_corr: T,
    },
}

/// A refined bound, the correlations that produced it, and reference bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport<T> {
    pub kind: BoundKind,
    pub n_parties: usize,
    pub value: T,
    pub witness: Witness<T>,
    /// State-independent quantum (Tsirelson) bound of the operator.
    pub known_tsirelson: T,
    /// Local-hidden-variable bound of the operator.
    pub classical: T,
    pub algebraic: T,
}

impl<T: Scalar> BoundReport<T> {
    fn svetlichny(n: usize, value: T, witness: Witness<T>) -> Self {
        let base = pow2::<T>(n as i32 - 1);
        Self {
            kind: BoundKind::Svetlichny,
            n_parties: n,
            value,
            witness,
            known_tsirelson: base * T::SQRT_2(),
            classical: base,
            algebraic: base * T::lit(2.0),
        }
    }

    fn mk(kind: BoundKind, n: usize, value: T, witness: Witness<T>) -> Self {
        Self {
            kind,
            n_parties: n,
            value,
            witness,
            known_tsirelson: pow2::<T>(n as i32 - 1),
            classical: pow2::<T>((n as i32 - 1) / 2),
            algebraic: pow2::<T>(n as i32 - 1),
        }
    }

    /// Flat `key=value` block, one pair per line.
    pub fn to_key_value(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "kind={}", self.kind.as_str());
        let _ = writeln!(s, "n_parties={}", self.n_parties);
        let _ = writeln!(s, "value={}", dec(self.value.as_f64()));
        match self.witness {
            Witness::Party { party, eta } => {
                let _ = writeln!(s, "witness_party={party}");
                let _ = writeln!(s, "eta={}", dec(eta.as_f64()));
            }
            Witness::Pair {
                n,
                m,
                chi_plus,
                chi_minus,
            } => {
                let _ = writeln!(s, "witness_pair={n},{m}");
                let _ = writeln!(s, "chi_plus={}", dec(chi_plus.as_f64()));
                let _ = writeln!(s, "chi_minus={}", dec(chi_minus.as_f64()));
            }
            Witness::ClassicalPair { n, m, quad_corr } => {
                let _ = writeln!(s, "witness_pair={n},{m}");
                let _ = writeln!(s, "quad_corr={}", dec(quad_corr.as_f64()));
            }
        }
        let _ = writeln!(s, "known_tsirelson={}", dec(self.known_tsirelson.as_f64()));
        let _ = writeln!(s, "classical={}", dec(self.classical.as_f64()));
        let _ = writeln!(s, "algebraic={}", dec(self.algebraic.as_f64()));
        s
    }
}

/// Smallest single-party Svetlichny bound; ties go to the lowest party.
pub fn best_svetlichny_bound<T: Scalar>(
    sc: &MeasurementScenario<T>,
    state: &QuantumState<T>,
) -> Result<BoundReport<T>> {
    let n = sc.n_parties();
    if n < 2 {
        return Err(BellError::OutOfRange {
            name: "party count",
            value: n as f64,
        });
    }
    let mut best: Option<(usize, T, T)> = None;
    for party in 1..=n {
        let e = eta(sc, state, party)?;
        let b = svetlichny_bound(n, e)?;
        if best.is_none_or(|(_, _, v)| b < v) {
            best = Some((party, e, b));
        }
    }
    let (party, e, value) = best.expect("n ≥ 2");
    Ok(BoundReport::svetlichny(
        n,
        value,
        Witness::Party { party, eta: e },
    ))
}

/// Smallest pair MK bound over all ordered pairs `n ≠ m`; ties go to the
/// lexicographically first pair.
pub fn best_mk_bound<T: Scalar>(
    sc: &MeasurementScenario<T>,
    state: &QuantumState<T>,
) -> Result<BoundReport<T>> {
    let n_parties = sc.n_parties();
    check_odd(n_parties)?;
    let mut best: Option<(Witness<T>, T)> = None;
    for n in 1..=n_parties {
        for m in (1..=n_parties).filter(|&m| m != n) {
            let cp = chi(sc, state, n, m, ChiSign::Plus)?;
            let cm = chi(sc, state, n, m, ChiSign::Minus)?;
            let b = mk_bound_odd(n_parties, cp, cm)?;
            if best.is_none_or(|(_, v)| b < v) {
                best = Some((
                    Witness::Pair {
                        n,
                        m,
                        chi_plus: cp,
                        chi_minus: cm,
                    },
                    b,
                ));
            }
        }
    }
    let (w, value) = best.expect("at least one pair");
    Ok(BoundReport::mk(BoundKind::MkOdd, n_parties, value, w))
}

/// Classical-pair MK bound for parties `n`, `m` whose observables commute.
///
/// Fails with a non-Hermitian expectation error if `A₀A₁` is not Hermitian
/// at either party.
pub fn classical_pair_bound<T: Scalar>(
    sc: &MeasurementScenario<T>,
    state: &QuantumState<T>,
    n: usize,
    m: usize,
) -> Result<BoundReport<T>> {
    let n_parties = sc.n_parties();
    check_odd(n_parties)?;
    check_party(sc, n)?;
    check_party(sc, m)?;
    if n == m {
        return Err(BellError::InvalidConfig(
            "classical pair needs two distinct parties".into(),
        ));
    }
    let pn = sc.local(n, 0)? * sc.local(n, 1)?;
    let pm = sc.local(m, 0)? * sc.local(m, 1)?;
    let op = embed_product(&sc.local_dims(), &[(n, &pn), (m, &pm)])?;
    let q = clamp_checked("⟨A₀A₁A₀A₁⟩", state.expectation(&op)?, T::one())?;
    let value = mk_bound_classical_pair(n_parties, q)?;
    Ok(BoundReport::mk(
        BoundKind::MkClassicalPair,
        n_parties,
        value,
        Witness::ClassicalPair { n, m, quad_corr: q },
    ))
}

/// Which operator a bound is requested for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operator {
    Svetlichny(Parity),
    Mk,
}

impl Operator {
    pub fn polynomial(self, n: usize) -> Result<crate::bell::BellPolynomial> {
        match self {
            Operator::Svetlichny(p) => crate::bell::svetlichny(n, p),
            Operator::Mk => crate::bell::mk(n),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Operator::Svetlichny(Parity::Plus) => "svetlichny+",
            Operator::Svetlichny(Parity::Minus) => "svetlichny-",
            Operator::Mk => "mk",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "svetlichny+" => Some(Operator::Svetlichny(Parity::Plus)),
            "svetlichny-" => Some(Operator::Svetlichny(Parity::Minus)),
            "mk" => Some(Operator::Mk),
            _ => None,
        }
    }
}

/// Refined bound for `op`: the Svetlichny bound for Svetlichny operators and
/// for even-N MK (which equals ±a Svetlichny operator), the pair bound for odd-N MK.
pub fn best_bound<T: Scalar>(
    op: Operator,
    sc: &MeasurementScenario<T>,
    state: &QuantumState<T>,
) -> Result<BoundReport<T>> {
    match op {
        Operator::Svetlichny(_) => best_svetlichny_bound(sc, state),
        Operator::Mk if sc.n_parties().is_multiple_of(2) => {
            check_equivalence_even(sc.n_parties())?;
            best_svetlichny_bound(sc, state)
        }
        Operator::Mk => best_mk_bound(sc, state),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// The two operators act on the `X` block, the fixed one on `Y`.
    X,
    /// The two operators act on the `Y` block, the fixed one on `X`.
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceCheck<T> {
    pub lhs: T,
    pub rhs: T,
    /// `rhs − lhs`.
    pub slack: T,
    pub side: Side,
}

/// `|⟨P₀F⟩ + (−1)^m⟨P₁F⟩| ≤ √(2 + (−1)^m⟨{P₀, P₁}⟩)` for dichotomic full-register
/// operators `P₀`, `P₁` on one block and `F` on the other.
pub fn covariance_inequality<T: Scalar>(
    state: &QuantumState<T>,
    pair: [&ComplexMatrix<T>; 2],
    fixed: &ComplexMatrix<T>,
    m_parity: u8,
    side: Side,
) -> Result<CovarianceCheck<T>> {
    for op in [pair[0], pair[1], fixed] {
        if op.dim() != state.dim() {
            return Err(BellError::DimensionMismatch {
                expected: state.dim(),
                found: op.dim(),
            });
        }
        validate_dichotomic(op)?;
    }
    for p in pair {
        let c = commutator(p, fixed)?.max_abs();
        if c > T::tol(tol::COMMUTE) {
            return Err(BellError::NonCommutingBlocks(c.as_f64()));
        }
    }
    let s = if m_parity.is_multiple_of(2) {
        T::one()
    } else {
        -T::one()
    };
    let e0 = state.expectation(&(pair[0] * fixed))?;
    let e1 = state.expectation(&(pair[1] * fixed))?;
    let ac = state.expectation(&anticommutator(pair[0], pair[1])?)?;
    let lhs = (e0 + s * e1).abs();
    let rhs = (T::lit(2.0) + s * ac).max(T::zero()).sqrt();
    Ok(CovarianceCheck {
        lhs,
        rhs,
        slack: rhs - lhs,
        side,
    })
}
