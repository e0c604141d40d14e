use std::collections::BTreeMap;
use std::fmt;

use crate::error::{BellError, Result};

use super::Dyadic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Plus,
    Minus,
}

impl Parity {
    pub fn flip(self) -> Self {
        match self {
            Parity::Plus => Parity::Minus,
            Parity::Minus => Parity::Plus,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Plus => "+",
            Parity::Minus => "-",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    SvetlichnyPlus,
    SvetlichnyMinus,
    Mk,
    MkPrimed,
    Custom,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::SvetlichnyPlus => "svetlichny+",
            Label::SvetlichnyMinus => "svetlichny-",
            Label::Mk => "mk",
            Label::MkPrimed => "mk-primed",
            Label::Custom => "custom",
        })
    }
}

/// Settings `(s₁, …, s_N)` packed with party 1 in the most significant bit,
/// so numeric order is lexicographic order of the bitstring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SettingTuple {
    bits: u32,
    n: usize,
}

impl SettingTuple {
    pub fn new(bits: u32, n: usize) -> Self {
        debug_assert!(n <= 31 && (n == 31 || bits >> n == 0));
        Self { bits, n }
    }

    pub fn from_settings(settings: &[u8]) -> Self {
        let bits = settings
            .iter()
            .fold(0u32, |b, &s| (b << 1) | (s & 1) as u32);
        Self::new(bits, settings.len())
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn len(self) -> usize {
        self.n
    }

    pub fn is_empty(self) -> bool {
        self.n == 0
    }

    /// Setting of 1-based `party`.
    pub fn get(self, party: usize) -> u8 {
        ((self.bits >> (self.n - party)) & 1) as u8
    }

    pub fn to_vec(self) -> Vec<u8> {
        (1..=self.n).map(|p| self.get(p)).collect()
    }
}

impl fmt::Display for SettingTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in 1..=self.n {
            write!(f, "{}", self.get(p))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorrelationTerm {
    pub coeff: Dyadic,
    pub settings: SettingTuple,
}

/// Sum of correlation terms over `n_parties` parties, no duplicate settings.
///
/// Equality compares parties and terms; the label is informational.
#[derive(Debug, Clone)]
pub struct BellPolynomial {
    n_parties: usize,
    terms: BTreeMap<u32, Dyadic>,
    label: Label,
}

impl PartialEq for BellPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.n_parties == other.n_parties && self.terms == other.terms
    }
}

impl Eq for BellPolynomial {}

impl BellPolynomial {
    pub fn new(n_parties: usize, label: Label) -> Self {
        assert!((1..=31).contains(&n_parties), "party count out of range");
        Self {
            n_parties,
            terms: BTreeMap::new(),
            label,
        }
    }

    pub fn from_terms<I>(n_parties: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u8>, Dyadic)>,
    {
        let mut p = Self::new(n_parties, Label::Custom);
        for (s, c) in terms {
            if s.len() != n_parties || s.iter().any(|&b| b > 1) {
                return Err(BellError::InvalidConfig(format!(
                    "setting tuple {s:?} does not match {n_parties} parties"
                )));
            }
            p.add_term(SettingTuple::from_settings(&s).bits, c);
        }
        Ok(p)
    }

    /// Adds `coeff` to the term at `bits`, dropping it if it cancels.
    pub fn add_term(&mut self, bits: u32, coeff: Dyadic) {
        let entry = self.terms.entry(bits).or_insert(Dyadic::ZERO);
        *entry = *entry + coeff;
        if entry.is_zero() {
            self.terms.remove(&bits);
        }
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn label(&self) -> Label {
        self.label
    }

    pub fn with_label(mut self, label: Label) -> Self {
        self.label = label;
        self
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, settings: &[u8]) -> Dyadic {
        self.terms
            .get(&SettingTuple::from_settings(settings).bits)
            .copied()
            .unwrap_or(Dyadic::ZERO)
    }

    /// Terms in lexicographic order of their bitstrings.
    pub fn terms(&self) -> impl Iterator<Item = CorrelationTerm> + '_ {
        let n = self.n_parties;
        self.terms
            .iter()
            .map(move |(&bits, &coeff)| CorrelationTerm {
                coeff,
                settings: SettingTuple::new(bits, n),
            })
    }

    pub(crate) fn raw_terms(&self) -> &BTreeMap<u32, Dyadic> {
        &self.terms
    }

    /// True when every coefficient is `±1`.
    pub fn has_unit_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_unit())
    }

    pub fn scaled(&self, s: Dyadic) -> Self {
        let mut out = Self::new(self.n_parties, self.label);
        for (&b, &c) in &self.terms {
            out.add_term(b, c * s);
        }
        out
    }

    pub fn negated(&self) -> Self {
        self.scaled(Dyadic::MINUS_ONE)
    }

    /// `self · A^{(N+1)}_{setting}`, scaled by `coeff`.
    fn append_party(&self, setting: u8, coeff: Dyadic) -> Self {
        let mut out = Self::new(self.n_parties + 1, Label::Custom);
        for (&b, &c) in &self.terms {
            out.add_term((b << 1) | setting as u32, c * coeff);
        }
        out
    }

    fn plus(mut self, other: &Self) -> Self {
        debug_assert_eq!(self.n_parties, other.n_parties);
        for (&b, &c) in &other.terms {
            self.add_term(b, c);
        }
        self
    }

    /// Moves the setting of party `perm[k]` (0-based) into slot `k`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n_parties);
        let n = self.n_parties;
        let mut out = Self::new(n, self.label);
        for t in self.terms() {
            let s: Vec<u8> = perm.iter().map(|&src| t.settings.get(src + 1)).collect();
            out.add_term(SettingTuple::from_settings(&s).bits, t.coeff);
        }
        out
    }
}

/// Flips every setting (0 ↔ 1); coefficients unchanged.
pub fn relabel(p: &BellPolynomial) -> BellPolynomial {
    let mask = (1u32 << p.n_parties) - 1;
    let label = match p.label {
        Label::Mk => Label::MkPrimed,
        Label::MkPrimed => Label::Mk,
        _ => Label::Custom,
    };
    let mut out = BellPolynomial::new(p.n_parties, label);
    for (&b, &c) in &p.terms {
        out.add_term(b ^ mask, c);
    }
    out
}

fn check_parties(n: usize, min: usize) -> Result<()> {
    if !(min..=12).contains(&n) {
        return Err(BellError::OutOfRange {
            name: "party count",
            value: n as f64,
        });
    }
    Ok(())
}

fn chsh() -> BellPolynomial {
    let mut p = BellPolynomial::new(2, Label::SvetlichnyMinus);
    p.add_term(0b00, Dyadic::ONE);
    p.add_term(0b01, Dyadic::ONE);
    p.add_term(0b10, Dyadic::ONE);
    p.add_term(0b11, Dyadic::MINUS_ONE);
    p
}

fn svetlichny_pair(n: usize) -> (BellPolynomial, BellPolynomial) {
    let minus = chsh();
    let plus = relabel(&minus).negated();
    let (mut plus, mut minus) = (plus, minus);
    for _ in 3..=n {
        // S⁺ ← S⁺A₀ − S⁻A₁,  S⁻ ← S⁻A₀ + S⁺A₁
        let next_plus = plus
            .append_party(0, Dyadic::ONE)
            .plus(&minus.append_party(1, Dyadic::MINUS_ONE));
        let next_minus = minus
            .append_party(0, Dyadic::ONE)
            .plus(&plus.append_party(1, Dyadic::ONE));
        plus = next_plus;
        minus = next_minus;
    }
    (
        plus.with_label(Label::SvetlichnyPlus),
        minus.with_label(Label::SvetlichnyMinus),
    )
}

/// Svetlichny polynomial `S_N^±`, `2 ≤ n ≤ 12`.
///
/// Base case is CHSH for `S₂⁻` and `S₂⁺ = −(S₂⁻)′`; recursion
/// `S_N^± = S_{N−1}^± A₀^{(N)} ∓ S_{N−1}^∓ A₁^{(N)}`.
pub fn svetlichny(n: usize, parity: Parity) -> Result<BellPolynomial> {
    check_parties(n, 2)?;
    let (plus, minus) = svetlichny_pair(n);
    Ok(match parity {
        Parity::Plus => plus,
        Parity::Minus => minus,
    })
}

/// Unnormalized MK polynomial from the ½-weighted recursion
/// `M_N = ½M_{N−1}(A₀ + A₁) + ½M′_{N−1}(A₀ − A₁)`, `M₁ = A₀`.
pub fn mk_recursion(n: usize) -> Result<BellPolynomial> {
    check_parties(n, 1)?;
    let mut m = BellPolynomial::new(1, Label::Mk);
    m.add_term(0, Dyadic::ONE);
    for _ in 2..=n {
        let primed = relabel(&m);
        let h = Dyadic::HALF;
        m = m
            .append_party(0, h)
            .plus(&m.append_party(1, h))
            .plus(&primed.append_party(0, h))
            .plus(&primed.append_party(1, -h));
    }
    Ok(m.with_label(Label::Mk))
}

/// MK polynomial scaled by `2^{⌊n/2⌋}` so that every coefficient is `±1`.
pub fn mk(n: usize) -> Result<BellPolynomial> {
    let m = mk_recursion(n)?;
    let out = m.scaled(Dyadic::ONE.mul_pow2((n / 2) as u32));
    debug_assert!(out.has_unit_coefficients());
    Ok(out.with_label(Label::Mk))
}

/// `mk(n) = sign · svetlichny(n, parity)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Equivalence {
    pub parity: Parity,
    pub sign: i8,
}

/// Finds the Svetlichny polynomial equal to `mk(n)` up to sign, for even `n ≤ 10`.
pub fn check_equivalence_even(n: usize) -> Result<Equivalence> {
    if !n.is_multiple_of(2) || !(2..=10).contains(&n) {
        return Err(BellError::OutOfRange {
            name: "even party count",
            value: n as f64,
        });
    }
    let m = mk(n)?;
    let (plus, minus) = svetlichny_pair(n);
    for (parity, s) in [(Parity::Plus, &plus), (Parity::Minus, &minus)] {
        if &m == s {
            return Ok(Equivalence { parity, sign: 1 });
        }
        if m == s.negated() {
            return Ok(Equivalence { parity, sign: -1 });
        }
    }
    Err(BellError::NoEquivalence(n))
}

/// `ε` with `S_n⁺ = ε·(S_n⁻)′`, if such a sign exists.
pub fn svetlichny_relabel_sign(n: usize) -> Result<Option<i8>> {
    check_parties(n, 2)?;
    let (plus, minus) = svetlichny_pair(n);
    let primed = relabel(&minus);
    Ok(if plus == primed {
        Some(1)
    } else if plus == primed.negated() {
        Some(-1)
    } else {
        None
    })
}

/// True iff every permutation of party slots leaves the polynomial unchanged.
///
/// Adjacent transpositions generate the symmetric group, so checking those
/// `N − 1` swaps is exact for every `N`.
pub fn is_permutation_invariant(p: &BellPolynomial) -> bool {
    let n = p.n_parties;
    (0..n.saturating_sub(1)).all(|k| {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(k, k + 1);
        p.permuted(&perm) == *p
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term_set(p: &BellPolynomial) -> Vec<(i64, String)> {
        p.terms()
            .map(|t| (t.coeff.numerator(), t.settings.to_string()))
            .collect()
    }

    fn from_list(n: usize, list: &[(i64, &str)]) -> BellPolynomial {
        BellPolynomial::from_terms(
            n,
            list.iter()
                .map(|&(c, s)| (s.bytes().map(|b| b - b'0').collect(), Dyadic::integer(c))),
        )
        .unwrap()
    }

    #[test]
    fn chsh_base_case() {
        let s = svetlichny(2, Parity::Minus).unwrap();
        assert_eq!(
            s,
            from_list(2, &[(1, "00"), (1, "01"), (1, "10"), (-1, "11")])
        );
        // S₂⁺ = −(S₂⁻)′
        let p = svetlichny(2, Parity::Plus).unwrap();
        assert_eq!(
            p,
            from_list(2, &[(1, "00"), (-1, "01"), (-1, "10"), (-1, "11")])
        );
    }

    #[test]
    fn svetlichny_three_by_hand() {
        let s = svetlichny(3, Parity::Minus).unwrap();
        let expected = from_list(
            3,
            &[
                (1, "000"),
                (1, "010"),
                (1, "100"),
                (-1, "110"),
                (1, "001"),
                (-1, "011"),
                (-1, "101"),
                (-1, "111"),
            ],
        );
        assert_eq!(s, expected);
    }

    #[test]
    fn mk_three_matches_correlator_list() {
        let m = mk(3).unwrap();
        assert_eq!(
            term_set(&m),
            vec![
                (1, "001".into()),
                (1, "010".into()),
                (1, "100".into()),
                (-1, "111".into())
            ]
        );
        let r = relabel(&m);
        assert_eq!(
            term_set(&r),
            vec![
                (-1, "000".into()),
                (1, "011".into()),
                (1, "101".into()),
                (1, "110".into())
            ]
        );
    }

    #[test]
    fn mk_two_is_chsh() {
        assert_eq!(mk(2).unwrap(), svetlichny(2, Parity::Minus).unwrap());
        let raw = mk_recursion(2).unwrap();
        assert!(raw
            .terms()
            .all(|t| t.coeff == Dyadic::HALF || t.coeff == -Dyadic::HALF));
    }

    #[test]
    fn relabel_single_term_and_involution() {
        let p = from_list(3, &[(1, "010")]);
        assert_eq!(relabel(&p), from_list(3, &[(1, "101")]));
        let s = svetlichny(5, Parity::Plus).unwrap();
        assert_eq!(relabel(&relabel(&s)), s);
    }

    #[test]
    fn ranges() {
        assert!(svetlichny(1, Parity::Plus).is_err());
        assert!(svetlichny(13, Parity::Plus).is_err());
        assert!(mk(0).is_err());
        assert_eq!(mk(1).unwrap().len(), 1);
        assert!(check_equivalence_even(3).is_err());
        assert!(check_equivalence_even(12).is_err());
    }

    #[test]
    fn asymmetric_term_is_not_invariant() {
        assert!(is_permutation_invariant(&from_list(2, &[(1, "00")])));
        assert!(!is_permutation_invariant(&from_list(2, &[(1, "01")])));
    }

    #[test]
    fn setting_tuple_order() {
        let t = SettingTuple::from_settings(&[1, 0, 1]);
        assert_eq!(t.bits(), 0b101);
        assert_eq!(t.get(1), 1);
        assert_eq!(t.get(2), 0);
        assert_eq!(t.to_string(), "101");
    }
}
