//! Exact symbolic Svetlichny and Mermin-Klyshko polynomials.
//!
//! A polynomial is a sum of signed correlation terms
//! `c · A^{(1)}_{s₁} A^{(2)}_{s₂} … A^{(N)}_{s_N}` keyed by the setting tuple
//! `(s₁, …, s_N)`. Coefficients are exact dyadic rationals so that the MK
//! recursion cancels terms exactly.

mod dump;
mod dyadic;
mod polynomial;
mod realize;

pub use dump::{dump, parse_dump};
pub use dyadic::Dyadic;
pub use polynomial::{
    check_equivalence_even, is_permutation_invariant, mk, mk_recursion, relabel, svetlichny,
    svetlichny_relabel_sign, BellPolynomial, CorrelationTerm, Equivalence, Label, Parity,
    SettingTuple,
};
pub use realize::{operator_value, realize};
