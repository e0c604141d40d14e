//! Structural checks on the symbolic operators.

use itertools::Itertools;
use multibell::bell::{
    check_equivalence_even, dump, is_permutation_invariant, mk, mk_recursion, parse_dump, relabel,
    svetlichny, svetlichny_relabel_sign, BellPolynomial, Dyadic, Parity,
};
use proptest::prelude::*;

fn brute_force_invariant(p: &BellPolynomial) -> bool {
    let n = p.n_parties();
    (0..n).permutations(n).all(|perm| p.permuted(&perm) == *p)
}

#[test]
fn term_counts_up_to_ten_parties() {
    for n in 2..=10 {
        for parity in [Parity::Plus, Parity::Minus] {
            let s = svetlichny(n, parity).unwrap();
            assert_eq!(s.len(), 1 << n);
            assert!(s.has_unit_coefficients());
        }
        let m = mk(n).unwrap();
        assert_eq!(m.len(), if n % 2 == 1 { 1 << (n - 1) } else { 1 << n });
        assert!(m.has_unit_coefficients());
    }
}

#[test]
fn normalization_is_a_power_of_two() {
    for n in 1..=10 {
        let raw = mk_recursion(n).unwrap();
        let k = (n / 2) as u32;
        assert_eq!(raw.scaled(Dyadic::integer(1 << k)), mk(n).unwrap());
    }
}

#[test]
fn even_equivalence_table() {
    let got: Vec<(Parity, i8)> = (2..=10)
        .step_by(2)
        .map(|n| {
            let e = check_equivalence_even(n).unwrap();
            (e.parity, e.sign)
        })
        .collect();
    assert_eq!(
        got,
        vec![
            (Parity::Minus, 1),
            (Parity::Plus, -1),
            (Parity::Minus, -1),
            (Parity::Plus, 1),
            (Parity::Minus, 1),
        ]
    );
    let eps: Vec<Option<i8>> = (2..=10)
        .step_by(2)
        .map(|n| svetlichny_relabel_sign(n).unwrap())
        .collect();
    assert_eq!(eps, vec![Some(-1), Some(1), Some(-1), Some(1), Some(-1)]);
    assert!(check_equivalence_even(3).is_err());
    assert!(check_equivalence_even(12).is_err());
}

#[test]
fn even_svetlichny_parities_are_relabelings_up_to_sign() {
    for n in (2..=10).step_by(2) {
        let plus = svetlichny(n, Parity::Plus).unwrap();
        let primed = relabel(&svetlichny(n, Parity::Minus).unwrap());
        assert!(plus == primed || plus == primed.negated(), "n = {n}");
    }
}

#[test]
fn operators_are_symmetric_under_all_permutations() {
    for n in 2..=6 {
        for p in [
            svetlichny(n, Parity::Plus).unwrap(),
            svetlichny(n, Parity::Minus).unwrap(),
            mk(n).unwrap(),
        ] {
            assert!(brute_force_invariant(&p), "n = {n}");
            assert!(is_permutation_invariant(&p));
        }
    }
}

#[test]
fn mk3_fixture() {
    assert_eq!(dump(&mk(3).unwrap()), "+1 001\n+1 010\n+1 100\n-1 111\n");
    let chsh = "+1 00\n+1 01\n+1 10\n-1 11\n";
    assert_eq!(dump(&svetlichny(2, Parity::Minus).unwrap()), chsh);
    assert_eq!(
        parse_dump(chsh).unwrap(),
        svetlichny(2, Parity::Minus).unwrap()
    );
}

proptest! {
    #[test]
    fn adjacent_swaps_agree_with_brute_force(
        n in 2usize..=5,
        coeffs in prop::collection::vec(-2i64..=2, 32),
    ) {
        let terms = (0..1usize << n).map(|b| {
            let settings: Vec<u8> = (0..n).map(|k| ((b >> (n - 1 - k)) & 1) as u8).collect();
            (settings, Dyadic::integer(coeffs[b]))
        });
        let p = BellPolynomial::from_terms(n, terms).unwrap();
        prop_assert_eq!(is_permutation_invariant(&p), brute_force_invariant(&p));
    }

    #[test]
    fn dump_round_trips(n in 2usize..=8, parity in prop::bool::ANY, use_mk in prop::bool::ANY) {
        let p = if use_mk {
            mk(n).unwrap()
        } else {
            svetlichny(n, if parity { Parity::Plus } else { Parity::Minus }).unwrap()
        };
        prop_assert_eq!(parse_dump(&dump(&p)).unwrap(), p);
    }
}
