//! Property tests for the inequalities and algebraic identities.

use std::f64::consts::SQRT_2;

use multibell::bell::{mk, operator_value, realize, relabel, svetlichny, Parity};
use multibell::bounds::{
    best_mk_bound, best_svetlichny_bound, chi, correlation_operator, mk_bound_classical_pair,
    mk_bound_odd, svetlichny_bound, ChiSign,
};
use multibell::experiments::{random_scenario, random_state, ScenarioFamily, TrialRng};
use multibell::observables::{embed_local, planar_observable};
use multibell::tensor::{anticommutator, covariance_witness, tensor_product, ComplexMatrix};
use multibell::{Matrix, Scenario, State};
use num_complex::Complex;
use proptest::prelude::*;

fn family() -> impl Strategy<Value = ScenarioFamily> {
    prop_oneof![Just(ScenarioFamily::Planar), Just(ScenarioFamily::Bloch)]
}

fn matrix2() -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-2.0f64..2.0, 8).prop_map(|v| {
        let data = v.chunks(2).map(|c| Complex::new(c[0], c[1])).collect();
        Matrix::from_vec(2, data).unwrap()
    })
}

fn setup(seed: u64, n: usize, fam: ScenarioFamily) -> (Scenario, State) {
    let sc = random_scenario(seed, n, fam).unwrap();
    let state = random_state(&mut TrialRng::new(seed, 99), n).unwrap();
    (sc, state)
}

/// Dichotomic full-register operators from random correlators.
fn random_correlators(sc: &Scenario, seed: u64, count: usize) -> Vec<Matrix> {
    let n = sc.n_parties();
    let mut rng = TrialRng::new(seed, 7);
    (0..count)
        .map(|_| {
            let mut parties = Vec::new();
            for p in 1..=n {
                if rng.uniform() < 0.7 {
                    parties.push((p, rng.below(2) as u8));
                }
            }
            correlation_operator(sc, &parties).unwrap()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_product_is_associative_and_multiplicative(a in matrix2(), b in matrix2(), c in matrix2(), d in matrix2()) {
        let left = tensor_product(&tensor_product(&a, &b).unwrap(), &c).unwrap();
        let right = tensor_product(&a, &tensor_product(&b, &c).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right) <= 1e-14);
        let prod = tensor_product(&(&a * &c), &(&b * &d)).unwrap();
        let split = &tensor_product(&a, &b).unwrap() * &tensor_product(&c, &d).unwrap();
        prop_assert!(prod.max_abs_diff(&split) <= 1e-12);
    }

    #[test]
    fn hermitian_expectations_are_real(seed in any::<u64>(), n in 1usize..=4, m in matrix2()) {
        let state = random_state(&mut TrialRng::new(seed, 0), n).unwrap();
        let h = &m + &m.adjoint();
        let op = embed_local(&h, 1, &vec![2; n]).unwrap();
        prop_assert!(state.expectation(&op).is_ok());
    }

    #[test]
    fn anticommutator_expectation_in_range(seed in any::<u64>(), n in 2usize..=4, fam in family()) {
        let (sc, state) = setup(seed, n, fam);
        let ops = random_correlators(&sc, seed, 2);
        let v = state.expectation(&anticommutator(&ops[0], &ops[1]).unwrap()).unwrap();
        prop_assert!((-2.0 - 1e-10..=2.0 + 1e-10).contains(&v), "{}", v);
    }

    #[test]
    fn covariance_is_psd_and_reduces(seed in any::<u64>(), n in 2usize..=4, k in 2usize..=6, fam in family()) {
        let (sc, state) = setup(seed, n, fam);
        let ops = random_correlators(&sc, seed, k);
        let w = covariance_witness(&state, &ops).unwrap();
        prop_assert!(w.min_eigenvalue().unwrap() >= -1e-10);
        let pair = covariance_witness(&state, &ops[..2]).unwrap();
        for m in 0..2 {
            let (lhs, rhs) = pair.scalar_reduction(m).unwrap();
            prop_assert!(lhs <= rhs + 1e-10, "m={} lhs={} rhs={}", m, lhs, rhs);
        }
    }

    #[test]
    fn planar_anticommutator_is_scalar(a in -10.0f64..10.0, b in -10.0f64..10.0) {
        let ac = anticommutator(&planar_observable(a).unwrap(), &planar_observable(b).unwrap()).unwrap();
        let want = Matrix::identity(2).scale_real(2.0 * (a - b).cos());
        prop_assert!(ac.max_abs_diff(&want) <= 1e-14);
    }

    #[test]
    fn embedded_observables_on_distinct_parties_commute(seed in any::<u64>(), n in 2usize..=4, fam in family()) {
        let sc = random_scenario(seed, n, fam).unwrap();
        for p in 1..=n {
            for q in (1..=n).filter(|&q| q != p) {
                let a = sc.embedded(p, 0).unwrap();
                let b = sc.embedded(q, 1).unwrap();
                prop_assert!((a * b).max_abs_diff(&(b * a)) <= 1e-14);
            }
        }
    }

    #[test]
    fn relabel_matches_swapped_settings(seed in any::<u64>(), n in 2usize..=4, fam in family()) {
        let sc = random_scenario(seed, n, fam).unwrap();
        for p in [svetlichny(n, Parity::Plus).unwrap(), svetlichny(n, Parity::Minus).unwrap(), mk(n).unwrap()] {
            let lhs = realize(&relabel(&p), &sc).unwrap();
            let rhs = realize(&p, &sc.relabeled()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn master_soundness(seed in any::<u64>(), n in 2usize..=5, fam in family()) {
        let (sc, state) = setup(seed, n, fam);
        let report = best_svetlichny_bound(&sc, &state).unwrap();
        let tsirelson = 2f64.powi(n as i32 - 1) * SQRT_2;
        prop_assert!(report.value <= tsirelson + 1e-12);
        for parity in [Parity::Plus, Parity::Minus] {
            let v = operator_value(&svetlichny(n, parity).unwrap(), &sc, &state).unwrap();
            prop_assert!(v.abs() <= tsirelson + 1e-9);
            prop_assert!(v.abs() <= report.value + 1e-9, "|{}| > {}", v, report.value);
        }
        if n % 2 == 1 {
            let v = operator_value(&mk(n).unwrap(), &sc, &state).unwrap();
            let b = best_mk_bound(&sc, &state).unwrap().value;
            prop_assert!(v.abs() <= b + 1e-9, "|{}| > {}", v, b);
        }
    }

    #[test]
    fn svetlichny_bound_decreases_in_eta(n in 2usize..=8, a in 0.0f64..1.0, b in 0.0f64..1.0) {
        prop_assume!((a - b).abs() > 1e-9);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(svetlichny_bound(n, hi).unwrap() < svetlichny_bound(n, lo).unwrap());
    }

    #[test]
    fn mk_bound_monotone_in_chi(n in prop::sample::select(vec![3usize, 5, 7]), p in -2.0f64..2.0, q in -2.0f64..2.0, m in -2.0f64..2.0) {
        let (lo, hi) = if p < q { (p, q) } else { (q, p) };
        prop_assert!(mk_bound_odd(n, lo, m).unwrap() <= mk_bound_odd(n, hi, m).unwrap());
        prop_assert!(mk_bound_odd(n, m, lo).unwrap() >= mk_bound_odd(n, m, hi).unwrap());
    }

    #[test]
    fn commuting_pair_chis_coincide(seed in any::<u64>(), signs in prop::collection::vec(prop::bool::ANY, 8)) {
        let s = |i: usize| if signs[i] { 1.0 } else { -1.0 };
        let d = |i: usize| ComplexMatrix::from_real_diagonal(&[s(i), s(i + 1)]);
        let mut rng = TrialRng::new(seed, 1);
        let locals = vec![
            [d(0), d(2)],
            [d(4), d(6)],
            [planar_observable(rng.uniform() * 6.3).unwrap(), planar_observable(rng.uniform() * 6.3).unwrap()],
        ];
        let sc = Scenario::from_locals(locals).unwrap();
        let state = random_state(&mut rng, 3).unwrap();
        let cp = chi(&sc, &state, 1, 2, ChiSign::Plus).unwrap();
        let cm = chi(&sc, &state, 1, 2, ChiSign::Minus).unwrap();
        prop_assert!((cp - cm).abs() <= 1e-10);
        let odd = mk_bound_odd(3, cp, cm).unwrap();
        let classical = mk_bound_classical_pair(3, (cp / 2.0).clamp(-1.0, 1.0)).unwrap();
        prop_assert!((odd - classical).abs() <= 1e-10);
    }

    #[test]
    fn sum_of_roots_simplifies(c in -2.0f64..=2.0) {
        let lhs = (2.0 + c).sqrt() + (2.0 - c).sqrt();
        let rhs = 2.0 * (1.0 + (1.0 - (c / 2.0).powi(2)).sqrt()).sqrt();
        prop_assert!((lhs - rhs).abs() <= 1e-12);
    }
}

#[test]
fn svetlichny_tsirelson_holds_on_many_samples() {
    for n in 2..=6 {
        let polys = [
            svetlichny(n, Parity::Plus).unwrap(),
            svetlichny(n, Parity::Minus).unwrap(),
        ];
        let cap = 2f64.powi(n as i32 - 1) * SQRT_2 + 1e-9;
        let trials = if n <= 4 { 1000 } else { 200 };
        for t in 0..trials {
            let fam = if t % 2 == 0 {
                ScenarioFamily::Planar
            } else {
                ScenarioFamily::Bloch
            };
            let (sc, state) = setup(t as u64 + 1000 * n as u64, n, fam);
            for p in &polys {
                let v = operator_value(p, &sc, &state).unwrap();
                assert!(v.abs() <= cap, "n={n} trial {t}: {v}");
            }
        }
    }
}

#[test]
fn generic_scalar_f32_matches_f64() {
    use multibell::observables::MeasurementScenario;
    use multibell::tensor::ghz_state;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
    let angles64 = [[-FRAC_PI_4, FRAC_PI_4], [0.0, FRAC_PI_2], [0.0, FRAC_PI_2]];
    let angles32: Vec<[f32; 2]> = angles64
        .iter()
        .map(|a| [a[0] as f32, a[1] as f32])
        .collect();
    let p = svetlichny(3, Parity::Minus).unwrap();
    let v64 = operator_value(
        &p,
        &MeasurementScenario::planar(&angles64).unwrap(),
        &ghz_state::<f64>(3).unwrap(),
    )
    .unwrap();
    let v32 = operator_value(
        &p,
        &MeasurementScenario::planar(&angles32).unwrap(),
        &ghz_state::<f32>(3).unwrap(),
    )
    .unwrap();
    assert!((v64 - v32 as f64).abs() < 1e-5);
    let b32 = best_svetlichny_bound(
        &MeasurementScenario::planar(&angles32).unwrap(),
        &ghz_state::<f32>(3).unwrap(),
    )
    .unwrap();
    assert!((b32.value as f64 - 4.0 * SQRT_2).abs() < 1e-4);
}
