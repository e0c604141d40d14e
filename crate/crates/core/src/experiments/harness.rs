use std::fmt::Write as _;

use num_complex::Complex;
use rayon::prelude::*;

use crate::bell::{operator_value, Parity};
use crate::bounds::{
    best_bound, correlation_operator, covariance_inequality, Bipartition, Operator, Side,
};
use crate::error::{BellError, Result};
use crate::numfmt::dec;
use crate::scalar::tol;
use crate::tensor::covariance_witness;
use crate::{Scenario, State};

use super::rng::{sample_scenario, ScenarioFamily, TrialRng};

/// Aggregate of a randomized bound-checking run.
///
/// Slacks are `bound − |value|` (or `rhs − lhs`); `violations` counts checks
/// with slack below `−1e-9`, covariance eigenvalues below `−1e-10`, and
/// trials whose evaluation raised an error.
#[derive(Debug, Clone, PartialEq)]
pub struct HarnessReport {
    pub trials: usize,
    pub worst_slack_svetlichny: f64,
    /// Infinite when no MK check ran.
    pub worst_slack_mk: f64,
    pub worst_slack_covariance: f64,
    pub worst_psd_eigen: f64,
    pub violations: usize,
    pub errors: Vec<String>,
}

impl HarnessReport {
    fn empty() -> Self {
        Self {
            trials: 0,
            worst_slack_svetlichny: f64::INFINITY,
            worst_slack_mk: f64::INFINITY,
            worst_slack_covariance: f64::INFINITY,
            worst_psd_eigen: f64::INFINITY,
            violations: 0,
            errors: Vec::new(),
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.trials += other.trials;
        self.worst_slack_svetlichny = self
            .worst_slack_svetlichny
            .min(other.worst_slack_svetlichny);
        self.worst_slack_mk = self.worst_slack_mk.min(other.worst_slack_mk);
        self.worst_slack_covariance = self
            .worst_slack_covariance
            .min(other.worst_slack_covariance);
        self.worst_psd_eigen = self.worst_psd_eigen.min(other.worst_psd_eigen);
        self.violations += other.violations;
        self.errors.extend(other.errors);
        self
    }

    pub fn to_key_value(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "trials={}", self.trials);
        let _ = writeln!(
            s,
            "worst_slack_svetlichny={}",
            dec(self.worst_slack_svetlichny)
        );
        let _ = writeln!(s, "worst_slack_mk={}", dec(self.worst_slack_mk));
        let _ = writeln!(
            s,
            "worst_slack_covariance={}",
            dec(self.worst_slack_covariance)
        );
        let _ = writeln!(s, "worst_psd_eigen={}", dec(self.worst_psd_eigen));
        let _ = writeln!(s, "violations={}", self.violations);
        s
    }
}

/// Haar-random pure state, or with probability ¼ a uniform-weight mixture of two.
pub fn random_state(rng: &mut TrialRng, n: usize) -> Result<State> {
    let mixed = rng.uniform() < 0.25;
    let pure = |rng: &mut TrialRng| {
        let amps: Vec<Complex<f64>> = (0..1usize << n)
            .map(|_| Complex::new(rng.normal(), rng.normal()))
            .collect();
        State::pure_normalized(n, amps)
    };
    let first = pure(rng)?;
    if !mixed {
        return Ok(first);
    }
    let second = pure(rng)?;
    let w = rng.uniform();
    State::mixture(&[(w, &first), (1.0 - w, &second)])
}

fn random_settings(rng: &mut TrialRng, parties: &[usize]) -> Vec<(usize, u8)> {
    parties
        .iter()
        .map(|&p| (p, (rng.next_u64() & 1) as u8))
        .collect()
}

fn run_trial(seed: u64, index: usize, n: usize) -> HarnessReport {
    let mut report = HarnessReport::empty();
    report.trials = 1;
    if let Err(e) = check_trial(seed, index, n, &mut report) {
        report.violations += 1;
        report.errors.push(format!("trial {index} (n = {n}): {e}"));
    }
    report
}

fn check_trial(seed: u64, index: usize, n: usize, report: &mut HarnessReport) -> Result<()> {
    let mut rng = TrialRng::new(seed, index as u64 + 1);
    let family = if rng.uniform() < 0.5 {
        ScenarioFamily::Planar
    } else {
        ScenarioFamily::Bloch
    };
    let sc: Scenario = sample_scenario(&mut rng, n, family)?;
    let state = random_state(&mut rng, n)?;
    let slack_tol = -tol::SLACK;

    let record = |slack: f64, worst: &mut f64, violations: &mut usize| {
        *worst = worst.min(slack);
        if !(slack >= slack_tol) {
            *violations += 1;
        }
    };

    for parity in [Parity::Plus, Parity::Minus] {
        let op = Operator::Svetlichny(parity);
        let value = operator_value(&op.polynomial(n)?, &sc, &state)?;
        let bound = best_bound(op, &sc, &state)?.value;
        record(
            bound - value.abs(),
            &mut report.worst_slack_svetlichny,
            &mut report.violations,
        );
    }
    let mk_value = operator_value(&Operator::Mk.polynomial(n)?, &sc, &state)?;
    let mk_bound = best_bound(Operator::Mk, &sc, &state)?.value;
    record(
        mk_bound - mk_value.abs(),
        &mut report.worst_slack_mk,
        &mut report.violations,
    );

    // Covariance inequalities on a random bipartition.
    let x_parties: Vec<usize> = loop {
        let mask = rng.next_u64() as usize & ((1 << n) - 1);
        if mask != 0 && mask != (1 << n) - 1 {
            break (1..=n).filter(|p| mask >> (p - 1) & 1 == 1).collect();
        }
    };
    let bip = Bipartition::new(x_parties, n)?;
    let xi = correlation_operator(&sc, &random_settings(&mut rng, bip.x_parties()))?;
    let xj = correlation_operator(&sc, &random_settings(&mut rng, bip.x_parties()))?;
    let xk = correlation_operator(&sc, &random_settings(&mut rng, bip.x_parties()))?;
    let yi = correlation_operator(&sc, &random_settings(&mut rng, bip.y_parties()))?;
    let yj = correlation_operator(&sc, &random_settings(&mut rng, bip.y_parties()))?;
    let yk = correlation_operator(&sc, &random_settings(&mut rng, bip.y_parties()))?;
    for m in 0..2u8 {
        let cx = covariance_inequality(&state, [&xi, &xj], &yk, m, Side::X)?;
        record(
            cx.slack,
            &mut report.worst_slack_covariance,
            &mut report.violations,
        );
        let cy = covariance_inequality(&state, [&yi, &yj], &xk, m, Side::Y)?;
        record(
            cy.slack,
            &mut report.worst_slack_covariance,
            &mut report.violations,
        );
    }

    let ops = vec![&xi * &yk, &xj * &yk, &xk * &yi, &xk * &yj, xi, yk];
    let min_eig = covariance_witness(&state, &ops)?.min_eigenvalue()?;
    report.worst_psd_eigen = report.worst_psd_eigen.min(min_eig);
    if min_eig < -tol::PSD {
        report.violations += 1;
    }
    Ok(())
}

/// Checks the Svetlichny, MK and covariance inequalities and covariance
/// positivity on `trials` random states and scenarios.
///
/// Trial `t` uses `n = n_min + t mod (n_max − n_min + 1)` parties and ChaCha8
/// stream `t + 1` of `seed`; results do not depend on thread scheduling.
pub fn verify_bounds_random(
    seed: u64,
    trials: usize,
    n_min: usize,
    n_max: usize,
) -> Result<HarnessReport> {
    if !(2 <= n_min && n_min <= n_max && n_max <= 6) {
        return Err(BellError::InvalidConfig(format!(
            "need 2 ≤ n_min ≤ n_max ≤ 6, got {n_min}..{n_max}"
        )));
    }
    let span = n_max - n_min + 1;
    let mut report = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(seed, t, n_min + t % span))
        .reduce(HarnessReport::empty, HarnessReport::merge);
    report.errors.sort();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_is_clean_and_deterministic() {
        let a = verify_bounds_random(3, 60, 2, 4).unwrap();
        let b = verify_bounds_random(3, 60, 2, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.trials, 60);
        assert_eq!(a.violations, 0, "{:?}", a.errors);
        assert!(a.worst_psd_eigen >= -1e-10);
    }

    #[test]
    fn chsh_slack_bounded_by_tsirelson() {
        let r = verify_bounds_random(11, 40, 2, 2).unwrap();
        assert_eq!(r.violations, 0);
        // Refined bound never exceeds 2√2 and |⟨S₂⟩| ≥ 0.
        assert!(r.worst_slack_svetlichny <= 2.0 * std::f64::consts::SQRT_2);
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!(verify_bounds_random(1, 1, 1, 3).is_err());
        assert!(verify_bounds_random(1, 1, 4, 3).is_err());
        assert!(verify_bounds_random(1, 1, 2, 7).is_err());
    }

    #[test]
    fn random_states_are_valid() {
        let mut rng = TrialRng::new(9, 0);
        let mut mixed = 0;
        for _ in 0..200 {
            let s = random_state(&mut rng, 2).unwrap();
            if !s.is_pure() {
                mixed += 1;
                let tr = s.density().trace();
                assert!((tr.re - 1.0).abs() < 1e-12);
            }
        }
        assert!((25..=75).contains(&mixed), "{mixed}");
    }
}
