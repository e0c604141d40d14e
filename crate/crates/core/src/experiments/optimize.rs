use rayon::prelude::*;

use crate::bell::{operator_value, BellPolynomial, Parity};
use crate::bounds::{best_bound, Operator};
use crate::error::{BellError, Result};
use crate::tensor::ghz_state;
use crate::{Scenario, State};

use super::rng::TrialRng;

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
    /// Simplex diameter dropped below `tol` before the budget ran out.
    pub converged: bool,
}

fn diameter(simplex: &[(Vec<f64>, f64)]) -> f64 {
    let best = &simplex[0].0;
    simplex[1..]
        .iter()
        .map(|(x, _)| {
            x.iter()
                .zip(best)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// Minimizes `f` with the Nelder–Mead simplex method (reflection 1,
/// expansion 2, contraction ½, shrink ½).
///
/// The initial simplex is `x0` plus `step` along each axis. Stops when the
/// simplex diameter (max-norm distance to the best vertex) falls below `tol`
/// or after `max_evals` evaluations.
pub fn nelder_mead<F>(
    mut f: F,
    x0: &[f64],
    step: f64,
    tol: f64,
    max_evals: usize,
) -> NelderMeadResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut evals = 0;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), eval(x0, &mut evals)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }

    let point = |c: &[f64], w: &[f64], t: f64| -> Vec<f64> {
        c.iter().zip(w).map(|(c, w)| c + t * (w - c)).collect()
    };

    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if n == 0 || diameter(&simplex) < tol {
            let (x, f) = simplex.swap_remove(0);
            return NelderMeadResult {
                x,
                f,
                evals,
                converged: true,
            };
        }
        if evals >= max_evals {
            let (x, f) = simplex.swap_remove(0);
            return NelderMeadResult {
                x,
                f,
                evals,
                converged: false,
            };
        }
        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let (worst, f_worst) = simplex[n].clone();
        let f_best = simplex[0].1;
        let f_second = simplex[n - 1].1;

        let xr = point(&centroid, &worst, -1.0);
        let fr = eval(&xr, &mut evals);
        if fr < f_best {
            let xe = point(&centroid, &worst, -2.0);
            let fe = eval(&xe, &mut evals);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < f_second {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < f_worst {
            let xc = point(&centroid, &xr, 0.5);
            let fc = eval(&xc, &mut evals);
            (xc, fc)
        } else {
            let xc = point(&centroid, &worst, 0.5);
            let fc = eval(&xc, &mut evals);
            (xc, fc)
        };
        if fc < fr.min(f_worst) {
            simplex[n] = (xc, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x = point(&best, &vertex.0, 0.5);
            let v = eval(&x, &mut evals);
            *vertex = (x, v);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// |⟨S_N⁻⟩|.
    MaxSvetlichny,
    /// |⟨M_N⟩|.
    MaxMk,
    /// Known Tsirelson bound minus the refined bound of S_N⁻.
    MaxGap,
}

impl Objective {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "max-svetlichny" => Some(Objective::MaxSvetlichny),
            "max-mk" => Some(Objective::MaxMk),
            "max-gap" => Some(Objective::MaxGap),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Objective::MaxSvetlichny => "max-svetlichny",
            Objective::MaxMk => "max-mk",
            Objective::MaxGap => "max-gap",
        }
    }

    fn operator(self) -> Operator {
        match self {
            Objective::MaxMk => Operator::Mk,
            _ => Operator::Svetlichny(Parity::Minus),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamFamily {
    /// Two angles per party in the x–y plane.
    Planar,
    /// Polar and azimuthal angle for each of the two observables of every party.
    Bloch,
}

impl ParamFamily {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "planar" => Some(ParamFamily::Planar),
            "bloch" => Some(ParamFamily::Bloch),
            _ => None,
        }
    }

    pub fn dimension(self, n: usize) -> usize {
        match self {
            ParamFamily::Planar => 2 * n,
            ParamFamily::Bloch => 4 * n,
        }
    }

    /// Scenario encoded by `params` (length [`ParamFamily::dimension`]).
    pub fn scenario(self, n: usize, params: &[f64]) -> Result<Scenario> {
        if params.len() != self.dimension(n) {
            return Err(BellError::DimensionMismatch {
                expected: self.dimension(n),
                found: params.len(),
            });
        }
        match self {
            ParamFamily::Planar => {
                let angles: Vec<[f64; 2]> = params.chunks(2).map(|c| [c[0], c[1]]).collect();
                Scenario::planar(&angles)
            }
            ParamFamily::Bloch => {
                let dir = |polar: f64, azimuth: f64| {
                    [
                        polar.sin() * azimuth.cos(),
                        polar.sin() * azimuth.sin(),
                        polar.cos(),
                    ]
                };
                let dirs: Vec<[[f64; 3]; 2]> = params
                    .chunks(4)
                    .map(|c| [dir(c[0], c[1]), dir(c[2], c[3])])
                    .collect();
                Scenario::bloch(&dirs)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub n_parties: usize,
    pub objective: Objective,
    pub family: ParamFamily,
    pub multistarts: usize,
    pub max_evals: usize,
    pub tol: f64,
    pub seed: u64,
}

impl OptimizerConfig {
    pub fn new(n_parties: usize, objective: Objective) -> Self {
        Self {
            n_parties,
            objective,
            family: ParamFamily::Planar,
            multistarts: 16,
            max_evals: 20_000,
            tol: 1e-10,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=8).contains(&self.n_parties) {
            return Err(BellError::InvalidConfig(format!(
                "n_parties must lie in 2..=8, got {}",
                self.n_parties
            )));
        }
        if self.multistarts == 0 {
            return Err(BellError::InvalidConfig(
                "multistarts must be at least 1".into(),
            ));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(BellError::InvalidConfig(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_evals == 0 {
            return Err(BellError::InvalidConfig(
                "max_evals must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeResult {
    pub params: Vec<f64>,
    /// Objective value at `params`.
    pub value: f64,
    /// Refined bound of the objective's operator at `params`.
    pub refined_bound: f64,
    /// Evaluations summed over all starts.
    pub evals: usize,
    /// The best start converged to `tol`.
    pub converged: bool,
}

struct Problem {
    n: usize,
    objective: Objective,
    family: ParamFamily,
    poly: BellPolynomial,
    state: State,
}

impl Problem {
    fn value(&self, params: &[f64]) -> Result<f64> {
        let sc = self.family.scenario(self.n, params)?;
        match self.objective {
            Objective::MaxSvetlichny | Objective::MaxMk => {
                Ok(operator_value(&self.poly, &sc, &self.state)?.abs())
            }
            Objective::MaxGap => {
                let r = best_bound(self.objective.operator(), &sc, &self.state)?;
                Ok(r.known_tsirelson - r.value)
            }
        }
    }
}

/// Maximizes the objective on the GHZ state: Nelder–Mead from `multistarts`
/// uniformly random starting points in `[0, 2π)`, keeping the best result.
pub fn maximize_violation(cfg: &OptimizerConfig) -> Result<OptimizeResult> {
    cfg.validate()?;
    let n = cfg.n_parties;
    let problem = Problem {
        n,
        objective: cfg.objective,
        family: cfg.family,
        poly: cfg.objective.operator().polynomial(n)?,
        state: ghz_state(n)?,
    };
    let dim = cfg.family.dimension(n);
    let starts: Vec<Vec<f64>> = (0..cfg.multistarts)
        .map(|s| {
            let mut rng = TrialRng::new(cfg.seed, s as u64);
            (0..dim)
                .map(|_| rng.uniform() * std::f64::consts::TAU)
                .collect()
        })
        .collect();

    let runs: Vec<NelderMeadResult> = starts
        .par_iter()
        .map(|x0| {
            nelder_mead(
                |x| problem.value(x).map_or(f64::INFINITY, |v| -v),
                x0,
                0.5,
                cfg.tol,
                cfg.max_evals,
            )
        })
        .collect();
    let evals = runs.iter().map(|r| r.evals).sum();
    let best = runs
        .into_iter()
        .reduce(|a, b| if b.f < a.f { b } else { a })
        .expect("multistarts ≥ 1");

    let value = problem.value(&best.x)?;
    let sc = cfg.family.scenario(n, &best.x)?;
    let refined_bound = best_bound(cfg.objective.operator(), &sc, &problem.state)?.value;
    Ok(OptimizeResult {
        params: best.x,
        value,
        refined_bound,
        evals,
        converged: best.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    #[test]
    fn nelder_mead_finds_rosenbrock_minimum() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let r = nelder_mead(rosen, &[-1.2, 1.0], 0.5, 1e-10, 10_000);
        assert!(r.converged);
        assert!(
            (r.x[0] - 1.0).abs() < 1e-6 && (r.x[1] - 1.0).abs() < 1e-6,
            "{:?}",
            r.x
        );
    }

    #[test]
    fn nelder_mead_reports_budget_exhaustion() {
        let r = nelder_mead(
            |x| x.iter().map(|v| v * v).sum(),
            &[3.0, -2.0, 1.0],
            1.0,
            1e-14,
            30,
        );
        assert!(!r.converged);
        assert!(r.evals >= 30);
        assert!(r.f < 14.0);
    }

    #[test]
    fn chsh_reaches_tsirelson() {
        let r = maximize_violation(&OptimizerConfig::new(2, Objective::MaxSvetlichny)).unwrap();
        assert!(r.value >= 2.0 * SQRT2 - 1e-6, "{}", r.value);
        assert!(r.value <= r.refined_bound + 1e-9);
    }

    #[test]
    fn gap_reaches_four_root_two_minus_four() {
        let r = maximize_violation(&OptimizerConfig::new(3, Objective::MaxGap)).unwrap();
        assert!(r.value >= 4.0 * SQRT2 - 4.0 - 1e-6, "{}", r.value);
    }

    #[test]
    fn bloch_family_builds_dichotomic_scenarios() {
        let p = [0.3, 1.0, 2.0, -0.5, 1.1, 0.2, 0.7, 2.5];
        let sc = ParamFamily::Bloch.scenario(2, &p).unwrap();
        assert_eq!(sc.n_parties(), 2);
        assert!(ParamFamily::Bloch.scenario(2, &p[..7]).is_err());
    }

    #[test]
    fn rejects_bad_configs() {
        let mut cfg = OptimizerConfig::new(3, Objective::MaxMk);
        cfg.multistarts = 0;
        assert!(maximize_violation(&cfg).is_err());
        cfg.multistarts = 1;
        cfg.tol = 0.0;
        assert!(maximize_violation(&cfg).is_err());
    }
}
