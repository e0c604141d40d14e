use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;

use crate::bell::{operator_value, Parity};
use crate::bounds::{best_bound, Operator};
use crate::error::{BellError, Result};
use crate::numfmt::dec;
use crate::scalar::tol;
use crate::tensor::{ghz_state, state_file::read_state};
use crate::{Scenario, State};

pub const CSV_HEADER: &str =
    "alpha,operator_value,refined_bound,known_tsirelson,classical_bound,algebraic_bound";

/// A user-defined sweep: planar angles with some slots replaced by α.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomSweep {
    pub operator: Operator,
    /// `[θ₀, θ₁]` per party.
    pub base_angles: Vec<[f64; 2]>,
    /// `(party, setting)` slots (1-based party) that take the value α.
    pub alpha_slots: Vec<(usize, u8)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Figure {
    /// θ₀ = (α, 0, 0), θ₁ = (π/4, π/2, π/2) with S₃⁻.
    Fig1,
    /// θ₀ = (0, 0, 0), θ₁ = (α, α, α) with S₃⁻.
    Fig2,
    /// θ₀ = (α, 0, 0), θ₁ = (−π/4, π/2, π/2) with M₃.
    Fig3,
    Custom(CustomSweep),
}

impl Figure {
    pub fn from_id(id: u8) -> Option<Self> {
        match id {
            1 => Some(Figure::Fig1),
            2 => Some(Figure::Fig2),
            3 => Some(Figure::Fig3),
            _ => None,
        }
    }

    pub fn operator(&self) -> Operator {
        match self {
            Figure::Fig1 | Figure::Fig2 => Operator::Svetlichny(Parity::Minus),
            Figure::Fig3 => Operator::Mk,
            Figure::Custom(c) => c.operator,
        }
    }

    pub fn n_parties(&self) -> usize {
        match self {
            Figure::Custom(c) => c.base_angles.len(),
            _ => 3,
        }
    }

    /// Planar scenario at parameter `alpha`.
    pub fn scenario(&self, alpha: f64) -> Result<Scenario> {
        let angles = match self {
            Figure::Fig1 => vec![[alpha, FRAC_PI_4], [0.0, FRAC_PI_2], [0.0, FRAC_PI_2]],
            Figure::Fig2 => vec![[0.0, alpha]; 3],
            Figure::Fig3 => vec![[alpha, -FRAC_PI_4], [0.0, FRAC_PI_2], [0.0, FRAC_PI_2]],
            Figure::Custom(c) => {
                let mut a = c.base_angles.clone();
                for &(party, setting) in &c.alpha_slots {
                    let slot = party
                        .checked_sub(1)
                        .and_then(|i| a.get_mut(i))
                        .filter(|_| setting < 2)
                        .ok_or_else(|| {
                            BellError::InvalidConfig(format!("bad α slot ({party}, {setting})"))
                        })?;
                    slot[setting as usize] = alpha;
                }
                a
            }
        };
        Scenario::planar(&angles)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateSource {
    Ghz,
    File(PathBuf),
    State(State),
}

impl StateSource {
    fn load(&self, n: usize) -> Result<State> {
        let state = match self {
            StateSource::Ghz => ghz_state(n)?,
            StateSource::File(path) => read_state(path)?,
            StateSource::State(s) => s.clone(),
        };
        if state.n_parties() != n {
            return Err(BellError::DimensionMismatch {
                expected: n,
                found: state.n_parties(),
            });
        }
        Ok(state)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub figure: Figure,
    pub alpha_start: f64,
    pub alpha_end: f64,
    pub samples: usize,
    pub state: StateSource,
}

impl SweepConfig {
    /// α over `[−π, π]` on the GHZ state.
    pub fn preset(figure: Figure, samples: usize) -> Self {
        Self {
            figure,
            alpha_start: -PI,
            alpha_end: PI,
            samples,
            state: StateSource::Ghz,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha_start.is_finite()
            && self.alpha_end.is_finite()
            && self.alpha_start < self.alpha_end)
        {
            return Err(BellError::InvalidConfig(format!(
                "alpha range [{}, {}] must be finite and increasing",
                self.alpha_start, self.alpha_end
            )));
        }
        if !(2..=1_000_000).contains(&self.samples) {
            return Err(BellError::InvalidConfig(format!(
                "samples must lie in 2..=1000000, got {}",
                self.samples
            )));
        }
        Ok(())
    }

    /// The `i`-th of `samples` evenly spaced α values, endpoints included.
    pub fn alpha(&self, i: usize) -> f64 {
        if i + 1 == self.samples {
            return self.alpha_end;
        }
        let t = i as f64 / (self.samples - 1) as f64;
        self.alpha_start + t * (self.alpha_end - self.alpha_start)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub operator_value: f64,
    pub refined_bound: f64,
    pub known_tsirelson: f64,
    pub classical_bound: f64,
    pub algebraic_bound: f64,
}

fn sweep_row(figure: &Figure, state: &State, alpha: f64) -> Result<SweepRow> {
    let sc = figure.scenario(alpha)?;
    let op = figure.operator();
    let value = operator_value(&op.polynomial(figure.n_parties())?, &sc, state)?;
    let report = best_bound(op, &sc, state)?;
    if value.abs() > report.value + tol::SLACK {
        return Err(BellError::Invariant(format!(
            "|value| = {} exceeds refined bound {} at alpha = {alpha}",
            value.abs(),
            report.value
        )));
    }
    Ok(SweepRow {
        alpha,
        operator_value: value,
        refined_bound: report.value,
        known_tsirelson: report.known_tsirelson,
        classical_bound: report.classical,
        algebraic_bound: report.algebraic,
    })
}

/// Operator value and refined bound at each sampled α, in sample order.
pub fn figure_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let state = cfg.state.load(cfg.figure.n_parties())?;
    (0..cfg.samples)
        .into_par_iter()
        .map(|i| sweep_row(&cfg.figure, &state, cfg.alpha(i)))
        .collect()
}

/// CSV with [`CSV_HEADER`], 15 significant digits and LF line endings.
pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            dec(r.alpha),
            dec(r.operator_value),
            dec(r.refined_bound),
            dec(r.known_tsirelson),
            dec(r.classical_bound),
            dec(r.algebraic_bound)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    fn at(figure: Figure, alpha: f64) -> SweepRow {
        sweep_row(&figure, &ghz_state(3).unwrap(), alpha).unwrap()
    }

    #[test]
    fn fig1_saturates_tsirelson() {
        let r = at(Figure::Fig1, -FRAC_PI_4);
        assert!((r.operator_value.abs() - 4.0 * SQRT2).abs() < 1e-9);
        assert!((r.refined_bound - 4.0 * SQRT2).abs() < 1e-9);
        assert!((r.known_tsirelson - 4.0 * SQRT2).abs() < 1e-12);
    }

    #[test]
    fn fig2_classical_point() {
        let r = at(Figure::Fig2, PI);
        assert!((r.operator_value.abs() - 4.0).abs() < 1e-9);
        assert!((r.refined_bound - 4.0).abs() < 1e-9);
    }

    #[test]
    fn fig3_vanishes() {
        let r = at(Figure::Fig3, FRAC_PI_4);
        assert!(r.operator_value.abs() < 1e-9);
        assert!(r.refined_bound.abs() < 1e-9);
    }

    #[test]
    fn rows_are_ordered_and_follow_closed_forms() {
        let cfg = SweepConfig::preset(Figure::Fig2, 41);
        let rows = figure_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 41);
        assert_eq!(rows[0].alpha, -PI);
        assert_eq!(rows[40].alpha, PI);
        for w in rows.windows(2) {
            assert!(w[0].alpha < w[1].alpha);
        }
        for r in &rows {
            let a = r.alpha;
            let v = 1.0 + 3.0 * a.cos() - 3.0 * (2.0 * a).cos() - (3.0 * a).cos();
            assert!((r.operator_value - v).abs() < 1e-9);
            assert!((r.refined_bound - 4.0 * (1.0 + a.sin().abs()).sqrt()).abs() < 1e-9);
        }
    }

    #[test]
    fn custom_matches_preset() {
        let custom = Figure::Custom(CustomSweep {
            operator: Operator::Svetlichny(Parity::Minus),
            base_angles: vec![[0.0, FRAC_PI_4], [0.0, FRAC_PI_2], [0.0, FRAC_PI_2]],
            alpha_slots: vec![(1, 0)],
        });
        for alpha in [-2.0, 0.3, 1.7] {
            assert_eq!(at(custom.clone(), alpha), at(Figure::Fig1, alpha));
        }
        let bad = Figure::Custom(CustomSweep {
            operator: Operator::Mk,
            base_angles: vec![[0.0, 0.0]; 3],
            alpha_slots: vec![(4, 0)],
        });
        assert!(bad.scenario(0.0).is_err());
    }

    #[test]
    fn config_validation() {
        let mut cfg = SweepConfig::preset(Figure::Fig1, 1);
        assert!(figure_sweep(&cfg).is_err());
        cfg.samples = 3;
        cfg.alpha_end = cfg.alpha_start;
        assert!(figure_sweep(&cfg).is_err());
        cfg.alpha_end = 1.0;
        cfg.state = StateSource::State(ghz_state(2).unwrap());
        assert!(matches!(
            figure_sweep(&cfg),
            Err(BellError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn csv_layout() {
        let rows = figure_sweep(&SweepConfig::preset(Figure::Fig1, 2)).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.split('\n').collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[3], "");
        assert!(!text.contains('\r'));
        assert!(lines[1].starts_with("-3.14159265358979,"));
        assert_eq!(lines[1].split(',').count(), 6);
    }
}
