//! Figure sweeps, the randomized verification harness, and violation search.

mod harness;
mod optimize;
mod rng;
mod sweep;

pub use harness::{random_state, verify_bounds_random, HarnessReport};
pub use optimize::{
    maximize_violation, nelder_mead, NelderMeadResult, Objective, OptimizeResult, OptimizerConfig,
    ParamFamily,
};
pub use rng::{random_scenario, ScenarioFamily, TrialRng};
pub use sweep::{
    figure_sweep, write_csv, CustomSweep, Figure, StateSource, SweepConfig, SweepRow, CSV_HEADER,
};
