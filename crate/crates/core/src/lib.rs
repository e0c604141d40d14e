//! Multipartite Bell operators and state-dependent Tsirelson bounds.
//!
//! The crate builds Svetlichny and Mermin-Klyshko (MK) operators as exact
//! symbolic polynomials, realizes them as dense operators for a choice of
//! per-party dichotomic observables, evaluates them on pure or mixed qubit
//! states, and computes bounds that depend on local (Svetlichny) or
//! bipartite (odd-N MK) correlations.
//!
//! Linear algebra, observables, realization and bounds are generic over the
//! floating-point scalar (`f32`/`f64`); the aliases below fix `f64`, which is
//! what the experiments and the CLI use.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bell;
pub mod bounds;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod numfmt;
pub mod observables;
pub mod scalar;
pub mod tensor;

pub use error::{BellError, Result};
pub use scalar::Scalar;

/// Dense complex matrix over `f64`.
pub type Matrix = tensor::ComplexMatrix<f64>;
/// Real square matrix over `f64`.
pub type RealMatrix = tensor::RealMatrix<f64>;
/// Pure or mixed qubit state over `f64`.
pub type State = tensor::QuantumState<f64>;
/// Covariance data of a set of observables over `f64`.
pub type CovarianceWitness = tensor::CovarianceWitness<f64>;
/// Per-party observable over `f64`.
pub type Observable = observables::DichotomicObservable<f64>;
/// Two observables per party over `f64`.
pub type Scenario = observables::MeasurementScenario<f64>;
/// Computed bound over `f64`.
pub type BoundReport = bounds::BoundReport<f64>;
