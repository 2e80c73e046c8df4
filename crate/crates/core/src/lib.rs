//! Minimum-error discrimination between two quantum states.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: dense complex matrices, a cyclic Jacobi Hermitian eigensolver,
//!   trace norm, determinant and two-qubit partial trace.
//! - [`helstrom`]: the general two-hypothesis solution. Builds
//!   `Λ = p2·ρ2 − p1·ρ1`, reads the minimum error probability off its spectrum
//!   and assembles the optimal detection operators.
//! - [`filtering`]: closed forms for a pure state against a uniform mixture of
//!   `d` orthonormal states with prior `p1 = 1/(d+1)`, together with the
//!   unambiguous-filtering failure probability used as a benchmark.
//! - [`twoqubit`]: the two-qubit specialisation, comparing collective
//!   measurements with local single-qubit measurements.
//! - [`sampling`]: Haar-random states, orthonormal sets, ensembles and POVMs.
//! - [`cli`]: problem files, reports and the command implementations behind
//!   the `qdiscrim` binary.
//!
//! Every public operation is a pure function of immutable inputs.

pub mod cli;
pub mod error;
pub mod filtering;
pub mod helstrom;
pub mod linalg;
pub mod sampling;
pub mod tolerance;
pub mod twoqubit;

pub use error::{Error, Result};
pub use filtering::FilteringProblem;
pub use helstrom::{DiscriminationResult, Ensemble, Strategy};
pub use linalg::{ComplexMatrix, ComplexVector, EigenDecomposition, Subsystem};
pub use tolerance::Tolerances;
pub use twoqubit::{LocalLambda, OrthonormalSet, TwoQubitState};

pub use num_complex::Complex64;
