//! Finite-volume laboratory for the multidimensional compressible Euler
//! equations with a gamma-law gas.
//!
//! The crate provides an exact-Riemann-solver Godunov scheme and a simple
//! diffusive comparison scheme on uniform structured meshes, together with
//! relative-energy error diagnostics and a mesh-refinement convergence
//! harness. See the `cli` module (and the `eulerfv` binary) for the user
//! entry points.

pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod gas;
pub mod grid;
pub mod riemann;
pub mod scenarios;
pub mod scheme;
mod util;

pub use error::{Error, Result};
pub use gas::{ConsState, GasLaw, PrimState, ThermoPoint};
pub use grid::{CellField, Lp, StructMesh};
pub use riemann::{RiemannFan, WaveKind, WaveSpan};
pub use scheme::{BoundaryConfig, BoundaryKind, RunConfig, RunOutcome, SchemeKind, StepStats};
pub use util::ExecMode;
