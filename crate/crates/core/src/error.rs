//! Crate-wide error type. Degenerate thermodynamic inputs are rejected, never
//! clamped, so every consumer sees the failure at its source.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Adiabatic exponent outside the supported range (1, 2].
    #[error("invalid adiabatic exponent gamma = {0}; require 1 < gamma <= 2")]
    InvalidGamma(f64),

    /// Non-admissible thermodynamic input (rho <= 0, p <= 0, e_int <= 0, ...).
    #[error("non-physical state: {what} = {value}")]
    NonPhysical { what: &'static str, value: f64 },

    /// Non-admissible cell detected while scanning a field (cell index attached).
    #[error("non-physical state in cell {cell}: {what} = {value}")]
    NonPhysicalCell {
        cell: usize,
        what: &'static str,
        value: f64,
    },

    /// Initial states violate the pressure-positivity condition of the exact
    /// Riemann solver: 2(c_L + c_R)/(gamma - 1) must exceed u_R - u_L.
    #[error(
        "vacuum formation: velocity jump {du} >= vacuum bound {bound}; \
         the Riemann fan has no positive-pressure solution"
    )]
    VacuumFormation { du: f64, bound: f64 },

    /// Star-pressure iteration failed to meet its residual tolerance.
    #[error("Riemann star-state iteration did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    /// Restriction target is not a divisor of the fine mesh along some axis.
    #[error("non-nested meshes: fine n = {fine} is not an integer multiple of coarse n = {coarse} (axis {axis})")]
    NonNestedMesh {
        fine: usize,
        coarse: usize,
        axis: usize,
    },

    /// Fields or meshes that must agree (dim, extents, cell counts) do not.
    #[error("mesh mismatch: {0}")]
    MeshMismatch(String),

    /// A solution monitor floor was crossed during time stepping.
    #[error("monitor violation at t = {t}: {what} = {value} in cell {cell}")]
    MonitorViolation {
        t: f64,
        cell: usize,
        what: &'static str,
        value: f64,
    },

    /// Requested builtin scenario does not exist.
    #[error("unknown scenario '{0}'")]
    UnknownScenario(String),

    /// Scenario document violates the schema (bad key, bad region, bad domain, ...).
    #[error("scenario schema: {0}")]
    ScenarioSchema(String),

    /// Invalid run or CLI configuration outside the scenario schema.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Field-dump text that does not parse back into a field.
    #[error("dump parse: {0}")]
    DumpParse(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code class: 2 config/schema, 3 runtime failure, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::VacuumFormation { .. }
            | Error::NoConvergence { .. }
            | Error::MonitorViolation { .. }
            | Error::NonPhysical { .. }
            | Error::NonPhysicalCell { .. } => 3,
            Error::Io(_) | Error::DumpParse(_) => 4,
            _ => 2,
        }
    }
}
