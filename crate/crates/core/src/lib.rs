//! Exact open-system dynamics of a classically driven qubit moving through a
//! leaky cavity with a Lorentzian reservoir, and the quantum-speed-limit and
//! non-Markovianity measures built on it.
//!
//! The pipeline is:
//!
//! * [`model`]: physical parameters and derived symbols,
//! * [`kernel`]: reservoir correlation function (finite cavity and continuum),
//! * [`amplitude`]: closed-form survival amplitude from the characteristic cubic,
//! * [`measures`]: speed-limit ratio, non-Markovianity and their identity,
//! * [`oracle`]: independent Volterra time stepping used as ground truth,
//! * [`sweep`], [`config`], [`verify`]: driving-strength sweeps, critical
//!   points, CSV output and self-checks behind the `qslmq` binary.

pub mod amplitude;
pub mod config;
pub mod error;
pub mod kernel;
pub mod measures;
pub mod model;
pub mod oracle;
pub mod poly;
pub mod quad;
pub mod sweep;
pub mod verify;

pub use amplitude::{AmplitudeSolution, QubitState, Rates};
pub use error::{Error, Result};
pub use kernel::{Kernel, KernelKind, MemoryKernel};
pub use measures::EvolutionMetrics;
pub use model::{DerivedQuantities, ModelParams, Regime, TransitTime};
pub use oracle::{ConvergenceOrder, TimeSeries, VolterraConfig};
pub use sweep::{OmegaGrid, RowStatus, SweepCurve, SweepRow, SweepSpec};
