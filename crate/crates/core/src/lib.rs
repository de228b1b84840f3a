//! Heat exchange between correlated quantum systems and the noncontextuality
//! bounds that certify when anomalous heat flow has no classical explanation.
//!
//! The crate builds correlated thermal states with Gibbs marginals, evolves
//! them under energy-conserving interactions, evaluates heat both by brute
//! force and in closed form, checks stochastic-reversibility decompositions
//! through Choi matrices and locates the critical times at which the quantum
//! heat leaves the noncontextual interval.
//!
//! ```
//! use contextual_heat::scenario::{builtin_micadei, run_sweep};
//!
//! let mut config = builtin_micadei();
//! config.time_grid.n_points = 5_000;
//! let out = run_sweep(&config).unwrap();
//! assert!((out.critical_times[0] - 1.85e-4).abs() < 1e-5);
//! ```

pub mod contextuality;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod scenario;
pub mod states;
pub mod thermo;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianOp, UnitaryOp, C64};
pub use states::DensityMatrix;
