//! Parameter sweeps, figure presets, contour extraction and CSV output for the
//! Ising-XXZ diamond chain with one impurity plaquette.
//!
//! ```
//! use diamond_sweep::csv::to_csv_string;
//! use diamond_sweep::run::run_sweep;
//! use diamond_sweep::spec::{Axis, Observable, Param, Params, SweepSpec};
//!
//! let spec = SweepSpec::new(
//!     Params { gamma: 0.8, eta: -0.8, ..Params::default() },
//!     vec![Axis::range(Param::T, 0.1, 1.0, 4).unwrap()],
//!     vec![Observable::Concurrence],
//! );
//! let csv = to_csv_string(&run_sweep(&spec).unwrap()).unwrap();
//! assert!(csv.starts_with("T,h,Delta,alpha,gamma,eta,C_imp,C_ref\n"));
//! assert_eq!(csv.lines().count(), 5);
//! ```

pub mod cli;
pub mod config;
pub mod contour;
pub mod csv;
pub mod error;
pub mod presets;
pub mod run;
pub mod spec;

pub use error::{Result, SweepError};
