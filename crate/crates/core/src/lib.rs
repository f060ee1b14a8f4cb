//! Integral means spectra of rational and model univalent maps.
//!
//! The crate is organised bottom-up:
//!
//! * [`poly`] and [`roots`]: complex polynomials, rational functions and a
//!   multiplicity-aware root finder.
//! * [`classifier`]: boundary pole/critical-point classification and the
//!   closed-form spectrum.
//! * [`ims`]: numerical integral means and the radial slope estimator.
//! * [`schwarzian`]: pre-Schwarzian/Schwarzian derivatives and weighted sup norms.
//! * [`bergman`]: weighted Bergman norms and the multiplier lower bound for
//!   the Schwarzian of the Koebe function.
//! * [`oracles`]: independent reference computations used for cross-checks.
//! * [`catalog`]: the named function catalog with expected facts.
//! * [`verify`]: the acceptance checks shared by the CLI and the test suite.

// Guards like `!(x > 0.0)` are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bergman;
pub mod catalog;
pub mod classifier;
pub mod config;
pub mod error;
pub mod ims;
pub mod numerics;
pub mod oracles;
pub mod output;
pub mod poly;
pub mod roots;
pub mod schwarzian;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
