//! Finite and computably presented generalized metric spaces.
//!
//! * [`space`]: finite spaces over exact rationals, least relaxation
//!   constants for the b-metric, strong b-metric and chain-inequality
//!   classes, balls, `dist` and `δ`.
//! * [`fixed_point`]: the two local fixed-point hypotheses, fixed points,
//!   Picard trajectories.
//! * [`search`]: exhaustive search for spaces and maps satisfying the
//!   hypotheses without a fixed point.
//! * [`completion`]: Cauchy completion of strong b-metric presentations
//!   with interval-valued distances, and a probe showing where the
//!   construction breaks for plain b-metrics.
//! * [`cli`]: the `bmetric` command line.
#![allow(clippy::result_large_err, clippy::needless_range_loop)]

pub mod cli;
pub mod completion;
pub mod demos;
pub mod fixed_point;
pub mod format;
pub mod interval;
pub mod rational;
pub mod search;
pub mod space;

pub use interval::RationalInterval;
pub use rational::Rational;
pub use space::{validate_space, FiniteSpace, PointSet};
