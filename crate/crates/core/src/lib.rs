//! Approximation algorithms for multivehicle routing with unit-length time
//! windows.
//!
//! * [`fleet::k_vehicle_greedy`] runs an exact trimmed-window single-vehicle
//!   solver `k` times on the shrinking residual and collects a guaranteed
//!   [`bounds::p_gamma`] fraction of the k-vehicle optimum.
//! * [`fleet::single_repair`] covers every request with six runs on a tree
//!   whenever one vehicle could serve them all, and otherwise certifies that
//!   no such vehicle exists.
//!
//! All times, distances and profits are exact rationals.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod fleet;
pub mod instance;
pub mod oracle;
pub mod ratio;
pub mod repairman;
pub mod schedule;
mod text;
pub mod windows;

pub use error::{Error, Result};
pub use instance::{Instance, MetricKind, NodeId, ReqIdx, Request, Window};
pub use ratio::Ratio;
pub use schedule::{Run, Visit};
