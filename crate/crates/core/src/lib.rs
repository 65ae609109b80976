//! Invariants, classification and limit analysis of lightcone framed
//! surfaces in Lorentz-Minkowski 3-space.

pub mod catalog;
pub mod classify;
pub mod curvature;
pub mod error;
pub mod expr;
pub mod format;
pub mod limits;
pub mod minkowski;
pub mod surface;
pub mod trace;

pub use error::{Error, Result};
