//! Numerics for the SYZ duality of the `A_n` smoothing `uv = h(z)`.

pub mod cubature;
pub mod disks;
pub mod dual;
pub mod error;
pub mod geometry;
pub mod mirror;
pub mod mc;
pub mod params;
pub mod psi;
pub mod toric;
pub mod valuation;
pub mod wall_crossing;

pub use error::{Result, SyzError};
pub use params::ParamSet;
pub use psi::BasePoint;
pub use valuation::{ExtReal, NovikovNum};
