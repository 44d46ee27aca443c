//! Jordan-triple machinery for bounded symmetric domains and Denjoy-Wolff
//! iteration experiments on their unit balls.

pub mod boundary;
pub mod config;
pub mod demos;
pub mod dynamics;
pub mod error;
pub mod horofunction;
pub mod kernel;
pub mod par;
pub mod tolerance;
pub mod verify;

pub use error::{Error, Result};
pub use kernel::{Element, Factor, Kind, Linearity, RealLinOp};
pub use par::Execution;
pub use tolerance::Tolerances;
