pub mod config;
pub mod error;
pub mod group_algebra;
pub mod hecke;
pub mod kl;
pub mod linalg;
pub mod module;
pub mod multiplicity;
pub mod params;
pub mod rational_function;
pub mod scalar;
pub mod verify;
pub mod weyl;
pub mod whittaker;

pub use error::{Error, Result};
pub use group_algebra::GroupAlgebraElement;
pub use rational_function::RationalFunction;
pub use scalar::{rat, Rational, Scalar};
pub use weyl::{ExtendedWeylElement, Perm};
pub use hecke::HeckeElement;
pub use params::{EnhancedParameter, Multisegment, Point, Rho, Segment};
pub use config::WorkbenchConfig;
