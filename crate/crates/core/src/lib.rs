//! Measure-valued vacuum solutions of one-dimensional Lagrangian gas dynamics
//! and elastodynamics with fracture.

pub mod elasticity;
pub mod error;
pub mod io;
pub mod measure;
pub mod quad;
pub mod scenarios;
pub mod solution;
pub mod thermo;
pub mod verify;
pub mod waves;

pub use error::{Error, Result};
pub use thermo::{beta_of_gamma, GasLaw, SymFields, SymState};
pub use measure::{Atom, Density, RadonMeasure};
pub use solution::PiecewiseSolution;
pub use waves::{riemann_solve, WaveFan};
