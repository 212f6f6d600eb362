//! Fractional integrals generated by the hyperplane, transversal and parabolic
//! Radon transforms, with the numerical machinery to evaluate and audit them.

pub mod error;
pub mod estimates;
pub mod frac1d;
pub mod fracradon;
pub mod functions;
pub mod grid;
pub mod special;
pub mod spectral;
pub mod transforms;

pub use error::{Error, Result};
pub use functions::{PointFn, TestFunction};
pub use grid::{Grid1D, GridND, SampledField};
pub use num_complex::Complex64;
