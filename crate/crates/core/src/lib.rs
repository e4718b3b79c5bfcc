//! Simulation and inference for stationary planar point processes, with and
//! without conditioning on the number of points in the observation window.
//!
//! The crate covers four models (Poisson, log-Gaussian Cox, Strauss and the
//! Gaussian determinantal point process), border-corrected estimators of the
//! `K`, `F`, `G` and `J` summary functions, extreme rank length global
//! envelopes, and the estimators usually paired with each model (plug-in
//! intensity, minimum contrast on `K`, maximum pseudo-likelihood).
//!
//! The crate is `no_std` and only needs `alloc`. All floating point maths goes
//! through `libm`, so a given [`SeedSpec`] reproduces the same output on every
//! target.
//!
//! ```
//! use spatcond::{samplers, summaries, RGrid, SeedSpec, Window};
//! use spatcond::models::PoissonParams;
//!
//! let w = Window::unit();
//! let x = samplers::sample_poisson(&PoissonParams::new(100.0).unwrap(), &w, SeedSpec::new(7, 0));
//! let k = summaries::estimate_k(&x, &RGrid::linspace(0.0, 0.1, 11).unwrap()).unwrap();
//! assert_eq!(k.values().len(), 11);
//! ```

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod cells;
mod error;
mod linalg;
mod math;
mod optim;
mod quad;

pub mod envelopes;
pub mod estimation;
pub mod geom;
pub mod models;
pub mod samplers;
pub mod seed;
pub mod stats;
pub mod summaries;

pub use error::{Error, Result};
pub use geom::{Point, PointPattern, RGrid, Window};
pub use seed::{SeedSpec, SimRng};
