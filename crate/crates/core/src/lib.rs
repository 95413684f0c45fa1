//! Numerical laboratory for Bayesian posterior consistency in oscillatory
//! parametric density models.
//!
//! The crate evaluates and samples a small set of parametric families built
//! around the cosine model on `[0, 1]`, measures distances between them
//! (Hellinger, KL, total variation, Levy), decomposes exceedance sets into
//! minimal interval unions, builds quadrature posteriors over the parameter
//! with several prior classes, searches for likelihood peaks via simultaneous
//! rational approximation, and drives seeded Monte Carlo experiments that
//! emit CSV artifacts.

pub mod error;
pub mod harness;
pub mod inference;
pub mod metrics;
pub mod mle;
pub mod model;
pub mod oscillations;
pub mod quad;
pub mod rng;

pub use error::{Error, Result};
pub use model::{FamilySpec, SampleSet, Theta};
pub use quad::QuadratureConfig;
