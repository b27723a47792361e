//! Neighborhood systems, colimit ep-metrics and Vietoris–Rips cluster
//! hierarchies, with checkers for excision and interleaving stability.
//!
//! The pipeline is: ambient metric → [`NeighborhoodSystem::knn`] →
//! [`NeighborhoodSystem::weighted`] → star metrics → [`NeighborhoodSystem::umap_metric`]
//! → π₀ filtrations ([`rips`]) → interleaving certificates ([`stability`]).
//! Everything is generic over [`Scalar`], either `f64` or exact [`Rational`].

pub mod dist;
pub mod epmetric;
pub mod error;
pub mod injection;
pub mod io;
pub mod neighborhood;
pub mod partition;
pub mod rips;
pub mod scalar;
pub mod stability;
pub mod synth;
pub mod union_find;

pub use dist::ExtDist;
pub use epmetric::{EpMetric, GlobalPartition, Violation};
pub use error::{Error, Result};
pub use injection::Injection;
pub use neighborhood::{CompatViolation, Compatibility, NeighborhoodSystem, StarMetric, WeightScheme};
pub use partition::Partition;
pub use scalar::{Rational, Scalar};
