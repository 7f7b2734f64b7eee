//! Simulation and numerical verification for a removal-driven thinning
//! particle system.
//!
//! The system consists of `n` particles on the positive half-line drifting
//! left at unit speed. Each time a particle reaches the origin it is removed
//! together with a uniformly chosen companion. This crate provides
//!
//! - the exactly solvable kinetic limit of the process ([`kinetic`]),
//! - an event-driven simulator for the finite-`n` process ([`particle`]),
//! - exact and Monte Carlo analysis of the associated diminishing urn
//!   ([`urn`]),
//! - uniform thinning of point sets and the Maurey-type tail bound
//!   ([`thinning`]),
//! - the bounded-Lipschitz metric between discrete measures ([`metrics`]),
//! - a replica harness that checks every concentration bound and regularity
//!   estimate at desk scale ([`harness`]).
//!
//! Experiments are registered by name behind the [`harness::Experiment`]
//! trait and selected at runtime through the CLI or an
//! [`harness::ExperimentConfig`].

pub mod density;
pub mod error;
pub mod harness;
pub mod kinetic;
pub mod metrics;
pub mod particle;
pub mod stream;
pub mod thinning;
pub mod urn;

pub use density::InitialDensity;
pub use error::Error;
pub use kinetic::KineticSolution;
pub use metrics::DiscreteMeasure;
pub use particle::{LossPath, Trajectory};
pub use urn::{UrnDistribution, UrnSpec};
