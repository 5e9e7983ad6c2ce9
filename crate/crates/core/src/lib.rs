//! Counting collisions, contacts and symmetric pairwise interactions.
//!
//! - [`lattice`]: linear-time collision and contact counters for beads on a
//!   bounded integer lattice, with quadratic oracles.
//! - [`schedule`]: the balanced circular enumeration of all unordered pairs.
//! - [`spi`]: sequential and parallel pairwise accumulation over either schedule.
//! - [`generators`]: seeded random chains, normal clouds and sphere sets.

pub mod error;
pub mod generators;
pub mod lattice;
pub mod schedule;
pub mod spi;

pub use error::{Error, Result};
pub use generators::{normal_cloud, random_chain, random_spheres, Chain, Seed};
pub use lattice::{oracle_collisions, oracle_contacts, Bead, CountReport, LatticeSpace, ManagedSpace};
pub use schedule::{first_violation_step, pairs, reach, reached, steps_for, PairSchedule};
pub use spi::{
    collision_indicator, spi_balanced, spi_parallel, spi_standard, Contribution, Schedule,
    SpiResult, Sphere,
};
