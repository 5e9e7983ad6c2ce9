use thiserror::Error;

use crate::lattice::Bead;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("lattice with half-extent {half_extent} does not fit in addressable memory")]
    SpaceTooLarge { half_extent: u32 },

    #[error("failed to allocate {cells} lattice cells")]
    AllocationFailed { cells: usize },

    #[error("bead #{index} at {bead} lies outside [-{half_extent}, {half_extent}]^3")]
    CoordinateOutOfRange {
        index: usize,
        bead: Bead,
        half_extent: u32,
    },

    #[error("occupancy counter overflow at bead #{index} ({bead})")]
    CounterOverflow { index: usize, bead: Bead },

    #[error("contact accumulator {0} is odd; every contact must be seen from both ends")]
    OddContactAccumulator(u64),

    #[error("schedule over zero objects is empty")]
    EmptyDomain,

    #[error("index {index} out of range for {n} objects")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("step must be at least 1")]
    ZeroStep,

    #[error("violation step is only defined for odd n >= 3, got {0}")]
    NoViolationStep(usize),

    #[error("interaction of pair ({i}, {j}) is not finite")]
    NonFiniteInteraction { i: usize, j: usize },

    #[error("interaction is asymmetric on pair ({i}, {j})")]
    AsymmetricInteraction { i: usize, j: usize },

    #[error("sphere coordinates must be finite, got ({x}, {y}, {z})")]
    NonFiniteSphere { x: f64, y: f64, z: f64 },

    #[error("worker count must be at least 1")]
    NoWorkers,

    #[error("worker {0} panicked")]
    WorkerPanicked(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
