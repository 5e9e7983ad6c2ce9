use std::fmt;
use std::path::PathBuf;

use paircount_core::Schedule;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    LinearVsQuadratic,
    Realloc,
    Locality,
    Spi,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::LinearVsQuadratic => "linear-vs-quadratic",
            Experiment::Realloc => "realloc",
            Experiment::Locality => "locality",
            Experiment::Spi => "spi",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How large a lattice the chain experiments allocate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtentPolicy {
    /// Largest coordinate actually reached by the execution's chains.
    Tight,
    /// `n - 1`, enough for any chain of `n` beads starting at the origin.
    Chain,
}

impl ExtentPolicy {
    pub fn half_extent(&self, n: usize, reached: u32) -> u32 {
        match self {
            ExtentPolicy::Tight => reached,
            ExtentPolicy::Chain => u32::try_from(n.saturating_sub(1)).unwrap_or(u32::MAX),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub experiment: Experiment,
    pub sizes: Vec<usize>,
    /// Bead or sphere vectors counted per timed execution.
    pub vectors: usize,
    pub repetitions: u32,
    pub seed: u64,
    /// Reallocation periods; the first one is used outside the realloc sweep.
    pub realloc_every: Vec<u64>,
    pub workers: usize,
    /// `None` times both schedules.
    pub schedule: Option<Schedule>,
    pub std_devs: Vec<f64>,
    pub box_edge: f64,
    pub extent: ExtentPolicy,
    pub warmup: bool,
    pub out: Option<PathBuf>,
}

pub const DEFAULT_SEED: u64 = 20190612;

impl BenchConfig {
    /// Desk-scale defaults for each experiment.
    pub fn defaults(experiment: Experiment) -> Self {
        let base = Self {
            experiment,
            sizes: vec![64, 128, 256, 512, 1024],
            vectors: 100,
            repetitions: 10,
            seed: DEFAULT_SEED,
            realloc_every: vec![0],
            workers: 1,
            schedule: None,
            std_devs: vec![1e-9, 1.0, 4.0, 16.0, 64.0],
            box_edge: 20.0,
            extent: ExtentPolicy::Tight,
            warmup: true,
            out: None,
        };
        match experiment {
            Experiment::LinearVsQuadratic => base,
            Experiment::Realloc => Self {
                sizes: vec![256],
                vectors: 1000,
                realloc_every: vec![1, 10, 100, 1000, 0],
                extent: ExtentPolicy::Chain,
                ..base
            },
            Experiment::Locality => Self {
                sizes: vec![1000],
                ..base
            },
            Experiment::Spi => Self {
                sizes: vec![1000, 1001, 4096, 4097],
                vectors: 10,
                repetitions: 5,
                workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
                ..base
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(CliError::Config(msg.to_owned()));
        if self.sizes.is_empty() {
            return fail("at least one problem size is required");
        }
        if self.sizes.contains(&0) {
            return fail("problem sizes must be positive");
        }
        if self.repetitions == 0 {
            return fail("repetitions must be at least 1");
        }
        if self.vectors == 0 {
            return fail("vectors per execution must be at least 1");
        }
        if self.workers == 0 {
            return fail("worker count must be at least 1");
        }
        if self.realloc_every.is_empty() {
            return fail("at least one reallocation period is required");
        }
        if self.std_devs.is_empty() || self.std_devs.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
            return fail("standard deviations must be positive and finite");
        }
        if !(self.box_edge > 0.0 && self.box_edge.is_finite()) {
            return fail("box edge must be positive and finite");
        }
        Ok(())
    }

    pub fn schedules(&self) -> Vec<Schedule> {
        match self.schedule {
            Some(s) => vec![s],
            None => Schedule::ALL.to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        for e in [
            Experiment::LinearVsQuadratic,
            Experiment::Realloc,
            Experiment::Locality,
            Experiment::Spi,
        ] {
            BenchConfig::defaults(e).validate().unwrap();
        }
    }

    #[test]
    fn rejects_bad_values() {
        let base = BenchConfig::defaults(Experiment::LinearVsQuadratic);
        let cases = [
            BenchConfig { sizes: vec![], ..base.clone() },
            BenchConfig { repetitions: 0, ..base.clone() },
            BenchConfig { workers: 0, ..base.clone() },
            BenchConfig { std_devs: vec![-1.0], ..base.clone() },
            BenchConfig { box_edge: 0.0, ..base.clone() },
        ];
        for c in cases {
            assert_eq!(c.validate().unwrap_err().exit_code(), 2);
        }
    }

    #[test]
    fn extent_policies() {
        assert_eq!(ExtentPolicy::Tight.half_extent(100, 12), 12);
        assert_eq!(ExtentPolicy::Chain.half_extent(100, 12), 99);
        assert_eq!(ExtentPolicy::Chain.half_extent(1, 0), 0);
    }
}
