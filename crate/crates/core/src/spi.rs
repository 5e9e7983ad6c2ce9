//! Symmetric pairwise interaction (SPI) accumulation.
//!
//! Computes `sum over i < j of f(obj[i], obj[j])` for a symmetric `f`, either
//! with the triangular loop (`j` from `i+1` to `n-1`) or with the balanced
//! circular schedule from [`crate::schedule`]. The parallel driver splits the
//! outer index range into contiguous blocks, one per worker, and reduces the
//! private partials in ascending worker order, so results are reproducible
//! for a fixed worker count.

use std::fmt;
use std::ops::{Add, Range};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::schedule::PairSchedule;

/// Value type an interaction function may return.
pub trait Contribution: Copy + Default + PartialEq + Add<Output = Self> + Send + fmt::Debug {
    fn is_finite(self) -> bool {
        true
    }
}

impl Contribution for u32 {}
impl Contribution for u64 {}
impl Contribution for i64 {}
impl Contribution for u128 {}

impl Contribution for f32 {
    fn is_finite(self) -> bool {
        f32::is_finite(self)
    }
}

impl Contribution for f64 {
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

/// Which loop nest enumerates the pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Schedule {
    /// Outer index `i` pairs with every `j > i`.
    Standard,
    /// Outer index `i` pairs with the next `steps(i)` indices around the ring.
    Balanced,
}

impl Schedule {
    pub const ALL: [Schedule; 2] = [Schedule::Standard, Schedule::Balanced];

    pub fn name(&self) -> &'static str {
        match self {
            Schedule::Standard => "standard",
            Schedule::Balanced => "balanced",
        }
    }

    /// Inner iterations executed by outer index `i` of `n`.
    pub fn steps(&self, n: usize, i: usize) -> usize {
        match self {
            Schedule::Standard => n - 1 - i,
            Schedule::Balanced => PairSchedule::new(n).map_or(0, |s| s.steps(i)),
        }
    }

    /// Depth when every outer index runs on its own worker: `n-1` for the
    /// triangular loop, `ceil((n-1)/2)` for the balanced one.
    pub fn depth(&self, n: usize) -> u64 {
        let depth = match self {
            Schedule::Standard => n.saturating_sub(1),
            Schedule::Balanced => n / 2,
        };
        depth as u64
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Schedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Schedule::Standard),
            "balanced" => Ok(Schedule::Balanced),
            _ => Err(Error::InvalidParameter("schedule must be `standard` or `balanced`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpiResult<V> {
    /// Reduction of `partials` in ascending worker order.
    pub total: V,
    pub partials: Vec<V>,
    pub pairs_evaluated: u64,
    /// Largest number of inner iterations any single outer index executes,
    /// i.e. the depth with one worker per outer index.
    pub depth_per_worker: u64,
    /// Inner iterations actually executed by each worker.
    pub worker_iterations: Vec<u64>,
}

impl<V> SpiResult<V> {
    /// Max minus min of `worker_iterations`.
    pub fn iteration_spread(&self) -> u64 {
        let max = self.worker_iterations.iter().max().copied().unwrap_or(0);
        let min = self.worker_iterations.iter().min().copied().unwrap_or(0);
        max - min
    }
}

/// A point-like sphere of unit diameter with finite center coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sphere {
    x: f64,
    y: f64,
    z: f64,
}

impl Sphere {
    pub const DIAMETER: f64 = 1.0;

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::NonFiniteSphere { x, y, z });
        }
        Ok(Self { x, y, z })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn distance_squared(&self, other: &Sphere) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        dx * dx + dy * dy + dz * dz
    }
}

/// 1 if the centers are strictly closer than one diameter, else 0.
/// Tangent spheres do not collide.
#[inline]
pub fn collision_indicator(a: &Sphere, b: &Sphere) -> u64 {
    u64::from(a.distance_squared(b) < Sphere::DIAMETER * Sphere::DIAMETER)
}

// One worker's share: the outer indices in `outer`, walked with `schedule`.
fn accumulate<T, V, F>(
    objects: &[T],
    f: &F,
    schedule: Schedule,
    outer: Range<usize>,
) -> Result<(V, u64)>
where
    V: Contribution,
    F: Fn(&T, &T) -> V,
{
    let n = objects.len();
    let mut acc = V::default();
    let mut iterations = 0u64;
    let mut visit = |i: usize, j: usize| -> Result<()> {
        let v = f(&objects[i], &objects[j]);
        if !v.is_finite() {
            return Err(Error::NonFiniteInteraction { i, j });
        }
        acc = acc + v;
        iterations += 1;
        Ok(())
    };
    match schedule {
        Schedule::Standard => {
            for i in outer {
                for j in i + 1..n {
                    visit(i, j)?;
                }
            }
        }
        Schedule::Balanced => {
            if n > 0 {
                let ring = PairSchedule::new(n)?;
                for i in outer {
                    let (head, tail) = ring.partner_ranges(i);
                    for j in head {
                        visit(i, j)?;
                    }
                    for j in tail {
                        visit(i, j)?;
                    }
                }
            }
        }
    }
    Ok((acc, iterations))
}

fn sequential<T, V, F>(objects: &[T], f: F, schedule: Schedule) -> Result<SpiResult<V>>
where
    V: Contribution,
    F: Fn(&T, &T) -> V,
{
    debug_audit(objects, &f)?;
    let (total, iterations) = accumulate(objects, &f, schedule, 0..objects.len())?;
    Ok(SpiResult {
        total,
        partials: vec![total],
        pairs_evaluated: iterations,
        depth_per_worker: schedule.depth(objects.len()),
        worker_iterations: vec![iterations],
    })
}

/// Triangular loop: `i` ascending, then `j` from `i + 1` ascending.
pub fn spi_standard<T, V, F>(objects: &[T], f: F) -> Result<SpiResult<V>>
where
    V: Contribution,
    F: Fn(&T, &T) -> V,
{
    sequential(objects, f, Schedule::Standard)
}

/// Balanced circular loop: `i` ascending, then `(i + s) mod n` for `s` ascending.
pub fn spi_balanced<T, V, F>(objects: &[T], f: F) -> Result<SpiResult<V>>
where
    V: Contribution,
    F: Fn(&T, &T) -> V,
{
    sequential(objects, f, Schedule::Balanced)
}

/// Contiguous blocks of outer indices, sizes differing by at most one.
pub fn partition(n: usize, workers: usize) -> Vec<Range<usize>> {
    (0..workers)
        .map(|w| (w * n / workers)..((w + 1) * n / workers))
        .collect()
}

/// Runs `schedule` on `workers` threads, one contiguous outer block each,
/// then sums the partials in worker order.
pub fn spi_parallel<T, V, F>(
    objects: &[T],
    f: F,
    workers: usize,
    schedule: Schedule,
) -> Result<SpiResult<V>>
where
    T: Sync,
    V: Contribution,
    F: Fn(&T, &T) -> V + Sync,
{
    if workers == 0 {
        return Err(Error::NoWorkers);
    }
    debug_audit(objects, &f)?;
    let blocks = partition(objects.len(), workers);

    let outcomes: Vec<Result<(V, u64)>> = if workers == 1 {
        vec![accumulate(objects, &f, schedule, blocks[0].clone())]
    } else {
        let f = &f;
        std::thread::scope(|scope| {
            let handles: Vec<_> = blocks
                .iter()
                .cloned()
                .map(|block| scope.spawn(move || accumulate(objects, f, schedule, block)))
                .collect();
            handles
                .into_iter()
                .enumerate()
                .map(|(w, h)| h.join().unwrap_or(Err(Error::WorkerPanicked(w))))
                .collect()
        })
    };

    let mut partials = Vec::with_capacity(workers);
    let mut worker_iterations = Vec::with_capacity(workers);
    for outcome in outcomes {
        let (partial, iterations) = outcome?;
        partials.push(partial);
        worker_iterations.push(iterations);
    }
    let total = partials.iter().fold(V::default(), |acc, &p| acc + p);
    Ok(SpiResult {
        total,
        partials,
        pairs_evaluated: worker_iterations.iter().sum(),
        depth_per_worker: schedule.depth(objects.len()),
        worker_iterations,
    })
}

/// Probes `samples` random pairs with both argument orders and reports the
/// first pair on which `f` disagrees with itself.
pub fn audit_symmetry<T, V, F>(objects: &[T], f: F, samples: usize, seed: u64) -> Result<()>
where
    V: Contribution,
    F: Fn(&T, &T) -> V,
{
    let n = objects.len();
    if n < 2 {
        return Ok(());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        if i == j {
            continue;
        }
        let (ab, ba) = (f(&objects[i], &objects[j]), f(&objects[j], &objects[i]));
        // NaN is caught by the finiteness check during accumulation
        if ab.is_finite() && ba.is_finite() && ab != ba {
            return Err(Error::AsymmetricInteraction { i: i.min(j), j: i.max(j) });
        }
    }
    Ok(())
}

const DEBUG_AUDIT_SAMPLES: usize = 16;

fn debug_audit<T, V, F>(objects: &[T], f: &F) -> Result<()>
where
    V: Contribution,
    F: Fn(&T, &T) -> V,
{
    if cfg!(debug_assertions) {
        audit_symmetry(objects, f, DEBUG_AUDIT_SAMPLES, objects.len() as u64)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(_: &usize, _: &usize) -> u64 {
        1
    }

    #[test]
    fn empty_and_single() {
        for n in [0usize, 1] {
            let objs: Vec<usize> = (0..n).collect();
            for r in [spi_standard(&objs, unit).unwrap(), spi_balanced(&objs, unit).unwrap()] {
                assert_eq!(r.total, 0);
                assert_eq!(r.pairs_evaluated, 0);
                assert_eq!(r.depth_per_worker, 0);
            }
        }
    }

    #[test]
    fn coincident_spheres_all_collide() {
        let s = vec![Sphere::new(0.5, 0.5, 0.5).unwrap(); 3];
        assert_eq!(spi_standard(&s, collision_indicator).unwrap().total, 3);
        assert_eq!(spi_balanced(&s, collision_indicator).unwrap().total, 3);
    }

    #[test]
    fn unit_weight_counts_pairs() {
        let five: Vec<usize> = (0..5).collect();
        let r = spi_balanced(&five, unit).unwrap();
        assert_eq!((r.total, r.depth_per_worker), (10, 2));

        let four: Vec<usize> = (0..4).collect();
        let r = spi_balanced(&four, unit).unwrap();
        assert_eq!((r.total, r.depth_per_worker), (6, 2));
        let per_index = spi_parallel(&four, unit, 4, Schedule::Balanced).unwrap();
        assert_eq!(per_index.worker_iterations, [2, 2, 1, 1]);

        let r = spi_standard(&four, unit).unwrap();
        assert_eq!((r.total, r.depth_per_worker), (6, 3));
    }

    #[test]
    fn collision_boundary_is_strict() {
        let o = Sphere::new(0.0, 0.0, 0.0).unwrap();
        assert_eq!(collision_indicator(&o, &o), 1);
        assert_eq!(collision_indicator(&o, &Sphere::new(1.0, 0.0, 0.0).unwrap()), 0);
        assert_eq!(collision_indicator(&o, &Sphere::new(0.0, -1.0, 0.0).unwrap()), 0);
        let near = Sphere::new(0.6, 0.0, 0.0).unwrap();
        assert_eq!(collision_indicator(&o, &near), 1);
        assert_eq!(collision_indicator(&near, &o), 1);
    }

    #[test]
    fn non_finite_sphere_rejected() {
        assert!(matches!(
            Sphere::new(f64::NAN, 0.0, 0.0),
            Err(Error::NonFiniteSphere { .. })
        ));
        assert!(Sphere::new(0.0, f64::INFINITY, 0.0).is_err());
    }

    #[test]
    fn non_finite_interaction_names_pair() {
        let objs: Vec<usize> = (0..6).collect();
        let f = |a: &usize, b: &usize| if a + b == 7 { f64::NAN } else { 1.0 };
        assert_eq!(
            spi_standard(&objs, f).unwrap_err(),
            Error::NonFiniteInteraction { i: 2, j: 5 }
        );
        let err = spi_parallel(&objs, f, 3, Schedule::Balanced).unwrap_err();
        assert!(matches!(err, Error::NonFiniteInteraction { .. }));
    }

    #[test]
    fn asymmetry_is_reported() {
        let objs: Vec<i64> = (0..20).collect();
        let err = audit_symmetry(&objs, |a: &i64, b: &i64| a - b, 64, 7).unwrap_err();
        assert!(matches!(err, Error::AsymmetricInteraction { .. }));
        assert!(audit_symmetry(&objs, |a: &i64, b: &i64| a * b, 64, 7).is_ok());
    }

    #[test]
    fn zero_workers_rejected() {
        let objs = [1usize, 2];
        assert_eq!(
            spi_parallel(&objs, unit, 0, Schedule::Standard).unwrap_err(),
            Error::NoWorkers
        );
    }

    #[test]
    fn worker_panic_becomes_error() {
        let objs: Vec<usize> = (0..10).collect();
        // scoped workers are unnamed, the test thread is not
        let f = |a: &usize, _: &usize| -> u64 {
            if *a >= 5 && std::thread::current().name().is_none() {
                panic!("worker failure");
            }
            1
        };
        assert_eq!(
            spi_parallel(&objs, f, 2, Schedule::Standard).unwrap_err(),
            Error::WorkerPanicked(1)
        );
    }

    #[test]
    fn partition_is_contiguous_and_even() {
        let blocks = partition(10, 3);
        assert_eq!(blocks, [0..3, 3..6, 6..10]);
        let blocks = partition(2, 4);
        assert_eq!(blocks.iter().map(|b| b.len()).sum::<usize>(), 2);
    }

    #[test]
    fn schedule_parse() {
        assert_eq!("balanced".parse::<Schedule>().unwrap(), Schedule::Balanced);
        assert!("round-robin".parse::<Schedule>().is_err());
    }
}
