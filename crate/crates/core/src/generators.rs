//! Seeded input generators for the three benchmark input families.
//!
//! All randomness comes from ChaCha8 seeded with [`ChaCha8Rng::seed_from_u64`],
//! whose stream is specified independently of platform and word size. Normal
//! deviates use the Box-Muller transform on that stream rather than a
//! library sampler, so generated inputs depend only on the seed.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::Bead;
use crate::spi::Sphere;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Seed(pub u64);

impl Seed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// Independent seed for the `index`-th item of a batch.
    pub fn derive(self, index: u64) -> Seed {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(index);
        Seed(rng.random())
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

/// A random walk on the lattice starting at the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub beads: Vec<Bead>,
    /// Largest absolute coordinate reached; the smallest valid half-extent.
    pub half_extent: u32,
}

const DIRECTIONS: [(i32, i32, i32); 6] = [
    (1, 0, 0),
    (-1, 0, 0),
    (0, 1, 0),
    (0, -1, 0),
    (0, 0, 1),
    (0, 0, -1),
];

/// Chain of `n` beads: the first at the origin, each next one a unit step
/// along one of the six axis directions, chosen uniformly. Self-intersections
/// are allowed.
pub fn random_chain(n: usize, seed: Seed) -> Result<Chain> {
    if n == 0 {
        return Err(Error::InvalidParameter("chain length must be at least 1"));
    }
    let mut rng = seed.rng();
    let mut beads = Vec::with_capacity(n);
    let mut current = Bead::ORIGIN;
    let mut half_extent = 0;
    beads.push(current);
    for _ in 1..n {
        let (dx, dy, dz) = DIRECTIONS[rng.random_range(0..DIRECTIONS.len())];
        current = current.translated(dx, dy, dz);
        half_extent = half_extent.max(current.max_abs());
        beads.push(current);
    }
    Ok(Chain { beads, half_extent })
}

// Box-Muller, keeping both deviates.
struct Gaussian {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl Gaussian {
    fn new(seed: Seed) -> Self {
        Self {
            rng: seed.rng(),
            spare: None,
        }
    }

    fn next(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // u1 in (0, 1] keeps ln finite
        let u1 = 1.0 - self.rng.random::<f64>();
        let u2 = self.rng.random::<f64>();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = TAU * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }
}

/// `n` beads with coordinates drawn from Normal(0, std_dev), rounded to the
/// nearest integer and clamped to `[-half_extent, half_extent]`.
pub fn normal_cloud(n: usize, std_dev: f64, half_extent: u32, seed: Seed) -> Result<Vec<Bead>> {
    if !(std_dev > 0.0 && std_dev.is_finite()) {
        return Err(Error::InvalidParameter("standard deviation must be positive and finite"));
    }
    if half_extent >= i32::MAX as u32 {
        return Err(Error::InvalidParameter("half-extent does not fit a lattice coordinate"));
    }
    let bound = f64::from(half_extent);
    let mut gauss = Gaussian::new(seed);
    let mut coord = || (gauss.next() * std_dev).round().clamp(-bound, bound) as i32;
    Ok((0..n)
        .map(|_| {
            let x = coord();
            let y = coord();
            let z = coord();
            Bead::new(x, y, z)
        })
        .collect())
}

/// `n` unit spheres with centers uniform in `[0, box_edge]^3`.
pub fn random_spheres(n: usize, box_edge: f64, seed: Seed) -> Result<Vec<Sphere>> {
    if !(box_edge > 0.0 && box_edge.is_finite()) {
        return Err(Error::InvalidParameter("box edge must be positive and finite"));
    }
    let mut rng = seed.rng();
    (0..n)
        .map(|_| {
            let x = rng.random::<f64>() * box_edge;
            let y = rng.random::<f64>() * box_edge;
            let z = rng.random::<f64>() * box_edge;
            Sphere::new(x, y, z)
        })
        .collect()
}
