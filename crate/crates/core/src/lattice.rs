//! Dense-lattice collision and contact counting.
//!
//! Beads live on the integer cube `S^3 = {-a, ..., a}^3`. A [`LatticeSpace`]
//! stores one occupancy counter per coordinate, so counting coincident or
//! axially adjacent beads is a single pass over the bead vector instead of a
//! pairwise comparison.
//!
//! The cell array carries one cell of zero padding on every face. Logical
//! coordinate `(x, y, z)` lives at physical `(x+a+1, y+a+1, z+a+1)` in a flat
//! row-major block, so the six neighbor reads done while counting contacts
//! never leave the allocation, even for beads on the boundary.
//!
//! Only cells that actually receive a bead are ever written. They are recorded
//! in a touched list and zeroed again by [`LatticeSpace::reset_sparse`], which
//! keeps the physical memory touched per vector proportional to its length even
//! though the virtual allocation is cubic in the half-extent.

use std::alloc::{self, Layout};
use std::fmt;

use crate::error::{Error, Result};

/// A point object on the integer lattice.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bead {
    pub x: i32,
    pub y: i32,
    pub z: i32,
}

impl Bead {
    pub const ORIGIN: Bead = Bead { x: 0, y: 0, z: 0 };

    pub const fn new(x: i32, y: i32, z: i32) -> Self {
        Self { x, y, z }
    }

    /// Largest absolute coordinate, i.e. the smallest half-extent that holds this bead.
    pub fn max_abs(&self) -> u32 {
        self.x
            .unsigned_abs()
            .max(self.y.unsigned_abs())
            .max(self.z.unsigned_abs())
    }

    pub fn translated(&self, dx: i32, dy: i32, dz: i32) -> Self {
        Self::new(self.x + dx, self.y + dy, self.z + dz)
    }

    pub fn is_collision(&self, other: &Bead) -> bool {
        self == other
    }

    /// True when the two beads sit one unit apart along exactly one axis.
    pub fn is_contact(&self, other: &Bead) -> bool {
        let dx = (i64::from(self.x) - i64::from(other.x)).abs();
        let dy = (i64::from(self.y) - i64::from(other.y)).abs();
        let dz = (i64::from(self.z) - i64::from(other.z)).abs();
        dx + dy + dz == 1
    }
}

impl fmt::Display for Bead {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl From<(i32, i32, i32)> for Bead {
    fn from((x, y, z): (i32, i32, i32)) -> Self {
        Self::new(x, y, z)
    }
}

/// Result of one counting pass.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CountReport {
    /// Collisions or contacts, as unordered bead pairs.
    pub count: u64,
    pub beads_processed: usize,
    /// Upper bound on the distinct cells read or written by the pass.
    pub cells_touched: usize,
    /// Raw accumulator before any final division. Equals `count` for
    /// collisions and `2 * count` for contacts.
    pub accumulator: u64,
}

/// Dense occupancy counters over `{-a-1, ..., a+1}^3`, the outer shell being padding.
pub struct LatticeSpace {
    half_extent: u32,
    side: usize,
    cells: Vec<u32>,
    touched: Vec<usize>,
}

impl fmt::Debug for LatticeSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LatticeSpace")
            .field("half_extent", &self.half_extent)
            .field("side", &self.side)
            .field("touched", &self.touched.len())
            .finish()
    }
}

/// Number of cells, padding included, that a space of this half-extent allocates.
pub fn total_cells_for(half_extent: u32) -> Result<usize> {
    let too_large = Error::SpaceTooLarge { half_extent };
    if half_extent >= i32::MAX as u32 {
        return Err(too_large);
    }
    let side = usize::try_from(half_extent)
        .ok()
        .and_then(|a| a.checked_mul(2))
        .and_then(|a| a.checked_add(3))
        .ok_or_else(|| too_large.clone())?;
    let total = side
        .checked_mul(side)
        .and_then(|sq| sq.checked_mul(side))
        .ok_or_else(|| too_large.clone())?;
    // Layout::array would reject this later; report it as a sizing error instead.
    if total > isize::MAX as usize / std::mem::size_of::<u32>() {
        return Err(too_large);
    }
    Ok(total)
}

/// Number of addressable cells `(2a+1)^3`, excluding padding.
pub fn interior_cells_for(half_extent: u32) -> u128 {
    let side = 2 * u128::from(half_extent) + 1;
    side * side * side
}

// Zero-filled through the allocator so the OS can hand out lazily mapped
// pages; only cells that are written ever become resident.
fn zeroed_cells(len: usize) -> Result<Vec<u32>> {
    let layout = Layout::array::<u32>(len).map_err(|_| Error::AllocationFailed { cells: len })?;
    assert!(layout.size() > 0);
    // SAFETY: the layout has non-zero size.
    let ptr = unsafe { alloc::alloc_zeroed(layout) }.cast::<u32>();
    if ptr.is_null() {
        return Err(Error::AllocationFailed { cells: len });
    }
    // SAFETY: `ptr` was allocated by the global allocator with the layout of
    // `[u32; len]`, which is exactly what `Vec<u32>` with capacity `len` uses,
    // and all-zero bytes are a valid `u32`.
    Ok(unsafe { Vec::from_raw_parts(ptr, len, len) })
}

impl LatticeSpace {
    pub fn new(half_extent: u32) -> Result<Self> {
        let total = total_cells_for(half_extent)?;
        let side = 2 * half_extent as usize + 3;
        Ok(Self {
            half_extent,
            side,
            cells: zeroed_cells(total)?,
            touched: Vec::new(),
        })
    }

    pub fn half_extent(&self) -> u32 {
        self.half_extent
    }

    /// Cells per axis, padding included.
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn total_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn interior_cells(&self) -> u128 {
        interior_cells_for(self.half_extent)
    }

    /// Flat indices of the cells written since the last reset.
    pub fn touched(&self) -> &[usize] {
        &self.touched
    }

    pub fn contains(&self, bead: &Bead) -> bool {
        bead.max_abs() <= self.half_extent
    }

    /// Occupancy at a logical coordinate. Padding coordinates (`|c| = a+1`)
    /// are readable; anything further out is `None`.
    pub fn occupancy(&self, x: i64, y: i64, z: i64) -> Option<u32> {
        let bound = i64::from(self.half_extent) + 1;
        if [x, y, z].iter().any(|c| c.abs() > bound) {
            return None;
        }
        let shift = |c: i64| (c + bound) as usize;
        Some(self.cells[(shift(x) * self.side + shift(y)) * self.side + shift(z)])
    }

    /// True when every cell, padding included, is zero. Scans the whole array.
    pub fn is_zeroed(&self) -> bool {
        self.cells.iter().all(|&c| c == 0)
    }

    #[inline]
    fn flat_index(&self, bead: &Bead) -> usize {
        let shift = |c: i32| (i64::from(c) + i64::from(self.half_extent) + 1) as usize;
        (shift(bead.x) * self.side + shift(bead.y)) * self.side + shift(bead.z)
    }

    #[inline]
    fn checked_index(&self, index: usize, bead: &Bead) -> Result<usize> {
        if !self.contains(bead) {
            return Err(Error::CoordinateOutOfRange {
                index,
                bead: *bead,
                half_extent: self.half_extent,
            });
        }
        Ok(self.flat_index(bead))
    }

    // Adds every bead to its cell. Returns the number of cells that went from
    // empty to occupied, plus the collision accumulator as a by-product.
    fn place(&mut self, beads: &[Bead]) -> Result<(usize, u64)> {
        let mut fresh = 0;
        let mut collisions = 0u64;
        for (index, bead) in beads.iter().enumerate() {
            let cell = self.checked_index(index, bead)?;
            let count = self.cells[cell];
            if count == 0 {
                self.touched.push(cell);
                fresh += 1;
            }
            collisions += u64::from(count);
            self.cells[cell] = count
                .checked_add(1)
                .ok_or(Error::CounterOverflow { index, bead: *bead })?;
        }
        Ok((fresh, collisions))
    }

    /// Counts unordered pairs of beads at the same coordinate.
    ///
    /// Each bead adds the number of beads already in its cell, then joins it.
    /// The space must be zeroed beforehand and is left populated; call
    /// [`reset_sparse`](Self::reset_sparse) before reusing it, also after an
    /// error.
    pub fn count_collisions(&mut self, beads: &[Bead]) -> Result<CountReport> {
        let (fresh, collisions) = self.place(beads)?;
        Ok(CountReport {
            count: collisions,
            beads_processed: beads.len(),
            cells_touched: fresh,
            accumulator: collisions,
        })
    }

    /// Counts unordered pairs of beads one unit apart along a single axis.
    ///
    /// All beads are placed first; then each bead sums the occupancy of its
    /// six axial neighbors. Every contact is seen from both ends, so the sum
    /// is halved. Beads sharing a cell are not contacts of each other.
    pub fn count_contacts(&mut self, beads: &[Bead]) -> Result<CountReport> {
        let (fresh, _) = self.place(beads)?;
        let step_y = self.side;
        let step_x = self.side * self.side;
        let mut accumulator = 0u64;
        for bead in beads {
            let c = self.flat_index(bead);
            let cells = &self.cells;
            accumulator += u64::from(cells[c + step_x])
                + u64::from(cells[c - step_x])
                + u64::from(cells[c + step_y])
                + u64::from(cells[c - step_y])
                + u64::from(cells[c + 1])
                + u64::from(cells[c - 1]);
        }
        if !accumulator.is_multiple_of(2) {
            return Err(Error::OddContactAccumulator(accumulator));
        }
        Ok(CountReport {
            count: accumulator / 2,
            beads_processed: beads.len(),
            // every occupied cell plus the six neighbors read around it
            cells_touched: 7 * fresh,
            accumulator,
        })
    }

    /// Zeroes every cell written since the last reset and returns the number
    /// of cell writes performed.
    ///
    /// `beads` must be the vector last counted into this space. It is only
    /// used to check, in debug builds, that the touched list covered it.
    pub fn reset_sparse(&mut self, beads: &[Bead]) -> usize {
        let writes = self.touched.len();
        for &cell in &self.touched {
            self.cells[cell] = 0;
        }
        self.touched.clear();
        debug_assert!(beads
            .iter()
            .filter(|b| self.contains(b))
            .all(|b| self.cells[self.flat_index(b)] == 0));
        writes
    }

    /// Zeroes the whole array, touching every page.
    pub fn reset_full(&mut self) {
        self.cells.fill(0);
        self.touched.clear();
    }
}

/// A lattice space that resets itself after every count and is freed and
/// reallocated every `realloc_every` counted vectors (0 = never).
#[derive(Debug)]
pub struct ManagedSpace {
    half_extent: u32,
    realloc_every: u64,
    since_alloc: u64,
    reallocations: u64,
    space: Option<LatticeSpace>,
}

impl ManagedSpace {
    pub fn new(half_extent: u32, realloc_every: u64) -> Result<Self> {
        Ok(Self {
            half_extent,
            realloc_every,
            since_alloc: 0,
            reallocations: 0,
            space: Some(LatticeSpace::new(half_extent)?),
        })
    }

    pub fn half_extent(&self) -> u32 {
        self.half_extent
    }

    pub fn total_cells(&self) -> usize {
        total_cells_for(self.half_extent).unwrap_or(usize::MAX)
    }

    /// Number of free-and-reallocate cycles performed so far.
    pub fn reallocations(&self) -> u64 {
        self.reallocations
    }

    fn ready(&mut self) -> Result<&mut LatticeSpace> {
        if self.realloc_every > 0 && self.since_alloc >= self.realloc_every {
            // release before asking for the replacement
            self.space = None;
            self.since_alloc = 0;
            self.reallocations += 1;
        }
        if self.space.is_none() {
            self.space = Some(LatticeSpace::new(self.half_extent)?);
        }
        self.since_alloc += 1;
        Ok(self.space.as_mut().expect("allocated above"))
    }

    pub fn count_collisions(&mut self, beads: &[Bead]) -> Result<CountReport> {
        let space = self.ready()?;
        let report = space.count_collisions(beads);
        space.reset_sparse(beads);
        report
    }

    pub fn count_contacts(&mut self, beads: &[Bead]) -> Result<CountReport> {
        let space = self.ready()?;
        let report = space.count_contacts(beads);
        space.reset_sparse(beads);
        report
    }
}

/// Collision count by comparing every pair.
pub fn oracle_collisions(beads: &[Bead]) -> u64 {
    count_pairs(beads, Bead::is_collision)
}

/// Contact count by comparing every pair.
pub fn oracle_contacts(beads: &[Bead]) -> u64 {
    count_pairs(beads, Bead::is_contact)
}

fn count_pairs(beads: &[Bead], pred: impl Fn(&Bead, &Bead) -> bool) -> u64 {
    let mut count = 0;
    for (i, a) in beads.iter().enumerate() {
        for b in &beads[i + 1..] {
            if pred(a, b) {
                count += 1;
            }
        }
    }
    count
}
