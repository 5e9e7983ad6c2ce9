//! Balanced circular enumeration of all unordered pairs of `n` indices.
//!
//! Instead of pairing `i` with every `j > i` (which gives index 0 `n-1`
//! partners and the last index none), every index `i` walks forward around a
//! ring of size `n`, pairing with `i+1, i+2, ...` modulo `n`. For odd `n`,
//! stopping after `(n-1)/2` steps covers every pair exactly once: step
//! `(n+1)/2` would be the first to revisit a pair. For even `n`, all indices
//! take `n/2 - 1` steps and the first half takes one more; at step `n/2` the
//! two members of each antipodal pair sit in different halves, so only one of
//! them evaluates it.

use std::ops::Range;

use crate::error::{Error, Result};

fn check_index(n: usize, i: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptyDomain);
    }
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    Ok(())
}

/// Index evaluated by `i` at step `s`: `(i + s) mod n`.
pub fn reach(n: usize, i: usize, s: usize) -> Result<usize> {
    check_index(n, i)?;
    if s == 0 {
        return Err(Error::ZeroStep);
    }
    let d = s % n;
    Ok(if i >= n - d { i - (n - d) } else { i + d })
}

/// Index that evaluates `i` at step `s`: `(i - s) mod n`, in `[0, n)`.
pub fn reached(n: usize, i: usize, s: usize) -> Result<usize> {
    check_index(n, i)?;
    if s == 0 {
        return Err(Error::ZeroStep);
    }
    let d = s % n;
    Ok(if i >= d { i - d } else { n - d + i })
}

/// Number of inner steps outer index `i` executes.
pub fn steps_for(n: usize, i: usize) -> Result<usize> {
    check_index(n, i)?;
    Ok(steps_unchecked(n, i))
}

#[inline]
fn steps_unchecked(n: usize, i: usize) -> usize {
    if n % 2 == 1 {
        (n - 1) / 2
    } else if i < n / 2 {
        n / 2
    } else {
        n / 2 - 1
    }
}

/// All pairs in schedule order, oriented as `(i, (i + s) mod n)`.
pub fn pairs(n: usize) -> Result<Vec<(usize, usize)>> {
    Ok(PairSchedule::new(n)?.pairs().collect())
}

/// First step at which continuing the odd-`n` walk would evaluate a pair a
/// second time, namely `(n + 1) / 2`.
pub fn first_violation_step(n: usize) -> Result<usize> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::NoViolationStep(n));
    }
    Ok(n.div_ceil(2))
}

/// The balanced schedule for a fixed object count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairSchedule {
    n: usize,
}

impl PairSchedule {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyDomain);
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Inner steps of outer index `i`. Panics if `i >= n`.
    pub fn steps(&self, i: usize) -> usize {
        assert!(i < self.n, "index {i} out of range for {} objects", self.n);
        steps_unchecked(self.n, i)
    }

    pub fn max_steps(&self) -> usize {
        self.steps(0)
    }

    pub fn min_steps(&self) -> usize {
        self.steps(self.n - 1)
    }

    /// Total inner steps over all outer indices; always `n(n-1)/2`.
    pub fn total_steps(&self) -> usize {
        (0..self.n).map(|i| self.steps(i)).sum()
    }

    /// Inner steps summed over the contiguous outer range.
    pub fn steps_in(&self, outer: std::ops::Range<usize>) -> usize {
        outer.map(|i| self.steps(i)).sum()
    }

    /// Partners of outer index `i`, in step order.
    pub fn partners(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let n = self.n;
        (1..=self.steps(i)).map(move |s| (i + s) % n)
    }

    /// Partners of `i` as at most two contiguous index ranges, in step order:
    /// the run up to the end of the ring, then the wrapped run from 0.
    pub fn partner_ranges(&self, i: usize) -> (Range<usize>, Range<usize>) {
        let end = i + self.steps(i) + 1;
        (i + 1..end.min(self.n), 0..end.saturating_sub(self.n))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| self.partners(i).map(move |j| (i, j)))
    }
}
