//! Self-check suite behind `paircount verify`.
//!
//! Every check compares the fast path against an independent route and
//! records a deterministic row (no wall times), so two runs with the same
//! seed produce identical CSV.

use paircount_core::lattice::{oracle_collisions, oracle_contacts, Bead, LatticeSpace};
use paircount_core::{
    collision_indicator, spi_balanced, spi_parallel, spi_standard, PairSchedule, Schedule,
};

use crate::error::Result;
use crate::experiments::{verify_chain_batch, verify_sphere_batch};
use crate::record::BenchRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Level {
    /// Sizes up to 257; finishes in seconds.
    Quick,
    /// Sizes up to 2000.
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub records: Vec<BenchRecord>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }
}

struct Plan {
    chain_sizes: Vec<usize>,
    chains_per_size: usize,
    schedule_max: usize,
    violation_max: usize,
    spi_sizes: Vec<usize>,
}

impl Plan {
    fn for_level(level: Level) -> Self {
        match level {
            Level::Quick => Plan {
                chain_sizes: vec![1, 2, 3, 16, 64, 257],
                chains_per_size: 20,
                schedule_max: 257,
                violation_max: 257,
                spi_sizes: vec![0, 1, 2, 3, 4, 5, 16, 17, 64, 65, 128, 129, 256, 257],
            },
            Level::Full => Plan {
                chain_sizes: vec![1, 2, 3, 16, 64, 257, 1024],
                chains_per_size: 500,
                schedule_max: 2000,
                violation_max: 999,
                spi_sizes: (2..=512).step_by(15).chain([511, 512, 1999, 2000]).collect(),
            },
        }
    }
}

const EXP: &str = "verify";
const WORKERS: [usize; 5] = [1, 2, 3, 7, 8];
const SPI_BOX_EDGE: f64 = 4.0;

pub fn run_verify(level: Level, seed: u64) -> Result<VerifyReport> {
    let plan = Plan::for_level(level);
    let mut report = VerifyReport::default();
    lattice_checks(&plan, seed, &mut report)?;
    adversarial_checks(&plan, &mut report)?;
    schedule_checks(&plan, &mut report);
    spi_checks(&plan, seed, &mut report)?;
    Ok(report)
}

fn lattice_checks(plan: &Plan, seed: u64, report: &mut VerifyReport) -> Result<()> {
    for &n in &plan.chain_sizes {
        let chains = verify_chain_batch(seed, n, plan.chains_per_size)?;
        let extent = chains.iter().flatten().map(Bead::max_abs).max().unwrap_or(0);
        let mut space = LatticeSpace::new(extent)?;
        let (mut coll, mut cont, mut touched_coll, mut touched_cont) = (0, 0, 0, 0);
        let mut mismatches = Vec::new();
        let mut over_bound = false;
        for (v, beads) in chains.iter().enumerate() {
            let c = space.count_collisions(beads)?;
            space.reset_sparse(beads);
            let k = space.count_contacts(beads)?;
            space.reset_sparse(beads);
            if c.count != oracle_collisions(beads) {
                mismatches.push(format!("collisions vector {v}"));
            }
            if k.count != oracle_contacts(beads) || k.accumulator % 2 != 0 {
                mismatches.push(format!("contacts vector {v}"));
            }
            over_bound |= c.cells_touched > n || k.cells_touched > 7 * n;
            coll += c.count;
            cont += k.count;
            touched_coll += c.cells_touched as u64;
            touched_cont += k.cells_touched as u64;
        }
        let cells = space.total_cells() as u64;
        report.records.push(BenchRecord::new(EXP, "collisions", n, 0).value(coll).cells(touched_coll, cells));
        report.records.push(BenchRecord::new(EXP, "contacts", n, 0).value(cont).cells(touched_cont, cells));
        report.check(
            format!("lattice-oracle n={n}"),
            mismatches.is_empty(),
            mismatches.join(", "),
        );
        report.check(
            format!("touch-bound n={n}"),
            !over_bound && space.is_zeroed(),
            "",
        );
    }
    Ok(())
}

fn adversarial_checks(plan: &Plan, report: &mut VerifyReport) -> Result<()> {
    let n = *plan.chain_sizes.iter().max().unwrap_or(&1);
    let side = (n as f64).cbrt().ceil() as i32;
    let cases: [(&str, Vec<Bead>); 4] = [
        ("empty", Vec::new()),
        ("coincident", vec![Bead::new(1, -1, 2); n]),
        // spaced two apart: neither collisions nor contacts
        (
            "distinct-sparse",
            (0..n as i32)
                .map(|i| Bead::new(2 * (i % side) - side, 2 * ((i / side) % side) - side, 2 * (i / (side * side)) - side))
                .collect(),
        ),
        // filled cube block: every axial neighbor is a contact
        (
            "distinct-block",
            (0..n as i32)
                .map(|i| Bead::new(i % side, (i / side) % side, i / (side * side)))
                .collect(),
        ),
    ];
    for (name, beads) in cases {
        let extent = beads.iter().map(Bead::max_abs).max().unwrap_or(0);
        let mut space = LatticeSpace::new(extent)?;
        let c = space.count_collisions(&beads)?;
        space.reset_sparse(&beads);
        let k = space.count_contacts(&beads)?;
        space.reset_sparse(&beads);
        let ok = c.count == oracle_collisions(&beads) && k.count == oracle_contacts(&beads);
        report
            .records
            .push(BenchRecord::new(EXP, format!("collisions/{name}"), beads.len(), 0).value(c.count));
        report
            .records
            .push(BenchRecord::new(EXP, format!("contacts/{name}"), beads.len(), 0).value(k.count));
        report.check(format!("adversarial {name}"), ok, "");
    }
    Ok(())
}

/// True when the schedule for `n` emits every unordered pair exactly once.
pub fn covers_all_pairs_once(n: usize) -> bool {
    let Ok(schedule) = PairSchedule::new(n) else {
        return false;
    };
    let mut seen = vec![false; n * n];
    let mut count = 0;
    for (i, j) in schedule.pairs() {
        let (a, b) = (i.min(j), i.max(j));
        if a == b || seen[a * n + b] {
            return false;
        }
        seen[a * n + b] = true;
        count += 1;
    }
    count == n * (n - 1) / 2
}

/// Walks steps `1..` for every index of an odd ring without the stopping
/// rule and returns the first step that revisits a pair.
pub fn first_duplicate_step(n: usize) -> Option<usize> {
    let mut seen = vec![false; n * n];
    for s in 1..=n {
        for i in 0..n {
            let j = (i + s) % n;
            let (a, b) = (i.min(j), i.max(j));
            if seen[a * n + b] {
                return Some(s);
            }
            seen[a * n + b] = true;
        }
    }
    None
}

fn schedule_checks(plan: &Plan, report: &mut VerifyReport) {
    let failed: Vec<usize> = (1..=plan.schedule_max).filter(|&n| !covers_all_pairs_once(n)).collect();
    report.records.push(
        BenchRecord::new(EXP, "schedule-completeness", plan.schedule_max, 0)
            .value((plan.schedule_max - failed.len()) as u64),
    );
    report.check("schedule-completeness", failed.is_empty(), format!("{failed:?}"));

    let unbalanced: Vec<usize> = (1..=plan.schedule_max)
        .filter(|&n| {
            let s = PairSchedule::new(n).expect("n >= 1");
            let spread = s.max_steps() - s.min_steps();
            let expected = if n % 2 == 0 { 1 } else { 0 };
            spread != expected || s.total_steps() != n * (n - 1) / 2
        })
        .collect();
    report.records.push(
        BenchRecord::new(EXP, "balance", plan.schedule_max, 0)
            .value((plan.schedule_max - unbalanced.len()) as u64),
    );
    report.check("balance", unbalanced.is_empty(), format!("{unbalanced:?}"));

    let loose: Vec<usize> = (3..=plan.violation_max)
        .step_by(2)
        .filter(|&n| first_duplicate_step(n) != Some(n.div_ceil(2)))
        .collect();
    report.records.push(
        BenchRecord::new(EXP, "violation-tightness", plan.violation_max, 0)
            .value(((plan.violation_max - 1) / 2 - loose.len()) as u64),
    );
    report.check("violation-tightness", loose.is_empty(), format!("{loose:?}"));
}

fn spi_checks(plan: &Plan, seed: u64, report: &mut VerifyReport) -> Result<()> {
    for &n in &plan.spi_sizes {
        let spheres = verify_sphere_batch(seed, n, SPI_BOX_EDGE)?;
        let standard = spi_standard(&spheres, collision_indicator)?;
        let balanced = spi_balanced(&spheres, collision_indicator)?;
        let mut agree = standard.total == balanced.total;
        for workers in WORKERS {
            for schedule in Schedule::ALL {
                let par = spi_parallel(&spheres, collision_indicator, workers, schedule)?;
                agree &= par.total == standard.total;
            }
        }
        let pairs = (n * n.saturating_sub(1) / 2) as u64;
        let work = standard.pairs_evaluated == pairs && balanced.pairs_evaluated == pairs;
        report.records.push(BenchRecord::new(EXP, "spi-equivalence", n, 0).value(standard.total));
        report.check(format!("spi-equivalence n={n}"), agree && work, "");
        if n >= 3 {
            let expected = (n as u64 - 1).div_ceil(2);
            let ok = balanced.depth_per_worker == expected
                && standard.depth_per_worker == n as u64 - 1
                && expected < standard.depth_per_worker;
            report.records.push(BenchRecord::new(EXP, "depth/balanced", n, 0).value(balanced.depth_per_worker));
            report.check(format!("depth n={n}"), ok, "");
        }
    }
    Ok(())
}
