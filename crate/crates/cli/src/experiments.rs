//! The four benchmark experiments.
//!
//! Each experiment checks the counts it times against an independent route
//! before a row is recorded; a disagreement aborts the run with
//! [`CliError::Mismatch`]. Trend expectations (speedup growing with `n`,
//! fewer reallocations being faster, wider clouds being slower) are only
//! reported as warnings.

use std::time::Instant;

use paircount_core::lattice::total_cells_for;
use paircount_core::{
    collision_indicator, oracle_collisions, random_chain, random_spheres, spi_parallel,
    spi_standard, Bead, ManagedSpace, PairSchedule, Seed, Sphere,
};

use crate::config::{BenchConfig, Experiment};
use crate::error::{CliError, Result};
use crate::record::BenchRecord;
use crate::stats;

#[derive(Debug, Default)]
pub struct RunOutput {
    pub records: Vec<BenchRecord>,
    pub warnings: Vec<String>,
}

pub fn run(config: &BenchConfig) -> Result<RunOutput> {
    match config.experiment {
        Experiment::LinearVsQuadratic => run_linear_vs_quadratic(config),
        Experiment::Realloc => run_realloc_sweep(config),
        Experiment::Locality => run_locality_sweep(config),
        Experiment::Spi => run_spi_compare(config),
    }
}

fn batch_seed(seed: u64, n: usize, rep: u32, item: usize) -> Seed {
    Seed(seed).derive(((n as u64) << 40) ^ (u64::from(rep) << 24) ^ item as u64)
}

fn chain_batch(config: &BenchConfig, n: usize, rep: u32) -> Result<(Vec<Vec<Bead>>, u32)> {
    let mut reached = 0;
    let mut beads = Vec::with_capacity(config.vectors);
    for v in 0..config.vectors {
        let chain = random_chain(n, batch_seed(config.seed, n, rep, v))?;
        reached = reached.max(chain.half_extent);
        beads.push(chain.beads);
    }
    Ok((beads, reached))
}

fn elapsed_ns(start: Instant) -> u64 {
    u64::try_from(start.elapsed().as_nanos()).unwrap_or(u64::MAX)
}

struct LatticeRun {
    wall_ns: u64,
    counts: Vec<u64>,
    cells_touched: u64,
    space_cells: u64,
}

// Times allocation plus counting of every vector, as one execution.
fn time_lattice(vectors: &[Vec<Bead>], half_extent: u32, realloc_every: u64) -> Result<LatticeRun> {
    let start = Instant::now();
    let mut space = ManagedSpace::new(half_extent, realloc_every)?;
    let mut counts = Vec::with_capacity(vectors.len());
    let mut cells_touched = 0;
    for beads in vectors {
        let report = space.count_collisions(beads)?;
        counts.push(report.count);
        cells_touched += report.cells_touched as u64;
    }
    let wall_ns = elapsed_ns(start);
    Ok(LatticeRun {
        wall_ns,
        counts,
        cells_touched,
        space_cells: space.total_cells() as u64,
    })
}

fn time_oracle(vectors: &[Vec<Bead>]) -> (u64, Vec<u64>) {
    let start = Instant::now();
    let counts: Vec<u64> = vectors.iter().map(|b| oracle_collisions(b)).collect();
    (elapsed_ns(start), counts)
}

fn is_resource_failure(e: &CliError) -> bool {
    matches!(
        e,
        CliError::Core(
            paircount_core::Error::SpaceTooLarge { .. } | paircount_core::Error::AllocationFailed { .. }
        )
    )
}

fn lattice_row(
    experiment: &str,
    algorithm: String,
    n: usize,
    rep: u32,
    half_extent: u32,
    run: Result<LatticeRun>,
) -> Result<(BenchRecord, Option<LatticeRun>)> {
    let row = BenchRecord::new(experiment, algorithm, n, rep);
    match run {
        Ok(run) => {
            let row = row
                .timed(run.wall_ns)
                .value(run.counts.iter().sum())
                .cells(run.cells_touched, run.space_cells);
            Ok((row, Some(run)))
        }
        Err(e) if is_resource_failure(&e) => {
            let cells = total_cells_for(half_extent).map_or(0, |c| c as u64);
            Ok((row.skipped(e.to_string()).cells(0, cells), None))
        }
        Err(e) => Err(e),
    }
}

fn check_counts(what: &str, n: usize, rep: u32, expected: &[u64], actual: &[u64]) -> Result<()> {
    if let Some(v) = (0..expected.len()).find(|&v| expected[v] != actual[v]) {
        return Err(CliError::Mismatch(format!(
            "{what}: n={n} rep={rep} vector {v}: expected {}, got {}",
            expected[v], actual[v]
        )));
    }
    Ok(())
}

/// Lattice counter against the pairwise loop on random chains.
pub fn run_linear_vs_quadratic(config: &BenchConfig) -> Result<RunOutput> {
    config.validate()?;
    const EXP: &str = "linear-vs-quadratic";
    let realloc = config.realloc_every[0];
    let mut out = RunOutput::default();
    for &n in &config.sizes {
        for rep in 0..config.repetitions {
            let (vectors, reached) = chain_batch(config, n, rep)?;
            let a = config.extent.half_extent(n, reached);
            if config.warmup && rep == 0 {
                let _ = time_lattice(&vectors, a, realloc);
                let _ = time_oracle(&vectors);
            }
            let (row, run) = lattice_row(EXP, "lattice".into(), n, rep, a, time_lattice(&vectors, a, realloc))?;
            out.records.push(row);
            let (oracle_ns, expected) = time_oracle(&vectors);
            if let Some(run) = run {
                check_counts(EXP, n, rep, &expected, &run.counts)?;
            }
            out.records.push(
                BenchRecord::new(EXP, "oracle", n, rep)
                    .timed(oracle_ns)
                    .value(expected.iter().sum()),
            );
        }
    }
    let ratios = stats::speedups(&out.records, EXP, "oracle", "lattice");
    for w in ratios.windows(2) {
        if w[1].1 <= w[0].1 {
            out.warnings.push(format!(
                "speedup did not grow from n={} ({:.2}x) to n={} ({:.2}x)",
                w[0].0, w[0].1, w[1].0, w[1].1
            ));
        }
    }
    Ok(out)
}

/// Lattice counting with the space freed and reallocated every K vectors.
pub fn run_realloc_sweep(config: &BenchConfig) -> Result<RunOutput> {
    config.validate()?;
    const EXP: &str = "realloc";
    let mut out = RunOutput::default();
    for &n in &config.sizes {
        for rep in 0..config.repetitions {
            let (vectors, reached) = chain_batch(config, n, rep)?;
            let a = config.extent.half_extent(n, reached);
            let mut reference: Option<Vec<u64>> = None;
            for &k in &config.realloc_every {
                if config.warmup && rep == 0 {
                    let _ = time_lattice(&vectors, a, k);
                }
                let (row, run) = lattice_row(EXP, format!("lattice/K={k}"), n, rep, a, time_lattice(&vectors, a, k))?;
                out.records.push(row);
                let Some(run) = run else { continue };
                match &reference {
                    Some(expected) => check_counts(EXP, n, rep, expected, &run.counts)?,
                    None => {
                        if rep == 0 {
                            let (_, expected) = time_oracle(&vectors);
                            check_counts(EXP, n, rep, &expected, &run.counts)?;
                        }
                        reference = Some(run.counts);
                    }
                }
            }
        }
        let mean = |k: u64| stats::mean_wall(&out.records, EXP, &format!("lattice/K={k}"), n);
        let finite: Vec<u64> = config.realloc_every.iter().copied().filter(|&k| k > 0).collect();
        if let (Some(&lo), Some(&hi)) = (finite.iter().min(), finite.iter().max()) {
            if let (Some(t_lo), Some(t_hi)) = (mean(lo), mean(hi)) {
                if lo < hi && t_hi > t_lo {
                    out.warnings.push(format!(
                        "n={n}: reallocating every {hi} vectors ({t_hi:.0} ns) was slower than every {lo} ({t_lo:.0} ns)"
                    ));
                }
            }
        }
    }
    Ok(out)
}

/// Half-extent used for normal clouds: four deviations of the widest cloud.
pub fn locality_half_extent(std_devs: &[f64]) -> u32 {
    let widest = std_devs.iter().copied().fold(0.0, f64::max);
    ((4.0 * widest).ceil() as u32).clamp(1, 512)
}

/// Lattice counting on normal clouds of increasing spread.
pub fn run_locality_sweep(config: &BenchConfig) -> Result<RunOutput> {
    config.validate()?;
    const EXP: &str = "locality";
    let a = locality_half_extent(&config.std_devs);
    let realloc = config.realloc_every[0];
    let mut out = RunOutput::default();
    for &n in &config.sizes {
        for (si, &sd) in config.std_devs.iter().enumerate() {
            let algorithm = format!("lattice/sd={sd}");
            for rep in 0..config.repetitions {
                let vectors = (0..config.vectors)
                    .map(|v| {
                        let seed = batch_seed(config.seed, n, rep, si * config.vectors + v);
                        paircount_core::normal_cloud(n, sd, a, seed)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if config.warmup && rep == 0 {
                    let _ = time_lattice(&vectors, a, realloc);
                }
                let (row, run) = lattice_row(EXP, algorithm.clone(), n, rep, a, time_lattice(&vectors, a, realloc))?;
                out.records.push(row);
                if let Some(run) = run {
                    let (_, expected) = time_oracle(&vectors);
                    check_counts(EXP, n, rep, &expected, &run.counts)?;
                }
            }
        }
        let first = config.std_devs.first().copied().unwrap_or_default();
        let last = config.std_devs.last().copied().unwrap_or_default();
        let mean = |sd: f64| stats::mean_wall(&out.records, EXP, &format!("lattice/sd={sd}"), n);
        if let (Some(t_first), Some(t_last)) = (mean(first), mean(last)) {
            if first < last && t_last < 0.5 * t_first {
                out.warnings.push(format!(
                    "n={n}: sd={last} ({t_last:.0} ns) ran much faster than sd={first} ({t_first:.0} ns)"
                ));
            }
        }
    }
    Ok(out)
}

/// Triangular against balanced pair schedule on random unit spheres.
pub fn run_spi_compare(config: &BenchConfig) -> Result<RunOutput> {
    config.validate()?;
    const EXP: &str = "spi";
    let schedules = config.schedules();
    let mut out = RunOutput::default();
    for &n in &config.sizes {
        for rep in 0..config.repetitions {
            let vectors = (0..config.vectors)
                .map(|v| random_spheres(n, config.box_edge, batch_seed(config.seed, n, rep, v)))
                .collect::<Result<Vec<Vec<Sphere>>, _>>()?;
            let mut totals = Vec::new();
            for &schedule in &schedules {
                let execute = || -> Result<(u64, u64, u64)> {
                    let start = Instant::now();
                    let mut total = 0;
                    let mut spread = 0;
                    for spheres in &vectors {
                        let r = spi_parallel(spheres, collision_indicator, config.workers, schedule)?;
                        total += r.total;
                        spread = spread.max(r.iteration_spread());
                    }
                    Ok((elapsed_ns(start), total, spread))
                };
                if config.warmup && rep == 0 {
                    execute()?;
                }
                let (wall_ns, total, spread) = execute()?;
                totals.push(total);
                out.records.push(
                    BenchRecord::new(EXP, format!("spi/{schedule}"), n, rep)
                        .timed(wall_ns)
                        .value(total),
                );
                if rep == 0 {
                    out.records.push(
                        BenchRecord::new(EXP, format!("worker-spread/{schedule}"), n, rep).value(spread),
                    );
                }
            }
            if totals.len() == 1 {
                let reference = vectors
                    .iter()
                    .map(|s| spi_standard(s, collision_indicator).map(|r| r.total))
                    .sum::<Result<u64, _>>()?;
                totals.push(reference);
            }
            if totals.windows(2).any(|w| w[0] != w[1]) {
                return Err(CliError::Mismatch(format!(
                    "{EXP}: n={n} rep={rep}: schedule totals differ: {totals:?}"
                )));
            }
        }
        let ring = PairSchedule::new(n)?;
        for schedule in paircount_core::Schedule::ALL {
            out.records.push(
                BenchRecord::new(EXP, format!("depth/{schedule}"), n, 0).value(schedule.depth(n)),
            );
        }
        out.records.push(
            BenchRecord::new(EXP, "step-spread/balanced", n, 0)
                .value((ring.max_steps() - ring.min_steps()) as u64),
        );
    }
    Ok(out)
}

// Lets the verify module reuse the chain batching without exposing it.
pub(crate) fn verify_chain_batch(seed: u64, n: usize, count: usize) -> Result<Vec<Vec<Bead>>> {
    (0..count)
        .map(|v| Ok(random_chain(n, batch_seed(seed, n, 0, v))?.beads))
        .collect()
}

pub(crate) fn verify_sphere_batch(seed: u64, n: usize, box_edge: f64) -> Result<Vec<Sphere>> {
    Ok(random_spheres(n, box_edge, batch_seed(seed, n, 0, 0))?)
}
