//! Summary statistics over raw benchmark rows.
//!
//! Rows are grouped by (experiment, algorithm, n) in input order. Error bars are four sample
//! standard deviations wide.

use std::collections::HashMap;
use std::io::Write;

use crate::error::Result;
use crate::record::BenchRecord;

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub experiment: String,
    pub algorithm: String,
    pub n: usize,
    pub samples: usize,
    pub mean_ns: f64,
    pub std_ns: f64,
    /// Mean time of the matching baseline divided by this mean, where a
    /// baseline exists (oracle for lattice rows, standard for balanced SPI).
    pub speedup: Option<f64>,
}

impl Summary {
    pub fn error_bar_ns(&self) -> f64 {
        4.0 * self.std_ns
    }
}

fn mean_std(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn timed<'a>(
    records: &'a [BenchRecord],
    experiment: &'a str,
    algorithm: &'a str,
) -> impl Iterator<Item = &'a BenchRecord> + 'a {
    records
        .iter()
        .filter(move |r| r.experiment == experiment && r.algorithm == algorithm && r.wall_ns.is_some())
}

/// Mean wall time of the timed rows matching all three keys.
pub fn mean_wall(records: &[BenchRecord], experiment: &str, algorithm: &str, n: usize) -> Option<f64> {
    let samples: Vec<f64> = timed(records, experiment, algorithm)
        .filter(|r| r.n == n)
        .filter_map(|r| r.wall_ns.map(|w| w as f64))
        .collect();
    (!samples.is_empty()).then(|| mean_std(&samples).0)
}

/// `mean(slow) / mean(fast)` for every `n` where both have timed rows, ascending in `n`.
pub fn speedups(records: &[BenchRecord], experiment: &str, slow: &str, fast: &str) -> Vec<(usize, f64)> {
    let mut sizes: Vec<usize> = timed(records, experiment, fast).map(|r| r.n).collect();
    sizes.sort_unstable();
    sizes.dedup();
    sizes
        .into_iter()
        .filter_map(|n| {
            let s = mean_wall(records, experiment, slow, n)?;
            let f = mean_wall(records, experiment, fast, n)?;
            (f > 0.0).then_some((n, s / f))
        })
        .collect()
}

fn baseline(experiment: &str, algorithm: &str) -> Option<&'static str> {
    match (experiment, algorithm) {
        ("linear-vs-quadratic", "lattice") => Some("oracle"),
        ("spi", "spi/balanced") => Some("spi/standard"),
        _ => None,
    }
}

pub fn summarize(records: &[BenchRecord]) -> Vec<Summary> {
    // groups keep the order in which they first appear in the input
    let mut order: Vec<(String, String, usize)> = Vec::new();
    let mut groups: HashMap<(String, String, usize), Vec<f64>> = HashMap::new();
    for r in records {
        if let Some(w) = r.wall_ns {
            let key = (r.experiment.clone(), r.algorithm.clone(), r.n);
            if !groups.contains_key(&key) {
                order.push(key.clone());
            }
            groups.entry(key).or_default().push(w as f64);
        }
    }
    order
        .into_iter()
        .map(|key| {
            let samples = groups.remove(&key).unwrap_or_default();
            (key, samples)
        })
        .map(|((experiment, algorithm, n), samples)| {
            let (mean_ns, std_ns) = mean_std(&samples);
            let speedup = baseline(&experiment, &algorithm)
                .and_then(|base| mean_wall(records, &experiment, base, n))
                .filter(|_| mean_ns > 0.0)
                .map(|base| base / mean_ns);
            Summary {
                experiment,
                algorithm,
                n,
                samples: samples.len(),
                mean_ns,
                std_ns,
                speedup,
            }
        })
        .collect()
}

pub fn write_summary<W: Write>(out: W, summaries: &[Summary]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "experiment",
        "algorithm",
        "n",
        "samples",
        "mean_ns",
        "std_ns",
        "error_bar_ns",
        "speedup",
    ])?;
    for s in summaries {
        w.write_record([
            s.experiment.clone(),
            s.algorithm.clone(),
            s.n.to_string(),
            s.samples.to_string(),
            format!("{:.1}", s.mean_ns),
            format!("{:.1}", s.std_ns),
            format!("{:.1}", s.error_bar_ns()),
            s.speedup.map(|x| format!("{x:.3}")).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
