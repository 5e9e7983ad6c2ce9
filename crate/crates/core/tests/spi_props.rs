use paircount_core::spi::{
    collision_indicator, partition, spi_balanced, spi_parallel, spi_standard, Schedule,
};
use paircount_core::{random_spheres, Seed};
use proptest::prelude::*;

const WORKERS: [usize; 5] = [1, 2, 3, 7, 8];

// Symmetric integer table f(i, j) = table[min][max].
fn symmetric_table(n: usize, seed: u64) -> Vec<Vec<u64>> {
    let mut state = seed;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 40) % 1000
    };
    let mut t = vec![vec![0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = next();
            t[i][j] = v;
            t[j][i] = v;
        }
    }
    t
}

fn direct_sum(table: &[Vec<u64>]) -> u64 {
    let n = table.len();
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| table[i][j]).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn schedules_agree_on_integer_tables(n in 0usize..120, seed in any::<u64>()) {
        let table = symmetric_table(n, seed);
        let idx: Vec<usize> = (0..n).collect();
        let f = |a: &usize, b: &usize| table[*a][*b];
        let expected = direct_sum(&table);
        let pairs = (n * n.saturating_sub(1) / 2) as u64;

        let standard = spi_standard(&idx, f).unwrap();
        let balanced = spi_balanced(&idx, f).unwrap();
        prop_assert_eq!(standard.total, expected);
        prop_assert_eq!(balanced.total, expected);
        prop_assert_eq!(standard.pairs_evaluated, pairs);
        prop_assert_eq!(balanced.pairs_evaluated, pairs);
        for workers in WORKERS {
            for schedule in Schedule::ALL {
                let par = spi_parallel(&idx, f, workers, schedule).unwrap();
                prop_assert_eq!(par.total, expected);
                prop_assert_eq!(par.pairs_evaluated, pairs);
                prop_assert_eq!(par.partials.iter().sum::<u64>(), par.total);
            }
        }
    }

    #[test]
    fn real_valued_totals_agree_within_tolerance(n in 2usize..200, seed in any::<u64>()) {
        let spheres = random_spheres(n, 5.0, Seed(seed)).unwrap();
        let f = |a: &paircount_core::Sphere, b: &paircount_core::Sphere| 1.0 / (1.0 + a.distance_squared(b));
        let reference = spi_standard(&spheres, f).unwrap().total;
        let pairs = (n * (n - 1) / 2) as f64;
        for workers in WORKERS {
            for schedule in Schedule::ALL {
                let total = spi_parallel(&spheres, f, workers, schedule).unwrap().total;
                prop_assert!((total - reference).abs() <= 1e-12 * pairs * reference.abs().max(1.0));
            }
        }
    }

    #[test]
    fn partition_sizes_differ_by_at_most_one(n in 0usize..10_000, workers in 1usize..64) {
        let blocks = partition(n, workers);
        prop_assert_eq!(blocks.len(), workers);
        prop_assert_eq!(blocks[0].start, 0);
        prop_assert_eq!(blocks[workers - 1].end, n);
        for w in blocks.windows(2) {
            prop_assert_eq!(w[0].end, w[1].start);
        }
        let lens: Vec<usize> = blocks.iter().map(|b| b.len()).collect();
        prop_assert!(lens.iter().max().unwrap() - lens.iter().min().unwrap() <= 1);
    }
}

#[test]
fn depth_is_halved() {
    for n in 3..300usize {
        let idx: Vec<usize> = (0..n).collect();
        let one = |_: &usize, _: &usize| 1u64;
        let standard = spi_standard(&idx, one).unwrap();
        let balanced = spi_balanced(&idx, one).unwrap();
        assert_eq!(standard.depth_per_worker, n as u64 - 1);
        assert_eq!(balanced.depth_per_worker, (n as u64 - 1).div_ceil(2));
        assert!(balanced.depth_per_worker < standard.depth_per_worker);
        let per_index = spi_parallel(&idx, one, n, Schedule::Balanced).unwrap();
        assert_eq!(
            *per_index.worker_iterations.iter().max().unwrap(),
            balanced.depth_per_worker
        );
    }
}

#[test]
fn odd_balanced_equal_blocks_do_equal_work() {
    let n = 7 * 9 * 11;
    let idx: Vec<usize> = (0..n).collect();
    for workers in [7, 9, 11, 21] {
        let r = spi_parallel(&idx, |_: &usize, _: &usize| 1u64, workers, Schedule::Balanced).unwrap();
        assert_eq!(r.iteration_spread(), 0, "workers {workers}");
        let s = spi_parallel(&idx, |_: &usize, _: &usize| 1u64, workers, Schedule::Standard).unwrap();
        assert!(s.iteration_spread() > 0);
    }
}

#[test]
fn sparse_and_dense_sphere_sets() {
    let sparse = random_spheres(100, 1e6, Seed(4)).unwrap();
    let a = spi_standard(&sparse, collision_indicator).unwrap();
    let b = spi_balanced(&sparse, collision_indicator).unwrap();
    assert_eq!(a.total, 0);
    assert_eq!(a.total, b.total);

    let dense = random_spheres(50, 1.0, Seed(4)).unwrap();
    let reference = spi_standard(&dense, collision_indicator).unwrap().total;
    assert!(reference > 0);
    for workers in WORKERS {
        for schedule in Schedule::ALL {
            let r = spi_parallel(&dense, collision_indicator, workers, schedule).unwrap();
            assert_eq!(r.total, reference);
        }
    }
}

#[test]
fn repeated_runs_are_identical() {
    let spheres = random_spheres(600, 8.0, Seed(9)).unwrap();
    let f = |a: &paircount_core::Sphere, b: &paircount_core::Sphere| a.distance_squared(b).sqrt();
    let first = spi_parallel(&spheres, f, 3, Schedule::Balanced).unwrap();
    for _ in 0..3 {
        let again = spi_parallel(&spheres, f, 3, Schedule::Balanced).unwrap();
        assert_eq!(first.total.to_bits(), again.total.to_bits());
    }
}
