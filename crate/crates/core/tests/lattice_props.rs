use paircount_core::lattice::{oracle_collisions, oracle_contacts, Bead, LatticeSpace};
use paircount_core::{normal_cloud, random_chain, Seed};
use proptest::prelude::*;

const HALF: i32 = 6;

fn bead(bound: i32) -> impl Strategy<Value = Bead> {
    (-bound..=bound, -bound..=bound, -bound..=bound).prop_map(|(x, y, z)| Bead::new(x, y, z))
}

// Small extent so random clouds actually produce collisions and contacts.
fn cloud() -> impl Strategy<Value = Vec<Bead>> {
    prop::collection::vec(bead(HALF), 0..300)
}

fn counts(beads: &[Bead], half_extent: u32) -> (u64, u64) {
    let mut space = LatticeSpace::new(half_extent).unwrap();
    let collisions = space.count_collisions(beads).unwrap().count;
    space.reset_sparse(beads);
    let contacts = space.count_contacts(beads).unwrap().count;
    (collisions, contacts)
}

proptest! {
    #[test]
    fn lattice_matches_oracle(beads in cloud()) {
        let (collisions, contacts) = counts(&beads, HALF as u32);
        prop_assert_eq!(collisions, oracle_collisions(&beads));
        prop_assert_eq!(contacts, oracle_contacts(&beads));
    }

    #[test]
    fn chains_match_oracle(n in 1usize..400, seed in any::<u64>()) {
        let chain = random_chain(n, Seed(seed)).unwrap();
        let (collisions, contacts) = counts(&chain.beads, chain.half_extent);
        prop_assert_eq!(collisions, oracle_collisions(&chain.beads));
        prop_assert_eq!(contacts, oracle_contacts(&chain.beads));
    }

    #[test]
    fn permutation_invariance(beads in cloud(), seed in any::<u64>()) {
        let mut shuffled = beads.clone();
        // Fisher-Yates driven by a simple LCG; only the permutation matters here
        let mut state = seed | 1;
        for i in (1..shuffled.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (state >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(counts(&beads, HALF as u32), counts(&shuffled, HALF as u32));
    }

    #[test]
    fn translation_invariance(beads in prop::collection::vec(bead(3), 0..200),
                              dx in -3i32..=3, dy in -3i32..=3, dz in -3i32..=3) {
        let moved: Vec<Bead> = beads.iter().map(|b| b.translated(dx, dy, dz)).collect();
        prop_assert_eq!(counts(&beads, HALF as u32), counts(&moved, HALF as u32));
    }

    #[test]
    fn contact_accumulator_is_even(beads in cloud()) {
        let mut space = LatticeSpace::new(HALF as u32).unwrap();
        let report = space.count_contacts(&beads).unwrap();
        prop_assert_eq!(report.accumulator % 2, 0);
        prop_assert_eq!(report.accumulator, 2 * report.count);
    }

    #[test]
    fn sparse_reset_is_sound(first in cloud(), second in cloud()) {
        let mut reused = LatticeSpace::new(HALF as u32).unwrap();
        reused.count_contacts(&first).unwrap();
        let writes = reused.reset_sparse(&first);
        prop_assert!(writes <= first.len());
        prop_assert!(reused.is_zeroed());
        prop_assert!(reused.touched().is_empty());

        let mut fresh = LatticeSpace::new(HALF as u32).unwrap();
        prop_assert_eq!(
            reused.count_contacts(&second).unwrap(),
            fresh.count_contacts(&second).unwrap()
        );
        reused.reset_sparse(&second);
        fresh.reset_sparse(&second);
        reused.count_collisions(&first).unwrap();
        reused.reset_sparse(&first);
        prop_assert_eq!(
            reused.count_collisions(&second).unwrap(),
            fresh.count_collisions(&second).unwrap()
        );
    }

    #[test]
    fn touched_cells_are_bounded(beads in cloud()) {
        let n = beads.len();
        let mut space = LatticeSpace::new(HALF as u32).unwrap();
        let report = space.count_collisions(&beads).unwrap();
        prop_assert!(report.cells_touched <= n);
        prop_assert_eq!(report.beads_processed, n);
        space.reset_sparse(&beads);
        let report = space.count_contacts(&beads).unwrap();
        prop_assert!(report.cells_touched <= 7 * n);
        prop_assert!(space.touched().len() <= n);
    }

    #[test]
    fn touched_list_covers_occupied_cells(beads in prop::collection::vec(bead(2), 0..60)) {
        let mut space = LatticeSpace::new(2).unwrap();
        space.count_collisions(&beads).unwrap();
        let side = space.side();
        let mut listed = vec![false; space.total_cells()];
        for &c in space.touched() {
            listed[c] = true;
        }
        for x in -3i64..=3 {
            for y in -3i64..=3 {
                for z in -3i64..=3 {
                    let occupied = space.occupancy(x, y, z).unwrap() > 0;
                    let flat = (((x + 3) as usize * side) + (y + 3) as usize) * side + (z + 3) as usize;
                    prop_assert!(!occupied || listed[flat]);
                    if x.abs() == 3 || y.abs() == 3 || z.abs() == 3 {
                        prop_assert_eq!(space.occupancy(x, y, z), Some(0));
                    }
                }
            }
        }
    }
}

#[test]
fn chain_of_1000_matches_oracle() {
    let chain = random_chain(1000, Seed(2024)).unwrap();
    let (collisions, contacts) = counts(&chain.beads, chain.half_extent);
    assert_eq!(collisions, oracle_collisions(&chain.beads));
    assert_eq!(contacts, oracle_contacts(&chain.beads));
    // a walk of 999 unit steps has at least 999 contacts, one per step
    assert!(contacts >= 999);
}

#[test]
fn reuse_after_1000_bead_chain_matches_fresh() {
    let a = random_chain(1000, Seed(1)).unwrap();
    let b = random_chain(1000, Seed(2)).unwrap();
    let half = a.half_extent.max(b.half_extent);
    let mut space = LatticeSpace::new(half).unwrap();
    space.count_contacts(&a.beads).unwrap();
    space.reset_sparse(&a.beads);
    let reused = space.count_contacts(&b.beads).unwrap();
    let fresh = LatticeSpace::new(half).unwrap().count_contacts(&b.beads).unwrap();
    assert_eq!(reused, fresh);
}

#[test]
fn normal_clouds_match_oracle_at_both_extremes() {
    for (std_dev, half) in [(5.0, 40), (500.0, 300)] {
        let beads = normal_cloud(1000, std_dev, half, Seed(77)).unwrap();
        let (collisions, contacts) = counts(&beads, half);
        assert_eq!(collisions, oracle_collisions(&beads), "std_dev {std_dev}");
        assert_eq!(contacts, oracle_contacts(&beads), "std_dev {std_dev}");
    }
}

#[test]
fn chain_of_128_contacts() {
    let chain = random_chain(128, Seed(128)).unwrap();
    let mut space = LatticeSpace::new(chain.half_extent).unwrap();
    assert_eq!(
        space.count_contacts(&chain.beads).unwrap().count,
        oracle_contacts(&chain.beads)
    );
}
