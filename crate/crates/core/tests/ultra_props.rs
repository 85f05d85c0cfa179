mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use ultrameasure::sample::{self, random_radius, random_space};
use ultrameasure::ultra::{hausdorff_distance, quotient, Product};
use ultrameasure::{FinUltrametricSpace, FiniteSubset};

fn revalidate(s: &FinUltrametricSpace) -> bool {
    FinUltrametricSpace::new(s.labels().to_vec(), s.matrix().to_vec()).is_ok()
}

fn subset(space: &std::sync::Arc<FinUltrametricSpace>, mask: u64) -> FiniteSubset {
    let n = space.len();
    let mut members: BTreeSet<usize> = (0..n).filter(|i| (mask >> i) & 1 == 1).collect();
    if members.is_empty() {
        members.insert((mask as usize) % n);
    }
    FiniteSubset::new(space.clone(), members).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ball_partition_is_the_strict_ball_relation(seed in any::<u64>(), n in 1usize..=7) {
        let mut rng = sample::rng(seed);
        let x = random_space(&mut rng, n);
        let r = random_radius(&mut rng, &x);
        let p = x.ball_partition(&r).unwrap();
        for i in 0..n {
            for j in 0..n {
                let same = p.block_of(i) == p.block_of(j);
                prop_assert_eq!(same, *x.distance(i, j) < r);
            }
        }
        let firsts: Vec<usize> = p.blocks().iter().map(|b| b[0]).collect();
        prop_assert!(firsts.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn quotient_is_well_defined_ultrametric_and_nonexpanding(seed in any::<u64>(), n in 1usize..=7) {
        let mut rng = sample::rng(seed);
        let x = random_space(&mut rng, n);
        let r = random_radius(&mut rng, &x);
        let p = x.ball_partition(&r).unwrap();
        for (bi, a) in p.blocks().iter().enumerate() {
            for b in &p.blocks()[bi + 1..] {
                let reps: BTreeSet<_> = a.iter().flat_map(|&u| b.iter().map(move |&v| (u, v)))
                    .map(|(u, v)| x.distance(u, v).clone()).collect();
                prop_assert_eq!(reps.len(), 1);
            }
        }
        let (y, qmap) = quotient(&x, &r).unwrap();
        prop_assert!(revalidate(&y));
        prop_assert!(qmap.is_nonexpanding());
    }

    #[test]
    fn coarsening_is_monotone(seed in any::<u64>(), n in 1usize..=7) {
        let mut rng = sample::rng(seed);
        let x = random_space(&mut rng, n);
        let r1 = random_radius(&mut rng, &x);
        let r2 = random_radius(&mut rng, &x);
        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        let fine = x.ball_partition(&lo).unwrap();
        let coarse = x.ball_partition(&hi).unwrap();
        for block in fine.blocks() {
            let owner = coarse.block_of(block[0]);
            prop_assert!(block.iter().all(|&p| coarse.block_of(p) == owner));
        }
    }

    #[test]
    fn products_are_ultrametric_with_nonexpanding_projections(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let a = random_space(&mut rng, 3);
        let b = random_space(&mut rng, 4);
        let p = Product::new(&[a, b], 10_000).unwrap();
        prop_assert!(revalidate(p.space()));
        for k in 0..2 {
            prop_assert!(p.projection(k).unwrap().is_nonexpanding());
        }
    }

    #[test]
    fn hyperspace_is_ultrametric(seed in any::<u64>(), masks in any::<[u64; 3]>()) {
        let mut rng = sample::rng(seed);
        let x = random_space(&mut rng, 6);
        let [a, b, c] = masks.map(|m| subset(&x, m));
        let ab = hausdorff_distance(&a, &b).unwrap();
        let bc = hausdorff_distance(&b, &c).unwrap();
        let ac = hausdorff_distance(&a, &c).unwrap();
        prop_assert!(ac <= ab.clone().max(bc));
        prop_assert_eq!(ab, hausdorff_distance(&b, &a).unwrap());
    }
}
