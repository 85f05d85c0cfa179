mod common;

use common::*;
use proptest::prelude::*;
use ultrameasure::laws::{all_passed, SampleBudget};
use ultrameasure::measures::measure_distance;
use ultrameasure::sample::{self, random_measure, random_radius, random_space};
use ultrameasure::sympow::{check_kleisli_extension, sympow_distance, theta_weighted, SymPower};
use ultrameasure::tensor::tensor;
use ultrameasure::ultra::{quotient, Product};
use ultrameasure::{
    Budgets, ExtReal, FinUltrametricSpace, Measure, MeasureKind, OrbitPoint, Permutation,
    PermutationGroup, PointMap,
};

fn kind_of(bit: bool) -> MeasureKind {
    if bit {
        MeasureKind::MaxMin
    } else {
        MeasureKind::MaxPlus
    }
}

#[test]
fn projection_consistency_example() {
    let x = abc();
    let kind = MeasureKind::MaxMin;
    let mu = Measure::from_labels(
        kind,
        x.clone(),
        [("a", ExtReal::PosInf), ("b", ExtReal::int(2))],
    )
    .unwrap();
    let nu = Measure::from_labels(
        kind,
        x.clone(),
        [("c", ExtReal::PosInf), ("a", ExtReal::int(-1))],
    )
    .unwrap();
    let (p, t) = tensor(&mu, &nu, &Budgets::default()).unwrap();
    assert_eq!(t.pushforward(&p.projection(0).unwrap()).unwrap(), mu);
    assert_eq!(t.pushforward(&p.projection(1).unwrap()).unwrap(), nu);
    // a max combination would give every first-marginal atom weight +inf
    let max_marginal_b = [ExtReal::PosInf, ExtReal::int(-1)]
        .iter()
        .map(|w| ExtReal::int(2).max(w.clone()))
        .max()
        .unwrap();
    assert_ne!(max_marginal_b, mu.weight(1));
}

#[test]
fn extension_conditions_for_listed_groups() {
    let mut rng = sample::rng(99);
    let groups = [
        PermutationGroup::symmetric(2, 720).unwrap(),
        PermutationGroup::symmetric(3, 720).unwrap(),
        PermutationGroup::generate(3, &[Permutation::from_one_based(&[2, 1, 3]).unwrap()], 720)
            .unwrap(),
    ];
    for g in &groups {
        let x = random_space(&mut rng, 3);
        let report =
            check_kleisli_extension(g, &x, 15, 5, &Budgets::default(), &SampleBudget::default())
                .unwrap();
        assert!(all_passed(&report), "{report:?}");
    }
}

fn product_map(f: &PointMap, g: &PointMap, source: &Product, target: &Product) -> PointMap {
    let assignment = (0..source.space().len())
        .map(|i| {
            let c = source.coords(i);
            target.index_of(&[f.apply(c[0]), g.apply(c[1])])
        })
        .collect();
    PointMap::new(source.space().clone(), target.space().clone(), assignment).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn tensor_is_nonexpanding(seed in any::<u64>(), maxmin in any::<bool>()) {
        let kind = kind_of(maxmin);
        let mut rng = sample::rng(seed);
        let x = random_space(&mut rng, 4);
        let y = random_space(&mut rng, 3);
        let b = Budgets::default();
        let (mu, mu2) = (random_measure(&mut rng, kind, &x, 3), random_measure(&mut rng, kind, &x, 3));
        let (nu, nu2) = (random_measure(&mut rng, kind, &y, 3), random_measure(&mut rng, kind, &y, 3));
        let (_, t1) = tensor(&mu, &nu, &b).unwrap();
        let (_, t2) = tensor(&mu2, &nu2, &b).unwrap();
        let bound = measure_distance(&mu, &mu2).unwrap().max(measure_distance(&nu, &nu2).unwrap());
        prop_assert!(measure_distance(&t1, &t2).unwrap() <= bound);
    }

    #[test]
    fn tensor_commutes_with_quotients(seed in any::<u64>(), maxmin in any::<bool>()) {
        let kind = kind_of(maxmin);
        let mut rng = sample::rng(seed);
        let x = random_space(&mut rng, 4);
        let y = random_space(&mut rng, 3);
        let b = Budgets::default();
        let mu = random_measure(&mut rng, kind, &x, 3);
        let nu = random_measure(&mut rng, kind, &y, 3);
        let r = random_radius(&mut rng, &x);
        let (qx, fx) = quotient(&x, &r).unwrap();
        let (qy, fy) = quotient(&y, &r).unwrap();
        let (pxy, t) = tensor(&mu, &nu, &b).unwrap();
        let pq = Product::new(&[qx, qy], 10_000).unwrap();
        let lhs = t.pushforward(&product_map(&fx, &fy, &pxy, &pq)).unwrap();
        let (_, rhs) = tensor(&mu.pushforward(&fx).unwrap(), &nu.pushforward(&fy).unwrap(), &b).unwrap();
        prop_assert_eq!(lhs.weights(), rhs.weights());
    }

    #[test]
    fn marginals_recover_factors(seed in any::<u64>(), maxmin in any::<bool>()) {
        let kind = kind_of(maxmin);
        let mut rng = sample::rng(seed);
        let x = random_space(&mut rng, 4);
        let y = random_space(&mut rng, 4);
        let mu = random_measure(&mut rng, kind, &x, 4);
        let nu = random_measure(&mut rng, kind, &y, 4);
        let (p, t) = tensor(&mu, &nu, &Budgets::default()).unwrap();
        prop_assert_eq!(&t.pushforward(&p.projection(0).unwrap()).unwrap(), &mu);
        prop_assert_eq!(&t.pushforward(&p.projection(1).unwrap()).unwrap(), &nu);
    }

    #[test]
    fn symmetric_powers_are_ultrametric(seed in any::<u64>(), which in 0usize..3) {
        let mut rng = sample::rng(seed);
        let x = random_space(&mut rng, 3);
        let g = match which {
            0 => PermutationGroup::symmetric(2, 720).unwrap(),
            1 => PermutationGroup::symmetric(3, 720).unwrap(),
            _ => PermutationGroup::generate(3, &[Permutation::from_one_based(&[2, 1, 3]).unwrap()], 720).unwrap(),
        };
        let sp = SymPower::new(&x, &g, &Budgets::default()).unwrap();
        let s = sp.space();
        prop_assert!(FinUltrametricSpace::new(s.labels().to_vec(), s.matrix().to_vec()).is_ok());
        prop_assert!(sp.orbit_map().is_nonexpanding());
    }

    #[test]
    fn full_group_distance_is_bottleneck_assignment(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = sample::rng(seed);
        let x = random_space(&mut rng, 5);
        let g = PermutationGroup::symmetric(n, 720).unwrap();
        let tx: Vec<usize> = (0..n).map(|_| rand::Rng::random_range(&mut rng, 0..5)).collect();
        let ty: Vec<usize> = (0..n).map(|_| rand::Rng::random_range(&mut rng, 0..5)).collect();
        let cost: Vec<Vec<_>> = tx.iter().map(|&a| ty.iter().map(|&b| x.distance(a, b).clone()).collect()).collect();
        let d = sympow_distance(&x, &g, &OrbitPoint::new(&g, &tx).unwrap(), &OrbitPoint::new(&g, &ty).unwrap()).unwrap();
        prop_assert_eq!(d, bottleneck_assignment(&cost));
    }

    #[test]
    fn theta_is_representative_independent(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let x = random_space(&mut rng, 3);
        let g = PermutationGroup::symmetric(3, 720).unwrap();
        let sp = SymPower::new(&x, &g, &Budgets::default()).unwrap();
        let ms: Vec<Measure> = (0..3).map(|_| random_measure(&mut rng, MeasureKind::MaxMin, &x, 3)).collect();
        let base = sp.theta(&ms).unwrap();
        for s in g.elements() {
            prop_assert_eq!(&sp.theta(&s.permute(&ms)).unwrap(), &base);
        }
        let w: Vec<_> = ms.iter().map(|m| m.weights().clone()).collect();
        prop_assert_eq!(theta_weighted(&g, &w).unwrap().len(), base.weights().len());
    }
}
