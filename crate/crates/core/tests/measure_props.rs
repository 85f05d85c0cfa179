mod common;

use std::collections::BTreeSet;

use common::*;
use proptest::prelude::*;
use ultrameasure::measures::{measure_distance, sample_r_constant_function};
use ultrameasure::sample::{
    self, random_measure, random_nonexpanding_map, random_radius, random_self_map, random_space,
    ValueGrid,
};
use ultrameasure::ultra::{quotient, sup_distance};
use ultrameasure::{ExtReal, FiniteSubset, Measure, MeasureKind};

fn kind_of(bit: bool) -> MeasureKind {
    if bit {
        MeasureKind::MaxMin
    } else {
        MeasureKind::MaxPlus
    }
}

#[test]
fn threshold_scan_example_matches_random_oracle() {
    let x = abc();
    let mu = Measure::from_labels(
        MeasureKind::MaxMin,
        x.clone(),
        [("a", ExtReal::PosInf), ("c", ExtReal::int(5))],
    )
    .unwrap();
    let nu = Measure::from_labels(
        MeasureKind::MaxMin,
        x.clone(),
        [("b", ExtReal::PosInf), ("c", ExtReal::int(5))],
    )
    .unwrap();
    assert_eq!(probabilistic_distance(&mu, &nu, 200, 1), q(1));
    assert_eq!(measure_distance(&mu, &nu).unwrap(), q(1));
}

#[test]
fn canonicalize_example_is_functionally_faithful() {
    let x = abc();
    let raw = [
        ("a", ExtReal::PosInf),
        ("a", ExtReal::int(3)),
        ("b", ExtReal::NegInf),
    ];
    let m = Measure::from_labels(MeasureKind::MaxMin, x.clone(), raw.clone()).unwrap();
    let atoms: Vec<(usize, ExtReal)> = raw
        .iter()
        .map(|(l, w)| (x.index_of(l).unwrap(), w.clone()))
        .collect();
    let values = oracle_values(atoms.iter().map(|(_, w)| w));
    for phi in all_functions(&x, &[0, 1, 2], &values) {
        assert_eq!(
            m.evaluate(&phi).unwrap(),
            eval_atoms(MeasureKind::MaxMin, &atoms, &phi)
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn canonical_equality_is_functional_equality(seed in any::<u64>(), maxmin in any::<bool>()) {
        let kind = kind_of(maxmin);
        let mut rng = sample::rng(seed);
        let x = random_space(&mut rng, 3);
        let mu = random_measure(&mut rng, kind, &x, 3);
        let nu = if seed % 3 == 0 { mu.clone() } else { random_measure(&mut rng, kind, &x, 3) };
        prop_assert_eq!(mu == nu, functionally_equal(&mu, &nu));
        prop_assert_eq!(mu == nu, measure_distance(&mu, &nu).unwrap() == q(0));
    }

    #[test]
    fn distance_below_r_iff_quotients_agree(seed in any::<u64>(), maxmin in any::<bool>()) {
        let kind = kind_of(maxmin);
        let mut rng = sample::rng(seed);
        let n = rand::Rng::random_range(&mut rng, 1..=6);
        let x = random_space(&mut rng, n);
        let mu = random_measure(&mut rng, kind, &x, 4);
        let nu = random_measure(&mut rng, kind, &x, 4);
        let r = random_radius(&mut rng, &x);
        let (_, qr) = quotient(&x, &r).unwrap();
        let close = measure_distance(&mu, &nu).unwrap() < r;
        prop_assert_eq!(close, mu.pushforward(&qr).unwrap() == nu.pushforward(&qr).unwrap());
    }

    #[test]
    fn measure_distance_is_an_ultrametric(seed in any::<u64>(), maxmin in any::<bool>()) {
        let kind = kind_of(maxmin);
        let mut rng = sample::rng(seed);
        let x = random_space(&mut rng, 5);
        let ms: Vec<Measure> = (0..3).map(|_| random_measure(&mut rng, kind, &x, 4)).collect();
        let d = |i: usize, j: usize| measure_distance(&ms[i], &ms[j]).unwrap();
        prop_assert_eq!(d(0, 1), d(1, 0));
        prop_assert!(d(0, 2) <= d(0, 1).max(d(1, 2)));
        prop_assert!(d(0, 1) <= x.diameter());
    }

    #[test]
    fn dirac_embedding_is_isometric(seed in any::<u64>(), maxmin in any::<bool>()) {
        let kind = kind_of(maxmin);
        let mut rng = sample::rng(seed);
        let x = random_space(&mut rng, 6);
        for i in 0..x.len() {
            for j in 0..x.len() {
                let di = Measure::dirac(kind, x.clone(), i).unwrap();
                let dj = Measure::dirac(kind, x.clone(), j).unwrap();
                prop_assert_eq!(&measure_distance(&di, &dj).unwrap(), x.distance(i, j));
            }
        }
    }

    #[test]
    fn r_constant_functions_cannot_separate_close_measures(seed in any::<u64>(), maxmin in any::<bool>()) {
        let kind = kind_of(maxmin);
        let mut rng = sample::rng(seed);
        let x = random_space(&mut rng, 5);
        let mu = random_measure(&mut rng, kind, &x, 4);
        let nu = random_measure(&mut rng, kind, &x, 4);
        let r = random_radius(&mut rng, &x);
        if measure_distance(&mu, &nu).unwrap() < r {
            for s in 0..20 {
                let phi = sample_r_constant_function(&x, &r, s, &ValueGrid::default()).unwrap();
                prop_assert_eq!(mu.evaluate(&phi).unwrap(), nu.evaluate(&phi).unwrap());
            }
        }
    }

    #[test]
    fn pushforward_is_nonexpanding(seed in any::<u64>(), maxmin in any::<bool>()) {
        let kind = kind_of(maxmin);
        let mut rng = sample::rng(seed);
        let x = random_space(&mut rng, 6);
        let f = random_nonexpanding_map(&mut rng, &x);
        let mu = random_measure(&mut rng, kind, &x, 4);
        let nu = random_measure(&mut rng, kind, &x, 4);
        let before = measure_distance(&mu, &nu).unwrap();
        let after = measure_distance(&mu.pushforward(&f).unwrap(), &nu.pushforward(&f).unwrap()).unwrap();
        prop_assert!(after <= before);
    }

    #[test]
    fn functor_is_locally_nonexpanding(seed in any::<u64>(), maxmin in any::<bool>()) {
        let kind = kind_of(maxmin);
        let mut rng = sample::rng(seed);
        let x = random_space(&mut rng, 6);
        let f = random_self_map(&mut rng, &x);
        let g = random_self_map(&mut rng, &x);
        let mu = random_measure(&mut rng, kind, &x, 4);
        let d = measure_distance(&mu.pushforward(&f).unwrap(), &mu.pushforward(&g).unwrap()).unwrap();
        prop_assert!(d <= sup_distance(&f, &g).unwrap());
    }

    #[test]
    fn set_value_is_monotone_and_normalized(seed in any::<u64>(), maxmin in any::<bool>()) {
        let kind = kind_of(maxmin);
        let mut rng = sample::rng(seed);
        let x = random_space(&mut rng, 5);
        let mu = random_measure(&mut rng, kind, &x, 4);
        prop_assert_eq!(mu.set_value(&mu.support()).unwrap(), kind.unit());
        let small: BTreeSet<usize> = (0..x.len()).filter(|i| (seed >> i) & 1 == 1).collect();
        let mut big = small.clone();
        big.insert((seed as usize) % x.len());
        if !small.is_empty() {
            let a = FiniteSubset::new(x.clone(), small).unwrap();
            let b = FiniteSubset::new(x.clone(), big).unwrap();
            prop_assert!(mu.set_value(&a).unwrap() <= mu.set_value(&b).unwrap());
        }
    }
}
