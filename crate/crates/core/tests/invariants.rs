use contraction_lab::metric::{
    enumerate_grid_spaces, gen_lattice_cloud, random_raw_matrix, DEFAULT_GRID_CEILING,
};
use contraction_lab::num_rational::BigRational;
use contraction_lab::selfmap::prime_period_two_witness;
use contraction_lab::{
    classify_all, fixed_points, gen_euclidean, has_prime_period_two, is_asymptotically_regular,
    membership_oracle, metric_repair, min_constant, orbit, prime_period, validate, ContractionClass,
    FiniteMetricSpace, Norm, RawDistanceMatrix, SelfMap,
};
use proptest::prelude::*;
use proptest::sample::subsequence;

fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

fn raw_matrix() -> impl Strategy<Value = RawDistanceMatrix<f64>> {
    (2usize..8, any::<u64>()).prop_map(|(n, seed)| random_raw_matrix(n, 0.01, 10.0, seed))
}

fn map_on(n: usize) -> impl Strategy<Value = SelfMap> {
    prop::collection::vec(0..n, n).prop_map(|t| SelfMap::new(t).unwrap())
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

/// Exact space with 3..=6 points, a map and a relabeling of it.
fn exact_instance() -> impl Strategy<Value = (FiniteMetricSpace<BigRational>, SelfMap, Vec<usize>)> {
    (3usize..=6, any::<u64>(), 1usize..=3, any::<bool>()).prop_flat_map(|(n, seed, k, linf)| {
        let space = gen_lattice_cloud(k, n, 5, linf, seed);
        (Just(space), map_on(n), permutation(n))
    })
}

fn float_instance() -> impl Strategy<Value = (FiniteMetricSpace<f64>, SelfMap)> {
    (3usize..=7, any::<u64>(), 1usize..=3).prop_flat_map(|(n, seed, k)| {
        (Just(gen_euclidean(k, n, seed, Norm::L2)), map_on(n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn repair_validates_with_no_slack(m in raw_matrix()) {
        let repaired = metric_repair(m).unwrap();
        prop_assert!(validate(repaired.to_raw(), 0.0).is_ok());
    }

    #[test]
    fn repair_is_idempotent(m in raw_matrix()) {
        let once = metric_repair(m).unwrap();
        let twice = metric_repair(once.to_raw()).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn repair_is_pointwise_below_input(m in raw_matrix()) {
        let repaired = metric_repair(m.clone()).unwrap();
        for i in 0..m.len() {
            for j in 0..m.len() {
                prop_assert!(*repaired.dist(i, j) <= *m.get(i, j));
            }
        }
    }

    #[test]
    fn grid_spaces_validate_exactly(n in 3usize..=4, values in subsequence(vec![1i64, 2, 3, 5, 8], 1..=3)) {
        let grid: Vec<BigRational> = values.iter().map(|&v| q(v)).collect();
        for s in enumerate_grid_spaces(n, &grid, DEFAULT_GRID_CEILING).unwrap() {
            prop_assert!(validate(s.to_raw(), 0.0).is_ok());
        }
    }

    #[test]
    fn euclidean_relabeling_keeps_distance_multiset(n in 1usize..8, k in 1usize..4, seed in any::<u64>(), perm_seed in any::<u64>()) {
        let s = gen_euclidean(k, n, seed, Norm::L1);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.rotate_left((perm_seed as usize) % n.max(1));
        let p = s.permuted(&perm);
        prop_assert_eq!(s.distance_multiset(), p.distance_multiset());
        prop_assert!(validate(p.to_raw(), 1e-12).is_ok());
    }

    #[test]
    fn constants_are_relabeling_invariant((s, f, perm) in exact_instance()) {
        let a = classify_all(&s, &f).unwrap();
        let b = classify_all(&s.permuted(&perm), &f.permuted(&perm)).unwrap();
        for class in ContractionClass::ALL {
            prop_assert_eq!(a.constant(class), b.constant(class));
        }
    }

    #[test]
    fn oracle_matches_constant_exactly((s, f, _) in exact_instance(), num in 0i64..40, den in 1i64..20) {
        let gamma = BigRational::new(num.into(), den.into());
        for class in ContractionClass::ALL {
            let (c, _) = min_constant(&s, &f, class).unwrap();
            prop_assert_eq!(membership_oracle(&s, &f, class, &gamma).unwrap(), c.admits(&gamma));
            // At the constant itself the oracle accepts, just below it rejects.
            if let Some(v) = c.finite() {
                prop_assert!(membership_oracle(&s, &f, class, v).unwrap());
                if *v > q(0) {
                    let below = v - BigRational::new(1.into(), 1_000_000.into());
                    prop_assert!(!membership_oracle(&s, &f, class, &below).unwrap());
                }
            }
        }
    }

    #[test]
    fn oracle_matches_constant_in_floats((s, f) in float_instance(), j in 0u32..20) {
        let gamma = j as f64 / 10.0;
        for class in ContractionClass::ALL {
            let (c, _) = min_constant(&s, &f, class).unwrap();
            prop_assert_eq!(membership_oracle(&s, &f, class, &gamma).unwrap(), c.admits(&gamma));
        }
    }

    #[test]
    fn argmax_is_distinct_and_attains_the_constant((s, f, _) in exact_instance()) {
        for class in ContractionClass::ALL {
            let (c, t) = min_constant(&s, &f, class).unwrap();
            prop_assert_eq!(t.len(), class.arity());
            for a in 0..t.len() {
                for b in a + 1..t.len() {
                    prop_assert_ne!(t[a], t[b]);
                }
            }
            let (lhs, rhs) = class.terms(&s, &f, &t);
            prop_assert_eq!(contraction_lab::ratio(&lhs, &rhs), c);
        }
    }

    #[test]
    fn terms_are_symmetric_in_the_tuple((s, f, _) in exact_instance()) {
        for class in ContractionClass::ALL {
            let base: Vec<usize> = (0..class.arity()).collect();
            let mut shuffled = base.clone();
            shuffled.reverse();
            prop_assert_eq!(class.terms(&s, &f, &base), class.terms(&s, &f, &shuffled));
        }
    }

    #[test]
    fn period_one_iff_fixed(f in (1usize..8).prop_flat_map(map_on)) {
        let fixed = fixed_points(&f);
        for i in 0..f.len() {
            prop_assert_eq!(prime_period(&f, i) == Some(1), fixed.contains(&i));
        }
    }

    #[test]
    fn period_two_flag_matches_periods(f in (1usize..8).prop_flat_map(map_on)) {
        let any_two = (0..f.len()).any(|i| prime_period(&f, i) == Some(2));
        prop_assert_eq!(has_prime_period_two(&f), any_two);
        if let Some(w) = prime_period_two_witness(&f) {
            prop_assert_eq!(Some(w), (0..f.len()).find(|&i| prime_period(&f, i) == Some(2)));
        }
    }

    #[test]
    fn regular_maps_have_no_cycles(f in (1usize..8).prop_flat_map(map_on)) {
        if is_asymptotically_regular(&f) {
            for i in 0..f.len() {
                prop_assert!(matches!(prime_period(&f, i), None | Some(1)));
            }
        }
    }

    #[test]
    fn orbit_shape(f in (1usize..8).prop_flat_map(map_on), start_seed in any::<usize>()) {
        let n = f.len();
        let o = orbit(&f, start_seed % n);
        prop_assert!(!o.cycle.is_empty());
        prop_assert!(o.tail.len() + o.cycle.len() <= n);
        if let Some(&last) = o.tail.last() {
            prop_assert_eq!(f.apply(last), o.cycle[0]);
        }
        for w in o.cycle.windows(2) {
            prop_assert_eq!(f.apply(w[0]), w[1]);
        }
        prop_assert_eq!(f.apply(*o.cycle.last().unwrap()), o.cycle[0]);
        let mut all: Vec<usize> = o.tail.iter().chain(&o.cycle).copied().collect();
        all.sort_unstable();
        all.dedup();
        prop_assert_eq!(all.len(), o.tail.len() + o.cycle.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn float_constants_track_exact_ones((s, f, _) in exact_instance()) {
        let fs = s.to_f64();
        for class in ContractionClass::ALL {
            let (exact, _) = min_constant(&s, &f, class).unwrap();
            let (float, _) = min_constant(&fs, &f, class).unwrap();
            match (exact.finite(), float.finite()) {
                (Some(e), Some(x)) => {
                    let e = contraction_lab::Scalar::to_f64(e);
                    prop_assert!((e - x).abs() <= 1e-9 * e.abs().max(1.0), "{class:?}: {e} vs {x}");
                }
                (None, None) => {}
                (e, x) => prop_assert!(false, "{class:?}: finiteness differs, {e:?} vs {x:?}"),
            }
        }
    }
}
