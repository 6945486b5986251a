use catlab_core::caterpillar::{sample_direct, Caterpillar, RngSeed};
use catlab_core::indices::{self, IndexKind};
use catlab_core::oracle::{self, for_each_composition};
use catlab_core::theory;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;

fn exhaustive_grid(mut check: impl FnMut(&Caterpillar)) {
    for m in 2..=6 {
        for n in 0..=8 {
            for_each_composition(m, n, |parts| {
                check(&Caterpillar::from_counts(parts.to_vec()).unwrap());
            });
        }
    }
}

fn arb_caterpillar(max_m: usize, max_n: u64) -> impl Strategy<Value = Caterpillar> {
    (2..=max_m, 0..=max_n, any::<u64>())
        .prop_map(|(m, n, seed)| sample_direct(m, n, RngSeed::new(seed, 0)).unwrap())
}

#[test]
fn degree_sequence_matches_adjacency() {
    exhaustive_grid(|c| {
        let g = c.to_adjacency();
        let degrees = c.degree_sequence();
        assert_eq!(degrees.len(), g.node_count());
        for (v, &d) in degrees.iter().enumerate() {
            assert_eq!(g.degree(v) as u64, d);
        }
        assert_eq!(degrees.iter().sum::<u64>(), 2 * c.edge_count());
        assert_eq!(g.edge_count() as u64, c.edge_count());
    });
}

#[test]
fn zagreb_is_sum_of_squared_degrees() {
    exhaustive_grid(|c| {
        let direct: u128 = c.degree_sequence().iter().map(|&d| (d as u128).pow(2)).sum();
        assert_eq!(indices::zagreb(c), direct);
    });
}

#[test]
fn randic_unit_matches_edge_sum() {
    exhaustive_grid(|c| {
        assert_eq!(indices::randic_unit(c), oracle::randic_unit_edges(&c.to_adjacency()));
    });
}

#[test]
fn general_randic_matches_edge_sum() {
    exhaustive_grid(|c| {
        let g = c.to_adjacency();
        for alpha in [-0.5, 0.5, 2.0] {
            let edge_sum: f64 = g
                .edges()
                .map(|(u, v)| ((g.degree(u) * g.degree(v)) as f64).powf(alpha))
                .sum();
            let value = indices::randic(c, alpha);
            assert!((value - edge_sum).abs() <= 1e-12 * edge_sum.max(1.0));
        }
    });
}

#[test]
fn distance_indices_match_bfs_on_grid() {
    for m in 2..=5 {
        for n in 0..=6 {
            for_each_composition(m, n, |parts| {
                let c = Caterpillar::from_counts(parts.to_vec()).unwrap();
                let g = c.to_adjacency();
                assert_eq!(indices::wiener(&c), oracle::wiener_bfs(&g).unwrap(), "{parts:?}");
                assert_eq!(indices::hyper_wiener(&c), oracle::hyper_wiener_bfs(&g).unwrap(), "{parts:?}");
            });
        }
    }
}

#[test]
fn distance_indices_match_bfs_on_random_states() {
    let mut rng = RngSeed::new(404, 0).rng();
    for k in 0..100 {
        let m = rng.random_range(2..=50usize);
        let n = rng.random_range(0..=200u64);
        let c = sample_direct(m, n, RngSeed::new(404, k + 1)).unwrap();
        let g = c.to_adjacency();
        assert_eq!(indices::wiener(&c), oracle::wiener_bfs(&g).unwrap());
        assert_eq!(indices::hyper_wiener(&c), oracle::hyper_wiener_bfs(&g).unwrap());
    }
}

#[test]
fn hoover_is_zero_only_for_the_bare_edge() {
    exhaustive_grid(|c| {
        let h = indices::hoover(c);
        assert!((0.0..1.0).contains(&h));
        let regular = c.degree_sequence().windows(2).all(|w| w[0] == w[1]);
        assert_eq!(h == 0.0, regular, "{c:?}");
        assert_eq!(regular, c.m() == 2 && c.n() == 0);
    });
}

proptest! {
    #[test]
    fn gini_is_scale_invariant(
        weights in prop::collection::vec(0.0f64..1000.0, 2..40),
        scale in 1e-3f64..1e3,
    ) {
        prop_assume!(weights.iter().sum::<f64>() > 0.0);
        let scaled: Vec<f64> = weights.iter().map(|w| w * scale).collect();
        let a = indices::gini_functional(&weights).unwrap();
        let b = indices::gini_functional(&scaled).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
        prop_assert!((0.0..1.0).contains(&a));
    }

    #[test]
    fn degree_gini_matches_generic_functional(c in arb_caterpillar(30, 300)) {
        let degrees: Vec<f64> = c.degree_sequence().iter().map(|&d| d as f64).collect();
        let generic = indices::gini_functional(&degrees).unwrap();
        prop_assert!((indices::degree_gini(&c) - generic).abs() < 1e-12);
    }

    #[test]
    fn adding_a_leaf_increases_indices(c in arb_caterpillar(20, 100), pick in any::<prop::sample::Index>()) {
        let i = pick.index(c.m());
        let next = c.with_leaf_at(i);
        prop_assert_eq!(indices::zagreb(&next), indices::zagreb(&c) + 2 * c.spine_degree(i) as u128 + 2);
        prop_assert!(indices::wiener(&next) > indices::wiener(&c));
        prop_assert!(indices::hyper_wiener(&next) > indices::hyper_wiener(&c));
        prop_assert!(indices::randic_unit(&next) > indices::randic_unit(&c));
    }

    #[test]
    fn martingale_residual_vanishes(c in arb_caterpillar(20, 100)) {
        prop_assert!(oracle::martingale_residual(&c).unwrap().is_zero());
    }

    #[test]
    fn randic_is_a_submartingale_with_drift_bound(c in arb_caterpillar(20, 100)) {
        let exact = oracle::conditional_mean(&c, IndexKind::Randic(1.0)).unwrap();
        let current = BigRational::from_integer(BigInt::from(indices::randic_unit(&c)));
        let bound = theory::randic_supermartingale_bound_exact(c.m() as u64, c.n() + 1, &current);
        prop_assert!(exact >= bound);
    }

    #[test]
    fn hoover_within_unit_interval(c in arb_caterpillar(40, 2000)) {
        let h = indices::hoover(&c);
        prop_assert!((0.0..1.0).contains(&h));
    }
}
