use num_traits::Zero;
use orbifrob::algebra::Q;
use orbifrob::hurwitz::{hurwitz_bruteforce_oracle, list_partitions, oracle_grid, BranchData, HurwitzCache, HurwitzEngine, HurwitzQuery, Partition};
use proptest::prelude::*;

fn profile(d: u32) -> impl Strategy<Value = Partition> {
    let all = list_partitions(d);
    (0..all.len()).prop_map(move |i| all[i].clone())
}

/// Degree, up to three profiles of that degree, and connectedness.
fn query(max_d: u32, base_genus: u32) -> impl Strategy<Value = HurwitzQuery> {
    (1..=max_d, any::<bool>()).prop_flat_map(move |(d, connected)| (Just(d), prop::collection::vec(profile(d), 0..=3), Just(connected))).prop_map(
        move |(d, profiles, connected)| {
            let data = BranchData::new(d, profiles).unwrap();
            let mut q = HurwitzQuery::new(base_genus, 0, data, connected);
            q.genus = q.riemann_hurwitz_genus().unwrap_or(0);
            q
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn formula_matches_permutation_count(q in query(5, 0)) {
        let engine = HurwitzEngine::new(None);
        prop_assert_eq!(engine.hurwitz_number(&q).unwrap(), hurwitz_bruteforce_oracle(&q).unwrap());
    }

    #[test]
    fn formula_matches_on_the_torus(q in query(4, 1)) {
        let engine = HurwitzEngine::new(None);
        prop_assert_eq!(engine.hurwitz_number(&q).unwrap(), hurwitz_bruteforce_oracle(&q).unwrap());
    }

    #[test]
    fn profile_order_and_trivial_profiles_do_not_matter(q in query(6, 0), extra in any::<bool>()) {
        let engine = HurwitzEngine::new(None);
        let mut r = q.clone();
        r.data.profiles.reverse();
        if extra {
            r.data.profiles.push(Partition::ones(q.data.degree));
        }
        prop_assert_eq!(engine.hurwitz_number(&q).unwrap(), engine.hurwitz_number(&r).unwrap());
    }

    #[test]
    fn connected_covers_are_a_subset(q in query(6, 0)) {
        let engine = HurwitzEngine::new(None);
        let mut all = q.clone();
        all.connected = false;
        let mut conn = q;
        conn.connected = true;
        let (a, c) = (engine.hurwitz_number(&all).unwrap(), engine.hurwitz_number(&conn).unwrap());
        prop_assert!(c >= Q::zero());
        prop_assert!(a >= c);
    }
}

#[test]
fn grid_covers_every_multiset() {
    // degree 2: {}, {(2)}, {(2),(2)}, {(2),(2),(2)}, of which the odd ones fail parity
    let g = oracle_grid(0, 2, 3, true);
    assert_eq!(g.iter().filter(|q| q.data.degree == 2).count(), 2);
    assert!(g.iter().all(|q| q.riemann_hurwitz_genus() == Some(q.genus)));
}

#[test]
fn cached_values_survive_a_restart() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.jsonl");
    let q = HurwitzQuery::new(0, 0, BranchData::parse(4, "(4);(4)").unwrap(), true);
    let first = HurwitzEngine::with_cache_path(&path).hurwitz_number(&q).unwrap();
    let cache = HurwitzCache::open(path.clone());
    assert_eq!(cache.get(&q), Some(first.clone()));
    assert_eq!(HurwitzEngine::with_cache_path(&path).hurwitz_number(&q).unwrap(), first);
}
