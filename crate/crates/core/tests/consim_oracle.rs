#![allow(clippy::needless_range_loop)]

mod common;

use lexsel_core::taxonomy::{ConceptId, TaxonomyStore};
use num_rational::Ratio;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn check_dag(seed: u64, n: usize) -> Result<(), TestCaseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dag = common::random_dag(&mut rng, n);
    let store = TaxonomyStore::load(&dag.to_json("d")).unwrap();
    let dist = dag.up_distances();
    let depth = dag.depths();
    let id = |i: usize| ConceptId::new("d", &dag.names[i]);

    for a in 0..n {
        prop_assert_eq!(
            store.con_sim(&id(a), &id(a)).unwrap(),
            Ratio::from_integer(1)
        );
        for b in 0..n {
            let want = dag.oracle(&dist, &depth, a, b);
            let got = store.least_common_superconcept(&id(a), &id(b)).unwrap();
            prop_assert_eq!(&got.lcs.name, &want.lcs);
            prop_assert_eq!((got.n1, got.n2, got.n3), (want.n1, want.n2, want.n3));

            let sim = store.con_sim(&id(a), &id(b)).unwrap();
            prop_assert_eq!(
                sim,
                Ratio::new(2 * want.n3 as u64, (want.n1 + want.n2 + 2 * want.n3) as u64)
            );
            prop_assert_eq!(sim, store.con_sim(&id(b), &id(a)).unwrap());
            prop_assert!(sim > Ratio::from_integer(0) && sim <= Ratio::from_integer(1));
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lcs_matches_brute_force(seed in any::<u64>(), n in 1usize..=64) {
        check_dag(seed, n)?;
    }

    #[test]
    fn ancestors_are_exactly_the_reachable_nodes(seed in any::<u64>(), n in 1usize..=40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dag = common::random_dag(&mut rng, n);
        let store = TaxonomyStore::load(&dag.to_json("d")).unwrap();
        let dist = dag.up_distances();
        for a in 0..n {
            let got = store.ancestors(&ConceptId::new("d", &dag.names[a])).unwrap();
            let mut want: Vec<(u32, &str)> = (0..n)
                .filter_map(|j| dist[a][j].map(|d| (d, dag.names[j].as_str())))
                .collect();
            want.sort();
            let want: Vec<&str> = want.into_iter().map(|(_, s)| s).collect();
            let got: Vec<&str> = got.iter().map(|c| c.name.as_str()).collect();
            prop_assert_eq!(got, want);
        }
    }

    #[test]
    fn neighborhood_is_sorted_bounded_and_floored(seed in any::<u64>(), n in 2usize..=40, floor in 0.0f64..=1.0, max in 0usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dag = common::random_dag(&mut rng, n);
        let store = TaxonomyStore::load(&dag.to_json("d")).unwrap();
        let c = ConceptId::new("d", &dag.names[n - 1]);
        let hood = store.neighborhood(&c, max, floor).unwrap();
        prop_assert!(hood.len() <= max);
        for w in hood.windows(2) {
            prop_assert!(w[0].1 > w[1].1 || (w[0].1 == w[1].1 && w[0].0.name < w[1].0.name));
        }
        for (k, s) in &hood {
            prop_assert!(k != &c);
            prop_assert!(*s.numer() as f64 / *s.denom() as f64 >= floor);
        }
        let full = store.neighborhood(&c, usize::MAX, floor).unwrap();
        prop_assert_eq!(&full[..hood.len()], &hood[..]);
    }
}

#[test]
fn hand_fixtures() {
    let tree = TaxonomyStore::load(
        r#"{"domains":[{"name":"d","concepts":[
            {"id":"root"},{"id":"A","parents":["root"]},
            {"id":"B","parents":["A"]},{"id":"C","parents":["A"]}]}]}"#,
    )
    .unwrap();
    let d = |n: &str| ConceptId::new("d", n);
    assert_eq!(tree.con_sim(&d("B"), &d("C")).unwrap(), Ratio::new(2, 3));
    assert_eq!(tree.con_sim(&d("root"), &d("B")).unwrap(), Ratio::new(1, 2));
}
