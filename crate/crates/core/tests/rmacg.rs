mod common;

use greyscale_contrast::greyscale::contrast_vector;
use greyscale_contrast::rmacg::{
    constructive_f_phi, oracle_rmacg, oracle_rmacg_over, partition_vc, solve_complete_bipartite,
    solve_rmacg, solve_single_opposite, solve_star_subdivision, solve_tree_three,
    IncompleteGreyscale, Method, RmacgError, RmacgMethod,
};
use greyscale_contrast::{Graph, Rational};
use proptest::prelude::*;
use rand::Rng;

fn brute(g: &Graph, inc: &IncompleteGreyscale, q: i64) -> (Vec<Rational>, Vec<Rational>) {
    let (scale, codes) = common::scale_of(&common::grid(q));
    let fixed: Vec<Option<u64>> = (0..g.n())
        .map(|v| inc.tone(v).map(|t| t as u64 * scale))
        .collect();
    let (vec, tones) = common::brute_force(g, scale, &codes, &fixed).unwrap();
    (common::decode(scale, &vec), common::decode(scale, &tones))
}

fn halves(f: &[Rational]) -> usize {
    f.iter().filter(|t| **t == Rational::frac(1, 2)).count()
}

#[test]
fn five_values_suffice_on_small_bipartite_graphs() {
    let mut rng = common::rng(10);
    for _ in 0..40 {
        let n = rng.gen_range(3..=6);
        let g = common::random_connected_bipartite(&mut rng, n);
        let inc = common::random_fixed(&mut rng, &g, None);
        let (vec, _) = brute(&g, &inc, 12);
        let got = oracle_rmacg(&g, &inc).unwrap();
        assert_eq!(
            got.vector.tones(),
            &vec[..],
            "{:?} {:?}",
            g.edges(),
            inc.pairs()
        );
        let (vec5, w5) = {
            let (scale, codes) = common::scale_of(&greyscale_contrast::rmacg::five_values());
            let fixed: Vec<Option<u64>> = (0..g.n())
                .map(|v| inc.tone(v).map(|t| t as u64 * scale))
                .collect();
            let (a, b) = common::brute_force(&g, scale, &codes, &fixed).unwrap();
            (common::decode(scale, &a), common::decode(scale, &b))
        };
        assert_eq!(got.vector.tones(), &vec5[..]);
        assert_eq!(got.witness.tones(), &w5[..]);
    }
}

#[test]
fn complete_bipartite_closed_form() {
    for r in 1..=3 {
        for s in 1..=3 {
            let g = Graph::complete_bipartite(r, s);
            let n = r + s;
            for code in 0..3usize.pow(n as u32) {
                let pairs: Vec<(usize, u8)> = (0..n)
                    .filter_map(|v| match code / 3usize.pow(v as u32) % 3 {
                        0 => None,
                        t => Some((v, t as u8 - 1)),
                    })
                    .collect();
                let Ok(inc) = IncompleteGreyscale::new(&g, &pairs) else {
                    continue;
                };
                let closed = solve_complete_bipartite(r, s, &inc).unwrap();
                let oracle = oracle_rmacg(&g, &inc).unwrap();
                assert_eq!(closed.vector, oracle.vector, "K{r},{s} {pairs:?}");
                assert_eq!(closed.witness, oracle.witness, "K{r},{s} {pairs:?}");
                let tones = closed.vector.tones();
                assert!(
                    tones.iter().all(Rational::is_one)
                        || tones.iter().all(|t| *t == Rational::frac(1, 2))
                );
                assert_eq!(
                    solve_rmacg(&g, &inc, RmacgMethod::Auto).unwrap().vector,
                    oracle.vector
                );
            }
        }
    }
}

#[test]
fn single_opposite_matches_oracle() {
    let mut rng = common::rng(11);
    let mut seen = 0;
    while seen < 40 {
        let n = rng.gen_range(3..=7);
        let g = common::random_connected_bipartite(&mut rng, n);
        let inc = common::random_fixed(&mut rng, &g, None);
        let Ok(r) = solve_single_opposite(&g, &inc) else {
            continue;
        };
        seen += 1;
        let oracle = oracle_rmacg(&g, &inc).unwrap();
        assert_eq!(r.vector, oracle.vector, "{:?} {:?}", g.edges(), inc.pairs());
        assert_eq!(r.vector.first(), Some(&Rational::frac(1, 2)));
        assert!(r
            .witness
            .tones()
            .iter()
            .all(|t| t.is_zero() || t.is_one() || *t == Rational::frac(1, 2)));
    }
}

#[test]
fn trees_with_three_fixed_vertices() {
    let mut rng = common::rng(12);
    for _ in 0..60 {
        let n = rng.gen_range(4..=9);
        let g = common::random_tree(&mut rng, n);
        let inc = common::random_fixed(&mut rng, &g, Some(3));
        let r = solve_tree_three(&g, &inc).unwrap();
        let oracle = oracle_rmacg(&g, &inc).unwrap();
        assert_eq!(r.vector, oracle.vector, "{:?} {:?}", g.edges(), inc.pairs());
        assert!(halves(r.witness.tones()) <= 2);
        if n <= 7 {
            assert_eq!(brute(&g, &inc, 6).0, oracle.vector.tones());
        }
    }
}

#[test]
fn subdivided_stars() {
    let mut rng = common::rng(13);
    for _ in 0..60 {
        let legs = rng.gen_range(3..=4);
        let lens: Vec<usize> = (0..legs).map(|_| rng.gen_range(1..=3)).collect();
        let mut edges = Vec::new();
        let mut leaves = Vec::new();
        let mut next = 1;
        for &len in &lens {
            let mut prev = 0;
            for _ in 0..len {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
            leaves.push(prev);
        }
        let g = Graph::from_edges(next, edges).unwrap();
        let pairs: Vec<(usize, u8)> = leaves.iter().map(|&v| (v, rng.gen_range(0..2u8))).collect();
        let Ok(inc) = IncompleteGreyscale::new(&g, &pairs) else {
            continue;
        };
        let r = solve_star_subdivision(&g, &inc).unwrap();
        let oracle = oracle_rmacg(&g, &inc).unwrap();
        assert_eq!(r.vector, oracle.vector, "{lens:?} {pairs:?}");
        let auto = solve_rmacg(&g, &inc, RmacgMethod::Auto).unwrap();
        assert!(matches!(
            auto.method,
            Method::StarSubdivision | Method::TwoColouring | Method::CompleteBipartite
        ));
        assert_eq!(auto.vector, oracle.vector);
    }
}

#[test]
fn rejects_bad_inputs() {
    let k3 = Graph::complete(3);
    assert_eq!(IncompleteGreyscale::new(&k3, &[(0, 0)]).map(|_| ()), Ok(()));
    let inc = IncompleteGreyscale::new(&k3, &[(0, 0)]).unwrap();
    assert!(matches!(
        oracle_rmacg(&k3, &inc),
        Err(RmacgError::NotBipartite)
    ));
    let p3 = Graph::path(3);
    assert!(IncompleteGreyscale::new(&p3, &[]).is_err());
    assert!(IncompleteGreyscale::new(&p3, &[(0, 0), (1, 1), (2, 0)]).is_err());
    assert!(IncompleteGreyscale::new(&p3, &[(0, 0), (1, 0)]).is_err());
    assert!(IncompleteGreyscale::new(&p3, &[(0, 2)]).is_err());
    assert!(IncompleteGreyscale::new(&p3, &[(5, 0)]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn constructive_is_a_lower_bound(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let n = rng.gen_range(3..=7);
        let g = common::random_connected_bipartite(&mut rng, n);
        let inc = common::random_fixed(&mut rng, &g, None);
        let f = constructive_f_phi(&g, &inc).unwrap();
        for (v, t) in inc.pairs() {
            prop_assert_eq!(f.tone(v), &Rational::from_integer(t as i64));
        }
        let vec = contrast_vector(&g, &f).unwrap();
        let allowed = [Rational::frac(1, 3), Rational::frac(2, 3), Rational::ONE];
        prop_assert!(vec.tones().iter().all(|t| allowed.contains(t)));
        let oracle = oracle_rmacg(&g, &inc).unwrap();
        prop_assert!(vec <= oracle.vector);
        let part = partition_vc(&g, &inc).unwrap();
        prop_assert_eq!(part.match_phi0.len() + part.match_phi1.len(), inc.vc().len());
        let wide = oracle_rmacg_over(&g, &inc, &common::grid(6), None).unwrap();
        prop_assert_eq!(wide.vector, oracle.vector);
    }
}
