use std::collections::BTreeSet;
use std::time::Instant;

use greyscale_contrast::enchained::{
    is_enchained_set, mes, mes_with, scale_set, MesOptions, Sweep,
};
use greyscale_contrast::Rational;

fn parse_all(list: &str) -> Vec<Rational> {
    list.split(',').map(|s| s.trim().parse().unwrap()).collect()
}

const F5: &str = "0, 1/5, 1/4, 4/15, 3/10, 1/3, 7/20, 11/30, 3/8, 2/5, 7/15, 19/40, 1/2, \
                  21/40, 8/15, 3/5, 5/8, 19/30, 13/20, 2/3, 7/10, 11/15, 3/4, 4/5, 1";

#[test]
fn f5_matches_known_list() {
    assert_eq!(mes(5).unwrap().values, parse_all(F5));
}

#[test]
fn f6_cardinality_and_prefix() {
    let start = Instant::now();
    let f = mes(6).unwrap();
    assert!(start.elapsed().as_secs() < 60);
    assert_eq!(f.cardinality(), 145);
    let prefix = parse_all("0, 1/6, 1/5, 5/24, 2/9, 1/4, 7/27, 19/72, 4/15, 5/18");
    assert_eq!(&f.values[..prefix.len()], &prefix[..]);
}

#[test]
fn sweeps_agree_through_six() {
    for k in 2..=6 {
        let lit = mes_with(
            k,
            &MesOptions {
                sweep: Sweep::Literal,
                ..Default::default()
            },
        )
        .unwrap();
        let inc = mes(k).unwrap();
        assert_eq!(lit.values, inc.values, "k = {k}");
        assert_eq!(lit.support, inc.support, "k = {k}");
    }
}

#[test]
fn jobs_do_not_change_output() {
    let one = mes(5).unwrap();
    let four = mes_with(
        5,
        &MesOptions {
            jobs: 4,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(one, four);
}

#[test]
fn symmetric_and_contains_scale() {
    for k in 2..=6 {
        let f = mes(k).unwrap();
        for y in &f.values {
            assert!(f.contains(&y.complement()), "k = {k}, y = {y}");
        }
        for y in scale_set(k) {
            assert!(f.contains(&y));
        }
    }
}

#[test]
fn strata_are_symmetric_and_increasing() {
    for k in 2..=5 {
        let f = mes_with(
            k,
            &MesOptions {
                strata: true,
                ..Default::default()
            },
        )
        .unwrap();
        let strata = f.strata.clone().unwrap();
        let union: BTreeSet<Rational> = strata.iter().flatten().cloned().collect();
        assert_eq!(union.into_iter().collect::<Vec<_>>(), f.values);
        for layer in &strata {
            let set: BTreeSet<&Rational> = layer.iter().collect();
            assert!(layer.iter().all(|y| set.contains(&y.complement())));
        }
        let minima = f.stratum_minima().unwrap();
        assert!(
            minima.windows(2).all(|w| w[0] < w[1]),
            "k = {k}: {minima:?}"
        );
    }
}

#[test]
fn computed_sets_pass_the_check() {
    for k in 2..=5 {
        let f: BTreeSet<Rational> = mes(k).unwrap().values.into_iter().collect();
        let check = is_enchained_set(&f, k).unwrap();
        assert!(check.ok, "k = {k}: {:?}", check.violations);
    }
}

/// Any extra value must either break the definition or be unsupported: maximality.
#[test]
fn adding_a_value_breaks_enchainment() {
    for k in 2..=4 {
        let f: BTreeSet<Rational> = mes(k).unwrap().values.into_iter().collect();
        for q in 2..=40 {
            for p in 1..q {
                let y = Rational::frac(p, q);
                if f.contains(&y) {
                    continue;
                }
                let mut bigger = f.clone();
                bigger.insert(y.clone());
                assert!(
                    !is_enchained_set(&bigger, k).unwrap().ok,
                    "k = {k}, y = {y}"
                );
            }
        }
    }
}

/// Loop guard finding: whether a pass ever lowers support steps without adding values.
#[test]
fn loop_guard_report() {
    for k in 2..=6 {
        let lit = mes_with(
            k,
            &MesOptions {
                sweep: Sweep::Literal,
                ..Default::default()
            },
        )
        .unwrap();
        println!(
            "k = {k}: passes {:?}, guard diverged: {}",
            lit.passes,
            lit.guard_diverged()
        );
    }
}

#[test]
fn f7_cardinality() {
    let start = Instant::now();
    let f = mes(7).unwrap();
    println!("F_7 in {:?}", start.elapsed());
    assert_eq!(f.cardinality(), 19027);
    let prefix = parse_all("0, 1/7, 1/6, 6/35, 5/28, 4/21, 1/5, 17/84, 23/112, 13/63");
    assert_eq!(&f.values[..prefix.len()], &prefix[..]);
}

#[test]
fn literal_sweep_at_seven() {
    let start = Instant::now();
    let lit = mes_with(
        7,
        &MesOptions {
            sweep: Sweep::Literal,
            ..Default::default()
        },
    )
    .unwrap();
    println!(
        "literal F_7 in {:?}, passes {:?}",
        start.elapsed(),
        lit.passes
    );
    assert_eq!(lit.cardinality(), 19027);
    assert!(!lit.guard_diverged());
    assert_eq!(lit.support, mes(7).unwrap().support);
}
